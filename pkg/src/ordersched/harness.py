"""Random instances, the precedence reduction and benchmark sweeps."""
from __future__ import annotations

import csv
import io
import logging
import math
import time
from dataclasses import asdict, dataclass, field, fields
from typing import Iterable, Sequence

import numpy as np

from .exact_k import DEFAULT_MAX_K, solve_exact_k
from .model import Family, Instance, Job, Operation, original_cost
from .prec import PrecInstance, PrecNode, solve_os_sidney
from .relaxation import glue
from .transform import transform

log = logging.getLogger(__name__)

DISTRIBUTIONS = {
    # name -> default parameters
    "normal": {"mean": 100.0, "sd": 20.0},
    "lognormal": {"mu": math.log(100.0), "sigma": 0.5},
    "uniform": {"low": 50.0, "high": 150.0},
    "weibull": {"shape": 2.0, "scale": 100.0},
}

CSV_HEADER = ["seed", "n", "K", "beta", "setup_factor", "prob", "alg", "lb_kind",
              "cost", "lower_bound", "ratio", "wall_time_ms"]


class ConfigError(ValueError):
    pass


@dataclass(frozen=True)
class GenConfig:
    n_jobs: int = 1000
    n_families: int = 5
    setup_cost_factor: float = 5.0
    prob_per_family: float = 0.3
    distribution: str = "normal"
    dist_params: dict = field(default_factory=dict, hash=False, compare=False)
    weight_mode: str = "unit"
    weight_range: tuple[float, float] = (1.0, 10.0)
    seed: int = 0

    def __post_init__(self):
        if self.n_jobs < 1:
            raise ConfigError(f"n_jobs must be >= 1, got {self.n_jobs}")
        if self.n_families < 1:
            raise ConfigError(f"n_families must be >= 1, got {self.n_families}")
        if not 0 < self.prob_per_family <= 1:
            raise ConfigError(f"prob_per_family must be in (0, 1], got {self.prob_per_family}")
        if not self.setup_cost_factor >= 0:
            raise ConfigError("setup_cost_factor must be >= 0")
        if self.distribution not in DISTRIBUTIONS:
            raise ConfigError(f"unknown distribution {self.distribution!r}; "
                              f"choose from {sorted(DISTRIBUTIONS)}")
        params = self.params()
        for key in ("sd", "sigma", "scale", "shape"):
            if key in params and not params[key] > 0:
                raise ConfigError(f"{key} must be > 0")
        if self.distribution == "uniform" and not params["high"] > params["low"]:
            raise ConfigError("uniform needs high > low")
        if self.weight_mode not in ("unit", "uniform"):
            raise ConfigError(f"unknown weight_mode {self.weight_mode!r}")
        a, b = self.weight_range
        if self.weight_mode == "uniform" and not 0 <= a <= b:
            raise ConfigError("weight_range must satisfy 0 <= a <= b")

    def params(self) -> dict:
        unknown = set(self.dist_params) - set(DISTRIBUTIONS[self.distribution])
        if unknown:
            raise ConfigError(f"unknown parameters {sorted(unknown)} for {self.distribution}")
        return {**DISTRIBUTIONS[self.distribution], **self.dist_params}

    @classmethod
    def from_dict(cls, doc: dict) -> "GenConfig":
        names = {f.name for f in fields(cls)}
        extra = set(doc) - names
        if extra:
            raise ConfigError(f"unknown config keys {sorted(extra)}")
        doc = dict(doc)
        if "weight_range" in doc:
            doc["weight_range"] = tuple(doc["weight_range"])
        return cls(**doc)


def _draw(rng: np.random.Generator, dist: str, params: dict) -> float:
    # redraw until strictly positive
    while True:
        if dist == "normal":
            x = rng.normal(params["mean"], params["sd"])
        elif dist == "lognormal":
            x = rng.lognormal(params["mu"], params["sigma"])
        elif dist == "uniform":
            x = rng.uniform(params["low"], params["high"])
        else:
            x = params["scale"] * rng.weibull(params["shape"])
        if x > 0:
            return float(x)


def generate(config: GenConfig) -> Instance:
    """Random instance; deterministic in ``config``."""
    rng = np.random.default_rng(config.seed)
    params = config.params()
    K = config.n_families
    raw: list[list[tuple[int, float]]] = []
    for _ in range(config.n_jobs):
        while True:
            ops = [(f, _draw(rng, config.distribution, params))
                   for f in range(K) if rng.random() < config.prob_per_family]
            if ops:
                break
        raw.append(ops)
    if config.weight_mode == "unit":
        weights = [1.0] * config.n_jobs
    else:
        a, b = config.weight_range
        weights = [float(x) for x in rng.uniform(a, b, size=config.n_jobs)]

    totals = [0.0] * K
    counts = [0] * K
    for ops in raw:
        for f, p in ops:
            totals[f] += p
            counts[f] += 1
    families = tuple(Family(f"f{f}", totals[f] / counts[f] * config.setup_cost_factor)
                     for f in range(K) if counts[f])
    jobs = tuple(
        Job(f"j{j}", weights[j], tuple(Operation(f"j{j}.f{f}", f"f{f}", p) for f, p in ops))
        for j, ops in enumerate(raw)
    )
    return Instance(families, jobs)


# --- precedence special case ----------------------------------------------

class ShapeError(ValueError):
    pass


FREE_FAMILY = "free"


def reduce_prec_special(prec: PrecInstance) -> Instance:
    """Order-scheduling instance with the same optimum as a bipartite prec instance.

    Zero-weight unit nodes become families with setup 1, unit-weight zero
    nodes become jobs, and each edge a zero-length operation.  Jobs without
    predecessors get one zero-length operation of a setup-free family.
    """
    kind = {}
    for v in prec.nodes:
        if (v.p, v.w) == (1.0, 0.0):
            kind[v.id] = "setup"
        elif (v.p, v.w) == (0.0, 1.0):
            kind[v.id] = "job"
        else:
            raise ShapeError(f"node {v.id!r} has (p, w) = ({v.p}, {v.w}); "
                             "expected (1, 0) or (0, 1)")
    for u, v in prec.edges:
        if kind[u] != "setup" or kind[v] != "job":
            raise ShapeError(f"edge {u!r} -> {v!r} must go from a (1, 0) node "
                             "to a (0, 1) node")
    families = [Family(v.id, 1.0) for v in prec.nodes if kind[v.id] == "setup"]
    preds = prec.preds()
    jobs = []
    need_free = False
    for v in prec.nodes:
        if kind[v.id] != "job":
            continue
        ops = tuple(Operation(f"{u}->{v.id}", u, 0.0) for u in preds[v.id])
        if not ops:
            need_free = True
            ops = (Operation(f"{FREE_FAMILY}->{v.id}", FREE_FAMILY, 0.0),)
        jobs.append(Job(v.id, 1.0, ops))
    if need_free:
        if any(f.id == FREE_FAMILY for f in families):
            raise ShapeError(f"node id {FREE_FAMILY!r} is reserved")
        families.append(Family(FREE_FAMILY, 0.0))
    return Instance(tuple(families), tuple(jobs))


def random_special_prec(n_setups: int, n_jobs: int, edge_prob: float,
                        rng: np.random.Generator) -> PrecInstance:
    """Random bipartite instance of the (1,0) -> (0,1) special case."""
    nodes = [PrecNode(f"s{i}", 1.0, 0.0) for i in range(n_setups)]
    nodes += [PrecNode(f"j{i}", 0.0, 1.0) for i in range(n_jobs)]
    edges = [(f"s{i}", f"j{k}") for i in range(n_setups) for k in range(n_jobs)
             if rng.random() < edge_prob]
    return PrecInstance(tuple(nodes), tuple(edges))


# --- benchmarks -------------------------------------------------------------

@dataclass
class BenchRow:
    seed: int
    n: int
    K: int
    beta: float
    setup_factor: float
    prob: float
    alg: str
    lb_kind: str
    cost: float
    lower_bound: float
    ratio: float
    wall_time_ms: float

    @property
    def certified(self) -> bool:
        return self.lb_kind == "exact-lb"

    def as_csv(self) -> list:
        return [self.seed, self.n, self.K, repr(self.beta), repr(self.setup_factor),
                repr(self.prob), self.alg, self.lb_kind, repr(self.cost),
                repr(self.lower_bound), repr(self.ratio), f"{self.wall_time_ms:.3f}"]


ALGORITHMS = ("exact-k", "sidney")


def run_bench(configs: Iterable[GenConfig], algorithms: Sequence[str] = ("exact-k",),
              betas: Sequence[float] = (2.0,), seeds: Sequence[int] = (0,),
              max_k: int = DEFAULT_MAX_K) -> list[BenchRow]:
    """Solve the relaxation, batch with each pull factor, compare to the lower bound.

    The lower bound is the exact OS optimum when the family count allows
    it, otherwise the Sidney schedule's OS cost (rows marked ``approx-lb``).
    """
    for alg in algorithms:
        if alg not in ALGORITHMS:
            raise ConfigError(f"unknown algorithm {alg!r}; choose from {ALGORITHMS}")
    for beta in betas:
        if not beta > 0:
            raise ConfigError(f"pull factor must be > 0, got {beta}")
    rows = []
    for base in configs:
        for seed in seeds:
            cfg = GenConfig(**{**asdict(base), "seed": int(seed),
                               "dist_params": base.dist_params})
            instance = generate(cfg)
            glued = glue(instance)
            solved = {}
            exact = len(glued.families) <= max_k
            for alg in algorithms:
                t0 = time.perf_counter()
                if alg == "exact-k":
                    if not exact:
                        log.warning("seed %s: %d families exceed the exact limit; "
                                    "skipping exact-k", seed, len(glued.families))
                        continue
                    solved[alg] = solve_exact_k(glued, max_k=max_k)
                else:
                    solved[alg] = solve_os_sidney(glued)
                solved[alg] = (*solved[alg], time.perf_counter() - t0)
            if exact:
                lb = solved["exact-k"][1] if "exact-k" in solved else \
                    solve_exact_k(glued, max_k=max_k)[1]
                lb_kind = "exact-lb"
            else:
                lb = solved["sidney"][1] if "sidney" in solved else solve_os_sidney(glued)[1]
                lb_kind = "approx-lb"
            if not lb > 0:
                raise ConfigError("lower bound is not positive")
            for beta in betas:
                for alg, (os, _, solve_s) in solved.items():
                    t0 = time.perf_counter()
                    schedule = transform(instance, glued, os, beta)
                    cost = original_cost(instance, schedule.order)
                    wall = (solve_s + time.perf_counter() - t0) * 1000.0
                    rows.append(BenchRow(int(seed), cfg.n_jobs, cfg.n_families, float(beta),
                                         cfg.setup_cost_factor, cfg.prob_per_family, alg,
                                         lb_kind, cost, lb, cost / lb, wall))
    return rows


def rows_to_csv(rows: Iterable[BenchRow]) -> str:
    buf = io.StringIO()
    writer = csv.writer(buf, lineterminator="\n")
    writer.writerow(CSV_HEADER)
    for row in rows:
        writer.writerow(row.as_csv())
    return buf.getvalue()


def load_bench_config(doc: dict):
    """``{"configs": [...], "algorithms": [...], "betas": [...], "seeds": [...]}``."""
    if not isinstance(doc, dict) or "configs" not in doc:
        raise ConfigError("bench config needs a 'configs' list")
    configs = [GenConfig.from_dict(c) for c in doc["configs"]]
    seeds = doc.get("seeds", [0])
    if isinstance(seeds, int):
        seeds = list(range(seeds))
    return dict(configs=configs,
                algorithms=tuple(doc.get("algorithms", ["exact-k"])),
                betas=tuple(float(b) for b in doc.get("betas", [2.0])),
                seeds=tuple(int(s) for s in seeds),
                max_k=int(doc.get("max_k", DEFAULT_MAX_K)))
