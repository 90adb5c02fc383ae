"""Time the compiled kernels against the pure-Python ones.

    python benchmarks/bench_kernels.py --jobs 1000 --families 5 --repeat 3
"""
import argparse
import random
import time

from ordersched import kernels
from ordersched.exact_k import solve_exact_k
from ordersched.harness import GenConfig, generate
from ordersched.model import op_arrays
from ordersched.relaxation import glue


def best_of(fn, repeat):
    times = []
    for _ in range(repeat):
        t0 = time.perf_counter()
        fn()
        times.append(time.perf_counter() - t0)
    return min(times)


def small_dp_inputs(n, seed):
    rnd = random.Random(seed)
    p = [rnd.uniform(1, 5) for _ in range(n)]
    w = [rnd.uniform(0, 3) for _ in range(n)]
    mask = [sum(1 << i for i in range(k) if rnd.random() < 0.2) for k in range(n)]
    return p, w, mask


def main(argv=None):
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--jobs", type=int, default=1000)
    ap.add_argument("--families", type=int, default=5)
    ap.add_argument("--dp-items", type=int, default=14)
    ap.add_argument("--repeat", type=int, default=3)
    ap.add_argument("--seed", type=int, default=0)
    args = ap.parse_args(argv)

    backends = kernels.available_backends()
    if "cython" not in backends:
        print("compiled kernels are not built; only the Python timings are shown")

    inst = generate(GenConfig(n_jobs=args.jobs, n_families=args.families, seed=args.seed))
    glued = glue(inst)
    _, p, fam, job, setup, weight = op_arrays(inst)
    seq = list(range(len(p)))
    random.Random(args.seed).shuffle(seq)
    dp = small_dp_inputs(args.dp_items, args.seed)

    cases = {
        "original_cost": lambda b: kernels.original_cost(seq, p, fam, job, setup, weight, backend=b),
        "solve_exact_k": lambda b: solve_exact_k(glued, backend=b),
        f"prec_dp({args.dp_items})": lambda b: kernels.prec_dp(*dp, backend=b),
    }
    print(f"instance: {inst.n} jobs, {len(p)} operations, {len(glued.families)} families")
    print(f"{'kernel':<18}" + "".join(f"{b:>12}" for b in backends) + "   speedup")
    for name, fn in cases.items():
        got = {b: best_of(lambda: fn(b), args.repeat) for b in backends}
        line = f"{name:<18}" + "".join(f"{got[b] * 1000:>10.1f}ms" for b in backends)
        if len(got) == 2:
            line += f"   {got['python'] / got['cython']:6.1f}x"
        print(line)
    # same answers from both sides
    if len(backends) == 2:
        a = solve_exact_k(glued, backend="cython")[1]
        b = solve_exact_k(glued, backend="python")[1]
        assert abs(a - b) <= 1e-9 * max(1.0, abs(a)), (a, b)


if __name__ == "__main__":
    main()
