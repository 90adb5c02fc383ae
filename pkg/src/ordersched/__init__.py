"""Single-machine order scheduling with family setup times."""
from .exact_k import local_search, solve_exact_k
from .harness import GenConfig, generate, reduce_prec_special, run_bench
from .kernels import BACKEND
from .model import (Family, Instance, Job, Operation, Schedule, evaluate_original, make_instance,
                    parse_instance, serialize_instance, wspt_order)
from .oracle import SearchGuard, brute_force_original, brute_force_os
from .prec import PrecInstance, sidney_schedule, solve_any_k
from .relaxation import GluedInstance, OsSchedule, evaluate_os, glue
from .transform import gen_tightness, transform

__version__ = "0.1.0"
