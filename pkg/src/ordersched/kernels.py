"""Kernel dispatch: compiled extension when importable, pure Python otherwise.

Set ``ORDERSCHED_PURE=1`` to force the Python kernels.  ``BACKEND`` names
the active implementation.
"""
from __future__ import annotations

import os

import numpy as np

from . import _kernels_py as py

try:
    if os.environ.get("ORDERSCHED_PURE", "") not in ("", "0"):
        raise ImportError("pure kernels requested")
    from . import _ckernels as _c
except ImportError:
    _c = None

BACKEND = "cython" if _c is not None else "python"


def _use_c(backend) -> bool:
    name = backend or BACKEND
    if name == "cython":
        if _c is None:
            raise ValueError("compiled kernels are not available")
        return True
    if name != "python":
        raise ValueError(f"unknown backend {name!r}")
    return False


def _f(a):
    return np.ascontiguousarray(a, dtype=np.float64)


def _i(a):
    return np.ascontiguousarray(a, dtype=np.int_)


def original_cost(seq, p, fam, job, setup, weight, backend=None):
    if _use_c(backend):
        return _c.original_cost(_i(seq), _f(p), _i(fam), _i(job), _f(setup), _f(weight))
    return py.original_cost(seq, p, fam, job, setup, weight)


def tau_local_search(p, w, lmin, setup_prefix, backend=None):
    if _use_c(backend):
        return _c.tau_local_search(_f(p), _f(w), _i(lmin), _f(setup_prefix))
    return py.tau_local_search(p, w, lmin, setup_prefix)


def original_dp(p, fam, job, setup, weight, backend=None):
    if _use_c(backend):
        return _c.original_dp(_f(p), _i(fam), _i(job), _f(setup), _f(weight))
    return py.original_dp(p, fam, job, setup, weight)


def prec_dp(p, w, pred_mask, backend=None):
    if _use_c(backend):
        return _c.prec_dp(_f(p), _f(w), _i(pred_mask))
    return py.prec_dp(p, w, pred_mask)


def available_backends():
    return ["python"] + (["cython"] if _c is not None else [])
