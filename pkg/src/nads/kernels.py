"""Kernel backend selection.

The compiled extension ``nads._kernels`` is used when importable; otherwise
(or with ``NADS_PURE_PYTHON=1``) the numpy implementation in
``nads._pykernels`` takes over. ``BACKEND`` names the active one.
"""

import os

import numpy as np

from nads import _pykernels

if os.environ.get("NADS_PURE_PYTHON", "") not in ("", "0"):
    _impl = _pykernels
    BACKEND = "python"
else:
    try:
        from nads import _kernels as _impl

        BACKEND = "cython"
    except ImportError:  # extension not built
        _impl = _pykernels
        BACKEND = "python"


def iterate(ops: np.ndarray, params: np.ndarray, ends: np.ndarray, x0: np.ndarray) -> np.ndarray:
    return _impl.iterate(ops, params, ends, x0)


def ball_hit_index(traj, group, n_groups, centers, radii, circle) -> np.ndarray:
    return _impl.ball_hit_index(
        np.ascontiguousarray(traj, dtype=np.float64),
        np.ascontiguousarray(group, dtype=np.int64),
        int(n_groups),
        np.ascontiguousarray(centers, dtype=np.float64),
        np.ascontiguousarray(radii, dtype=np.float64),
        bool(circle),
    )


def track_pairs(keys_u, keys_v, n, first_hit, last_miss) -> None:
    """Update ``first_hit`` / ``last_miss`` in place for step ``n``; a pair hits when keys match."""
    _impl.track_pairs(
        np.ascontiguousarray(keys_u, dtype=np.uint64),
        np.ascontiguousarray(keys_v, dtype=np.uint64),
        int(n),
        first_hit,
        last_miss,
    )


def pairwise_distance(a, b, circle: bool = False) -> np.ndarray:
    return _impl.pairwise_distance(
        np.ascontiguousarray(a, dtype=np.float64), np.ascontiguousarray(b, dtype=np.float64), bool(circle)
    )


def use_backend(name: str) -> None:
    """Switch backend at runtime (benchmarks and cross-checking tests)."""
    global _impl, BACKEND
    if name == "python":
        _impl, BACKEND = _pykernels, "python"
    elif name == "cython":
        from nads import _kernels

        _impl, BACKEND = _kernels, "cython"
    else:
        raise ValueError(f"unknown backend {name!r}")
