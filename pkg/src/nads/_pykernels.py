"""Pure-numpy implementations of the hot kernels.

Same signatures and results as the compiled ``_kernels`` module; used when
the extension is unavailable or ``NADS_PURE_PYTHON=1`` is set.
"""

import numpy as np

TWO_PI = 2.0 * np.pi


def _circle(x):
    t = np.fmod(x, TWO_PI)
    t = np.where(t < 0.0, t + TWO_PI, t)
    return np.where(t >= TWO_PI, 0.0, t)


def _step(op, p, x):
    if op == 0:
        return x
    if op == 1:
        return p * x * (1.0 - x)
    if op == 2:
        return np.where(x <= 0.5, 2.0 * x, 2.0 - 2.0 * x)
    if op == 3:
        return np.full_like(x, p)
    if op == 4:
        return _circle(p * x)
    if op == 5:
        return _circle(x + p)
    if op == 6:
        s = np.sin(0.5 * np.pi * x)
        return s * s
    if op == 7:
        return (2.0 / np.pi) * np.arcsin(np.sqrt(np.clip(x, 0.0, 1.0)))
    if op == 8:
        return p * x
    raise ValueError(f"unknown op {op}")


def iterate(ops, params, ends, x0):
    nsteps = int(np.count_nonzero(ends))
    out = np.empty((nsteps + 1, x0.shape[0]), dtype=np.float64)
    x = np.array(x0, dtype=np.float64)
    out[0] = x
    row = 1
    for op, p, e in zip(ops.tolist(), params.tolist(), ends.tolist()):
        x = _step(op, p, x)
        if e:
            out[row] = x
            row += 1
    return out


def ball_hit_index(traj, group, n_groups, centers, radii, circle):
    steps = traj.shape[0]
    out = np.full((n_groups, centers.shape[0], steps), -1, dtype=np.int64)
    for v in range(centers.shape[0]):
        d = np.abs(traj - centers[v])
        if circle:
            d = np.minimum(d, TWO_PI - d)
        inside = d < radii[v]  # (steps, K)
        for g in range(n_groups):
            cols = np.flatnonzero(group == g)
            if cols.size == 0:
                continue
            sub = inside[:, cols]
            anyhit = sub.any(axis=1)
            first = cols[np.argmax(sub, axis=1)]
            out[g, v] = np.where(anyhit, first, -1)
    return out


def track_pairs(keys_u, keys_v, n, first_hit, last_miss):
    hit = keys_u[:, None] == keys_v[None, :]
    first_hit[hit & (first_hit == 0)] = n
    last_miss[~hit] = n


def pairwise_distance(a, b, circle):
    d = np.abs(a[:, None] - b[None, :])
    if circle:
        d = np.minimum(d, TWO_PI - d)
    return d
