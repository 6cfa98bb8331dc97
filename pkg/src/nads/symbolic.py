"""Bi-infinite periodic binary sequences and the shift metric.

A :class:`Word` stores one period ``bits`` with ``x_j = bits[j mod len(bits)]``.
Construction canonicalizes to the primitive root at offset zero, so two
words compare equal exactly when their sequences do.

The metric ``rho(x, y) = sum_j |x_j - y_j| / 2^|j|`` is evaluated in closed
form. With ``P = lcm(|x|, |y|)`` and ``d_r`` the disagreement indicator,

    sum_{j>=0}  d_j 2^-j  = 2A / (2^P - 1),   A = sum_r d_r 2^(P-1-r)
    sum_{j>=1} d_-j 2^-j  =  B / (2^P - 1),   B = sum_r d_r 2^r

so ``rho = (2A + B) / (2^P - 1)``, an exact rational.
"""

from __future__ import annotations

import math
from fractions import Fraction
from typing import Iterable, Sequence


class Word:
    __slots__ = ("bits",)

    def __init__(self, bits: str | Sequence[int], offset: int = 0):
        s = bits if isinstance(bits, str) else "".join("1" if int(b) else "0" for b in bits)
        if not s:
            raise ValueError("symbolic word must be nonempty")
        if s.strip("01"):
            raise ValueError(f"symbolic word must be over {{0,1}}: {s!r}")
        n = len(s)
        o = offset % n
        if o:
            s = s[o:] + s[:o]
        root = (s + s).find(s, 1)
        if root < n:
            s = s[:root]
        self.bits = s

    @classmethod
    def from_window(cls, window: str, lo: int, period: int | None = None, fill: str = "0") -> "Word":
        """Periodic word with ``x_{lo+t} = window[t]``, period ``max(period, len(window))``."""
        n = len(window)
        p = n if period is None else max(period, n)
        out = [fill] * p
        for t, b in enumerate(window):
            out[(lo + t) % p] = b
        return cls("".join(out))

    def __len__(self) -> int:
        return len(self.bits)

    @property
    def period(self) -> int:
        return len(self.bits)

    def at(self, j: int) -> str:
        return self.bits[j % len(self.bits)]

    def window(self, lo: int, hi: int) -> str:
        """Coordinates ``x_lo .. x_hi`` (inclusive) as a string."""
        n = len(self.bits)
        if hi < lo:
            return ""
        start = lo % n
        reps = (start + hi - lo) // n + 1
        return (self.bits * (reps + 1))[start : start + hi - lo + 1]

    def shift(self, m: int) -> "Word":
        """``sigma^m`` applied to this sequence: ``(sigma^m x)_j = x_{j+m}``."""
        m %= len(self.bits)
        if m == 0:
            return self
        return Word(self.bits[m:] + self.bits[:m])

    def __eq__(self, other) -> bool:
        return isinstance(other, Word) and self.bits == other.bits

    def __hash__(self) -> int:
        return hash(("Word", self.bits))

    def __repr__(self) -> str:
        return f"Word({self.bits!r})"


def _diff(p: Word, q: Word) -> tuple[int, int]:
    lp, lq = len(p.bits), len(q.bits)
    period = lp * lq // math.gcd(lp, lq)
    d = int(p.bits * (period // lp), 2) ^ int(q.bits * (period // lq), 2)
    return d, period


def symbolic_distance_exact(p: Word, q: Word) -> Fraction:
    d, period = _diff(p, q)
    if d == 0:
        return Fraction(0)
    b = int(format(d, f"0{period}b")[::-1], 2)
    return Fraction(2 * d + b, (1 << period) - 1)


def symbolic_distance(p: Word, q: Word) -> float:
    if p.bits == q.bits:
        return 0.0
    d, period = _diff(p, q)
    b = int(format(d, f"0{period}b")[::-1], 2)
    return (2 * d + b) / ((1 << period) - 1)


def window_radius(r: float) -> int:
    """Smallest ``a >= 0`` whose tail ``sum_{|j|>a} 2^-|j| = 2^(1-a)`` is below ``r``.

    Agreement with a center on coordinates ``[-a, a]`` then guarantees
    distance ``< r``.
    """
    if r <= 0:
        raise ValueError("radius must be positive")
    a = 0
    while 2.0 ** (1 - a) >= r:
        a += 1
    return a


def window_code(w: Word, a: int) -> int:
    """Integer whose bit ``t + a`` is ``x_t`` for ``-a <= t <= a``."""
    return int(w.window(-a, a)[::-1], 2)


Piece = tuple[int, int, Word]


def splice(pieces: Iterable[Piece], period: int | None = None, pad: int = 8) -> Word | None:
    """Build a periodic word copying ``src`` on each ``(lo, hi, src)`` piece.

    The result ``z`` has ``z_t = src_t`` for ``lo <= t <= hi``. With
    ``period`` set, coordinates are reduced mod ``period`` and ``None`` is
    returned on a conflict; otherwise the period is the covering span plus
    ``pad`` on each side. Free coordinates copy the nearest piece's source.
    """
    pieces = [(lo, hi, src) for lo, hi, src in pieces if hi >= lo]
    if not pieces:
        return None
    lo_all = min(p[0] for p in pieces)
    hi_all = max(p[1] for p in pieces)
    if period is None:
        start = lo_all - pad
        size = hi_all - lo_all + 1 + 2 * pad
        fixed: dict[int, str] = {}
        for lo, hi, src in pieces:
            for t, b in zip(range(lo, hi + 1), src.window(lo, hi)):
                if fixed.setdefault(t, b) != b:
                    return None
        out = []
        for t in range(start, start + size):
            b = fixed.get(t)
            if b is None:
                b = _nearest(pieces, t).at(t)
            out.append(b)
        return Word.from_window("".join(out), start)
    if period < 1:
        raise ValueError("period must be positive")
    slots: list[str | None] = [None] * period
    for lo, hi, src in pieces:
        for t, b in zip(range(lo, hi + 1), src.window(lo, hi)):
            r = t % period
            if slots[r] is None:
                slots[r] = b
            elif slots[r] != b:
                return None
    for r in range(period):
        if slots[r] is None:
            best = None
            for lo, hi, src in pieces:
                # representative of r closest to [lo, hi]
                t = lo + ((r - lo) % period)
                if t > hi:
                    t_left = t - period
                    gap_r, gap_l = t - hi, lo - t_left
                    t, gap = (t, gap_r) if gap_r <= gap_l else (t_left, gap_l)
                else:
                    gap = 0
                if best is None or gap < best[0]:
                    best = (gap, src.at(t))
            slots[r] = best[1]
    return Word("".join(slots))


def _nearest(pieces: Sequence[Piece], t: int) -> Word:
    best_gap, best_src = None, None
    for lo, hi, src in pieces:
        gap = lo - t if t < lo else (t - hi if t > hi else 0)
        if best_gap is None or gap < best_gap:
            best_gap, best_src = gap, src
    return best_src
