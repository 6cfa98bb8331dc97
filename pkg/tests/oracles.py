"""Reference implementations written directly from the definitions.

Nothing here calls into the package's distance or transport code, so the
tests compare two independent derivations.
"""

from fractions import Fraction
from itertools import combinations
import math


def shift_distance_truncated(p_bits: str, q_bits: str, K: int = 200) -> Fraction:
    """``sum_{|j| <= K} |x_j - y_j| / 2^|j|`` for periodic sequences; error below ``2^(1-K)``."""
    total = Fraction(0)
    for j in range(-K, K + 1):
        if p_bits[j % len(p_bits)] != q_bits[j % len(q_bits)]:
            total += Fraction(1, 2 ** abs(j))
    return total


def line_distance(p, q):
    return abs(p - q)


def circle_distance(p, q):
    d = abs(p - q) % (2 * math.pi)
    return min(d, 2 * math.pi - d)


def hausdorff_brute(dist, A, B):
    one = max(min(dist(a, b) for b in B) for a in A)
    two = max(min(dist(a, b) for a in A) for b in B)
    return max(one, two)


def _weights(atoms):
    out = {}
    for a in atoms:
        out[a] = out.get(a, 0) + 1
    n = len(atoms)
    return {a: Fraction(c, n) for a, c in out.items()}


def _one_direction(dist, mu, nu):
    """max over subsets A of supp(mu) of inf{eps : mu(A) <= nu(A^eps) + eps}, A^eps open."""
    support = list(mu)
    worst = 0.0
    for r in range(1, len(support) + 1):
        for A in combinations(support, r):
            mass = float(sum(mu[a] for a in A))
            # distance from A to each atom of nu, sorted; nu(A^eps) is constant on (d_k, d_{k+1}]
            ds = sorted((min(dist(a, b) for a in A), float(w)) for b, w in nu.items())
            cuts = [0.0] + [d for d, _ in ds] + [math.inf]
            covered = 0.0
            best = math.inf
            for k in range(len(cuts) - 1):
                lo, hi = cuts[k], cuts[k + 1]
                if k > 0:
                    covered += ds[k - 1][1]
                if lo >= hi:
                    continue
                # the condition is monotone in eps, so the first feasible piece holds the infimum
                cand = max(lo, mass - covered)
                if cand <= hi:
                    best = cand
                    break
            worst = max(worst, min(best, 1.0))
    return worst


def prohorov_definition(dist, mu_atoms, nu_atoms):
    mu, nu = _weights(mu_atoms), _weights(nu_atoms)
    return max(_one_direction(dist, mu, nu), _one_direction(dist, nu, mu))
