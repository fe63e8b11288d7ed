"""Independent reference computations used to certify the main routines."""

from __future__ import annotations

import itertools
import math
from fractions import Fraction
from typing import Sequence

import numpy as np

from .bundles import fiber_vector, painted_diagram_for
from .flags import PaintedDiagram, flag_data
from .rootsys import Covector, RootSystem, inner


def reflection_closure(R: RootSystem, base: Sequence[Covector]) -> set[Covector]:
    """Orbit of the simple roots under the group generated by simple reflections."""
    def reflect(x: Covector, a: Covector) -> Covector:
        return (x - (2 * inner(R, x, a) / inner(R, a, a)) * a).normalized()

    found = {b.normalized() for b in base}
    frontier = list(found)
    while frontier:
        nxt = []
        for x in frontier:
            for a in base:
                y = reflect(x, a)
                if y not in found:
                    found.add(y)
                    nxt.append(y)
        frontier = nxt
    return found


def koszul_pairings_bruteforce(d: PaintedDiagram) -> tuple[Fraction, ...]:
    """beta_j(Z^Kos) as the plain sum of <beta_j, alpha> over roots using a black node."""
    R = d.root_system
    fd = flag_data(d)
    pos = [a for a in R.roots if all(c >= 0 for c in fd.coefficients[a])]
    black = d.black_nodes
    comp = [a for a in pos if any(fd.coefficients[a][i] for i in black)]
    return tuple(sum((inner(R, d.base[j], a) for a in comp), Fraction(0)) for j in black)


def flat_lattice_search(
    base: PaintedDiagram, string: Sequence[int], end, bound: int = 20
) -> list[tuple[int, ...]]:
    """Every character with |p_j| <= bound solving Z^Kos_K = m P(Lambda).

    Lambda -> P(Lambda) is affine, so the defect is evaluated on the whole
    box at once in exact integer arithmetic after clearing denominators.
    The zero character is skipped when m = 1 (trivial line bundle).
    """
    string = tuple(string)
    n = len(base.black)
    m = len(string) + 1
    K = painted_diagram_for(base, string, end)
    fK = flag_data(K)

    def defect(ch) -> list[Fraction]:
        Ph = fK.to_h(fiber_vector(base, string, end, ch))
        return [k - m * p for k, p in zip(fK.koszul_vector, Ph)]

    zero = (0,) * n
    d0 = defect(zero)
    cols = []
    for j in range(n):
        e = [0] * n
        e[j] = 1
        cols.append([a - b for a, b in zip(defect(e), d0)])
    den = 1
    for x in itertools.chain(d0, *cols):
        den = math.lcm(den, x.denominator)
    D0 = np.array([int(x * den) for x in d0], dtype=np.int64)
    if n == 0:
        return [()] if string and not D0.any() else []
    C = np.array([[int(x * den) for x in c] for c in cols], dtype=np.int64)
    rng = np.arange(-bound, bound + 1, dtype=np.int64)
    combos = list(itertools.product(rng, repeat=n - 1))
    rest = np.array(combos, dtype=np.int64).reshape(len(combos), n - 1)
    hits = []
    for p0 in rng:
        pts = np.concatenate([np.full((len(rest), 1), p0, dtype=np.int64), rest], axis=1)
        good = ~(D0 + pts @ C).any(axis=1)
        for row in pts[good]:
            ch = tuple(int(x) for x in row)
            if string or any(ch):
                hits.append(ch)
    return hits


def cpn_profile(n: int, t: np.ndarray) -> np.ndarray:
    """Closed-form profile kappa sin^2(t / sqrt 2) of the SU(n) seed with lambda = n + 1."""
    kappa = math.sqrt(n - 1) / (n * math.sqrt(2))
    return kappa * np.sin(t / math.sqrt(2)) ** 2
