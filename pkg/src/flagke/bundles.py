"""Admissible homogeneous vector bundles over a flag manifold G/H.

A bundle is described by a white string of type A_{m-1} (a full connected
component of the white nodes), the end of that string that gets painted
black to produce the flag G/K, and an integer character (p_1, ..., p_k) on
the black nodes of H, Lambda = sum_j p_j bar(beta_j).

Everything here is exact; vectors in t_K are handled as Killing duals
(Covectors) and converted to h-coordinates through ``flags.FlagData``.
"""

from __future__ import annotations

import itertools
import json
import math
from dataclasses import dataclass
from fractions import Fraction
from functools import lru_cache
from typing import Mapping, Optional, Sequence, Union

from .linalg import solve
from .flags import FlagData, PaintedDiagram, flag_data, painted_diagram
from .rootsys import Covector, cartan_matrix, inner


class BundleError(ValueError):
    pass


@dataclass(frozen=True)
class BundleSpec:
    """``string`` holds 0-based node indices in path order; ``char`` follows the black nodes of ``base``."""

    base: PaintedDiagram
    string: tuple[int, ...]
    end: Optional[str]
    char: tuple[int, ...]

    def __post_init__(self):
        object.__setattr__(self, "string", tuple(int(i) for i in self.string))
        object.__setattr__(self, "char", tuple(int(p) for p in self.char))
        if len(self.char) != len(self.base.black):
            raise BundleError(
                f"character has {len(self.char)} entries, base has {len(self.base.black)} black nodes"
            )
        if self.string:
            if self.end not in ("left", "right"):
                raise BundleError("a nonempty string needs end 'left' or 'right'")
            comp = string_component(self.base, self.string[0])
            if comp is None:
                raise BundleError("string nodes must form a white A-type component")
            if self.string not in (comp, comp[::-1]):
                raise BundleError("string must be a full white component in path order")
        else:
            if self.end is not None:
                raise BundleError("end must be omitted when m = 1")
            if not any(self.char):
                raise BundleError("m = 1 needs a nonzero character")

    @property
    def m(self) -> int:
        return len(self.string) + 1

    @property
    def painted_node(self) -> Optional[int]:
        if not self.string:
            return None
        return self.string[0] if self.end == "left" else self.string[-1]

    def to_json(self) -> dict:
        out = {"string": [i + 1 for i in self.string], "char": list(self.char)}
        out["end"] = self.end
        return out

    @classmethod
    def from_json(cls, base: PaintedDiagram, data: Union[str, Mapping]) -> "BundleSpec":
        if isinstance(data, str):
            data = json.loads(data)
        try:
            string = [int(i) - 1 for i in data.get("string", [])]
            char = data.get("char")
            if char is None:
                char = [0] * len(base.black)
            end = data.get("end")
        except (AttributeError, TypeError, ValueError) as exc:
            raise BundleError(f"malformed bundle JSON: {data!r}") from exc
        if any(not isinstance(p, int) or isinstance(p, bool) for p in char):
            raise BundleError("character entries must be integers")
        return cls(base, tuple(string), end if string else None, tuple(char))


@dataclass(frozen=True)
class FiberGeometry:
    spec: BundleSpec
    K_diagram: PaintedDiagram
    beta: Optional[int]  # 0-based node index of the newly painted root
    P: Covector  # Killing dual of the unnormalized fundamental vector
    P_h: tuple[Fraction, ...]  # h-coordinates of P in t_K
    kappa_sq: Fraction

    @property
    def m(self) -> int:
        return self.spec.m

    @property
    def kappa(self) -> float:
        return math.sqrt(self.kappa_sq)

    @property
    def Z0_float(self) -> tuple[float, ...]:
        k = self.kappa
        return tuple(float(x) / k for x in self.P_h)

    @property
    def flagK(self) -> FlagData:
        return flag_data(self.K_diagram)

    def beta_P(self) -> Optional[Fraction]:
        if self.beta is None:
            return None
        R = self.K_diagram.root_system
        return inner(R, self.K_diagram.base[self.beta], self.P)


@lru_cache(maxsize=None)
def _adjacency(d: PaintedDiagram) -> tuple[tuple[Fraction, ...], ...]:
    return tuple(tuple(row) for row in cartan_matrix(d.root_system, d.base))


def white_components(d: PaintedDiagram) -> list[tuple[int, ...]]:
    """Connected components of the white subdiagram, as sorted node tuples."""
    cm = _adjacency(d)
    white = set(d.white_nodes)
    seen: set[int] = set()
    comps = []
    for s in sorted(white):
        if s in seen:
            continue
        stack, comp = [s], []
        seen.add(s)
        while stack:
            v = stack.pop()
            comp.append(v)
            for w in white:
                if w not in seen and cm[v][w] != 0:
                    seen.add(w)
                    stack.append(w)
        comps.append(tuple(sorted(comp)))
    return comps


def _as_a_path(d: PaintedDiagram, comp: Sequence[int]) -> Optional[tuple[int, ...]]:
    """Path order of a component of type A (single bonds, no branching), else None."""
    cm = _adjacency(d)
    nbrs = {v: [w for w in comp if w != v and cm[v][w] != 0] for v in comp}
    for v in comp:
        for w in nbrs[v]:
            if cm[v][w] * cm[w][v] != 1:
                return None
        if len(nbrs[v]) > 2:
            return None
    if len(comp) == 1:
        return tuple(comp)
    ends = sorted(v for v in comp if len(nbrs[v]) == 1)
    if len(ends) != 2:
        return None
    path = [ends[0]]
    while len(path) < len(comp):
        nxt = [w for w in nbrs[path[-1]] if w not in path]
        if len(nxt) != 1:
            return None
        path.append(nxt[0])
    return tuple(path)


def string_component(d: PaintedDiagram, node: int) -> Optional[tuple[int, ...]]:
    """The white A-type component containing ``node`` in path order, if any."""
    for comp in white_components(d):
        if node in comp:
            return _as_a_path(d, comp)
    return None


def a_strings(d: PaintedDiagram) -> list[tuple[int, ...]]:
    out = []
    for comp in white_components(d):
        path = _as_a_path(d, comp)
        if path is not None:
            out.append(path)
    return out


def build_K_diagram(spec: BundleSpec) -> PaintedDiagram:
    if spec.m == 1:
        return spec.base
    if spec.end not in ("left", "right"):
        raise BundleError("painted end missing")
    return painted_diagram_for(spec.base, spec.string, spec.end)


def _string_weight(d: PaintedDiagram, string: Sequence[int], end: str) -> Covector:
    """Traceless weight of the first (left) or last basis vector of C^m on the string block.

    In simple-root terms omega_first = sum_k (m-k)/m alpha_k and
    omega_last = sum_k k/m alpha_k; the fiber line uses omega_first on the
    left and -omega_last on the right.
    """
    R = d.root_system
    m = len(string) + 1
    out = R.zero()
    for k, node in enumerate(string, start=1):
        c = Fraction(m - k, m) if end == "left" else -Fraction(k, m)
        out = out + c * d.base[node]
    return out


def _orthogonal_projection(d: PaintedDiagram, x: Covector, onto_perp: Sequence[int]) -> Covector:
    """Killing-orthogonal projection of x onto the complement of span(base[i], i in onto_perp)."""
    if not onto_perp:
        return x
    R = d.root_system
    vs = [d.base[i] for i in onto_perp]
    gram = [[inner(R, a, b) for b in vs] for a in vs]
    coeffs = solve(gram, [inner(R, a, x) for a in vs])
    out = x
    for c, v in zip(coeffs, vs):
        out = out - c * v
    return out


def character_covector(base: PaintedDiagram, char: Sequence[int]) -> Covector:
    """Lambda = sum_j p_j bar(beta_j), bar(beta_j) the projection of beta_j orthogonal to H-white."""
    out = base.root_system.zero()
    for p, bar in zip(char, _restricted_black_roots(base)):
        if p:
            out = out + p * bar
    return out


@lru_cache(maxsize=None)
def _restricted_black_roots(base: PaintedDiagram) -> tuple[Covector, ...]:
    white = base.white_nodes
    return tuple(
        _orthogonal_projection(base, base.base[j], white).normalized() for j in base.black_nodes
    )


def painted_diagram_for(base: PaintedDiagram, string: Sequence[int], end: Optional[str]) -> PaintedDiagram:
    if not string:
        return base
    node = string[0] if end == "left" else string[-1]
    return base.with_black(base.black | {node})


def fiber_vector(
    base: PaintedDiagram, string: Sequence[int], end: Optional[str], char: Sequence[int]
) -> Covector:
    """Oriented fiber vector P (as a Killing dual) for any character, zero allowed.

    P is the projection onto t_K of mu_0 + Lambda, negated when the newly
    painted root pairs negatively with it.
    """
    K = painted_diagram_for(base, string, end)
    mu = character_covector(base, char)
    if string:
        mu = mu + _string_weight(base, string, end)
    P = _orthogonal_projection(K, mu, K.white_nodes).normalized()
    if string:
        node = string[0] if end == "left" else string[-1]
        if inner(K.root_system, K.base[node], P) < 0:
            P = -P
    return P


@lru_cache(maxsize=None)
def fiber_geometry(spec: BundleSpec) -> FiberGeometry:
    K = build_K_diagram(spec)
    P = fiber_vector(spec.base, spec.string, spec.end, spec.char)
    if P.is_zero():
        raise BundleError("fiber weight vanishes: the character makes the stabilizer non-proper")
    return FiberGeometry(
        spec=spec,
        K_diagram=K,
        beta=spec.painted_node,
        P=P,
        P_h=flag_data(K).to_h(P),
        kappa_sq=inner(K.root_system, P, P),
    )


def _spec_key(spec: BundleSpec, g: FiberGeometry) -> tuple:
    return (frozenset(spec.string), g.K_diagram.black, g.P)


def enumerate_bundles(d: PaintedDiagram, max_char: int) -> list[BundleSpec]:
    """All admissible bundle specs over ``d`` with |p_j| <= max_char.

    Specs that give the same string, the same G/K and the same fiber vector
    are listed once (for a one-node string, the two ends coincide and the
    right end with character p is the left end with character -p).
    """
    k = len(d.black)
    chars = list(itertools.product(range(-max_char, max_char + 1), repeat=k))
    out: list[BundleSpec] = []
    seen: set[tuple] = set()

    def emit(spec: BundleSpec) -> None:
        try:
            g = fiber_geometry(spec)
        except BundleError:
            return
        key = _spec_key(spec, g)
        if key not in seen:
            seen.add(key)
            out.append(spec)

    for path in a_strings(d):
        ends = ("left",) if len(path) == 1 else ("left", "right")
        for end in ends:
            for ch in chars:
                emit(BundleSpec(d, path, end, ch))
    for ch in chars:
        if any(ch):
            emit(BundleSpec(d, (), None, ch))
    return out


def bundle_report(spec: BundleSpec) -> dict:
    g = fiber_geometry(spec)
    return {
        "spec": spec.to_json(),
        "m": spec.m,
        "K_diagram": g.K_diagram.to_json(),
        "beta": None if g.beta is None else g.beta + 1,
        "P": [str(x) for x in g.P_h],
        "kappa_sq": str(g.kappa_sq),
    }


def seed_spec(n: int) -> BundleSpec:
    """SU(n) acting on C^n: all-white A_{n-1}, left end painted, no character."""
    if n < 2:
        raise BundleError("the seed needs n >= 2")
    return BundleSpec(painted_diagram("A", n - 1, []), tuple(range(n - 1)), "left", ())
