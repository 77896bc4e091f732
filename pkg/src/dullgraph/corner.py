"""Exact arithmetic on Delzant corner polytopes.

A corner polytope is ``{w : <w, v_i> >= a_i}`` for primitive normals
``v_1 = (1, 0), ..., v_n = (0, 1)`` listed counter-clockwise with
``a_1 = a_n = 0``.  Its bounded boundary is a chain of facets; the corner
``P_{i,i+1}`` is the i-th fixed point counted from the bottom of the
anti-diagonal moment ``w_1 - w_2``.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from math import gcd
from typing import Sequence

from .errors import FeasibilityError, NotExceptionalError, Violation, ValidationReport
from .graph import FreeChain
from .moves import Blowup, blowdown_positions

Point = tuple[Fraction, Fraction]


def _frac(x) -> Fraction:
    return x if isinstance(x, Fraction) else Fraction(x)


@dataclass(frozen=True)
class CornerPolytope:
    normals: tuple[tuple[int, int], ...]
    constants: tuple[Fraction, ...]

    def __post_init__(self):
        object.__setattr__(self, "normals", tuple((int(a), int(b)) for a, b in self.normals))
        object.__setattr__(self, "constants", tuple(_frac(a) for a in self.constants))

    @classmethod
    def quadrant(cls) -> CornerPolytope:
        return cls(((1, 0), (0, 1)), (0, 0))

    @property
    def n(self) -> int:
        return len(self.normals)

    def v(self, i: int) -> tuple[int, int]:
        """1-based normal."""
        return self.normals[i - 1]

    def a(self, i: int) -> Fraction:
        return self.constants[i - 1]

    def contains(self, w: Sequence) -> bool:
        return all(v[0] * _frac(w[0]) + v[1] * _frac(w[1]) >= a
                   for v, a in zip(self.normals, self.constants))

    def to_json(self):
        return {"normals": [list(v) for v in self.normals],
                "constants": [str(a) for a in self.constants]}


def _det(u, v) -> int:
    return u[0] * v[1] - u[1] * v[0]


def _solve(u, a, v, b) -> Point:
    """The point w with <w,u> = a and <w,v> = b."""
    d = _det(u, v)
    return (Fraction(a * v[1] - b * u[1], d), Fraction(u[0] * b - v[0] * a, d))


def validate_polytope(p: CornerPolytope) -> ValidationReport:
    out = []
    add = lambda code, msg, *ids: out.append(Violation(code, msg, ids))
    if p.n < 2 or len(p.constants) != p.n:
        add("shape", f"need at least two normals and one constant per normal "
                     f"(got {p.n} normals, {len(p.constants)} constants)")
        return ValidationReport(tuple(out))
    if p.normals[0] != (1, 0):
        add("first-normal", f"v_1 must be (1,0), got {p.normals[0]}", 1)
    if p.normals[-1] != (0, 1):
        add("last-normal", f"v_n must be (0,1), got {p.normals[-1]}", p.n)
    if p.constants[0] != 0 or p.constants[-1] != 0:
        add("end-constants", "a_1 and a_n must both be 0 (translated polytopes are not accepted)")
    for i, v in enumerate(p.normals, 1):
        if gcd(*v) != 1:
            add("primitive", f"normal {v} is not primitive", i)
        if 1 < i < p.n and min(v) < 1:
            add("interior-normal", f"interior normal {v} must have both coordinates >= 1", i)
    for i in range(1, p.n):
        d = _det(p.v(i), p.v(i + 1))
        if d != 1:
            add("delzant", f"det(v_{i}, v_{i + 1}) = {d}, expected 1", i, i + 1)
    if out:
        return ValidationReport(tuple(out))
    for i, t in facet_lengths(p).items():
        if t <= 0:
            add("facet", f"facet {i} has lattice length {t}, must be positive", i)
    return ValidationReport(tuple(out))


def _require(p: CornerPolytope):
    validate_polytope(p).raise_if_invalid("polytope")


def polygon_vertices(p: CornerPolytope) -> list[Point]:
    """Corners P_{i,i+1}, bottom to top."""
    return [_solve(p.v(i), p.a(i), p.v(i + 1), p.a(i + 1)) for i in range(1, p.n)]


def facet_lengths(p: CornerPolytope) -> dict[int, Fraction]:
    """Lattice length t_i of each bounded facet, keyed by 1-based index.

    ``P_{i,i+1} - P_{i-1,i} = t_i (beta_i, -alpha_i)``; a nonpositive value
    means the facet is degenerate or the corners are out of order.
    """
    corners = polygon_vertices(p)
    out = {}
    for i in range(2, p.n):
        al, be = p.v(i)
        dx = corners[i - 1][0] - corners[i - 2][0]
        dy = corners[i - 1][1] - corners[i - 2][1]
        out[i] = dx / be if be else -dy / al
    return out


def max_blowup_size(p: CornerPolytope, i: int) -> Fraction | None:
    """Supremum of admissible sizes at corner ``P_{i,i+1}``; None if unbounded."""
    _require(p)
    if not 1 <= i < p.n:
        raise IndexError(f"corner index {i} out of range 1..{p.n - 1}")
    t = facet_lengths(p)
    bounds = [t[j] for j in (i, i + 1) if j in t]
    return min(bounds) if bounds else None


def blowup_at_corner(p: CornerPolytope, i: int, eps) -> CornerPolytope:
    """Cut the corner ``P_{i,i+1}`` by a new facet of lattice length ``eps``."""
    eps = _frac(eps)
    bound = max_blowup_size(p, i)
    if eps <= 0 or (bound is not None and eps >= bound):
        raise FeasibilityError(
            f"blowup size {eps} at corner {i} must lie in (0, {bound if bound is not None else 'inf'})",
            bound)
    u, w = p.v(i), p.v(i + 1)
    normals = p.normals[:i] + ((u[0] + w[0], u[1] + w[1]),) + p.normals[i:]
    consts = p.constants[:i] + (p.a(i) + p.a(i + 1) + eps,) + p.constants[i:]
    return CornerPolytope(normals, consts)


def _exceptional(p: CornerPolytope, j: int) -> bool:
    if not 1 < j < p.n:
        return False
    u, v, w = p.v(j - 1), p.v(j), p.v(j + 1)
    return v == (u[0] + w[0], u[1] + w[1])


def exceptional_size(p: CornerPolytope, j: int) -> Fraction:
    return p.a(j) - p.a(j - 1) - p.a(j + 1)


def find_exceptional_facets(p: CornerPolytope) -> list[int]:
    _require(p)
    return [j for j in range(2, p.n) if _exceptional(p, j)]


def blowdown_facet(p: CornerPolytope, j: int) -> CornerPolytope:
    _require(p)
    if not _exceptional(p, j):
        raise NotExceptionalError(f"facet {j} is not exceptional (v_j != v_(j-1) + v_(j+1))")
    return CornerPolytope(p.normals[:j - 1] + p.normals[j:], p.constants[:j - 1] + p.constants[j:])


def reduce_to_quadrant(p: CornerPolytope) -> list[int]:
    """Blow down exceptional facets until the quadrant remains; returns the facets used."""
    used = []
    while p.n > 2:
        found = find_exceptional_facets(p)
        if not found:
            raise NotExceptionalError(f"no exceptional facet in {p.normals}")
        used.append(found[0])
        p = blowdown_facet(p, found[0])
    return used


def mirror(p: CornerPolytope) -> CornerPolytope:
    """Reflect across the diagonal, reversing facet order."""
    _require(p)
    return CornerPolytope(tuple((b, a) for a, b in reversed(p.normals)), p.constants[::-1])


def stabilizer_labels(p: CornerPolytope) -> list[int]:
    """Orders of the anti-diagonal stabilizers on the interior facets, bottom to top."""
    _require(p)
    return [a + b for a, b in p.normals[1:-1]]


def realize_chain(chain: FreeChain | Sequence[int], sizes: Sequence | None = None):
    """Corner polytope whose interior labels are the chain's labels bottom to top.

    The chain is taken in the upward direction.  Returns the polytope and the
    corner-blowup script that builds it from the quadrant.
    """
    labels = tuple(chain.labels if isinstance(chain, FreeChain) else chain)
    ranks = blowdown_positions(labels)
    if sizes is not None and len(sizes) != len(ranks):
        raise FeasibilityError(f"expected {len(ranks)} blowup sizes, got {len(sizes)}")
    p = CornerPolytope.quadrant()
    script = []
    for step, r in enumerate(ranks):
        if sizes is None:
            bound = max_blowup_size(p, r)
            eps = Fraction(1) if bound is None else bound / 2
        else:
            eps = _frac(sizes[step])
        p = blowup_at_corner(p, r, eps)
        script.append(Blowup(r, eps))
    return p, tuple(script)


def in_triangular_neighborhood(p: CornerPolytope, w: Sequence, eps) -> bool:
    w1, w2 = _frac(w[0]), _frac(w[1])
    return p.contains((w1, w2)) and w1 >= 0 and w2 >= 0 and w1 + w2 < _frac(eps)


def chain_threshold(p: CornerPolytope) -> Fraction:
    """Smallest ``s`` such that the chain's image lies in ``U_eps`` for every ``eps > s``.

    The image of the chain is the bounded part of the boundary, whose
    extreme points are the corners, so this is the largest ``w_1 + w_2``
    over the corners.
    """
    _require(p)
    return max(x + y for x, y in polygon_vertices(p))
