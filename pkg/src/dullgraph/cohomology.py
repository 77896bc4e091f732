"""Fixed-point data, equivariant classes and localization over a dull graph.

Equivariant classes are recorded by their restrictions to fixed components.
At an isolated point a restriction is a polynomial in the degree-two
generator ``t``; at a fixed surface it is ``p(t) + q(t) u`` where ``u`` is
the fundamental class of the surface (``u**2 = 0``, ``int_F u = 1``).
"""

from __future__ import annotations

import enum
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Mapping

from .errors import DullGraphError, NeedsParityError
from .graph import DullGraph, Orientation, _require_valid, validate_orientation, weights_at

Laurent = dict[int, Fraction]  # exponent of t -> coefficient


@dataclass(frozen=True)
class Isolated:
    w1: int
    w2: int

    def __post_init__(self):
        if self.w1 == 0 or self.w2 == 0:
            raise DullGraphError(f"isolated fixed point with zero weight ({self.w1}, {self.w2})")


@dataclass(frozen=True)
class Surface:
    genus: int
    e: int
    normal_weight: int

    def __post_init__(self):
        if self.normal_weight not in (1, -1):
            raise DullGraphError(f"normal weight must be +1 or -1, got {self.normal_weight}")
        if self.genus < 0:
            raise DullGraphError(f"negative genus {self.genus}")


Component = Isolated | Surface
FixedData = Mapping[str, Component]


def fixed_data_of(g: DullGraph, o: Orientation) -> dict[str, Component]:
    _require_valid(g)
    validate_orientation(g, o).raise_if_invalid("orientation")
    out = {}
    for v in g.vertices:
        if v.is_fat:
            out[v.id] = Surface(v.genus, v.e, 1 if v.id == o.min_vertex else -1)
        else:
            out[v.id] = Isolated(*weights_at(g, o, v.id))
    return out


def _trim(coeffs) -> tuple[Fraction, ...]:
    c = [Fraction(x) for x in coeffs]
    while c and c[-1] == 0:
        c.pop()
    return tuple(c)


@dataclass(frozen=True)
class Restriction:
    """``sum t_poly[k] t**k + u * sum u_poly[k] t**k``."""

    t_poly: tuple[Fraction, ...] = ()
    u_poly: tuple[Fraction, ...] = ()

    def __post_init__(self):
        object.__setattr__(self, "t_poly", _trim(self.t_poly))
        object.__setattr__(self, "u_poly", _trim(self.u_poly))

    @property
    def is_zero(self) -> bool:
        return not self.t_poly and not self.u_poly

    def degrees(self) -> set[int]:
        return ({2 * k for k, c in enumerate(self.t_poly) if c}
                | {2 * k + 2 for k, c in enumerate(self.u_poly) if c})

    def __mul__(self, other: Restriction) -> Restriction:
        def conv(a, b):
            out = [Fraction(0)] * (len(a) + len(b))
            for i, x in enumerate(a):
                for j, y in enumerate(b):
                    out[i + j] += x * y
            return out

        uu = conv(self.t_poly, other.u_poly)
        for k, c in enumerate(conv(self.u_poly, other.t_poly)):
            if k < len(uu):
                uu[k] += c
            else:
                uu.append(c)
        return Restriction(conv(self.t_poly, other.t_poly), uu)

    def to_json(self):
        return {"t_poly": [str(c) for c in self.t_poly], "u_poly": [str(c) for c in self.u_poly]}


@dataclass(frozen=True)
class EquivariantClass:
    restrictions: Mapping[str, Restriction] = field(default_factory=dict)

    def at(self, cid: str) -> Restriction:
        return self.restrictions.get(cid, Restriction())

    @property
    def degree(self) -> int | None:
        """Common degree of all restrictions (None for the zero class)."""
        found = set().union(*(r.degrees() for r in self.restrictions.values()))
        if len(found) > 1:
            raise TypeError(f"class is not homogeneous: degrees {sorted(found)}")
        return found.pop() if found else None

    def __mul__(self, other: EquivariantClass) -> EquivariantClass:
        keys = set(self.restrictions) | set(other.restrictions)
        return EquivariantClass({k: self.at(k) * other.at(k) for k in keys})

    def to_json(self):
        return {k: r.to_json() for k, r in sorted(self.restrictions.items())}

    @classmethod
    def constant(cls, fd: FixedData, c=1) -> EquivariantClass:
        return cls({k: Restriction((c,)) for k in fd})


def epsilon_class(fd: FixedData, cid: str) -> EquivariantClass:
    """Class restricting to the equivariant Euler class of the normal bundle at ``cid``."""
    comp = fd[cid]
    if isinstance(comp, Isolated):
        r = Restriction((0, 0, comp.w1 * comp.w2))
    else:
        r = Restriction((0, comp.normal_weight), (comp.e,))
    return EquivariantClass({cid: r})


def integrate_abbv(fd: FixedData, c: EquivariantClass) -> Laurent:
    """Localization sum of ``c`` over the fixed components.

    At a surface, ``1/(n t + e u) = (1/(n t)) (1 - e u / (n t))``.
    """
    c.degree  # raises on inhomogeneous input
    out: dict[int, Fraction] = {}

    def add(k, x):
        out[k] = out.get(k, Fraction(0)) + x

    for cid, r in c.restrictions.items():
        comp = fd.get(cid)
        if comp is None:
            raise DullGraphError(f"class has a restriction at unknown component {cid!r}")
        if isinstance(comp, Isolated):
            if r.u_poly:
                raise TypeError(f"restriction at isolated point {cid!r} has a u term")
            w = comp.w1 * comp.w2
            for k, x in enumerate(r.t_poly):
                add(k - 2, x / w)
        else:
            n, e = comp.normal_weight, comp.e
            for k, x in enumerate(r.u_poly):
                add(k - 1, x / n)
            for k, x in enumerate(r.t_poly):
                add(k - 2, -x * e / (n * n))
    return {k: v for k, v in sorted(out.items()) if v}


def format_laurent(lp: Laurent) -> str:
    if not lp:
        return "0"
    terms = []
    for k, c in sorted(lp.items(), reverse=True):
        mono = "" if k == 0 else ("t" if k == 1 else f"t^{k}")
        coef = str(c)
        if mono and c in (1, -1):
            coef = "-" if c == -1 else ""
        terms.append(f"{coef}{mono}" if mono else coef)
    return " + ".join(terms).replace("+ -", "- ")


@dataclass(frozen=True)
class LocalizationCheck:
    name: str
    value: Laurent
    ok: bool

    def to_json(self):
        return {"name": self.name, "value": format_laurent(self.value), "pass": self.ok}


@dataclass(frozen=True)
class LocalizationReport:
    checks: tuple[LocalizationCheck, ...]

    @property
    def ok(self) -> bool:
        return all(c.ok for c in self.checks)

    def to_json(self):
        return {"ok": self.ok, "checks": [c.to_json() for c in self.checks]}


def check_fixed_data(fd: FixedData) -> LocalizationReport:
    """Integrals that must vanish on any genuine manifold: 1 and every degree-2 epsilon class."""
    checks = []
    one = integrate_abbv(fd, EquivariantClass.constant(fd))
    checks.append(LocalizationCheck("integral of 1", one, not one))
    for cid, comp in sorted(fd.items()):
        if isinstance(comp, Surface):
            val = integrate_abbv(fd, epsilon_class(fd, cid))
            checks.append(LocalizationCheck(f"integral of epsilon[{cid}]", val, not val))
    return LocalizationReport(tuple(checks))


def localization_consistency(g: DullGraph, o: Orientation) -> LocalizationReport:
    return check_fixed_data(fixed_data_of(g, o))


# --------------------------------------------------------------------------
# topology


def betti(g: DullGraph) -> tuple[int, int, int, int, int]:
    _require_valid(g)
    genus = max((v.genus for v in g.vertices if v.is_fat), default=0)
    chi = sum(2 - 2 * v.genus if v.is_fat else 1 for v in g.vertices)
    b2 = chi - 2 + 4 * genus
    return (1, 2 * genus, b2, 2 * genus, 1)


class Parity(enum.Enum):
    EVEN = "even"
    ODD = "odd"
    UNKNOWN = "unknown"


def parity_from_graph(g: DullGraph) -> Parity:
    """Parity of the intersection lattice when the graph determines it.

    With ``b2 = 2`` the manifold is an S^2-bundle.  Two fixed surfaces are
    sections with self-intersections ``e`` and ``-e``, so ``e`` decides.  A
    single fixed sphere of odd self-intersection forces an odd lattice, but
    one of even self-intersection may be a fibre of either bundle (the first
    Hirzebruch surface has fixed fibres under a suitable circle), so that
    case stays unknown, as does the all-isolated case.
    """
    b2 = betti(g)[2]
    if b2 != 2:
        return Parity.ODD
    surfaces = [v for v in g.vertices if v.is_fat]
    if len(surfaces) == 2:
        return Parity.ODD if surfaces[0].e % 2 else Parity.EVEN
    if surfaces and surfaces[0].e % 2:
        return Parity.ODD
    return Parity.UNKNOWN


@dataclass(frozen=True)
class Description:
    name: str
    genus: int
    blowups: int = 0

    def __str__(self):
        return self.name


def _surface(genus: int) -> str:
    return "S^2" if genus == 0 else f"Sigma_{genus}"


def diffeotype(b1: int, b2: int, parity: Parity | str | None = None) -> Description:
    if b1 < 0 or b1 % 2 or b2 < 1:
        raise DullGraphError(f"no manifold in this class has b1={b1}, b2={b2}")
    genus = b1 // 2
    if b2 == 1:
        if genus:
            raise DullGraphError("b2 = 1 forces b1 = 0")
        return Description("CP^2", 0)
    base = _surface(genus)
    if b2 >= 3:
        k = b2 - 2
        return Description(f"{k}-fold blowup of S^2 x {base}", genus, k)
    parity = Parity(parity) if parity is not None else Parity.UNKNOWN
    if parity is Parity.UNKNOWN:
        raise NeedsParityError("b2 = 2: the lattice parity is needed to pick the bundle")
    if parity is Parity.EVEN:
        return Description(f"S^2 x {base}", genus)
    return Description(f"nontrivial S^2-bundle over {base}", genus)


def classify(g: DullGraph, parity: Parity | str | None = None) -> Description:
    b = betti(g)
    known = parity_from_graph(g)
    return diffeotype(b[1], b[2], known if known is not Parity.UNKNOWN else parity)


def orientation_reversing_exists(g: DullGraph) -> bool:
    return betti(g)[2] == 2
