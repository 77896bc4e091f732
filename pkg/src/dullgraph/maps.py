"""Floating-point models of corner manifolds and the maps between them.

Points of a corner manifold are represented by points of the level set
``U`` in ``C^n`` (one representative per orbit of the subtorus ``K``).
Everything here works on such representatives; identities that hold only
modulo ``K`` are compared after applying ``psi``, which is injective on
orbits.
"""

from __future__ import annotations

import math
from dataclasses import asdict, dataclass, field
from fractions import Fraction

import numpy as np

from .corner import (
    CornerPolytope,
    blowdown_facet,
    chain_threshold,
    exceptional_size,
    find_exceptional_facets,
    mirror,
    validate_polytope,
)
from .errors import ConfigError, GeometryError, NotExceptionalError, NotInteriorError, OnChainError


@dataclass(frozen=True)
class ToleranceConfig:
    """Tolerances for the numeric checks.

    ``tol_level`` also bounds the pointwise algebraic identities of the
    ``phi_t`` family and of ``g``, which involve no level-set solve.
    """

    tol_level: float = 1e-12
    tol_identity: float = 1e-9
    tol_fd: float = 1e-6
    fd_step: float = 1e-5
    rng_seed: int = 0
    samples: int = 100

    def __post_init__(self):
        for name in ("tol_level", "tol_identity", "tol_fd", "fd_step"):
            if not getattr(self, name) > 0:
                raise ConfigError(f"{name} must be positive")
        if self.samples < 1:
            raise ConfigError("samples must be at least 1")


def _float_data(p: CornerPolytope):
    alpha = np.array([v[0] for v in p.normals], dtype=float)
    beta = np.array([v[1] for v in p.normals], dtype=float)
    a = np.array([float(c) for c in p.constants])
    return alpha, beta, a


def level_residuals(p: CornerPolytope, x) -> np.ndarray:
    """``1/2 (alpha_i |x_1|^2 - |x_i|^2 + beta_i |x_n|^2) - a_i`` for interior i."""
    x = _coords(x)
    alpha, beta, a = _float_data(p)
    r2 = np.abs(x) ** 2
    return 0.5 * (alpha[1:-1] * r2[0] - r2[1:-1] + beta[1:-1] * r2[-1]) - a[1:-1]


@dataclass(frozen=True, eq=False)
class LevelPoint:
    x: np.ndarray
    poly: CornerPolytope
    residuals: np.ndarray = field(repr=False)

    @classmethod
    def of(cls, p: CornerPolytope, x) -> LevelPoint:
        x = np.asarray(x, dtype=complex)
        return cls(x, p, level_residuals(p, x))

    @property
    def max_residual(self) -> float:
        return float(np.max(np.abs(self.residuals), initial=0.0))


def _coords(x) -> np.ndarray:
    return x.x if isinstance(x, LevelPoint) else np.asarray(x, dtype=complex)


def sample_level(p: CornerPolytope, w, phases=None) -> LevelPoint:
    """Representative over the moment point ``w`` with the given coordinate phases."""
    alpha, beta, a = _float_data(p)
    w1, w2 = float(w[0]), float(w[1])
    rad = np.concatenate(([2 * w1], 2 * (alpha[1:-1] * w1 + beta[1:-1] * w2 - a[1:-1]), [2 * w2]))
    if np.any(rad <= 0):
        raise NotInteriorError(f"moment point {tuple(w)} is not in the interior of the polytope")
    phases = np.zeros(p.n) if phases is None else np.asarray(phases, dtype=float)
    return LevelPoint.of(p, np.sqrt(rad) * np.exp(1j * phases))


def psi(p: CornerPolytope, x) -> np.ndarray:
    """Symplectic blowup map from the complement of the chain into ``C^2``."""
    x = _coords(x)
    inner = x[1:-1]
    if np.any(inner == 0):
        raise OnChainError("point lies on the chain of isotropy spheres")
    unit = inner / np.abs(inner)
    al = np.array([v[0] for v in p.normals[1:-1]])
    be = np.array([v[1] for v in p.normals[1:-1]])
    return np.array([x[0] * np.prod(unit ** al), x[-1] * np.prod(unit ** be)])


def psi_inverse(p: CornerPolytope, z) -> LevelPoint:
    """Gauge-fixed preimage with positive real interior coordinates."""
    z = np.asarray(z, dtype=complex)
    alpha, beta, a = _float_data(p)
    r2 = np.abs(z) ** 2
    rad = alpha[1:-1] * r2[0] + beta[1:-1] * r2[1] - 2 * a[1:-1]
    if np.any(rad <= 0):
        raise NotInteriorError(f"{z} is outside the image of psi")
    return LevelPoint.of(p, np.concatenate(([z[0]], np.sqrt(rad), [z[1]])))


def image_margins(p: CornerPolytope, z) -> np.ndarray:
    """``1/2 <(|z_1|^2, |z_2|^2), v_i> - a_i`` for interior i."""
    alpha, beta, a = _float_data(p)
    r2 = np.abs(np.asarray(z)) ** 2
    return 0.5 * (alpha[1:-1] * r2[0] + beta[1:-1] * r2[1]) - a[1:-1]


def k_action(p: CornerPolytope, x, i: int, theta: float) -> np.ndarray:
    """Flow of the ``K`` generator ``alpha_i e_1 - e_i + beta_i e_n`` (1-based interior i)."""
    x = _coords(x).copy()
    al, be = p.v(i)
    x[0] *= np.exp(1j * al * theta)
    x[i - 1] *= np.exp(-1j * theta)
    x[-1] *= np.exp(1j * be * theta)
    return x


def torus_action(x, lam1: complex, lam2: complex) -> np.ndarray:
    x = _coords(x).copy()
    x[0] *= lam1
    x[-1] *= lam2
    return x


def anti_diagonal(x, lam: complex) -> np.ndarray:
    return torus_action(x, lam, 1 / lam)


def blowdown_map(p: CornerPolytope, j: int, x) -> np.ndarray:
    """Blow down the exceptional facet ``j``; lands on the level set of the smaller polytope."""
    if j not in find_exceptional_facets(p):
        raise NotExceptionalError(f"facet {j} is not exceptional")
    x = _coords(x)
    xj = x[j - 1]
    if xj == 0:
        raise OnChainError(f"point lies on the exceptional sphere x_{j} = 0")
    unit = xj / abs(xj)
    y = np.delete(x, j - 1)
    y[j - 2] *= unit
    y[j - 1] *= unit
    return y


def blowdown_inverse(p: CornerPolytope, j: int, y) -> LevelPoint:
    """Reinstate ``x_j`` as a positive real; ``p`` is the polytope before blowing down."""
    if j not in find_exceptional_facets(p):
        raise NotExceptionalError(f"facet {j} is not exceptional")
    y = np.asarray(y, dtype=complex)
    eps = float(exceptional_size(p, j))
    rad = abs(y[j - 2]) ** 2 + abs(y[j - 1]) ** 2 - 2 * eps
    if rad <= 0:
        raise NotInteriorError("point is inside the blown-up ball")
    return LevelPoint.of(p, np.insert(y, j - 1, math.sqrt(rad)))


def F_map(x) -> np.ndarray:
    """``(x_1, ..., x_n) -> (-conj(x_n), conj(x_(n-1)), ..., conj(x_1))``."""
    out = np.conj(_coords(x)[::-1])
    out[0] = -out[0]
    return out


def omega(u, v) -> float:
    """Standard symplectic form on ``C^m`` evaluated on complex tangent vectors."""
    return float(np.imag(np.vdot(u, v)))


def fd_derivative(f, x, u, h: float) -> np.ndarray:
    """Central difference of ``f`` at ``x`` in the real direction ``u``."""
    return (f(x + h * u) - f(x - h * u)) / (2 * h)


def phi_t(z, t: float) -> np.ndarray:
    """Norm-preserving isotopy from the identity to ``(z_1, z_2) -> (-conj z_2, conj z_1)``."""
    z = np.asarray(z, dtype=complex)
    c, s = math.cos(math.pi * t / 2), math.sin(math.pi * t / 2)
    return np.array([c * z[0] - s * np.conj(z[1]), c * z[1] + s * np.conj(z[0])])


def _check_cutoff(alpha: float, beta: float):
    if not 0 < alpha < beta:
        raise ConfigError(f"cut-off radii must satisfy 0 < alpha < beta (got {alpha}, {beta})")


def rho(s: float, alpha: float, beta: float) -> float:
    """Cut-off in ``s = |z|^2 / 2``: 1 up to alpha, 0 from beta, quintic smoothstep between."""
    _check_cutoff(alpha, beta)
    if s <= alpha:
        return 1.0
    if s >= beta:
        return 0.0
    u = (s - alpha) / (beta - alpha)
    return 1.0 - u ** 3 * (10 - 15 * u + 6 * u * u)


def _half_norm2(z) -> float:
    return 0.5 * float(np.sum(np.abs(z) ** 2))


def g_map(z, alpha: float, beta: float) -> np.ndarray:
    return phi_t(z, rho(_half_norm2(z), alpha, beta))


def g_inverse(z, alpha: float, beta: float) -> np.ndarray:
    return phi_t(z, -rho(_half_norm2(z), alpha, beta))


def cutoff_radii(p: CornerPolytope) -> tuple[float, float]:
    """Default ``alpha < beta`` with the chain inside the alpha-neighborhood."""
    alpha = float(chain_threshold(p)) + 1.0
    return alpha, alpha + 1.0


def H_map(p: CornerPolytope, x, alpha: float, beta: float) -> np.ndarray:
    """Diffeomorphism onto the mirror model: ``F`` near the chain, ``psi'^-1 g psi`` elsewhere."""
    _check_cutoff(alpha, beta)
    if not alpha > chain_threshold(p):
        raise GeometryError(f"chain is not contained in the triangular neighborhood of size {alpha}")
    x = _coords(x)
    if 0.5 * (abs(x[0]) ** 2 + abs(x[-1]) ** 2) <= alpha:
        return F_map(x)
    return _G_map(p, x, alpha, beta)


def _G_map(p, x, alpha, beta):
    return psi_inverse(mirror(p), g_map(psi(p, x), alpha, beta)).x


# --------------------------------------------------------------------------
# verification driver


@dataclass
class Check:
    name: str
    tolerance: float
    samples: int = 0
    max_defect: float = 0.0

    def record(self, defect: float):
        self.samples += 1
        if not self.max_defect >= defect:  # also propagates NaN
            self.max_defect = float(defect)

    @property
    def passed(self) -> bool:
        return self.samples > 0 and self.max_defect <= self.tolerance

    def to_json(self):
        d = asdict(self)
        d["pass"] = self.passed
        return {k: d[k] for k in ("name", "samples", "max_defect", "tolerance", "pass")}


@dataclass
class VerificationReport:
    polytope: CornerPolytope
    config: ToleranceConfig
    checks: list[Check]

    @property
    def ok(self) -> bool:
        return all(c.passed for c in self.checks)

    def check(self, name: str) -> Check:
        return next(c for c in self.checks if c.name == name)

    def to_json(self):
        return {"polytope": self.polytope.to_json(), "seed": self.config.rng_seed,
                "ok": self.ok, "checks": [c.to_json() for c in self.checks]}


def _sample_moment(p: CornerPolytope, rng, lo: float, hi: float, margin: float):
    """Random moment point with ``lo <= w_1 + w_2 <= hi`` and every level radicand above ``margin``."""
    alpha, beta, a = _float_data(p)
    for _ in range(10_000):
        s = rng.uniform(lo, hi)
        u = rng.uniform(0, 1)
        w = (s * u, s * (1 - u))
        inner = alpha[1:-1] * w[0] + beta[1:-1] * w[1] - a[1:-1]
        if min(w) > margin and np.all(inner > margin):
            return w
    raise GeometryError(f"could not sample interior moment points with {lo} <= w1+w2 <= {hi}")


def _random_point(p, rng, lo, hi, margin=0.05) -> LevelPoint:
    return sample_level(p, _sample_moment(p, rng, lo, hi, margin), rng.uniform(0, 2 * np.pi, p.n))


def _unit(rng, m):
    v = rng.normal(size=m) + 1j * rng.normal(size=m)
    return v / np.linalg.norm(v)


def _circle(rng):
    return np.exp(1j * rng.uniform(0, 2 * np.pi))


def run_verification_suite(p: CornerPolytope, config: ToleranceConfig | None = None,
                           sample_poly: CornerPolytope | None = None) -> VerificationReport:
    """Check every map identity on seeded random samples.

    Points are drawn from the level set of ``sample_poly`` (default ``p``)
    and every identity is evaluated with respect to ``p``, so passing a
    perturbed ``sample_poly`` makes the level-set checks fail.
    """
    cfg = config or ToleranceConfig()
    validate_polytope(p).raise_if_invalid("polytope")
    src = sample_poly or p
    rng = np.random.default_rng(cfg.rng_seed)
    tl, ti, tf, h = cfg.tol_level, cfg.tol_identity, cfg.tol_fd, cfg.fd_step
    names = [
        ("level set residual", tl),
        ("psi moment intertwining", ti),
        ("psi image margin", ti),
        ("psi K-invariance", ti),
        ("psi torus equivariance", ti),
        ("psi o psi_inverse", ti),
        ("psi_inverse o psi within K-orbit", ti),
        ("blowdown level set", ti),
        ("blowdown round trip", ti),
        ("blowdown compatible with psi", ti),
        ("blowdown symplectic slice", tf),
        ("F level set", ti),
        ("F conjugates to (-conj z2, conj z1)", ti),
        ("F negates omega", tf),
        ("F anti-diagonal equivariance", ti),
        ("F o F is the torus element (-1,-1)", ti),
        ("phi_t endpoints", tl),
        ("phi_t norm", tl),
        ("phi_t inverse", tl),
        ("phi_t equivariance", tl),
        ("g inner case", tl),
        ("g outer case", tl),
        ("g o g_inverse", tl),
        ("H seam agreement", ti),
        ("H diagonal moment", ti),
        ("H far region", ti),
        ("H anti-diagonal equivariance", ti),
    ]
    checks = {n: Check(n, t) for n, t in names}
    rec = lambda name, d: checks[name].record(float(d))

    pm = mirror(p)
    alpha, beta = cutoff_radii(p)
    top = beta + 3.0
    exc = find_exceptional_facets(p)
    n_int = p.n - 2

    for _ in range(cfg.samples):
        pt = _random_point(src, rng, 0.0, top)
        x = pt.x
        rec("level set residual", np.max(np.abs(level_residuals(p, x)), initial=0.0))

        z = psi(p, x)
        rec("psi moment intertwining", max(abs(abs(z[0]) - abs(x[0])), abs(abs(z[1]) - abs(x[-1]))))
        margins = image_margins(p, z)
        rec("psi image margin", np.max(np.abs(margins - 0.5 * np.abs(x[1:-1]) ** 2), initial=0.0)
            if np.all(margins > 0) else np.inf)
        if n_int:
            i = int(rng.integers(2, p.n))
            rec("psi K-invariance", np.max(np.abs(psi(p, k_action(p, x, i, rng.uniform(0, 2 * np.pi))) - z)))
        l1, l2 = _circle(rng), _circle(rng)
        rec("psi torus equivariance", np.max(np.abs(psi(p, torus_action(x, l1, l2)) - z * [l1, l2])))

        zr = _unit(rng, 2) * math.sqrt(2 * rng.uniform(alpha, top))
        if np.all(image_margins(p, zr) > 0):
            rec("psi o psi_inverse", np.max(np.abs(psi(p, psi_inverse(p, zr)) - zr)))
        back = psi_inverse(p, z)
        rec("psi_inverse o psi within K-orbit",
            max(np.max(np.abs(psi(p, back) - z)), back.max_residual))

        for j in exc:
            y = blowdown_map(p, j, x)
            small = blowdown_facet(p, j)
            rec("blowdown level set", np.max(np.abs(level_residuals(small, y)), initial=0.0))
            x2 = blowdown_inverse(p, j, y)
            rec("blowdown round trip", max(np.max(np.abs(blowdown_map(p, j, x2) - y)),
                                           np.max(np.abs(psi(p, x2) - z)), x2.max_residual))
            rec("blowdown compatible with psi", np.max(np.abs(psi(small, y) - z)))
            rec("blowdown symplectic slice", _slice_defect(p, j, x, rng, h))

        xf = F_map(x)
        rec("F level set", np.max(np.abs(level_residuals(pm, xf)), initial=0.0))
        zf = psi(pm, xf)
        rec("F conjugates to (-conj z2, conj z1)",
            np.max(np.abs(zf - np.array([-np.conj(z[1]), np.conj(z[0])]))))
        u, v = _unit(rng, p.n), _unit(rng, p.n)
        Fu, Fv = fd_derivative(F_map, x, u, h), fd_derivative(F_map, x, v, h)
        rec("F negates omega", abs(omega(Fu, Fv) + omega(u, v)))
        lam = _circle(rng)
        rec("F anti-diagonal equivariance",
            np.max(np.abs(psi(pm, F_map(anti_diagonal(x, lam))) - psi(pm, anti_diagonal(xf, lam)))))
        rec("F o F is the torus element (-1,-1)", np.max(np.abs(psi(p, F_map(xf)) + z)))

        zc = _unit(rng, 2) * rng.uniform(0.1, 3.0)
        t = rng.uniform(-1, 1)
        rec("phi_t endpoints", max(np.max(np.abs(phi_t(zc, 0) - zc)),
                                   np.max(np.abs(phi_t(zc, 1) - [-np.conj(zc[1]), np.conj(zc[0])]))))
        rec("phi_t norm", abs(np.linalg.norm(phi_t(zc, t)) - np.linalg.norm(zc)))
        rec("phi_t inverse", np.max(np.abs(phi_t(phi_t(zc, -t), t) - zc)))
        rec("phi_t equivariance", np.max(np.abs(phi_t(zc * [lam, 1 / lam], t) - phi_t(zc, t) * [lam, 1 / lam])))

        d = _unit(rng, 2)
        zin = d * math.sqrt(2 * rng.uniform(0, alpha))
        zout = d * math.sqrt(2 * rng.uniform(beta, top))
        zmid = d * math.sqrt(2 * rng.uniform(alpha, beta))
        rec("g inner case", np.max(np.abs(g_map(zin, alpha, beta) - [-np.conj(zin[1]), np.conj(zin[0])])))
        rec("g outer case", np.max(np.abs(g_map(zout, alpha, beta) - zout)))
        rec("g o g_inverse", max(np.max(np.abs(g_map(g_inverse(zmid, alpha, beta), alpha, beta) - zmid)),
                                 np.max(np.abs(g_inverse(g_map(zmid, alpha, beta), alpha, beta) - zmid))))

        seam = _random_point(src, rng, alpha - 0.5, alpha)
        rec("H seam agreement",
            np.max(np.abs(psi(pm, F_map(seam.x)) - psi(pm, _G_map(p, seam.x, alpha, beta)))))
        xh = H_map(p, x, alpha, beta)
        rec("H diagonal moment", abs((abs(xh[0]) ** 2 + abs(xh[-1]) ** 2) - (abs(x[0]) ** 2 + abs(x[-1]) ** 2)) / 2)
        far = _random_point(src, rng, beta, top)
        rec("H far region", np.max(np.abs(psi(pm, H_map(p, far.x, alpha, beta)) - psi(p, far.x))))
        rec("H anti-diagonal equivariance",
            np.max(np.abs(psi(pm, H_map(p, anti_diagonal(x, lam), alpha, beta))
                          - psi(pm, anti_diagonal(xh, lam)))))

    out = [checks[n] for n, _ in names]
    return VerificationReport(p, cfg, [c for c in out if c.samples or not _optional(c.name, p)])


def _optional(name: str, p: CornerPolytope) -> bool:
    """Checks that have nothing to test on polytopes without interior facets."""
    if name.startswith("blowdown"):
        return not find_exceptional_facets(p)
    return name == "psi K-invariance" and p.n == 2


def _slice_defect(p: CornerPolytope, j: int, x, rng, h: float) -> float:
    """Pullback defect of omega under the blowdown on a pair tangent to a level of G.

    ``G = |x_j|^2 - |x_(j-1)|^2 - |x_(j+1)|^2``; vectors are projected onto ker dG.
    """
    c = np.zeros(p.n)
    c[j - 1], c[j - 2], c[j] = 1.0, -1.0, -1.0
    grad = 2 * c * x

    def proj(u):
        u = u - np.real(np.vdot(grad, u)) / np.real(np.vdot(grad, grad)) * grad
        return u / np.linalg.norm(u)

    u, v = proj(_unit(rng, p.n)), proj(_unit(rng, p.n))
    f = lambda q: blowdown_map(p, j, q)
    return abs(omega(fd_derivative(f, x, u, h), fd_derivative(f, x, v, h)) - omega(u, v))


def perturbed(p: CornerPolytope, j: int, delta) -> CornerPolytope:
    """Copy of ``p`` with the constant ``a_j`` shifted by ``delta``."""
    consts = list(p.constants)
    consts[j - 1] += Fraction(delta)
    return CornerPolytope(p.normals, consts)
