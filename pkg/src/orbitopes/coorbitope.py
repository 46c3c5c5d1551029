"""Polar bodies of orbitopes: membership, extreme orbits, biorbitopes, polar LMIs.

Polarity is taken in the trace form on the model space.  For hermitian
families the orbitope lives in an affine trace hyperplane, so the polar is
formed inside the traceless part (a-coordinates are centered eigenvalues).
Facet indices in reports are 1-based, matching the coweight labels mu_i.
"""
from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from typing import Sequence

import numpy as np

from .catalog import (
    MembershipResult,
    OrbitopeSpec,
    Verdict,
    a_coordinates,
    classify,
    embed_a,
    membership,
    scalar_to_json,
)
from .errors import NotBiorbitope, NotFullDimensional, UnsupportedWeight
from .momentum_polytope import MomentumPolytope
from .pencil import LinearPencil, constraint_block, constraint_weight
from .root_system import Family, dominant, dot, fmt_vector, is_exact, mu_values

POLAR_RTOL = 1e-8
RATIONAL_TOL = 1e-9
MAX_DENOMINATOR = 10**6


def _polytope(spec: OrbitopeSpec) -> MomentumPolytope:
    return MomentumPolytope(spec.system, spec.x)


def _require_full(spec: OrbitopeSpec) -> MomentumPolytope:
    P = _polytope(spec)
    if not P.is_full_dimensional():
        raise NotFullDimensional(f"O_x is not full-dimensional for x={fmt_vector(spec.x.dominant)}; "
                                 "its polar is unbounded")
    return P


def _floats(v: Sequence) -> list[float]:
    return [float(t) for t in v]


def polar_value(spec: OrbitopeSpec, y) -> float:
    """max over the orbit of <g x, y>, i.e. s * <x_dom, a(y)_dom>."""
    ay = a_coordinates(spec.family, y).dominant
    return float(spec.scale * np.dot(_floats(spec.x.dominant), ay))


def polar_membership(spec: OrbitopeSpec, y, eps: float = POLAR_RTOL) -> MembershipResult:
    _require_full(spec)
    return classify([("polar_pairing", 1.0 - polar_value(spec, y))], eps)


@dataclass(frozen=True)
class ExtremePoint:
    index: int  # 1-based coweight index
    z: tuple  # dominant a-coordinates

    def to_json(self) -> dict:
        return {"index": self.index, "z": [scalar_to_json(t) for t in self.z]}


def extreme_orbits(spec: OrbitopeSpec) -> list[ExtremePoint]:
    """z_i = h_i / (s * mu_i(x)) for each facet index i."""
    P = _require_full(spec)
    sys = spec.system
    out = []
    for i in P.facet_indices():
        denom = spec.scale * P.mu[i]
        z = tuple(h / denom for h in sys.coweights[i])
        if not is_exact(z):
            z = tuple(float(t) for t in z)
        out.append(ExtremePoint(i + 1, z))
    return out


@dataclass(frozen=True)
class BiorbitopeVerdict:
    theorem: bool  # the simple-root criterion
    single_facet_class: bool  # |I(x)| == 1
    explanation: str

    @property
    def anomaly(self) -> bool:
        return self.theorem != self.single_facet_class

    def __bool__(self) -> bool:
        return self.theorem

    def to_json(self) -> dict:
        return {"theorem": self.theorem, "single_facet_class": self.single_facet_class,
                "anomaly": self.anomaly, "explanation": self.explanation}


def biorbitope_condition(spec: OrbitopeSpec) -> tuple[bool, str]:
    """Exactly one simple root nonzero on x, at an end node of an irreducible
    Dynkin diagram that is not of type D_n with n >= 4."""
    P = _polytope(spec)
    sys = spec.system
    nonzero = [j for j, z in enumerate(P.zero) if not z]
    if not sys.is_irreducible:
        return False, f"{sys.label} is reducible"
    if len(nonzero) != 1:
        return False, f"{len(nonzero)} simple roots are nonzero on x (need exactly one)"
    j = nonzero[0]
    if j not in sys.end_nodes():
        return False, f"beta_{j + 1} is not an end node of the Dynkin diagram"
    if sys.family is Family.D and sys.rank >= 4:
        return False, f"type {sys.label} is excluded"
    return True, f"only beta_{j + 1} is nonzero on x and it is an end node of {sys.label}"


def is_biorbitope(spec: OrbitopeSpec) -> BiorbitopeVerdict:
    P = _require_full(spec)
    if all(t == 0 for t in spec.x.dominant):
        raise NotFullDimensional("x = 0")
    theorem, why = biorbitope_condition(spec)
    single = len(P.facet_indices()) == 1
    return BiorbitopeVerdict(theorem, single, why)


# --------------------------------------------------------------------------
# self-polarity

@dataclass(frozen=True)
class Proportional:
    c: object
    predicted: object  # 1 / (s * beta_i(x)^2 * |h_i|^2)
    agrees: bool

    def to_json(self) -> dict:
        return {"result": "Proportional", "c": scalar_to_json(self.c),
                "predicted": scalar_to_json(self.predicted), "agrees": self.agrees}


@dataclass(frozen=True)
class GridCheck:
    c: float
    direction: str  # "z" or "x"
    t: float
    polar: Verdict
    orbitope: Verdict

    @property
    def disagrees(self) -> bool:
        return self.polar.feasible != self.orbitope.feasible


@dataclass(frozen=True)
class NotProportional:
    z: tuple
    x: tuple
    predicted: object
    ratios: tuple  # r_polar(u) / r(u) for u = z, x
    checks: tuple = field(repr=False)

    @property
    def verified(self) -> bool:
        return all(ch.disagrees for ch in self.checks)

    def to_json(self) -> dict:
        return {"result": "NotProportional", "z": [scalar_to_json(t) for t in self.z],
                "x": [scalar_to_json(t) for t in self.x],
                "predicted": scalar_to_json(self.predicted),
                "ratios": [float(r) for r in self.ratios], "verified": self.verified,
                "grid": [{"c": ch.c, "direction": ch.direction, "t": ch.t,
                          "polar": ch.polar.value, "orbitope": ch.orbitope.value}
                         for ch in self.checks]}


def radial_orbitope(spec: OrbitopeSpec, u: Sequence):
    """sup{t : t u in P_x} for a nonzero a-vector u."""
    P = _polytope(spec)
    mu_u = mu_values(spec.system, dominant(spec.system, u).dominant)
    return min(m / v for m, v in zip(P.mu, mu_u) if v > 0)


def radial_polar(spec: OrbitopeSpec, u: Sequence):
    """sup{t : t u in the polar}; the pairing s <x_dom, u_dom> is positive for u != 0."""
    ud = dominant(spec.system, u).dominant
    return 1 / (spec.scale * dot(spec.x.dominant, ud))


def _grid_checks(spec: OrbitopeSpec, dirs: dict, grid: Sequence[float]) -> list[GridCheck]:
    ratios = {k: float(radial_polar(spec, u) / radial_orbitope(spec, u)) for k, u in dirs.items()}
    out = []
    for c in grid:
        # the direction whose ratio is farthest from c (log scale) separates best
        name = max(ratios, key=lambda k: abs(np.log(ratios[k] / c)))
        u = dirs[name]
        r_pol = float(radial_polar(spec, u))
        r_orb = float(radial_orbitope(spec, u))
        t = 0.5 * (r_pol + c * r_orb)
        v = [t * float(s) for s in u]
        polar = polar_membership(spec, embed_a(spec.family, _full(spec, v, 0)))
        shifted = _full(spec, [s / c for s in v], spec.shift)
        orb = membership(spec, embed_a(spec.family, shifted))
        out.append(GridCheck(float(c), name, t, polar.verdict, orb.verdict))
    return out


def _full(spec: OrbitopeSpec, v: Sequence, shift) -> list[float]:
    if spec.family.is_hermitian:
        return [float(t) + float(shift) for t in v]
    return [float(t) for t in v]


def default_grid() -> np.ndarray:
    return np.geomspace(1e-3, 1e3, 61)


def check_self_polarity(spec: OrbitopeSpec, grid: Sequence[float] | None = None):
    """Is the polar a positive multiple of the orbitope?

    Returns Proportional(c) when the unique extreme point z is a positive
    multiple c * x_dom, and otherwise NotProportional with a verified
    grid of counterexamples.
    """
    verdict = is_biorbitope(spec)
    if not (verdict.theorem and verdict.single_facet_class):
        raise NotBiorbitope(f"polar has {len(extreme_orbits(spec))} extreme orbits: "
                            f"{verdict.explanation}")
    P = _polytope(spec)
    (ext,) = extreme_orbits(spec)
    z, x = ext.z, spec.x.dominant
    nonzero = [j for j, zero in enumerate(P.zero) if not zero]
    if len(nonzero) == 1:
        j = nonzero[0]
        h = spec.system.coweights[j]
        predicted = 1 / (spec.scale * P.beta[j] ** 2 * dot(h, h))
    else:
        predicted = None
    c = _proportionality(z, x)
    if c is not None:
        agrees = predicted is not None and abs(float(c) - float(predicted)) <= 1e-9 * abs(float(c))
        return Proportional(c, predicted, agrees)
    grid = default_grid() if grid is None else grid
    dirs = {"z": z, "x": x}
    ratios = tuple(radial_polar(spec, u) / radial_orbitope(spec, u) for u in (z, x))
    return NotProportional(z, x, predicted, ratios, tuple(_grid_checks(spec, dirs, grid)))


def _proportionality(z: Sequence, x: Sequence):
    """c > 0 with z = c x, or None."""
    k = max(range(len(x)), key=lambda i: abs(float(x[i])))
    if x[k] == 0:
        return None
    c = z[k] / x[k]
    if c <= 0:
        return None
    if is_exact(z) and is_exact(x):
        return c if all(a == c * b for a, b in zip(z, x)) else None
    scale = max(abs(float(t)) for t in z)
    if all(abs(float(a) - float(c) * float(b)) <= 1e-9 * scale for a, b in zip(z, x)):
        return c
    return None


# --------------------------------------------------------------------------
# rational coordinates and polar pencils

@dataclass(frozen=True)
class RationalCoordinates:
    rational: bool
    b: object  # common factor: beta_j(x) = c_j * b
    coefficients: tuple  # c_j (Fractions) when rational

    def to_json(self) -> dict:
        return {"rational": self.rational, "b": scalar_to_json(self.b) if self.b is not None
                else None, "coefficients": [scalar_to_json(c) for c in self.coefficients]}


def rational_approximation(r: float, tol: float = RATIONAL_TOL,
                           max_den: int = MAX_DENOMINATOR) -> Fraction | None:
    """First continued-fraction convergent p/q with |r - p/q| <= tol / q^2.

    Every real number has convergents within 1/q^2, so a plain tolerance
    would accept irrationals; requiring tol / q^2 accepts only ratios whose
    expansion effectively terminates (float rationals with q up to ~10^3).
    """
    h0, h1, k0, k1 = 0, 1, 1, 0
    rest = r
    for _ in range(64):
        a = int(np.floor(rest))
        h0, h1 = h1, a * h1 + h0
        k0, k1 = k1, a * k1 + k0
        if k1 > max_den:
            return None
        if abs(r - h1 / k1) <= tol / k1**2:
            return Fraction(h1, k1)
        frac = rest - a
        if frac == 0:
            return Fraction(h1, k1)
        rest = 1.0 / frac
    return None


def has_rational_coordinates(spec: OrbitopeSpec) -> RationalCoordinates:
    """Is there b with every beta_j(x) a rational multiple of b?"""
    P = _polytope(spec)
    beta = P.beta
    if is_exact(beta):
        return RationalCoordinates(True, Fraction(1), tuple(beta))
    nonzero = [j for j, z in enumerate(P.zero) if not z]
    if not nonzero:
        return RationalCoordinates(True, 0.0, tuple(Fraction(0) for _ in beta))
    b = float(beta[nonzero[0]])
    coeffs = []
    for j, v in enumerate(beta):
        if P.zero[j]:
            coeffs.append(Fraction(0))
            continue
        approx = rational_approximation(float(v) / b)
        if approx is None:
            return RationalCoordinates(False, None, ())
        coeffs.append(approx)
    return RationalCoordinates(True, b, tuple(coeffs))


def polar_pencil(spec: OrbitopeSpec) -> LinearPencil:
    """Single-block LMI for the polar when x is a multiple of one coweight."""
    P = _require_full(spec)
    rat = has_rational_coordinates(spec)
    if not rat.rational:
        raise UnsupportedWeight("x has no rational coordinates; the polar is not "
                                "reached by a polynomial-weight representation")
    nonzero = [j for j, z in enumerate(P.zero) if not z]
    if len(nonzero) != 1:
        labels = " + ".join(f"{rat.coefficients[j]}*omega_{j + 1}" for j in nonzero)
        raise UnsupportedWeight(
            f"the polar needs the irreducible representation of highest weight {labels}, "
            "the top component of a tensor product of fundamental representations; only "
            "single fundamental weights (exterior powers, half-spin) are implemented")
    j = nonzero[0]
    fam = spec.family
    h = spec.system.coweights[j]
    t = constraint_weight(fam, j)
    kappa = dot(t, h) / dot(h, h)
    level = kappa / (spec.scale * P.beta[j])
    block = constraint_block(spec, j, level, centered=True)
    return LinearPencil(fam.space, (block,), f"polar of orbitope {fam.label()}")


# --------------------------------------------------------------------------
# report

@dataclass(frozen=True)
class PolarReport:
    facet_indices: tuple  # 1-based
    extreme_points: tuple
    biorbitope: BiorbitopeVerdict
    self_polarity: object  # Proportional, NotProportional or None
    rational: RationalCoordinates

    def to_json(self) -> dict:
        return {"facet_indices": list(self.facet_indices),
                "extreme_points": [e.to_json() for e in self.extreme_points],
                "biorbitope": self.biorbitope.to_json(),
                "self_polarity": None if self.self_polarity is None
                else self.self_polarity.to_json(),
                "rational_coordinates": self.rational.to_json()}


def polar_report(spec: OrbitopeSpec) -> PolarReport:
    P = _require_full(spec)
    bio = is_biorbitope(spec)
    selfpol = check_self_polarity(spec) if bio.theorem and bio.single_facet_class else None
    return PolarReport(tuple(i + 1 for i in P.facet_indices()), tuple(extreme_orbits(spec)),
                       bio, selfpol, has_rational_coordinates(spec))


__all__ = [
    "BiorbitopeVerdict",
    "ExtremePoint",
    "NotProportional",
    "PolarReport",
    "Proportional",
    "RationalCoordinates",
    "biorbitope_condition",
    "check_self_polarity",
    "extreme_orbits",
    "has_rational_coordinates",
    "is_biorbitope",
    "polar_membership",
    "polar_pencil",
    "polar_report",
    "polar_value",
    "rational_approximation",
]
