"""Momentum polytopes conv(Wx): membership, faces and facets."""
from __future__ import annotations

from dataclasses import dataclass
from itertools import combinations
from typing import Iterable, Sequence

from .errors import NotFullDimensional, OrbitopeError
from .root_system import (
    CHAMBER_TOL,
    DEFAULT_ORBIT_CAP,
    ChamberVector,
    RestrictedRootSystem,
    dominant,
    fmt_vector,
    is_exact,
    mu_values,
    simple_root_values,
    weyl_orbit,
)

MAX_FACE_RANK = 16
#: relative zero test for simple-root values in float mode
ZERO_RTOL = 1e-9


def zero_mask(values: Sequence, scale: float) -> tuple[bool, ...]:
    """Which entries count as zero: exact comparison, or |v| <= 1e-9 * scale."""
    if is_exact(values):
        return tuple(v == 0 for v in values)
    tol = ZERO_RTOL * max(scale, 1e-300)
    return tuple(abs(v) <= tol for v in values)


def _scale(v: Sequence) -> float:
    return max((abs(float(t)) for t in v), default=0.0)


@dataclass(frozen=True)
class FaceOrbit:
    subset: frozenset  # 0-based simple-root indices

    @property
    def dim(self) -> int:
        return len(self.subset)


@dataclass(frozen=True)
class Facet:
    index: int  # 0-based
    level: object  # mu_i(x)


class MomentumPolytope:
    """P_x = conv(Wx) for a dominant (or arbitrary, then reduced) vector x."""

    def __init__(self, sys: RestrictedRootSystem, x: Sequence | ChamberVector):
        self.sys = sys
        self.x = x if isinstance(x, ChamberVector) else dominant(sys, x)
        self.beta = simple_root_values(sys, self.x.dominant)
        self.mu = mu_values(sys, self.x.dominant)
        self.zero = zero_mask(self.beta, _scale(self.x.dominant))
        if self.is_full_dimensional():
            assert all(m > 0 for m in self.mu), "mu_i(x) > 0 must hold for full-dimensional x"

    @property
    def exact(self) -> bool:
        return self.x.exact

    def is_full_dimensional(self) -> bool:
        return is_x_connected(self.sys, self.x.dominant, range(self.sys.rank), zero=self.zero)

    def tolerance(self) -> float:
        """Float-mode band; exact slacks are compared exactly regardless."""
        return 1e-9 * max(1.0, _scale(self.x.dominant))

    def mu_slack(self, y: Sequence) -> tuple:
        """mu_j(x) - mu_j(dominant(y)) for every j."""
        ydom = dominant(self.sys, y).dominant
        return tuple(a - b for a, b in zip(self.mu, mu_values(self.sys, ydom)))

    def contains(self, y: Sequence, tol: float | None = None) -> bool:
        slack = self.mu_slack(y)
        if is_exact(slack) and tol is None:
            return all(s >= 0 for s in slack)
        tol = self.tolerance() if tol is None else tol
        return all(s >= -tol for s in slack)

    def contains_bruteforce(self, y: Sequence, tol: float | None = None,
                            cap: int = DEFAULT_ORBIT_CAP) -> bool:
        """Kostant's criterion over the full orbit: x - w.y in T for every w."""
        tol = self.tolerance() if tol is None else tol
        x = self.x.dominant
        for wy in weyl_orbit(self.sys, y, cap=cap):
            diff = tuple(a - b for a, b in zip(x, wy))
            vals = mu_values(self.sys, diff)
            if is_exact(vals):
                if any(v < 0 for v in vals):
                    return False
            elif any(v < -tol for v in vals):
                return False
        return True

    def facet_indices(self) -> tuple[int, ...]:
        if not self.is_full_dimensional():
            raise NotFullDimensional(f"P_x is not full-dimensional for x={fmt_vector(self.x.dominant)}")
        n = self.sys.rank
        return tuple(i for i in range(n)
                     if is_x_connected(self.sys, self.x.dominant,
                                       [j for j in range(n) if j != i], zero=self.zero))

    def facets(self) -> list[Facet]:
        return [Facet(i, self.mu[i]) for i in self.facet_indices()]

    def face_orbits(self) -> list[FaceOrbit]:
        n = self.sys.rank
        if n > MAX_FACE_RANK:
            raise OrbitopeError(f"face enumeration capped at rank {MAX_FACE_RANK}")
        out = []
        for k in range(n + 1):
            for I in combinations(range(n), k):
                if is_x_connected(self.sys, self.x.dominant, I, zero=self.zero):
                    out.append(FaceOrbit(frozenset(I)))
        return out

    def vertices(self, cap: int = DEFAULT_ORBIT_CAP) -> set:
        return weyl_orbit(self.sys, self.x.dominant, cap=cap)


def is_x_connected(sys: RestrictedRootSystem, x: Sequence, subset: Iterable[int],
                   zero: Sequence[bool] | None = None) -> bool:
    """Every Dynkin component of ``subset`` holds a simple root not vanishing on x."""
    if zero is None:
        beta = simple_root_values(sys, x)
        zero = zero_mask(beta, _scale(x))
    return all(any(not zero[j] for j in comp) for comp in sys.components(subset))


def contains(P: MomentumPolytope, y: Sequence) -> bool:
    return P.contains(y)


def contains_bruteforce(P: MomentumPolytope, y: Sequence) -> bool:
    return P.contains_bruteforce(y)


def treated_as_zero(P: MomentumPolytope) -> list[int]:
    """Indices of simple-root values treated as zero (reported by the CLI)."""
    return [j for j, z in enumerate(P.zero) if z and P.beta[j] != 0]


__all__ = [
    "CHAMBER_TOL",
    "FaceOrbit",
    "Facet",
    "MomentumPolytope",
    "contains",
    "contains_bruteforce",
    "is_x_connected",
    "treated_as_zero",
    "zero_mask",
]
