"""Classical restricted root systems of types A, B, C, BC and D.

Vectors live in plain coordinates: ``R^n`` for B/C/BC/D and the zero-sum
hyperplane of ``R^(n+1)`` for A_n.  Entries are either all exact
(``int``/``Fraction``) or floats; exact inputs stay exact throughout.
"""
from __future__ import annotations

import enum
from collections import deque
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Sequence

from .errors import DimensionError, InvalidRank, OrbitTooLarge

#: absolute tolerance for chamber inequalities in float mode
CHAMBER_TOL = 1e-10
DEFAULT_ORBIT_CAP = 10**6


class Family(str, enum.Enum):
    A = "A"
    B = "B"
    C = "C"
    BC = "BC"
    D = "D"


_MIN_RANK = {Family.A: 1, Family.B: 1, Family.C: 1, Family.BC: 1, Family.D: 2}


def is_exact(v: Sequence) -> bool:
    return all(isinstance(t, (int, Fraction)) and not isinstance(t, bool) for t in v)


def as_vector(v: Sequence) -> tuple:
    """Normalize to a tuple of Fractions (exact input) or floats."""
    if is_exact(v):
        return tuple(Fraction(t) for t in v)
    return tuple(float(t) for t in v)


def fmt_vector(v: Sequence) -> str:
    """Compact human-readable form: (1, 1/2, -0.25)."""
    return "(" + ", ".join(str(t) if isinstance(t, Fraction) else f"{t:g}" for t in v) + ")"


def dot(u: Sequence, v: Sequence):
    if len(u) != len(v):
        raise DimensionError(f"dimension mismatch: {len(u)} vs {len(v)}")
    return sum((a * b for a, b in zip(u, v)), Fraction(0) if is_exact(u) and is_exact(v) else 0.0)


@dataclass(frozen=True)
class RestrictedRootSystem:
    family: Family
    rank: int
    simple_roots: tuple
    coweights: tuple
    ambient: int
    edges: frozenset = field(repr=False)

    @property
    def label(self) -> str:
        return f"{self.family.value}_{self.rank}"

    @property
    def doubled_root(self):
        """The extra root 2e_n recorded for BC (None otherwise)."""
        if self.family is Family.BC:
            return tuple(Fraction(2) if i == self.rank - 1 else Fraction(0) for i in range(self.rank))
        return None

    def neighbours(self, i: int) -> list[int]:
        return sorted({b for a, b in self.edges if a == i} | {a for a, b in self.edges if b == i})

    def components(self, subset) -> list[frozenset]:
        """Connected components of the Dynkin subgraph induced on ``subset`` (0-based)."""
        remaining = set(subset)
        comps = []
        while remaining:
            start = remaining.pop()
            comp = {start}
            queue = deque([start])
            while queue:
                a = queue.popleft()
                for b in self.neighbours(a):
                    if b in remaining:
                        remaining.remove(b)
                        comp.add(b)
                        queue.append(b)
            comps.append(frozenset(comp))
        return sorted(comps, key=min)

    @property
    def is_irreducible(self) -> bool:
        return len(self.components(range(self.rank))) == 1

    def end_nodes(self) -> list[int]:
        """Nodes whose removal leaves the Dynkin graph connected."""
        out = []
        for i in range(self.rank):
            rest = [j for j in range(self.rank) if j != i]
            if len(self.components(rest)) <= 1:
                out.append(i)
        return out

    def check_vector(self, v: Sequence) -> tuple:
        v = as_vector(v)
        if len(v) != self.ambient:
            raise DimensionError(f"{self.label} expects {self.ambient} coordinates, got {len(v)}")
        if self.family is Family.A:
            s = sum(v)
            bad = s != 0 if is_exact(v) else abs(s) > 1e-9 * max(1.0, max(abs(t) for t in v))
            if bad:
                raise DimensionError(f"A-type vectors must have zero coordinate sum (got {s})")
        return v


def make_system(family, n: int) -> RestrictedRootSystem:
    family = Family(family)
    if n < _MIN_RANK[family]:
        raise InvalidRank(f"{family.value}_{n}: rank must be at least {_MIN_RANK[family]}")
    F = Fraction
    amb = n + 1 if family is Family.A else n

    def unit(*pairs):
        v = [F(0)] * amb
        for i, c in pairs:
            v[i] += F(c)
        return tuple(v)

    roots = [unit((i, 1), (i + 1, -1)) for i in range(n if family is Family.A else n - 1)]
    if family in (Family.B, Family.BC):
        roots.append(unit((n - 1, 1)))
    elif family is Family.C:
        roots.append(unit((n - 1, 2)))
    elif family is Family.D:
        roots.append(unit((n - 2, 1), (n - 1, 1)))

    if family is Family.A:
        # projection of e_1+...+e_j onto the zero-sum hyperplane
        cw = [tuple(F(n + 1 - j, n + 1) if i < j else F(-j, n + 1) for i in range(amb))
              for j in range(1, n + 1)]
    else:
        cw = [tuple(F(1) if i < j else F(0) for i in range(n)) for j in range(1, n + 1)]
        if family is Family.C:
            cw[-1] = tuple(F(1, 2) for _ in range(n))
        elif family is Family.D:
            cw[-2] = tuple(F(1, 2) if i < n - 1 else F(-1, 2) for i in range(n))
            cw[-1] = tuple(F(1, 2) for _ in range(n))

    edges = {(i, i + 1) for i in range(n - 1)}
    if family is Family.D:
        edges = {(i, i + 1) for i in range(n - 2)}
        if n >= 3:
            edges.add((n - 3, n - 1))
    return RestrictedRootSystem(family, n, tuple(roots), tuple(cw), amb, frozenset(edges))


@dataclass(frozen=True)
class ChamberVector:
    """A vector with its dominant representative.

    ``witness = (perm, signs)`` encodes the Weyl element ``w`` with
    ``dominant[i] = signs[i] * coords[perm[i]]``.
    """

    coords: tuple
    dominant: tuple
    witness: tuple

    @property
    def exact(self) -> bool:
        return is_exact(self.coords)


def apply_witness(witness, v: Sequence) -> tuple:
    perm, signs = witness
    return tuple(s * v[p] for p, s in zip(perm, signs))


def apply_witness_inverse(witness, u: Sequence) -> tuple:
    """Return ``q`` with ``apply_witness(witness, q) == u``."""
    perm, signs = witness
    q = [None] * len(u)
    for i, (p, s) in enumerate(zip(perm, signs)):
        q[p] = s * u[i]
    return tuple(q)


def dominant(sys: RestrictedRootSystem, v: Sequence) -> ChamberVector:
    v = sys.check_vector(v)
    n = len(v)
    if sys.family is Family.A:
        perm = sorted(range(n), key=lambda i: -v[i])
        signs = [1] * n
    else:
        perm = sorted(range(n), key=lambda i: -abs(v[i]))
        signs = [-1 if v[p] < 0 else 1 for p in perm]
        if sys.family is Family.D and signs.count(-1) % 2 == 1:
            # even sign changes only: push the leftover sign onto the smallest entry
            signs[-1] = -signs[-1]
    witness = (tuple(perm), tuple(signs))
    return ChamberVector(v, apply_witness(witness, v), witness)


def simple_root_values(sys: RestrictedRootSystem, v: Sequence) -> tuple:
    v = sys.check_vector(v)
    return tuple(dot(r, v) for r in sys.simple_roots)


def mu_values(sys: RestrictedRootSystem, v: Sequence) -> tuple:
    """Values of the dual basis functionals mu_j (pairing with the coweights)."""
    v = sys.check_vector(v)
    return tuple(dot(h, v) for h in sys.coweights)


def in_chamber(sys: RestrictedRootSystem, v: Sequence, tol: float = CHAMBER_TOL) -> bool:
    vals = simple_root_values(sys, v)
    if is_exact(vals):
        return all(b >= 0 for b in vals)
    return all(b >= -tol for b in vals)


def _reflections(sys: RestrictedRootSystem):
    n = sys.rank
    swaps = range(sys.ambient - 1) if sys.family is Family.A else range(n - 1)
    out = []
    for i in swaps:
        out.append(lambda v, i=i: v[:i] + (v[i + 1], v[i]) + v[i + 2:])
    if sys.family in (Family.B, Family.BC, Family.C):
        out.append(lambda v: v[:-1] + (-v[-1],))
    elif sys.family is Family.D:
        out.append(lambda v: v[:-2] + (-v[-1], -v[-2]))
    return out


def weyl_orbit(sys: RestrictedRootSystem, v: Sequence, cap: int = DEFAULT_ORBIT_CAP) -> set:
    """Full W-orbit of ``v`` by breadth-first search over simple reflections.

    Reflections only permute and negate coordinates, so float orbits are
    deduplicated exactly as well.
    """
    v = sys.check_vector(v)
    refl = _reflections(sys)
    seen = {v}
    queue = deque([v])
    while queue:
        u = queue.popleft()
        for r in refl:
            w = r(u)
            if w not in seen:
                seen.add(w)
                if len(seen) > cap:
                    raise OrbitTooLarge(f"orbit of {sys.label} exceeds cap {cap}")
                queue.append(w)
    return seen


def weyl_group_order(sys: RestrictedRootSystem) -> int:
    from math import factorial

    n = sys.rank
    if sys.family is Family.A:
        return factorial(n + 1)
    if sys.family is Family.D:
        return 2 ** (n - 1) * factorial(n)
    return 2**n * factorial(n)


def in_dual_cone(sys: RestrictedRootSystem, v: Sequence, tol: float = CHAMBER_TOL) -> bool:
    """Membership in the cone T = {mu_j >= 0 for all j}."""
    vals = mu_values(sys, v)
    if is_exact(vals):
        return all(m >= 0 for m in vals)
    return all(m >= -tol for m in vals)
