"""The classical polar orbitopes: model spaces, a-coordinates and membership.

Each family fixes a matrix model space ``p`` with a compact group acting on
it, a maximal abelian subspace ``a`` of diagonal (or 2x2-block) matrices and
the restricted root system governing the chamber.  Inner products are the
trace form ``<x, y> = Re tr(x* y)``; ``scale`` is the trace-form norm squared
of a unit a-coordinate.

Hermitian families keep their trace: a-coordinates are the centered
eigenvalues (a zero-sum A-type vector) and the mean eigenvalue is carried as
``shift``.
"""
from __future__ import annotations

import enum
import json
from dataclasses import dataclass, field
from fractions import Fraction
from functools import cached_property
from typing import Sequence

import numpy as np

from .errors import InvalidRank, ShapeMismatch, SpecError, SymmetryViolation
from .matrix_core import (
    QMatrix,
    haar_orthogonal,
    haar_symplectic,
    haar_unitary,
    hermitian_eigenvalues,
    pfaffian_sign,
    singular_values,
    trace_form,
)
from .root_system import (
    ChamberVector,
    Family,
    RestrictedRootSystem,
    dominant,
    is_exact,
    make_system,
)

SYMMETRY_RTOL = 1e-9
BOUNDARY_RTOL = 1e-8


class Field(str, enum.Enum):
    R = "R"
    C = "C"
    H = "H"


class SpaceKind(str, enum.Enum):
    RECT = "rect"
    HERM = "herm"
    SKEW_HERM = "skew_herm"
    SYM = "sym"
    SKEW_SYM = "skew_sym"


class Tag(str, enum.Enum):
    RectReal = "RectReal"
    RectComplex = "RectComplex"
    RectQuat = "RectQuat"
    SquareRealSpecial = "SquareRealSpecial"
    HermReal = "HermReal"
    HermComplex = "HermComplex"
    HermQuat = "HermQuat"
    SkewReal = "SkewReal"
    SkewQuat = "SkewQuat"
    SymComplex = "SymComplex"
    SkewSymComplex = "SkewSymComplex"


_TAG_INFO = {
    # tag: (field, space kind, minimal n)
    Tag.RectReal: (Field.R, SpaceKind.RECT, 1),
    Tag.RectComplex: (Field.C, SpaceKind.RECT, 1),
    Tag.RectQuat: (Field.H, SpaceKind.RECT, 1),
    Tag.SquareRealSpecial: (Field.R, SpaceKind.RECT, 2),
    Tag.HermReal: (Field.R, SpaceKind.HERM, 2),
    Tag.HermComplex: (Field.C, SpaceKind.HERM, 2),
    Tag.HermQuat: (Field.H, SpaceKind.HERM, 2),
    Tag.SkewReal: (Field.R, SpaceKind.SKEW_HERM, 3),
    Tag.SkewQuat: (Field.H, SpaceKind.SKEW_HERM, 1),
    Tag.SymComplex: (Field.C, SpaceKind.SYM, 1),
    Tag.SkewSymComplex: (Field.C, SpaceKind.SKEW_SYM, 2),
}

HERM_TAGS = frozenset({Tag.HermReal, Tag.HermComplex, Tag.HermQuat})
PAIRED_TAGS = frozenset({Tag.SkewReal, Tag.SkewSymComplex})


class Verdict(str, enum.Enum):
    INSIDE = "Inside"
    BOUNDARY = "Boundary"
    OUTSIDE = "Outside"

    @property
    def feasible(self) -> bool:
        return self is not Verdict.OUTSIDE


@dataclass(frozen=True)
class MembershipResult:
    verdict: Verdict
    slack: float  # worst (smallest) slack, negative when violated
    constraint: str
    eps: float

    def to_json(self) -> dict:
        return {"verdict": self.verdict.value, "slack": self.slack,
                "constraint": self.constraint, "eps": self.eps}


def classify(slacks: Sequence[tuple[str, float]], eps: float) -> MembershipResult:
    name, worst = min(slacks, key=lambda t: t[1])
    if worst < -eps:
        verdict = Verdict.OUTSIDE
    elif worst <= eps:
        verdict = Verdict.BOUNDARY
    else:
        verdict = Verdict.INSIDE
    return MembershipResult(verdict, float(worst), name, eps)


# --------------------------------------------------------------------------
# model spaces

_QUNITS = (np.array([1.0, 0, 0, 0]), np.array([0, 1.0, 0, 0]),
           np.array([0, 0, 1.0, 0]), np.array([0, 0, 0, 1.0]))


@dataclass(frozen=True)
class ModelSpace:
    """A real vector space of matrices with a fixed orthogonal coordinate basis.

    Basis order: entries row-major, and within an entry the real, imaginary
    (or quaternion 1, i, j, k) parts.  Hermitian-type spaces use upper
    triangle positions (i <= j, or i < j for skew types).
    """

    kind: SpaceKind
    field: Field
    m: int
    n: int

    @property
    def shape(self) -> tuple[int, int]:
        return (self.m, self.n)

    def zero(self):
        if self.field is Field.H:
            return QMatrix.zeros(self.m, self.n)
        dtype = complex if self.field is Field.C else float
        return np.zeros((self.m, self.n), dtype=dtype)

    @cached_property
    def _basis(self) -> list:
        units = {Field.R: (1.0,), Field.C: (1.0, 1j), Field.H: _QUNITS}[self.field]
        out = []
        quat = self.field is Field.H

        def entry(pairs):
            # pairs: list of (i, j, unit) to place
            M = self.zero()
            for i, j, u in pairs:
                if quat:
                    M.data[i, j] += u
                else:
                    M[i, j] += u
            return M

        def qconj(u):
            return u * np.array([1.0, -1, -1, -1]) if quat else np.conj(u)

        for i in range(self.m):
            for j in range(self.n):
                if self.kind is SpaceKind.RECT:
                    out.extend(entry([(i, j, u)]) for u in units)
                elif self.kind in (SpaceKind.HERM, SpaceKind.SKEW_HERM):
                    sign = 1 if self.kind is SpaceKind.HERM else -1
                    if i == j:
                        # diagonal entries are real (herm) or pure imaginary (skew)
                        diag = units[:1] if sign == 1 else units[1:]
                        out.extend(entry([(i, i, u)]) for u in diag)
                    elif i < j:
                        out.extend(entry([(i, j, u), (j, i, sign * qconj(u))]) for u in units)
                elif self.kind is SpaceKind.SYM and i <= j:
                    out.extend(entry([(i, j, u), (j, i, u)]) if i < j else entry([(i, i, u)])
                               for u in units)
                elif self.kind is SpaceKind.SKEW_SYM and i < j:
                    out.extend(entry([(i, j, u), (j, i, -u)]) for u in units)
        return out

    def basis(self) -> list:
        return list(self._basis)

    @property
    def real_dim(self) -> int:
        return len(self._basis)

    def to_coords(self, y) -> np.ndarray:
        y = self.check(y)
        return np.array([trace_form(B, y) / trace_form(B, B) for B in self._basis])

    def from_coords(self, c: Sequence[float]):
        c = np.asarray(c, dtype=float)
        if c.shape != (self.real_dim,):
            raise ShapeMismatch(f"expected {self.real_dim} coordinates, got {c.shape}")
        if self.field is Field.H:
            data = np.tensordot(c, np.stack([B.data for B in self._basis]), axes=1)
            return QMatrix(data)
        return np.tensordot(c, np.stack(self._basis), axes=1)

    def random(self, rng: np.random.Generator, scale: float = 1.0):
        return self.from_coords(scale * rng.standard_normal(self.real_dim))

    def check(self, y):
        """Validate shape, field and symmetry; return y as an array or QMatrix."""
        if self.field is Field.H:
            if not isinstance(y, QMatrix):
                raise ShapeMismatch("quaternion model space expects a QMatrix")
        else:
            if isinstance(y, QMatrix):
                raise ShapeMismatch(f"{self.field.value} model space got a quaternion matrix")
            y = np.asarray(y)
            if self.field is Field.R:
                if np.iscomplexobj(y):
                    if np.abs(y.imag).max(initial=0.0) > SYMMETRY_RTOL * max(1.0, np.abs(y).max()):
                        raise ShapeMismatch("real model space got complex entries")
                    y = y.real
                y = np.asarray(y, dtype=float)
            else:
                y = np.asarray(y, dtype=complex)
        if tuple(y.shape) != self.shape:
            raise ShapeMismatch(f"expected shape {self.shape}, got {tuple(y.shape)}")
        if self.kind is not SpaceKind.RECT:
            self._check_symmetry(y)
        return y

    def _check_symmetry(self, y) -> None:
        if self.kind is SpaceKind.HERM:
            dev, what = _conj_t(y) - y, "hermitian"
        elif self.kind is SpaceKind.SKEW_HERM:
            dev, what = _conj_t(y) + y, "skew-hermitian"
        elif self.kind is SpaceKind.SYM:
            dev, what = np.transpose(y) - y, "symmetric"
        else:
            dev, what = np.transpose(y) + y, "skew-symmetric"
        size = _norm(dev)
        if size > SYMMETRY_RTOL * max(1.0, _norm(y)):
            raise SymmetryViolation(f"matrix is not {what} (deviation {size:.3e})")


def _conj_t(y):
    return y.conj_t() if isinstance(y, QMatrix) else np.conj(np.transpose(y))


def _norm(y) -> float:
    return y.norm() if isinstance(y, QMatrix) else float(np.linalg.norm(y))


# --------------------------------------------------------------------------
# families

@dataclass(frozen=True)
class OrbitopeFamily:
    tag: Tag
    m: int
    n: int

    def __post_init__(self):
        object.__setattr__(self, "tag", Tag(self.tag))
        _, kind, nmin = _TAG_INFO[self.tag]
        if self.n < nmin:
            raise InvalidRank(f"{self.tag.value} needs n >= {nmin}, got n={self.n}")
        if kind is SpaceKind.RECT and self.tag is not Tag.SquareRealSpecial:
            if self.tag is Tag.RectReal and self.m == self.n:
                raise SpecError("RectReal with m = n is the exceptional square case; "
                                "use SquareRealSpecial (SO(n) x SO(n), type D_n)")
            if self.m < self.n:
                raise SpecError(f"{self.tag.value} needs m >= n, got {self.m}x{self.n}; "
                                "transpose the input")
        elif self.m != self.n:
            raise SpecError(f"{self.tag.value} acts on square matrices, got {self.m}x{self.n}")

    @classmethod
    def make(cls, tag, n: int, m: int | None = None) -> "OrbitopeFamily":
        return cls(Tag(tag), n if m is None else m, n)

    @property
    def field(self) -> Field:
        return _TAG_INFO[self.tag][0]

    @cached_property
    def space(self) -> ModelSpace:
        return ModelSpace(_TAG_INFO[self.tag][1], self.field, self.m, self.n)

    @property
    def is_hermitian(self) -> bool:
        return self.tag in HERM_TAGS

    @property
    def root_family(self) -> Family:
        t = self.tag
        if t is Tag.RectReal:
            return Family.B
        if t in (Tag.RectComplex, Tag.RectQuat):
            return Family.BC if self.m > self.n else Family.C
        if t is Tag.SquareRealSpecial:
            return Family.D
        if t in HERM_TAGS:
            return Family.A
        if t is Tag.SkewReal:
            return Family.B if self.n % 2 else Family.D
        return Family.C

    @property
    def rank(self) -> int:
        if self.tag in HERM_TAGS:
            return self.n - 1
        if self.tag in PAIRED_TAGS:
            return self.n // 2
        return self.n

    @property
    def scale(self) -> int:
        """Trace-form norm squared of a unit a-coordinate."""
        return 2 if self.tag in PAIRED_TAGS else 1

    @cached_property
    def system(self) -> RestrictedRootSystem:
        return make_system(self.root_family, self.rank)

    @property
    def coord_len(self) -> int:
        """Length of the a-coordinate vector (n for hermitian families)."""
        return self.system.ambient

    @property
    def group(self) -> str:
        g = {Field.R: "SO", Field.C: "U", Field.H: "Sp"}[self.field]
        if self.space.kind is SpaceKind.RECT:
            return f"{g}({self.m}) x {g}({self.n})"
        return f"{g}({self.n})"

    @property
    def action(self) -> str:
        kind = self.space.kind
        if kind is SpaceKind.RECT:
            return "u y v*"
        if kind in (SpaceKind.SYM, SpaceKind.SKEW_SYM):
            return "g y g^t"
        return "g y g*"

    def label(self) -> str:
        dims = f"{self.m}x{self.n}" if self.space.kind is SpaceKind.RECT else f"n={self.n}"
        return f"{self.tag.value}({dims})"


# --------------------------------------------------------------------------
# a-embedding and projection

def embed_a(family: OrbitopeFamily, v: Sequence):
    """Model-space matrix of the a-coordinate vector ``v`` (floats).

    Hermitian families take the full eigenvalue vector (shift included).
    Paired skew families place ``v_i`` in the 2x2 block at rows 2i, 2i+1.
    """
    v = [float(t) for t in v]
    expected = family.n if family.is_hermitian else family.rank
    if len(v) != expected:
        raise ShapeMismatch(f"{family.label()} a-vector needs {expected} entries, got {len(v)}")
    Y = family.space.zero()
    tag = family.tag
    if tag in PAIRED_TAGS:
        for i, t in enumerate(v):
            Y[2 * i, 2 * i + 1] = t
            Y[2 * i + 1, 2 * i] = -t
    elif tag is Tag.SkewQuat:
        for i, t in enumerate(v):
            Y.data[i, i, 1] = t
    elif family.field is Field.H:
        for i, t in enumerate(v):
            Y.data[i, i, 0] = t
    else:
        for i, t in enumerate(v):
            Y[i, i] = t
    return Y


def project_to_a(family: OrbitopeFamily, y) -> np.ndarray:
    """Orthogonal projection onto a, read off in a-coordinates.

    Hermitian families return the full real diagonal (trace included).
    """
    y = family.space.check(y)
    tag = family.tag
    if tag in PAIRED_TAGS:
        return np.array([np.real(y[2 * i, 2 * i + 1]) for i in range(family.rank)])
    if tag is Tag.SkewQuat:
        return y.data[np.arange(family.n), np.arange(family.n), 1].copy()
    if family.field is Field.H:
        return y.data[np.arange(family.n), np.arange(family.n), 0].copy()
    return np.real(np.diagonal(y)).copy()


def center(v: Sequence) -> tuple:
    """Subtract the mean (hermitian families); exact input stays exact."""
    if is_exact(v):
        mean = sum(Fraction(t) for t in v) / len(v)
        return tuple(Fraction(t) - mean for t in v)
    mean = float(np.mean([float(t) for t in v]))
    return tuple(float(t) - mean for t in v)


def spectrum(family: OrbitopeFamily, y) -> np.ndarray:
    """Singular values (rectangular and symmetric types) or eigenvalues
    (hermitian types), sorted descending, with their natural multiplicity."""
    y = family.space.check(y)
    if family.is_hermitian:
        return hermitian_eigenvalues(y)
    return singular_values(y)


def a_coordinates(family: OrbitopeFamily, y) -> ChamberVector:
    """Dominant a-coordinates of ``y`` (centered eigenvalues for hermitian types)."""
    y = family.space.check(y)
    tag = family.tag
    if family.is_hermitian:
        vals = tuple(center(hermitian_eigenvalues(y)))
    elif tag in PAIRED_TAGS:
        vals = tuple(singular_values(y)[0:2 * family.rank:2])
        if tag is Tag.SkewReal and family.root_family is Family.D:
            sgn = _pf_sign(y)
            vals = vals[:-1] + (sgn * vals[-1],)
    else:
        vals = tuple(singular_values(y))
        if tag is Tag.SquareRealSpecial:
            sgn = _det_sign(y)
            vals = vals[:-1] + (sgn * vals[-1],)
    return dominant(family.system, tuple(float(t) for t in vals))


def _det_sign(y) -> int:
    d = np.linalg.det(y)
    return -1 if d < 0 else 1


def _pf_sign(y) -> int:
    s = pfaffian_sign(y)
    return -1 if s < 0 else 1


# --------------------------------------------------------------------------
# specs

@dataclass(frozen=True)
class OrbitopeSpec:
    """A family together with a base point x, stored by its dominant a-coordinates.

    ``shift`` is the mean eigenvalue for hermitian families and zero otherwise.
    """

    family: OrbitopeFamily
    x: ChamberVector
    shift: object = 0
    base: object = field(default=None, repr=False, compare=False)

    @classmethod
    def from_coords(cls, family: OrbitopeFamily, coords: Sequence) -> "OrbitopeSpec":
        coords = tuple(coords)
        if family.is_hermitian:
            if len(coords) != family.n:
                raise ShapeMismatch(f"{family.label()} needs {family.n} eigenvalues")
            centered = center(coords)
            shift = (sum(Fraction(t) for t in coords) / len(coords) if is_exact(coords)
                     else float(np.mean([float(t) for t in coords])))
            return cls(family, dominant(family.system, centered), shift)
        if len(coords) != family.rank:
            raise ShapeMismatch(f"{family.label()} needs {family.rank} a-coordinates, "
                                f"got {len(coords)}")
        return cls(family, dominant(family.system, coords))

    @classmethod
    def from_matrix(cls, family: OrbitopeFamily, y) -> "OrbitopeSpec":
        y = family.space.check(y)
        if family.is_hermitian:
            ev = hermitian_eigenvalues(y)
            spec = cls.from_coords(family, tuple(float(t) for t in ev))
        else:
            spec = cls(family, a_coordinates(family, y))
        return cls(family, spec.x, spec.shift, base=y)

    @property
    def system(self) -> RestrictedRootSystem:
        return self.family.system

    @property
    def scale(self) -> int:
        return self.family.scale

    @property
    def exact(self) -> bool:
        return self.x.exact

    @property
    def full_coords(self) -> tuple:
        """Dominant coordinates with the shift restored (eigenvalues for hermitian)."""
        if self.family.is_hermitian:
            return tuple(t + self.shift for t in self.x.dominant)
        return self.x.dominant

    def matrix(self):
        """The a-embedded base point."""
        return embed_a(self.family, self.full_coords)

    def scaled(self, t) -> "OrbitopeSpec":
        return OrbitopeSpec.from_coords(self.family, tuple(t * c for c in self.full_coords))

    def tolerance(self) -> float:
        return BOUNDARY_RTOL * max(1.0, max((abs(float(c)) for c in self.full_coords),
                                            default=0.0))


# --------------------------------------------------------------------------
# membership via Ky Fan inequalities

def _partial(v: Sequence[float]) -> np.ndarray:
    return np.cumsum(np.asarray(v, dtype=float))


def reference_spectrum(spec: OrbitopeSpec) -> np.ndarray:
    """The spectrum of the base point, computed from its a-coordinates."""
    fam = spec.family
    x = np.array([float(t) for t in spec.full_coords])
    if fam.is_hermitian:
        return np.sort(x)[::-1]
    x = np.abs(x)
    if fam.tag in PAIRED_TAGS:
        sv = np.repeat(x, 2)
        if fam.n % 2:
            sv = np.append(sv, 0.0)
        return sv
    return np.sort(x)[::-1]


def membership(spec: OrbitopeSpec, y, eps: float | None = None) -> MembershipResult:
    """Decide y in O_x from singular values, eigenvalues, det and Pfaffian signs."""
    fam = spec.family
    y = fam.space.check(y)
    eps = spec.tolerance() if eps is None else eps
    sx = reference_spectrum(spec)
    sy = spectrum(fam, y)
    Px, Py = _partial(sx), _partial(sy)
    slacks: list[tuple[str, float]] = []
    tag = fam.tag

    if fam.is_hermitian:
        n = fam.n
        dtr = Px[-1] - Py[-1]
        if abs(dtr) > eps:
            return MembershipResult(Verdict.OUTSIDE, -abs(float(dtr)), "trace", eps)
        slacks = [(f"eig_sum_{k}", Px[k - 1] - Py[k - 1]) for k in range(1, n)]
    elif tag is Tag.SkewReal:
        slacks = [(f"ky_fan_{k}", Px[k - 1] - Py[k - 1]) for k in range(2, 2 * fam.rank + 1, 2)]
        if fam.root_family is Family.D:
            m = fam.rank
            xm = float(spec.x.dominant[-1])
            ym = float(a_coordinates(fam, y).dominant[-1])
            half_gap = 0.5 * (Px[2 * m - 3] - Py[2 * m - 3])
            slacks.append(("pfaffian_sign", half_gap - abs(xm - ym)))
    elif tag is Tag.SquareRealSpecial:
        n = fam.n
        slacks = [(f"ky_fan_{k}", Px[k - 1] - Py[k - 1]) for k in range(1, n)]
        xn = float(spec.x.dominant[-1])
        yn = float(_det_sign(y)) * float(sy[-1])
        slacks.append(("det_sign", (Px[n - 2] - Py[n - 2]) - abs(xn - yn)))
    else:
        slacks = [(f"ky_fan_{k}", Px[k - 1] - Py[k - 1]) for k in range(1, len(sx) + 1)]
    return classify([(nm, float(s)) for nm, s in slacks], eps)


def support_function(spec: OrbitopeSpec, d) -> float:
    """max over the orbit of <g x, d> (trace form)."""
    fam = spec.family
    d = fam.space.check(d)
    if fam.is_hermitian:
        ev = hermitian_eigenvalues(d)
        return float(np.dot([float(t) for t in spec.full_coords], ev))
    ad = a_coordinates(fam, d).dominant
    return float(fam.scale * np.dot([float(t) for t in spec.x.dominant], ad))


# --------------------------------------------------------------------------
# orbit sampling

def random_group_pair(family: OrbitopeFamily, rng: np.random.Generator):
    """Haar-distributed (g, h) for rectangular families, or (g, None)."""
    field_, kind = family.field, family.space.kind

    def draw(k):
        if field_ is Field.R:
            return haar_orthogonal(k, rng, special=True)
        if field_ is Field.C:
            return haar_unitary(k, rng)
        return haar_symplectic(k, rng)

    if kind is SpaceKind.RECT:
        return draw(family.m), draw(family.n)
    return draw(family.n), None


def act(family: OrbitopeFamily, g, h, y):
    """Apply a group element: u y v* (rectangular), g y g^t or g y g*."""
    kind = family.space.kind
    if kind is SpaceKind.RECT:
        return g @ y @ h.conj_t() if isinstance(y, QMatrix) else g @ y @ np.conj(h).T
    if kind in (SpaceKind.SYM, SpaceKind.SKEW_SYM):
        return g @ y @ g.T
    if isinstance(y, QMatrix):
        return g @ y @ g.conj_t()
    return g @ y @ np.conj(g).T


def orbit_sample(spec: OrbitopeSpec, count: int, seed=0) -> list:
    """``count`` points g.x with Haar-random g; deterministic in ``seed``."""
    if count < 0:
        raise ValueError("count must be nonnegative")
    rng = np.random.default_rng(seed)
    x = spec.matrix()
    out = []
    for _ in range(count):
        g, h = random_group_pair(spec.family, rng)
        out.append(act(spec.family, g, h, x))
    return out


# --------------------------------------------------------------------------
# JSON input/output

def parse_scalar(v):
    """JSON number or "p/q" string -> Fraction (exact) or float."""
    if isinstance(v, bool):
        raise SpecError(f"booleans are not numbers: {v!r}")
    if isinstance(v, int):
        return Fraction(v)
    if isinstance(v, float):
        return v
    if isinstance(v, str):
        try:
            return Fraction(v.strip())
        except (ValueError, ZeroDivisionError) as exc:
            raise SpecError(f"cannot parse rational {v!r}") from exc
    raise SpecError(f"expected a number, got {v!r}")


def parse_vector(values) -> tuple:
    if not isinstance(values, list) or not values:
        raise SpecError("'x' must be a non-empty list of numbers")
    vals = tuple(parse_scalar(v) for v in values)
    if not is_exact(vals):
        vals = tuple(float(v) for v in vals)
    return vals


def matrix_from_json(obj, expected_field: Field | None = None):
    """{"rows","cols","field","entries"} -> numpy array or QMatrix."""
    if not isinstance(obj, dict):
        raise SpecError("matrix must be a JSON object with rows, cols, field, entries")
    try:
        rows, cols, entries = int(obj["rows"]), int(obj["cols"]), obj["entries"]
        fld = Field(obj.get("field", expected_field.value if expected_field else "R"))
    except (KeyError, ValueError, TypeError) as exc:
        raise SpecError(f"bad matrix object: {exc}") from exc
    if expected_field is not None and fld is not expected_field:
        raise SpecError(f"matrix field {fld.value} does not match {expected_field.value}")
    if not isinstance(entries, list) or len(entries) != rows or any(
            not isinstance(r, list) or len(r) != cols for r in entries):
        raise SpecError(f"entries must be a {rows}x{cols} nested list")
    width = {Field.R: 1, Field.C: 2, Field.H: 4}[fld]
    data = np.zeros((rows, cols, width))
    for i, row in enumerate(entries):
        for j, e in enumerate(row):
            parts = [e] if width == 1 and not isinstance(e, list) else e
            if not isinstance(parts, list) or len(parts) != width:
                raise SpecError(f"entry ({i},{j}) must have {width} component(s): {e!r}")
            data[i, j] = [float(parse_scalar(p)) for p in parts]
    if fld is Field.R:
        return data[:, :, 0]
    if fld is Field.C:
        return data[:, :, 0] + 1j * data[:, :, 1]
    return QMatrix(data)


def matrix_to_json(y) -> dict:
    if isinstance(y, QMatrix):
        rows, cols = y.shape
        return {"rows": rows, "cols": cols, "field": "H", "entries": y.data.tolist()}
    y = np.asarray(y)
    rows, cols = y.shape
    if np.iscomplexobj(y):
        entries = [[[float(z.real), float(z.imag)] for z in row] for row in y]
        return {"rows": rows, "cols": cols, "field": "C", "entries": entries}
    return {"rows": rows, "cols": cols, "field": "R", "entries": y.astype(float).tolist()}


def spec_from_json(obj) -> OrbitopeSpec:
    if not isinstance(obj, dict):
        raise SpecError("spec must be a JSON object")
    try:
        tag = Tag(obj["family"])
    except KeyError as exc:
        raise SpecError("spec is missing 'family'") from exc
    except ValueError as exc:
        names = ", ".join(t.value for t in Tag)
        raise SpecError(f"unknown family {obj['family']!r}; expected one of {names}") from exc
    fld = _TAG_INFO[tag][0]
    if "field" in obj and obj["field"] != fld.value:
        raise SpecError(f"family {tag.value} is over {fld.value}, spec says {obj['field']!r}")
    if "n" not in obj:
        raise SpecError("spec is missing 'n'")
    try:
        n = int(obj["n"])
        m = int(obj.get("m", n))
    except (TypeError, ValueError) as exc:
        raise SpecError(f"'m' and 'n' must be integers: {exc}") from exc
    family = OrbitopeFamily(tag, m, n)
    if "x" not in obj:
        raise SpecError("spec is missing 'x'")
    x = obj["x"]
    if isinstance(x, dict):
        return OrbitopeSpec.from_matrix(family, matrix_from_json(x, fld))
    return OrbitopeSpec.from_coords(family, parse_vector(x))


def load_spec(path) -> OrbitopeSpec:
    with open(path) as fh:
        try:
            obj = json.load(fh)
        except json.JSONDecodeError as exc:
            raise SpecError(f"{path}: invalid JSON at line {exc.lineno}, column {exc.colno}: "
                            f"{exc.msg}") from exc
    return spec_from_json(obj)


def scalar_to_json(v):
    if isinstance(v, Fraction):
        return str(v) if v.denominator != 1 else int(v)
    return float(v)


def spec_to_json(spec: OrbitopeSpec) -> dict:
    fam = spec.family
    return {"family": fam.tag.value, "field": fam.field.value, "m": fam.m, "n": fam.n,
            "x": [scalar_to_json(v) for v in spec.full_coords]}


__all__ = [
    "Field",
    "MembershipResult",
    "ModelSpace",
    "OrbitopeFamily",
    "OrbitopeSpec",
    "SpaceKind",
    "Tag",
    "Verdict",
    "a_coordinates",
    "act",
    "embed_a",
    "load_spec",
    "matrix_from_json",
    "matrix_to_json",
    "membership",
    "orbit_sample",
    "project_to_a",
    "support_function",
    "spec_from_json",
    "spec_to_json",
]
