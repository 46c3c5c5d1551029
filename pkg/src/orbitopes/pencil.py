"""Linear matrix inequalities for orbitopes and Ky Fan balls, and SDPA export.

A pencil is a list of blocks ``B(y) = level * I - L(y)`` with ``L`` linear on
a real model space; ``y`` is feasible when every block is positive
semidefinite.  Blocks are evaluated lazily; explicit coefficient matrices
``A_0, A_1, ...`` (with ``B(y) = A_0 + sum_i y_i A_i`` in the model space's
coordinate basis) are produced on request for export.
"""
from __future__ import annotations

from dataclasses import dataclass, field, replace
from fractions import Fraction
from math import comb
from typing import Callable, Sequence

import numpy as np

from .catalog import (
    Field,
    MembershipResult,
    ModelSpace,
    OrbitopeSpec,
    SpaceKind,
    Tag,
    classify,
    scalar_to_json,
)
from .errors import InvalidRank, NotMaterialized, OrbitopeError, ShapeMismatch, SizeCapExceeded
from .matrix_core import (
    EXTERIOR_SIZE_CAP,
    eig_hermitian,
    embed_quaternion,
    exterior_power_additive,
    hermitian_dilation,
)
from .momentum_polytope import MomentumPolytope
from .root_system import Family
from .spin_rep import MAX_CLIFFORD_N, build_clifford, half_spin_evaluate

PENCIL_RTOL = 1e-8


@dataclass(frozen=True)
class PencilBlock:
    kind: str  # exterior_k, half_spin_plus, half_spin_minus, trace_upper, trace_lower
    size: int
    level: object  # exact Fraction when the base point is exact
    operator: Callable = field(repr=False, compare=False)
    weight: tuple = ()  # highest weight of L in a-coordinates
    index: int | None = None  # 1-based coweight index the block enforces
    power: int | None = None  # exterior power degree
    complex: bool = False
    coeffs: tuple | None = field(default=None, repr=False, compare=False)

    @property
    def name(self) -> str:
        return self.kind if self.index is None else f"{self.kind}[mu_{self.index}]"

    def linear(self, y) -> np.ndarray:
        return self.operator(y)

    def evaluate(self, y) -> np.ndarray:
        L = self.operator(y)
        return float(self.level) * np.eye(self.size) - L

    def to_json(self) -> dict:
        out = {"kind": self.kind, "size": self.size, "level": scalar_to_json(self.level)}
        if self.index is not None:
            out["index"] = self.index
        if self.power is not None:
            out["power"] = self.power
        out["field"] = "C" if self.complex else "R"
        return out


@dataclass(frozen=True)
class LinearPencil:
    space: ModelSpace
    blocks: tuple
    description: str = ""

    @property
    def dim(self) -> int:
        return self.space.real_dim

    @property
    def sizes(self) -> list[int]:
        return [b.size for b in self.blocks]

    @property
    def materialized(self) -> bool:
        return all(b.coeffs is not None for b in self.blocks)

    @property
    def is_real(self) -> bool:
        return not any(b.complex for b in self.blocks)

    def evaluate(self, y) -> list[np.ndarray]:
        y = self.space.check(y)
        return [b.evaluate(y) for b in self.blocks]

    def evaluate_coords(self, c: Sequence[float]) -> list[np.ndarray]:
        """Evaluate from materialized coefficients: A_0 + sum c_i A_i."""
        if not self.materialized:
            raise NotMaterialized("pencil has no coefficient matrices; call materialize()")
        c = np.asarray(c, dtype=float)
        return [b.coeffs[0] + np.tensordot(c, np.stack(b.coeffs[1:]), axes=1)
                for b in self.blocks]

    def slacks(self, y) -> list[tuple[str, float]]:
        return [(b.name, float(eig_hermitian(M, check=False)[-1]))
                for b, M in zip(self.blocks, self.evaluate(y))]

    def default_eps(self) -> float:
        top = max((abs(float(b.level)) for b in self.blocks), default=0.0)
        return PENCIL_RTOL * max(1.0, top)

    def membership(self, y, eps: float | None = None) -> MembershipResult:
        eps = self.default_eps() if eps is None else eps
        return classify(self.slacks(y), eps)

    def materialize(self) -> "LinearPencil":
        zero = self.space.zero()
        basis = self.space.basis()
        blocks = []
        for b in self.blocks:
            A0 = b.evaluate(zero)
            coeffs = [A0] + [b.evaluate(B) - A0 for B in basis]
            blocks.append(replace(b, coeffs=tuple(coeffs)))
        return replace(self, blocks=tuple(blocks))

    def metadata(self) -> dict:
        return {"dim": self.dim, "description": self.description,
                "space": {"kind": self.space.kind.value, "field": self.space.field.value,
                          "m": self.space.m, "n": self.space.n},
                "blocks": [b.to_json() for b in self.blocks]}


# --------------------------------------------------------------------------
# realification

def realify_matrix(H: np.ndarray) -> np.ndarray:
    """[[P, -Q], [Q, P]] for H = P + iQ; real symmetric when H is hermitian."""
    H = np.asarray(H)
    P, Q = H.real, H.imag
    return np.block([[P, -Q], [Q, P]])


def realify(pencil: LinearPencil) -> LinearPencil:
    """Replace complex hermitian blocks by their real doubled form; real blocks
    are kept as they are."""
    blocks = []
    for b in pencil.blocks:
        if not b.complex:
            blocks.append(b)
            continue
        op = b.operator
        coeffs = None if b.coeffs is None else tuple(realify_matrix(A) for A in b.coeffs)
        blocks.append(replace(b, size=2 * b.size, complex=False, coeffs=coeffs,
                              operator=lambda y, op=op: realify_matrix(op(y))))
    return replace(pencil, blocks=tuple(blocks))


# --------------------------------------------------------------------------
# natural hermitian images of model spaces

def natural_image(space: ModelSpace) -> tuple[Callable, int, bool, int]:
    """(map y -> hermitian matrix, multiplicity, complex?, matrix size).

    The multiplicity is how often each a-coordinate's eigenvalue repeats, so
    the k-th partial sum of a-coordinates is the top eigenvalue of the
    exterior power of degree multiplicity * k.
    """
    kind, fld, m, n = space.kind, space.field, space.m, space.n
    if kind is SpaceKind.RECT:
        if fld is Field.H:
            return (lambda y: hermitian_dilation(embed_quaternion(y))), 2, True, 2 * (m + n)
        return hermitian_dilation, 1, fld is Field.C, m + n
    if kind is SpaceKind.HERM:
        if fld is Field.H:
            return embed_quaternion, 2, True, 2 * n
        return (lambda y: np.asarray(y)), 1, fld is Field.C, n
    if kind is SpaceKind.SKEW_HERM:
        if fld is Field.H:
            return (lambda y: -1j * embed_quaternion(y)), 1, True, 2 * n
        return (lambda y: 1j * np.asarray(y)), 1, True, n
    if kind is SpaceKind.SYM:
        return hermitian_dilation, 1, True, 2 * n
    return hermitian_dilation, 2, True, 2 * n


def _exterior_block(image: Callable, N: int, k: int, level, weight, index, complex_,
                    cap: int) -> PencilBlock:
    size = comb(N, k)
    if size > cap:
        raise SizeCapExceeded(f"block exterior_{k} (mu_{index}) has size C({N},{k})={size}, "
                              f"above the cap {cap}")
    if k == 1:
        op = image
    else:
        op = lambda y: exterior_power_additive(image(y), k, cap=cap, check=False)  # noqa: E731
    return PencilBlock(f"exterior_{k}", size, level, op, tuple(weight), index, k, complex_)


def _half_spin_block(n: int, sign: str, X: Callable, level, weight, index,
                     kind: str) -> PencilBlock:
    if 2 * n > MAX_CLIFFORD_N:
        raise SizeCapExceeded(f"half-spin block of size 2^{n - 1} above the cap "
                              f"(rank <= {MAX_CLIFFORD_N // 2})")
    basis = build_clifford(2 * n)
    name = "half_spin_plus" if sign == "+" else "half_spin_minus"
    op = lambda y: half_spin_evaluate(basis, X(y), sign, kind=kind)  # noqa: E731
    return PencilBlock(name, 2 ** (n - 1), level, op, tuple(weight), index, None,
                       kind == "skew")


def _dot(u, v):
    return sum((a * b for a, b in zip(u, v)), Fraction(0) if _exact(u, v) else 0.0)


def _exact(*vs) -> bool:
    return all(isinstance(t, (int, Fraction)) for v in vs for t in v)


def constraint_weight(spec_or_family, j: int) -> tuple:
    """Highest weight (a-coordinates) of the block enforcing the mu_j constraint.

    ``j`` is 0-based.  The weight is a positive multiple of the coweight h_j.
    """
    fam = getattr(spec_or_family, "family", spec_or_family)
    r = fam.rank
    L = fam.coord_len
    if fam.root_family is Family.D and j >= r - 2:
        half = Fraction(1, 2)
        last = -half if j == r - 2 else half
        return tuple([half] * (r - 1) + [last])
    mult = natural_image(fam.space)[1]
    return tuple(Fraction(mult) if i <= j else Fraction(0) for i in range(L))


def constraint_block(spec: OrbitopeSpec, j: int, level, cap: int = EXTERIOR_SIZE_CAP,
                     centered: bool = False) -> PencilBlock:
    """Block ``level * I - rho_j(y)`` for the 0-based coweight index j.

    With ``centered`` the hermitian families use the traceless part of y.
    """
    fam = spec.family
    image, mult, complex_, N = natural_image(fam.space)
    if centered and fam.is_hermitian:
        base_image = image

        def image(y, base_image=base_image, n=fam.n):
            H = base_image(y)
            return H - (np.trace(H).real / H.shape[0]) * np.eye(H.shape[0])
    weight = constraint_weight(fam, j)
    r = fam.rank
    if fam.root_family is Family.D and j >= r - 2:
        sign = "-" if j == r - 2 else "+"
        if fam.tag is Tag.SquareRealSpecial:
            return _half_spin_block(r, sign, hermitian_dilation, level, weight, j + 1, "split")
        return _half_spin_block(r, sign, lambda y: 1j * np.asarray(y), level, weight, j + 1,
                                "skew")
    return _exterior_block(image, N, mult * (j + 1), level, weight, j + 1, complex_, cap)


def _trace_blocks(spec: OrbitopeSpec) -> list[PencilBlock]:
    fam = spec.family
    image, mult, complex_, N = natural_image(fam.space)
    tr = mult * sum(spec.full_coords)
    ones = tuple(Fraction(mult) for _ in range(fam.n))
    up = lambda y: np.array([[np.trace(image(y)).real]])  # noqa: E731
    down = lambda y: -up(y)  # noqa: E731
    return [PencilBlock("trace_upper", 1, tr, up, ones),
            PencilBlock("trace_lower", 1, -tr, down, tuple(-t for t in ones))]


def orbitope_pencil(spec: OrbitopeSpec, prune: bool = True,
                    cap: int = EXTERIOR_SIZE_CAP) -> LinearPencil:
    """One block per facet class of P_x (all coweights when x is degenerate).

    Block levels are the top eigenvalues of the blocks at the base point.
    """
    fam = spec.family
    P = MomentumPolytope(fam.system, spec.x)
    if prune and P.is_full_dimensional():
        indices = P.facet_indices()
    else:
        indices = tuple(range(fam.rank))
    x = spec.full_coords
    blocks = [constraint_block(spec, j, _dot(constraint_weight(fam, j), x), cap=cap)
              for j in indices]
    if fam.is_hermitian:
        blocks.extend(_trace_blocks(spec))
    return LinearPencil(fam.space, tuple(blocks), f"orbitope {fam.label()}")


def ky_fan_ball_pencil(field_, m: int, n: int, k: int, radius=1,
                       cap: int = EXTERIOR_SIZE_CAP) -> LinearPencil:
    """{y in M_{m x n}(K) : ||y||_k <= radius} as a single exterior-power block."""
    fld = Field(field_)
    if not 1 <= k <= n <= m:
        raise ShapeMismatch(f"need 1 <= k <= n <= m, got k={k}, m={m}, n={n}")
    space = ModelSpace(SpaceKind.RECT, fld, m, n)
    image, mult, complex_, N = natural_image(space)
    level = mult * radius
    weight = tuple(Fraction(mult) if i < k else Fraction(0) for i in range(n))
    block = _exterior_block(image, N, mult * k, level, weight, None, complex_, cap)
    return LinearPencil(space, (block,), f"Ky Fan ball k={k} radius={radius}")


def so_pencil(n: int, polar: bool = False) -> LinearPencil:
    """conv SO(n) (operator block + odd half-spin) or its polar (even half-spin)."""
    if n < 3:
        raise InvalidRank(f"conv SO(n) pencils need n >= 3, got {n}")
    space = ModelSpace(SpaceKind.RECT, Field.R, n, n)
    half = Fraction(1, 2)
    if polar:
        block = _half_spin_block(n, "+", hermitian_dilation, half, (half,) * n, n, "split")
        return LinearPencil(space, (block,), f"polar of conv SO({n})")
    op = PencilBlock("exterior_1", 2 * n, Fraction(1), hermitian_dilation,
                     (Fraction(1),) + (Fraction(0),) * (n - 1), 1, 1, False)
    spinb = _half_spin_block(n, "-", hermitian_dilation, Fraction(n - 2, 2),
                             (half,) * (n - 1) + (-half,), n - 1, "split")
    return LinearPencil(space, (op, spinb), f"conv SO({n})")


# --------------------------------------------------------------------------
# SDPA sparse format

def export_sdpa(pencil: LinearPencil, path) -> None:
    """Write the pencil as an SDPA sparse (.dat-s) feasibility problem.

    F_0 = -A_0 and F_i = A_i, so sum_i y_i F_i - F_0 = A_0 + sum_i y_i A_i.
    """
    if pencil.dim < 1:
        raise OrbitopeError("SDPA export needs at least one variable")
    if not pencil.materialized:
        raise NotMaterialized("materialize the pencil before export")
    if not pencil.is_real:
        raise NotMaterialized("pencil has complex blocks; apply realify() before export")
    lines = [f"* {pencil.description}" if pencil.description else "* pencil",
             str(pencil.dim), str(len(pencil.blocks)),
             " ".join(str(s) for s in pencil.sizes),
             " ".join("0" for _ in range(pencil.dim))]
    for i in range(pencil.dim + 1):
        for bi, b in enumerate(pencil.blocks, start=1):
            F = -b.coeffs[0] if i == 0 else b.coeffs[i]
            F = np.asarray(F, dtype=float)
            rows, cols = np.nonzero(np.triu(F))
            for r, c in zip(rows, cols):
                lines.append(f"{i} {bi} {r + 1} {c + 1} {F[r, c]:.17g}")
    with open(path, "w") as fh:
        fh.write("\n".join(lines) + "\n")


def parse_sdpa(path) -> tuple[int, list[int], list[list[np.ndarray]]]:
    """Read an SDPA sparse file; returns (m, block sizes, F[i][block])."""
    with open(path) as fh:
        raw = [ln.strip() for ln in fh]
    body = [ln for ln in raw if ln and not ln.startswith(("*", '"'))]
    m = int(body[0].split()[0])
    nblocks = int(body[1].split()[0])
    sizes = [abs(int(t)) for t in body[2].replace(",", " ").replace("{", " ")
             .replace("}", " ").split()[:nblocks]]
    F = [[np.zeros((s, s)) for s in sizes] for _ in range(m + 1)]
    for ln in body[4:]:
        i, b, r, c, v = ln.split()
        i, b, r, c, v = int(i), int(b) - 1, int(r) - 1, int(c) - 1, float(v)
        F[i][b][r, c] = v
        F[i][b][c, r] = v
    return m, sizes, F


def evaluate_sdpa(F: list[list[np.ndarray]], c: Sequence[float]) -> list[np.ndarray]:
    """sum_i c_i F_i - F_0 per block."""
    out = []
    for b in range(len(F[0])):
        M = -F[0][b].copy()
        for i, ci in enumerate(c, start=1):
            M += ci * F[i][b]
        out.append(M)
    return out


__all__ = [
    "LinearPencil",
    "PencilBlock",
    "constraint_block",
    "constraint_weight",
    "evaluate_sdpa",
    "export_sdpa",
    "ky_fan_ball_pencil",
    "natural_image",
    "orbitope_pencil",
    "parse_sdpa",
    "realify",
    "realify_matrix",
    "so_pencil",
]
