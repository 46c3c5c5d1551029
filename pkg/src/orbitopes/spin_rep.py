"""Half-spin representations of so(2n, C) from Clifford gamma matrices.

Gammas come from the Jordan-Wigner tensor construction, ordered so that the
first n are real and the last n purely imaginary.  Elements of so(n, n) given
in block form ``[[0, y], [y^t, 0]]`` are moved into the standard complex
orthogonal algebra by ``T = diag(I, iI)`` (``T j T^t = I`` for
``j = diag(I, -I)``); with this ordering their half-spin images are real.
"""
from __future__ import annotations

from dataclasses import dataclass
from functools import lru_cache
from fractions import Fraction

import numpy as np

from .errors import ShapeMismatch, SizeCapExceeded

MAX_CLIFFORD_N = 20

_I2 = np.eye(2, dtype=complex)
_PX = np.array([[0, 1], [1, 0]], dtype=complex)
_PY = np.array([[0, -1j], [1j, 0]], dtype=complex)
_PZ = np.array([[1, 0], [0, -1]], dtype=complex)


def _kron_all(factors) -> np.ndarray:
    out = np.ones((1, 1), dtype=complex)
    for f in factors:
        out = np.kron(out, f)
    return out


@dataclass(frozen=True)
class CliffordBasis:
    N: int
    gammas: tuple  # N hermitian matrices of size 2^(N/2)
    chirality: np.ndarray  # diagonal, entries +-1
    T: np.ndarray  # split form -> standard form

    @property
    def n(self) -> int:
        return self.N // 2

    @property
    def dim(self) -> int:
        return 2 ** self.n

    def chirality_indices(self, value: int) -> np.ndarray:
        return np.flatnonzero(np.isclose(np.diag(self.chirality).real, value))


@lru_cache(maxsize=16)
def build_clifford(N: int, cap: int = MAX_CLIFFORD_N) -> CliffordBasis:
    if N < 2 or N % 2:
        raise ValueError(f"Clifford construction needs an even N >= 2, got {N}")
    if N > cap:
        raise SizeCapExceeded(f"spinor size 2^{N // 2} exceeds cap (N <= {cap})")
    n = N // 2
    real, imag = [], []
    for k in range(n):
        head = [_PZ] * k
        tail = [_I2] * (n - k - 1)
        real.append(_kron_all(head + [_PX] + tail))
        imag.append(_kron_all(head + [_PY] + tail))
    gammas = tuple(real + imag)
    prod = np.eye(2 ** n, dtype=complex)
    for g in gammas:
        prod = prod @ g
    chir = (1j ** n) * prod
    T = np.diag(np.concatenate([np.ones(n), 1j * np.ones(n)]))
    return CliffordBasis(N, gammas, chir, T)


def spin(basis: CliffordBasis, Y: np.ndarray) -> np.ndarray:
    """Spin image 1/4 sum_ab Y_ab gamma_a gamma_b of a complex skew-symmetric Y."""
    Y = np.asarray(Y)
    if Y.shape != (basis.N, basis.N):
        raise ShapeMismatch(f"expected {basis.N}x{basis.N}, got {Y.shape}")
    out = np.zeros((basis.dim, basis.dim), dtype=complex)
    g = basis.gammas
    for a in range(basis.N):
        for b in range(a + 1, basis.N):
            c = Y[a, b] - Y[b, a]
            if c != 0:
                out += 0.25 * c * (g[a] @ g[b])
    return out


def split_to_standard(basis: CliffordBasis, X: np.ndarray) -> np.ndarray:
    """T X T^-1 for X in the split orthogonal algebra so(n, n)."""
    Tinv = np.diag(1.0 / np.diag(basis.T))
    return basis.T @ X @ Tinv


def _is_split_form(X: np.ndarray) -> bool:
    return not np.iscomplexobj(X) and np.allclose(X, X.T)


def _standard_form(basis: CliffordBasis, X, kind: str | None) -> tuple[np.ndarray, str]:
    X = np.asarray(X)
    if X.shape != (basis.N, basis.N):
        raise ShapeMismatch(f"expected {basis.N}x{basis.N}, got {X.shape}")
    if kind is None:
        kind = "split" if _is_split_form(X) else "skew"
    if kind == "split":
        return split_to_standard(basis, X), kind
    if kind == "skew":
        return X, kind
    raise ValueError(f"unknown input kind {kind!r}")


def _weight_probe(n: int, kind: str) -> np.ndarray:
    """Input whose chamber coordinates are (1, ..., 1)."""
    if kind == "split":
        return np.block([[np.zeros((n, n)), np.eye(n)], [np.eye(n), np.zeros((n, n))]])
    Y = np.zeros((2 * n, 2 * n), dtype=complex)
    for i in range(n):
        Y[2 * i, 2 * i + 1] = 1j
        Y[2 * i + 1, 2 * i] = -1j
    return Y


@lru_cache(maxsize=32)
def _plus_chirality(N: int, kind: str) -> int:
    """Chirality value carrying the weight (1/2)(1, ..., 1) for the given input kind."""
    basis = build_clifford(N)
    n = basis.n
    S = spin(basis, _standard_form(basis, _weight_probe(n, kind), kind)[0])
    for value in (1, -1):
        idx = basis.chirality_indices(value)
        top = np.linalg.eigvalsh(S[np.ix_(idx, idx)])[-1]
        if abs(top - n / 2) < 1e-9:
            return value
    raise AssertionError("weight test failed to identify the half-spin blocks")


def half_spin_evaluate(basis: CliffordBasis, X, sign: str, kind: str | None = None) -> np.ndarray:
    """Half-spin block of X; ``sign`` is "+" (top weight with an even number of
    minus signs) or "-".

    ``kind`` is "split" for real symmetric block matrices [[0, y], [y^t, 0]]
    and "skew" for complex skew-symmetric input; it is inferred when omitted.
    Output is real when the input is of split kind.
    """
    if sign not in ("+", "-"):
        raise ValueError(f"sign must be '+' or '-', got {sign!r}")
    Y, kind = _standard_form(basis, X, kind)
    plus = _plus_chirality(basis.N, kind)
    idx = basis.chirality_indices(plus if sign == "+" else -plus)
    S = spin(basis, Y)[np.ix_(idx, idx)]
    if kind == "split":
        S = S.real
    return S


def half_spin_weights(x, sign: str) -> list:
    """Exact weights (+-x_1 +- ... +- x_n)/2 with an even ("+") or odd ("-")
    number of minus signs."""
    from itertools import product

    x = [Fraction(t) if isinstance(t, (int, Fraction)) else t for t in x]
    parity = 0 if sign == "+" else 1
    out = []
    for signs in product((1, -1), repeat=len(x)):
        if signs.count(-1) % 2 == parity:
            out.append(sum(s * t for s, t in zip(signs, x)) / 2)
    return sorted(out, reverse=True)


def conv_so_pencil(n: int):
    """conv SO(n): the operator-norm block and the odd half-spin block."""
    from .pencil import so_pencil

    return so_pencil(n, polar=False)


def so_polar_pencil(n: int):
    """Polar of conv SO(n): the even half-spin block at level 1/2."""
    from .pencil import so_pencil

    return so_pencil(n, polar=True)


__all__ = [
    "CliffordBasis",
    "build_clifford",
    "conv_so_pencil",
    "half_spin_evaluate",
    "half_spin_weights",
    "so_polar_pencil",
    "spin",
    "split_to_standard",
]
