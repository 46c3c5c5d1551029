"""Dense linear algebra over R, C and the quaternions H.

Real and complex matrices are plain numpy arrays.  Quaternion matrices are
:class:`QMatrix` objects holding an ``(m, n, 4)`` real array of components
``a + b i + c j + d k``.  Spectra are returned as numpy arrays sorted in
descending order.
"""
from __future__ import annotations

from functools import lru_cache
from itertools import combinations
from math import comb

import numpy as np

from .errors import NotHermitian, NotSkewSymmetric, ShapeMismatch, SizeCapExceeded

HERMITIAN_RTOL = 1e-12
EXTERIOR_SIZE_CAP = 20000


# --------------------------------------------------------------------------
# quaternions

def qmul(p: np.ndarray, q: np.ndarray) -> np.ndarray:
    """Hamilton product of broadcastable arrays of quaternions (last axis 4)."""
    a1, b1, c1, d1 = np.moveaxis(p, -1, 0)
    a2, b2, c2, d2 = np.moveaxis(q, -1, 0)
    return np.stack([
        a1 * a2 - b1 * b2 - c1 * c2 - d1 * d2,
        a1 * b2 + b1 * a2 + c1 * d2 - d1 * c2,
        a1 * c2 - b1 * d2 + c1 * a2 + d1 * b2,
        a1 * d2 + b1 * c2 - c1 * b2 + d1 * a2,
    ], axis=-1)


_QCONJ = np.array([1.0, -1.0, -1.0, -1.0])


class QMatrix:
    """Dense quaternion matrix."""

    __slots__ = ("data",)

    def __init__(self, data):
        data = np.asarray(data, dtype=float)
        if data.ndim != 3 or data.shape[-1] != 4:
            raise ShapeMismatch(f"quaternion data must have shape (m, n, 4), got {data.shape}")
        self.data = data

    @classmethod
    def from_parts(cls, a, b=None, c=None, d=None) -> "QMatrix":
        a = np.asarray(a, dtype=float)
        z = np.zeros_like(a)
        parts = [a] + [z if t is None else np.asarray(t, dtype=float) for t in (b, c, d)]
        return cls(np.stack(parts, axis=-1))

    @classmethod
    def zeros(cls, m: int, n: int) -> "QMatrix":
        return cls(np.zeros((m, n, 4)))

    @classmethod
    def identity(cls, n: int) -> "QMatrix":
        return cls.from_parts(np.eye(n))

    @property
    def shape(self) -> tuple[int, int]:
        return self.data.shape[:2]

    def conj_t(self) -> "QMatrix":
        return QMatrix(np.swapaxes(self.data, 0, 1) * _QCONJ)

    def __matmul__(self, other: "QMatrix") -> "QMatrix":
        if self.shape[1] != other.shape[0]:
            raise ShapeMismatch(f"cannot multiply {self.shape} by {other.shape}")
        prod = qmul(self.data[:, :, None, :], other.data[None, :, :, :])
        return QMatrix(prod.sum(axis=1))

    def __add__(self, other: "QMatrix") -> "QMatrix":
        return QMatrix(self.data + other.data)

    def __sub__(self, other: "QMatrix") -> "QMatrix":
        return QMatrix(self.data - other.data)

    def __mul__(self, t: float) -> "QMatrix":
        return QMatrix(self.data * float(t))

    __rmul__ = __mul__

    def __neg__(self) -> "QMatrix":
        return QMatrix(-self.data)

    def __repr__(self) -> str:
        return f"QMatrix(shape={self.shape})"

    def norm(self) -> float:
        return float(np.linalg.norm(self.data))

    def split(self) -> tuple[np.ndarray, np.ndarray]:
        """Complex parts ``(A1, A2)`` with ``A = A1 + j A2``."""
        a, b, c, d = np.moveaxis(self.data, -1, 0)
        return a + 1j * b, c - 1j * d

    def embed(self) -> np.ndarray:
        return embed_quaternion(self)


def embed_quaternion(A: QMatrix) -> np.ndarray:
    """Complex 2m x 2n image ``[[A1, -conj(A2)], [A2, conj(A1)]]``."""
    A1, A2 = A.split()
    return np.block([[A1, -A2.conj()], [A2, A1.conj()]])


def unembed_quaternion(M: np.ndarray) -> QMatrix:
    """Inverse of :func:`embed_quaternion` (reads the left block column)."""
    m2, n2 = M.shape
    m, n = m2 // 2, n2 // 2
    A1, A2 = M[:m, :n], M[m:, :n]
    return QMatrix.from_parts(A1.real, A1.imag, A2.real, -A2.imag)


# --------------------------------------------------------------------------
# generic helpers

def field_of(A) -> str:
    if isinstance(A, QMatrix):
        return "H"
    return "C" if np.iscomplexobj(A) else "R"


def conj_t(A):
    return A.conj_t() if isinstance(A, QMatrix) else np.conj(np.transpose(A))


def shape_of(A) -> tuple[int, int]:
    return A.shape if isinstance(A, QMatrix) else np.shape(A)


def trace_form(x, y) -> float:
    """Real trace form Re tr(x* y)."""
    if isinstance(x, QMatrix) or isinstance(y, QMatrix):
        return float(np.sum(x.data * y.data))
    return float(np.real(np.vdot(np.asarray(x), np.asarray(y))))


def check_hermitian(A, rtol: float = HERMITIAN_RTOL) -> None:
    A = np.asarray(A)
    if A.ndim != 2 or A.shape[0] != A.shape[1]:
        raise NotHermitian(f"expected a square matrix, got shape {A.shape}")
    dev = np.linalg.norm(A - A.conj().T)
    if dev > rtol * max(1.0, np.linalg.norm(A)):
        raise NotHermitian(f"matrix deviates from hermitian by {dev:.3e}")


# --------------------------------------------------------------------------
# eigenvalues

def jacobi_eigvalsh(A, tol: float = 1e-14, max_sweeps: int = 100) -> np.ndarray:
    """Cyclic Jacobi eigenvalues of a real symmetric or complex hermitian matrix."""
    A = np.array(A, dtype=complex if np.iscomplexobj(A) else float)
    n = A.shape[0]
    scale = max(np.linalg.norm(A), 1e-300)
    for _ in range(max_sweeps):
        off = np.sqrt(max(np.linalg.norm(A) ** 2 - np.sum(np.abs(np.diag(A)) ** 2), 0.0))
        if off <= tol * scale:
            break
        for p in range(n - 1):
            for q in range(p + 1, n):
                apq = A[p, q]
                if abs(apq) <= 1e-300:
                    continue
                # phase-rotate to a real off-diagonal element, then a real rotation
                phase = apq / abs(apq)
                app, aqq = A[p, p].real, A[q, q].real
                theta = 0.5 * np.arctan2(2 * abs(apq), aqq - app)
                c, s = np.cos(theta), np.sin(theta)
                J = np.eye(n, dtype=A.dtype)
                J[p, p] = c
                J[q, q] = c
                J[p, q] = s * phase
                J[q, p] = -s * np.conj(phase)
                cols = [p, q]
                G = J[np.ix_(cols, cols)]
                A[:, cols] = A[:, cols] @ G
                A[cols, :] = G.conj().T @ A[cols, :]
    return np.sort(np.real(np.diag(A)))[::-1]


def eig_hermitian(A, method: str = "lapack", check: bool = True) -> np.ndarray:
    """All eigenvalues of a hermitian matrix, sorted descending."""
    if isinstance(A, QMatrix):
        raise NotHermitian("embed quaternion matrices with embed_quaternion first")
    A = np.asarray(A)
    if check:
        check_hermitian(A)
    A = 0.5 * (A + A.conj().T)
    if method == "jacobi":
        return jacobi_eigvalsh(A)
    if method != "lapack":
        raise ValueError(f"unknown eigensolver {method!r}")
    return np.linalg.eigvalsh(A)[::-1]


def hermitian_dilation(x) -> np.ndarray:
    """The (m+n) x (m+n) hermitian block matrix [[0, x], [x*, 0]]."""
    if isinstance(x, QMatrix):
        raise ShapeMismatch("dilate the complex embedding of a quaternion matrix instead")
    x = np.asarray(x)
    m, n = x.shape
    out = np.zeros((m + n, m + n), dtype=x.dtype)
    out[:m, m:] = x
    out[m:, :m] = x.conj().T
    return out


def singular_values(x) -> np.ndarray:
    """sigma_1 >= ... >= sigma_min(m,n) >= 0, via the hermitian dilation."""
    if isinstance(x, QMatrix):
        doubled = singular_values(embed_quaternion(x))
        return doubled[::2].copy()
    x = np.asarray(x)
    k = min(x.shape)
    ev = eig_hermitian(hermitian_dilation(x), check=False)
    return np.clip(ev[:k], 0.0, None)


def ky_fan_norm(x, k: int) -> float:
    sv = singular_values(x)
    if not 1 <= k <= len(sv):
        raise ValueError(f"Ky Fan index k={k} outside 1..{len(sv)}")
    return float(np.sum(sv[:k]))


def hermitian_eigenvalues(y) -> np.ndarray:
    """Eigenvalues of a hermitian matrix over R, C or H (right eigenvalues)."""
    if isinstance(y, QMatrix):
        return eig_hermitian(embed_quaternion(y))[::2].copy()
    return eig_hermitian(y)


# --------------------------------------------------------------------------
# additive exterior powers

@lru_cache(maxsize=64)
def _exterior_structure(N: int, k: int):
    subsets = list(combinations(range(N), k))
    index = {s: i for i, s in enumerate(subsets)}
    rows, cols, src_b, src_a, sign = [], [], [], [], []
    for ci, I in enumerate(subsets):
        Iset = set(I)
        for p, a in enumerate(I):
            for b in range(N):
                if b in Iset:
                    continue
                J = tuple(sorted((Iset - {a}) | {b}))
                q = J.index(b)
                rows.append(index[J])
                cols.append(ci)
                src_b.append(b)
                src_a.append(a)
                sign.append(-1 if (p + q) % 2 else 1)
    as_arr = lambda v: np.array(v, dtype=np.intp)
    return (np.array(subsets, dtype=np.intp).reshape(len(subsets), k), as_arr(rows),
            as_arr(cols), as_arr(src_b), as_arr(src_a), np.array(sign))


def exterior_dim(N: int, k: int) -> int:
    return comb(N, k)


def exterior_power_additive(A, k: int, cap: int = EXTERIOR_SIZE_CAP, check: bool = True):
    """Derivative action of A on the k-th exterior power (lexicographic k-subset basis).

    Diagonal entry (I, I) is the sum of A_ii over I; entry (J, I) with
    J = I - {a} + {b} is (-1)^(p+q) A_ba, p and q being the positions of a in
    I and b in J.  Object (e.g. Fraction) arrays are supported.
    """
    A = np.asarray(A)
    N = A.shape[0]
    if A.ndim != 2 or A.shape[1] != N:
        raise ShapeMismatch(f"expected a square matrix, got {A.shape}")
    if not 1 <= k <= N:
        raise ValueError(f"exterior power index k={k} outside 1..{N}")
    size = comb(N, k)
    if size > cap:
        raise SizeCapExceeded(f"exterior power size C({N},{k})={size} exceeds cap {cap}")
    if check and A.dtype != object:
        check_hermitian(A)
    subsets, rows, cols, src_b, src_a, sign = _exterior_structure(N, k)
    out = np.zeros((size, size), dtype=A.dtype)
    diag = np.diagonal(A)
    out[np.arange(size), np.arange(size)] = diag[subsets].sum(axis=1)
    if len(rows):
        out[rows, cols] = sign * A[src_b, src_a]
    return out


# --------------------------------------------------------------------------
# Pfaffians

def pfaffian(A, tol: float = 1e-10) -> float:
    """Pfaffian of a real skew-symmetric matrix by pivoted skew elimination."""
    A = np.array(A, dtype=float)
    n = A.shape[0]
    if A.ndim != 2 or A.shape[1] != n:
        raise NotSkewSymmetric(f"expected a square matrix, got {A.shape}")
    scale = max(np.linalg.norm(A), 1e-300)
    if np.linalg.norm(A + A.T) > 1e-12 * scale:
        raise NotSkewSymmetric("matrix is not skew-symmetric")
    if n % 2:
        raise NotSkewSymmetric("Pfaffian needs an even-sized matrix")
    pf = 1.0
    for k in range(0, n - 1, 2):
        piv = k + 1 + int(np.argmax(np.abs(A[k, k + 1:])))
        if piv != k + 1:
            A[[k + 1, piv], :] = A[[piv, k + 1], :]
            A[:, [k + 1, piv]] = A[:, [piv, k + 1]]
            pf = -pf
        if abs(A[k, k + 1]) <= tol * scale:
            return 0.0
        pf *= A[k, k + 1]
        if k + 2 < n:
            tau = A[k, k + 2:] / A[k, k + 1]
            # keeps the trailing block skew-symmetric
            A[k + 2:, k + 2:] += np.outer(tau, A[k + 2:, k + 1]) - np.outer(A[k + 2:, k + 1], tau)
    return pf


def pfaffian_sign(A, tol: float = 1e-10) -> int:
    pf = pfaffian(A, tol=tol)
    return 0 if pf == 0.0 else (1 if pf > 0 else -1)


# --------------------------------------------------------------------------
# random compact-group elements

def haar_orthogonal(n: int, rng: np.random.Generator, special: bool = True) -> np.ndarray:
    q, r = np.linalg.qr(rng.standard_normal((n, n)))
    q = q * np.sign(np.diag(r))
    if special and np.linalg.det(q) < 0:
        q[:, 0] = -q[:, 0]
    return q


def haar_unitary(n: int, rng: np.random.Generator) -> np.ndarray:
    z = rng.standard_normal((n, n)) + 1j * rng.standard_normal((n, n))
    q, r = np.linalg.qr(z)
    d = np.diag(r)
    return q * (d / np.abs(d))


def haar_symplectic(n: int, rng: np.random.Generator) -> QMatrix:
    """Quaternion unitary (Sp(n)) from Gram-Schmidt on a Gaussian matrix."""
    G = rng.standard_normal((n, n, 4))
    cols = []
    for j in range(n):
        v = G[:, j, :].copy()
        for u in cols:
            # coefficient <u, v> = sum conj(u_i) v_i, removed as u * coeff
            coeff = qmul(u * _QCONJ, v).sum(axis=0)
            v = v - qmul(u, coeff[None, :])
        v /= np.linalg.norm(v)
        cols.append(v)
    return QMatrix(np.stack(cols, axis=1))


def random_quaternion(m: int, n: int, rng: np.random.Generator) -> QMatrix:
    return QMatrix(rng.standard_normal((m, n, 4)))
