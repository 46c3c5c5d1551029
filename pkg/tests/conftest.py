from __future__ import annotations

import numpy as np
import pytest

from orbitopes.catalog import Field, OrbitopeFamily, OrbitopeSpec, Tag
from orbitopes.matrix_core import QMatrix

# one instance per family (and per root-system variant), rank <= 3
CASES = [
    ("RectReal", 3, 2, (2, 1)),
    ("RectComplex", 3, 2, (2, 1)),
    ("RectComplex", 2, 2, (2, 1)),
    ("RectQuat", 3, 2, (1.5, 0.5)),
    ("RectQuat", 2, 2, (2, 1)),
    ("SquareRealSpecial", 3, 3, (2, 1, -0.5)),
    ("SquareRealSpecial", 3, 3, (1, 1, 1)),
    ("HermReal", 3, 3, (3, 1, -1)),
    ("HermComplex", 3, 3, (1, 0, 0)),
    ("HermQuat", 3, 3, (2, 0, 1)),
    ("SkewReal", 5, 5, (2, 1)),
    ("SkewReal", 6, 6, (2, 1, -1)),
    ("SkewReal", 3, 3, (2,)),
    ("SkewQuat", 3, 3, (2, 1, 1)),
    ("SymComplex", 3, 3, (2, 1, 0)),
    ("SkewSymComplex", 5, 5, (2, 1)),
    ("SkewSymComplex", 6, 6, (1, 1, 0.5)),
]


def case_id(case):
    tag, m, n, x = case
    return f"{tag}-{m}x{n}-{','.join(str(t) for t in x)}"


def make_spec(tag, m, n, x) -> OrbitopeSpec:
    return OrbitopeSpec.from_coords(OrbitopeFamily(Tag(tag), m, n), x)


def norm(y) -> float:
    return y.norm() if isinstance(y, QMatrix) else float(np.linalg.norm(y))


def trace(y) -> float:
    if isinstance(y, QMatrix):
        k = np.arange(y.shape[0])
        return float(np.sum(y.data[k, k, 0]))
    return float(np.trace(y).real)


def identity(fam: OrbitopeFamily):
    return QMatrix.identity(fam.n) if fam.field is Field.H else np.eye(fam.n)


def random_test_point(spec: OrbitopeSpec, rng: np.random.Generator):
    """Random model-space point of comparable size; hermitian families get the
    trace of x so the interesting comparison is the eigenvalue one."""
    fam = spec.family
    radius = float(np.sqrt(sum(float(c) ** 2 for c in spec.full_coords)))
    base = fam.space.random(rng)
    y = base * (rng.uniform(0.2, 1.5) * radius / norm(base))
    if fam.is_hermitian:
        y = y + identity(fam) * ((trace(spec.matrix()) - trace(y)) / fam.n)
    return y


@pytest.fixture(params=CASES, ids=[case_id(c) for c in CASES])
def spec(request):
    return make_spec(*request.param)


# acceptance criteria register their outcome here; printed in the terminal summary
ACCEPTANCE_LINES: dict[int, str] = {}


def record_criterion(number: int, passed: bool, detail: str) -> None:
    line = f"criterion {number:2d}: {'PASS' if passed else 'FAIL'}  {detail}"
    ACCEPTANCE_LINES[number] = line
    print(line)


def pytest_terminal_summary(terminalreporter):
    if ACCEPTANCE_LINES:
        terminalreporter.section("acceptance criteria")
        for k in sorted(ACCEPTANCE_LINES):
            terminalreporter.write_line(ACCEPTANCE_LINES[k])
