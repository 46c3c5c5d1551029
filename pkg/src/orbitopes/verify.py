"""Randomized and exact cross-checks of the orbitope machinery.

Every report is a pure function of (spec, count, seed): sample batches draw
from ``default_rng([seed, batch])`` and reductions are order independent.
"""
from __future__ import annotations

import json
from dataclasses import dataclass, field
from typing import Callable, Sequence

import numpy as np

from .catalog import (
    OrbitopeSpec,
    Verdict,
    a_coordinates,
    center,
    embed_a,
    orbit_sample,
    project_to_a,
)
from .coorbitope import extreme_orbits, polar_membership, polar_value
from .errors import NotFullDimensional, OrbitTooLarge
from .matrix_core import QMatrix, trace_form
from .momentum_polytope import MomentumPolytope
from .root_system import apply_witness_inverse, dominant, fmt_vector, weyl_orbit

BATCH = 250
VERTEX_CAP = 20000
FW_EPS = 1e-6
FW_MAX_ITER = 10**4
KOSTANT_TOL = 1e-9


@dataclass
class VerificationReport:
    name: str
    spec: str
    seed: int
    samples: int
    tolerance: float
    max_violation: float = 0.0
    passed: bool = True
    witnesses: dict = field(default_factory=dict)
    details: dict = field(default_factory=dict)

    def record(self, violation: float, witness: dict | None = None) -> None:
        if violation > self.max_violation:
            self.max_violation = float(violation)
            if witness is not None:
                self.witnesses["worst"] = witness

    def fail(self, reason: str, witness: dict | None = None) -> None:
        self.passed = False
        self.details.setdefault("failures", []).append(reason)
        if witness is not None:
            self.witnesses.setdefault("failed", witness)

    def to_json(self) -> dict:
        return {"test": self.name, "spec": self.spec, "seed": self.seed,
                "samples": self.samples, "tolerance": self.tolerance,
                "max_violation": self.max_violation, "passed": self.passed,
                "witnesses": self.witnesses, "details": self.details}

    def dumps(self) -> str:
        return json.dumps(self.to_json(), sort_keys=True)

    def to_text(self) -> str:
        status = "PASS" if self.passed else "FAIL"
        lines = [f"{status} {self.name} [{self.spec}] samples={self.samples} seed={self.seed} "
                 f"max_violation={self.max_violation:.3e} tol={self.tolerance:.1e}"]
        for reason in self.details.get("failures", [])[:5]:
            lines.append(f"  failure: {reason}")
        if not self.passed and "worst" in self.witnesses:
            lines.append(f"  worst witness: {self.witnesses['worst']}")
        return "\n".join(lines)


def _batches(count: int, seed: int):
    for b, start in enumerate(range(0, count, BATCH)):
        yield np.random.default_rng([seed, b]), min(BATCH, count - start)


def sample_orbit(spec: OrbitopeSpec, count: int, seed: int) -> list:
    out = []
    for b, start in enumerate(range(0, count, BATCH)):
        out.extend(orbit_sample(spec, min(BATCH, count - start), seed=[seed, b]))
    return out


def _a_vector(spec: OrbitopeSpec, y) -> tuple:
    v = project_to_a(spec.family, y)
    return center(v) if spec.family.is_hermitian else tuple(float(t) for t in v)


def _full(spec: OrbitopeSpec, v: Sequence) -> list:
    if spec.family.is_hermitian:
        return [t + spec.shift for t in v]
    return list(v)


def weyl_vertices(spec: OrbitopeSpec, cap: int = VERTEX_CAP) -> list[tuple]:
    return sorted(weyl_orbit(spec.system, spec.x.dominant, cap=cap))


# --------------------------------------------------------------------------
# Kostant projection

def check_projection(spec: OrbitopeSpec, points: Sequence, report: VerificationReport,
                     tol: float) -> None:
    """pi(y) in P_x for each point (and equal traces for hermitian families)."""
    P = MomentumPolytope(spec.system, spec.x)
    trace = float(sum(spec.full_coords))
    for k, y in enumerate(points):
        v = _a_vector(spec, y)
        slack = min(float(s) for s in P.mu_slack(v))
        report.record(max(0.0, -slack), {"sample": k, "projection": [float(t) for t in v],
                                         "mu_slack": slack})
        if slack < -tol:
            report.fail(f"sample {k}: projection leaves P_x (mu-slack {slack:.3e})")
        if spec.family.is_hermitian:
            dtr = abs(float(np.sum(project_to_a(spec.family, y))) - trace)
            if dtr > tol * max(1.0, abs(trace)):
                report.fail(f"sample {k}: trace differs by {dtr:.3e}")


def check_vertices(spec: OrbitopeSpec, report: VerificationReport) -> None:
    """Each Weyl vertex w.x is the projection of its own a-embedding, which lies
    in the orbit (same dominant a-coordinates)."""
    try:
        verts = weyl_vertices(spec)
    except OrbitTooLarge:
        report.details["vertices"] = "skipped (orbit above cap)"
        return
    xdom = np.array([float(t) for t in spec.x.dominant])
    scale = max(1.0, float(np.abs(xdom).max(initial=0.0)))
    for v in verts:
        Y = embed_a(spec.family, [float(t) for t in _full(spec, v)])
        got = _a_vector(spec, Y)
        exact = all(float(a) == float(b) for a, b in zip(got, v)) if not \
            spec.family.is_hermitian else np.allclose(got, [float(t) for t in v], atol=1e-15)
        orbit = np.abs(np.array(a_coordinates(spec.family, Y).dominant) - xdom).max() \
            <= 1e-12 * scale
        if not (exact and orbit):
            report.fail(f"vertex {tuple(float(t) for t in v)} not attained",
                        {"vertex": [float(t) for t in v]})
    report.details["vertices"] = len(verts)


def verify_kostant_points(spec: OrbitopeSpec, points: Sequence, seed: int = 0,
                          tol: float | None = None) -> VerificationReport:
    tol = KOSTANT_TOL * max(1.0, max(abs(float(t)) for t in spec.full_coords)) \
        if tol is None else tol
    report = VerificationReport("kostant", spec.family.label(), seed, len(points), tol)
    check_projection(spec, points, report, tol)
    check_vertices(spec, report)
    return report


def verify_kostant(spec: OrbitopeSpec, count: int = 1000, seed: int = 0,
                   tol: float | None = None) -> VerificationReport:
    return verify_kostant_points(spec, sample_orbit(spec, count, seed), seed, tol)


# --------------------------------------------------------------------------
# Frank-Wolfe hull certificates

@dataclass(frozen=True)
class HullCertificate:
    outcome: str  # Member, Separated, Undecided
    weights: tuple = ()  # ((vertex, weight), ...)
    direction: tuple | None = None
    distance: float = float("nan")
    margin: float = 0.0
    iterations: int = 0

    def residual(self, y: Sequence[float]) -> float:
        p = sum(w * np.asarray(v) for v, w in self.weights)
        return float(np.linalg.norm(p - np.asarray(y, dtype=float)))


def orbit_oracle(system, points: Sequence[Sequence]) -> Callable:
    """argmax over the union of W-orbits of the given points of <d, .>."""
    doms = [np.array([float(t) for t in dominant(system, p).dominant]) for p in points]

    def oracle(d):
        cv = dominant(system, tuple(float(t) for t in d))
        dd = np.array(cv.dominant, dtype=float)
        best = max(range(len(doms)), key=lambda k: float(dd @ doms[k]))
        return np.array(apply_witness_inverse(cv.witness, tuple(doms[best])), dtype=float)

    return oracle


def hull_certificate(points_oracle: Callable, y: Sequence[float], eps: float = FW_EPS,
                     max_iter: int = FW_MAX_ITER) -> HullCertificate:
    """Away-step Frank-Wolfe on min ||p - y||^2 over the hull served by the oracle."""
    y = np.asarray(y, dtype=float)
    s0 = points_oracle(y)
    active = {tuple(s0): [s0, 1.0]}
    p = s0.copy()
    for it in range(1, max_iter + 1):
        d = y - p
        dist = float(np.linalg.norm(d))
        if dist <= eps:
            weights = tuple((tuple(v), w) for v, w in active.values() if w > 0)
            return HullCertificate("Member", weights, None, dist, 0.0, it)
        s = points_oracle(d)
        unit = d / dist
        margin = float(unit @ y - unit @ s)
        if margin > eps:
            return HullCertificate("Separated", (), tuple(unit), dist, margin, it)
        fw_dir = s - p
        fw_gap = float(d @ fw_dir)
        away_key = max(active, key=lambda k: float(-d @ active[k][0]))
        a, alpha = active[away_key]
        away_dir = p - a
        away_gap = float(d @ away_dir)
        if fw_gap >= away_gap or alpha >= 1.0:
            direction, gmax, step_kind = fw_dir, 1.0, "fw"
        else:
            direction, gmax, step_kind = away_dir, alpha / (1.0 - alpha), "away"
        denom = float(direction @ direction)
        if denom <= 0:
            break
        gamma = min(gmax, max(0.0, float(d @ direction) / denom))
        if step_kind == "fw":
            for entry in active.values():
                entry[1] *= 1.0 - gamma
            key = tuple(s)
            if key in active:
                active[key][1] += gamma
            else:
                active[key] = [s, gamma]
        else:
            for entry in active.values():
                entry[1] *= 1.0 + gamma
            active[away_key][1] -= gamma
        active = {k: e for k, e in active.items() if e[1] > 1e-15}
        total = sum(e[1] for e in active.values())
        for e in active.values():
            e[1] /= total
        p = sum(e[1] * e[0] for e in active.values())
    return HullCertificate("Undecided", (), None, float(np.linalg.norm(y - p)), 0.0, max_iter)


# --------------------------------------------------------------------------
# duality

def _polar_test_points(spec: OrbitopeSpec, count: int, seed: int) -> list:
    out = []
    for rng, k in _batches(count, seed):
        for _ in range(k):
            y = spec.family.space.random(rng)
            if spec.family.is_hermitian:
                y = _traceless(y)
            val = polar_value(spec, y)
            target = rng.uniform(0.5, 1.5)
            out.append(y * (target / val) if val > 0 else y)
    return out


def _traceless(y):
    n = y.shape[0]
    if isinstance(y, QMatrix):
        t = float(np.sum(y.data[np.arange(n), np.arange(n), 0])) / n
        return y - QMatrix.identity(n) * t
    return y - (np.trace(y).real / n) * np.eye(n)


def verify_duality(spec: OrbitopeSpec, count: int = 200, seed: int = 0,
                   eps: float = FW_EPS, orbit_points: int = 64) -> VerificationReport:
    """polar_membership against (a) pairings with sampled orbit points and Weyl
    vertices and (b) Frank-Wolfe certificates over the extreme orbits."""
    zs = [e.z for e in extreme_orbits(spec)]
    report = VerificationReport("duality", spec.family.label(), seed, count, eps)
    report.details["extreme_points"] = [[float(t) for t in z] for z in zs]
    oracle = orbit_oracle(spec.system, zs)

    # each z_i sits on the polar boundary
    for z in zs:
        Z = embed_a(spec.family, [float(t) for t in z])
        res = polar_membership(spec, Z)
        if res.verdict is not Verdict.BOUNDARY:
            report.fail(f"extreme point {z} is {res.verdict.value}, expected Boundary")

    xc = [float(t) for t in spec.x.dominant]
    pairing_pts = [embed_a(spec.family, [float(t) for t in v]) for v in
                   _capped_vertices(spec)]
    centered = OrbitopeSpec.from_coords(spec.family, xc) if spec.family.is_hermitian else spec
    pairing_pts += sample_orbit(centered, orbit_points, seed + 1)

    counts = {"Member": 0, "Separated": 0, "Undecided": 0}
    disagreements = 0
    for k, y in enumerate(_polar_test_points(spec, count, seed)):
        pm = polar_membership(spec, y)
        sup = max(trace_form(g, y) for g in pairing_pts)
        report.record(max(0.0, sup - polar_value(spec, y)), {"sample": k, "sup": sup})
        if sup > 1 + eps and pm.verdict is not Verdict.OUTSIDE:
            disagreements += 1
            report.fail(f"sample {k}: pairing {sup:.6f} > 1 but polar verdict {pm.verdict.value}")
        ay = [float(t) for t in _a_vector_of(spec, y)]
        cert = hull_certificate(oracle, ay, eps)
        counts[cert.outcome] += 1
        if cert.outcome == "Member":
            if cert.residual(ay) > eps * (1 + 1e-9):
                report.fail(f"sample {k}: member certificate residual {cert.residual(ay):.3e}")
            if not pm.verdict.feasible:
                disagreements += 1
                report.fail(f"sample {k}: certified member but polar slack {pm.slack:.3e}")
        elif cert.outcome == "Separated":
            # the separating direction must beat the support value over the orbits
            d = np.array(cert.direction)
            hd = float(d @ oracle(d))
            if not float(d @ np.array(ay)) > hd:
                report.fail(f"sample {k}: separating direction does not separate")
            if pm.verdict is Verdict.INSIDE:
                disagreements += 1
                report.fail(f"sample {k}: separated but polar slack {pm.slack:.3e}")
        elif abs(pm.slack) > 1e-3:
            report.fail(f"sample {k}: Frank-Wolfe undecided away from the boundary "
                        f"(polar slack {pm.slack:.3e})")
    report.details["certificates"] = counts
    report.details["disagreements"] = disagreements
    return report


def _a_vector_of(spec: OrbitopeSpec, y) -> tuple:
    return a_coordinates(spec.family, y).dominant


def _capped_vertices(spec: OrbitopeSpec) -> list:
    try:
        return weyl_vertices(spec)
    except OrbitTooLarge:
        return [spec.x.dominant]


# --------------------------------------------------------------------------
# face support

def _affine_dim(points: Sequence[Sequence[float]]) -> int:
    if not points:
        return -1
    M = np.array(points, dtype=float)
    return int(np.linalg.matrix_rank(M[1:] - M[0], tol=1e-9)) if len(M) > 1 else 0


def verify_face_support(spec: OrbitopeSpec, seed: int = 0, count: int = 200,
                        tol: float = 1e-9) -> VerificationReport:
    """Each z_i-functional supports O_x and cuts out a facet of P_x."""
    P = MomentumPolytope(spec.system, spec.x)
    if not P.is_full_dimensional():
        raise NotFullDimensional(f"P_x is not full-dimensional for x={fmt_vector(spec.x.dominant)}")
    report = VerificationReport("face_support", spec.family.label(), seed, count, tol)
    verts = weyl_vertices(spec)
    samples = sample_orbit(spec, count, seed)
    rank = spec.system.rank
    classes = []
    for ext in extreme_orbits(spec):
        z = [float(t) for t in ext.z]
        Z = embed_a(spec.family, z)
        vals = [spec.scale * float(np.dot([float(t) for t in v], z)) for v in verts]
        top = max(vals)
        report.record(max(0.0, top - 1.0))
        if top > 1 + tol:
            report.fail(f"z_{ext.index}: vertex pairing {top:.6f} exceeds 1")
        on_facet = [v for v, s in zip(verts, vals) if abs(s - 1.0) <= tol]
        dim = _affine_dim(on_facet)
        if dim != rank - 1:
            report.fail(f"z_{ext.index}: equality set has affine dimension {dim}, "
                        f"expected {rank - 1}")
        for k, y in enumerate(samples):
            val = trace_form(Z, y)
            report.record(max(0.0, val - 1.0), {"sample": k, "index": ext.index, "pairing": val})
            if val > 1 + tol:
                report.fail(f"z_{ext.index}: sample {k} pairs to {val:.6f}")
        classes.append({"index": ext.index, "vertices_on_facet": len(on_facet),
                        "vertices": len(verts), "facet_dim": dim})
    report.details["facet_classes"] = classes
    return report


def verify_suite(spec: OrbitopeSpec, suite: str = "all", count: int = 200,
                 seed: int = 0) -> list[VerificationReport]:
    suites = ("kostant", "duality", "faces") if suite == "all" else (suite,)
    out = []
    for name in suites:
        if name == "kostant":
            out.append(verify_kostant(spec, count, seed))
        elif name == "duality":
            out.append(verify_duality(spec, count, seed))
        elif name == "faces":
            out.append(verify_face_support(spec, seed, count))
        else:
            raise ValueError(f"unknown suite {name!r}")
    return out


__all__ = [
    "HullCertificate",
    "VerificationReport",
    "hull_certificate",
    "orbit_oracle",
    "verify_duality",
    "verify_face_support",
    "verify_kostant",
    "verify_kostant_points",
    "verify_suite",
]
