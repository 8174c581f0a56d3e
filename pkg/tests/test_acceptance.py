"""Acceptance gate: one test per criterion, each printing a PASS/FAIL line.

Run ``pytest tests/test_acceptance.py -v`` (lines appear in the summary) or
``python3 tests/test_acceptance.py``.
"""

import time
from itertools import combinations, permutations

import numpy as np
import pytest

from conftest import ACCEPTANCE_LINES
from tetraplectic.cli import main as cli_main
from tetraplectic.exterior import form_power, interior, standard_psi
from tetraplectic.orbit_forms import HermitianPoint, jacobi5_residual, orbit_report
from tetraplectic.qlinalg import QMatrix, complex_det, complex_embedding, dieudonne_det, random_hermitian, random_qmatrix
from tetraplectic.trimomentum import (
    GrassmannPoint,
    Hypersimplex,
    SpheroidElement,
    calibrate_normalization,
    grassmann_coords,
    horizontality_check,
    horizontality_negative_control,
    left_generator_fields,
    level_pair,
    modified_psi,
    momentum_identity_check,
    mu_standard,
    nambu_flow,
    orbit_scan,
    quaternary_bracket,
    sample_level_points,
    xi_standard,
)
from tetraplectic.trimomentum.grassmann import act_on_vector

pytestmark = pytest.mark.acceptance

SEED = 1234


def _record(num, title, ok, detail, elapsed, limit):
    ok = ok and (limit is None or elapsed < limit)
    budget = f" (limit {limit:g} s)" if limit is not None else ""
    line = f"[{'PASS' if ok else 'FAIL'}] criterion {num}: {title}: {detail}; {elapsed:.2f} s{budget}"
    ACCEPTANCE_LINES.append(line)
    print(line)
    assert ok, line


def _rel(a, b):
    return abs(a - b) / abs(b)


def test_criterion_1_dieudonne():
    t0 = time.perf_counter()
    rng = np.random.default_rng(SEED)
    mult = oracle = block = 0.0
    for t in range(500):
        n = 1 + t % 5
        a, b = random_qmatrix(n, n, rng), random_qmatrix(n, n, rng)
        da, db = dieudonne_det(a), dieudonne_det(b)
        mult = max(mult, _rel(dieudonne_det(a @ b), da * db))
        oracle = max(oracle, _rel(da**2, abs(complex_det(complex_embedding(a)))))
        if n > 1:
            k = 1 + t % (n - 1)
            m = random_qmatrix(n, n, rng).data.copy()
            m[k:, :k] = 0.0
            dm = dieudonne_det(QMatrix(m))
            block = max(block, _rel(dm, dieudonne_det(QMatrix(m[:k, :k])) * dieudonne_det(QMatrix(m[k:, k:]))))
    ok = mult <= 1e-9 and oracle <= 1e-8 and block <= 1e-12
    detail = f"multiplicativity {mult:.2e} (<=1e-9), Study oracle {oracle:.2e} (<=1e-8), block-triangular {block:.2e} (<=1e-12)"
    _record(1, "Dieudonne determinant", ok, detail, time.perf_counter() - t0, 5)


def test_criterion_2_five_term_identity():
    t0 = time.perf_counter()
    rng = np.random.default_rng(SEED)
    worst = max(jacobi5_residual(*[random_hermitian(2 + t % 2, rng) for _ in range(5)]) for t in range(200))
    _record(2, "five-term four-commutator identity", worst <= 1e-10, f"max residual {worst:.2e} (<=1e-10)", time.perf_counter() - t0, 5)


def test_criterion_3_orbit_form_certificate():
    t0 = time.perf_counter()
    rng = np.random.default_rng(SEED)
    parts, ok = [], True
    for eig in [(0, 1), (1, -1), (0, 0, 1), (0, 1, 2)]:
        r = orbit_report(HermitianPoint.diag(eig), rng)
        good = r["nondegeneracy_sigma_min"] > 1e-6 and r["ce_residual"] <= 1e-9 and r["invariance_discrepancy"] <= 1e-9
        ok &= good
        parts.append(
            f"diag{eig}: sigma_min {r['nondegeneracy_sigma_min']:.3g}, CE {r['ce_residual']:.3g}, "
            f"invariance {r['invariance_discrepancy']:.2e}{'' if good else ' <-- fails'}"
        )
    _record(3, "orbit 4-form non-degenerate/closed/invariant", ok, " | ".join(parts), time.perf_counter() - t0, 60)


def test_criterion_4_polytope():
    t0 = time.perf_counter()
    rng = np.random.default_rng(SEED)
    sum_err = 0.0
    for _ in range(100):
        n, p = [(2, 1), (3, 1), (4, 2), (5, 2)][int(rng.integers(4))]
        sum_err = max(sum_err, abs(grassmann_coords(GrassmannPoint(random_qmatrix(n, p, rng))).sum() - p))
    vertex_err = 0.0
    for n, p in [(2, 1), (3, 1), (4, 2)]:
        for J in combinations(range(n), p):
            ind = np.array([1.0 if i in J else 0.0 for i in range(n)])
            vertex_err = max(vertex_err, float(np.abs(grassmann_coords(GrassmannPoint.coordinate(n, J)) - ind).max()))
    failures = {}
    for n, p in [(2, 1), (3, 1), (4, 2)]:
        failures[(n, p)] = orbit_scan(GrassmannPoint(random_qmatrix(n, p, rng)), 1000, rng).containment_failures
    ok = sum_err <= 1e-11 and vertex_err == 0.0 and not any(failures.values())
    detail = f"sum error {sum_err:.2e} (<=1e-11), vertex error {vertex_err:g} (exact), scan failures {failures}"
    _record(4, "hypersimplex / matroid polytope", ok, detail, time.perf_counter() - t0, 30)


def _mu_block(b, m):
    return lambda x: float(mu_standard(np.asarray(x).reshape(m, 4))[b])


def test_criterion_5_momentum_map():
    t0 = time.perf_counter()
    rng = np.random.default_rng(SEED)
    inv = 0.0
    for _ in range(1000):
        qs = rng.standard_normal((3, 4))
        mu = mu_standard(qs)
        # componentwise relative error: mu is homogeneous of degree 4
        inv = max(inv, float((np.abs(mu_standard(act_on_vector(SpheroidElement.random(3, rng), qs)) - mu) / mu).max()))
    pts1 = rng.standard_normal((100, 4))
    c = calibrate_normalization(_mu_block(0, 1), left_generator_fields([0]), standard_psi(1), pts1)
    r1 = momentum_identity_check(_mu_block(0, 1), left_generator_fields([0]), standard_psi(1), pts1, c=c)
    pts2 = rng.standard_normal((100, 8))
    r2 = max(momentum_identity_check(_mu_block(b, 2), left_generator_fields([b]), standard_psi(2), pts2, c=c) for b in (0, 1))
    ok = inv <= 1e-13 and r1 <= 1e-6 and r2 <= 1e-6
    detail = f"mu invariance {inv:.2e} relative (<=1e-13), calibrated c = {c:.12f}, identity H1 {r1:.2e} / H2 {r2:.2e} (<=1e-6)"
    _record(5, "tri-momentum map", ok, detail, time.perf_counter() - t0, 10)


def test_criterion_6_xi_and_bracket():
    t0 = time.perf_counter()
    rng = np.random.default_rng(SEED)
    xi_err = 0.0
    for m in (1, 2, 3):
        psi = standard_psi(m)
        xi_err = max(xi_err, float(np.abs(interior(xi_standard(m), form_power(psi, m)).coeffs - form_power(psi, m - 1).coeffs).max()))
    fs = [
        lambda x: float(x[0] * x[1] + x[2] ** 2),
        lambda x: float(np.sin(x[3]) + x[4]),
        lambda x: float(np.sum(x**2)),
        lambda x: float(x[5] * x[6] - x[7]),
    ]
    x0 = 0.5 * rng.standard_normal(8)
    base = quaternary_bracket(*fs, x0)
    anti = 0.0
    for p in permutations(range(4)):
        sign = round(np.linalg.det(np.eye(4)[list(p)]))
        anti = max(anti, abs(quaternary_bracket(*[fs[i] for i in p], x0) - sign * base))
    traj = nambu_flow(fs[0], fs[1], fs[2], x0, 1e-3, 1000)
    drift = max(abs(f(traj[-1]) - f(traj[0])) / max(1.0, abs(f(traj[0]))) for f in fs[:3])
    ok = xi_err <= 1e-13 and anti <= 1e-9 and drift <= 1e-6
    detail = f"xi identity {xi_err:.2e} (<=1e-13), bracket antisymmetry {anti:.2e} (<=1e-9), flow drift {drift:.2e} (<=1e-6)"
    _record(6, "xi field, quaternary bracket, flow", ok, detail, time.perf_counter() - t0, 10)


def test_criterion_7_horizontality():
    t0 = time.perf_counter()
    rng = np.random.default_rng(SEED)
    pts = sample_level_points(0.3, 1.0, 50, rng)
    res = horizontality_check(modified_psi, level_pair, left_generator_fields([0, 1]), pts, target=[0.3, 1.0])
    control = horizontality_negative_control(pts)
    ok = res <= 1e-6 and control > 1e-2
    detail = f"modified form residual {res:.2e} (<=1e-6), negative control {control:.3g} (>1e-2)"
    _record(7, "horizontality on the level set", ok, detail, time.perf_counter() - t0, 10)


def test_criterion_8_determinism(tmp_path):
    t0 = time.perf_counter()
    a, b = tmp_path / "a.json", tmp_path / "b.json"
    codes = [cli_main(["verify", "all", "--seed", str(SEED), "--out", str(p)]) for p in (a, b)]
    same = a.read_bytes() == b.read_bytes()
    detail = f"byte-identical reports: {same} ({len(a.read_bytes())} bytes, exit codes {codes})"
    _record(8, "deterministic verify all", same, detail, time.perf_counter() - t0, None)


if __name__ == "__main__":
    import sys
    import tempfile
    from pathlib import Path

    tests = [v for k, v in sorted(globals().items()) if k.startswith("test_criterion_")]
    failed = 0
    for fn in tests:
        try:
            if fn is test_criterion_8_determinism:
                with tempfile.TemporaryDirectory() as d:
                    fn(Path(d))
            else:
                fn()
        except AssertionError:
            failed += 1
    print(f"{len(tests) - failed}/{len(tests)} criteria pass")
    sys.exit(1 if failed else 0)
