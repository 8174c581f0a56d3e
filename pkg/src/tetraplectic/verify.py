"""Named invariant suites for every module, producing deterministic JSON reports.

Each suite draws from its own seed stream (derived from the run seed and the
suite name) so any suite can run on its own and produce the same numbers it
produces inside ``all``.
"""

from __future__ import annotations

import json
import math
from dataclasses import dataclass, field
from itertools import combinations, permutations
from math import comb

import numpy as np

from . import _backend
from .exterior import (
    AltForm,
    MultiVector,
    factorial_volume,
    form_power,
    interior,
    kernel_matrix,
    pair,
    standard_psi,
    wedge,
)
from .orbit_forms import (
    HermitianPoint,
    diag_moment,
    four_commutator,
    hp1_orbit_point,
    jacobi5_residual,
    orbit_report,
    psi_y,
)
from .qlinalg import (
    QMatrix,
    adjoint,
    complex_det,
    complex_embedding,
    dieudonne_det,
    random_hermitian,
    random_qmatrix,
    random_sp_n,
)
from .quat import ImQuaternion, Quaternion, exp_im, log_unit
from .trimomentum import (
    TRIVECTOR_NORMALIZATION,
    GrassmannPoint,
    Hypersimplex,
    SpheroidElement,
    basis_change,
    calibrate_normalization,
    grassmann_coords,
    horizontality_check,
    horizontality_negative_control,
    hypersimplex_contains,
    left_generator_fields,
    level_pair,
    modified_psi,
    momentum_identity_check,
    mu_standard,
    nambu_flow,
    orbit_scan,
    quaternary_bracket,
    sample_level_points,
    spheroid_act,
    xi_standard,
)
from .trimomentum.grassmann import act_on_vector

SUITES = ("quat", "qlinalg", "exterior", "orbit", "momentum")

ORBIT_SPECTRA = ((0.0, 1.0), (1.0, -1.0), (0.0, 0.0, 1.0), (0.0, 1.0, 2.0))

TOLERANCES = {
    "quat.norm_multiplicative": 1e-13,
    "quat.conj_antihomomorphism": 4 * float(np.finfo(float).eps),
    "quat.im_commutator_real": 1e-15,
    "quat.im_commutator_cross": 1e-14,
    "quat.exp_log_roundtrip": 1e-12,
    "qlinalg.multiplicativity": 1e-9,
    "qlinalg.study_oracle": 1e-8,
    "qlinalg.triangular": 1e-12,
    "qlinalg.sp_invariance": 1e-9,
    "qlinalg.row_swap": 1e-12,
    "exterior.wedge_associative": 1e-12,
    "exterior.graded_commutative": 1e-12,
    "exterior.contraction_adjoint": 1e-12,
    "exterior.psi_kernel_full_rank": 1e-8,
    "exterior.psi_power_volume": 1e-12,
    "orbit.jacobi5": 1e-10,
    "orbit.four_commutator_hermitian": 1e-12,
    "orbit.psi_antisymmetry": 1e-12,
    "orbit.nondegeneracy": 1e-6,
    "orbit.ce_closed": 1e-9,
    "orbit.invariance": 1e-9,
    "momentum.coords_sum": 1e-11,
    "momentum.spheroid_invariance": 1e-11,
    "momentum.basis_change_invariance": 1e-10,
    "momentum.fixed_points": 0.0,
    "momentum.orbit_scan_failures": 0.0,
    "momentum.mu_invariance": 1e-13,
    "momentum.identity": 1e-6,
    "momentum.calibration": 1e-6,
    "momentum.bracket_antisymmetry": 1e-9,
    "momentum.flow_drift": 1e-6,
    "momentum.xi_identity": 1e-13,
    "momentum.hp1_anchors": 1e-12,
    "momentum.horizontality": 1e-6,
    "momentum.horizontality_control": 1e-2,
}

# checks that pass when the value is strictly above the tolerance
LOWER_BOUNDS = {"exterior.psi_kernel_full_rank", "orbit.nondegeneracy", "momentum.horizontality_control"}


@dataclass
class Check:
    name: str
    value: float
    tol: float
    lower_bound: bool = False

    @property
    def passed(self) -> bool:
        if not math.isfinite(self.value):
            return False
        return bool(self.value > self.tol if self.lower_bound else self.value <= self.tol)

    def to_json(self) -> dict:
        return {
            "name": self.name,
            "value": float(self.value),
            "tol": float(self.tol),
            "op": ">" if self.lower_bound else "<=",
            "passed": self.passed,
        }


@dataclass
class SuiteResult:
    name: str
    checks: list[Check] = field(default_factory=list)

    @property
    def passed(self) -> bool:
        return all(c.passed for c in self.checks)

    def failures(self) -> list[str]:
        return [c.name for c in self.checks if not c.passed]

    def to_json(self) -> dict:
        upper = [c.value for c in self.checks if not c.lower_bound]
        return {
            "checks": [c.to_json() for c in self.checks],
            "max_residual": float(max(upper)) if upper else 0.0,
            "passed": self.passed,
        }


class _Recorder:
    def __init__(self, suite: str, tolerances: dict[str, float]):
        self.result = SuiteResult(suite)
        self.tolerances = tolerances

    def add(self, key: str, value: float, label: str | None = None) -> None:
        full = f"{self.result.name}.{key}"
        name = full if label is None else f"{full}[{label}]"
        self.result.checks.append(Check(name, float(value), float(self.tolerances[full]), full in LOWER_BOUNDS))


def suite_rng(seed: int, suite: str) -> np.random.Generator:
    """Independent stream per suite: the suite index is the spawn key."""
    return np.random.default_rng(np.random.SeedSequence(seed, spawn_key=(SUITES.index(suite),)))


def _rand_quat(rng: np.random.Generator, scale: float = 1.0) -> Quaternion:
    return Quaternion.from_array(scale * rng.standard_normal(4))


def _suite_quat(rec: _Recorder, rng: np.random.Generator) -> None:
    norm_err = conj_err = 0.0
    for _ in range(500):
        a = _rand_quat(rng, 10.0 ** rng.uniform(-3, 3))
        b = _rand_quat(rng, 10.0 ** rng.uniform(-3, 3))
        ab = a * b
        norm_err = max(norm_err, abs(abs(ab) - abs(a) * abs(b)) / (abs(a) * abs(b)))
        d = np.array(ab.conj()) - np.array(b.conj() * a.conj())
        conj_err = max(conj_err, float(np.abs(d).max()) / (abs(a) * abs(b)))
    rec.add("norm_multiplicative", norm_err)
    rec.add("conj_antihomomorphism", conj_err)

    real_err = cross_err = 0.0
    for _ in range(500):
        u = ImQuaternion(*rng.standard_normal(3))
        v = ImQuaternion(*rng.standard_normal(3))
        uq, vq = u.as_quaternion(), v.as_quaternion()
        c = uq * vq - vq * uq
        real_err = max(real_err, abs(c.w))
        cr = u.cross(v)
        d = np.array([c.x, c.y, c.z]) - 2 * np.array([cr.x, cr.y, cr.z])
        cross_err = max(cross_err, float(np.abs(d).max()))
    rec.add("im_commutator_real", real_err)
    rec.add("im_commutator_cross", cross_err)

    rt = 0.0
    for _ in range(500):
        direction = rng.standard_normal(3)
        direction /= np.linalg.norm(direction)
        v = ImQuaternion(*(direction * rng.uniform(0.0, 3.0)))
        back = log_unit(exp_im(v))
        rt = max(rt, max(abs(back.x - v.x), abs(back.y - v.y), abs(back.z - v.z)))
    rec.add("exp_log_roundtrip", rt)


def _rel(a: float, b: float) -> float:
    return abs(a - b) / max(abs(b), np.finfo(float).tiny)


def _suite_qlinalg(rec: _Recorder, rng: np.random.Generator) -> None:
    mult = oracle = tri = inv = swap = 0.0
    for t in range(100):
        n = 1 + t % 5
        a, b = random_qmatrix(n, n, rng), random_qmatrix(n, n, rng)
        da, db = dieudonne_det(a), dieudonne_det(b)
        mult = max(mult, _rel(dieudonne_det(a @ b), da * db))
        oracle = max(oracle, _rel(da**2, abs(complex_det(complex_embedding(a)))))
        upper = a.data * np.triu(np.ones((n, n)))[..., None]
        diag = np.sqrt((upper[np.arange(n), np.arange(n)] ** 2).sum(axis=1))
        tri = max(tri, _rel(dieudonne_det(QMatrix(upper)), float(np.prod(diag))))
        inv = max(inv, _rel(dieudonne_det(random_sp_n(n, rng) @ a), da))
        if n > 1:
            i, j = rng.choice(n, size=2, replace=False)
            perm = np.arange(n)
            perm[[i, j]] = perm[[j, i]]
            swap = max(swap, _rel(dieudonne_det(QMatrix(a.data[perm])), da))
    rec.add("multiplicativity", mult)
    rec.add("study_oracle", oracle)
    rec.add("triangular", tri)
    rec.add("sp_invariance", inv)
    rec.add("row_swap", swap)


def _rand_form(cls, dim: int, degree: int, rng: np.random.Generator):
    return cls(dim, degree, rng.standard_normal(comb(dim, degree)))


def _suite_exterior(rec: _Recorder, rng: np.random.Generator) -> None:
    assoc = graded = adj = 0.0
    for _ in range(30):
        dim = int(rng.integers(4, 9))
        k, l, m = (int(v) for v in rng.integers(0, 3, size=3))
        if k + l + m > dim:
            continue
        a, b, c = (_rand_form(AltForm, dim, d, rng) for d in (k, l, m))
        assoc = max(assoc, float(np.abs(wedge(wedge(a, b), c).coeffs - wedge(a, wedge(b, c)).coeffs).max(initial=0.0)))
        sign = (-1.0) ** (k * l)
        graded = max(graded, float(np.abs(wedge(a, b).coeffs - sign * wedge(b, a).coeffs).max(initial=0.0)))
        # <i_v a, u> = <a, v ^ u> with v a j-vector, u a (k-j)-vector
        j = int(rng.integers(0, 3))
        kk = j + int(rng.integers(0, 3))
        if kk > dim:
            continue
        v = _rand_form(MultiVector, dim, j, rng)
        u = _rand_form(MultiVector, dim, kk - j, rng)
        f = _rand_form(AltForm, dim, kk, rng)
        adj = max(adj, abs(pair(u, interior(v, f)) - pair(wedge(v, u), f)))
    rec.add("wedge_associative", assoc)
    rec.add("graded_commutative", graded)
    rec.add("contraction_adjoint", adj)
    for m in (1, 2, 3):
        psi = standard_psi(m)
        sv = np.linalg.svd(kernel_matrix(psi), compute_uv=False)
        rec.add("psi_kernel_full_rank", float(sv[-1]), f"m={m}")
        rec.add("psi_power_volume", float(np.abs(form_power(psi, m).coeffs - factorial_volume(m).coeffs).max()), f"m={m}")


_PERMS4 = list(permutations(range(4)))


def _perm_sign(p) -> float:
    s = 1.0
    for a, b in combinations(range(len(p)), 2):
        if p[a] > p[b]:
            s = -s
    return s


def _suite_orbit(rec: _Recorder, rng: np.random.Generator) -> None:
    j5 = 0.0
    for t in range(200):
        n = 2 + t % 2
        j5 = max(j5, jacobi5_residual(*[random_hermitian(n, rng) for _ in range(5)]))
    rec.add("jacobi5", j5)
    herm = anti = 0.0
    for t in range(20):
        n = 2 + t % 2
        mats = [random_hermitian(n, rng) for _ in range(4)]
        fc = four_commutator(*mats)
        herm = max(herm, float(np.abs(fc.data - adjoint(fc).data).max()) / max(1.0, fc.max_abs()))
        y = random_hermitian(n, rng)
        base = psi_y(y, *mats)
        for p in _PERMS4:
            anti = max(anti, abs(psi_y(y, *[mats[i] for i in p]) - _perm_sign(p) * base) / max(1.0, abs(base)))
    rec.add("four_commutator_hermitian", herm)
    rec.add("psi_antisymmetry", anti)
    for eig in ORBIT_SPECTRA:
        label = "diag(" + ",".join(f"{v:g}" for v in eig) + ")"
        r = orbit_report(HermitianPoint.diag(eig), rng)
        rec.add("nondegeneracy", r["nondegeneracy_sigma_min"], label)
        rec.add("ce_closed", r["ce_residual"], label)
        rec.add("invariance", r["invariance_discrepancy"], label)


def _mu_block(b: int, m: int):
    return lambda x: float(mu_standard(np.asarray(x).reshape(m, 4))[b])


def _suite_momentum(rec: _Recorder, rng: np.random.Generator) -> None:
    sums = sph = bc = 0.0
    for t in range(50):
        n, p = [(2, 1), (3, 1), (4, 2), (5, 2), (5, 3)][t % 5]
        plane = GrassmannPoint(random_qmatrix(n, p, rng))
        x = grassmann_coords(plane)
        sums = max(sums, abs(x.sum() - p))
        sph = max(sph, float(np.abs(grassmann_coords(spheroid_act(SpheroidElement.random(n, rng), plane)) - x).max()))
        bc = max(bc, float(np.abs(grassmann_coords(basis_change(plane, random_qmatrix(p, p, rng))) - x).max()))
    rec.add("coords_sum", sums)
    rec.add("spheroid_invariance", sph)
    rec.add("basis_change_invariance", bc)

    fixed = 0.0
    for n, p in [(2, 1), (3, 1), (4, 2)]:
        hit = set()
        for J in combinations(range(n), p):
            x = grassmann_coords(GrassmannPoint.coordinate(n, J))
            ind = np.array([1.0 if i in J else 0.0 for i in range(n)])
            fixed = max(fixed, float(np.abs(x - ind).max()))
            hit.add(tuple(int(v) for v in x))
        fixed = max(fixed, float(len(set(Hypersimplex(n, p).vertices()) - hit)))
    rec.add("fixed_points", fixed)

    for n, p in [(2, 1), (3, 1), (4, 2)]:
        report = orbit_scan(GrassmannPoint(random_qmatrix(n, p, rng)), 1000, rng)
        rec.add("orbit_scan_failures", report.containment_failures, f"n={n},p={p}")

    mu_inv = 0.0
    for _ in range(1000):
        qs = rng.standard_normal((3, 4))
        a = SpheroidElement.random(3, rng)
        mu = mu_standard(qs)
        mu_inv = max(mu_inv, float((np.abs(mu_standard(act_on_vector(a, qs)) - mu) / mu).max()))
    rec.add("mu_invariance", mu_inv)

    pts1 = rng.standard_normal((100, 4))
    c = calibrate_normalization(_mu_block(0, 1), left_generator_fields([0]), standard_psi(1), pts1)
    rec.add("calibration", abs(c - TRIVECTOR_NORMALIZATION))
    rec.add("identity", momentum_identity_check(_mu_block(0, 1), left_generator_fields([0]), standard_psi(1), pts1, c=c), "H1")
    pts2 = rng.standard_normal((100, 8))
    worst = max(
        momentum_identity_check(_mu_block(b, 2), left_generator_fields([b]), standard_psi(2), pts2, c=c) for b in (0, 1)
    )
    rec.add("identity", worst, "H2")

    x0 = 0.5 * rng.standard_normal(8)
    fs = [
        lambda x: float(x[0] * x[1] + x[2] ** 2),
        lambda x: float(np.sin(x[3]) + x[4]),
        lambda x: float(np.sum(x**2)),
        lambda x: float(x[5] * x[6] - x[7]),
    ]
    base = quaternary_bracket(*fs, x0)
    anti = 0.0
    for p in _PERMS4:
        anti = max(anti, abs(quaternary_bracket(*[fs[i] for i in p], x0) - _perm_sign(p) * base))
    rec.add("bracket_antisymmetry", anti)

    traj = nambu_flow(fs[0], fs[1], fs[2], x0, 1e-3, 1000)
    drift = max(abs(f(traj[-1]) - f(traj[0])) / max(1.0, abs(f(traj[0]))) for f in fs[:3])
    rec.add("flow_drift", drift)

    for m in (1, 2, 3):
        psi = standard_psi(m)
        lhs = interior(xi_standard(m), form_power(psi, m))
        rec.add("xi_identity", float(np.abs(lhs.coeffs - form_power(psi, m - 1).coeffs).max()), f"m={m}")

    hp1 = 0.0
    z = Hypersimplex(2, 1)
    r = 1 / math.sqrt(2)
    for s2, s4 in [(0.0, 1.0), (1.0, 0.0), (r, r)]:
        d = diag_moment(hp1_orbit_point(Quaternion(s2), Quaternion(s4)))
        g = grassmann_coords(GrassmannPoint([[[s2, 0, 0, 0]], [[s4, 0, 0, 0]]]))
        ok = hypersimplex_contains(z, d) and hypersimplex_contains(z, g)
        hp1 = max(hp1, float(np.abs(d - g).max()) if ok else math.inf)
    rec.add("hp1_anchors", hp1)

    pts = sample_level_points(0.3, 1.0, 50, rng)
    diag_gens = left_generator_fields([0, 1])
    rec.add("horizontality", horizontality_check(modified_psi, level_pair, diag_gens, pts, target=[0.3, 1.0]))
    rec.add("horizontality_control", horizontality_negative_control(pts))


_RUNNERS = {
    "quat": _suite_quat,
    "qlinalg": _suite_qlinalg,
    "exterior": _suite_exterior,
    "orbit": _suite_orbit,
    "momentum": _suite_momentum,
}


def resolve_tolerances(overrides: dict[str, float] | None = None) -> dict[str, float]:
    tol = dict(TOLERANCES)
    for k, v in (overrides or {}).items():
        if k not in tol:
            raise KeyError(f"unknown tolerance name {k!r}")
        tol[k] = float(v)
    return tol


def run_suite(name: str, seed: int = 0, overrides: dict[str, float] | None = None) -> SuiteResult:
    if name not in _RUNNERS:
        raise KeyError(f"unknown suite {name!r}")
    rec = _Recorder(name, resolve_tolerances(overrides))
    _RUNNERS[name](rec, suite_rng(seed, name))
    return rec.result


def run(suite: str = "all", seed: int = 0, overrides: dict[str, float] | None = None) -> dict:
    """Run one suite or all of them; returns the JSON-ready report."""
    names = list(SUITES) if suite == "all" else [suite]
    if any(n not in _RUNNERS for n in names):
        raise KeyError(f"unknown suite {suite!r}")
    tol = resolve_tolerances(overrides)
    results = [run_suite(n, seed, overrides) for n in names]
    return {
        "backend": _backend.BACKEND,
        "seed": seed,
        "suite": suite,
        "suites": {r.name: r.to_json() for r in results},
        "failed": [f for r in results for f in r.failures()],
        "passed": all(r.passed for r in results),
        "tolerances": {k: tol[k] for k in sorted(tol) if k.split(".")[0] in names},
    }


def dumps(report: dict) -> str:
    return json.dumps(report, sort_keys=True, indent=2) + "\n"
