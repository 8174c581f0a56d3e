"""Hypersimplex and matroid-polytope membership, and sampled orbit scans."""

from __future__ import annotations

import csv
import io
import json
from dataclasses import dataclass, field
from itertools import combinations

import numpy as np
from scipy.optimize import nnls

from .grassmann import (
    GrassmannPoint,
    SpheroidElement,
    grassmann_coords,
    nonvanishing_minors,
    row_scale,
    spheroid_act,
)

CONTAIN_TOL = 1e-9
ZERO_ROW_PROB = 0.25


@dataclass(frozen=True)
class Hypersimplex:
    """``Z^n_p = {0 <= x_i <= 1, sum x_i = p}``."""

    n: int
    p: int

    def __post_init__(self):
        if not 0 <= self.p <= self.n:
            raise ValueError(f"level p={self.p} must lie in 0..{self.n}")

    def vertices(self) -> list[tuple[int, ...]]:
        out = []
        for J in combinations(range(self.n), self.p):
            v = [0] * self.n
            for j in J:
                v[j] = 1
            out.append(tuple(v))
        return out

    def contains(self, x, tol: float = CONTAIN_TOL) -> bool:
        return hypersimplex_contains(self, x, tol)


def hypersimplex_contains(z: Hypersimplex, x, tol: float = CONTAIN_TOL) -> bool:
    x = np.asarray(x, dtype=float)
    if x.shape != (z.n,):
        raise ValueError(f"expected a vector of length {z.n}")
    return bool(np.all(x >= -tol) and np.all(x <= 1 + tol) and abs(x.sum() - z.p) <= tol * max(1, z.p))


def matroid_hull_contains(vertices, x, tol: float = CONTAIN_TOL) -> bool:
    """Whether ``x`` is a convex combination of ``vertices``.

    Solves ``min ||[V^T; 1] w - [x; 1]||`` with ``w >= 0`` by NNLS; contained
    iff the residual is within ``tol``.  Solver failure counts as not contained.
    """
    v = np.asarray(vertices, dtype=float)
    if v.ndim != 2 or v.shape[0] == 0:
        raise ValueError("vertex set must be a non-empty list of vectors")
    x = np.asarray(x, dtype=float)
    a = np.vstack([v.T, np.ones(v.shape[0])])
    b = np.concatenate([x, [1.0]])
    try:
        _, resid = nnls(a, b)
    except (RuntimeError, ValueError):
        return False
    return bool(resid <= tol)


@dataclass
class MomentumReport:
    n: int
    p: int
    hull_vertices: list[tuple[int, ...]]
    samples: list[tuple[str, np.ndarray]] = field(default_factory=list)
    in_hypersimplex: list[bool] = field(default_factory=list)
    in_hull: list[bool] = field(default_factory=list)

    @property
    def containment_failures(self) -> int:
        return sum(1 for a, b in zip(self.in_hypersimplex, self.in_hull) if not (a and b))

    def add(self, kind: str, x: np.ndarray, in_z: bool, in_h: bool) -> None:
        self.samples.append((kind, x))
        self.in_hypersimplex.append(in_z)
        self.in_hull.append(in_h)

    def write_csv(self, fh) -> None:
        w = csv.writer(fh, lineterminator="\n")
        w.writerow(["sample_id", "kind"] + [f"x_{i + 1}" for i in range(self.n)] + ["in_hypersimplex", "in_matroid_hull"])
        for sid, ((kind, x), a, b) in enumerate(zip(self.samples, self.in_hypersimplex, self.in_hull)):
            w.writerow([sid, kind] + [repr(float(v)) for v in x] + [str(a).lower(), str(b).lower()])

    def to_csv(self) -> str:
        buf = io.StringIO()
        self.write_csv(buf)
        return buf.getvalue()

    def to_json(self) -> dict:
        return {
            "n": self.n,
            "p": self.p,
            "samples": [[kind, [float(v) for v in x]] for kind, x in self.samples],
            "containment_failures": self.containment_failures,
            "hull_vertices": [list(v) for v in self.hull_vertices],
        }

    def dumps(self) -> str:
        return json.dumps(self.to_json(), sort_keys=True)


def _closure_sample(plane: GrassmannPoint, rng: np.random.Generator):
    """Row-scaled degeneration ``diag(t) a.M`` with some ``t_i = 0``; None if rank drops."""
    moved = spheroid_act(SpheroidElement.random(plane.n, rng), plane)
    t = rng.random(plane.n) ** 3
    t[rng.random(plane.n) < ZERO_ROW_PROB] = 0.0
    try:
        return grassmann_coords(GrassmannPoint(row_scale(moved, t)))
    except ValueError:
        return None


def orbit_scan(plane: GrassmannPoint, samples: int, rng: np.random.Generator, tol: float = CONTAIN_TOL) -> MomentumReport:
    """Sample the spheroid orbit and its closure and check every image.

    Writes ``samples`` spheroid rows then ``samples`` closure rows.  Closure
    rows come from row scalings ``M -> diag(t) M`` with ``t_i`` in [0, 1]
    (degenerate draws whose rank drops below p are redrawn).
    """
    if samples < 0:
        raise ValueError("samples must be >= 0")
    z = Hypersimplex(plane.n, plane.p)
    verts = [tuple(1 if i in J else 0 for i in range(plane.n)) for J in nonvanishing_minors(plane)]
    report = MomentumReport(plane.n, plane.p, verts)

    def record(kind, x):
        report.add(kind, x, hypersimplex_contains(z, x, tol), matroid_hull_contains(verts, x, tol))

    for _ in range(samples):
        record("spheroid", grassmann_coords(spheroid_act(SpheroidElement.random(plane.n, rng), plane)))
    for _ in range(samples):
        x = None
        while x is None:
            x = _closure_sample(plane, rng)
        record("closure", x)
    return report
