"""Cross-module invariant battery, runnable against any cost spec.

Each check returns a named pass/fail with a measured value and its bound,
so a failing run points at the broken invariant instead of a generic
error. Checks are deterministic for a fixed seed.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .crystal import CrystalContext, double_polar, hausdorff_distance, polar
from .geodesics import construct_geodesic, geodesic_ball, is_geodesic
from .integrand import support_transform, GridFunction
from .planar import convex_hull_ccw
from .isoperimetry import (
    Polygon,
    isoperimetric_ratio,
    random_wulff_competitor,
    wulff_identity_check,
)
from .oracle import Stencil, oracle_distance


@dataclass
class CheckResult:
    name: str
    passed: bool
    measured: float
    bound: float
    note: str = ""

    def as_dict(self) -> dict:
        out = {
            "name": self.name,
            "passed": self.passed,
            "measured": self.measured,
            "bound": self.bound,
        }
        if self.note:
            out["note"] = self.note
        return out


def run_suite(ctx: CrystalContext, seed: int = 0) -> list[CheckResult]:
    rng = np.random.default_rng(seed)
    res = ctx.resolution
    scale = max(1.0, ctx.crystal.diameter)
    checks: list[CheckResult] = []

    # Polarity: the crystal and the polar body are each other's polars.
    gap = hausdorff_distance(polar(ctx.polar_body), ctx.crystal)
    checks.append(CheckResult("polar-involution-crystal", gap <= 5 * res * scale, gap, 5 * res * scale))

    # Double polar of random clouds reproduces the hull with the origin added.
    worst = 0.0
    for _ in range(10):
        pts = rng.uniform(-1.0, 1.0, size=(12, 2)) + rng.uniform(-0.5, 1.5, size=2)
        expected = convex_hull_ccw(np.vstack([pts, [[0.0, 0.0]]]))
        got = double_polar(pts)
        worst = max(worst, hausdorff_distance(got.vertices, expected))
    checks.append(CheckResult("double-polar-hull", worst <= 5 * res, worst, 5 * res))

    # Transform inequalities on the grid.
    f_vals = ctx.integrand.values_on(ctx.grid.directions)
    w_excess = float((ctx.wulff.values - f_vals).max())
    checks.append(CheckResult("wulff-below-cost", w_excess <= 1e-9 * ctx.f_max, w_excess, 0.0))
    a_of_f = support_transform(GridFunction(ctx.grid, f_vals))
    a_deficit = float((f_vals - a_of_f.values).max())
    checks.append(CheckResult("support-above-cost", a_deficit <= 1e-9 * ctx.f_max, a_deficit, 0.0))
    d_excess = float((ctx.envelope.values - f_vals).max())
    checks.append(CheckResult("envelope-below-cost", d_excess <= 1e-9 * ctx.f_max, d_excess, 0.0))

    # Envelope agrees with the crystal support function at grid accuracy.
    support_grid = (ctx.grid.directions @ ctx.crystal.vertices.T).max(axis=1)
    env_gap = float(np.abs(ctx.envelope.values - support_grid).max())
    bound = 2 * res * ctx.f_max
    checks.append(CheckResult("envelope-is-support", env_gap <= bound, env_gap, bound))

    if ctx.integrand.is_convex:
        fp_gap = float(np.abs(ctx.envelope.values - f_vals).max())
        checks.append(CheckResult("convex-fixed-point", fp_gap <= bound, fp_gap, bound))

    # Attained crystal normals are contact directions.
    normals = ctx.crystal.normals
    bad = sum(not ctx.in_contact(nrm) for nrm in normals)
    checks.append(CheckResult("normals-in-contact", bad == 0, float(bad), 0.0))

    # Informational: directions where the cost sits strictly above its envelope.
    off = [
        float(np.arctan2(d[1], d[0]))
        for d in ctx.grid.directions
        if not ctx.in_contact(d)
    ]
    if off:
        checks.append(
            CheckResult(
                "non-contact-directions",
                True,
                float(len(off)),
                float(ctx.grid.size),
                note=f"expected for non-convex costs; angular range [{min(off):.3f}, {max(off):.3f}] rad",
            )
        )

    # Crystal perimeter/area identity.
    report = wulff_identity_check(ctx)
    ident_bound = 1e-6 if ctx.integrand.is_convex else 5 * res
    checks.append(
        CheckResult("wulff-identity", report.relative_difference <= ident_bound,
                    report.relative_difference, ident_bound)
    )

    # Ball duality: the unit ball's polar is the crystal.
    ball = geodesic_ball(ctx, (0.0, 0.0), 1.0)
    ball_gap = hausdorff_distance(polar(ball), ctx.crystal)
    checks.append(CheckResult("ball-polar-is-crystal", ball_gap <= 5 * res * scale, ball_gap, 5 * res * scale))

    # Constructed geodesics verify.
    fails = 0
    for _ in range(10):
        x = rng.uniform(-2.0, 2.0, size=2)
        y = rng.uniform(-2.0, 2.0, size=2)
        if np.linalg.norm(y - x) < 1e-6:
            continue
        cert = is_geodesic(ctx, construct_geodesic(ctx, x, y))
        fails += not cert.verdict
    checks.append(CheckResult("constructed-geodesics-verify", fails == 0, float(fails), 0.0))

    # Oracle sandwich: lattice paths never undercut the distance. Sampled
    # costs may overshoot the true norm by O(resolution^2) when the Wulff
    # minimizers fall off-grid, hence the extra slack for them.
    sandwich_slack = 1e-9 if ctx.integrand.is_convex else 1e-9 + res**2 * ctx.f_max
    worst_under = 0.0
    for target in [(5, 5), (7, 3), (3, -4), (-2, 5)]:
        t = np.array(target)
        d = ctx.norm(t.astype(float))
        for stencil in (Stencil.axis(), Stencil.order(2)):
            worst_under = max(worst_under, d - oracle_distance(ctx.integrand, t, stencil))
    checks.append(CheckResult("oracle-sandwich", worst_under <= sandwich_slack, worst_under, sandwich_slack))

    # Isoperimetric minimality against random same-fan competitors.
    own = isoperimetric_ratio(ctx.integrand, Polygon.from_region(ctx.crystal))
    worst_ratio_deficit = 0.0
    for _ in range(20):
        comp = random_wulff_competitor(ctx.grid, rng)
        worst_ratio_deficit = max(
            worst_ratio_deficit, own - isoperimetric_ratio(ctx.integrand, comp)
        )
    checks.append(
        CheckResult("isoperimetric-minimality", worst_ratio_deficit <= 1e-6,
                    worst_ratio_deficit, 1e-6)
    )

    return checks
