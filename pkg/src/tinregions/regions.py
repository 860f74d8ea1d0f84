"""Rate-region boundary constructions and verification harnesses.

Boundaries are traced by rate balancing: for a profile (beta, 1 - beta)
the boundary point maximizes the common scale R of the per-user rate
targets.  Four constructions are supported:

* ``pure-proper``     one proper strategy, exhaustive power search;
* ``hull-proper``     convex hull of the pure-proper boundary;
* ``ts-proper``       coded time-sharing via the cutting-plane solver;
* ``hull-improper``   convex hull of sampled improper strategies.

The harnesses at the bottom check, by seeded random sampling, the two
structural facts the time-sharing construction rests on: the phase-free
rate upper bound (tight on the magnitude-only channel with aligned
pseudovariance phases), and that no improper time-sharing mixture
escapes the proper time-sharing region.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np

from .lp import EQUAL, GREATER, LESS, LinearProgram, lp_solve
from .model import (
    TWO_PI,
    ChannelRealization,
    PowerBudget,
    RatePair,
    RateProfile,
    alignment_phases,
    enhance,
    improper_rates,
    proper_rates,
    rate_pair_proper,
    upper_bound_rates,
)
from .outer import CuttingPlaneResult, OuterConfig, TimeSharingSolution, ts_point

_INVPHI = (math.sqrt(5.0) - 1.0) / 2.0

THEOREM1_TOL = 5e-3
LEMMA1_BOUND_TOL = 1e-12
LEMMA1_EQUALITY_TOL = 1e-9

SWEEP_METHODS = ("pure-proper", "hull-proper", "ts-proper", "hull-improper")

__all__ = [
    "SamplingConfig",
    "RegionConfig",
    "BoundaryEntry",
    "RegionBoundary",
    "ContainmentReport",
    "BoundCheckReport",
    "pure_proper_point",
    "pure_improper_samples",
    "upper_right_hull",
    "sweep_boundary",
    "ts_sweep",
    "theorem1_check",
    "lemma1_check",
    "SWEEP_METHODS",
    "THEOREM1_TOL",
]


@dataclass(frozen=True)
class SamplingConfig:
    """Grid/random sampling sizes for improper-strategy exploration."""

    seed: int = 0
    power_grid: int = 41
    fraction_grid: int = 17
    phase_grid: int = 24
    random_count: int = 100_000

    def __post_init__(self):
        if min(self.power_grid, self.fraction_grid, self.phase_grid) < 2:
            raise ValueError("grid sizes must be >= 2")
        if self.random_count < 0:
            raise ValueError("random_count must be >= 0")


@dataclass(frozen=True)
class RegionConfig:
    outer: OuterConfig = field(default_factory=OuterConfig)
    sampling: SamplingConfig = field(default_factory=SamplingConfig)
    proper_grid: int = 201


@dataclass(frozen=True)
class BoundaryEntry:
    beta: float
    rates: RatePair
    R: float
    method: str
    status: str = "ok"
    dual_bound: float = math.nan  # ts method only


@dataclass(frozen=True)
class RegionBoundary:
    entries: tuple[BoundaryEntry, ...]
    method: str

    def rate_points(self) -> np.ndarray:
        return np.array([[e.rates.r1, e.rates.r2] for e in self.entries])


@dataclass(frozen=True)
class ContainmentReport:
    trials: int
    max_violation: float
    tolerance: float
    failures: int

    @property
    def passed(self) -> bool:
        return self.failures == 0


@dataclass(frozen=True)
class BoundCheckReport:
    trials: int
    max_bound_violation: float
    max_alignment_gap: float
    max_enhanced_mismatch: float

    @property
    def passed(self) -> bool:
        return (
            self.max_bound_violation <= LEMMA1_BOUND_TOL
            and self.max_alignment_gap <= LEMMA1_EQUALITY_TOL
            and self.max_enhanced_mismatch <= LEMMA1_BOUND_TOL
        )


def _balanced(r1, r2, rho1: float, rho2: float):
    if rho1 > 0.0 and rho2 > 0.0:
        return np.minimum(r1 / rho1, r2 / rho2)
    if rho1 > 0.0:
        return r1 / rho1
    return r2 / rho2


def _golden_max(fun, lo: float, hi: float, tol: float) -> float:
    x1 = hi - _INVPHI * (hi - lo)
    x2 = lo + _INVPHI * (hi - lo)
    f1, f2 = fun(x1), fun(x2)
    while hi - lo > tol:
        if f1 >= f2:
            hi, x2, f2 = x2, x1, f1
            x1 = hi - _INVPHI * (hi - lo)
            f1 = fun(x1)
        else:
            lo, x1, f1 = x1, x2, f2
            x2 = lo + _INVPHI * (hi - lo)
            f2 = fun(x2)
    return 0.5 * (lo + hi)


def pure_proper_point(
    ch: ChannelRealization,
    budget: PowerBudget,
    profile: RateProfile,
    grid: int = 201,
    refine_tol: float = 1e-6,
) -> tuple[float, tuple[float, float]]:
    """Best single proper strategy for a rate profile.

    Dense grid over the power rectangle followed by coordinate-wise
    golden-section refinement around the best cell; with two variables
    this is a defensible stand-in for a global solver.  Returns the
    balanced rate value R and the power vector attaining it.
    """
    rho1, rho2 = profile.rho
    p1 = np.linspace(0.0, budget.p1, grid)
    p2 = np.linspace(0.0, budget.p2, grid)
    r1, r2 = proper_rates(ch, p1[:, None], p2[None, :])
    val = _balanced(r1, r2, rho1, rho2)
    i, j = divmod(int(np.argmax(val)), grid)
    best = [float(p1[i]), float(p2[j])]
    best_val = float(val[i, j])

    def value_at(q1: float, q2: float) -> float:
        rr1, rr2 = proper_rates(ch, q1, q2)
        return float(_balanced(rr1, rr2, rho1, rho2))

    steps = [budget.p1 / (grid - 1), budget.p2 / (grid - 1)]
    caps = [budget.p1, budget.p2]
    for _ in range(60):
        moved = 0.0
        for k in range(2):
            if steps[k] <= 0.0:
                continue
            lo = max(0.0, best[k] - steps[k])
            hi = min(caps[k], best[k] + steps[k])
            other = best[1 - k]
            if k == 0:
                x = _golden_max(lambda t: value_at(t, other), lo, hi, refine_tol)
                v = value_at(x, other)
            else:
                x = _golden_max(lambda t: value_at(other, t), lo, hi, refine_tol)
                v = value_at(other, x)
            if v > best_val:
                moved += abs(x - best[k])
                best[k] = x
                best_val = v
        if moved < refine_tol:
            break
    return best_val, (best[0], best[1])


def pure_improper_samples(
    ch: ChannelRealization, budget: PowerBudget, sampling: SamplingConfig = SamplingConfig()
) -> np.ndarray:
    """Rate pairs of gridded plus randomly sampled single strategies.

    The grid spans powers up to the per-user caps, impropriety fractions
    kappa/c in [0, 1] and the pseudovariance phase difference (rates
    depend on the phases only through the difference).  Returns every
    evaluated pair as an (N, 2) array, deterministic for a fixed seed.
    """
    c1 = np.linspace(0.0, budget.p1, sampling.power_grid)
    c2 = np.linspace(0.0, budget.p2, sampling.power_grid)
    frac = np.linspace(0.0, 1.0, sampling.fraction_grid)
    psis = np.linspace(0.0, TWO_PI, sampling.phase_grid, endpoint=False)
    C1, C2, F1, F2 = (a.ravel() for a in np.meshgrid(c1, c2, frac, frac, indexing="ij"))
    K1 = F1 * C1
    K2 = F2 * C2
    chunks = []
    for psi in psis:
        r1, r2 = improper_rates(ch, C1, C2, K1, K2, psi, 0.0)
        chunks.append(np.column_stack((r1, r2)))
    if sampling.random_count > 0:
        rng = np.random.default_rng(sampling.seed)
        n = sampling.random_count
        rc1 = rng.uniform(0.0, budget.p1, n)
        rc2 = rng.uniform(0.0, budget.p2, n)
        rk1 = rng.uniform(0.0, 1.0, n) * rc1
        rk2 = rng.uniform(0.0, 1.0, n) * rc2
        rpsi = rng.uniform(0.0, TWO_PI, n)
        r1, r2 = improper_rates(ch, rc1, rc2, rk1, rk2, rpsi, 0.0)
        chunks.append(np.column_stack((r1, r2)))
    return np.concatenate(chunks, axis=0)


def upper_right_hull(points) -> np.ndarray:
    """Vertices of the Pareto face of the convex hull of a point cloud.

    The cloud is augmented with its axis projections (max_r1, 0) and
    (0, max_r2) so the face spans both intercepts; output vertices are
    sorted by r1 descending and every input point lies on or below the
    piecewise-linear boundary they define.
    """
    pts = np.asarray(points, dtype=float).reshape(-1, 2)
    if pts.size == 0:
        raise ValueError("empty point set")
    if not np.all(np.isfinite(pts)) or np.any(pts < 0.0):
        raise ValueError("points must be finite and >= 0")
    r1max = float(pts[:, 0].max())
    r2max = float(pts[:, 1].max())
    aug = np.vstack([pts, [[r1max, 0.0], [0.0, r2max]]])
    order = np.lexsort((-aug[:, 1], -aug[:, 0]))
    s = aug[order]
    running = np.maximum.accumulate(s[:, 1])
    keep = np.empty(len(s), dtype=bool)
    keep[0] = True
    keep[1:] = s[1:, 1] > running[:-1]
    cand = s[keep][::-1]  # r1 ascending, r2 descending, no dominated points
    stack: list[tuple[float, float]] = []
    for qx, qy in cand:
        while len(stack) >= 2:
            ax, ay = stack[-2]
            bx, by = stack[-1]
            if (bx - ax) * (qy - by) - (by - ay) * (qx - bx) >= 0.0:
                stack.pop()
            else:
                break
        stack.append((float(qx), float(qy)))
    return np.array(stack[::-1])


def _boundary_interp(points_desc: np.ndarray):
    """Height function r2 = h(r1) of a boundary polyline plus its extent."""
    xs = points_desc[::-1, 0].copy()
    ys = points_desc[::-1, 1].copy()
    order = np.argsort(xs, kind="stable")
    xs, ys = xs[order], ys[order]

    def height(x):
        return np.interp(x, xs, ys)

    return height, float(xs[-1]), float(ys.max())


def _profile_value(hull_desc: np.ndarray, rho: tuple[float, float]) -> float:
    """Balanced-rate value of a hull region along a profile ray."""
    rho1, rho2 = rho
    height, r1max, r2max = _boundary_interp(hull_desc)
    if rho1 == 0.0:
        return r2max
    if rho2 == 0.0:
        return r1max
    lo, hi = 0.0, min(r1max / rho1, r2max / rho2) + 1.0
    for _ in range(100):
        mid = 0.5 * (lo + hi)
        x = mid * rho1
        if x <= r1max and mid * rho2 <= float(height(x)):
            lo = mid
        else:
            hi = mid
        if hi - lo <= 1e-12 * max(1.0, hi):
            break
    return lo


def boundary_violation(point: tuple[float, float], boundary_points: np.ndarray) -> float:
    """Signed amount by which a rate pair escapes a boundary polyline.

    Positive values mean the point lies outside (above/right of) the
    piecewise-linear boundary; values <= 0 mean containment.
    """
    height, r1max, _ = _boundary_interp(np.asarray(boundary_points, dtype=float))
    x, y = float(point[0]), float(point[1])
    v1 = x - r1max
    v2 = y - float(height(min(x, r1max)))
    return max(v1, v2)


def ts_sweep(
    ch: ChannelRealization,
    budget: PowerBudget,
    betas,
    cfg: RegionConfig = RegionConfig(),
) -> list[tuple[float, TimeSharingSolution, CuttingPlaneResult]]:
    """Time-sharing solutions across profiles, warm-starting each profile
    with cuts from its neighbours (generated power vectors are valid
    cuts for every profile).  The pool keeps the active strategies plus
    the freshest cuts, capped so the relaxed LP stays small over a long
    sweep."""
    out = []
    pool: tuple = ()
    for beta in betas:
        beta = float(beta)
        solution, cp = ts_point(ch, budget, RateProfile(beta), cfg.outer, initial_cuts=pool)
        if 0.0 < beta < 1.0:
            active_p = {p for _, p, _ in solution.strategies}
            active = tuple(c for c in cp.cuts if c.p in active_p)
            recent = tuple(c for c in cp.cuts[-28:] if c.p not in active_p)
            pool = (active + recent)[:32]
        out.append((beta, solution, cp))
    return out


def sweep_boundary(
    method: str,
    ch: ChannelRealization,
    budget: PowerBudget,
    betas,
    cfg: RegionConfig = RegionConfig(),
) -> RegionBoundary:
    """Trace one construction's boundary over a grid of profiles."""
    betas = [float(b) for b in betas]
    if not betas:
        raise ValueError("betas must be nonempty")
    if any(not 0.0 <= b <= 1.0 for b in betas):
        raise ValueError("betas must lie in [0, 1]")
    entries: list[BoundaryEntry] = []
    if method == "pure-proper":
        for beta in betas:
            R, p = pure_proper_point(ch, budget, RateProfile(beta), grid=cfg.proper_grid)
            entries.append(BoundaryEntry(beta, rate_pair_proper(ch, p), R, method))
    elif method == "ts-proper":
        for beta, solution, cp in ts_sweep(ch, budget, betas, cfg):
            entries.append(
                BoundaryEntry(
                    beta,
                    solution.average_rates(),
                    solution.R,
                    method,
                    status="ok" if cp.converged else cp.status,
                    dual_bound=cp.upper,
                )
            )
    elif method == "hull-proper":
        base = sweep_boundary("pure-proper", ch, budget, betas, cfg)
        hull = upper_right_hull(base.rate_points())
        for beta in betas:
            rho = RateProfile(beta).rho
            R = _profile_value(hull, rho)
            entries.append(BoundaryEntry(beta, RatePair(R * rho[0], R * rho[1]), R, method))
    elif method == "hull-improper":
        samples = pure_improper_samples(ch, budget, cfg.sampling)
        hull = upper_right_hull(samples)
        for beta in betas:
            rho = RateProfile(beta).rho
            R = _profile_value(hull, rho)
            entries.append(BoundaryEntry(beta, RatePair(R * rho[0], R * rho[1]), R, method))
    else:
        raise ValueError(f"unknown sweep method {method!r}; expected one of {SWEEP_METHODS}")
    return RegionBoundary(tuple(entries), method)


def theorem1_check(
    ch: ChannelRealization,
    budget: PowerBudget,
    cfg: RegionConfig = RegionConfig(),
    trials: int = 1000,
    *,
    boundary: RegionBoundary | None = None,
    beta_grid: int = 101,
    impropriety: tuple[float, float] = (0.0, 1.0),
) -> ContainmentReport:
    """Attempt to escape the proper time-sharing region with random
    improper time-sharing candidates.

    Each trial draws up to four improper strategies (per-slot powers may
    exceed the budget; the first slot stays within it so the weight
    problem is always feasible), optimizes the time-sharing weights for
    a random profile by LP, and measures how far the averaged rate pair
    lands outside the interpolated proper time-sharing boundary.  Any
    violation beyond the tolerance would disprove the propriety claim;
    the report counts them.
    """
    if boundary is None:
        boundary = sweep_boundary(
            "ts-proper", ch, budget, np.linspace(0.0, 1.0, beta_grid), cfg
        )
    bnd_points = boundary.rate_points()
    height, r1max, _ = _boundary_interp(bnd_points)
    rng = np.random.default_rng(cfg.sampling.seed)
    lo_f, hi_f = impropriety
    max_violation = -math.inf
    failures = 0
    for _ in range(trials):
        L = int(rng.integers(1, 5))
        c1 = np.empty(L)
        c2 = np.empty(L)
        c1[0] = rng.uniform(0.0, budget.p1)
        c2[0] = rng.uniform(0.0, budget.p2)
        if L > 1:
            c1[1:] = rng.uniform(0.0, 2.0 * budget.p1, L - 1)
            c2[1:] = rng.uniform(0.0, 2.0 * budget.p2, L - 1)
        k1 = rng.uniform(lo_f, hi_f, L) * c1
        k2 = rng.uniform(lo_f, hi_f, L) * c2
        ph1 = rng.uniform(0.0, TWO_PI, L)
        ph2 = rng.uniform(0.0, TWO_PI, L)
        r1, r2 = improper_rates(ch, c1, c2, k1, k2, ph1, ph2)
        beta = float(rng.uniform())
        rho1, rho2 = beta, 1.0 - beta
        rows = []
        if rho1 > 0.0:
            rows.append((np.append(r1, -rho1), GREATER, 0.0))
        if rho2 > 0.0:
            rows.append((np.append(r2, -rho2), GREATER, 0.0))
        rows.append((np.append(c1, 0.0), LESS, budget.p1))
        rows.append((np.append(c2, 0.0), LESS, budget.p2))
        rows.append((np.append(np.ones(L), 0.0), EQUAL, 1.0))
        lp = LinearProgram(
            sense="max",
            objective=np.append(np.zeros(L), 1.0),
            rows=rows,
            lower=(0.0,) * L + (-np.inf,),
        )
        sol = lp_solve(lp)
        if sol.status != "optimal":
            raise RuntimeError(f"weight LP reported {sol.status}")
        taus = sol.primal[:L]
        avg1 = float(taus @ r1)
        avg2 = float(taus @ r2)
        v = max(avg1 - r1max, avg2 - float(height(min(avg1, r1max))))
        if v > max_violation:
            max_violation = v
        if v > THEOREM1_TOL:
            failures += 1
    return ContainmentReport(
        trials=trials,
        max_violation=max_violation,
        tolerance=THEOREM1_TOL,
        failures=failures,
    )


def lemma1_check(
    ch: ChannelRealization, cfg: RegionConfig = RegionConfig(), trials: int = 100_000
) -> BoundCheckReport:
    """Randomized check of the phase-free rate upper bound.

    Verifies on seeded random strategies that (i) the bound dominates
    the achievable rates on the original channel, (ii) it is met with
    equality for both users on the magnitude-only channel once the
    pseudovariance phase difference is aligned, and (iii) the bound is
    identical on the original and magnitude-only channels.  Powers span
    four decades and the impropriety fraction pins the proper and
    maximally improper endpoints with positive probability.
    """
    rng = np.random.default_rng(cfg.sampling.seed)
    c1 = 10.0 ** rng.uniform(-2.0, 2.0, trials)
    c2 = 10.0 ** rng.uniform(-2.0, 2.0, trials)

    def fractions(n):
        f = rng.uniform(0.0, 1.0, n)
        pin = rng.integers(0, 10, n)
        f[pin == 0] = 0.0
        f[pin == 9] = 1.0
        return f

    k1 = fractions(trials) * c1
    k2 = fractions(trials) * c2
    ph1 = rng.uniform(0.0, TWO_PI, trials)
    ph2 = rng.uniform(0.0, TWO_PI, trials)

    r1, r2 = improper_rates(ch, c1, c2, k1, k2, ph1, ph2)
    u1, u2 = upper_bound_rates(ch, c1, c2, k1, k2)
    max_bound_violation = float(max(np.max(r1 - u1), np.max(r2 - u2)))

    ench = enhance(ch)
    offsets = alignment_phases(ench)
    ph2e = rng.uniform(0.0, TWO_PI, trials)
    ph1e = ph2e + offsets.psi1
    re1, re2 = improper_rates(ench, c1, c2, k1, k2, ph1e, ph2e)
    ue1, ue2 = upper_bound_rates(ench, c1, c2, k1, k2)
    max_alignment_gap = float(max(np.max(np.abs(re1 - ue1)), np.max(np.abs(re2 - ue2))))
    max_enhanced_mismatch = float(max(np.max(np.abs(u1 - ue1)), np.max(np.abs(u2 - ue2))))

    return BoundCheckReport(
        trials=trials,
        max_bound_violation=max_bound_violation,
        max_alignment_gap=max_alignment_gap,
        max_enhanced_mismatch=max_enhanced_mismatch,
    )
