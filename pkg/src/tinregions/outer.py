"""Cutting-plane solution of the dualized time-sharing rate balancing
problem and recovery of the primal mixture of power vectors.

The rate-balancing problem with coded time-sharing dualizes into a
minimization over rate weights ``mu`` and power prices ``lambda`` whose
inner maximization is handled by :mod:`tinregions.inner`.  Replacing
the continuum of inner power vectors by a finite set of generated
points ("cuts") turns the outer problem into a small LP whose optimum
is a lower bound; evaluating the dual objective at each generated dual
point yields upper bounds, and the loop stops once they agree to within
``epsilon_cp``.  The time-sharing weights are then recovered from the
LP over the accumulated cuts, which by the vertex structure of that LP
activates at most four strategies.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field, replace

import numpy as np

from .inner import BnbConfig, DualPoint, bnb_solve
from .lp import EQUAL, GREATER, LESS, LinearProgram, lp_solve
from .model import ChannelRealization, PowerBudget, RatePair, RateProfile, rate_pair_proper

_LN2 = math.log(2.0)

DUPLICATE_CUT_TOL = 1e-12
ACTIVE_TAU_TOL = 1e-9
MAX_ACTIVE_STRATEGIES = 4

__all__ = [
    "Cut",
    "TimeSharingSolution",
    "OuterConfig",
    "CuttingPlaneResult",
    "relaxed_dual_lp",
    "achieved_dual_value",
    "cutting_plane",
    "primal_recover",
    "ts_point",
]


@dataclass(frozen=True)
class Cut:
    """A generated power vector with its precomputed proper rates."""

    p: tuple[float, float]
    rates: RatePair
    origin: str  # "initial" | "bnb" | "capped"


@dataclass(frozen=True)
class TimeSharingSolution:
    """Weighted strategies (tau, p, rates) and the balanced rate value."""

    strategies: tuple[tuple[float, tuple[float, float], RatePair], ...]
    R: float

    def average_rates(self) -> RatePair:
        r1 = sum(t * r.r1 for t, _, r in self.strategies)
        r2 = sum(t * r.r2 for t, _, r in self.strategies)
        return RatePair(r1, r2)

    def average_powers(self) -> tuple[float, float]:
        return (
            sum(t * p[0] for t, p, _ in self.strategies),
            sum(t * p[1] for t, p, _ in self.strategies),
        )


@dataclass(frozen=True)
class OuterConfig:
    epsilon_cp: float = 1e-4
    max_cuts: int = 200
    inner: BnbConfig = field(default_factory=BnbConfig)

    def __post_init__(self):
        if self.epsilon_cp <= 0.0:
            raise ValueError("epsilon_cp must be > 0")
        if self.max_cuts < 1:
            raise ValueError("max_cuts must be >= 1")


@dataclass(frozen=True)
class CuttingPlaneResult:
    dual: DualPoint
    cuts: tuple[Cut, ...]
    lower: float
    upper: float
    status: str  # "converged" | "stalled" | "max-cuts"
    lower_history: tuple[float, ...] = ()  # relaxation value per iteration
    upper_history: tuple[float, ...] = ()  # running best achieved dual value

    @property
    def converged(self) -> bool:
        return self.status == "converged"

    @property
    def gap(self) -> float:
        return self.upper - self.lower


def relaxed_dual_lp(
    cuts: list[Cut] | tuple[Cut, ...], budget: PowerBudget, profile: RateProfile
) -> LinearProgram:
    """LP relaxation of the dual over the variables (mu1, mu2, lambda1,
    lambda2, z): minimize z subject to the profile normalization and one
    lower bound on z per cut."""
    if not cuts:
        raise ValueError("at least one cut is required")
    rho1, rho2 = profile.rho
    rows: list[tuple[np.ndarray, str, float]] = [
        (np.array([rho1, rho2, 0.0, 0.0, 0.0]), EQUAL, 1.0)
    ]
    for cut in cuts:
        rows.append(
            (
                np.array(
                    [
                        -cut.rates.r1,
                        -cut.rates.r2,
                        -(budget.p1 - cut.p[0]),
                        -(budget.p2 - cut.p[1]),
                        1.0,
                    ]
                ),
                GREATER,
                0.0,
            )
        )
    return LinearProgram(
        sense="min",
        objective=np.array([0.0, 0.0, 0.0, 0.0, 1.0]),
        rows=rows,
        lower=(0.0, 0.0, 0.0, 0.0, -np.inf),
    )


def achieved_dual_value(
    ch: ChannelRealization, dual: DualPoint, budget: PowerBudget, cut: Cut
) -> float:
    """Dual objective evaluated with the cut's power vector plugged in."""
    return (
        dual.lambda1 * budget.p1
        + dual.lambda2 * budget.p2
        + dual.mu1 * cut.rates.r1
        + dual.mu2 * cut.rates.r2
        - dual.lambda1 * cut.p[0]
        - dual.lambda2 * cut.p[1]
    )


def _single_user_result(
    ch: ChannelRealization, budget: PowerBudget, user: int
) -> CuttingPlaneResult:
    """Closed-form endpoint solution when only one user carries rate weight."""
    g11, g12, g21, g22 = ch.gains
    if user == 1:
        g, n, power = g11, ch.noise1, budget.p1
        p = (power, 0.0)
    else:
        g, n, power = g22, ch.noise2, budget.p2
        p = (0.0, power)
    value = math.log1p(g * power / n) / _LN2
    lam = g / ((n + g * power) * _LN2) if power > 0.0 else g / (n * _LN2)
    dual = DualPoint(
        mu1=1.0 if user == 1 else 0.0,
        mu2=0.0 if user == 1 else 1.0,
        lambda1=lam if user == 1 else 0.0,
        lambda2=0.0 if user == 1 else lam,
    )
    cut = Cut(p=p, rates=rate_pair_proper(ch, p), origin="initial")
    return CuttingPlaneResult(
        dual=dual,
        cuts=(cut,),
        lower=value,
        upper=value,
        status="converged",
        lower_history=(value,),
        upper_history=(value,),
    )


def cutting_plane(
    ch: ChannelRealization,
    budget: PowerBudget,
    profile: RateProfile,
    cfg: OuterConfig = OuterConfig(),
    initial_cuts: tuple[Cut, ...] | list[Cut] | None = None,
) -> CuttingPlaneResult:
    """Iterate LP relaxation and certified inner maximization until the
    achieved dual values meet the relaxation lower bound.

    The cut list starts from the half-budget power vector and gains one
    generated point per iteration.  A generated point that duplicates an
    existing cut before convergence stalls the loop (reported in
    ``status`` rather than looping).  Profiles 0 and 1 short-circuit to
    the closed-form single-user solution, which avoids running the
    machinery on a degenerate weight normalization.

    ``initial_cuts`` seeds the relaxation with previously generated
    power vectors (cuts are valid for every profile); boundary sweeps
    use this to warm-start neighbouring profiles.
    """
    rho1, rho2 = profile.rho
    if rho2 == 0.0:
        return _single_user_result(ch, budget, user=1)
    if rho1 == 0.0:
        return _single_user_result(ch, budget, user=2)
    if (budget.p1 <= 0.0 and rho1 > 0.0) or (budget.p2 <= 0.0 and rho2 > 0.0):
        raise ValueError("budget must be positive for every user with positive weight")

    inner_cfg = replace(cfg.inner, power_cap=1e3 * max(budget.p1, budget.p2))
    p_init = (0.5 * budget.p1, 0.5 * budget.p2)
    cuts: list[Cut] = [Cut(p_init, rate_pair_proper(ch, p_init), "initial")]
    for cut in initial_cuts or ():
        if all(
            abs(cut.p[0] - c.p[0]) > DUPLICATE_CUT_TOL
            or abs(cut.p[1] - c.p[1]) > DUPLICATE_CUT_TOL
            for c in cuts
        ):
            cuts.append(cut)
    evaluated: list[tuple[float, DualPoint]] = []
    lower_history: list[float] = []
    upper_history: list[float] = []
    lower = -math.inf
    status = "max-cuts"
    for _ in range(cfg.max_cuts):
        sol = lp_solve(relaxed_dual_lp(cuts, budget, profile))
        if sol.status != "optimal":
            raise RuntimeError(f"relaxed dual LP reported {sol.status}")
        mu1, mu2, l1, l2, z = sol.primal
        lower = float(z)
        dual = DualPoint(max(mu1, 0.0), max(mu2, 0.0), max(l1, 0.0), max(l2, 0.0))
        res = bnb_solve(ch, dual, inner_cfg)
        if not res.converged:
            raise RuntimeError(
                f"inner solver exhausted its iteration budget (gap {res.gap:.3e})"
            )
        p_new = res.p
        new_cut = Cut(p_new, rate_pair_proper(ch, p_new), "capped" if res.capped else "bnb")
        evaluated.append((achieved_dual_value(ch, dual, budget, new_cut), dual))
        upper = min(v for v, _ in evaluated)
        lower_history.append(lower)
        upper_history.append(upper)
        duplicate = any(
            abs(p_new[0] - c.p[0]) <= DUPLICATE_CUT_TOL
            and abs(p_new[1] - c.p[1]) <= DUPLICATE_CUT_TOL
            for c in cuts
        )
        if upper - lower <= cfg.epsilon_cp:
            if not duplicate:
                cuts.append(new_cut)
            status = "converged"
            break
        if duplicate:
            status = "stalled"
            break
        cuts.append(new_cut)

    upper = min(v for v, _ in evaluated)
    dual_star = min(evaluated, key=lambda item: item[0])[1]
    return CuttingPlaneResult(
        dual=dual_star,
        cuts=tuple(cuts),
        lower=lower,
        upper=upper,
        status=status,
        lower_history=tuple(lower_history),
        upper_history=tuple(upper_history),
    )


def primal_recover(
    ch: ChannelRealization,
    cuts: tuple[Cut, ...] | list[Cut],
    budget: PowerBudget,
    profile: RateProfile,
) -> TimeSharingSolution:
    """Optimal time-sharing weights over the generated power vectors.

    Solves max R subject to profile-weighted average rates at least
    rho_k * R, average powers within budget and weights on the simplex.
    The LP has at most five rows, so its vertex solution activates at
    most four strategies; weights below 1e-9 are pruned.
    """
    cuts = list(cuts)
    if not cuts:
        raise ValueError("cannot recover a solution from an empty cut list")
    rho1, rho2 = profile.rho
    L = len(cuts)
    c = np.zeros(L + 1)
    c[-1] = 1.0
    rows: list[tuple[np.ndarray, str, float]] = []
    for rho, rates in ((rho1, [ct.rates.r1 for ct in cuts]), (rho2, [ct.rates.r2 for ct in cuts])):
        if rho > 0.0:
            rows.append((np.array(rates + [-rho]), GREATER, 0.0))
    for k in range(2):
        rows.append((np.array([ct.p[k] for ct in cuts] + [0.0]), LESS, (budget.p1, budget.p2)[k]))
    rows.append((np.array([1.0] * L + [0.0]), EQUAL, 1.0))
    lp = LinearProgram(
        sense="max",
        objective=c,
        rows=rows,
        lower=(0.0,) * L + (-np.inf,),
    )
    sol = lp_solve(lp)
    if sol.status != "optimal":
        raise RuntimeError(f"primal recovery LP reported {sol.status}")
    taus = sol.primal[:L]
    active = [(float(taus[i]), cuts[i]) for i in range(L) if taus[i] > ACTIVE_TAU_TOL]
    if len(active) > MAX_ACTIVE_STRATEGIES:
        raise RuntimeError(
            f"{len(active)} active strategies exceed the guaranteed maximum of 4"
        )
    strategies = tuple((t, ct.p, ct.rates) for t, ct in active)
    rbar1 = sum(t * ct.rates.r1 for t, ct in active)
    rbar2 = sum(t * ct.rates.r2 for t, ct in active)
    values = []
    if rho1 > 0.0:
        values.append(rbar1 / rho1)
    if rho2 > 0.0:
        values.append(rbar2 / rho2)
    return TimeSharingSolution(strategies=strategies, R=min(values))


def ts_point(
    ch: ChannelRealization,
    budget: PowerBudget,
    profile: RateProfile,
    cfg: OuterConfig = OuterConfig(),
    initial_cuts: tuple[Cut, ...] | list[Cut] | None = None,
) -> tuple[TimeSharingSolution, CuttingPlaneResult]:
    """One point of the time-sharing boundary: run the cutting-plane loop
    and recover the primal mixture from its cuts."""
    cp = cutting_plane(ch, budget, profile, cfg, initial_cuts=initial_cuts)
    solution = primal_recover(ch, cp.cuts, budget, profile)
    if cp.converged and abs(cp.upper - solution.R) > 2.0 * cfg.epsilon_cp:
        raise RuntimeError(
            f"duality gap violation: recovered {solution.R}, dual bound {cp.upper}"
        )
    return solution, cp
