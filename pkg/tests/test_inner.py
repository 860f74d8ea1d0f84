import math

import numpy as np
import pytest

from tinregions import (
    BnbConfig,
    Box,
    DualPoint,
    bnb_solve,
    box_bounds,
    branch,
    init_box,
    inner_objective,
    proper_rates,
)

LN2 = math.log(2.0)


def single_user_oracle(ch, lam):
    """Closed-form stationary point of mu=1 single-user pricing."""
    g = abs(ch.h11) ** 2
    p = 1.0 / (lam * LN2) - ch.noise1 / g
    f = math.log2(1.0 + g * p) - lam * p
    return p, f


def grid_max(ch, dual, box, step):
    p1 = np.arange(0.0, box.b[0] + step, step)
    p2 = np.arange(0.0, box.b[1] + step, step)
    r1, r2 = proper_rates(ch, p1[:, None], p2[None, :])
    f = (
        dual.mu1 * r1
        + dual.mu2 * r2
        - dual.lambda1 * p1[:, None]
        - dual.lambda2 * p2[None, :]
    )
    return float(f.max())


class TestInnerObjective:
    def test_zero_at_origin(self, sec6):
        assert inner_objective(sec6, DualPoint(1.0, 2.0, 0.3, 0.4), (0.0, 0.0)) == 0.0

    def test_stationary_point_value(self, sec6):
        dual = DualPoint(1.0, 0.0, 0.1, 0.1)
        p_star, f_star = single_user_oracle(sec6, 0.1)
        assert p_star == pytest.approx(14.1845, abs=1e-4)
        assert f_star == pytest.approx(4.4766, abs=1e-4)
        assert inner_objective(sec6, dual, (p_star, 0.0)) == pytest.approx(
            f_star, abs=1e-12
        )

    def test_zero_weights_give_pure_power_bill(self, sec6):
        dual = DualPoint(0.0, 0.0, 0.5, 0.25)
        for p in ((1.0, 2.0), (3.0, 0.0), (10.0, 10.0)):
            assert inner_objective(sec6, dual, p) == pytest.approx(
                -0.5 * p[0] - 0.25 * p[1], abs=1e-12
            )

    def test_consistent_with_rate_functions(self, sec6):
        rng = np.random.default_rng(1)
        for _ in range(50):
            dual = DualPoint(*rng.uniform(0.01, 2.0, 4))
            p = rng.uniform(0.0, 30.0, 2)
            r1, r2 = proper_rates(sec6, p[0], p[1])
            want = dual.mu1 * r1 + dual.mu2 * r2 - dual.lambda1 * p[0] - dual.lambda2 * p[1]
            assert inner_objective(sec6, dual, p) == pytest.approx(float(want), abs=1e-12)


class TestBoxBounds:
    def test_singleton_is_tight(self, sec6):
        dual = DualPoint(1.0, 1.0, 0.1, 0.2)
        for p in ((0.0, 0.0), (3.0, 7.0), (20.0, 1.0)):
            u, a = box_bounds(sec6, dual, Box(p, p))
            f = inner_objective(sec6, dual, p)
            assert u == pytest.approx(f, abs=1e-12)
            assert a == pytest.approx(f, abs=1e-12)

    def test_bounds_sandwich_random_points(self, sec6):
        rng = np.random.default_rng(2)
        box = Box((0.0, 0.0), (10.0, 10.0))
        for _ in range(10):
            dual = DualPoint(*rng.uniform(0.0, 1.5, 4))
            u, a = box_bounds(sec6, dual, box)
            assert a <= u + 1e-12
            for _ in range(100):
                p = rng.uniform(0.0, 10.0, 2)
                assert inner_objective(sec6, dual, p) <= u + 1e-12

    def test_gap_shrinks_with_box_diameter(self, sec6):
        dual = DualPoint(1.0, 0.7, 0.1, 0.1)
        center = np.array([4.0, 6.0])
        gaps = []
        for k in range(12):
            h = 2.0 ** (-k)
            box = Box(tuple(center - h), tuple(center + h))
            u, a = box_bounds(sec6, dual, box)
            gaps.append(u - a)
        assert all(b <= a + 1e-12 for a, b in zip(gaps, gaps[1:]))
        assert gaps[-1] < 1e-3


class TestBranch:
    def test_splits_longest_edge(self):
        b1, b2 = branch(Box((0.0, 0.0), (4.0, 2.0)))
        assert b1 == Box((0.0, 0.0), (2.0, 2.0))
        assert b2 == Box((2.0, 0.0), (4.0, 2.0))

    def test_tie_breaks_on_first_dimension(self):
        b1, b2 = branch(Box((0.0, 0.0), (2.0, 2.0)))
        assert b1 == Box((0.0, 0.0), (1.0, 2.0))
        assert b2 == Box((1.0, 0.0), (2.0, 2.0))

    def test_degenerate_first_dimension(self):
        b1, b2 = branch(Box((1.0, 1.0), (1.0, 3.0)))
        assert b1 == Box((1.0, 1.0), (1.0, 2.0))
        assert b2 == Box((1.0, 2.0), (1.0, 3.0))

    def test_point_box_rejected(self):
        with pytest.raises(ValueError):
            branch(Box((1.0, 2.0), (1.0, 2.0)))


class TestInitBox:
    def test_zero_weights_collapse_to_origin(self, sec6):
        box, capped = init_box(sec6, DualPoint(0.0, 0.0, 1.0, 1.0))
        assert not capped
        assert box.b == (0.0, 0.0)

    def test_root_condition_holds(self, sec6):
        dual = DualPoint(1.0, 0.0, 0.1, 0.1)
        box, capped = init_box(sec6, dual)
        assert not capped
        g = abs(sec6.h11) ** 2
        p01 = box.b[0]
        fhat = math.log2(1.0 + g * p01 / sec6.noise1) - 0.1 * p01
        # other user's envelope peaks at zero, so the root equation is
        # fhat_1(p01) = 0
        assert fhat == pytest.approx(0.0, abs=1e-6)

    def test_missing_price_engages_cap(self, sec6):
        cfg = BnbConfig(power_cap=123.0)
        box, capped = init_box(sec6, DualPoint(1.0, 0.0, 0.0, 0.1), cfg)
        assert capped
        assert box.b == (123.0, 123.0)

    def test_grid_maximizer_inside_box(self, sec6):
        rng = np.random.default_rng(12)
        for _ in range(100):
            dual = DualPoint(
                rng.uniform(0.0, 2.0),
                rng.uniform(0.0, 2.0),
                rng.uniform(0.05, 1.0),
                rng.uniform(0.05, 1.0),
            )
            box, capped = init_box(sec6, dual)
            assert not capped
            hi = (box.b[0] * 1.5 + 1.0, box.b[1] * 1.5 + 1.0)
            p1 = np.linspace(0.0, hi[0], 160)
            p2 = np.linspace(0.0, hi[1], 160)
            r1, r2 = proper_rates(sec6, p1[:, None], p2[None, :])
            f = (
                dual.mu1 * r1
                + dual.mu2 * r2
                - dual.lambda1 * p1[:, None]
                - dual.lambda2 * p2[None, :]
            )
            i, j = np.unravel_index(np.argmax(f), f.shape)
            step = (hi[0] / 159, hi[1] / 159)
            assert p1[i] <= box.b[0] + step[0] + 1e-9
            assert p2[j] <= box.b[1] + step[1] + 1e-9


class TestBnbSolve:
    def test_single_user_oracle(self, sec6):
        dual = DualPoint(1.0, 0.0, 0.1, 0.1)
        p_star, f_star = single_user_oracle(sec6, 0.1)
        res = bnb_solve(sec6, dual)
        assert res.converged and not res.capped
        assert res.gap <= 1e-6
        assert 0.0 <= f_star - res.value <= 1e-6 + 1e-9
        assert res.p[0] == pytest.approx(p_star, abs=0.05)
        assert res.p[1] <= 1e-9

    def test_zero_weights(self, sec6):
        res = bnb_solve(sec6, DualPoint(0.0, 0.0, 0.7, 0.7))
        assert res.p == (0.0, 0.0)
        assert res.value == 0.0
        assert res.converged

    def test_capped_dual_maxes_out_power(self, sec6):
        cfg = BnbConfig(power_cap=1000.0)
        res = bnb_solve(sec6, DualPoint(1.0, 0.0, 0.0, 0.1), cfg)
        assert res.capped
        assert res.p[0] == pytest.approx(1000.0, rel=1e-4)

    def test_matches_grid_oracle(self, sec6):
        rng = np.random.default_rng(13)
        eps = 1e-6
        for _ in range(10):
            dual = DualPoint(
                rng.uniform(0.0, 2.0),
                rng.uniform(0.0, 2.0),
                rng.uniform(0.05, 1.0),
                rng.uniform(0.05, 1.0),
            )
            box, _ = init_box(sec6, dual)
            step = 0.05
            best_grid = grid_max(sec6, dual, box, step)
            res = bnb_solve(sec6, dual)
            assert res.converged and res.gap <= eps
            g11, g12, g21, g22 = sec6.gains
            lip = (
                dual.mu1 * g11 / (sec6.noise1 * LN2)
                + dual.mu2 * g22 / (sec6.noise2 * LN2)
                + dual.lambda1
                + dual.lambda2
            )
            assert abs(res.value - best_grid) <= eps + lip * step

    def test_budget_exhaustion_flagged(self, sec6):
        cfg = BnbConfig(epsilon=1e-12, max_iterations=5)
        res = bnb_solve(sec6, DualPoint(1.0, 1.0, 0.1, 0.1), cfg)
        assert not res.converged
        assert res.iterations == 5
        assert res.gap > 1e-12

    def test_deterministic(self, sec6):
        dual = DualPoint(0.9, 1.1, 0.09, 0.14)
        a = bnb_solve(sec6, dual)
        b = bnb_solve(sec6, dual)
        assert a == b


class TestBoundFamilyInvariants:
    def test_children_bounds_nest_inside_parent(self, sec6):
        rng = np.random.default_rng(14)
        for _ in range(50):
            dual = DualPoint(*rng.uniform(0.0, 2.0, 4))
            a = rng.uniform(0.0, 5.0, 2)
            b = a + rng.uniform(0.1, 10.0, 2)
            parent = Box(tuple(a), tuple(b))
            u, low = box_bounds(sec6, dual, parent)
            for child in branch(parent):
                cu, ca = box_bounds(sec6, dual, child)
                assert cu <= u + 1e-12
                assert ca <= cu + 1e-12
            # the lower child keeps the parent's bottom corner, so the
            # best achieved value over children never drops
            ca1 = box_bounds(sec6, dual, branch(parent)[0])[1]
            assert ca1 == pytest.approx(low, abs=1e-12)

    def test_objective_below_interference_free_envelope(self, sec6):
        rng = np.random.default_rng(15)
        g11, g12, g21, g22 = sec6.gains
        for _ in range(20):
            dual = DualPoint(*rng.uniform(0.0, 2.0, 4))
            for _ in range(50):
                p = rng.uniform(0.0, 40.0, 2)
                envelope = (
                    dual.mu1 * math.log1p(g11 * p[0] / sec6.noise1) / LN2
                    - dual.lambda1 * p[0]
                    + dual.mu2 * math.log1p(g22 * p[1] / sec6.noise2) / LN2
                    - dual.lambda2 * p[1]
                )
                assert inner_objective(sec6, dual, p) <= envelope + 1e-12
