"""Vector math and single-step integration."""

from __future__ import annotations

import math
import pickle

import numpy as np
import pytest

from pesim import (
    AgentState,
    CoincidentAgentsError,
    Scheme,
    UnstableStepError,
    Vec2,
    WorldParams,
    clamp_acceleration,
    step,
    unit_vector_to_evader,
)
from reference import (
    DECAY_1_2S_VX,
    SINGLE_STEP_V1X,
    SINGLE_STEP_X1X,
    TERMINAL_SPEED,
    THRUST_2S_VX,
    THRUST_2S_XX,
    rk4_hold,
)

# Free decay of v=(8,0) over 2 s at mu=0.5: 8 e^(-1), 50-digit decimal.
DECAY_2S_FROM_8 = 2.9430355293715386


def world(
    mu: float = 0.5,
    dt: float = 0.1,
    scheme: Scheme = Scheme.EXACT_EXPONENTIAL,
    t_max: float = 20.0,
) -> WorldParams:
    return WorldParams(mu=mu, eps=0.5, dt=dt, t_max=t_max, scheme=scheme)


class TestVec2:
    def test_arithmetic(self):
        a, b = Vec2(1.0, -2.0), Vec2(3.0, 0.5)
        assert a + b == Vec2(4.0, -1.5)
        assert a - b == Vec2(-2.0, -2.5)
        assert a * 2.0 == Vec2(2.0, -4.0)
        assert 2.0 * a == Vec2(2.0, -4.0)
        assert -a == Vec2(-1.0, 2.0)
        assert a.dot(b) == 2.0
        assert Vec2(3.0, 4.0).norm() == 5.0
        assert Vec2(3.0, 4.0).norm_sq() == 25.0

    def test_rotated(self):
        r = Vec2(1.0, 0.0).rotated(math.pi / 2.0)
        assert abs(r.x) < 1e-15 and abs(r.y - 1.0) < 1e-15

    @pytest.mark.parametrize("bad", [math.nan, math.inf, -math.inf])
    def test_rejects_non_finite(self, bad):
        with pytest.raises(ValueError):
            Vec2(bad, 0.0)
        with pytest.raises(ValueError):
            Vec2(0.0, bad)

    def test_picklable(self):
        v = Vec2(1.5, -2.5)
        assert pickle.loads(pickle.dumps(v)) == v


class TestWorldParams:
    def test_valid(self):
        w = world()
        assert w.mu == 0.5 and w.scheme is Scheme.EXACT_EXPONENTIAL

    @pytest.mark.parametrize(
        "kwargs",
        [
            {"mu": -0.1},
            {"eps": 0.0},
            {"eps": -1.0},
            {"dt": 0.0},
            {"dt": -0.01},
            {"t_max": 0.0},
            {"dt": 21.0},  # exceeds t_max
        ],
    )
    def test_rejects_bad_params(self, kwargs):
        base = {"mu": 0.5, "eps": 0.5, "dt": 0.01, "t_max": 20.0}
        base.update(kwargs)
        with pytest.raises(ValueError):
            WorldParams(**base)


class TestUnitVectorToEvader:
    def test_axis_aligned(self):
        assert unit_vector_to_evader(Vec2(0, -4), Vec2(0, 0)) == Vec2(0.0, 1.0)

    def test_three_four_five(self):
        d = unit_vector_to_evader(Vec2(3, 0), Vec2(0, 4))
        assert abs(d.x - (-0.6)) < 1e-15
        assert abs(d.y - 0.8) < 1e-15

    def test_coincident_raises(self):
        with pytest.raises(CoincidentAgentsError):
            unit_vector_to_evader(Vec2(1, 1), Vec2(1, 1))

    def test_unit_norm_property(self):
        rng = np.random.default_rng(11)
        for _ in range(1000):
            p, e = rng.uniform(-20, 20, 2), rng.uniform(-20, 20, 2)
            d = unit_vector_to_evader(Vec2(*p), Vec2(*e))
            assert abs(d.norm() - 1.0) < 1e-12


class TestClampAcceleration:
    def test_inside_ball_unchanged(self):
        a = Vec2(1.0, 0.0)
        assert clamp_acceleration(a, 4.0) is a

    def test_rescaled(self):
        c = clamp_acceleration(Vec2(3, 4), 4.0)
        assert abs(c.x - 2.4) < 1e-15 and abs(c.y - 3.2) < 1e-15

    def test_zero_budget(self):
        assert clamp_acceleration(Vec2(0, 0), 0.0) == Vec2(0.0, 0.0)
        assert clamp_acceleration(Vec2(5, 5), 0.0) == Vec2(0.0, 0.0)

    def test_negative_budget_rejected(self):
        with pytest.raises(ValueError):
            clamp_acceleration(Vec2(1, 0), -1.0)

    def test_norm_bound_property(self):
        rng = np.random.default_rng(12)
        for _ in range(1000):
            a = Vec2(*rng.uniform(-10, 10, 2))
            a_max = rng.uniform(0.0, 6.0)
            c = clamp_acceleration(a, a_max)
            assert c.norm() <= a_max + 1e-12
            if a.norm() <= a_max:
                assert c is a  # bit-identical passthrough


class TestExactStep:
    def test_free_decay_two_seconds(self):
        w = world(dt=2.0)
        s = step(AgentState(Vec2(0, 0), Vec2(8, 0)), Vec2(0, 0), w)
        assert abs(s.vel.x - DECAY_2S_FROM_8) < 1e-12
        assert s.vel.y == 0.0

    def test_thrust_from_rest_single_step(self):
        w = world(dt=0.1)
        s = step(AgentState(Vec2(0, 0), Vec2(0, 0)), Vec2(4, 0), w)
        assert abs(s.vel.x - SINGLE_STEP_V1X) < 1e-14
        assert abs(s.pos.x - SINGLE_STEP_X1X) < 1e-14
        assert s.vel.y == 0.0 and s.pos.y == 0.0

    def test_thrust_from_rest_two_seconds(self):
        w = world(dt=2.0)
        s = step(AgentState(Vec2(0, 0), Vec2(0, 0)), Vec2(4, 0), w)
        assert abs(s.vel.x - THRUST_2S_VX) < 1e-12
        assert abs(s.pos.x - THRUST_2S_XX) < 1e-12

    def test_tiny_dt_continuity(self):
        w = world(dt=1e-9)
        s0 = AgentState(Vec2(1.0, -2.0), Vec2(3.0, 0.5))
        s1 = step(s0, Vec2(2.0, -1.0), w)
        for got, want in (
            (s1.pos.x, s0.pos.x), (s1.pos.y, s0.pos.y),
            (s1.vel.x, s0.vel.x), (s1.vel.y, s0.vel.y),
        ):
            assert abs(got - want) < 1e-8

    def test_mu_zero_limit(self):
        w = world(mu=0.0, dt=0.5)
        s = step(AgentState(Vec2(1, 2), Vec2(1, -1)), Vec2(2, 4), w)
        assert s.vel == Vec2(2.0, 1.0)
        assert abs(s.pos.x - (1 + 0.5 + 0.25)) < 1e-15
        assert abs(s.pos.y - (2 - 0.5 + 0.5)) < 1e-15

    def test_mu_zero_limit_is_continuous(self):
        # Just below the threshold the limit branch must agree with the
        # closed form just above it.
        s0 = AgentState(Vec2(1, 2), Vec2(3, -4))
        a = Vec2(2.0, 1.0)
        below = step(s0, a, world(mu=5e-10, dt=0.1))
        above = step(s0, a, world(mu=2e-9, dt=0.1))
        for g, w_ in ((below.pos.x, above.pos.x), (below.pos.y, above.pos.y),
                      (below.vel.x, above.vel.x), (below.vel.y, above.vel.y)):
            assert abs(g - w_) < 1e-9

    def test_matches_rk4_property(self):
        rng = np.random.default_rng(13)
        w = world(dt=0.01)
        for _ in range(200):
            pos = tuple(rng.uniform(-10, 10, 2))
            vel = tuple(rng.uniform(-8, 8, 2))
            acc = tuple(rng.uniform(-4, 4, 2))
            got = step(AgentState(Vec2(*pos), Vec2(*vel)), Vec2(*acc), w)
            (rx, ry), (rvx, rvy) = rk4_hold(pos, vel, acc, 0.5, 0.01, 10)
            assert abs(got.pos.x - rx) < 1e-10
            assert abs(got.pos.y - ry) < 1e-10
            assert abs(got.vel.x - rvx) < 1e-10
            assert abs(got.vel.y - rvy) < 1e-10


class TestEulerStep:
    def test_thrust_from_rest(self):
        w = world(dt=0.1, scheme=Scheme.SEMI_IMPLICIT_EULER)
        s = step(AgentState(Vec2(0, 0), Vec2(0, 0)), Vec2(4, 0), w)
        assert s.vel == Vec2(0.4, 0.0)
        assert abs(s.pos.x - 0.04) < 1e-15

    def test_damped_update(self):
        w = world(dt=0.1, scheme=Scheme.SEMI_IMPLICIT_EULER)
        s = step(AgentState(Vec2(0, 0), Vec2(2, -2)), Vec2(0, 1), w)
        # v' = v(1 - 0.05) + a*0.1, x' = x + v'*0.1
        assert abs(s.vel.x - 1.9) < 1e-15
        assert abs(s.vel.y - (-1.8)) < 1e-15
        assert abs(s.pos.x - 0.19) < 1e-15
        assert abs(s.pos.y - (-0.18)) < 1e-15

    def test_unstable_step_rejected(self):
        w = world(mu=10.0, dt=0.1, scheme=Scheme.SEMI_IMPLICIT_EULER)
        with pytest.raises(UnstableStepError):
            step(AgentState(Vec2(0, 0), Vec2(1, 0)), Vec2(0, 0), w)

    def test_converges_to_exact(self):
        # First-order scheme: halving dt at least halves the end-state error.
        a = Vec2(4.0, 1.0)
        s0 = AgentState(Vec2(0, 0), Vec2(0.5, -0.3))
        exact = step(s0, a, world(dt=2.0))

        def euler_error(dt: float) -> float:
            w = world(dt=dt, scheme=Scheme.SEMI_IMPLICIT_EULER)
            s = s0
            for _ in range(round(2.0 / dt)):
                s = step(s, a, w)
            return max(
                abs(s.pos.x - exact.pos.x), abs(s.pos.y - exact.pos.y),
                abs(s.vel.x - exact.vel.x), abs(s.vel.y - exact.vel.y),
            )

        errors = [euler_error(dt) for dt in (0.1, 0.05, 0.025)]
        assert errors[1] <= errors[0] / 2.0
        assert errors[2] <= errors[1] / 2.0


class TestIntegratorProperties:
    def test_free_decay_many_steps(self):
        w = world(dt=0.1)
        s = AgentState(Vec2(0, 0), Vec2(3, 0))
        for _ in range(12):
            s = step(s, Vec2(0, 0), w)
        assert abs(s.vel.x - DECAY_1_2S_VX) / DECAY_1_2S_VX < 1e-10

    def test_free_decay_property(self):
        rng = np.random.default_rng(14)
        for _ in range(1000):
            v0 = Vec2(*rng.uniform(-8, 8, 2))
            mu = rng.uniform(0.05, 2.0)
            n = int(rng.integers(1, 30))
            w = world(mu=mu, dt=0.1)
            s = AgentState(Vec2(0, 0), v0)
            for _ in range(n):
                s = step(s, Vec2(0, 0), w)
            want = v0.norm() * math.exp(-mu * n * 0.1)
            if want > 1e-12:
                assert abs(s.vel.norm() - want) / want < 1e-10

    def test_terminal_speed(self):
        w = world(dt=0.1)
        s = AgentState(Vec2(0, 0), Vec2(0, 0))
        for _ in range(800):  # 80 s = 40/mu
            s = step(s, Vec2(4, 0), w)
        assert abs(s.vel.norm() - TERMINAL_SPEED) < 1e-6 * TERMINAL_SPEED

    def test_speed_never_exceeds_terminal(self):
        rng = np.random.default_rng(15)
        w = world(dt=0.1)
        s = AgentState(Vec2(0, 0), Vec2(0, 0))
        for _ in range(1000):
            angle = rng.uniform(0, 2 * math.pi)
            s = step(s, Vec2(4 * math.cos(angle), 4 * math.sin(angle)), w)
            assert s.vel.norm() <= TERMINAL_SPEED + 1e-9

    def test_semigroup_property(self):
        rng = np.random.default_rng(16)
        for _ in range(1000):
            s0 = AgentState(Vec2(*rng.uniform(-10, 10, 2)), Vec2(*rng.uniform(-8, 8, 2)))
            a = Vec2(*rng.uniform(-4, 4, 2))
            mu = rng.uniform(0.0, 2.0)
            dt = rng.uniform(0.01, 0.5)
            one = step(s0, a, world(mu=mu, dt=dt))
            half_w = world(mu=mu, dt=dt / 2.0)
            two = step(step(s0, a, half_w), a, half_w)
            assert abs(one.pos.x - two.pos.x) < 1e-12
            assert abs(one.pos.y - two.pos.y) < 1e-12
            assert abs(one.vel.x - two.vel.x) < 1e-12
            assert abs(one.vel.y - two.vel.y) < 1e-12

    def test_rotational_equivariance(self):
        rng = np.random.default_rng(17)
        for _ in range(1000):
            s0 = AgentState(Vec2(*rng.uniform(-10, 10, 2)), Vec2(*rng.uniform(-8, 8, 2)))
            a = Vec2(*rng.uniform(-4, 4, 2))
            theta = rng.uniform(0, 2 * math.pi)
            w = world(mu=rng.uniform(0.0, 2.0), dt=0.1)
            rotated_first = step(
                AgentState(s0.pos.rotated(theta), s0.vel.rotated(theta)),
                a.rotated(theta),
                w,
            )
            stepped_first = step(s0, a, w)
            assert abs(rotated_first.pos.x - stepped_first.pos.rotated(theta).x) < 1e-12
            assert abs(rotated_first.pos.y - stepped_first.pos.rotated(theta).y) < 1e-12
            assert abs(rotated_first.vel.x - stepped_first.vel.rotated(theta).x) < 1e-12
            assert abs(rotated_first.vel.y - stepped_first.vel.rotated(theta).y) < 1e-12
