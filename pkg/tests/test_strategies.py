"""Baseline feedback laws and policy dispatch."""

from __future__ import annotations

import math

import numpy as np
import pytest

from pesim import (
    GameObservation,
    InvalidDirectionError,
    MlpNet,
    Perspective,
    Policy,
    PolicyKind,
    PolicyMismatchError,
    Vec2,
    baseline_evasion,
    baseline_pursuit,
    perpendicular_turn,
    policy_action,
)
from pesim.mlp import Activation, Layer


def obs(
    x_p: Vec2,
    x_e: Vec2,
    v_p: Vec2 = Vec2(0.0, 0.0),
    v_e: Vec2 = Vec2(0.0, 0.0),
) -> GameObservation:
    return GameObservation(x_p, x_e, v_p, v_e)


def zero_net(a_max: float = 4.0) -> MlpNet:
    w = np.zeros((2, 8))
    b = np.zeros(2)
    return MlpNet((Layer(w, b, Activation.TANH),), 8, 2, a_max)


class TestBaselinePursuit:
    def test_straight_up(self):
        a = baseline_pursuit(obs(Vec2(0, -4), Vec2(0, 0)), 4.0)
        assert a == Vec2(0.0, 4.0)

    def test_three_four_five(self):
        a = baseline_pursuit(obs(Vec2(3, 0), Vec2(0, 4)), 4.0)
        assert abs(a.x - (-2.4)) < 1e-15
        assert abs(a.y - 3.2) < 1e-15

    def test_zero_gain(self):
        assert baseline_pursuit(obs(Vec2(1, 1), Vec2(5, -2)), 0.0) == Vec2(0.0, 0.0)

    def test_norm_is_exactly_a_p(self):
        rng = np.random.default_rng(21)
        for _ in range(1000):
            o = obs(Vec2(*rng.uniform(-15, 15, 2)), Vec2(*rng.uniform(-15, 15, 2)))
            a_p = rng.uniform(0.1, 6.0)
            assert abs(baseline_pursuit(o, a_p).norm() - a_p) < 1e-12


class TestPerpendicularTurn:
    def test_opposes_pursuer_momentum(self):
        assert perpendicular_turn(Vec2(0, 1), Vec2(1, 0)) == Vec2(-1.0, 0.0)

    def test_tie_breaks_counterclockwise_at_rest(self):
        assert perpendicular_turn(Vec2(0, 1), Vec2(0, 0)) == Vec2(-1.0, 0.0)

    def test_sign_rule_other_axis(self):
        assert perpendicular_turn(Vec2(1, 0), Vec2(0, -3)) == Vec2(0.0, 1.0)

    def test_non_unit_direction_rejected(self):
        with pytest.raises(InvalidDirectionError):
            perpendicular_turn(Vec2(1, 1), Vec2(1, 0))

    def test_equal_dot_tie_breaks_counterclockwise(self):
        # Pursuer velocity along d: both perpendiculars have dot 0.
        assert perpendicular_turn(Vec2(0, 1), Vec2(0, 5)) == Vec2(-1.0, 0.0)

    def test_orthonormal_property(self):
        rng = np.random.default_rng(22)
        for _ in range(1000):
            angle = rng.uniform(0, 2 * math.pi)
            d = Vec2(math.cos(angle), math.sin(angle))
            n = perpendicular_turn(d, Vec2(*rng.uniform(-8, 8, 2)))
            assert abs(n.dot(d)) < 1e-12
            assert abs(n.norm() - 1.0) < 1e-12

    def test_picks_smaller_dot_property(self):
        rng = np.random.default_rng(23)
        for _ in range(1000):
            angle = rng.uniform(0, 2 * math.pi)
            d = Vec2(math.cos(angle), math.sin(angle))
            v = Vec2(*rng.uniform(-8, 8, 2))
            n = perpendicular_turn(d, v)
            other = Vec2(-n.x, -n.y)
            assert n.dot(v) <= other.dot(v) + 1e-12


class TestBaselineEvasion:
    def test_flees_when_far(self):
        a = baseline_evasion(obs(Vec2(0, -4), Vec2(0, 0), v_p=Vec2(1, 1)), 2.0, 2.4)
        assert a == Vec2(0.0, 2.0)

    def test_turns_when_close(self):
        a = baseline_evasion(obs(Vec2(0, -2), Vec2(0, 0), v_p=Vec2(1, 1)), 2.0, 2.4)
        assert a == Vec2(-2.0, 0.0)

    def test_zero_critical_distance_never_turns(self):
        rng = np.random.default_rng(24)
        for _ in range(200):
            x_p = Vec2(*rng.uniform(-10, 10, 2))
            x_e = Vec2(*rng.uniform(-10, 10, 2))
            if (x_p - x_e).norm() < 1e-6:
                continue
            o = obs(x_p, x_e, v_p=Vec2(*rng.uniform(-5, 5, 2)))
            a = baseline_evasion(o, 2.0, 0.0)
            d = (x_e - x_p) * (1.0 / (x_e - x_p).norm())
            assert abs(a.x - 2.0 * d.x) < 1e-12
            assert abs(a.y - 2.0 * d.y) < 1e-12

    def test_branch_selection_at_boundary(self):
        # Separation exactly c turns; c + 1e-9 still flees.
        v_p = Vec2(0.0, 3.0)
        at_c = baseline_evasion(obs(Vec2(0, -2.4), Vec2(0, 0), v_p=v_p), 2.0, 2.4)
        assert abs(at_c.y) < 1e-12  # perpendicular to the line of sight
        just_outside = baseline_evasion(
            obs(Vec2(0.0, -2.4 - 1e-9), Vec2(0, 0), v_p=v_p), 2.0, 2.4
        )
        assert just_outside.y > 1.9  # still fleeing straight up

    def test_norm_is_exactly_a_e(self):
        rng = np.random.default_rng(25)
        for _ in range(1000):
            o = obs(
                Vec2(*rng.uniform(-15, 15, 2)),
                Vec2(*rng.uniform(-15, 15, 2)),
                v_p=Vec2(*rng.uniform(-8, 8, 2)),
            )
            a_e = rng.uniform(0.1, 6.0)
            c = rng.uniform(0.0, 5.0)
            assert abs(baseline_evasion(o, a_e, c).norm() - a_e) < 1e-12


class TestEquivariance:
    def test_baselines_rotate_with_the_frame(self):
        rng = np.random.default_rng(26)
        for _ in range(1000):
            o = obs(
                Vec2(*rng.uniform(-10, 10, 2)),
                Vec2(*rng.uniform(-10, 10, 2)),
                v_p=Vec2(*rng.uniform(-8, 8, 2)),
                v_e=Vec2(*rng.uniform(-8, 8, 2)),
            )
            theta = rng.uniform(0, 2 * math.pi)
            rotated = GameObservation(
                o.x_p.rotated(theta),
                o.x_e.rotated(theta),
                o.v_p.rotated(theta),
                o.v_e.rotated(theta),
            )
            p = baseline_pursuit(o, 4.0).rotated(theta)
            p_rot = baseline_pursuit(rotated, 4.0)
            assert abs(p.x - p_rot.x) < 1e-12 and abs(p.y - p_rot.y) < 1e-12
            e = baseline_evasion(o, 2.0, 2.4).rotated(theta)
            e_rot = baseline_evasion(rotated, 2.0, 2.4)
            assert abs(e.x - e_rot.x) < 1e-12 and abs(e.y - e_rot.y) < 1e-12


class TestPolicy:
    def test_constructors(self):
        p = Policy.pursuit(4.0)
        assert p.kind is PolicyKind.BASELINE_PURSUIT and p.a_max == 4.0
        e = Policy.evasion(2.0, 2.4)
        assert e.kind is PolicyKind.BASELINE_EVASION and e.c == 2.4
        m = Policy.from_net(zero_net(3.0))
        assert m.kind is PolicyKind.MLP and m.a_max == 3.0

    @pytest.mark.parametrize(
        "build",
        [
            lambda: Policy(PolicyKind.BASELINE_PURSUIT, -1.0),
            lambda: Policy(PolicyKind.BASELINE_PURSUIT, math.nan),
            lambda: Policy(PolicyKind.BASELINE_EVASION, 2.0),  # missing c
            lambda: Policy(PolicyKind.BASELINE_EVASION, 2.0, c=-0.5),
            lambda: Policy(PolicyKind.BASELINE_PURSUIT, 2.0, c=1.0),  # stray c
            lambda: Policy(PolicyKind.MLP, 2.0),  # missing net
            lambda: Policy(PolicyKind.BASELINE_PURSUIT, 2.0, net=zero_net()),
        ],
    )
    def test_rejects_invalid(self, build):
        with pytest.raises(ValueError):
            build()


class TestPolicyAction:
    def test_delegates_to_pursuit(self):
        a = policy_action(
            Policy.pursuit(4.0), obs(Vec2(0, -4), Vec2(0, 0)), Perspective.PURSUER
        )
        assert a == Vec2(0.0, 4.0)

    def test_zero_net_gives_zero_action(self):
        a = policy_action(
            Policy.from_net(zero_net()),
            obs(Vec2(1, 2), Vec2(3, 4), Vec2(5, 6), Vec2(7, 8)),
            Perspective.EVADER,
        )
        assert a == Vec2(0.0, 0.0)

    def test_role_mismatch_rejected(self):
        o = obs(Vec2(0, -4), Vec2(0, 0))
        with pytest.raises(PolicyMismatchError):
            policy_action(Policy.evasion(2.0, 2.4), o, Perspective.PURSUER)
        with pytest.raises(PolicyMismatchError):
            policy_action(Policy.pursuit(4.0), o, Perspective.EVADER)

    def test_output_always_clamped(self):
        rng = np.random.default_rng(27)
        policies = [Policy.pursuit(4.0), Policy.from_net(zero_net(2.0))]
        evaders = [Policy.evasion(2.0, 2.4), Policy.from_net(zero_net(1.0))]
        for _ in range(250):
            o = obs(
                Vec2(*rng.uniform(-15, 15, 2)),
                Vec2(*rng.uniform(-15, 15, 2)),
                v_p=Vec2(*rng.uniform(-8, 8, 2)),
            )
            for p in policies:
                assert policy_action(p, o, Perspective.PURSUER).norm() <= p.a_max + 1e-12
            for e in evaders:
                assert policy_action(e, o, Perspective.EVADER).norm() <= e.a_max + 1e-12
