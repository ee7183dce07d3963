import random
from fractions import Fraction

import pytest

from minkval.bodies import ball_zonotope, body_volume, random_polytope, random_zonotope, scale
from minkval.inequalities import (
    W_mixed,
    check_bm_general,
    check_bm_quermass,
    check_durch_identity,
    check_main_inequality,
    check_minkowski_inequality,
    check_projection_symmetry,
    homothety_probe,
)
from minkval.mixed import quermassintegral
from minkval.report import EQ, GEQ, InequalityCase, VerificationReport
from minkval.valuations import BODY, ValuationOperator, identity_operator, projection_body_operator

PB3 = projection_body_operator(3)


def pair(seed, n=3):
    rng = random.Random(seed)
    return random_polytope(rng, n), random_polytope(rng, n)


class TestReport:
    def test_exact_cases(self):
        assert InequalityCase("a", Fraction(1, 3), Fraction(1, 3), EQ).passed
        assert not InequalityCase("b", Fraction(1, 3), Fraction(1, 3) + Fraction(1, 10 ** 30), EQ).passed
        assert InequalityCase("c", 2, 1, GEQ).passed
        assert not InequalityCase("d", 1, 2, GEQ).passed

    def test_float_tolerance(self):
        assert InequalityCase("a", 1.0, 1.0 + 1e-12, EQ, tol=1e-9).passed
        assert InequalityCase("b", 1.0 - 1e-12, 1.0, GEQ, tol=1e-9).passed
        assert not InequalityCase("c", 0.9, 1.0, GEQ, tol=1e-9).passed

    def test_json_sorted_and_stable(self):
        def build():
            rep = VerificationReport("s", {"b": 1, "a": Fraction(1, 2)})
            rep.add(InequalityCase("x", Fraction(3, 2), 1, GEQ))
            return rep

        rep = build()
        text = rep.to_json()
        assert '"a": "1/2"' in text and text.index('"a"') < text.index('"b"')
        assert text == build().to_json()
        assert "PASS" in rep.to_text()


class TestSymmetry:
    @pytest.mark.parametrize("seed", range(3))
    def test_exact_zero_slack(self, seed):
        K, L = pair(seed)
        rep = check_projection_symmetry(K, L)
        assert rep.passed and rep.cases[0].slack == 0
        assert rep.cases[0].witnesses["cross_check_value"] == rep.cases[0].lhs

    def test_zonotope_pair(self):
        rng = random.Random(7)
        rep = check_projection_symmetry(random_zonotope(rng, 3), random_zonotope(rng, 3))
        assert rep.passed and rep.cases[0].slack == 0

    def test_planar(self):
        K, L = pair(2, n=2)
        assert check_projection_symmetry(K, L).cases[0].slack == 0


class TestMixedIdentity:
    @pytest.mark.parametrize("i", [1, 2, 3])
    def test_exact_at_small_ball(self, i):
        K, L = pair(11)
        rep = check_durch_identity(PB3, K, L, i, 16)
        assert rep.passed and rep.cases[0].slack == 0

    def test_identity_operator_2d(self):
        K, L = pair(4, n=2)
        for i in (1, 2):
            assert check_durch_identity(identity_operator(), K, L, i, 16).cases[0].slack == 0

    def test_index_range(self):
        K, L = pair(0)
        with pytest.raises(ValueError):
            check_durch_identity(PB3, K, L, 4, 16)


class TestBrunnMinkowski:
    @pytest.mark.parametrize("seed", range(2))
    def test_inequalities_hold(self, seed):
        K, L = pair(seed)
        C = [random_zonotope(random.Random(seed), 3)]
        for i in range(2):
            assert check_minkowski_inequality(K, L, i, 16).passed
        for i in range(3):
            assert check_bm_quermass(K, L, i, 16).passed
        assert check_bm_general(K, L, C).passed
        assert check_bm_general(K, L, []).passed

    def test_homothety_equality(self):
        K, _ = pair(3)
        for i in range(3):
            probe = homothety_probe(lambda A, B, i=i: check_bm_quermass(A, B, i, 16), K, Fraction(3), (1, 0, 2))
            assert probe.passed
        probe = homothety_probe(lambda A, B: check_minkowski_inequality(A, B, 0, 16), K, Fraction(1, 2), (0, 0, 0))
        assert probe.passed and probe.cases[0].slack == 0

    def test_homothety_probe_detects_non_homothets(self):
        K, L = pair(5)
        rep = check_bm_quermass(K, L, 0, 16)
        assert rep.cases[0].relative_slack > 1e-6

    def test_w_mixed_diagonal(self):
        K, _ = pair(6)
        assert W_mixed(K, K, 1, 16) == quermassintegral(K, 1, 16)
        assert W_mixed(K, K, 0, 16) == body_volume(K)

    def test_index_errors(self):
        K, L = pair(0)
        with pytest.raises(ValueError):
            check_minkowski_inequality(K, L, 2, 16)
        with pytest.raises(ValueError):
            check_bm_general(K, L, [K, L])


class TestMainInequality:
    @pytest.mark.parametrize("seed", range(2))
    def test_projection_body(self, seed):
        K, L = pair(seed)
        for i in (1, 2, 3):
            assert check_main_inequality(PB3, K, L, i, 16).passed

    @pytest.mark.parametrize("lam", [Fraction(1, 2), Fraction(1), Fraction(3)])
    def test_homothety(self, lam):
        K, _ = pair(8)
        for i in (1, 2, 3):
            probe = homothety_probe(lambda A, B, i=i: check_main_inequality(PB3, A, B, i, 16), K, lam, (1, -1, 0))
            assert probe.passed, probe.to_text()

    def test_violation_is_reported(self):
        # shrink the image as the body grows: breaks superadditivity
        B = ball_zonotope(3, 16)
        bad = ValuationOperator("shrink", BODY, lambda K: scale(B, 1 / body_volume(K)), 2, None, True)
        K, L = pair(1)
        rep = check_main_inequality(bad, K, L, 1, 16)
        assert not rep.passed and rep.failures

    def test_index_range(self):
        K, L = pair(0)
        with pytest.raises(ValueError):
            check_main_inequality(PB3, K, L, 4, 16)
