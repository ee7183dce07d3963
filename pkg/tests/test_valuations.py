import math
import random
from fractions import Fraction

import numpy as np
import pytest
from hypothesis import given
from hypothesis import strategies as st
from scipy.spatial import ConvexHull

from conftest import int_direction, points, polytopes, zonotopes
from minkval.bodies import (
    BodyError,
    Polytope,
    Zonotope,
    as_polytope,
    ball_zonotope,
    lazy_sum,
    linear_image,
    minkowski_sum,
    random_polytope,
    random_zonotope,
    scale,
    support,
    translate,
)
from minkval.kernel import Halfspace, direction_set, dot, rational_orthogonal_matrices, transpose
from minkval.mixed import intrinsic_volumes_angles
from minkval.valuations import (
    LinearSupport,
    OperatorContext,
    bivariate_decompose,
    certify_support_function,
    constant_klain,
    identity_operator,
    intrinsic_valuation,
    is_nontrivial,
    klain_callable,
    klain_invert,
    klain_table,
    lambda_derive,
    lambda_power,
    merge_generators,
    merged_zonotope,
    mixed_functional_valuation,
    operator_from_expression,
    projection_body,
    projection_body_operator,
    refit_consistent,
    so_equivariance_probe,
    steiner_decompose,
    steiner_point,
    support_triple_valuation,
    valuation_property_check,
    volume_ball_operator,
    zonotope_intrinsic_volume,
)


def shadow_volume(K, u):
    """``vol_{n-1}(K | u^perp) * |u|`` by orthogonal projection and scipy hulls."""
    V = np.array([[float(x) for x in v] for v in as_polytope(K).vertices])
    u = np.array(u, dtype=float)
    n = len(u)
    q, _ = np.linalg.qr(np.column_stack([u] + [np.eye(n)[k] for k in range(n)]))
    basis = q[:, 1:n]
    proj = V @ basis
    if n == 2:
        size = proj.max() - proj.min()
    else:
        try:
            size = ConvexHull(proj).volume
        except Exception:  # degenerate shadow
            size = 0.0
    return size * np.linalg.norm(u)


def float_close(a, b, tol=1e-9):
    return abs(float(a) - float(b)) <= tol * max(1.0, abs(float(a)), abs(float(b)))


PB3 = projection_body_operator(3)
PB2 = projection_body_operator(2)


class TestProjectionBody:
    def test_cube(self, cube3):
        PK = projection_body(cube3)
        for u in [(1, 0, 0), (1, 2, -3), (0, 5, 1)]:
            assert support(PK, u) == sum(abs(x) for x in u)

    @given(st.integers(2, 3).flatmap(lambda n: st.tuples(polytopes(n), int_direction(n))))
    def test_polytope_shadow_oracle(self, data):
        K, u = data
        assert float_close(support(projection_body(K), u), shadow_volume(K, u))

    @given(st.integers(2, 3).flatmap(lambda n: st.tuples(zonotopes(n, max_gens=4), int_direction(n))))
    def test_zonotope_shadow_oracle(self, data):
        Z, u = data
        assert float_close(support(projection_body(Z), u), shadow_volume(Z, u))

    @given(st.integers(2, 3).flatmap(
        lambda n: st.tuples(polytopes(n, max_pts=6), zonotopes(n, max_gens=3), int_direction(n))))
    def test_lazy_sum_matches_materialized(self, data):
        P, Z, u = data
        lazy = projection_body(lazy_sum(P, Z))
        full = projection_body(as_polytope(minkowski_sum(P, Z)))
        assert support(lazy, u) == support(full, u)

    @pytest.mark.parametrize("seed", range(3))
    def test_float_lazy_sum_with_ball(self, seed):
        # float generators make the cross images only nearly planar
        K = random_polytope(random.Random(seed), 3)
        B = ball_zonotope(3, 16, exact=False)
        PS = projection_body(lazy_sum(K, B))
        PT = projection_body(lazy_sum(translate(K, (1, -2, 3)), B))
        for u in [(1, 0, 0), (1, 2, -3), (0, 5, 1)]:
            ref = shadow_volume(as_polytope(minkowski_sum(K, B)), u)
            assert float_close(support(PS, u), ref, 1e-7)
            assert float_close(support(PT, u), ref, 1e-7)

    @given(st.integers(2, 3).flatmap(
        lambda n: st.tuples(polytopes(n, max_pts=6), points(n), st.fractions(1, 4), int_direction(n))))
    def test_translation_invariant_and_homogeneous(self, data):
        K, x, lam, u = data
        n = K.dim
        base = support(projection_body(K), u)
        assert support(projection_body(translate(K, x)), u) == base
        assert support(projection_body(scale(K, lam)), u) == lam ** (n - 1) * base

    @given(polytopes(3, max_pts=6), int_direction(3))
    def test_rotation_equivariant(self, K, u):
        for A in rational_orthogonal_matrices(3)[:3]:
            lhs = support(projection_body(linear_image(K, A)), u)
            rhs = support(projection_body(K), tuple(dot(r, u) for r in transpose(A)))
            assert lhs == rhs

    def test_flat_body(self):
        sq = Polytope(((0, 0, 0), (1, 0, 0), (0, 1, 0), (1, 1, 0)))
        PK = projection_body(sq)
        assert support(PK, (0, 0, 1)) == 1
        assert support(PK, (1, 0, 0)) == 0

    def test_is_nontrivial(self):
        assert is_nontrivial(PB3, 3, 16)

    def test_so_probe(self):
        rep = so_equivariance_probe(PB3, random_polytope(random.Random(3), 3), direction_set(3, 12, True))
        assert rep.passed


class TestGenerators:
    def test_merge_parallel(self):
        m = merge_generators([(1, 2), (-2, -4), (0, 1)])
        assert m == {(1, 2): 3, (0, 1): 1}

    def test_merged_zonotope_same_support(self):
        Z = Zonotope((0, 0, 0), ((1, 0, 0), (2, 0, 0), (0, 1, 1)))
        M = merged_zonotope(Z)
        assert len(M.generators) == 2
        for u in direction_set(3, 12, True):
            assert support(M, u) == support(Z, u)

    def test_linear_support_certification(self):
        A = Zonotope((0, 0), ((1, 0), (0, 1)))
        B = Zonotope((0, 0), ((1, 0),))
        pos = LinearSupport(((1, A), (-1, B)), 2)
        assert pos.as_zonotope() is not None
        neg = LinearSupport(((1, B), (-1, A)), 2)
        assert neg.as_zonotope() is None
        assert neg((0, 1)) == -1


class TestSteinerDecomposition:
    @pytest.mark.parametrize("n", [2, 3])
    def test_ball_and_zonotope(self, n):
        rng = random.Random(n)
        K = random_polytope(rng, n)
        Phi = projection_body_operator(n)
        dirs = direction_set(n, 6 * n, True)
        for Z in (ball_zonotope(n, 16), random_zonotope(rng, n)):
            dec = steiner_decompose(Phi, K, Z, dirs)
            assert dec.reproduces()
            assert refit_consistent(dec, Phi)
            # constant term is Phi(K); top power r^{n-1} is Phi(Z); r^n vanishes
            for u in dirs:
                assert dec.power(0)(u) == support(projection_body(K), u)
                assert dec.power(n - 1)(u) == support(projection_body(Z), u)
                assert dec.power(n)(u) == 0
            for j in range(n + 1):
                assert dec.coefficient(j).as_zonotope() is not None

    @given(st.integers(2, 3).flatmap(lambda n: st.tuples(polytopes(n, max_pts=6), zonotopes(n, max_gens=3))))
    def test_fresh_radius(self, data):
        K, Z = data
        n = K.dim
        Phi = projection_body_operator(n)
        dec = steiner_decompose(Phi, K, Z)
        r = Fraction(5, 2)
        target = Phi.evaluate(lazy_sum(K, scale(Z, r)))
        for u in direction_set(n, 4 * n, True):
            val = sum(r ** k * dec.power(k)(u) for k in range(n + 1))
            assert val == support(target, u)

    def test_wrong_node_count(self, cube3):
        with pytest.raises(ValueError):
            steiner_decompose(PB3, cube3, ball_zonotope(3, 16), nodes=(0, 1))


class TestSublinearity:
    def test_support_function_passes(self):
        Z = random_zonotope(random.Random(0), 3)
        rep = certify_support_function(lambda u: support(Z, u), direction_set(3, 24, True), 2000)
        assert rep.passed and rep.info["violations"] == 0

    def test_concave_function_fails(self):
        h = lambda u: -sum(abs(x) for x in u)  # noqa: E731
        rep = certify_support_function(h, direction_set(3, 24, True), 500)
        assert not rep.passed and rep.info["violations"] > 0

    def test_linear_is_tight(self):
        rep = certify_support_function(lambda u: u[0] - 2 * u[1], direction_set(2, 8, True), 500)
        assert rep.passed and rep.info["exact_rechecks"] == 500

    def test_deterministic(self):
        Z = random_zonotope(random.Random(1), 2)
        dirs = direction_set(2, 16, True)
        a = certify_support_function(lambda u: support(Z, u), dirs, 300, seed=5).to_json()
        assert a == certify_support_function(lambda u: support(Z, u), dirs, 300, seed=5).to_json()


class TestLambda:
    def test_degrees(self):
        L1 = lambda_derive(PB3, 16)
        assert L1.degree == 1 and lambda_power(PB3, 2, 16).degree == 0

    def test_second_derivative_is_constant(self):
        # Lambda^2 Pi is degree 0 and equals 2 Pi B_N at every body in R^3
        rng = random.Random(5)
        B = ball_zonotope(3, 16)
        L2 = lambda_power(PB3, 2, 16)
        PB = projection_body(B)
        for _ in range(2):
            K = random_polytope(rng, 3)
            img = L2.evaluate(K)
            for u in direction_set(3, 12, True):
                assert support(img, u) == 2 * support(PB, u)

    def test_lambda_of_identity_2d(self):
        # Lambda id (K) = B_N: the r^1 coefficient of K + r B_N
        B = ball_zonotope(2, 16)
        img = lambda_derive(identity_operator(), 16).evaluate(random_polytope(random.Random(2), 2))
        for u in direction_set(2, 8, True):
            assert support(img, u) == support(B, u)


class TestValuationProperty:
    @given(polytopes(3, max_pts=7), int_direction(3), st.fractions(Fraction(1, 8), Fraction(7, 8)))
    def test_projection_body(self, P, normal, t):
        vals = sorted(dot(normal, v) for v in P.vertices)
        H = Halfspace(normal, vals[0] + t * (vals[-1] - vals[0]))
        rep = valuation_property_check(PB3, P, H, direction_set(3, 12, True))
        assert rep.passed

    def test_rejects_non_split(self, cube3):
        with pytest.raises(BodyError):
            valuation_property_check(PB3, cube3, Halfspace((1, 0, 0), 5), direction_set(3, 6))


class TestKlain:
    @pytest.mark.parametrize("seed", range(4))
    def test_inversion_matches_angle_oracle(self, seed):
        Z = random_zonotope(random.Random(seed), 3)
        oracle = intrinsic_volumes_angles(list(as_polytope(Z).vertices))
        one = constant_klain(1)
        for i in (1, 2, 3):
            got = klain_invert(one, [Z] * i)
            assert abs(float(got) - oracle[i]) <= 1e-12 * oracle[i]
            assert float_close(got, zonotope_intrinsic_volume(Z, i), 1e-12)
        assert isinstance(klain_invert(one, [Z] * 3), Fraction)

    @pytest.mark.parametrize("n,i", [(2, 1), (3, 1), (3, 2)])
    def test_table_of_intrinsic_is_one(self, n, i):
        table = klain_table(intrinsic_valuation(i), n)
        assert all(abs(float(v) - 1) < 1e-12 for v in table.entries.values())

    def test_inversion_reproduces_mixed_functional(self):
        rng = random.Random(9)
        C = random_zonotope(rng, 3)
        phi = mixed_functional_valuation(2, C)
        Z = random_zonotope(rng, 3)
        got = klain_invert(klain_callable(phi), [Z, Z])
        assert float_close(got, phi.evaluate(Z), 1e-9)

    def test_rejects_odd_or_mismatched(self):
        with pytest.raises(ValueError):
            klain_invert(constant_klain(1), [])
        with pytest.raises(BodyError):
            klain_invert(constant_klain(1), [Zonotope((0, 0), ((1, 0),)), Zonotope((0, 0, 0), ((1, 0, 0),))])
        with pytest.raises(ValueError):
            klain_table(support_triple_valuation((1, 0), (0, 1)), 2)


class TestBivariate:
    @pytest.mark.parametrize("n", [2, 3])
    def test_degree_bound(self, n):
        rng = random.Random(10 + n)
        Z1, Z2 = random_zonotope(rng, n), random_zonotope(rng, n)
        Phi = projection_body_operator(n)
        fit = bivariate_decompose(Phi, Z1, Z2)
        assert fit.degree_bound_holds
        # only the degree n-1 part survives for the projection body
        for (a, b), c in fit.coefficients.items():
            if a + b != n - 1:
                assert c.is_zero()
        l1, l2 = Fraction(3, 2), Fraction(1, 3)
        target = Phi.evaluate(lazy_sum(scale(Z1, l1), scale(Z2, l2)))
        for u in direction_set(n, 4 * n, True):
            val = sum(l1 ** a * l2 ** b * c(u) for (a, b), c in fit.coefficients.items())
            assert val == support(target, u)


class TestSteinerPoint:
    @given(st.integers(2, 3).flatmap(lambda n: st.tuples(polytopes(n, max_pts=6), polytopes(n, max_pts=6), points(n))))
    def test_additive_and_equivariant(self, data):
        K, L, x = data
        n = K.dim
        dirs = direction_set(n, 8 * n, True)
        sK, sL = steiner_point(K, dirs), steiner_point(L, dirs)
        assert steiner_point(minkowski_sum(K, L), dirs) == tuple(a + b for a, b in zip(sK, sL))
        assert steiner_point(translate(K, x), dirs) == tuple(a + b for a, b in zip(sK, x))

    def test_symmetric_body_center(self, cube3):
        assert steiner_point(cube3, direction_set(3, 32, True)) == (Fraction(1, 2),) * 3


class TestOperators:
    ctx = OperatorContext(3, 16, True)

    def test_names(self):
        assert operator_from_expression("projection_body", self.ctx).degree == 2
        assert operator_from_expression("identity", self.ctx).degree == 1
        assert operator_from_expression("volume_ball", self.ctx).degree == 3

    def test_composite(self, cube3):
        op = operator_from_expression({"op": "sum", "of": [
            {"op": "scale", "by": "1/2", "of": {"op": "projection_body"}},
            {"op": "projection_body"}]}, self.ctx)
        assert op.degree == 2
        assert support(op.evaluate(cube3), (1, 1, 1)) == Fraction(9, 2)
        lam = operator_from_expression({"op": "lambda", "of": {"op": "projection_body"}}, self.ctx)
        assert lam.degree == 1

    @pytest.mark.parametrize("expr,field", [
        ({"op": "nope"}, "op"),
        ({"nothing": 1}, "op"),
        ({"op": "lambda"}, "of"),
        ({"op": "scale", "by": "x", "of": "identity"}, "by"),
        ({"op": "scale", "by": -1, "of": "identity"}, "by"),
        ({"op": "sum", "of": []}, "of"),
    ])
    def test_errors(self, expr, field):
        with pytest.raises(ValueError, match=f"^{field}:"):
            operator_from_expression(expr, self.ctx)

    def test_volume_ball(self, cube3):
        op = volume_ball_operator(3, 16)
        B = ball_zonotope(3, 16)
        assert support(op.evaluate(scale(cube3, 2)), (1, 0, 0)) == 8 * support(B, (1, 0, 0))


class TestScalarValuations:
    @given(zonotopes(3, max_gens=4), points(3), points(3))
    def test_support_triple_nonnegative(self, Z, x, y):
        assert support_triple_valuation(x, y).evaluate(Z) >= 0

    def test_intrinsic_valuation_on_polytope(self, cube3):
        assert math.isclose(intrinsic_valuation(1).evaluate(cube3), 3)
        assert intrinsic_valuation(2).evaluate(Zonotope((0, 0, 0), ((Fraction(1, 2), 0, 0), (0, Fraction(1, 2), 0), (0, 0, Fraction(1, 2))))) == 3
