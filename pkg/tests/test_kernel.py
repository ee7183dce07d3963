from fractions import Fraction

import numpy as np
import pytest
from hypothesis import given
from hypothesis import strategies as st
from scipy.spatial import ConvexHull

from conftest import points, rationals
from minkval.kernel import (
    Frame,
    Halfspace,
    Tolerance,
    bracket,
    convex_hull_indices,
    cross3,
    det,
    direction_set,
    dot,
    format_scalar,
    gen_cross,
    integerize,
    matmul,
    norm2,
    oblique_projector,
    parse_scalar,
    rank,
    rational_frames,
    rational_orthogonal_matrices,
    rational_rotation,
    solve_linear,
    transpose,
    vsub,
)


def matrices(n):
    return st.lists(st.tuples(*[rationals() for _ in range(n)]), min_size=n, max_size=n)


class TestScalars:
    @given(rationals(-100, 100, 7))
    def test_format_parse_roundtrip(self, x):
        assert parse_scalar(format_scalar(x)) == x

    def test_parse_forms(self):
        assert parse_scalar("3/4") == Fraction(3, 4)
        assert parse_scalar(2) == 2
        assert parse_scalar("0.5") == Fraction(1, 2)
        with pytest.raises(ValueError):
            parse_scalar("abc")

    def test_tolerance(self):
        tol = Tolerance(1e-9)
        assert tol.close(1.0, 1.0 + 1e-12)
        assert not tol.close(1.0, 1.001)
        assert tol.close(Fraction(1, 3), Fraction(1, 3))


class TestLinearAlgebra:
    @given(st.integers(2, 4).flatmap(matrices))
    def test_det_matches_numpy(self, rows):
        d = det(rows)
        assert isinstance(d, Fraction)
        ref = np.linalg.det(np.array(rows, dtype=float))
        assert abs(float(d) - ref) <= 1e-9 * max(1.0, abs(ref))

    @given(st.integers(2, 4).flatmap(matrices))
    def test_rank_matches_numpy(self, rows):
        assert rank(rows) == np.linalg.matrix_rank(np.array(rows, dtype=float))

    @given(st.integers(2, 4).flatmap(lambda n: st.tuples(matrices(n), points(n))))
    def test_solve_linear_exact(self, data):
        rows, b = data
        if det(rows) == 0:
            with pytest.raises(ZeroDivisionError):
                solve_linear(rows, [[x] for x in b])
            return
        x = [r[0] for r in solve_linear(rows, [[x] for x in b])]
        assert [dot(r, x) for r in rows] == list(b)

    @given(st.integers(2, 4).flatmap(lambda n: st.lists(points(n), min_size=n - 1, max_size=n - 1)))
    def test_gen_cross_orthogonal_and_bracket(self, vs):
        w = gen_cross(vs)
        assert all(dot(w, v) == 0 for v in vs)
        # |w|^2 equals the Gram determinant of the vectors
        gram = [[dot(a, b) for b in vs] for a in vs]
        assert norm2(w) == det(gram)
        assert abs(float(bracket(vs)) ** 2 - float(det(gram))) <= 1e-9 * max(1.0, float(det(gram)))

    def test_cross3(self):
        assert cross3((1, 0, 0), (0, 1, 0)) == (0, 0, 1)
        assert gen_cross([(1, 0, 0), (0, 1, 0)]) == (0, 0, 1)

    def test_bracket_rational_when_square(self):
        assert bracket([(3, 0), (0, 4)]) == 12
        assert bracket([(Fraction(1, 2), 0), (1, 1)]) == Fraction(1, 2)
        assert bracket([(1, 0, 0), (1, 1, 0)]) == 1

    @given(st.lists(points(3), min_size=1, max_size=6))
    def test_integerize(self, pts):
        ints, D = integerize(pts)
        assert all(isinstance(x, int) for p in ints for x in p)
        assert [tuple(Fraction(x, D) for x in p) for p in ints] == [tuple(p) for p in pts]


class TestRotations:
    @pytest.mark.parametrize("n", [2, 3, 4])
    def test_rational_orthogonal(self, n):
        mats = rational_orthogonal_matrices(n)
        assert mats
        eye = tuple(tuple(Fraction(int(r == c)) for c in range(n)) for r in range(n))
        for Q in mats:
            assert matmul(Q, transpose(Q)) == eye

    def test_quaternion_rotation_has_det_one(self):
        assert det(rational_rotation((1, 2, 3, 4))) == 1

    @pytest.mark.parametrize("n,i", [(2, 1), (3, 1), (3, 2), (4, 2)])
    def test_rational_frames(self, n, i):
        frames = rational_frames(n, i)
        assert frames and all(f.rank == i and f.ambient == n for f in frames)

    def test_frame_rejects_non_orthonormal(self):
        with pytest.raises(ValueError):
            Frame(((1, 0), (1, 1)))

    def test_halfspace(self):
        H = Halfspace((1, 0), 1)
        assert H.contains((1, 5)) and not H.contains((2, 0))
        assert H.opposite().contains((2, 0))
        with pytest.raises(ValueError):
            Halfspace((0, 0), 1)


class TestHull:
    @given(st.integers(2, 3).flatmap(lambda n: st.lists(points(n), min_size=n + 1, max_size=12, unique=True)))
    def test_hull_matches_scipy(self, pts):
        n = len(pts[0])
        res = convex_hull_indices(pts)
        arr = np.array(pts, dtype=float)
        if res.dim < n:
            assert res.volume == 0
            return
        ref = ConvexHull(arr)
        assert abs(float(res.volume) - ref.volume) <= 1e-9 * max(1.0, ref.volume)
        # scipy may report collinear boundary points; compare extreme point sets
        ours = {tuple(pts[i]) for i in res.vertices}
        assert ours <= {tuple(pts[i]) for i in ref.vertices}
        assert abs(ConvexHull(np.array(sorted(ours), dtype=float)).volume - ref.volume) <= 1e-9

    @given(st.integers(2, 3).flatmap(lambda n: st.lists(points(n), min_size=n + 1, max_size=10, unique=True)))
    def test_facet_identities(self, pts):
        n = len(pts[0])
        res = convex_hull_indices(pts)
        if res.dim < n:
            return
        # closed surface: area vectors sum to zero
        total = [sum(f.area_vector[c] for f in res.facets) for c in range(n)]
        assert all(t == 0 for t in total)
        # divergence theorem: n vol = sum_F h_F |F|
        acc = 0
        for f in res.facets:
            scale = dot(f.normal, f.normal)
            x = pts[f.vertices[0]]
            acc += dot(f.area_vector, x)
            assert all(dot(f.normal, pts[v]) == f.offset for v in f.vertices)
            assert all(dot(f.normal, p) <= f.offset for p in pts)
            assert scale > 0
        assert acc == n * res.volume

    def test_planar_order_is_ccw(self):
        pts = [(0, 0), (2, 0), (1, 1), (2, 2), (0, 2)]
        res = convex_hull_indices(pts)
        ring = [pts[i] for i in res.vertices]
        assert (1, 1) not in ring
        for a, b, c in zip(ring, ring[1:] + ring[:1], ring[2:] + ring[:2]):
            assert det([vsub(b, a), vsub(c, b)]) > 0

    def test_lower_dimensional_input(self):
        res = convex_hull_indices([(0, 0, 0), (1, 0, 0), (0, 1, 0), (1, 1, 0)])
        assert res.dim == 2 and res.volume == 0 and res.facets == ()


class TestDirections:
    @pytest.mark.parametrize("n,count", [(2, 4), (2, 16), (3, 6), (3, 32), (3, 64), (4, 16)])
    def test_antipodal_unit(self, n, count):
        for exact in (True, False):
            dirs = direction_set(n, count, exact)
            half = count // 2
            assert len(dirs) == count
            assert len(set(dirs)) == count
            for u, v in zip(dirs[:half], dirs[half:]):
                assert v == tuple(-x for x in u)
            for u in dirs:
                if exact:
                    assert norm2(u) == 1
                else:
                    assert abs(norm2(u) - 1) < 1e-12

    def test_rejects_bad_counts(self):
        with pytest.raises(ValueError):
            direction_set(3, 5)
        with pytest.raises(ValueError):
            direction_set(3, 4)

    def test_deterministic(self):
        assert direction_set(3, 64, True) == direction_set(3, 64, True)


class TestObliqueProjector:
    @given(st.tuples(st.integers(-5, 5), st.integers(-5, 5), st.integers(-5, 5)).filter(any))
    def test_weighted_shadow_of_cube(self, u):
        # shadow of the unit cube along u has area sum|u_i| / |u|; weight absorbs |u|
        P = oblique_projector([u], 3)
        cube = [(a, b, c) for a in (0, 1) for b in (0, 1) for c in (0, 1)]
        img = [P(x) for x in cube]
        area = convex_hull_indices(img).volume
        assert P.weight * area == sum(abs(x) for x in u)

    def test_dependent_segments(self):
        assert oblique_projector([(1, 2, 3), (2, 4, 6)], 3) is None

    @given(points(3), st.tuples(st.integers(-3, 3), st.integers(-3, 3)))
    def test_pullback_is_transpose(self, x, y):
        P = oblique_projector([(1, 2, 3)], 3)
        assert dot(P(x), y) == dot(x, P.pullback(y))

