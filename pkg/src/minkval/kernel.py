"""Exact low-dimensional linear algebra and convex hull primitives.

Coordinates are either exact rationals (``Fraction``/``int``) or floats.
Combinatorial decisions (hull membership, facet structure) are always made
in exact integer arithmetic: inputs are converted to ``Fraction`` (floats
convert exactly) and scaled by a common denominator before any predicate is
evaluated.
"""
from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction
from functools import reduce
from itertools import combinations
from typing import Iterable, Sequence, Union

Scalar = Union[Fraction, int, float]
Vector = tuple

MIN_DIM = 2
MAX_DIM = 4


# ---------------------------------------------------------------------------
# scalars


def is_exact(x) -> bool:
    return isinstance(x, (int, Fraction)) and not isinstance(x, bool)


def parse_scalar(text) -> Fraction:
    """Parse ``"p/q"``, ``"p"`` or an int into a Fraction."""
    if isinstance(text, (int, Fraction)):
        return Fraction(text)
    if not isinstance(text, str):
        raise ValueError(f"expected a rational string, got {text!r}")
    try:
        return Fraction(text.strip())
    except (ValueError, ZeroDivisionError) as exc:
        raise ValueError(f"malformed rational {text!r}") from exc


def format_scalar(x) -> str:
    if isinstance(x, float):
        return repr(x)
    x = Fraction(x)
    if x.denominator == 1:
        return str(x.numerator)
    return f"{x.numerator}/{x.denominator}"


def to_float(x) -> float:
    return float(x)


@dataclass(frozen=True)
class Tolerance:
    """Equality policy: exact operands compare exactly, floats relatively."""

    tol: float = 1e-9

    def scale(self, *xs) -> float:
        return max([1.0] + [abs(float(x)) for x in xs])

    def close(self, a, b) -> bool:
        if is_exact(a) and is_exact(b):
            return a == b
        return abs(float(a) - float(b)) <= self.tol * self.scale(a, b)

    def leq(self, a, b) -> bool:
        if is_exact(a) and is_exact(b):
            return a <= b
        return float(a) <= float(b) + self.tol * self.scale(a, b)

    def nonneg(self, a) -> bool:
        return self.leq(0, a)


DEFAULT_TOLERANCE = Tolerance()


# ---------------------------------------------------------------------------
# vectors and matrices


def vec(xs) -> Vector:
    return tuple(xs)


def dot(u, v):
    return sum(a * b for a, b in zip(u, v))


def vadd(u, v) -> Vector:
    return tuple(a + b for a, b in zip(u, v))


def vsub(u, v) -> Vector:
    return tuple(a - b for a, b in zip(u, v))


def vscale(c, u) -> Vector:
    return tuple(c * a for a in u)


def vneg(u) -> Vector:
    return tuple(-a for a in u)


def norm2(u):
    return dot(u, u)


def _bareiss(m: list[list[int]]) -> int:
    n = len(m)
    m = [row[:] for row in m]
    sign = 1
    prev = 1
    for k in range(n - 1):
        if m[k][k] == 0:
            for r in range(k + 1, n):
                if m[r][k] != 0:
                    m[k], m[r] = m[r], m[k]
                    sign = -sign
                    break
            else:
                return 0
        pivot = m[k][k]
        for i in range(k + 1, n):
            mik = m[i][k]
            row_i = m[i]
            row_k = m[k]
            for j in range(k + 1, n):
                row_i[j] = (row_i[j] * pivot - mik * row_k[j]) // prev
        prev = pivot
    return sign * m[n - 1][n - 1]


def det(rows: Sequence[Sequence]) -> Scalar:
    """Determinant; exact for int/Fraction entries."""
    n = len(rows)
    if n == 0:
        return 1
    if n == 1:
        return rows[0][0]
    if n == 2:
        return rows[0][0] * rows[1][1] - rows[0][1] * rows[1][0]
    if n == 3:
        a, b, c = rows
        return (a[0] * (b[1] * c[2] - b[2] * c[1])
                - a[1] * (b[0] * c[2] - b[2] * c[0])
                + a[2] * (b[0] * c[1] - b[1] * c[0]))
    flat = [x for r in rows for x in r]
    if all(isinstance(x, int) for x in flat):
        return _bareiss([list(r) for r in rows])
    if all(is_exact(x) for x in flat):
        ints, d = integerize(rows)
        return Fraction(_bareiss([list(r) for r in ints]), d ** n)
    m = [[float(x) for x in r] for r in rows]
    out = 1.0
    for k in range(n):
        p = max(range(k, n), key=lambda r: abs(m[r][k]))
        if m[p][k] == 0.0:
            return 0.0
        if p != k:
            m[k], m[p] = m[p], m[k]
            out = -out
        out *= m[k][k]
        for i in range(k + 1, n):
            f = m[i][k] / m[k][k]
            for j in range(k, n):
                m[i][j] -= f * m[k][j]
    return out


def gen_cross(vs: Sequence[Sequence]) -> Vector:
    """Vector orthogonal to d-1 vectors in R^d whose length is their bracket."""
    d = len(vs) + 1
    out = []
    for k in range(d):
        minor = [[v[c] for c in range(d) if c != k] for v in vs]
        term = det(minor)
        out.append(term if k % 2 == 0 else -term)
    return tuple(out)


def cross3(a, b) -> Vector:
    return (a[1] * b[2] - a[2] * b[1],
            a[2] * b[0] - a[0] * b[2],
            a[0] * b[1] - a[1] * b[0])


def rank(vectors: Sequence[Sequence]) -> int:
    rows = [[Fraction(x) for x in v] for v in vectors]
    return len(_row_echelon_pivots(rows))


def _row_echelon_pivots(rows: list[list]) -> list[int]:
    """In-place elimination; returns indices of rows that were independent."""
    basis: list[tuple[int, list]] = []  # (pivot column, reduced row)
    kept = []
    for idx, row in enumerate(rows):
        r = row[:]
        for col, b in basis:
            if r[col] != 0:
                f = r[col] / b[col]
                r = [x - f * y for x, y in zip(r, b)]
        piv = next((c for c, x in enumerate(r) if x != 0), None)
        if piv is not None:
            basis.append((piv, r))
            kept.append(idx)
    return kept


def solve_linear(a: Sequence[Sequence], b: Sequence[Sequence]) -> list[list]:
    """Solve A X = B for square A; exact for rational input.

    Raises ``ZeroDivisionError`` when A is singular.
    """
    n = len(a)
    exact = all(is_exact(x) for r in a for x in r) and all(is_exact(x) for r in b for x in r)
    conv = Fraction if exact else float
    m = [[conv(x) for x in a[i]] + [conv(x) for x in b[i]] for i in range(n)]
    width = len(m[0])
    for k in range(n):
        if exact:
            p = next((r for r in range(k, n) if m[r][k] != 0), None)
        else:
            p = max(range(k, n), key=lambda r: abs(m[r][k]))
            if m[p][k] == 0.0:
                p = None
        if p is None:
            raise ZeroDivisionError("singular linear system")
        m[k], m[p] = m[p], m[k]
        inv = 1 / m[k][k]
        rowk = [x * inv for x in m[k]]
        m[k] = rowk
        for i in range(n):
            if i != k and m[i][k] != 0:
                f = m[i][k]
                m[i] = [x - f * y for x, y in zip(m[i], rowk)]
    return [row[n:width] for row in m]


def integerize(points: Iterable[Sequence]) -> tuple[list[tuple[int, ...]], int]:
    """Scale rational points by a common denominator D; returns (ints, D)."""
    pts = [tuple(Fraction(x) for x in p) for p in points]
    dens = {x.denominator for p in pts for x in p}
    d = reduce(lambda a, b: a * b // math.gcd(a, b), dens, 1)
    return [tuple(int(x * d) for x in p) for p in pts], d


def bracket(vectors: Sequence[Sequence]) -> Scalar:
    """Volume of the parallelotope spanned by the given vectors.

    Full-rank square input returns ``|det|`` (rational when the data is).
    Otherwise the Gram determinant is formed exactly and its square root is
    taken exactly when it is a rational square, as a float if not.
    """
    i = len(vectors)
    n = len(vectors[0])
    if i == n:
        return abs(det(vectors))
    g = det([[dot(u, v) for v in vectors] for u in vectors])
    if g <= 0:
        return Fraction(0) if is_exact(g) else 0.0
    if is_exact(g):
        g = Fraction(g)
        rn, rd = math.isqrt(g.numerator), math.isqrt(g.denominator)
        if rn * rn == g.numerator and rd * rd == g.denominator:
            return Fraction(rn, rd)
    return math.sqrt(float(g))


# ---------------------------------------------------------------------------
# halfspaces and frames


@dataclass(frozen=True)
class Halfspace:
    """The set ``{x : normal . x <= offset}``."""

    normal: Vector
    offset: Scalar

    def __post_init__(self):
        if all(x == 0 for x in self.normal):
            raise ValueError("halfspace normal must be nonzero")

    def value(self, x):
        return dot(self.normal, x) - self.offset

    def contains(self, x) -> bool:
        return self.value(x) <= 0

    def opposite(self) -> "Halfspace":
        return Halfspace(vneg(self.normal), -self.offset)


@dataclass(frozen=True)
class Frame:
    """Orthonormal basis of an i-dimensional subspace."""

    basis: tuple

    def __post_init__(self):
        tol = DEFAULT_TOLERANCE
        for a, u in enumerate(self.basis):
            for b, v in enumerate(self.basis):
                if not tol.close(dot(u, v), 1 if a == b else 0):
                    raise ValueError("frame basis is not orthonormal")

    @property
    def rank(self) -> int:
        return len(self.basis)

    @property
    def ambient(self) -> int:
        return len(self.basis[0])


def rational_rotation(quaternion: Sequence[int]) -> tuple:
    """Rational rotation of R^3 from an integer quaternion (Euler-Rodrigues)."""
    a, b, c, d = quaternion
    s = a * a + b * b + c * c + d * d
    if s == 0:
        raise ValueError("zero quaternion")
    m = [[a*a + b*b - c*c - d*d, 2*(b*c - a*d), 2*(b*d + a*c)],
         [2*(b*c + a*d), a*a - b*b + c*c - d*d, 2*(c*d - a*b)],
         [2*(b*d - a*c), 2*(c*d + a*b), a*a - b*b - c*c + d*d]]
    return tuple(tuple(Fraction(x, s) for x in row) for row in m)


def rational_rotation_2d(p: int, q: int) -> tuple:
    """Rotation whose cosine and sine are built from the Pythagorean pair (p, q)."""
    s = p * p + q * q
    c, si = Fraction(p * p - q * q, s), Fraction(2 * p * q, s)
    return ((c, -si), (si, c))


HADAMARD4 = tuple(tuple(Fraction(x, 2) for x in row) for row in
                  ((1, 1, 1, 1), (1, -1, 1, -1), (1, 1, -1, -1), (1, -1, -1, 1)))


def rational_orthogonal_matrices(n: int) -> list[tuple]:
    """A fixed list of rational orthogonal matrices (identity first)."""
    ident = tuple(tuple(Fraction(int(r == c)) for c in range(n)) for r in range(n))
    out = [ident]
    if n == 2:
        out += [rational_rotation_2d(p, q) for p, q in ((2, 1), (3, 2), (4, 1), (5, 2))]
    elif n == 3:
        out += [rational_rotation(qt) for qt in ((1, 1, 0, 0), (2, 1, 1, 0), (3, 1, 2, 1), (1, 2, 3, 4))]
    elif n == 4:
        out.append(HADAMARD4)
        perm = tuple(tuple(Fraction(int(c == (r + 1) % 4)) for c in range(4)) for r in range(4))
        out.append(matmul(HADAMARD4, perm))
    return out


def matmul(a, b) -> tuple:
    return tuple(tuple(sum(a[i][k] * b[k][j] for k in range(len(b)))
                       for j in range(len(b[0]))) for i in range(len(a)))


def matvec(a, x) -> Vector:
    return tuple(dot(row, x) for row in a)


def transpose(a) -> tuple:
    return tuple(zip(*a))


def rational_frames(n: int, i: int) -> list[Frame]:
    """Axis-aligned and rotated rational orthonormal i-frames in R^n."""
    frames = []
    seen = set()
    for q in rational_orthogonal_matrices(n):
        cols = transpose(q)
        for combo in combinations(range(n), i):
            basis = tuple(tuple(cols[c]) for c in combo)
            if basis not in seen:
                seen.add(basis)
                frames.append(Frame(basis))
    return frames


# ---------------------------------------------------------------------------
# convex hulls


@dataclass(frozen=True)
class Facet:
    normal: tuple  # primitive integer outer normal
    offset: Fraction  # normal . x on the facet (original coordinates)
    vertices: tuple  # indices of extreme points on the facet
    area_vector: tuple  # outer normal scaled to the facet's (n-1)-volume


@dataclass(frozen=True)
class HullResult:
    dim: int  # affine dimension of the input
    vertices: tuple  # indices into the input; CCW order in the plane
    facets: tuple  # only populated when dim equals the ambient dimension
    volume: Fraction  # ambient volume (0 when lower dimensional)


def _orient_hyperplane(pts, verts, interior, scale):
    p0 = pts[verts[0]]
    w = gen_cross([vsub(pts[v], p0) for v in verts[1:]])
    b = dot(w, p0)
    if dot(w, interior) > scale * b:
        w = vneg(w)
        b = -b
    return w, b


def _hull2_int(pts: list, idx: list[int]):
    order = sorted(idx, key=lambda i: pts[i])
    if len(order) < 3:
        return order

    def turn(o, a, b):
        return (a[0] - o[0]) * (b[1] - o[1]) - (a[1] - o[1]) * (b[0] - o[0])

    lower, upper = [], []
    for i in order:
        while len(lower) >= 2 and turn(pts[lower[-2]], pts[lower[-1]], pts[i]) <= 0:
            lower.pop()
        lower.append(i)
    for i in reversed(order):
        while len(upper) >= 2 and turn(pts[upper[-2]], pts[upper[-1]], pts[i]) <= 0:
            upper.pop()
        upper.append(i)
    return lower[:-1] + upper[:-1]


def _initial_simplex(pts: list, idx: list[int]) -> list[int]:
    chosen = [idx[0]]
    basis_rows: list[list] = []
    p0 = pts[idx[0]]
    for i in idx[1:]:
        r = [Fraction(x) for x in vsub(pts[i], p0)]
        trial = basis_rows + [r]
        if len(_row_echelon_pivots(trial)) == len(trial):
            basis_rows.append(r)
            chosen.append(i)
            if len(chosen) == len(p0) + 1:
                break
    return chosen


def _beneath_beyond(pts: list, idx: list[int]):
    """Incremental hull of full-dimensional integer points (d >= 3).

    Returns a list of simplicial facets ``(verts, w, b)`` with outward ``w``
    and ``w . x <= b`` on the hull. Coplanar facets may occur; callers merge
    them by hyperplane.
    """
    d = len(pts[idx[0]])
    base = _initial_simplex(pts, idx)
    interior = tuple(sum(pts[v][c] for v in base) for c in range(d))
    scale = d + 1
    facets: dict[int, tuple] = {}
    ridges: dict[tuple, list[int]] = {}
    outside: dict[int, list[int]] = {}
    counter = [0]

    def add_facet(verts):
        verts = tuple(sorted(verts))
        w, b = _orient_hyperplane(pts, verts, interior, scale)
        fid = counter[0]
        counter[0] += 1
        facets[fid] = (verts, w, b)
        for r in combinations(verts, d - 1):
            ridges.setdefault(r, []).append(fid)
        return fid

    def drop_facet(fid):
        verts = facets.pop(fid)[0]
        for r in combinations(verts, d - 1):
            lst = ridges[r]
            lst.remove(fid)
            if not lst:
                del ridges[r]
        outside.pop(fid, None)

    new_ids = [add_facet(c) for c in combinations(base, d)]
    in_base = set(base)
    rest = [i for i in idx if i not in in_base]
    _assign(rest, new_ids, facets, outside, pts)

    while outside:
        fid = next(iter(outside))
        cand = outside[fid]
        w0, b0 = facets[fid][1], facets[fid][2]
        p = max(cand, key=lambda i: dot(w0, pts[i]) - b0)
        pp = pts[p]
        visible = {fid}
        stack = [fid]
        horizon = []
        while stack:
            g = stack.pop()
            for r in combinations(facets[g][0], d - 1):
                for h in ridges[r]:
                    if h == g or h in visible:
                        continue
                    _, wh, bh = facets[h]
                    if dot(wh, pp) > bh:
                        visible.add(h)
                        stack.append(h)
                    else:
                        horizon.append(r)
        pool = []
        for g in visible:
            pool.extend(i for i in outside.get(g, ()) if i != p)
        for g in visible:
            drop_facet(g)
        created = [add_facet(r + (p,)) for r in set(horizon)]
        _assign(pool, created, facets, outside, pts)
    return list(facets.values())


def _assign(points, facet_ids, facets, outside, pts):
    for i in points:
        pt = pts[i]
        for f in facet_ids:
            _, w, b = facets[f]
            if dot(w, pt) > b:
                outside.setdefault(f, []).append(i)
                break


def _primitive(w, b):
    g = reduce(math.gcd, (abs(x) for x in w))
    return tuple(x // g for x in w), b // g


def _full_hull(pts: list, idx: list[int]):
    """Hull of full-dimensional integer points.

    Returns (vertex indices, facets as (normal, offset, verts, area_vec),
    d! * volume) in integer coordinates.
    """
    d = len(pts[idx[0]])
    if d == 1:
        lo = min(idx, key=lambda i: pts[i][0])
        hi = max(idx, key=lambda i: pts[i][0])
        facets = [((-1,), -pts[lo][0], (lo,), (-1,)), ((1,), pts[hi][0], (hi,), (1,))]
        return [lo, hi], facets, pts[hi][0] - pts[lo][0]
    if d == 2:
        ring = _hull2_int(pts, idx)
        facets = []
        twice_area = 0
        for k, a in enumerate(ring):
            b = ring[(k + 1) % len(ring)]
            pa, pb = pts[a], pts[b]
            twice_area += pa[0] * pb[1] - pa[1] * pb[0]
            av = (pb[1] - pa[1], pa[0] - pb[0])
            nrm, off = _primitive(av, dot(av, pa))
            facets.append((nrm, off, (a, b), av))
        return ring, facets, twice_area
    simplices = _beneath_beyond(pts, idx)
    apex = pts[simplices[0][0][0]]
    groups: dict[tuple, list] = {}
    volume = 0
    for verts, w, b in simplices:
        volume += b - dot(w, apex)
        groups.setdefault(_primitive(w, b), []).append((verts, w))
    facets = []
    vertex_set = set()
    fact = math.factorial(d - 1)
    for (nrm, off), members in groups.items():
        on = sorted({v for verts, _ in members for v in verts})
        drop = max(range(d), key=lambda c: abs(nrm[c]))
        sub = {i: tuple(x for c, x in enumerate(pts[i]) if c != drop) for i in on}
        sub_pts = dict(sub)
        local = _full_hull_dict(sub_pts, on)
        vertex_set.update(local)
        area = tuple(sum(w[c] for _, w in members) for c in range(d))
        facets.append((nrm, off, tuple(sorted(local)), tuple(Fraction(a, fact) for a in area)))
    facets.sort()
    return sorted(vertex_set), facets, volume


def _full_hull_dict(sub_pts: dict, on: list[int]) -> list[int]:
    """Extreme points among ``on`` (full-dimensional in their coordinates)."""
    maxi = max(on) + 1
    arr: list = [None] * maxi
    for i in on:
        arr[i] = sub_pts[i]
    verts, _, _ = _full_hull(arr, on)
    return verts


def _affine_frame(pts: list, idx: list[int]):
    """Affine dimension and a coordinate subset on which projection is injective."""
    base = _initial_simplex(pts, idx)
    k = len(base) - 1
    n = len(pts[idx[0]])
    if k == n or k == 0:
        return k, tuple(range(n))
    dirs = [vsub(pts[v], pts[base[0]]) for v in base[1:]]
    for cols in combinations(range(n), k):
        if det([[v[c] for c in cols] for v in dirs]) != 0:
            return k, cols
    raise AssertionError("no injective coordinate projection found")


def convex_hull_indices(points: Sequence[Sequence]) -> HullResult:
    """Exact hull of a finite point set given as rational or float tuples."""
    if not points:
        raise ValueError("convex hull of an empty point set")
    n = len(points[0])
    if any(len(p) != n for p in points):
        raise ValueError("dimension mismatch among hull input points")
    ints, scale = integerize(points)
    first: dict[tuple, int] = {}
    for i, p in enumerate(ints):
        first.setdefault(p, i)
    idx = sorted(first.values())
    if len(idx) == 1:
        return HullResult(0, (idx[0],), (), Fraction(0))
    k, cols = _affine_frame(ints, idx)
    if k < n:
        proj = [tuple(p[c] for c in cols) for p in ints]
        verts, _, _ = _full_hull(proj, idx) if k > 0 else ([idx[0]], None, 0)
        return HullResult(k, tuple(verts), (), Fraction(0))
    verts, raw, dvol = _full_hull(ints, idx)
    facets = tuple(
        Facet(nrm, Fraction(off, scale), vs, tuple(Fraction(a) / scale ** (n - 1) for a in av))
        for nrm, off, vs, av in raw)
    volume = Fraction(dvol, math.factorial(n) * scale ** n)
    return HullResult(n, tuple(verts), facets, volume)


# ---------------------------------------------------------------------------
# direction sets on the sphere

_GOLDEN = math.pi * (3.0 - math.sqrt(5.0))


def _float_halfset(n: int, half: int) -> list[tuple[float, ...]]:
    if n == 2:
        return [(math.cos(math.pi * j / half), math.sin(math.pi * j / half)) for j in range(half)]
    if n == 3:
        out = []
        for k in range(half):
            z = (k + 0.5) / half
            r = math.sqrt(max(0.0, 1.0 - z * z))
            phi = k * _GOLDEN
            out.append((r * math.cos(phi), r * math.sin(phi), z))
        return out
    out = []
    for k in range(half):
        u = (_radical_inverse(k + 1, 2), _radical_inverse(k + 1, 3), _radical_inverse(k + 1, 5))
        a, b = math.sqrt(1.0 - u[0]), math.sqrt(u[0])
        out.append((a * math.sin(2 * math.pi * u[1]), a * math.cos(2 * math.pi * u[1]),
                    b * math.sin(2 * math.pi * u[2]), b * math.cos(2 * math.pi * u[2])))
    return out


def _radical_inverse(k: int, base: int) -> float:
    inv, f = 0.0, 1.0 / base
    while k:
        inv += f * (k % base)
        k //= base
        f /= base
    return inv


def _circle_lattice(primes=(5, 13, 17, 29, 37, 41)) -> tuple[int, list[tuple[int, int]]]:
    """Integer points on the circle of radius prod(primes), all p = 1 mod 4."""
    gauss = []
    for p in primes:
        a = next(a for a in range(1, p) if math.isqrt(p - a * a) ** 2 == p - a * a)
        gauss.append((a, math.isqrt(p - a * a)))
    pts = {(1, 0)}
    for a, b in gauss:
        choices = [(a * a - b * b, 2 * a * b), (a * a + b * b, 0), (a * a - b * b, -2 * a * b)]
        pts = {(x * c - y * s, x * s + y * c) for x, y in pts for c, s in choices}
    out = set()
    for x, y in pts:
        for ux, uy in ((1, 0), (0, 1), (-1, 0), (0, -1)):
            out.add((x * ux - y * uy, x * uy + y * ux))
    return math.prod(primes), sorted(out)


def _sphere_lattice(n: int, radius: int) -> list[tuple[int, ...]]:
    r2 = radius * radius
    base = set()
    if n == 3:
        for x in range(0, radius + 1):
            for y in range(x, radius + 1):
                zz = r2 - x * x - y * y
                if zz < y * y:
                    break
                z = math.isqrt(zz)
                if z * z == zz:
                    base.add((x, y, z))
    else:
        for x in range(0, radius + 1):
            for y in range(x, radius + 1):
                for z in range(y, radius + 1):
                    ww = r2 - x * x - y * y - z * z
                    if ww < z * z:
                        break
                    w = math.isqrt(ww)
                    if w * w == ww:
                        base.add((x, y, z, w))
    from itertools import permutations, product
    out = set()
    for p in base:
        for perm in set(permutations(p)):
            for signs in product((1, -1), repeat=n):
                out.add(tuple(s * c for s, c in zip(signs, perm)))
    return sorted(out)


_LATTICE_CACHE: dict = {}


def _lattice(n: int):
    if n not in _LATTICE_CACHE:
        if n == 2:
            _LATTICE_CACHE[n] = _circle_lattice()
        elif n == 3:
            _LATTICE_CACHE[n] = (1105, _sphere_lattice(3, 1105))
        else:
            _LATTICE_CACHE[n] = (25, _sphere_lattice(4, 25))
    return _LATTICE_CACHE[n]


def _snap_halfset(n: int, targets: list[tuple[float, ...]]) -> list[tuple[Fraction, ...]]:
    import numpy as np

    radius, lattice = _lattice(n)
    arr = np.array(lattice, dtype=float) / radius
    used: set[tuple] = set()
    out = []
    for t in targets:
        scores = arr @ np.array(t)
        for j in np.argsort(-scores, kind="stable"):
            p = lattice[int(j)]
            if p not in used:
                used.add(p)
                used.add(tuple(-c for c in p))
                out.append(tuple(Fraction(c, radius) for c in p))
                break
    return out


def direction_set(n: int, count: int, exact: bool = False) -> list[Vector]:
    """Deterministic antipodally symmetric quasi-uniform unit vectors.

    The first ``count // 2`` entries form a half-set; the rest are their
    negatives in the same order. ``count == 2n`` gives the signed axes.
    With ``exact=True`` every vector is a rational point of the sphere
    (an integer lattice point on a sphere of fixed radius, rescaled).
    """
    if not MIN_DIM <= n <= MAX_DIM:
        raise ValueError(f"dimension {n} outside supported range")
    if count < 2 * n or count % 2:
        raise ValueError(f"direction count {count} must be even and at least {2 * n}")
    half = count // 2
    if count == 2 * n:
        one = Fraction(1) if exact else 1.0
        zero = Fraction(0) if exact else 0.0
        hs = [tuple(one if c == k else zero for c in range(n)) for k in range(n)]
    else:
        targets = _float_halfset(n, half)
        if exact:
            hs = _snap_halfset(n, targets)
        else:
            hs = [tuple(0.0 if abs(c) < 1e-15 else c for c in t) for t in targets]
    return hs + [vneg(u) for u in hs]


# ---------------------------------------------------------------------------
# oblique projections along segment spans


@dataclass(frozen=True)
class Projector:
    """Linear projection along ``span(S)`` onto the coordinate plane ``cols``.

    ``weight * vol_d(pi(Q)) == [S] * vol_d(Q | S^perp)`` for every body Q,
    so weighted projected volumes stay rational for rational data.
    """

    cols: tuple
    matrix: tuple  # d x n
    weight: Scalar

    def __call__(self, x) -> Vector:
        return tuple(dot(row, x) for row in self.matrix)

    def pullback(self, y) -> Vector:
        """Transpose map: h(pi(M), y) == h(M, pullback(y))."""
        n = len(self.matrix[0]) if self.matrix else 0
        return tuple(sum(y[r] * self.matrix[r][c] for r in range(len(y))) for c in range(n))


def oblique_projector(segments: Sequence[Sequence], n: int) -> Projector | None:
    """Projector for linearly independent segments; ``None`` if dependent."""
    k = len(segments)
    if k == 0:
        ident = tuple(tuple(int(r == c) for c in range(n)) for r in range(n))
        return Projector(tuple(range(n)), ident, 1)
    best = None
    for rows in combinations(range(n), k):
        m = [[s[i] for s in segments] for i in rows]
        dm = det(m)
        if dm != 0:
            best = (rows, m, dm)
            break
    if best is None:
        return None
    rows, m, dm = best
    cols = tuple(c for c in range(n) if c not in rows)
    inv = solve_linear(m, [[int(a == b) for b in range(k)] for a in range(k)])
    matrix = []
    for j in cols:
        line = [0] * n
        line[j] = 1
        for a, i in enumerate(rows):
            line[i] = -sum(segments[t][j] * inv[t][a] for t in range(k))
        matrix.append(tuple(line))
    return Projector(cols, tuple(matrix), abs(dm))
