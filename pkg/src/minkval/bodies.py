"""Convex bodies: polytopes, zonotopes, lazy Minkowski sums and support-only bodies.

All bodies are immutable. Support functions, Minkowski arithmetic and
volumes are exact for rational data.
"""
from __future__ import annotations

import json
import math
import random
from dataclasses import dataclass, field
from fractions import Fraction
from functools import cached_property, lru_cache
from itertools import combinations, product
from typing import Callable, Optional, Sequence

import numpy as np

from .kernel import (
    Halfspace,
    HullResult,
    convex_hull_indices,
    det,
    direction_set,
    dot,
    format_scalar,
    gen_cross,
    integerize,
    is_exact,
    oblique_projector,
    parse_scalar,
    vadd,
    vneg,
    vscale,
    vsub,
)

# zonotope vertex sets are only materialized up to this many generators
MAX_EXPANDED_GENERATORS = 16


class BodyError(ValueError):
    """Invalid body input or an operation undefined on the given body."""


class _Empty:
    _instance = None

    def __new__(cls):
        if cls._instance is None:
            cls._instance = super().__new__(cls)
        return cls._instance

    def __repr__(self):
        return "EMPTY"


EMPTY = _Empty()


# ---------------------------------------------------------------------------
# body types


@dataclass(frozen=True)
class Polytope:
    """Convex hull of a finite vertex list; every vertex is extreme."""

    vertices: tuple

    @property
    def dim(self) -> int:
        return len(self.vertices[0])

    @cached_property
    def hull(self) -> HullResult:
        return convex_hull_indices(self.vertices)

    @cached_property
    def int_vertices(self):
        return integerize(self.vertices)

    def __repr__(self):
        return f"Polytope({len(self.vertices)} vertices in R^{self.dim})"


@dataclass(frozen=True)
class Zonotope:
    """``center + sum_g [-g, g]``."""

    center: tuple
    generators: tuple

    def __post_init__(self):
        gens = tuple(tuple(g) for g in self.generators if any(x != 0 for x in g))
        object.__setattr__(self, "generators", gens)
        object.__setattr__(self, "center", tuple(self.center))
        if any(len(g) != len(self.center) for g in gens):
            raise BodyError("zonotope generator dimension mismatch")

    @property
    def dim(self) -> int:
        return len(self.center)

    @cached_property
    def int_generators(self):
        if not self.generators:
            return [], 1
        return integerize(self.generators)

    def __repr__(self):
        return f"Zonotope({len(self.generators)} generators in R^{self.dim})"


@dataclass(frozen=True)
class MinkowskiSum:
    """Lazy ``polytope + zonotope``; used when the vertex set is too large to expand."""

    polytope: Polytope
    zonotope: Zonotope

    @property
    def dim(self) -> int:
        return self.polytope.dim

    def __repr__(self):
        return f"MinkowskiSum({self.polytope!r} + {self.zonotope!r})"


@dataclass(frozen=True, eq=False)
class SupportBody:
    """A convex body known only through its support function."""

    dim: int
    func: Callable
    batch: Optional[Callable] = None
    label: str = "support"

    def __call__(self, u):
        return self.func(tuple(u))

    def __repr__(self):
        return f"SupportBody({self.label}, R^{self.dim})"


Body = (Polytope, Zonotope, MinkowskiSum, SupportBody)


def dimension(K) -> int:
    if K is EMPTY:
        raise BodyError("empty body has no dimension")
    return K.dim


def point_body(x) -> Polytope:
    return Polytope((tuple(x),))


# ---------------------------------------------------------------------------
# polytope primitives


def convex_hull(points: Sequence[Sequence]) -> Polytope:
    """Polytope with the minimal vertex set of ``conv(points)``."""
    pts = [tuple(p) for p in points]
    h = convex_hull_indices(pts)
    return Polytope(tuple(pts[i] for i in h.vertices))


def polytope_volume(P: Polytope):
    """Ambient volume of ``P``; 0 for lower-dimensional polytopes."""
    if P is EMPTY:
        return Fraction(0)
    vol = P.hull.volume
    if any(isinstance(x, float) for v in P.vertices for x in v):
        return float(vol)
    return vol


def clip(P: Polytope, H: Halfspace):
    """``P`` intersected with the halfspace ``H``; ``EMPTY`` if disjoint."""
    vals = [H.value(v) for v in P.vertices]
    pts = [v for v, s in zip(P.vertices, vals) if s <= 0]
    for (a, sa), (b, sb) in combinations(zip(P.vertices, vals), 2):
        if (sa < 0 < sb) or (sb < 0 < sa):
            t = sa / (sa - sb)
            pts.append(tuple(x + t * (y - x) for x, y in zip(a, b)))
    if not pts:
        return EMPTY
    return convex_hull(pts)


# ---------------------------------------------------------------------------
# zonotope vertices


def _zonogon_vertices(Z: Zonotope) -> list[tuple]:
    gens = []
    for g in Z.generators:
        if g[1] < 0 or (g[1] == 0 and g[0] < 0):
            g = vneg(g)
        gens.append(g)
    # group parallel generators, order by angle in [0, pi)
    merged: list = []
    for g in sorted(gens, key=lambda g: math.atan2(float(g[1]), float(g[0]))):
        if merged and merged[-1][0] * g[1] - merged[-1][1] * g[0] == 0:
            merged[-1] = vadd(merged[-1], g)
        else:
            merged.append(g)
    # exact tie-break for the float-sorted order
    merged.sort(key=_AngleKey)
    v = tuple(Z.center)
    for g in merged:
        v = vsub(v, g)
    out = [v]
    for g in merged + [vneg(g) for g in merged]:
        v = vadd(v, vscale(2, g))
        out.append(v)
    return out[:-1]


class _AngleKey:
    __slots__ = ("g",)

    def __init__(self, g):
        self.g = g

    def __lt__(self, other):
        a, b = self.g, other.g
        return a[0] * b[1] - a[1] * b[0] > 0


def zonotope_vertices(Z: Zonotope) -> tuple:
    """Vertex set of a zonotope with at most ``MAX_EXPANDED_GENERATORS`` generators."""
    m = len(Z.generators)
    if m > MAX_EXPANDED_GENERATORS:
        raise BodyError(f"zonotope with {m} generators is not expanded to vertices")
    if m == 0:
        return (tuple(Z.center),)
    if Z.dim == 2:
        verts = _zonogon_vertices(Z)
        if len(verts) > 2:
            return tuple(verts)
        return convex_hull(verts).vertices
    pts = [tuple(Z.center)]
    for g in Z.generators:
        pts = [p for v in pts for p in (vadd(v, g), vsub(v, g))]
        pts = list(convex_hull(pts).vertices)
    return tuple(pts)


def vertices(K) -> tuple:
    if isinstance(K, Polytope):
        return K.vertices
    if isinstance(K, Zonotope):
        return zonotope_vertices(K)
    if isinstance(K, MinkowskiSum):
        return as_polytope(K).vertices
    raise BodyError(f"{K!r} has no vertex representation")


def as_polytope(K) -> Polytope:
    if isinstance(K, Polytope):
        return K
    if isinstance(K, Zonotope):
        return Polytope(zonotope_vertices(K))
    if isinstance(K, MinkowskiSum):
        return _sum_polytopes(K.polytope, Polytope(zonotope_vertices(K.zonotope)))
    raise BodyError(f"{K!r} cannot be converted to a polytope")


def _sum_polytopes(P: Polytope, Q: Polytope) -> Polytope:
    return convex_hull([vadd(a, b) for a in P.vertices for b in Q.vertices])


def is_materializable(K) -> bool:
    if isinstance(K, Polytope):
        return True
    if isinstance(K, Zonotope):
        return len(K.generators) <= MAX_EXPANDED_GENERATORS
    if isinstance(K, MinkowskiSum):
        return len(K.zonotope.generators) <= MAX_EXPANDED_GENERATORS
    return False


# ---------------------------------------------------------------------------
# support functions


def support(K, x):
    """``h(K, x) = max_{y in K} x . y``."""
    if K is EMPTY:
        raise BodyError("support function of the empty body")
    if isinstance(K, Polytope):
        return max(dot(x, v) for v in K.vertices)
    if isinstance(K, Zonotope):
        return dot(K.center, x) + sum(abs(dot(x, g)) for g in K.generators)
    if isinstance(K, MinkowskiSum):
        return support(K.polytope, x) + support(K.zonotope, x)
    if isinstance(K, SupportBody):
        return K(x)
    raise BodyError(f"not a body: {K!r}")


def support_batch(K, U: np.ndarray) -> np.ndarray:
    """Float support values for the rows of ``U``."""
    U = np.asarray(U, dtype=float)
    if isinstance(K, Polytope):
        V = np.array(K.vertices, dtype=float)
        return (U @ V.T).max(axis=1)
    if isinstance(K, Zonotope):
        out = U @ np.array(K.center, dtype=float)
        if K.generators:
            out = out + np.abs(U @ np.array(K.generators, dtype=float).T).sum(axis=1)
        return out
    if isinstance(K, MinkowskiSum):
        return support_batch(K.polytope, U) + support_batch(K.zonotope, U)
    if isinstance(K, SupportBody):
        if K.batch is not None:
            return np.asarray(K.batch(U), dtype=float)
        return np.array([float(K(tuple(u))) for u in U])
    raise BodyError(f"not a body: {K!r}")


# ---------------------------------------------------------------------------
# Minkowski arithmetic


def _check_same_dim(K, L):
    if dimension(K) != dimension(L):
        raise BodyError(f"dimension mismatch: {dimension(K)} vs {dimension(L)}")


def minkowski_sum(K, L):
    """``K + L``.

    Zonotope sums concatenate generators. Sums involving a polytope are
    hulled from pairwise vertex sums while the zonotope part stays within
    ``MAX_EXPANDED_GENERATORS``; larger ones are kept as a lazy ``MinkowskiSum``.
    Support-only bodies combine through their support functions.
    """
    if K is EMPTY or L is EMPTY:
        raise BodyError("Minkowski sum with the empty body")
    _check_same_dim(K, L)
    if isinstance(K, SupportBody) or isinstance(L, SupportBody):
        return SupportBody(
            K.dim,
            lambda u: support(K, u) + support(L, u),
            lambda U: support_batch(K, U) + support_batch(L, U),
            f"({_label(K)}+{_label(L)})",
        )
    if isinstance(K, Zonotope) and isinstance(L, Zonotope):
        return Zonotope(vadd(K.center, L.center), K.generators + L.generators)
    P, Z = _split(K)
    Q, W = _split(L)
    poly = _combine_polys(P, Q)
    zono = _combine_zonos(Z, W, K.dim)
    if poly is None:
        return zono
    if zono is None or not zono.generators:
        if zono is not None:
            poly = translate(poly, zono.center)
        return poly
    if len(zono.generators) <= MAX_EXPANDED_GENERATORS:
        return _sum_polytopes(poly, Polytope(zonotope_vertices(zono)))
    return MinkowskiSum(poly, zono)


def lazy_sum(K, Z: Zonotope):
    """``K + Z`` without materializing vertices: a ``MinkowskiSum`` for polytope parts."""
    _check_same_dim(K, Z)
    if isinstance(K, Zonotope):
        return Zonotope(vadd(K.center, Z.center), K.generators + Z.generators)
    if isinstance(K, Polytope):
        if not Z.generators:
            return translate(K, Z.center)
        return MinkowskiSum(K, Z)
    if isinstance(K, MinkowskiSum):
        W = K.zonotope
        return MinkowskiSum(K.polytope, Zonotope(vadd(W.center, Z.center), W.generators + Z.generators))
    return minkowski_sum(K, Z)


def _label(K) -> str:
    return K.label if isinstance(K, SupportBody) else type(K).__name__


def _split(K):
    if isinstance(K, Polytope):
        return K, None
    if isinstance(K, Zonotope):
        return None, K
    if isinstance(K, MinkowskiSum):
        return K.polytope, K.zonotope
    raise BodyError(f"cannot split {K!r}")


def _combine_polys(P, Q):
    if P is None:
        return Q
    if Q is None:
        return P
    return _sum_polytopes(P, Q)


def _combine_zonos(Z, W, n):
    if Z is None:
        return W
    if W is None:
        return Z
    return Zonotope(vadd(Z.center, W.center), Z.generators + W.generators)


def scale(K, lam):
    """Dilate ``K`` by ``lam >= 0`` about the origin."""
    if lam < 0:
        raise BodyError("negative dilation factor")
    if isinstance(K, Polytope):
        if lam == 0:
            return point_body(tuple(0 * x for x in K.vertices[0]))
        return Polytope(tuple(vscale(lam, v) for v in K.vertices))
    if isinstance(K, Zonotope):
        return Zonotope(vscale(lam, K.center), tuple(vscale(lam, g) for g in K.generators))
    if isinstance(K, MinkowskiSum):
        if lam == 0:
            return point_body(tuple(0 * x for x in K.polytope.vertices[0]))
        return MinkowskiSum(scale(K.polytope, lam), scale(K.zonotope, lam))
    if isinstance(K, SupportBody):
        return SupportBody(K.dim, lambda u: lam * K(u),
                           lambda U: float(lam) * support_batch(K, U), f"{lam}*{K.label}")
    raise BodyError(f"not a body: {K!r}")


def translate(K, x):
    x = tuple(x)
    if isinstance(K, Polytope):
        return Polytope(tuple(vadd(v, x) for v in K.vertices))
    if isinstance(K, Zonotope):
        return Zonotope(vadd(K.center, x), K.generators)
    if isinstance(K, MinkowskiSum):
        return MinkowskiSum(translate(K.polytope, x), K.zonotope)
    if isinstance(K, SupportBody):
        return SupportBody(K.dim, lambda u: K(u) + dot(u, x),
                           lambda U: support_batch(K, U) + np.asarray(U, float) @ np.array(x, float),
                           K.label)
    raise BodyError(f"not a body: {K!r}")


def linear_image(K, A):
    """``A K`` for a square matrix ``A`` (rows)."""
    def apply(v):
        return tuple(dot(row, v) for row in A)

    if isinstance(K, Polytope):
        return Polytope(tuple(apply(v) for v in K.vertices))
    if isinstance(K, Zonotope):
        return Zonotope(apply(K.center), tuple(apply(g) for g in K.generators))
    if isinstance(K, MinkowskiSum):
        return MinkowskiSum(linear_image(K.polytope, A), linear_image(K.zonotope, A))
    if isinstance(K, SupportBody):
        At = tuple(zip(*A))
        return SupportBody(K.dim, lambda u: K(tuple(dot(r, u) for r in At)), None, K.label)
    raise BodyError(f"not a body: {K!r}")


def reflect(K):
    """``-K``."""
    n = dimension(K)
    return linear_image(K, tuple(tuple(-int(r == c) for c in range(n)) for r in range(n)))


# ---------------------------------------------------------------------------
# volumes


def zonotope_volume(Z: Zonotope):
    """``2^n * sum over n-subsets of generators of |det|``."""
    n = Z.dim
    gens, d = Z.int_generators
    m = len(gens)
    if m < n:
        return Fraction(0)
    total = _sum_abs_dets(gens, n)
    return Fraction(2 ** n * total, d ** n)


def _sum_abs_dets(gens: list, n: int) -> int:
    m = len(gens)
    big = max((abs(x) for g in gens for x in g), default=0)
    if math.comb(m, n) > 64:
        # object arrays keep Python ints when int64 could overflow
        G = np.array(gens, dtype=np.int64 if big ** n * math.factorial(n) < 2 ** 62 else object)
        total = 0
        idx = np.array(list(combinations(range(m), n)), dtype=np.int64)
        for start in range(0, len(idx), 200000):
            chunk = idx[start:start + 200000]
            mats = G[chunk]
            total += int(np.abs(_int_det(mats, n)).sum())
        return total
    return sum(abs(det([gens[i] for i in c])) for c in combinations(range(m), n))


def _int_det(mats: np.ndarray, n: int) -> np.ndarray:
    if n == 2:
        return mats[:, 0, 0] * mats[:, 1, 1] - mats[:, 0, 1] * mats[:, 1, 0]
    if n == 3:
        a, b, c = mats[:, 0], mats[:, 1], mats[:, 2]
        return (a[:, 0] * (b[:, 1] * c[:, 2] - b[:, 2] * c[:, 1])
                - a[:, 1] * (b[:, 0] * c[:, 2] - b[:, 2] * c[:, 0])
                + a[:, 2] * (b[:, 0] * c[:, 1] - b[:, 1] * c[:, 0]))
    out = np.zeros(len(mats), dtype=mats.dtype)
    for col in range(n):
        minor = np.delete(mats[:, 1:, :], col, axis=2)
        sign = 1 if col % 2 == 0 else -1
        out += sign * mats[:, 0, col] * _int_det(minor, n - 1)
    return out


def projected_volume(points: Sequence[Sequence], segments: Sequence[Sequence], n: int):
    """``[S] * vol_{n-k}(conv(points) | span(S)^perp)``, exact for rational data."""
    d = n - len(segments)
    if d == 1:
        # [S] * width of the points along the unit normal of span(S)
        w = gen_cross(segments)
        vals = [dot(w, p) for p in points]
        return max(vals) - min(vals)
    proj = oblique_projector(segments, n)
    if proj is None:
        return Fraction(0)
    if d == 0:
        return proj.weight
    pts = [proj(p) for p in points]
    return proj.weight * convex_hull_indices(pts).volume


def body_volume(K):
    """Ambient volume of any materializable or lazily summed body."""
    if isinstance(K, Polytope):
        return polytope_volume(K)
    if isinstance(K, Zonotope):
        return zonotope_volume(K)
    if isinstance(K, MinkowskiSum):
        return _sum_volume(K.polytope, K.zonotope)
    raise BodyError(f"volume of {K!r} is not available")


def _sum_volume(P: Polytope, Z: Zonotope):
    # vol(P + sum [0, 2g]) = sum over independent subsets S of [2S] vol(P | S^perp)
    n = P.dim
    segs = [vscale(2, g) for g in Z.generators]
    total = polytope_volume(P)
    for k in range(1, n):
        for S in combinations(segs, k):
            total += projected_volume(P.vertices, S, n)
    return total + zonotope_volume(Z)


# ---------------------------------------------------------------------------
# ball approximations


def kappa(m: int) -> float:
    """Volume of the m-dimensional unit ball."""
    return math.pi ** (m / 2) / math.gamma(m / 2 + 1)


def ball_constant(n: int) -> float:
    """``E|x.u|`` for uniform unit u and unit x: ``2 kappa_{n-1} / (n kappa_n)``."""
    return 2 * kappa(n - 1) / (n * kappa(n))


@lru_cache(maxsize=None)
def _ball(n: int, count: int, exact: bool):
    dirs = direction_set(n, count, exact)
    half = dirs[: count // 2]
    if exact:
        ints, q = integerize(half)
        raw = 0
        for u in ints:
            raw += sum(abs(dot(u, v)) for v in ints)
        # average over the full set equals the average over the half-set
        avg = Fraction(raw, q * q * len(half))
        c = 1 / avg
    else:
        H = np.array(half)
        avg = float(np.abs(H @ H.T).sum()) / len(half)
        c = 1.0 / avg
    analytic = 2.0 / (count * ball_constant(n))
    correction = float(c) / analytic
    if not 0.5 < correction < 2.0:
        raise AssertionError(f"ball normalization drifted: correction {correction}")
    zero = Fraction(0) if exact else 0.0
    Z = Zonotope(tuple(zero for _ in range(n)), tuple(vscale(c, u) for u in half))
    return Z, {"n": n, "ballN": count, "exact": exact, "scale": c,
               "analytic_scale": analytic, "correction": correction}


def ball_zonotope(n: int, count: int, exact: bool = True) -> Zonotope:
    """Zonotope approximating the unit ball from ``direction_set(n, count)``.

    The generator scale makes the mean of ``h(B_N, u)`` over the direction
    set exactly 1.
    """
    return _ball(n, count, exact)[0]


def ball_normalization(n: int, count: int, exact: bool = True) -> dict:
    return dict(_ball(n, count, exact)[1])


# ---------------------------------------------------------------------------
# generating measures


@dataclass(frozen=True)
class Atom:
    """Point mass at ``vector/|vector|`` with weight ``factor * |vector|``."""

    vector: tuple
    factor: Fraction

    @property
    def direction(self) -> tuple:
        r = math.sqrt(float(dot(self.vector, self.vector)))
        return tuple(float(x) / r for x in self.vector)

    @property
    def weight(self) -> float:
        return float(self.factor) * math.sqrt(float(dot(self.vector, self.vector)))


@dataclass(frozen=True)
class GeneratingMeasure:
    atoms: tuple
    calibration: Fraction

    def support(self, x):
        """Support function of the (centered) zonotope the measure generates."""
        return sum(a.factor * abs(dot(x, a.vector)) for a in self.atoms) / self.calibration

    def is_even(self) -> bool:
        mass: dict = {}
        for a in self.atoms:
            mass[a.vector] = mass.get(a.vector, 0) + a.factor
        return all(mass[v] == mass.get(vneg(v), None) for v in mass)


def _natural_atoms(Z: Zonotope) -> list[Atom]:
    # h(Z, x) = sum_g |x.g| = integral |x.u| d mu with mass |g|/2 at each of +-g/|g|
    half = Fraction(1, 2)
    out = []
    for g in Z.generators:
        out.append(Atom(tuple(g), half))
        out.append(Atom(vneg(g), half))
    return out


@lru_cache(maxsize=None)
def measure_calibration(n: int) -> Fraction:
    """Per-slot factor c making the Klain sum with kf = 1 return vol_n on [-1,1]^n.

    The literal reading ``h = integral |x.u| d mu`` undercounts by ``c`` in
    each integration slot; ``c`` is recovered by brute force over ordered
    atom tuples and returned exactly.
    """
    one = Fraction(1)
    cube = Zonotope(tuple(Fraction(0) for _ in range(n)),
                    tuple(tuple(one if r == c else 0 * one for c in range(n)) for r in range(n)))
    atoms = _natural_atoms(cube)
    raw = Fraction(0)
    for tup in product(atoms, repeat=n):
        w = abs(det([a.vector for a in tup]))
        if w:
            f = Fraction(1)
            for a in tup:
                f *= a.factor
            raw += w * f
    raw /= math.factorial(n)
    target = zonotope_volume(cube)
    ratio = target / raw
    num = round(float(ratio) ** (1.0 / n) * 2 ** 20)
    c = Fraction(num, 2 ** 20).limit_denominator(1000)
    if c ** n != ratio:
        raise AssertionError(f"calibration ratio {ratio} is not an exact n-th power")
    return c


def generating_measure(Z: Zonotope) -> GeneratingMeasure:
    """Calibrated generating measure: atoms at ``+-g/|g|`` with weight ``(c/2)|g|``."""
    c = measure_calibration(Z.dim)
    atoms = tuple(Atom(a.vector, a.factor * c) for a in _natural_atoms(Z))
    return GeneratingMeasure(atoms, c)


# ---------------------------------------------------------------------------
# random bodies

DENOMINATOR = 64


def _rand_coord(rng: random.Random, lo: int, hi: int) -> Fraction:
    return Fraction(rng.randint(lo, hi), DENOMINATOR)


def random_polytope(rng: random.Random, n: int, npoints: int | None = None) -> Polytope:
    """Hull of seeded rational points in ``[0,1]^n``; retried until full-dimensional."""
    while True:
        k = npoints if npoints is not None else rng.randint(n + 1, 12)
        pts = [tuple(_rand_coord(rng, 0, DENOMINATOR) for _ in range(n)) for _ in range(k)]
        P = convex_hull(pts)
        if P.hull.dim == n:
            return P


def random_zonotope(rng: random.Random, n: int, ngens: int | None = None) -> Zonotope:
    """Seeded rational zonotope with 3-8 generators; retried until full-dimensional."""
    while True:
        m = ngens if ngens is not None else rng.randint(max(3, n), 8)
        gens = [tuple(_rand_coord(rng, -32, 32) for _ in range(n)) for _ in range(m)]
        center = tuple(_rand_coord(rng, -32, 32) for _ in range(n))
        Z = Zonotope(center, tuple(gens))
        if len(Z.generators) >= n and zonotope_volume(Z) > 0:
            return Z


# ---------------------------------------------------------------------------
# JSON body format


def body_to_json(K) -> dict:
    if isinstance(K, Polytope):
        return {"type": "polytope",
                "vertices": [[format_scalar(x) for x in v] for v in K.vertices]}
    if isinstance(K, Zonotope):
        return {"type": "zonotope",
                "center": [format_scalar(x) for x in K.center],
                "generators": [[format_scalar(x) for x in g] for g in K.generators]}
    if isinstance(K, MinkowskiSum):
        return {"type": "sum", "parts": [body_to_json(K.polytope), body_to_json(K.zonotope)]}
    raise BodyError(f"{K!r} has no JSON form")


def _parse_point(obj, where: str, n: int | None = None) -> tuple:
    if not isinstance(obj, list) or not obj:
        raise BodyError(f"{where}: expected a non-empty list of rationals")
    try:
        pt = tuple(parse_scalar(x) for x in obj)
    except ValueError as exc:
        raise BodyError(f"{where}: {exc}") from exc
    if n is not None and len(pt) != n:
        raise BodyError(f"{where}: expected {n} coordinates, got {len(pt)}")
    return pt


def body_from_json(obj) -> object:
    if not isinstance(obj, dict):
        raise BodyError("body: expected a JSON object")
    kind = obj.get("type")
    if kind == "polytope":
        verts = obj.get("vertices")
        if not isinstance(verts, list) or not verts:
            raise BodyError("vertices: expected a non-empty list")
        first = _parse_point(verts[0], "vertices[0]")
        pts = [first] + [_parse_point(v, f"vertices[{i}]", len(first)) for i, v in enumerate(verts[1:], 1)]
        return convex_hull(pts)
    if kind == "zonotope":
        center = _parse_point(obj.get("center"), "center")
        gens = obj.get("generators")
        if not isinstance(gens, list):
            raise BodyError("generators: expected a list")
        return Zonotope(center, tuple(_parse_point(g, f"generators[{i}]", len(center))
                                      for i, g in enumerate(gens)))
    if kind == "sum":
        parts = obj.get("parts")
        if not isinstance(parts, list) or not parts:
            raise BodyError("parts: expected a non-empty list")
        out = body_from_json(parts[0])
        for p in parts[1:]:
            out = minkowski_sum(out, body_from_json(p))
        return out
    raise BodyError(f"type: unknown body type {kind!r}")


def load_body(path: str):
    with open(path) as fh:
        try:
            obj = json.load(fh)
        except json.JSONDecodeError as exc:
            raise BodyError(f"{path}: invalid JSON ({exc.msg})") from exc
    return body_from_json(obj)
