"""Mixed volumes, quermassintegrals, intrinsic volumes and Steiner polynomials.

Three independent mixed-volume engines live here:

* bracket enumeration for tuples of zonotopes,
* a projection route for polytope/zonotope mixtures, which expands every
  body ``P + sum [0, 2g]`` multilinearly and reduces terms with segments to
  lower-dimensional mixed volumes of oblique projections,
* interpolation of ``vol(sum lambda_j K_j)`` on an integer grid.
"""
from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction
from functools import reduce
from itertools import combinations, product
from typing import Callable, Sequence

import numpy as np

from .bodies import (
    BodyError,
    MinkowskiSum,
    Polytope,
    SupportBody,
    Zonotope,
    _int_det,
    ball_zonotope,
    body_volume,
    dimension,
    kappa,
    minkowski_sum,
    scale,
    support,
)
from .kernel import (
    convex_hull_indices,
    det,
    dot,
    gen_cross,
    integerize,
    is_exact,
    oblique_projector,
    solve_linear,
    vadd,
    vneg,
    vscale,
)
from .report import GEQ, InequalityCase, VerificationReport

ROUTE_BRACKETS = "zonotope-brackets"
ROUTE_PROJECTION = "projection"
ROUTE_INTERPOLATION = "interpolation"
ROUTE_AREA = "area-vectors"


# ---------------------------------------------------------------------------
# specs


@dataclass(frozen=True)
class MixedVolumeSpec:
    """Distinct bodies with multiplicities summing to the ambient dimension."""

    bodies: tuple  # of (body, multiplicity)

    def __post_init__(self):
        merged: list = []
        for K, m in self.bodies:
            if not isinstance(m, int) or m < 0:
                raise BodyError(f"multiplicity must be a non-negative integer, got {m!r}")
            if m == 0:
                continue
            for slot in merged:
                if slot[0] is K or (not isinstance(K, SupportBody) and slot[0] == K):
                    slot[1] += m
                    break
            else:
                merged.append([K, m])
        if not merged:
            raise BodyError("mixed volume of an empty body list")
        n = dimension(merged[0][0])
        if any(dimension(K) != n for K, _ in merged):
            raise BodyError("dimension mismatch among mixed-volume arguments")
        total = sum(m for _, m in merged)
        if total != n:
            raise BodyError(f"multiplicities sum to {total}, expected n = {n}")
        object.__setattr__(self, "bodies", tuple((K, m) for K, m in merged))

    @property
    def n(self) -> int:
        return dimension(self.bodies[0][0])

    @classmethod
    def of(cls, *items) -> "MixedVolumeSpec":
        """Accept bodies or ``(body, multiplicity)`` pairs."""
        pairs = []
        for it in items:
            if isinstance(it, tuple) and len(it) == 2 and isinstance(it[1], int):
                pairs.append(it)
            else:
                pairs.append((it, 1))
        return cls(tuple(pairs))


def _as_spec(spec) -> MixedVolumeSpec:
    if isinstance(spec, MixedVolumeSpec):
        return spec
    return MixedVolumeSpec.of(*spec)


# ---------------------------------------------------------------------------
# bracket enumeration


def _factored_generators(Z: Zonotope):
    """Generators as ``scalar * integer rows`` (float rows in float mode)."""
    gens = Z.generators
    if not gens:
        return 1, []
    if not all(is_exact(x) for g in gens for x in g):
        return 1.0, [tuple(float(x) for x in g) for g in gens]
    ints, d = integerize(gens)
    g = reduce(math.gcd, (abs(x) for row in ints for x in row))
    return Fraction(g, d), [tuple(x // g for x in row) for row in ints]


def mixed_volume_zonotopes(zonotopes: Sequence[Zonotope]):
    """``V(Z_1, ..., Z_n)`` by enumerating one generator segment per slot.

    Each ``[-g, g]`` is the segment ``[0, 2g]`` up to translation, so a tuple
    of generators contributes ``2^n |det| / n!``. Repeated bodies are grouped
    and enumerated over subsets, which gives the factor ``prod m_j!``.
    """
    if isinstance(zonotopes, MixedVolumeSpec):
        spec = zonotopes
    else:
        spec = MixedVolumeSpec.of(*zonotopes)
    if not all(isinstance(Z, Zonotope) for Z, _ in spec.bodies):
        raise BodyError("bracket enumeration accepts zonotopes only")
    return _brackets(spec)


def _brackets(spec: MixedVolumeSpec):
    n = spec.n
    groups = []
    coef = Fraction(2 ** n, math.factorial(n))
    exact = True
    for Z, m in spec.bodies:
        s, rows = _factored_generators(Z)
        if len(rows) < m:
            return Fraction(0)
        exact = exact and is_exact(s)
        coef *= math.factorial(m) * s ** m
        groups.append((rows, m))
    total = _sum_abs_dets_grouped(groups, n, exact)
    return coef * total if exact else float(coef) * total


def _sum_abs_dets_grouped(groups, n, exact):
    # vectorize over the group with the most subsets, loop over the rest
    sizes = [math.comb(len(rows), m) for rows, m in groups]
    big = max(range(len(groups)), key=lambda j: sizes[j])
    others = [j for j in range(len(groups)) if j != big]
    rows_b, m_b = groups[big]
    combos_b = np.array(list(combinations(range(len(rows_b)), m_b)), dtype=np.int64)
    if exact:
        bound = math.factorial(n)
        for rows, m in groups:
            bound *= max(abs(x) for r in rows for x in r) ** m
        # object arrays keep Python ints when int64 could overflow
        dtype = np.int64 if bound < 2 ** 62 else object
    else:
        dtype = float
    arr_b = np.array(rows_b, dtype=dtype)
    varying = arr_b[combos_b]  # (c, m_b, n)
    total = 0 if exact else 0.0
    for pick in product(*[combinations(groups[j][0], groups[j][1]) for j in others]):
        fixed = [r for part in pick for r in part]
        if fixed:
            head = np.broadcast_to(np.array(fixed, dtype=dtype), (len(varying), len(fixed), n))
            mats = np.concatenate([head, varying], axis=1)
        else:
            mats = varying
        if exact:
            total += int(np.abs(_int_det(mats, n)).sum())
        else:
            total += float(np.abs(np.linalg.det(mats)).sum())
    return total


# ---------------------------------------------------------------------------
# projection route


def _decompose(K):
    """``(vertex list or None, segments)`` with ``K = conv(vertices) + sum [0, s]`` up to translation."""
    if isinstance(K, Polytope):
        return list(K.vertices), []
    if isinstance(K, Zonotope):
        return None, [vscale(2, g) for g in K.generators]
    if isinstance(K, MinkowskiSum):
        return list(K.polytope.vertices), [vscale(2, g) for g in K.zonotope.generators]
    raise BodyError(f"cannot decompose {K!r}")


def _hull_volume(points):
    return convex_hull_indices(points).volume


def _sum_points(groups, counts):
    pts = [None]
    for (Q, _), c in zip(groups, counts):
        if c == 0:
            continue
        scaled = [vscale(c, q) for q in Q] if c != 1 else Q
        pts = [q if p is None else vadd(p, q) for p in pts for q in scaled]
    return pts


def _lowdim_mixed(groups, d):
    """``V_d(Q_1[r_1], ...)`` for point sets in ``R^d`` by polarization."""
    if len(groups) == 1:
        return _hull_volume(groups[0][0])
    total = Fraction(0)
    for counts in product(*[range(r + 1) for _, r in groups]):
        s = sum(counts)
        if s == 0:
            continue
        coef = (-1) ** (d - s)
        for (_, r), c in zip(groups, counts):
            coef *= math.comb(r, c)
        total += coef * _hull_volume(_sum_points(groups, counts))
    return total / math.factorial(d)


def surface_area_vectors(points) -> list:
    """Area vectors ``a_F * nu_F`` of the surface area measure of ``conv(points)`` in ``R^d``.

    A flat (d-1)-dimensional body contributes its area on both sides.
    """
    d = len(points[0])
    h = convex_hull_indices(points)
    if h.dim == d:
        return [f.area_vector for f in h.facets]
    if h.dim < d - 1:
        return []
    if d == 1:
        return [(1,), (-1,)]
    base = [points[i] for i in h.vertices]
    p0 = base[0]
    # find d-1 independent edge vectors among the vertices
    edges = []
    for p in base[1:]:
        cand = edges + [tuple(a - b for a, b in zip(p, p0))]
        if _rank(cand) == len(cand):
            edges = cand
        if len(edges) == d - 1:
            break
    w = gen_cross(edges)
    c = max(range(d), key=lambda i: abs(w[i]))
    dropped = [tuple(x for j, x in enumerate(p) if j != c) for p in base]
    if d - 1 == 1:
        xs = [p[0] for p in dropped]
        shadow = max(xs) - min(xs)
    else:
        shadow = _hull_volume(dropped)
    a = vscale(shadow / abs(w[c]), w)
    return [a, vneg(a)]


def _rank(vectors):
    from .kernel import rank

    return rank(vectors)


def _lowdim_mixed_support(groups, d, M, proj):
    """``V_d(Q_1[r_1], ..., pi M)`` with ``sum r_j = d - 1`` via area vectors."""
    if d == 1:
        return support(M, proj.pullback((1,))) + support(M, proj.pullback((-1,)))
    total = 0
    for counts in product(*[range(r + 1) for _, r in groups]):
        s = sum(counts)
        if s == 0:
            continue
        coef = (-1) ** (d - 1 - s)
        for (_, r), c in zip(groups, counts):
            coef *= math.comb(r, c)
        pts = _sum_points(groups, counts)
        val = sum((support(M, proj.pullback(a)) for a in surface_area_vectors(pts)), 0)
        total += coef * val
    return total / (d * math.factorial(d - 1))


def _mixed_projection(bodies, n: int, M=None):
    parts = [(*_decompose(K), m) for K, m in bodies]
    kmax = n if M is None else n - 1
    fact_n = math.factorial(n)
    total = [Fraction(0)]

    def term(chosen, weight, remaining):
        k = len(chosen)
        d = n - k
        if M is None and d == 0:
            total[0] += weight * abs(det(chosen)) / fact_n
            return
        if M is None and d == 1:
            (pts, _), = remaining
            w = gen_cross(chosen)
            vals = [dot(w, p) for p in pts]
            total[0] += weight * (max(vals) - min(vals)) / fact_n
            return
        proj = oblique_projector(chosen, n)
        if proj is None:
            return
        low = [([proj(p) for p in pts], r) for pts, r in remaining]
        if M is None:
            val = _lowdim_mixed(low, d)
        else:
            val = _lowdim_mixed_support(low, d, M, proj)
        total[0] += weight * Fraction(math.factorial(d), fact_n) * proj.weight * val

    def rec(j, chosen, weight, remaining):
        if j == len(parts):
            term(chosen, weight, remaining)
            return
        pts, segs, m = parts[j]
        kmin = m if pts is None else 0
        for k in range(kmin, min(m, len(segs)) + 1):
            if len(chosen) + k > kmax:
                break
            w = weight * math.perm(m, k)
            rest = remaining + ([(pts, m - k)] if m > k else [])
            for T in combinations(segs, k):
                rec(j + 1, chosen + list(T), w, rest)

    rec(0, [], 1, [])
    return total[0]


def mixed_volume_projection(spec):
    """Mixed volume of polytopes, zonotopes and lazy sums by the projection route.

    At most one slot may hold a support-only body.
    """
    spec = _as_spec(spec)
    support_slots = [(K, m) for K, m in spec.bodies if isinstance(K, SupportBody)]
    if not support_slots:
        return _unfloat(spec, _mixed_projection(spec.bodies, spec.n))
    if len(support_slots) > 1 or support_slots[0][1] != 1:
        raise BodyError("at most one slot may hold a support-only body")
    M = support_slots[0][0]
    rest = tuple((K, m) for K, m in spec.bodies if K is not M)
    if not rest:
        raise BodyError("support-only body needs n - 1 further slots")
    return _unfloat(spec, _mixed_projection(rest, spec.n, M))


def _unfloat(spec, value):
    """Return a float when any input coordinate is a float."""
    for K, _ in spec.bodies:
        if _has_float(K):
            return float(value)
    return value


def _has_float(K) -> bool:
    if isinstance(K, Polytope):
        return any(isinstance(x, float) for v in K.vertices for x in v)
    if isinstance(K, Zonotope):
        return any(isinstance(x, float) for g in K.generators for x in g)
    if isinstance(K, MinkowskiSum):
        return _has_float(K.polytope) or _has_float(K.zonotope)
    return False


# ---------------------------------------------------------------------------
# interpolation


def _compositions(total: int, parts: int):
    if parts == 1:
        yield (total,)
        return
    for first in range(total + 1):
        for rest in _compositions(total - first, parts - 1):
            yield (first,) + rest


def _combination(bodies, lams):
    out = None
    for K, lam in zip(bodies, lams):
        if lam == 0:
            continue
        part = K if lam == 1 else scale(K, lam)
        out = part if out is None else minkowski_sum(out, part)
    return out


def mixed_volume_interpolation(spec):
    """Mixed volume as a coefficient of ``vol(sum lambda_j K_j)``.

    The volume is a homogeneous polynomial of degree n in the lambdas. It is
    sampled on the lattice ``{lambda in N^m : sum lambda = n}``, which is
    unisolvent for such polynomials, so the solve is exact and square.
    """
    spec = _as_spec(spec)
    bodies = [K for K, _ in spec.bodies]
    m = len(bodies)
    if m > 4:
        raise BodyError("interpolation supports at most 4 distinct bodies")
    if any(isinstance(K, SupportBody) for K in bodies):
        raise BodyError("interpolation needs bodies with computable volume")
    n = spec.n
    monomials = list(_compositions(n, m))
    nodes = monomials
    rows = [[math.prod(l ** a for l, a in zip(lam, alpha)) for alpha in monomials] for lam in nodes]
    vals = [[body_volume(_combination(bodies, lam))] for lam in nodes]
    try:
        sol = solve_linear(rows, vals)
    except ZeroDivisionError as exc:
        raise ArithmeticError("singular interpolation system: grid design bug") from exc
    target = tuple(mult for _, mult in spec.bodies)
    coef = sol[monomials.index(target)][0]
    count = math.factorial(n) // math.prod(math.factorial(a) for a in target)
    return coef / count


# ---------------------------------------------------------------------------
# dispatcher


def _area_route_split(spec):
    if len(spec.bodies) != 2:
        return None
    (A, a), (B, b) = spec.bodies
    if a == spec.n - 1 and isinstance(A, Polytope):
        return A, B
    if b == spec.n - 1 and isinstance(B, Polytope):
        return B, A
    return None


def mixed_volume_area(P: Polytope, X):
    """``V(P[n-1], X) = (1/n) sum_F h(X, a_F)`` over the surface area vectors of ``P``."""
    n = P.dim
    total = sum((support(X, a) for a in surface_area_vectors(list(P.vertices))), Fraction(0))
    return total / n


def mixed_volume_route(spec) -> str:
    spec = _as_spec(spec)
    if all(isinstance(K, Zonotope) for K, _ in spec.bodies):
        return ROUTE_BRACKETS
    if _area_route_split(spec) is not None:
        return ROUTE_AREA
    return ROUTE_PROJECTION


def mixed_volume(spec):
    """``V(K_1[m_1], ..., K_r[m_r])``, dispatched deterministically by body types.

    Zonotope-only specs use bracket enumeration, ``V(P[n-1], X)`` with a
    polytope ``P`` uses facet area vectors, everything else the projection route.
    """
    spec = _as_spec(spec)
    route = mixed_volume_route(spec)
    if route == ROUTE_BRACKETS:
        return _brackets(spec)
    if route == ROUTE_AREA:
        return _unfloat(spec, mixed_volume_area(*_area_route_split(spec)))
    return mixed_volume_projection(spec)


# ---------------------------------------------------------------------------
# quermassintegrals and intrinsic volumes


def quermassintegral(K, i: int, ballN: int, exact: bool = True):
    """``W_i(K) = V(K[n-i], B_N[i])``."""
    n = dimension(K)
    if not 0 <= i <= n:
        raise BodyError(f"quermassintegral index {i} outside 0..{n}")
    B = ball_zonotope(n, ballN, exact)
    return mixed_volume(MixedVolumeSpec(((K, n - i), (B, i))))


def mixed_quermassintegral(K, L, i: int, ballN: int, exact: bool = True):
    """``W_i(K, L) = V(K[n-i-1], B_N[i], L)``."""
    n = dimension(K)
    if not 0 <= i <= n - 1:
        raise BodyError(f"mixed quermassintegral index {i} outside 0..{n - 1}")
    B = ball_zonotope(n, ballN, exact)
    return mixed_volume(MixedVolumeSpec(((K, n - i - 1), (B, i), (L, 1))))


def intrinsic_volume(K, i: int, ballN: int, exact: bool = True):
    """``V_i(K) = binom(n, i) W_{n-i}(K) / kappa_{n-i}``; ``V_n`` stays exact."""
    n = dimension(K)
    w = quermassintegral(K, n - i, ballN, exact)
    if i == n:
        return w
    return math.comb(n, i) * float(w) / kappa(n - i)


@dataclass(frozen=True)
class SteinerCoefficients:
    coeffs: tuple  # coefficient of r^i at index i

    def __call__(self, r):
        return sum(c * r ** i for i, c in enumerate(self.coeffs))

    @property
    def degree_bound(self) -> int:
        return len(self.coeffs) - 1


def vandermonde_fit(nodes: Sequence, values: Sequence) -> list:
    """Exact coefficients ``c_i`` with ``sum c_i x^i = value`` at every node."""
    deg = len(nodes) - 1
    rows = [[x ** i for i in range(deg + 1)] for x in nodes]
    try:
        sol = solve_linear(rows, [[v] for v in values])
    except ZeroDivisionError as exc:
        raise ArithmeticError("repeated interpolation nodes") from exc
    return [s[0] for s in sol]


def steiner_volume_polynomial(K, ballN: int, exact: bool = True) -> SteinerCoefficients:
    """Coefficients of ``vol(K + r B_N)`` from samples at ``r = 0..n``."""
    n = dimension(K)
    B = ball_zonotope(n, ballN, exact)
    vals = [body_volume(minkowski_sum(K, scale(B, r))) for r in range(n + 1)]
    return SteinerCoefficients(tuple(vandermonde_fit(list(range(n + 1)), vals)))


# ---------------------------------------------------------------------------
# homogeneous decomposition of scalar valuations


def _evaluate_scalar(phi, K):
    return phi.evaluate(K) if hasattr(phi, "evaluate") else phi(K)


def homogeneous_components(phi, K, nodes: Sequence | None = None) -> list:
    """``phi_0(K), ..., phi_n(K)`` from ``phi(lambda K)`` at ``lambda = 1..n+1``."""
    n = dimension(K)
    nodes = list(nodes) if nodes is not None else list(range(1, n + 2))
    if len(nodes) != n + 1 or len(set(nodes)) != n + 1 or any(x <= 0 for x in nodes):
        raise ValueError("need n + 1 distinct positive dilation nodes")
    vals = [_evaluate_scalar(phi, scale(K, lam)) for lam in nodes]
    return vandermonde_fit(nodes, vals)


def check_component_nonnegativity(phi, Z: Zonotope, tol: float = 1e-9,
                                  name: str = "phi") -> VerificationReport:
    """Every homogeneous component of a non-negative valuation at ``Z`` is >= 0."""
    comps = homogeneous_components(phi, Z)
    rep = VerificationReport("component-nonnegativity",
                             {"n": Z.dim, "tol": tol, "arith": "exact" if all(map(is_exact, comps)) else "float"})
    zero = Fraction(0) if all(map(is_exact, comps)) else 0.0
    for i, c in enumerate(comps):
        rep.add(InequalityCase(f"{name}_{i}", c, zero, GEQ, tol, relative=False))
    return rep


# ---------------------------------------------------------------------------
# face-angle intrinsic volumes (independent oracle)


def _orthonormal_affine(points):
    P = np.array(points, dtype=float)
    base = P[0]
    D = P[1:] - base
    if len(D) == 0:
        return np.zeros((1, 0))
    u, s, vt = np.linalg.svd(D, full_matrices=False)
    k = int((s > 1e-12 * max(1.0, s.max())).sum())
    Q = vt[:k]
    return (P - base) @ Q.T


def intrinsic_volumes_angles(points) -> list:
    """``[V_0, ..., V_d]`` of ``conv(points)`` in ``R^d``, d <= 3, from face angles.

    ``V_{d-1}`` is half the surface area; in three dimensions ``V_1`` is
    ``(1 / 2 pi) sum_e length(e) * (exterior angle at e)``.
    """
    pts = [tuple(p) for p in points]
    d = len(pts[0])
    h = convex_hull_indices(pts)
    if h.dim < d:
        if h.dim == 0:
            return [1.0] + [0.0] * d
        low = _orthonormal_affine([pts[i] for i in h.vertices])
        vals = intrinsic_volumes_angles([tuple(map(float, p)) for p in low])
        return vals + [0.0] * (d - h.dim)
    if d == 1:
        xs = [p[0] for p in pts]
        return [1.0, max(xs) - min(xs)]
    if d == 2:
        ring = [pts[i] for i in h.vertices]
        per = sum(math.dist(map(float, ring[k]), map(float, ring[(k + 1) % len(ring)]))
                  for k in range(len(ring)))
        return [1.0, per / 2, h.volume]
    if d == 3:
        facets = h.facets
        area = sum(math.sqrt(float(dot(f.area_vector, f.area_vector))) for f in facets)
        v1 = 0.0
        for f, g in combinations(facets, 2):
            common = sorted(set(f.vertices) & set(g.vertices))
            if len(common) < 2:
                continue
            length = max(math.dist(map(float, pts[a]), map(float, pts[b]))
                         for a, b in combinations(common, 2))
            nf = np.array(f.normal, dtype=float)
            ng = np.array(g.normal, dtype=float)
            angle = math.atan2(np.linalg.norm(np.cross(nf, ng)), float(nf @ ng))
            v1 += length * angle
        return [1.0, v1 / (2 * math.pi), area / 2, h.volume]
    raise BodyError("face-angle intrinsic volumes are implemented for d <= 3")
