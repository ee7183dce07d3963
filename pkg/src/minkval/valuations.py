"""Minkowski valuations: the projection body, Steiner decompositions, the
derivation operator, Klain functions and inversion, and the Steiner point.
"""
from __future__ import annotations

import math
import random
from dataclasses import dataclass, field
from fractions import Fraction
from functools import reduce
from itertools import combinations, product
from typing import Callable, Optional, Sequence

import numpy as np

from .bodies import (
    BodyError,
    MinkowskiSum,
    Polytope,
    SupportBody,
    Zonotope,
    as_polytope,
    ball_zonotope,
    body_volume,
    clip,
    dimension,
    generating_measure,
    is_materializable,
    lazy_sum,
    linear_image,
    measure_calibration,
    minkowski_sum,
    scale,
    support,
    support_batch,
)
from .kernel import (
    Frame,
    Halfspace,
    bracket,
    convex_hull_indices,
    direction_set,
    dot,
    gen_cross,
    integerize,
    is_exact,
    rational_orthogonal_matrices,
    solve_linear,
    to_float,
    transpose,
    vadd,
    vscale,
    vsub,
)
from .mixed import surface_area_vectors
from .report import EQ, GEQ, InequalityCase, VerificationReport

BODY = "body"
SCALAR = "scalar"
EVEN = "even"
ODD = "odd"


# ---------------------------------------------------------------------------
# operators


@dataclass(frozen=True, eq=False)
class ValuationOperator:
    """A named map from bodies to bodies or to scalars."""

    name: str
    kind: str
    evaluator: Callable
    degree: Optional[int] = None
    parity: Optional[str] = None
    equivariant: bool = False  # SO(n)-equivariant (body) or invariant (scalar)

    def __call__(self, K):
        return self.evaluator(K)

    def evaluate(self, K):
        return self.evaluator(K)

    def __repr__(self):
        return f"ValuationOperator({self.name}, {self.kind}, degree={self.degree})"


# ---------------------------------------------------------------------------
# generator bookkeeping


def _primitive_direction(x):
    """``(p, w)`` with integer ``p`` (first nonzero entry positive) and ``x = +-w p``, ``w > 0``."""
    ints, d = integerize([x])
    row = ints[0]
    g = reduce(math.gcd, (abs(v) for v in row))
    p = tuple(v // g for v in row)
    if next(v for v in p if v != 0) < 0:
        p = tuple(-v for v in p)
    return p, Fraction(g, d)


def merge_generators(gens, weights=None) -> dict:
    """Sum of ``weight * |u . g|`` terms collected per primitive direction."""
    out: dict = {}
    for k, g in enumerate(gens):
        if not any(v != 0 for v in g):
            continue
        w = 1 if weights is None else weights[k]
        if all(is_exact(v) for v in g):
            p, s = _primitive_direction(g)
            out[p] = out.get(p, 0) + w * s
        else:
            out[tuple(g)] = out.get(tuple(g), 0) + w
    return out


def merged_zonotope(Z: Zonotope) -> Zonotope:
    """The same zonotope with parallel generators combined."""
    m = merge_generators(Z.generators)
    return Zonotope(Z.center, tuple(vscale(w, p) for p, w in sorted(m.items())))


# ---------------------------------------------------------------------------
# projection body


def _pi_generators_polytope(points) -> list:
    # h(Pi P, u) = 1/2 sum_F |u . a_F|; pair each facet with its antipode
    n = len(points[0])
    classes: dict = {}
    for a in surface_area_vectors(points):
        p, w = _primitive_direction(a)
        sign = 1 if vscale(w, p) == tuple(a) else -1
        slot = classes.setdefault(p, [0, 0])
        slot[0 if sign > 0 else 1] += w
    return [vscale(Fraction(wp + wm, 2), p) for p, (wp, wm) in sorted(classes.items())]


def _pi_generators_zonotope(gens, n) -> list:
    m = merge_generators(gens)
    merged = [vscale(w, p) for p, w in sorted(m.items())]
    c = 2 ** (n - 1)
    out = []
    for S in combinations(merged, n - 1):
        w = gen_cross(S)
        if any(v != 0 for v in w):
            out.append(vscale(c, w))
    return out


def _cross_image_edges(points, g) -> list:
    """Edges of the polygon ``{g x v : v in conv(points)}``, as a closed cycle."""
    img = [(g[1] * v[2] - g[2] * v[1], g[2] * v[0] - g[0] * v[2], g[0] * v[1] - g[1] * v[0])
           for v in points]
    # the image lies in g^perp; dropping the largest coordinate of g is injective
    # there and keeps float images from looking three-dimensional after rounding
    drop = max(range(3), key=lambda k: abs(g[k]))
    h = convex_hull_indices([tuple(p[k] for k in range(3) if k != drop) for p in img])
    if h.dim == 0:
        return []
    ring = [img[i] for i in h.vertices]
    return [vsub(ring[(k + 1) % len(ring)], ring[k]) for k in range(len(ring))]


def projection_body(K) -> Zonotope:
    """``Pi K`` with ``h(Pi K, u) = vol_{n-1}(K | u^perp)`` for unit ``u``.

    Polytopes use facet area vectors; zonotopes the ``2^{n-1}`` cross
    products of generator (n-1)-subsets. For ``P + Z`` in the plane the map
    is additive; in three dimensions the mixed term is the sum over
    generators g of the edge vectors of the polygon ``g x P``.
    """
    n = dimension(K)
    zero = tuple(Fraction(0) for _ in range(n))
    if isinstance(K, Polytope):
        if len(K.vertices) == 1:
            return Zonotope(zero, ())
        return Zonotope(zero, tuple(_pi_generators_polytope(list(K.vertices))))
    if isinstance(K, Zonotope):
        return Zonotope(zero, tuple(_pi_generators_zonotope(K.generators, n)))
    if isinstance(K, MinkowskiSum):
        P, Z = K.polytope, K.zonotope
        gens = [] if len(P.vertices) == 1 else _pi_generators_polytope(list(P.vertices))
        gens += _pi_generators_zonotope(Z.generators, n)
        if n == 2:
            return Zonotope(zero, tuple(gens))
        if n == 3:
            for g, w in merge_generators(Z.generators).items():
                gens += [vscale(w, e) for e in _cross_image_edges(list(P.vertices), g)]
            return Zonotope(zero, tuple(gens))
        if is_materializable(K):
            return projection_body(as_polytope(K))
        raise BodyError("projection body of a large lazy sum is implemented for n <= 3")
    raise BodyError(f"projection body of {K!r} is not available")


# ---------------------------------------------------------------------------
# coefficient supports


@dataclass(frozen=True, eq=False)
class LinearSupport:
    """Support-type function ``sum_r c_r h(B_r, .)`` for a signed combination of bodies.

    When every body is a zonotope, the combination is kept as signed weights
    on primitive generator directions; non-negative weights certify that the
    function is the support function of a zonotope.
    """

    terms: tuple  # of (coefficient, body)
    dim: int

    @property
    def _zonotopal(self) -> bool:
        return all(isinstance(B, Zonotope) for _, B in self.terms)

    @property
    def _merged(self):
        cached = self.__dict__.get("_merged_cache")
        if cached is None:
            center = tuple(Fraction(0) for _ in range(self.dim))
            weights: dict = {}
            for c, B in self.terms:
                if c == 0:
                    continue
                center = vadd(center, vscale(c, B.center))
                for p, w in merge_generators(B.generators).items():
                    weights[p] = weights.get(p, 0) + c * w
            weights = {p: w for p, w in weights.items() if w != 0}
            cached = (center, weights)
            object.__setattr__(self, "_merged_cache", cached)
        return cached

    def __call__(self, u):
        if self._zonotopal:
            center, weights = self._merged
            return dot(center, u) + sum((w * abs(dot(p, u)) for p, w in weights.items()), 0)
        return sum((c * support(B, u) for c, B in self.terms if c != 0), 0)

    def batch(self, U) -> np.ndarray:
        U = np.asarray(U, dtype=float)
        if self._zonotopal:
            center, weights = self._merged
            out = U @ np.array(center, dtype=float)
            if weights:
                P = np.array(list(weights.keys()), dtype=float)
                W = np.array([float(w) for w in weights.values()])
                out = out + np.abs(U @ P.T) @ W
            return out
        out = np.zeros(len(U))
        for c, B in self.terms:
            if c != 0:
                out = out + float(c) * support_batch(B, U)
        return out

    def exact_integer(self, u):
        """Exact value at an integer direction using integer arithmetic."""
        if not self._zonotopal:
            return self(u)
        center, weights = self._merged
        return dot(center, u) + sum((w * abs(sum(a * b for a, b in zip(p, u))) for p, w in weights.items()), 0)

    def as_zonotope(self) -> Optional[Zonotope]:
        """The certified zonotope, or ``None`` if some net weight is negative or data is non-zonotopal."""
        if not self._zonotopal:
            return None
        center, weights = self._merged
        if any(w < 0 for w in weights.values()):
            return None
        return Zonotope(center, tuple(vscale(w, p) for p, w in sorted(weights.items())))

    def as_body(self, label: str = "coefficient"):
        Z = self.as_zonotope()
        if Z is not None:
            return Z
        return SupportBody(self.dim, self, self.batch, label)

    def is_zero(self) -> bool:
        if self._zonotopal:
            center, weights = self._merged
            return not weights and all(c == 0 for c in center)
        return False


def _inverse_vandermonde(nodes):
    k = len(nodes)
    rows = [[x ** i for i in range(k)] for x in nodes]
    ident = [[int(a == b) for b in range(k)] for a in range(k)]
    return solve_linear(rows, ident)  # inv[i][r]: coefficient of x^i from value at node r


# ---------------------------------------------------------------------------
# Steiner decomposition


@dataclass
class SteinerDecomposition:
    """Coefficients ``h_j`` with ``h(Phi(K + rZ), u) = sum_j r^{n-j} h_j(u)``."""

    operator: str
    K: object
    Z: Zonotope
    nodes: tuple
    dirs: tuple
    values: tuple  # h(Phi(K + r Z)) as bodies, one per node
    coefficients: tuple  # LinearSupport per j = 0..n
    tables: tuple  # per j, values on dirs

    @property
    def n(self) -> int:
        return len(self.coefficients) - 1

    def coefficient(self, j: int) -> LinearSupport:
        return self.coefficients[j]

    def power(self, k: int) -> LinearSupport:
        """Coefficient of ``r^k``."""
        return self.coefficients[self.n - k]

    def table(self, j: int) -> tuple:
        return self.tables[j]

    def body(self, j: int):
        return self.coefficients[j].as_body(f"{self.operator}^({j})")

    def reproduces(self) -> bool:
        """The fitted polynomial matches every sampled body value exactly."""
        for r, B in zip(self.nodes, self.values):
            for u in self.dirs:
                lhs = sum((r ** (self.n - j) * c(u) for j, c in enumerate(self.coefficients)), 0)
                if not _agree(lhs, support(B, u)):
                    return False
        return True


def _agree(a, b, tol=1e-9) -> bool:
    if is_exact(a) and is_exact(b):
        return a == b
    return abs(to_float(a) - to_float(b)) <= tol * max(1.0, abs(to_float(a)), abs(to_float(b)))


def steiner_decompose(Phi, K, Z: Zonotope, dirs: Sequence = (), nodes: Sequence | None = None
                      ) -> SteinerDecomposition:
    """Fit ``h(Phi(K + rZ), u)`` as a polynomial of degree ``n`` in ``r``.

    Nodes default to ``r = 0..n``; ``r = 0`` is admissible because Phi is
    continuous. Every coefficient is kept as an exact signed combination
    of the sampled bodies, so it can be evaluated off the direction sample.
    """
    n = dimension(K)
    nodes = tuple(nodes) if nodes is not None else tuple(range(n + 1))
    if len(nodes) != n + 1:
        raise ValueError(f"need n + 1 = {n + 1} fitting nodes")
    evaluate = Phi.evaluate if hasattr(Phi, "evaluate") else Phi
    values = []
    for r in nodes:
        try:
            values.append(evaluate(lazy_sum(K, scale(Z, r))))
        except BodyError:
            raise
        except Exception as exc:  # surfaced as an evaluation failure
            raise BodyError(f"operator evaluation failed at r = {r}: {exc}") from exc
    inv = _inverse_vandermonde(nodes)
    name = getattr(Phi, "name", "phi")
    coeffs = []
    for j in range(n + 1):
        k = n - j
        coeffs.append(LinearSupport(tuple((inv[k][t], values[t]) for t in range(n + 1)), n))
    dirs = tuple(tuple(u) for u in dirs)
    tables = tuple(tuple(c(u) for u in dirs) for c in coeffs)
    return SteinerDecomposition(name, K, Z, nodes, dirs, tuple(values), tuple(coeffs), tables)


def refit_consistent(dec: SteinerDecomposition, Phi, shift: int = 1) -> bool:
    """Refit on nodes shifted by ``shift`` and compare the tables exactly."""
    other = steiner_decompose(Phi, dec.K, dec.Z, dec.dirs, tuple(r + shift for r in dec.nodes))
    return all(_agree(a, b) for ta, tb in zip(dec.tables, other.tables) for a, b in zip(ta, tb))


# ---------------------------------------------------------------------------
# sublinearity certification


def _integer_ray(rng: random.Random, dirs_int, scale_max: int = 6):
    a, b = rng.sample(range(len(dirs_int)), 2) if len(dirs_int) > 1 else (0, 0)
    ca = rng.randint(1, scale_max) * rng.choice((1, -1))
    cb = rng.randint(0, scale_max) * rng.choice((1, -1))
    return tuple(ca * x + cb * y for x, y in zip(dirs_int[a], dirs_int[b]))


def certify_support_function(h, dirs: Sequence, triples: int = 10000, seed: int = 0,
                             tol: float = 1e-9, name: str = "table") -> VerificationReport:
    """Test ``h(u + v) <= h(u) + h(v)`` on seeded rational triples.

    Rays are integer combinations of pairs of sample directions. A float
    pass screens every triple; triples whose float slack is within a
    rounding bound are decided exactly, so the verdict is exact.
    """
    dirs = [tuple(u) for u in dirs]
    exact_dirs = all(is_exact(x) for u in dirs for x in u)
    rng = random.Random(seed)
    if exact_dirs:
        ints, _ = integerize(dirs)
    else:
        ints = [tuple(round(x * 2 ** 20) for x in u) for u in dirs]
    U = [_integer_ray(rng, ints) for _ in range(triples)]
    V = [_integer_ray(rng, ints) for _ in range(triples)]
    W = [vadd(u, v) for u, v in zip(U, V)]
    batch = getattr(h, "batch", None)
    if batch is not None:
        hu, hv, hw = (batch(np.array(X, dtype=float)) for X in (U, V, W))
    else:
        hu, hv, hw = (np.array([float(h(x)) for x in X]) for X in (U, V, W))
    slack = hu + hv - hw
    bound = 1e-9 * (np.abs(hu) + np.abs(hv) + np.abs(hw)) + 1e-12
    suspicious = np.nonzero(slack <= bound)[0]
    exact_eval = getattr(h, "exact_integer", h)
    violations = []
    rechecked = 0
    min_slack = None
    for t in suspicious:
        rechecked += 1
        s = exact_eval(U[t]) + exact_eval(V[t]) - exact_eval(W[t])
        if min_slack is None or s < min_slack:
            min_slack = s
        if (is_exact(s) and s < 0) or (not is_exact(s) and s < -tol):
            violations.append(int(t))
    if min_slack is None:
        min_slack = float(slack.min()) if len(slack) else 0.0
    rep = VerificationReport("sublinearity", {"triples": triples, "seed": seed, "tol": tol})
    wit = {"violations": len(violations), "exact_rechecks": rechecked}
    if violations:
        t = violations[0]
        wit.update({"u": list(U[t]), "v": list(V[t])})
    zero = Fraction(0) if is_exact(min_slack) else 0.0
    rep.add(InequalityCase(f"{name}: min h(u)+h(v)-h(u+v)", min_slack, zero, GEQ, tol,
                           relative=False, witnesses=wit))
    rep.info = {"violations": len(violations), "exact_rechecks": rechecked}
    return rep


# ---------------------------------------------------------------------------
# derivation operator


def lambda_derive(Phi: ValuationOperator, ballN: int, exact: bool = True) -> ValuationOperator:
    """``Lambda Phi``: the ``r^1`` coefficient of ``Phi(K + r B_N)``."""

    def evaluator(K):
        n = dimension(K)
        B = ball_zonotope(n, ballN, exact)
        dec = steiner_decompose(Phi, K, B)
        return dec.power(1).as_body(f"lambda({Phi.name})")

    degree = Phi.degree - 1 if Phi.degree is not None else None
    return ValuationOperator(f"lambda({Phi.name})", BODY, evaluator, degree, Phi.parity,
                             Phi.equivariant)


def lambda_power(Phi: ValuationOperator, k: int, ballN: int, exact: bool = True) -> ValuationOperator:
    out = Phi
    for _ in range(k):
        out = lambda_derive(out, ballN, exact)
    return out


# ---------------------------------------------------------------------------
# Klain functions and inversion


def unit_cube(E: Frame) -> Zonotope:
    """The cube spanned by an orthonormal frame, as a zonotope."""
    basis = E.basis
    half = [vscale(Fraction(1, 2) if is_exact(b[0]) else 0.5, b) for b in basis]
    center = half[0]
    for h in half[1:]:
        center = vadd(center, h)
    return Zonotope(center, tuple(half))


def _require_even_degree(phi, n):
    if phi.degree is None or phi.parity is None:
        raise ValueError(f"{phi.name}: degree and parity must be declared for Klain functions")
    if phi.parity != EVEN:
        raise ValueError(f"{phi.name}: Klain functions need an even valuation")
    if not 1 <= phi.degree <= n - 1:
        raise ValueError(f"{phi.name}: degree {phi.degree} outside 1..{n - 1}")


def klain_function(phi: ValuationOperator, E: Frame):
    """``K_i phi(E)``: the value of phi on the unit cube of the subspace E."""
    _require_even_degree(phi, E.ambient)
    if E.rank != phi.degree:
        raise ValueError(f"frame rank {E.rank} differs from degree {phi.degree}")
    return phi.evaluate(unit_cube(E))


@dataclass
class KlainTable:
    degree: int
    entries: dict  # Frame basis tuple -> value

    def __getitem__(self, E):
        key = E.basis if isinstance(E, Frame) else tuple(E)
        return self.entries[key]

    def differs_from(self, other: "KlainTable", tol: float = 1e-9):
        """First frame where the two tables disagree, or None."""
        for key, val in self.entries.items():
            if not _agree(val, other.entries[key], tol):
                return key
        return None


def klain_table(phi: ValuationOperator, n: int) -> KlainTable:
    from .kernel import rational_frames

    _require_even_degree(phi, n)
    frames = rational_frames(n, phi.degree)
    return KlainTable(phi.degree, {E.basis: klain_function(phi, E) for E in frames})


def _orthonormalize(vectors) -> list:
    Q, _ = np.linalg.qr(np.array(vectors, dtype=float).T)
    return [tuple(Q[:, k]) for k in range(len(vectors))]


def klain_callable(phi: ValuationOperator) -> Callable:
    """Klain function on arbitrary spans (float Gram-Schmidt off rational frames)."""

    def kf(vectors):
        return phi.evaluate(unit_cube(Frame(tuple(_orthonormalize(vectors)))))

    return kf


def constant_klain(value=1) -> Callable:
    return lambda vectors: value


def klain_invert(kf: Callable, zonotopes: Sequence[Zonotope]):
    """Reconstruct a mixed even valuation on zonotopes from its Klain function.

    ``(1/i!) sum over atom tuples of kf(span) [u_1..u_i] prod weights`` with
    the calibrated generating measures; dependent tuples contribute 0.
    ``kf`` receives the spanning vectors of the i-dimensional subspace.
    """
    i = len(zonotopes)
    if i == 0:
        raise ValueError("klain_invert needs at least one zonotope")
    n = zonotopes[0].dim
    if any(Z.dim != n for Z in zonotopes):
        raise BodyError("dimension mismatch among zonotopes")
    measures = [generating_measure(Z) for Z in zonotopes]
    total = 0
    for atoms in product(*[m.atoms for m in measures]):
        vecs = [a.vector for a in atoms]
        br = bracket(vecs)
        if br == 0:
            continue
        w = 1
        for a in atoms:
            w *= a.factor
        total += kf(vecs) * br * w
    return total / math.factorial(i)


def zonotope_intrinsic_volume(Z: Zonotope, i: int):
    """``V_i(Z) = 2^i sum over i-subsets of generators of [g_S]``."""
    if i == 0:
        return Fraction(1)
    return 2 ** i * sum((bracket(S) for S in combinations(Z.generators, i)), 0)


# ---------------------------------------------------------------------------
# Steiner point


def steiner_point(K, dirs: Sequence):
    """Discrete Steiner point ``M^{-1} mean_u h(K, u) u`` with ``M = mean_u u u^T``.

    Normalizing by the moment matrix of the sample keeps the map exactly
    translation equivariant; for an antipodal sample a centrally symmetric
    body returns its center.
    """
    dirs = [tuple(u) for u in dirs]
    if not dirs:
        raise ValueError("empty direction sample")
    n = len(dirs[0])
    acc = tuple(0 for _ in range(n))
    for u in dirs:
        acc = vadd(acc, vscale(support(K, u), u))
    moment = [[sum(u[r] * u[c] for u in dirs) for c in range(n)] for r in range(n)]
    return tuple(row[0] for row in solve_linear(moment, [[x] for x in acc]))


# ---------------------------------------------------------------------------
# valuation property and equivariance probes


def _support_of(X, u):
    if isinstance(X, LinearSupport):
        return X(u)
    return support(X, u)


def valuation_property_check(Phi: ValuationOperator, P: Polytope, H: Halfspace, dirs: Sequence,
                             tol: float = 1e-9) -> VerificationReport:
    """``Phi(K) + Phi(L) = Phi(P) + Phi(K cap L)`` for the two pieces of ``P`` cut by ``H``."""
    from .bodies import EMPTY

    K = clip(P, H)
    L = clip(P, H.opposite())
    if K is EMPTY or L is EMPTY:
        raise BodyError("halfspace does not split the polytope into two non-empty pieces")
    I = clip(K, H.opposite())
    vals = [Phi.evaluate(X) for X in (K, L, P, I)]
    rep = VerificationReport("valuation-property", {"operator": Phi.name, "tol": tol})
    for t, u in enumerate(dirs):
        hk, hl, hp, hi = (_support_of(X, u) for X in vals)
        rep.add(InequalityCase(f"u{t}", hk + hl, hp + hi, EQ, tol))
    return rep


def so_equivariance_probe(Phi: ValuationOperator, K, dirs: Sequence, tol: float = 1e-9
                          ) -> VerificationReport:
    """``h(Phi(AK), u) = h(Phi K, A^T u)`` for rational rotations A."""
    n = dimension(K)
    rep = VerificationReport("so-equivariance", {"operator": Phi.name, "n": n, "tol": tol})
    base = Phi.evaluate(K)
    for a, A in enumerate(rational_orthogonal_matrices(n)[:4]):
        if _det_sign(A) < 0:
            continue
        img = Phi.evaluate(linear_image(K, A))
        At = transpose(A)
        for t, u in enumerate(dirs):
            rot = tuple(dot(row, u) for row in At)
            rep.add(InequalityCase(f"A{a}-u{t}", _support_of(img, u), _support_of(base, rot), EQ, tol))
    return rep


def _det_sign(A) -> int:
    from .kernel import det

    d = det(A)
    return 1 if d > 0 else -1


def is_nontrivial(Phi: ValuationOperator, n: int, ballN: int, exact: bool = True) -> bool:
    """``Phi(B_N)`` is not a single point."""
    img = Phi.evaluate(ball_zonotope(n, ballN, exact))
    dirs = direction_set(n, 2 * n, exact)
    return any(_support_of(img, u) + _support_of(img, tuple(-x for x in u)) != 0 for u in dirs)


# ---------------------------------------------------------------------------
# several zonotope parameters


@dataclass
class BivariateFit:
    coefficients: dict  # (a, b) -> LinearSupport for lambda1^a lambda2^b
    degree_bound_holds: bool
    n: int


def bivariate_decompose(Phi, Z1: Zonotope, Z2: Zonotope) -> BivariateFit:
    """Fit ``h(Phi(l1 Z1 + l2 Z2), u)`` on the grid ``{0..n}^2`` with the full tensor basis.

    Exact polynomiality of total degree ``<= n`` shows up as exactly zero
    coefficients for every monomial with ``a + b > n``.
    """
    n = Z1.dim
    evaluate = Phi.evaluate if hasattr(Phi, "evaluate") else Phi
    grid = list(range(n + 1))
    inv = _inverse_vandermonde(grid)
    vals = {}
    for l1 in grid:
        for l2 in grid:
            vals[l1, l2] = evaluate(lazy_sum(scale(Z1, l1), scale(Z2, l2)))
    coeffs = {}
    for a in grid:
        for b in grid:
            terms = tuple((inv[a][s] * inv[b][t], vals[s, t]) for s in grid for t in grid)
            coeffs[a, b] = LinearSupport(terms, n)
    high = [coeffs[a, b] for a in grid for b in grid if a + b > n]
    holds = all(c.is_zero() if c._zonotopal else False for c in high)
    return BivariateFit({k: v for k, v in coeffs.items() if k[0] + k[1] <= n}, holds, n)


# ---------------------------------------------------------------------------
# registry and operator expressions


@dataclass(frozen=True)
class OperatorContext:
    n: int
    ballN: int = 32
    exact: bool = True


def projection_body_operator(n: int) -> ValuationOperator:
    return ValuationOperator("projection_body", BODY, projection_body, n - 1, EVEN, True)


def identity_operator() -> ValuationOperator:
    return ValuationOperator("identity", BODY, lambda K: K, 1, None, True)


def volume_ball_operator(n: int, ballN: int, exact: bool = True) -> ValuationOperator:
    B = ball_zonotope(n, ballN, exact)
    return ValuationOperator("volume_ball", BODY, lambda K: scale(B, body_volume(K)), n, EVEN, True)


def _registry(ctx: OperatorContext) -> dict:
    return {
        "projection_body": lambda: projection_body_operator(ctx.n),
        "identity": identity_operator,
        "volume_ball": lambda: volume_ball_operator(ctx.n, ctx.ballN, ctx.exact),
    }


OPERATOR_NAMES = ("projection_body", "identity", "volume_ball")


def _sum_operator(ops) -> ValuationOperator:
    degrees = {op.degree for op in ops}
    degree = degrees.pop() if len(degrees) == 1 else None
    parities = {op.parity for op in ops}
    parity = parities.pop() if len(parities) == 1 else None

    def evaluator(K):
        out = ops[0].evaluate(K)
        for op in ops[1:]:
            out = minkowski_sum(out, op.evaluate(K))
        return out

    name = "sum(" + ",".join(op.name for op in ops) + ")"
    return ValuationOperator(name, BODY, evaluator, degree, parity, all(op.equivariant for op in ops))


def _scale_operator(op: ValuationOperator, c) -> ValuationOperator:
    return ValuationOperator(f"{c}*{op.name}", BODY, lambda K: scale(op.evaluate(K), c),
                             op.degree, op.parity, op.equivariant)


def operator_from_expression(expr, ctx: OperatorContext) -> ValuationOperator:
    """Build an operator from a name or a JSON expression such as
    ``{"op": "lambda", "of": {"op": "projection_body"}}``.

    Supported ops: the registered names, ``lambda`` (``of``), ``scale``
    (``by``, ``of``) and ``sum`` (``of``: list).
    """
    from .kernel import parse_scalar

    if isinstance(expr, str):
        expr = {"op": expr}
    if not isinstance(expr, dict) or "op" not in expr:
        raise ValueError("op: operator expression must be an object with an 'op' field")
    op = expr["op"]
    reg = _registry(ctx)
    if op in reg:
        return reg[op]()
    if op == "lambda":
        if "of" not in expr:
            raise ValueError("of: 'lambda' needs an operand")
        return lambda_derive(operator_from_expression(expr["of"], ctx), ctx.ballN, ctx.exact)
    if op == "scale":
        try:
            c = parse_scalar(expr.get("by"))
        except (ValueError, TypeError) as exc:
            raise ValueError(f"by: {exc}") from exc
        if c < 0:
            raise ValueError("by: scale factor must be non-negative")
        return _scale_operator(operator_from_expression(expr.get("of"), ctx), c)
    if op == "sum":
        parts = expr.get("of")
        if not isinstance(parts, list) or not parts:
            raise ValueError("of: 'sum' needs a non-empty list of operands")
        return _sum_operator([operator_from_expression(p, ctx) for p in parts])
    raise ValueError(f"op: unknown operator {op!r}")


# ---------------------------------------------------------------------------
# scalar valuations


def volume_valuation(n: int) -> ValuationOperator:
    return ValuationOperator("volume", SCALAR, body_volume, n, EVEN, True)


def support_triple_valuation(x, y) -> ValuationOperator:
    """``psi(K) = h(K, x) + h(K, y) - h(K, x + y)``, non-negative by sublinearity."""
    s = vadd(x, y)
    return ValuationOperator(f"psi[{x};{y}]", SCALAR,
                             lambda K: support(K, x) + support(K, y) - support(K, s), 1, None, False)


def parallel_volume_valuation(C, label: str = "C") -> ValuationOperator:
    """``K -> vol(K + C)``."""
    return ValuationOperator(f"vol(K+{label})", SCALAR,
                             lambda K: body_volume(minkowski_sum(K, C)), None, None, False)


def intrinsic_valuation(i: int) -> ValuationOperator:
    """``V_i``: exact bracket formula on zonotopes, face angles on polytopes."""
    from .mixed import intrinsic_volumes_angles

    def evaluator(K):
        if isinstance(K, Zonotope):
            return zonotope_intrinsic_volume(K, i)
        return intrinsic_volumes_angles(list(as_polytope(K).vertices))[i]

    return ValuationOperator(f"V_{i}", SCALAR, evaluator, i, EVEN, True)


def mixed_functional_valuation(i: int, C: Zonotope, label: str = "C") -> ValuationOperator:
    """``K -> V(K[i], C[n-i])``; even because zonotopes are centrally symmetric."""
    from .mixed import MixedVolumeSpec, mixed_volume

    n = C.dim
    return ValuationOperator(f"V(K[{i}],{label}[{n - i}])", SCALAR,
                             lambda K: mixed_volume(MixedVolumeSpec(((K, i), (C, n - i)))),
                             i, EVEN, False)
