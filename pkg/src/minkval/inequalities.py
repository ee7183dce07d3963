"""Checks of the projection-body symmetry, the mixed identity between
projection-type valuations and their derivatives, and Brunn-Minkowski type
inequalities for quermassintegrals and valuation images.
"""
from __future__ import annotations

import math
from fractions import Fraction
from typing import Sequence

from .bodies import (
    BodyError,
    ball_zonotope,
    dimension,
    minkowski_sum,
    scale,
    translate,
)
from .kernel import is_exact, to_float
from .mixed import (
    MixedVolumeSpec,
    mixed_volume,
    mixed_volume_interpolation,
    mixed_volume_route,
    quermassintegral,
)
from .report import EQ, GEQ, InequalityCase, VerificationReport
from .valuations import ValuationOperator, lambda_power, projection_body

HOMOTHETY_TOL = 1e-6


def _config(n, ballN, tol, exact, **extra) -> dict:
    cfg = {"n": n, "ballN": ballN, "tol": tol, "arith": "exact" if exact else "float"}
    cfg.update(extra)
    return cfg


def _root(x, p: float) -> float:
    return to_float(x) ** p if to_float(x) > 0 else 0.0


def _quermass_of(X, k: int, ballN: int, exact: bool):
    return quermassintegral(X, k, ballN, exact)


def W_mixed(K, L, i: int, ballN: int, exact: bool = True):
    """``W_i(K, L) = V(K[n-i-1], B_N[i], L)``."""
    n = dimension(K)
    B = ball_zonotope(n, ballN, exact)
    return mixed_volume(MixedVolumeSpec(((K, n - i - 1), (B, i), (L, 1))))


# ---------------------------------------------------------------------------
# symmetry of the projection body


def check_projection_symmetry(K, L, ballN: int | None = None, tol: float = 1e-9,
                              name: str = "pair") -> VerificationReport:
    """``V(Pi K, L[n-1]) = V(Pi L, K[n-1])``, both sides by interpolation."""
    n = dimension(K)
    PK, PL = projection_body(K), projection_body(L)
    lhs = mixed_volume_interpolation(MixedVolumeSpec(((PK, 1), (L, n - 1))))
    rhs = mixed_volume_interpolation(MixedVolumeSpec(((PL, 1), (K, n - 1))))
    alt = mixed_volume(MixedVolumeSpec(((PK, 1), (L, n - 1))))
    rep = VerificationReport("symmetry", _config(n, ballN, tol, is_exact(lhs)))
    rep.add(InequalityCase(name, lhs, rhs, EQ, tol, witnesses={
        "route": "interpolation",
        "cross_check_route": mixed_volume_route(MixedVolumeSpec(((PK, 1), (L, n - 1)))),
        "cross_check_value": alt,
    }))
    return rep


# ---------------------------------------------------------------------------
# mixed identity with derivation powers


def check_durch_identity(Phi: ValuationOperator, K, L, i: int, ballN: int, exact: bool = True,
                         tol: float = 1e-9) -> VerificationReport:
    """``W_{n-i}(K, Phi L) = ((i-1)!/j!) W_{n-1-j}(L, Lambda^{j+1-i} Phi K)``."""
    n = dimension(K)
    j = Phi.degree
    if j is None or not 1 <= i <= j + 1:
        raise ValueError(f"index i = {i} outside 1..j+1 for degree {j}")
    B = ball_zonotope(n, ballN, exact)
    PhiL = Phi.evaluate(L)
    M = lambda_power(Phi, j + 1 - i, ballN, exact).evaluate(K)
    lhs = mixed_volume(MixedVolumeSpec(((K, i - 1), (B, n - i), (PhiL, 1))))
    w = mixed_volume(MixedVolumeSpec(((L, j), (B, n - 1 - j), (M, 1))))
    rhs = Fraction(math.factorial(i - 1), math.factorial(j)) * w
    rep = VerificationReport("durch", _config(n, ballN, tol, exact, operator=Phi.name, i=i, j=j))
    rep.add(InequalityCase(f"i={i}", lhs, rhs, EQ, tol, witnesses={
        "lambda_power": j + 1 - i,
        "relative_error": abs(to_float(lhs - rhs)) / max(abs(to_float(lhs)), 1e-300),
    }))
    return rep


# ---------------------------------------------------------------------------
# Brunn-Minkowski type inequalities


def check_minkowski_inequality(K, L, i: int, ballN: int, exact: bool = True, tol: float = 1e-9,
                               name: str = "pair") -> VerificationReport:
    """``W_i(K, L)^{n-i} >= W_i(K)^{n-i-1} W_i(L)``."""
    n = dimension(K)
    if not 0 <= i <= n - 2:
        raise ValueError(f"index i = {i} outside 0..{n - 2}")
    wkl = W_mixed(K, L, i, ballN, exact)
    wk = _quermass_of(K, i, ballN, exact)
    wl = _quermass_of(L, i, ballN, exact)
    rep = VerificationReport("minkowski", _config(n, ballN, tol, exact, i=i))
    rep.add(InequalityCase(name, wkl ** (n - i), wk ** (n - i - 1) * wl, GEQ, tol))
    return rep


def check_bm_quermass(K, L, i: int, ballN: int, exact: bool = True, tol: float = 1e-9,
                      name: str = "pair") -> VerificationReport:
    """``W_i(K+L)^{1/(n-i)} >= W_i(K)^{1/(n-i)} + W_i(L)^{1/(n-i)}``."""
    n = dimension(K)
    if not 0 <= i <= n - 1:
        raise ValueError(f"index i = {i} outside 0..{n - 1}")
    p = 1.0 / (n - i)
    s = _quermass_of(minkowski_sum(K, L), i, ballN, exact)
    a = _quermass_of(K, i, ballN, exact)
    b = _quermass_of(L, i, ballN, exact)
    rep = VerificationReport("bm-quermass", _config(n, ballN, tol, exact, i=i))
    rep.add(InequalityCase(name, _root(s, p), _root(a, p) + _root(b, p), GEQ, tol))
    return rep


def check_bm_general(K, L, C: Sequence, ballN: int | None = None, exact: bool = True,
                     tol: float = 1e-9, name: str = "pair") -> VerificationReport:
    """``V_i(K+L, C)^{1/(n-i)} >= V_i(K, C)^{1/(n-i)} + V_i(L, C)^{1/(n-i)}`` with ``i = |C|``.

    Here ``V_i(K, C) = V(K[n-i], C_1, ..., C_i)``. No equality case is asserted.
    """
    n = dimension(K)
    i = len(C)
    if i > n - 2:
        raise ValueError(f"|C| = {i} exceeds n - 2")
    p = 1.0 / (n - i)

    def V(X):
        return mixed_volume(MixedVolumeSpec(((X, n - i),) + tuple((c, 1) for c in C)))

    rep = VerificationReport("bm-general", _config(n, ballN, tol, exact, i=i))
    rep.add(InequalityCase(name, _root(V(minkowski_sum(K, L)), p),
                           _root(V(K), p) + _root(V(L), p), GEQ, tol))
    return rep


def check_main_inequality(Phi: ValuationOperator, K, L, i: int, ballN: int, exact: bool = True,
                       tol: float = 1e-9, name: str = "pair") -> VerificationReport:
    """``W_{n-i}(Phi(K+L))^{1/ij} >= W_{n-i}(Phi K)^{1/ij} + W_{n-i}(Phi L)^{1/ij}``."""
    n = dimension(K)
    j = Phi.degree
    if j is None or not 1 <= i <= j + 1 or i > n:
        raise ValueError(f"index i = {i} outside 1..min(j+1, n) for degree {j}")
    p = 1.0 / (i * j)
    vals = [_quermass_of(Phi.evaluate(X), n - i, ballN, exact)
            for X in (minkowski_sum(K, L), K, L)]
    rep = VerificationReport("main", _config(n, ballN, tol, exact, operator=Phi.name, i=i, j=j))
    rep.add(InequalityCase(f"{name} i={i}", _root(vals[0], p), _root(vals[1], p) + _root(vals[2], p),
                           GEQ, tol, witnesses={"W": list(vals)}))
    return rep


def homothety_probe(check, K, lam, x, tol: float = HOMOTHETY_TOL) -> VerificationReport:
    """Run ``check(K, lam K + x)`` and demand equality within ``tol`` (relative)."""
    L = translate(scale(K, lam), x)
    rep = check(K, L)
    out = VerificationReport(rep.suite + "-homothety", dict(rep.config, tol=tol, lam=lam))
    for c in rep.cases:
        out.add(InequalityCase(c.name + f" lam={lam}", c.lhs, c.rhs, EQ, tol,
                               witnesses=dict(c.witnesses, relative_slack=c.relative_slack)))
    return out
