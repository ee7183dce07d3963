"""Seeded verification suites shared by the CLI, the scripts and the acceptance tests."""
from __future__ import annotations

import math
import random
from dataclasses import asdict, dataclass, field
from fractions import Fraction
from typing import Optional

from .bodies import (
    Polytope,
    Zonotope,
    ball_normalization,
    ball_zonotope,
    body_volume,
    lazy_sum,
    measure_calibration,
    random_polytope,
    random_zonotope,
    scale,
    zonotope_vertices,
)
from .inequalities import (
    check_bm_general,
    check_bm_quermass,
    check_durch_identity,
    check_main_inequality,
    check_minkowski_inequality,
    check_projection_symmetry,
    homothety_probe,
)
from .kernel import Halfspace, direction_set, dot, is_exact
from .mixed import (
    MixedVolumeSpec,
    check_component_nonnegativity,
    homogeneous_components,
    intrinsic_volumes_angles,
    mixed_volume_interpolation,
    mixed_volume_zonotopes,
    quermassintegral,
    steiner_volume_polynomial,
)
from .report import EQ, GEQ, InequalityCase, VerificationReport
from .valuations import (
    BODY,
    OperatorContext,
    ValuationOperator,
    bivariate_decompose,
    certify_support_function,
    constant_klain,
    intrinsic_valuation,
    klain_callable,
    klain_invert,
    klain_table,
    mixed_functional_valuation,
    operator_from_expression,
    parallel_volume_valuation,
    refit_consistent,
    steiner_decompose,
    support_triple_valuation,
    valuation_property_check,
)

SUITES = ("steiner", "symmetry", "durch", "bm", "main", "valuation-property", "klain",
          "mixed", "steiner-volume", "bivariate", "components")


@dataclass
class RunConfig:
    n: int = 3
    arith: str = "exact"
    tol: float = 1e-9
    ballN: int = 32
    seed: int = 0
    format: str = "json"
    pairs: Optional[int] = None
    operator: object = "projection_body"
    i: Optional[tuple] = None
    triples: int = 10000

    def __post_init__(self):
        if self.n not in (2, 3, 4):
            raise ValueError(f"n: dimension {self.n} outside 2..4")
        if self.arith not in ("exact", "float"):
            raise ValueError(f"arith: expected 'exact' or 'float', got {self.arith!r}")
        if self.ballN % 2 or self.ballN < 2 * self.n:
            raise ValueError(f"ballN: need an even count >= 2n, got {self.ballN}")
        if self.tol <= 0:
            raise ValueError("tol: must be positive")
        if self.format not in ("json", "text"):
            raise ValueError(f"format: expected 'json' or 'text', got {self.format!r}")
        if self.pairs is not None and self.pairs < 1:
            raise ValueError("pairs: must be positive")

    @property
    def exact(self) -> bool:
        return self.arith == "exact"

    def snapshot(self, **extra) -> dict:
        snap = {"n": self.n, "ballN": self.ballN, "tol": self.tol, "arith": self.arith,
                "seed": self.seed}
        snap.update(extra)
        return snap

    def context(self) -> OperatorContext:
        return OperatorContext(self.n, self.ballN, self.exact)


def _new_report(suite: str, cfg: RunConfig, **extra) -> VerificationReport:
    rep = VerificationReport(suite, cfg.snapshot(**extra))
    rep.info["measure_calibration"] = measure_calibration(cfg.n)
    return rep


def _prep(K, exact: bool):
    """Float copies of rational bodies for float-mode runs."""
    if exact:
        return K
    if isinstance(K, Polytope):
        return Polytope(tuple(tuple(float(x) for x in v) for v in K.vertices))
    if isinstance(K, Zonotope):
        return Zonotope(tuple(float(x) for x in K.center),
                        tuple(tuple(float(x) for x in g) for g in K.generators))
    return K


def _operator(cfg: RunConfig) -> ValuationOperator:
    return operator_from_expression(cfg.operator, cfg.context())


def _random_translation(rng: random.Random, n: int):
    return tuple(Fraction(rng.randint(-64, 64), 64) for _ in range(n))


def _sample_dirs(cfg: RunConfig):
    return direction_set(cfg.n, 8 * cfg.n, cfg.exact)


# ---------------------------------------------------------------------------


def suite_steiner(cfg: RunConfig, count: int | None = None) -> VerificationReport:
    """Polynomial decomposition, exact refit and sublinearity of every coefficient."""
    rng = random.Random(cfg.seed)
    Phi = _operator(cfg)
    count = count or cfg.pairs or 3
    dirs = _sample_dirs(cfg)
    rep = _new_report("steiner", cfg, operator=Phi.name, triples=cfg.triples)
    certified = 0
    tables = 0
    for k in range(count):
        K = _prep(random_polytope(rng, cfg.n), cfg.exact)
        for zname, Z in (("ball", ball_zonotope(cfg.n, cfg.ballN, cfg.exact)),
                         ("zonotope", _prep(random_zonotope(rng, cfg.n), cfg.exact))):
            dec = steiner_decompose(Phi, K, Z, dirs)
            tag = f"K{k}-{zname}"
            rep.add(InequalityCase(f"{tag} refit", int(not refit_consistent(dec, Phi)), 0, EQ, cfg.tol))
            rep.add(InequalityCase(f"{tag} reproduces", int(not dec.reproduces()), 0, EQ, cfg.tol))
            for j in range(cfg.n + 1):
                tables += 1
                coef = dec.coefficient(j)
                certified += coef.as_zonotope() is not None
                sub = certify_support_function(coef, dirs, cfg.triples, seed=rng.randrange(2 ** 31),
                                               tol=cfg.tol, name=f"{tag} h_{j}")
                rep.extend(sub)
    rep.info.update({"coefficient_tables": tables, "certified_zonotopes": certified})
    return rep


def suite_symmetry(cfg: RunConfig, count: int | None = None) -> VerificationReport:
    rng = random.Random(cfg.seed)
    count = count or cfg.pairs or 20
    rep = _new_report("symmetry", cfg)
    for k in range(count):
        K = _prep(random_polytope(rng, cfg.n), cfg.exact)
        L = _prep(random_polytope(rng, cfg.n), cfg.exact)
        rep.extend(check_projection_symmetry(K, L, tol=cfg.tol, name=f"pair{k}"))
    return rep


def _i_values(cfg: RunConfig, j: int, top: int):
    if cfg.i:
        return tuple(cfg.i)
    return tuple(range(1, top + 1))


def suite_durch(cfg: RunConfig, count: int | None = None) -> VerificationReport:
    rng = random.Random(cfg.seed)
    Phi = _operator(cfg)
    count = count or cfg.pairs or 1
    rep = _new_report("durch", cfg, operator=Phi.name)
    for k in range(count):
        K = _prep(random_polytope(rng, cfg.n), cfg.exact)
        L = _prep(random_polytope(rng, cfg.n), cfg.exact)
        for i in _i_values(cfg, Phi.degree, Phi.degree + 1):
            sub = check_durch_identity(Phi, K, L, i, cfg.ballN, cfg.exact, cfg.tol)
            rep.extend(sub, prefix=f"pair{k} ")
    return rep


def suite_bm(cfg: RunConfig, count: int | None = None) -> VerificationReport:
    rng = random.Random(cfg.seed)
    n = cfg.n
    count = count or cfg.pairs or 3
    rep = _new_report("bm", cfg)
    for k in range(count):
        K = _prep(random_polytope(rng, n), cfg.exact)
        L = _prep(random_polytope(rng, n), cfg.exact)
        C = [_prep(random_zonotope(rng, n), cfg.exact) for _ in range(max(0, n - 2))]
        for i in range(n - 1):
            rep.extend(check_minkowski_inequality(K, L, i, cfg.ballN, cfg.exact, cfg.tol,
                                                  name=f"minkowski pair{k} i={i}"))
        for i in range(n):
            rep.extend(check_bm_quermass(K, L, i, cfg.ballN, cfg.exact, cfg.tol,
                                         name=f"bm-quermass pair{k} i={i}"))
        for size in range(len(C) + 1):
            rep.extend(check_bm_general(K, L, C[:size], cfg.ballN, cfg.exact, cfg.tol,
                                        name=f"bm-general pair{k} |C|={size}"))
        lam = Fraction(rng.randint(1, 6), 2)
        x = _random_translation(rng, n)
        for i in range(n - 1):
            rep.extend(homothety_probe(
                lambda A, B, i=i: check_minkowski_inequality(A, B, i, cfg.ballN, cfg.exact, cfg.tol,
                                                             name=f"minkowski pair{k} i={i}"), K, lam, x))
        for i in range(n):
            rep.extend(homothety_probe(
                lambda A, B, i=i: check_bm_quermass(A, B, i, cfg.ballN, cfg.exact, cfg.tol,
                                                    name=f"bm-quermass pair{k} i={i}"), K, lam, x))
    return rep


HOMOTHETY_FACTORS = (Fraction(1, 2), Fraction(1), Fraction(3))


def suite_main(cfg: RunConfig, count: int | None = None, probes: int = 1) -> VerificationReport:
    rng = random.Random(cfg.seed)
    Phi = _operator(cfg)
    n = cfg.n
    count = count or cfg.pairs or 5
    rep = _new_report("main", cfg, operator=Phi.name)
    ivals = _i_values(cfg, Phi.degree, min(Phi.degree + 1, n))
    for k in range(count):
        K = _prep(random_polytope(rng, n), cfg.exact)
        L = _prep(random_polytope(rng, n), cfg.exact)
        for i in ivals:
            rep.extend(check_main_inequality(Phi, K, L, i, cfg.ballN, cfg.exact, cfg.tol, name=f"pair{k}"))
        if k < probes:
            # equality on homothets; the first pair also probes the smoothed body K + B_N
            bases = [(f"pair{k}", K)]
            if k == 0:
                bases.append((f"pair{k}+B", lazy_sum(K, ball_zonotope(n, cfg.ballN, cfg.exact))))
            for label, base in bases:
                for lam in HOMOTHETY_FACTORS:
                    x = _random_translation(rng, n)
                    for i in ivals:
                        rep.extend(homothety_probe(
                            lambda A, B, i=i, label=label: check_main_inequality(
                                Phi, A, B, i, cfg.ballN, cfg.exact, cfg.tol, name=label), base, lam, x))
    return rep


def _random_split(rng: random.Random, P: Polytope) -> Halfspace:
    n = P.dim
    while True:
        normal = tuple(rng.randint(-4, 4) for _ in range(n))
        if any(normal):
            break
    vals = sorted(dot(normal, v) for v in P.vertices)
    lo, hi = vals[0], vals[-1]
    t = Fraction(rng.randint(1, 7), 8)
    return Halfspace(normal, lo + t * (hi - lo))


def coefficient_operator(Phi: ValuationOperator, Z: Zonotope, j: int) -> ValuationOperator:
    """``K -> Phi_Z^{(j)}(K)`` as a support-type function."""
    return ValuationOperator(f"{Phi.name}^({j})", BODY,
                             lambda K: steiner_decompose(Phi, K, Z).coefficient(j), None, None, False)


def suite_valuation_property(cfg: RunConfig, count: int | None = None) -> VerificationReport:
    rng = random.Random(cfg.seed)
    Phi = _operator(cfg)
    n = cfg.n
    count = count or cfg.pairs or 5
    Z = ball_zonotope(n, cfg.ballN, cfg.exact)
    ops = [Phi] + [coefficient_operator(Phi, Z, j) for j in range(n + 1)]
    dirs = _sample_dirs(cfg)
    rep = _new_report("valuation-property", cfg, operator=Phi.name)
    for k in range(count):
        while True:
            P = random_polytope(rng, n)
            H = _random_split(rng, P)
            vals = [H.value(v) for v in P.vertices]
            if min(vals) < 0 < max(vals):
                break
        for op in ops:
            sub = valuation_property_check(op, P, H, dirs, cfg.tol)
            ok = sub.passed
            worst = max((abs(c.slack) for c in sub.cases), default=0)
            rep.add(InequalityCase(f"P{k} {op.name}", worst, 0 * worst, EQ, cfg.tol,
                                   witnesses={"directions": len(sub.cases), "pass": ok}))
    return rep


def suite_klain(cfg: RunConfig, count: int | None = None) -> VerificationReport:
    """Calibrated inversion against face-angle intrinsic volumes, plus table probes."""
    rng = random.Random(cfg.seed)
    n = cfg.n
    count = count or cfg.pairs or 20
    rep = _new_report("klain", cfg)
    one = constant_klain(1)
    tol = 1e-12
    for k in range(count):
        Z = random_zonotope(rng, n)
        oracle = intrinsic_volumes_angles(list(zonotope_vertices(Z)))
        for i in range(1, n + 1):
            got = klain_invert(one, [Z] * i)
            rep.add(InequalityCase(f"Z{k} V_{i}", got, oracle[i], EQ, tol,
                                   witnesses={"exact": is_exact(got)}))
    # the Klain function of V_i is identically one on rational frames
    for i in range(1, n):
        table = klain_table(intrinsic_valuation(i), n)
        worst = max(abs(float(v) - 1.0) for v in table.entries.values())
        rep.add(InequalityCase(f"table V_{i} == 1", worst, 0.0, EQ, 1e-12, relative=False,
                               witnesses={"frames": len(table.entries)}))
    # mixed symmetry and injectivity probe
    Z1, Z2 = random_zonotope(rng, n), random_zonotope(rng, n)
    rep.add(InequalityCase("symmetric in arguments", klain_invert(one, [Z1, Z2]),
                           klain_invert(one, [Z2, Z1]), EQ, tol))
    # axis box with half-widths 1, 3, 5, ...
    box = Zonotope(tuple(Fraction(0) for _ in range(n)),
                   tuple(tuple(Fraction(2 * r + 1) if r == c else Fraction(0) for c in range(n))
                         for r in range(n)))
    i = n - 1
    phi_a = intrinsic_valuation(i)
    phi_b = mixed_functional_valuation(i, box, "box")
    ta, tb = klain_table(phi_a, n), klain_table(phi_b, n)
    frame = ta.differs_from(tb)
    va = klain_invert(klain_callable(phi_a), [Z1] * i)
    vb = klain_invert(klain_callable(phi_b), [Z1] * i)
    rep.add(InequalityCase("injectivity: tables differ", int(frame is None), 0, EQ, cfg.tol))
    rep.add(InequalityCase("injectivity: values differ", abs(float(va) - float(vb)), 0.0, GEQ,
                           cfg.tol, relative=False))
    rep.add(InequalityCase("inversion reproduces phi_b", float(vb), float(phi_b.evaluate(Z1)), EQ, 1e-9))
    return rep


# ---------------------------------------------------------------------------
# library-level suites


def suite_mixed(cfg: RunConfig, count: int | None = None) -> VerificationReport:
    rng = random.Random(cfg.seed)
    n = cfg.n
    count = count or cfg.pairs or 50
    rep = _new_report("mixed", cfg)
    for k in range(count):
        Zs = [random_zonotope(rng, n) for _ in range(n)]
        rep.add(InequalityCase(f"tuple{k}", mixed_volume_zonotopes(Zs),
                               mixed_volume_interpolation(MixedVolumeSpec.of(*Zs)), EQ, cfg.tol))
        Z = Zs[0]
        rep.add(InequalityCase(f"diagonal{k}", mixed_volume_zonotopes([Z] * n), body_volume(Z), EQ, cfg.tol))
    return rep


def suite_steiner_volume(cfg: RunConfig, count: int | None = None) -> VerificationReport:
    rng = random.Random(cfg.seed)
    n = cfg.n
    count = count or cfg.pairs or 20
    rep = _new_report("steiner-volume", cfg)
    for k in range(count):
        K = random_polytope(rng, n) if k % 2 == 0 else random_zonotope(rng, n)
        poly = steiner_volume_polynomial(K, cfg.ballN, cfg.exact)
        for i in range(n + 1):
            rep.add(InequalityCase(f"K{k} r^{i}", poly.coeffs[i],
                                   math.comb(n, i) * quermassintegral(K, i, cfg.ballN, cfg.exact),
                                   EQ, cfg.tol))
    return rep


def suite_bivariate(cfg: RunConfig, count: int | None = None) -> VerificationReport:
    rng = random.Random(cfg.seed)
    Phi = _operator(cfg)
    n = cfg.n
    count = count or cfg.pairs or 10
    dirs = _sample_dirs(cfg)
    rep = _new_report("bivariate", cfg, operator=Phi.name, triples=cfg.triples)
    for k in range(count):
        Z1, Z2 = random_zonotope(rng, n), random_zonotope(rng, n)
        fit = bivariate_decompose(Phi, Z1, Z2)
        rep.add(InequalityCase(f"pair{k} total degree <= n", int(not fit.degree_bound_holds), 0, EQ, cfg.tol))
        for (a, b), coef in sorted(fit.coefficients.items()):
            rep.extend(certify_support_function(coef, dirs, cfg.triples, seed=rng.randrange(2 ** 31),
                                                tol=cfg.tol, name=f"pair{k} c[{a},{b}]"))
    return rep


def nonnegative_valuations(rng: random.Random, n: int, ballN: int, exact: bool = True) -> list:
    """Five support-triple and five parallel-volume valuations, all non-negative."""
    ops = []
    for _ in range(5):
        x = tuple(Fraction(rng.randint(-8, 8), 4) for _ in range(n))
        y = tuple(Fraction(rng.randint(-8, 8), 4) for _ in range(n))
        ops.append(support_triple_valuation(x, y))
    ops.append(parallel_volume_valuation(ball_zonotope(n, ballN, exact), "B_N"))
    for t in range(4):
        C = random_polytope(rng, n) if t % 2 else random_zonotope(rng, n)
        ops.append(parallel_volume_valuation(C, f"C{t}"))
    return ops


def suite_components(cfg: RunConfig, count: int | None = None) -> VerificationReport:
    rng = random.Random(cfg.seed)
    n = cfg.n
    count = count or cfg.pairs or 20
    ops = nonnegative_valuations(rng, n, cfg.ballN, cfg.exact)
    rep = _new_report("components", cfg, valuations=[op.name for op in ops])
    for k in range(count):
        Z = random_zonotope(rng, n)
        for op in ops:
            rep.extend(check_component_nonnegativity(op, Z, cfg.tol, name=f"Z{k} {op.name}"))
    return rep


RUNNERS = {
    "steiner": suite_steiner,
    "symmetry": suite_symmetry,
    "durch": suite_durch,
    "bm": suite_bm,
    "main": suite_main,
    "valuation-property": suite_valuation_property,
    "klain": suite_klain,
    "mixed": suite_mixed,
    "steiner-volume": suite_steiner_volume,
    "bivariate": suite_bivariate,
    "components": suite_components,
}


def run_suite(name: str, cfg: RunConfig) -> VerificationReport:
    if name not in RUNNERS:
        raise ValueError(f"suite: unknown suite {name!r}")
    return RUNNERS[name](cfg)
