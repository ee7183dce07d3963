"""Command-line entry point: ``python -m minkval {compute,verify} ...``.

Exit codes: 0 on success or a passing report, 1 if a report records a
violation, 2 on malformed input (the diagnostic names the offending field).
"""
from __future__ import annotations

import argparse
import json
import os
import sys
from fractions import Fraction

from .bodies import (
    BodyError,
    Zonotope,
    body_to_json,
    body_volume,
    dimension,
    load_body,
    measure_calibration,
)
from .kernel import direction_set, format_scalar
from .mixed import MixedVolumeSpec, intrinsic_volume, mixed_volume, mixed_volume_route
from .suites import SUITES, RunConfig, run_suite
from .valuations import constant_klain, klain_invert, projection_body, steiner_point

EXIT_OK, EXIT_VIOLATION, EXIT_INPUT = 0, 1, 2

COMPUTE_KINDS = ("volume", "mixed-volume", "intrinsic", "projection-body", "steiner-point",
                 "klain-invert")


class InputError(Exception):
    """Malformed command-line input."""


def _add_common(p: argparse.ArgumentParser) -> None:
    p.add_argument("--n", type=int, default=None, help="ambient dimension (2..4)")
    p.add_argument("--arith", choices=("exact", "float"), default="exact")
    p.add_argument("--tol", type=float, default=1e-9)
    p.add_argument("--ballN", type=int, default=32, help="direction count of the ball zonotope")
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--format", choices=("json", "text"), default=None)
    p.add_argument("--out", default=None, help="write the result to this file")


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="minkval", description=__doc__.splitlines()[0])
    sub = parser.add_subparsers(dest="command", required=True)

    pc = sub.add_parser("compute", help="compute a quantity for bodies given as JSON files")
    pc.add_argument("kind", choices=COMPUTE_KINDS)
    pc.add_argument("bodies", nargs="+", help="body JSON files")
    pc.add_argument("--spec", default=None, help='mixed-volume multiplicities, e.g. "K:1,L:1"')
    pc.add_argument("--i", default=None, help="intrinsic volume index")
    _add_common(pc)

    pv = sub.add_parser("verify", help="run a seeded verification suite")
    pv.add_argument("suite", choices=SUITES)
    pv.add_argument("--pairs", type=int, default=None, help="number of random bodies or pairs")
    pv.add_argument("--operator", default="projection_body",
                    help="operator name, JSON expression, or path to a JSON expression file")
    pv.add_argument("--i", default=None, help="comma-separated indices, e.g. 1,2,3")
    pv.add_argument("--triples", type=int, default=10000, help="sublinearity triples per table")
    _add_common(pv)
    return parser


# ---------------------------------------------------------------------------
# helpers


def _load_bodies(paths):
    bodies = []
    for path in paths:
        if not os.path.exists(path):
            raise InputError(f"bodies: file not found: {path}")
        try:
            bodies.append(load_body(path))
        except BodyError as exc:
            raise InputError(f"{path}: {exc}") from exc
    n = dimension(bodies[0])
    for path, K in zip(paths, bodies):
        if dimension(K) != n:
            raise InputError(f"{path}: dimension {dimension(K)} differs from {n}")
    return bodies


def _parse_indices(text):
    if text is None:
        return None
    try:
        vals = tuple(int(t) for t in str(text).split(",") if t.strip())
    except ValueError as exc:
        raise InputError(f"i: expected comma-separated integers, got {text!r}") from exc
    if not vals:
        raise InputError("i: empty index list")
    return vals


def _parse_spec(text, count):
    if text is None:
        if count == 1:
            return None
        raise InputError("spec: --spec is required for several bodies")
    labels = []
    for item in text.split(","):
        if ":" not in item:
            raise InputError(f"spec: expected LABEL:MULTIPLICITY, got {item!r}")
        label, mult = item.split(":", 1)
        try:
            m = int(mult)
        except ValueError as exc:
            raise InputError(f"spec: multiplicity {mult!r} is not an integer") from exc
        if m < 0:
            raise InputError(f"spec: negative multiplicity for {label}")
        labels.append((label.strip(), m))
    if len(labels) != count:
        raise InputError(f"spec: {len(labels)} labels for {count} body files")
    return labels


def _parse_operator(text):
    if text is None:
        return "projection_body"
    t = text.strip()
    if t.startswith("{"):
        try:
            return json.loads(t)
        except json.JSONDecodeError as exc:
            raise InputError(f"operator: invalid JSON ({exc.msg})") from exc
    if t.endswith(".json"):
        if not os.path.exists(t):
            raise InputError(f"operator: file not found: {t}")
        with open(t) as fh:
            try:
                return json.load(fh)
            except json.JSONDecodeError as exc:
                raise InputError(f"operator: invalid JSON in {t} ({exc.msg})") from exc
    return t


def _emit(text: str, out):
    if out:
        with open(out, "w") as fh:
            fh.write(text if text.endswith("\n") else text + "\n")
    else:
        print(text)


# ---------------------------------------------------------------------------
# commands


def cmd_compute(args) -> int:
    bodies = _load_bodies(args.bodies)
    K = bodies[0]
    n = dimension(K)
    if args.n is not None and args.n != n:
        raise InputError(f"n: --n {args.n} differs from the body dimension {n}")
    exact = args.arith == "exact"
    fmt = args.format or "text"
    payload: dict = {"kind": args.kind, "n": n}
    if args.kind == "volume":
        payload["result"] = body_volume(K)
    elif args.kind == "mixed-volume":
        labels = _parse_spec(args.spec, len(bodies))
        pairs = [(B, 1) for B in bodies] if labels is None else [(B, m) for B, (_, m) in zip(bodies, labels)]
        try:
            spec = MixedVolumeSpec(tuple(pairs))
        except BodyError as exc:
            raise InputError(f"spec: {exc}") from exc
        payload["result"] = mixed_volume(spec)
        payload["route"] = mixed_volume_route(spec)
    elif args.kind == "intrinsic":
        idx = _parse_indices(args.i)
        if idx is None or len(idx) != 1 or not 0 <= idx[0] <= n:
            raise InputError(f"i: need a single index in 0..{n}")
        payload["i"] = idx[0]
        payload["ballN"] = args.ballN
        payload["result"] = intrinsic_volume(K, idx[0], args.ballN, exact)
    elif args.kind == "projection-body":
        payload["result"] = body_to_json(projection_body(K))
    elif args.kind == "steiner-point":
        payload["ballN"] = args.ballN
        payload["result"] = list(steiner_point(K, direction_set(n, args.ballN, exact)))
    elif args.kind == "klain-invert":
        if not all(isinstance(Z, Zonotope) for Z in bodies):
            raise InputError("bodies: klain-invert needs zonotope bodies")
        if not 1 <= len(bodies) <= n:
            raise InputError(f"bodies: need 1..{n} zonotopes")
        payload["result"] = klain_invert(constant_klain(1), bodies)
        payload["klain_function"] = "1"
        payload["measure_calibration"] = measure_calibration(n)
    if fmt == "json":
        _emit(json.dumps(_jsonify(payload), sort_keys=True, indent=2), args.out)
    else:
        res = payload["result"]
        if isinstance(res, dict):
            _emit(json.dumps(_jsonify(res), sort_keys=True), args.out)
        elif isinstance(res, list):
            _emit(" ".join(format_scalar(x) for x in res), args.out)
        else:
            _emit(format_scalar(res), args.out)
    return EXIT_OK


def _jsonify(x):
    if isinstance(x, dict):
        return {k: _jsonify(v) for k, v in x.items()}
    if isinstance(x, list):
        return [_jsonify(v) for v in x]
    if isinstance(x, Fraction):
        return format_scalar(x)
    return x


def cmd_verify(args) -> int:
    try:
        cfg = RunConfig(n=args.n if args.n is not None else 3, arith=args.arith, tol=args.tol,
                        ballN=args.ballN, seed=args.seed, format=args.format or "json",
                        pairs=args.pairs, operator=_parse_operator(args.operator),
                        i=_parse_indices(args.i), triples=args.triples)
    except ValueError as exc:
        raise InputError(str(exc)) from exc
    try:
        report = run_suite(args.suite, cfg)
    except ValueError as exc:  # operator expression or index errors
        raise InputError(str(exc)) from exc
    _emit(report.to_json() if cfg.format == "json" else report.to_text(), args.out)
    return EXIT_OK if report.passed else EXIT_VIOLATION


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        if args.command == "compute":
            return cmd_compute(args)
        return cmd_verify(args)
    except (InputError, BodyError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_INPUT


if __name__ == "__main__":
    sys.exit(main())
