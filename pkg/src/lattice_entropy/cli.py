"""Command line: ``entropy``, ``counterexample`` and ``verify``.

Exit codes: 0 success, 1 verification failure, 2 usage or parse error,
3 invariant violation in the input.
"""
from __future__ import annotations

import argparse
import json
import sys
from fractions import Fraction

from .counterexample import run as run_counterexample
from .entropy import (EXACT, ConvergenceRow, ConvergenceTable, EntropyConfig,
                      EntropyError, Estimate)
from .functors import (FactorMap, FunctorError, ShiftFactor, system_entropy,
                       system_from_json)
from .lattice import LatticeError
from .measured import measured_from_json
from .shifts import (KINDS, ShiftError, ShiftSystem, classical_entropy,
                     shift_entropy_table)
from .suites import SUITES, run_suite

EXIT_OK, EXIT_FAIL, EXIT_USAGE, EXIT_INVARIANT = 0, 1, 2, 3


class UsageError(Exception):
    pass


def _dumps(obj) -> str:
    return json.dumps(obj, sort_keys=True, indent=2, default=float) + "\n"


def load_json(path: str):
    try:
        with open(path, encoding="utf-8") as fh:
            text = fh.read()
    except OSError as exc:
        raise UsageError(f"cannot read {path}: {exc.strerror}") from None
    try:
        return json.loads(text, parse_float=Fraction)
    except json.JSONDecodeError as exc:
        raise UsageError(f"{path}:{exc.lineno}:{exc.colno}: malformed JSON: {exc.msg}") from None


def config_from_args(args, **defaults) -> EntropyConfig:
    kw = dict(defaults)
    if args.base is not None:
        kw["log_base"] = args.base
    if args.max_n is not None:
        kw["folner_max_n"] = args.max_n
    if args.decomp_len is not None:
        kw["decomposition_max_len"] = args.decomp_len
    if args.pool is not None:
        kw["cover_pool_max_size"] = args.pool
    if args.tol is not None:
        kw["tolerance"] = args.tol
    try:
        return EntropyConfig(**kw)
    except ValueError as exc:
        raise UsageError(str(exc)) from None


def emit(args, text: str):
    if args.out:
        with open(args.out, "w", encoding="utf-8") as fh:
            fh.write(text)
    else:
        sys.stdout.write(text)


# -- entropy -----------------------------------------------------------------------

def _finite_table(mdl, dimension: int) -> ConvergenceTable:
    rows = [ConvergenceRow(n, n ** dimension, sup * n ** dimension, sup, cert)
            for n, sup, cert in mdl.windows]
    return ConvergenceTable(rows, Estimate(mdl.value, mdl.certificate))


def cmd_entropy(args) -> int:
    data = load_json(args.system)
    if not isinstance(data, dict):
        raise UsageError(f"{args.system}: expected a JSON object")
    config = config_from_args(args)
    out = {"system": data, "base": config.log_base}
    if data.get("kind") == "finite":
        system = system_from_json(data)
        wanted = {"measure": "psp", "topological": "top"}.get(args.kind)
        if wanted and wanted != system.kind:
            raise UsageError(f"--kind {args.kind} does not match a {system.kind} system")
        mdl = system_entropy(system, config)
        table = _finite_table(mdl, system.action.dimension)
        out["kind"] = system.kind
        out["covers_examined"] = mdl.covers_examined
    else:
        if data.get("kind") not in KINDS:
            raise UsageError(f"unknown system kind {data.get('kind')!r}; "
                             f"expected one of {KINDS + ('finite',)}")
        system = ShiftSystem.from_json(data, args.kind)
        table = shift_entropy_table(system, config)
        out["kind"] = system.mode
        out["classical"] = config.scale(classical_entropy(system))
    table = table.scaled(config)
    out["table"] = table.to_json()["rows"]
    out["final"] = table.limit.value
    out["certificate"] = table.limit.certificate
    out["converged"] = table.converged(config.tolerance)
    if args.format == "json":
        emit(args, _dumps(out))
    else:
        text = table.to_csv()
        text += f"# final={out['final']!r} certificate={out['certificate']}\n"
        if "classical" in out:
            text += f"# classical={out['classical']!r}\n"
        emit(args, text)
    return EXIT_OK


# -- counterexample ----------------------------------------------------------------

def cmd_counterexample(args) -> int:
    try:
        eps = Fraction(args.epsilon)
    except (ValueError, ZeroDivisionError):
        raise UsageError(f"epsilon {args.epsilon!r} is not a number") from None
    if not 0 < eps < Fraction(1, 2):
        raise UsageError(f"epsilon must lie in (0, 1/2), got {args.epsilon}")
    config = config_from_args(args)
    rep = run_counterexample(eps, config).to_json()
    if args.format == "json":
        emit(args, _dumps(rep))
    else:
        lines = ["quantity,value"]
        for k in ("epsilon", "base", "palm_W", "palm_V", "localized_alpha", "localized_V",
                  "anomaly", "repaired"):
            v = rep[k]
            lines.append(f"{k},{v!r}" if isinstance(v, float) else f"{k},{v}")
        emit(args, "\n".join(lines) + "\n")
    return EXIT_OK


# -- verify ------------------------------------------------------------------------

def _label_map(src_labels, tgt_labels, mapping):
    try:
        return tuple(tgt_labels.index(str(mapping[s])) for s in src_labels)
    except (KeyError, ValueError) as exc:
        raise FunctorError(f"point map is not total or leaves the target: {exc}") from None


def load_pairs(data) -> list:
    if not isinstance(data, dict) or not isinstance(data.get("pairs"), list):
        raise UsageError("pairs file needs a 'pairs' list")
    pairs = []
    for i, item in enumerate(data["pairs"]):
        label = item.get("label", f"pair{i}")
        if "symbol_map" in item:
            src = ShiftSystem.from_json(item["source"])
            tgt = ShiftSystem.from_json(item["target"])
            pairs.append((label, ShiftFactor(src, tgt, {str(k): str(v) for k, v in item["symbol_map"].items()})))
        elif "map" in item:
            src = system_from_json(item["source"])
            tgt = system_from_json(item["target"])
            f = _label_map(src.ground.points, list(tgt.ground.points), item["map"])
            pairs.append((label, FactorMap(src, tgt, f)))
        else:
            raise UsageError(f"pair {label!r} needs 'map' or 'symbol_map'")
    return pairs


def cmd_verify(args) -> int:
    kw = {}
    if args.suite == "axioms" and args.lattice:
        kw["measured"] = measured_from_json(load_json(args.lattice))
    if args.suite == "monotonicity":
        kw["config"] = config_from_args(args, folner_max_n=4)
        if args.pairs:
            kw["pairs"] = load_pairs(load_json(args.pairs))
        kw["seed"] = args.seed
    if args.suite == "ornstein-weiss-preconditions":
        kw.update(seed=args.seed, count=args.count, config=config_from_args(args))
    if args.suite in ("localization-minimality", "ornstein-weiss-preconditions") and args.max_points:
        kw["max_points"] = args.max_points
    if args.suite == "oracle-equivalence" and args.max_points:
        kw["max_points"] = min(args.max_points, 3)
    rep = run_suite(args.suite, **kw)
    if args.format == "json":
        emit(args, _dumps(rep.to_json()))
    else:
        lines = ["suite,passed,checks,failures", f"{rep.suite},{rep.passed},{rep.checks},{len(rep.failures)}"]
        lines += [f"# {f}" for f in rep.failures]
        emit(args, "\n".join(lines) + "\n")
    return EXIT_OK if rep.passed else EXIT_FAIL


# -- parser ------------------------------------------------------------------------

def _common(p):
    p.add_argument("--base", choices=["2", "e"], default=None)
    p.add_argument("--max-n", type=int, default=None)
    p.add_argument("--decomp-len", type=int, default=None)
    p.add_argument("--pool", type=int, default=None)
    p.add_argument("--tol", type=float, default=None)
    p.add_argument("--out", default=None)
    p.add_argument("--format", choices=["csv", "json"], default="json")


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="lattice-entropy",
                                     description="Localized entropy of measured distributive lattices.")
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("entropy", help="convergence table and entropy of a system")
    p.add_argument("--system", required=True, help="system JSON file")
    p.add_argument("--kind", choices=["measure", "topological"], default=None)
    _common(p)
    p.set_defaults(func=cmd_entropy)

    p = sub.add_parser("counterexample", help="entropy with and without localization on three points")
    p.add_argument("--epsilon", default="0.01")
    _common(p)
    p.set_defaults(func=cmd_counterexample)

    p = sub.add_parser("verify", help="run a verification suite")
    p.add_argument("suite", choices=SUITES)
    p.add_argument("--lattice", default=None, help="measured lattice JSON (axioms)")
    p.add_argument("--pairs", default=None, help="factor pairs JSON (monotonicity)")
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--count", type=int, default=20)
    p.add_argument("--max-points", type=int, default=None)
    _common(p)
    p.set_defaults(func=cmd_verify)
    return parser


def main(argv=None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return int(exc.code or 0)
    try:
        return args.func(args)
    except UsageError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except (LatticeError, ShiftError, FunctorError, EntropyError, ValueError) as exc:
        print(f"invariant violation: {exc}", file=sys.stderr)
        return EXIT_INVARIANT


if __name__ == "__main__":
    sys.exit(main())
