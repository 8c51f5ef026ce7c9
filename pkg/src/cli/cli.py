"""
Command-line front end.

    python -m src.cli.cli verify-table --max-arity 3
    python -m src.cli.cli solve R4 01 01 10
    python -m src.cli.cli ap-check --fn 2:8 --src R4 --dst R4

Exit status: 0 success, 1 verification failure, 2 usage or input error.
"""
import argparse
import json
import logging
import sys
from typing import Optional, Sequence, Tuple

from src.analogy.analogy import (
    POSTULATES,
    check_postulates,
    model_from_registry,
    solve_components,
    solve_vector,
)
from src.boolfun.boolfun import parse_function, serialize
from src.classifier.classifier import ap_check, error_rate, predict_unknown, write_report
from src.classifier.dataset import read_dataset
from src.cli.table import format_table, verify_table
from src.database.database import ResultStore
from src.galois.galois import pol, pol_report
from src.relations.registry import RelationRegistry, load_registry
from src.relations.relations import Constraint, extend_consequent, format_relation
from src.utils.config import Settings, load_settings
from src.utils.errors import AnalogyError, CapabilityError, InputError, TieError
from src.utils.logger import setup_logging

logger = logging.getLogger(__name__)

EXIT_OK = 0
EXIT_FAILED = 1
EXIT_USAGE = 2


def _bits(text: str) -> Tuple[int, ...]:
    if not text or any(ch not in "01" for ch in text):
        raise argparse.ArgumentTypeError(f"{text!r} is not a 0/1 string")
    return tuple(int(ch) for ch in text)


def _emit(text: str):
    sys.stdout.write(text + "\n")


def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--json", action="store_true", help="structured output")
    common.add_argument("--registry", help="relation registry file")

    parser = argparse.ArgumentParser(prog="analogy", description="Analogy-preserving Boolean functions")
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("relations", parents=[common], help="show relations and their extensions")
    p.add_argument("names", nargs="*")

    p = sub.add_parser("check-postulates", parents=[common], help="audit analogy postulates")
    p.add_argument("names", nargs="+")

    p = sub.add_parser("pol", parents=[common], help="enumerate polymorphisms")
    p.add_argument("pairs", nargs="+", metavar="SRC,DST")
    p.add_argument("--arity", type=int, required=True)
    p.add_argument("--raw", action="store_true", help="use DST itself instead of its extension")
    p.add_argument("--cache", help="sqlite result cache")

    p = sub.add_parser("verify-table", parents=[common], help="reproduce the summary table")
    p.add_argument("--max-arity", type=int, default=3)
    p.add_argument("--cache", help="sqlite result cache")

    p = sub.add_parser("ap-check", parents=[common], help="check analogy preservation")
    p.add_argument("--fn", required=True, help="arity:hex table or a function name")
    p.add_argument("--src", required=True)
    p.add_argument("--dst", required=True)

    p = sub.add_parser("error-rate", parents=[common], help="analogical inference error rate")
    p.add_argument("--fn", required=True)
    p.add_argument("--src", required=True)
    p.add_argument("--dst", required=True)
    p.add_argument("--mode", choices=("exact", "sampled"), default="exact")
    p.add_argument("--seed", type=int)
    p.add_argument("--samples", type=int, default=10000)

    p = sub.add_parser("solve", parents=[common], help="solve a : b :: c : x componentwise")
    p.add_argument("name")
    p.add_argument("a", type=_bits)
    p.add_argument("b", type=_bits)
    p.add_argument("c", type=_bits)

    p = sub.add_parser("classify", parents=[common], help="predict unknown labels of a dataset")
    p.add_argument("dataset")
    p.add_argument("--src", required=True)
    p.add_argument("--dst", required=True)
    p.add_argument("--strategy", choices=("first", "majority"), default="majority")
    return parser


def _store(args, settings: Settings) -> Optional[ResultStore]:
    path = getattr(args, "cache", None) or settings.cache_db
    return ResultStore(path) if path else None


def cmd_relations(args, registry: RelationRegistry, settings: Settings) -> int:
    names = args.names or list(registry.names())
    entries = []
    for name in names:
        r = registry.get(name)
        entry = {"name": name, "arity": r.arity, "size": len(r), "matrix": format_relation(r)}
        if r.arity == 4:
            extended = extend_consequent(r)
            entry["extension_size"] = len(extended)
            entry["extension"] = format_relation(extended)
        entries.append(entry)
    if args.json:
        _emit(json.dumps(entries, indent=2, ensure_ascii=False))
        return EXIT_OK
    for entry in entries:
        _emit(f"{entry['name']} (arity {entry['arity']}, {entry['size']} tuples)")
        _emit(entry["matrix"])
        if "extension" in entry:
            _emit(f"{entry['name']}' ({entry['extension_size']} tuples)")
            _emit(entry["extension"])
        _emit("")
    return EXIT_OK


def cmd_check_postulates(args, registry: RelationRegistry, settings: Settings) -> int:
    reports = [check_postulates(model_from_registry(registry, name)) for name in args.names]
    if args.json:
        _emit(json.dumps([r.model_dump() for r in reports], indent=2))
        return EXIT_OK
    for report in reports:
        _emit(report.model)
        for name in POSTULATES:
            if report.verdicts[name]:
                _emit(f"  {name:26s} PASS")
            else:
                witness = "".join(str(b) for b in report.witnesses[name])
                _emit(f"  {name:26s} FAIL  witness {witness}")
    return EXIT_OK


def _parse_pair(text: str) -> Tuple[str, str]:
    parts = text.split(",")
    if len(parts) != 2 or not all(parts):
        raise InputError(f"Expected SRC,DST, got {text!r}")
    return parts[0], parts[1]


def cmd_pol(args, registry: RelationRegistry, settings: Settings) -> int:
    constraints, names = [], []
    for text in args.pairs:
        src, dst = _parse_pair(text)
        r, s = registry.get(src), registry.get(dst)
        if args.raw:
            constraints.append(Constraint(r, s))
            names.append(f"({src},{dst})")
        else:
            constraints.append(Constraint(r, extend_consequent(s)))
            names.append(f"({src},{dst}')")
    store = _store(args, settings)
    try:
        result = pol(constraints, args.arity, store=store, names=names)
    finally:
        if store is not None:
            store.close()
    report = pol_report(result, names)
    if args.json:
        _emit(report.model_dump_json(indent=2))
        return EXIT_OK
    _emit(f"Pol {' '.join(names)} at arity {report.arity}: {report.member_count} members")
    _emit("  " + " ".join(report.members))
    _emit("  " + ", ".join(f"{k}: {v}" for k, v in report.families.items()))
    return EXIT_OK


def cmd_verify_table(args, registry: RelationRegistry, settings: Settings) -> int:
    store = _store(args, settings)
    try:
        verdict = verify_table(args.max_arity, store=store, progress=not args.json)
    finally:
        if store is not None:
            store.close()
    _emit(verdict.model_dump_json(indent=2) if args.json else format_table(verdict))
    return EXIT_OK if verdict.passed else EXIT_FAILED


def cmd_ap_check(args, registry: RelationRegistry, settings: Settings) -> int:
    f = parse_function(args.fn)
    src, dst = model_from_registry(registry, args.src), model_from_registry(registry, args.dst)
    verdict = ap_check(f, src, dst)
    if args.json:
        payload = {"function": serialize(f), "src": src.name, "dst": dst.name, "holds": verdict.holds}
        if verdict.witness is not None:
            payload["columns"] = [list(col) for col in verdict.witness.columns]
            payload["quadruple"] = [list(v) for v in verdict.quadruple]
            payload["image"] = list(verdict.witness.image)
        _emit(json.dumps(payload, indent=2))
    elif verdict.holds:
        _emit(f"PASS {serialize(f)} is analogy-preserving from {src.name} to {dst.name}")
    else:
        w = verdict.witness
        _emit(f"FAIL {serialize(f)} from {src.name} to {dst.name}")
        for name, vector in zip("abcd", verdict.quadruple):
            _emit(f"  {name} = {''.join(map(str, vector))}")
        _emit(f"  image {''.join(map(str, w.image))} is outside {dst.name}'")
    return EXIT_OK if verdict.holds else EXIT_FAILED


def cmd_error_rate(args, registry: RelationRegistry, settings: Settings) -> int:
    f = parse_function(args.fn)
    src, dst = model_from_registry(registry, args.src), model_from_registry(registry, args.dst)
    report = error_rate(f, src, dst, mode=args.mode, seed=args.seed, samples=args.samples)
    if args.json:
        _emit(write_report(report))
        return EXIT_OK
    _emit(f"{report.function} {src.name}->{dst.name} ({report.mode}): "
          f"{report.violations}/{report.solvable} = {report.rate:.6f}")
    _emit(f"  nearest affine {report.nearest_affine}, distance {report.distance}, "
          f"epsilon {report.epsilon:.4f}, 4*epsilon {report.bound:.4f}")
    if report.degenerate:
        _emit("  no solvable quadruples")
    return EXIT_OK


def cmd_solve(args, registry: RelationRegistry, settings: Settings) -> int:
    model = model_from_registry(registry, args.name)
    try:
        found = sorted(solve_vector(model, args.a, args.b, args.c))
        rendered = ["".join(map(str, x)) for x in found]
    except CapabilityError:
        components = solve_components(model, args.a, args.b, args.c)
        rendered = ["".join(str(next(iter(s))) if len(s) == 1 else "*" for s in components)]
    if args.json:
        _emit(json.dumps({"model": model.name, "solutions": rendered}, indent=2))
    elif rendered:
        for line in rendered:
            _emit(line)
    else:
        _emit("no solution")
    return EXIT_OK


def cmd_classify(args, registry: RelationRegistry, settings: Settings) -> int:
    ds = read_dataset(args.dataset)
    src, dst = model_from_registry(registry, args.src), model_from_registry(registry, args.dst)
    batch = predict_unknown(ds, src, dst, args.strategy)
    if args.json:
        _emit(write_report(batch))
        return EXIT_OK
    for p in batch.predictions:
        query = "".join(map(str, p.query))
        shown = str(p.label) if p.outcome == "label" else p.outcome
        _emit(f"{query} {shown}")
    return EXIT_OK


COMMANDS = {
    "relations": cmd_relations,
    "check-postulates": cmd_check_postulates,
    "pol": cmd_pol,
    "verify-table": cmd_verify_table,
    "ap-check": cmd_ap_check,
    "error-rate": cmd_error_rate,
    "solve": cmd_solve,
    "classify": cmd_classify,
}


def run(argv: Optional[Sequence[str]] = None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as e:
        return EXIT_OK if e.code == 0 else EXIT_USAGE
    try:
        settings = load_settings()
        setup_logging(str(settings.log_dir) if settings.log_dir else None, settings.log_level)
        registry = load_registry(args.registry or settings.registry)
        return COMMANDS[args.command](args, registry, settings)
    except TieError as e:
        sys.stderr.write(f"error: {e}\n")
        return EXIT_FAILED
    except AnalogyError as e:
        sys.stderr.write(f"error: {e}\n")
        return EXIT_USAGE


def main():
    sys.exit(run())


if __name__ == "__main__":
    main()
