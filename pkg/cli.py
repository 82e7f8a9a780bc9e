#!/usr/bin/env python3
"""
Command line interface

    mlt gen theorem2|latin|embed --n N [--p P] [--seed S] [--out FILE]
    mlt check FILE
    mlt solve FILE [--method exact|greedy|augment] [--budget B]
    mlt scan --n N [--generator latin|embed|theorem2] (--count C | --all) [--seed S]
    mlt lemma1 (--family JSON | --exhaustive N | --random COUNT)
    mlt runs [--n N]
    mlt serve [--host H] [--port P]

Exit codes: 0 ok, 1 usage/parse, 2 validation, 3 theorem-violation anomaly.
"""

from typing import List, Optional
import argparse
import json
import logging
import sys

from config import Config
from models.errors import MLTError, ParseError, UsageError, ValidationError
from models.instance_file import InstanceFile, dumps_document
from models.mls import validate
from models.set_family import SetFamily

logger = logging.getLogger("mlt")

EXIT_OK = 0
EXIT_USAGE = 1
EXIT_VALIDATION = 2
EXIT_ANOMALY = 3


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        raise UsageError(message)


def _load_valid(path: str) -> InstanceFile:
    instance = InstanceFile.read(path)
    violations = validate(instance.mls)
    if violations:
        raise ValidationError(f"{path} is not a matroidal Latin square",
                              [v.to_dict() for v in violations])
    return instance


def _emit(doc, as_json: bool, lines: List[str]):
    if as_json:
        sys.stdout.write(dumps_document(doc))
    else:
        for line in lines:
            print(line)


def _fmt_cells(cells) -> str:
    # human output is 1-based like the usual (row, column) notation
    return " ".join(f"({i + 1},{j + 1})" for i, j in cells) or "-"


# =============================================================================
# SUBCOMMANDS
# =============================================================================

def cmd_gen(args) -> int:
    from services.generator_service import generate

    instance = generate(args.kind, args.n, args.p, args.seed)
    violations = validate(instance.mls)
    if violations:
        raise ValidationError("Generated instance failed validation", [v.to_dict() for v in violations])
    if args.out:
        instance.write(args.out)
        print(f"✅ Wrote {args.kind} instance of degree {args.n} to {args.out}", file=sys.stderr)
    else:
        sys.stdout.write(instance.dumps())
    return EXIT_OK


def cmd_check(args) -> int:
    instance = InstanceFile.read(args.file)
    violations = validate(instance.mls)
    doc = {"file": args.file, "n": instance.mls.n, "ok": not violations,
           "violations": [v.to_dict() for v in violations]}
    lines = [f"✅ {args.file}: valid MLS of degree {instance.mls.n}"] if not violations else \
        [f"❌ {args.file}: {len(violations)} violations"] + \
        [f"   {v.kind} {v.index + 1}: rank {v.rank}, deficit {v.deficit}" for v in violations]
    _emit(doc, args.json, lines)
    return EXIT_OK if not violations else EXIT_VALIDATION


def cmd_solve(args) -> int:
    from services.transversal_service import solve

    instance = _load_valid(args.file)
    report = solve(instance.mls, args.method, args.budget, args.seed, args.workers)
    lines = [
        f"method:  {report.method}",
        f"degree:  {report.n}",
        f"size:    {report.size}",
        f"cells:   {_fmt_cells(report.transversal.cells)}",
        f"optimal: {report.optimal}",
        f"nodes:   {report.nodes}",
        f"anomaly: {report.anomaly}",
    ]
    _emit(report.to_dict(), args.json, lines)
    if report.anomaly:
        logger.error("Augmentation needed the exact fallback to reach ceil(2n/3)")
        return EXIT_ANOMALY
    return EXIT_OK


def cmd_scan(args) -> int:
    from services.scan_service import scan

    if not args.all and args.count is None and args.generator != "theorem2":
        raise UsageError("scan needs --count or --all")
    report = scan(args.n, args.generator, args.count, args.all, args.seed, args.budget,
                  args.workers, args.candidate_dir, dump=not args.no_dump)
    doc = report.to_dict()
    if args.store:
        from models.scan_repository import ScanRepository
        from models.sqlalchemy_models import DatabaseEngine

        engine = DatabaseEngine(args.database_url or Config.DATABASE_URL)
        engine.create_tables()
        doc["run_id"] = ScanRepository(engine).record_run(doc, report.instance_documents())

    lines = [
        f"generator: {report.generator}{' (all)' if report.exhaustive else ''}   n={report.n}   seed={report.seed}",
        f"instances: {report.count}",
        f"minimum:   {report.minimum}   (n-1 = {report.n - 1}, ceil(2n/3) = {doc['two_thirds_floor']})",
        f"consistent with n-1 bound: {report.consistent}",
        f"single-element exchanges: {report.relaxed_exchanges}",
    ]
    for c in report.candidates:
        lines.append(f"⚠️  candidate #{c['index']}: maximum {c['exact']} -> {c['file'] or 'not dumped'}")
    for v in report.theorem_violations:
        lines.append(f"❌ theorem violation at #{v['index']}: {v['reason']}")
    for a in report.anomalies:
        lines.append(f"⚠️  anomaly at #{a['index']}: {a['reason']}")
    _emit(doc, args.json, lines)
    return EXIT_ANOMALY if report.theorem_violations or report.anomalies else EXIT_OK


def cmd_lemma1(args) -> int:
    from services import lemma1_service

    repo = None
    if args.store:
        from models.scan_repository import LemmaArtifactRepository
        from models.sqlalchemy_models import DatabaseEngine

        engine = DatabaseEngine(args.database_url or Config.DATABASE_URL)
        engine.create_tables()
        repo = LemmaArtifactRepository(engine)

    if args.family is not None:
        try:
            raw = json.loads(args.family)
            family = SetFamily.of(raw["X"], raw["subsets"])
        except (json.JSONDecodeError, KeyError, TypeError) as e:
            raise ParseError(f"--family must be a JSON object with 'X' and 'subsets': {e}")
        y1, y2, k1, k2 = lemma1_service.decompose(family)
        witness = lemma1_service.find_covered_subset(family)
        doc = dict(family.to_dict(), Y1=sorted(y1), Y2=sorted(y2), k1=k1, k2=k2, witness=witness)
        gaps = [family] if witness is None else []
        lines = [f"Y1 = {sorted(y1)}  (k1={k1})", f"Y2 = {sorted(y2)}  (k2={k2})",
                 f"covered subset: {'X_' + str(witness) if witness else 'none'}"]
    elif args.exhaustive is not None:
        summary = lemma1_service.exhaustive_check(args.exhaustive)
        gaps = [g for entry in summary.values() for g in entry["gaps"]]
        doc = {"exhaustive": args.exhaustive,
               "by_size": {str(k): {"checked": v["checked"], "gaps": len(v["gaps"])} for k, v in summary.items()}}
        lines = [f"|X|={k}: {v['checked']} families, {len(v['gaps'])} without covered subset"
                 for k, v in summary.items()]
    elif args.random is not None:
        seed = Config.seed() if args.seed is None else args.seed
        gaps = lemma1_service.random_check(args.random, args.max_x, seed)
        doc = {"random": args.random, "max_x": args.max_x, "seed": seed, "gaps": len(gaps)}
        lines = [f"{args.random} random families (|X| <= {args.max_x}, seed {seed}): {len(gaps)} without covered subset"]
    else:
        raise UsageError("lemma1 needs one of --family, --exhaustive or --random")

    even_gaps = [g for g in gaps if len(g.X) % 2 == 0]
    if gaps and args.artifact_dir:
        doc["artifact"] = str(lemma1_service.write_gap_artifact(gaps, args.artifact_dir))
    if repo is not None:
        for g in gaps:
            repo.record(g, "odd |X|" if len(g.X) % 2 else "even |X|")
    _emit(doc, args.json, lines)
    return EXIT_ANOMALY if even_gaps else EXIT_OK


def cmd_runs(args) -> int:
    from models.scan_repository import ScanRepository
    from models.sqlalchemy_models import DatabaseEngine

    engine = DatabaseEngine(args.database_url or Config.DATABASE_URL)
    engine.create_tables()
    runs = ScanRepository(engine).list_runs(args.n, args.generator)
    lines = [f"#{r['id']:<4} {r['generator']:<10} n={r['n']:<3} count={r['count']:<7} "
             f"min={r['minimum']}  candidates={r['candidates']}" for r in runs] or ["no stored runs"]
    _emit({"runs": runs}, args.json, lines)
    return EXIT_OK


def cmd_serve(args) -> int:
    from main import create_app

    app = create_app(args.env)
    app.run(debug=app.config.get("DEBUG", False), host=args.host, port=args.port)
    return EXIT_OK


# =============================================================================
# PARSER
# =============================================================================

def build_parser() -> argparse.ArgumentParser:
    parser = _Parser(prog="mlt", description="Matroidal Latin square toolkit")
    parser.add_argument("--log-level", default=None, help="override MLT_LOG_LEVEL")
    sub = parser.add_subparsers(dest="command", parser_class=_Parser)
    sub.required = True

    p = sub.add_parser("gen", help="generate an instance file")
    p.add_argument("kind", choices=["theorem2", "latin", "embed"])
    p.add_argument("--n", type=int, required=True)
    p.add_argument("--p", type=int, default=None)
    p.add_argument("--seed", type=int, default=None)
    p.add_argument("--out", default=None)
    p.set_defaults(func=cmd_gen)

    p = sub.add_parser("check", help="validate an instance file")
    p.add_argument("file")
    p.add_argument("--json", action="store_true")
    p.set_defaults(func=cmd_check)

    p = sub.add_parser("solve", help="find an independent partial transversal")
    p.add_argument("file")
    p.add_argument("--method", choices=["exact", "greedy", "augment"], default="exact")
    p.add_argument("--budget", type=int, default=None, help="node budget, 0 = unbounded")
    p.add_argument("--seed", type=int, default=0, help="greedy scan-order seed")
    p.add_argument("--workers", type=int, default=None)
    p.add_argument("--json", action="store_true")
    p.set_defaults(func=cmd_solve)

    p = sub.add_parser("scan", help="probe the n-1 conjecture over an instance family")
    p.add_argument("--n", type=int, required=True)
    p.add_argument("--generator", choices=["latin", "embed", "theorem2"], default="latin")
    p.add_argument("--count", type=int, default=None)
    p.add_argument("--all", action="store_true", help="enumerate every Latin square of order n")
    p.add_argument("--seed", type=int, default=None)
    p.add_argument("--budget", type=int, default=None)
    p.add_argument("--workers", type=int, default=None)
    p.add_argument("--candidate-dir", default=None)
    p.add_argument("--no-dump", action="store_true")
    p.add_argument("--store", action="store_true", help="record the run in the scan store")
    p.add_argument("--database-url", default=None)
    p.add_argument("--json", action="store_true")
    p.set_defaults(func=cmd_scan)

    p = sub.add_parser("lemma1", help="covered-subset witness for set families")
    p.add_argument("--family", default=None, help='JSON like {"X": [1,2,3], "subsets": [[1,2],[2,3]]}')
    p.add_argument("--exhaustive", type=int, default=None, metavar="MAX_X")
    p.add_argument("--random", type=int, default=None, metavar="COUNT")
    p.add_argument("--max-x", type=int, default=9)
    p.add_argument("--seed", type=int, default=None)
    p.add_argument("--artifact-dir", default=None)
    p.add_argument("--store", action="store_true")
    p.add_argument("--database-url", default=None)
    p.add_argument("--json", action="store_true")
    p.set_defaults(func=cmd_lemma1)

    p = sub.add_parser("runs", help="list stored scan runs")
    p.add_argument("--n", type=int, default=None)
    p.add_argument("--generator", default=None)
    p.add_argument("--database-url", default=None)
    p.add_argument("--json", action="store_true")
    p.set_defaults(func=cmd_runs)

    p = sub.add_parser("serve", help="run the JSON HTTP API")
    p.add_argument("--host", default="127.0.0.1")
    p.add_argument("--port", type=int, default=5000)
    p.add_argument("--env", default=Config.FLASK_ENV)
    p.set_defaults(func=cmd_serve)
    return parser


def main(argv: Optional[List[str]] = None) -> int:
    try:
        args = build_parser().parse_args(argv)
        logging.basicConfig(level=(args.log_level or Config.LOG_LEVEL).upper(), format=Config.LOG_FORMAT)
        return args.func(args)
    except MLTError as e:
        logger.error(f"{e.label}: {e.message}")
        if isinstance(e, ValidationError):
            for v in e.violations:
                print(f"   {v['kind']} {v['index'] + 1}: rank {v['rank']}, deficit {v['deficit']}",
                      file=sys.stderr)
        return e.exit_code
    except Exception as e:
        logger.exception(f"Unexpected error: {e}")
        return EXIT_USAGE


if __name__ == "__main__":
    sys.exit(main())
