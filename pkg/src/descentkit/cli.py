"""``descentkit`` command line: validate, descend, classify, gallery, oracle.

Exit codes: 0 success, 1 hypothesis or validation failure, 2 parse error,
3 descent failure, 4 budget exceeded.
"""

from __future__ import annotations

import argparse
import sys
import time
from pathlib import Path
from typing import Any

from . import __version__, kernels
from .algebra import validate_algebra, validate_algebra_map
from .config import Config
from .descent import build_context
from .errors import (
    AlgebraMismatch,
    BadFamilySpec,
    BudgetExceeded,
    DescentKitError,
    HypothesisError,
    ParseError,
)
from .field import make_field
from .gallery import decide_extended_oracle, enumerate_modules, parse_family
from .io import Loader, algebra_to_json, dumps, file_digest, map_to_json, module_to_json, write_json
from .module import base_change, regular_module, trivial_module, validate_module, validate_module_map
from .reports import descent_report, discrepancy

EXIT_OK, EXIT_INVALID, EXIT_PARSE, EXIT_DESCENT, EXIT_BUDGET = 0, 1, 2, 3, 4


class Context:
    """Inputs resolved from ``--context DIR`` or the explicit file flags."""

    def __init__(self, args):
        d = Path(args.context) if getattr(args, "context", None) else None
        self.a_path = Path(args.algebra_a) if args.algebra_a else (d / "A.json" if d else None)
        self.b_path = Path(args.algebra_b) if args.algebra_b else (d / "B.json" if d else None)
        self.f_path = Path(args.map) if args.map else (d / "f.json" if d else None)
        if not (self.a_path and self.b_path and self.f_path):
            raise ParseError("give --context DIR or all of --algebra-a, --algebra-b, --map")
        self.loader = Loader()
        self.A = self.loader.algebra(self.a_path)
        self.B = self.loader.algebra(self.b_path)
        self.f = self.loader.algebra_map(self.f_path)
        if not (self.f.source.same_structure(self.A) and self.f.target.same_structure(self.B)):
            raise ParseError("map source/target do not match the given algebras")
        self.ctx = build_context(self.A, self.B, self.f)

    def digests(self) -> dict[str, str]:
        return {
            "A": file_digest(self.a_path),
            "B": file_digest(self.b_path),
            "f": file_digest(self.f_path),
        }


def _config(args) -> Config:
    cfg = Config.from_env()
    if getattr(args, "retries", None) is not None:
        cfg = cfg.with_(retry_bound=args.retries)
    if getattr(args, "seed", None) is not None:
        cfg = cfg.with_(seed=args.seed)
    return cfg


def _run_report(command: str, cfg: Config, inputs: dict, payload: Any, args, started: float) -> dict:
    rep = {
        "tool": "descentkit",
        "version": __version__,
        "command": command,
        "backend": kernels.BACKEND,
        "inputs": inputs,
        "seed": cfg.seed,
        "rng": "xorshift64*",
        "config": cfg.to_json(),
        "payload": payload,
    }
    if getattr(args, "timing", False):
        rep["timing"] = {"seconds": round(time.perf_counter() - started, 6)}
    return rep


def _emit(args, report: dict) -> None:
    text = dumps(report)
    out = getattr(args, "out", "-") or "-"
    if out == "-":
        sys.stdout.write(text)
    else:
        Path(out).parent.mkdir(parents=True, exist_ok=True)
        Path(out).write_text(text, encoding="utf-8")


def _error(args, command: str, exc: Exception, code: int) -> int:
    payload = {"error": type(exc).__name__, "message": str(exc)}
    if isinstance(exc, HypothesisError):
        payload["failed_check"] = exc.check
        payload["checks"] = exc.checks
    report = {"tool": "descentkit", "version": __version__, "command": command, "payload": payload}
    # gallery's --out names a directory, so its errors go to stdout too
    if command == "gallery" or getattr(args, "out", "-") in ("-", None):
        sys.stdout.write(dumps(report))
    else:
        _emit(args, report)
    print(f"descentkit {command}: {type(exc).__name__}: {exc}", file=sys.stderr)
    return code


def _exit_for(exc: Exception) -> int:
    if isinstance(exc, (ParseError, BadFamilySpec)):
        return EXIT_PARSE
    if isinstance(exc, BudgetExceeded):
        return EXIT_BUDGET
    return EXIT_INVALID


# ------------------------------------------------------------------ commands


def cmd_validate(args) -> int:
    started = time.perf_counter()
    cfg = _config(args)
    loader = Loader()
    rows = []
    code = EXIT_OK
    for p in args.paths:
        row: dict[str, Any] = {"path": str(p)}
        try:
            kind, obj = loader.any(p)
            row["kind"] = kind
            if kind == "algebra":
                rep = validate_algebra(obj)
            elif kind == "module":
                rep = validate_module(obj)
            elif kind == "algebra_map":
                rep = validate_algebra_map(obj)
            else:
                rep = validate_module_map(obj)
            row["valid"] = rep.ok
            row["violations"] = rep.to_json()
            if not rep.ok:
                code = max(code, EXIT_INVALID)
        except ParseError as exc:
            row["kind"] = "unknown"
            row["valid"] = False
            row["error"] = str(exc)
            code = EXIT_PARSE
        rows.append(row)
    _emit(args, _run_report("validate", cfg, {}, {"files": rows}, args, started))
    return code


def cmd_descend(args) -> int:
    started = time.perf_counter()
    cfg = _config(args)
    try:
        c = Context(args)
        n = c.loader.module(args.module)
        if not n.algebra.same_structure(c.B):
            raise AlgebraMismatch("module is not over B")
        rep = validate_module(n)
        if not rep.ok:
            raise ParseError(f"module is invalid: {rep.first().message}")
    except DescentKitError as exc:
        return _error(args, "descend", exc, _exit_for(exc))
    a_ref = _relative(c.a_path, Path(args.out).parent if args.out not in (None, "-") else Path.cwd())
    payload, outcome, _ = descent_report(c.ctx, n, cfg, a_ref, oracle=not args.no_oracle)
    inputs = c.digests()
    inputs["module"] = file_digest(args.module)
    _emit(args, _run_report("descend", cfg, inputs, payload, args, started))
    return EXIT_OK if payload["outcome"] == "certificate" else EXIT_DESCENT


def _relative(target: Path, base: Path) -> str:
    try:
        return str(Path(target).resolve().relative_to(base.resolve()))
    except ValueError:
        return str(Path(target).resolve())


def cmd_classify(args) -> int:
    started = time.perf_counter()
    cfg = _config(args)
    try:
        c = Context(args)
    except DescentKitError as exc:
        return _error(args, "classify", exc, _exit_for(exc))
    rows = []
    mdir = Path(args.modules)
    files = sorted(mdir.glob("*.json")) if mdir.is_dir() else []
    for p in files:
        row: dict[str, Any] = {"file": p.name, "digest": file_digest(p)}
        try:
            n = c.loader.module(p)
            if not n.algebra.same_structure(c.B):
                raise AlgebraMismatch("module is not over B")
            vrep = validate_module(n)
            if not vrep.ok:
                raise ParseError(f"invalid module: {vrep.first().message}")
            payload, _, _ = descent_report(c.ctx, n, cfg, "A.json", oracle=args.oracle == "on")
            row.update({
                "dim": n.dim,
                "criterion_free": payload["criterion"]["free"],
                "outcome": payload["outcome"],
                "failed_step": payload.get("failed_step"),
                "oracle": payload["oracle"],
                "discrepancy": payload["discrepancy"],
            })
        except DescentKitError as exc:
            row["error"] = type(exc).__name__
            row["message"] = str(exc)
        rows.append(row)
    rows.sort(key=lambda r: r["digest"])
    ok_rows = [r for r in rows if "error" not in r]
    summary = {
        "modules": len(rows),
        "errors": len(rows) - len(ok_rows),
        "criterion_free": sum(1 for r in ok_rows if r["criterion_free"]),
        "certificates": sum(1 for r in ok_rows if r["outcome"] == "certificate"),
        "oracle_extended": sum(1 for r in ok_rows if r["oracle"] == "yes"),
        "discrepancies": sum(1 for r in ok_rows if r["discrepancy"]),
    }
    payload = {
        "rows": rows,
        "summary": summary,
        "extended": sorted(r["file"] for r in ok_rows if r["outcome"] == "certificate"),
    }
    _emit(args, _run_report("classify", cfg, c.digests(), payload, args, started))
    return EXIT_OK


def cmd_gallery(args) -> int:
    started = time.perf_counter()
    cfg = _config(args)
    try:
        fld = make_field(args.field) if args.field else None
        spec = parse_family(args.family, fld)
        A, B, f = spec.build()
    except DescentKitError as exc:
        return _error(args, "gallery", exc, _exit_for(exc))
    out = Path(args.out)
    write_json(out / "A.json", algebra_to_json(A))
    write_json(out / "B.json", algebra_to_json(B))
    write_json(out / "f.json", map_to_json(f.matrix, B.field, "A.json", "B.json"))
    files = ["A.json", "B.json", "f.json"]
    starters = [("B", regular_module(B)), ("k", trivial_module(B))]
    if B.field.is_finite:
        for i, m in enumerate(enumerate_modules(A, args.starter_dim, cfg)):
            bc, _ = base_change(f, m)
            starters.append((f"ext{i}", bc))
    for name, m in starters:
        rel = f"modules/{name}.json"
        obj = module_to_json(m, "../B.json")
        obj.pop("name", None)
        write_json(out / rel, obj)
        files.append(rel)
    payload = {"family": args.family, "dir": str(out), "files": files}
    report = _run_report("gallery", cfg, {}, payload, args, started)
    sys.stdout.write(dumps(report))
    return EXIT_OK


def cmd_oracle(args) -> int:
    started = time.perf_counter()
    cfg = _config(args)
    try:
        c = Context(args)
        mods = enumerate_modules(c.B, args.max_dim, cfg)
    except BudgetExceeded as exc:
        return _error(args, "oracle", exc, EXIT_BUDGET)
    except DescentKitError as exc:
        return _error(args, "oracle", exc, _exit_for(exc))
    rows = []
    try:
        for m in mods:
            payload, outcome, orc = descent_report(c.ctx, m, cfg, "A.json", oracle=True)
            rows.append({
                "module": m.name,
                "dim": m.dim,
                "action": module_to_json(m, "B.json")["action"],
                "criterion_free": payload["criterion"]["free"],
                "outcome": payload["outcome"],
                "failed_step": payload.get("failed_step"),
                "verified": payload.get("verified"),
                "oracle": payload["oracle"],
                "oracle_M": module_to_json(orc.M, "A.json") if orc is not None and orc.M is not None else None,
                "discrepancy": payload["discrepancy"],
            })
    except BudgetExceeded as exc:
        return _error(args, "oracle", exc, EXIT_BUDGET)
    cert_set = sorted(r["module"] for r in rows if r["outcome"] == "certificate")
    ext_set = sorted(r["module"] for r in rows if r["oracle"] == "yes")
    payload = {
        "max_dim": args.max_dim,
        "classes": len(rows),
        "rows": rows,
        "certificate_set": cert_set,
        "oracle_extended_set": ext_set,
        "sets_agree": cert_set == ext_set,
        "all_certificates_verify": all(r["verified"] for r in rows if r["outcome"] == "certificate"),
        "discrepancies": [
            {"module": r["module"], "kinds": r["discrepancy"]}
            for r in rows if "criterion_free_but_not_extended" in r["discrepancy"]
        ],
        "other_disagreements": [
            {"module": r["module"], "kinds": r["discrepancy"]}
            for r in rows
            if r["discrepancy"] and r["discrepancy"] != ["criterion_free_but_not_extended"]
        ],
    }
    _emit(args, _run_report("oracle", cfg, c.digests(), payload, args, started))
    return EXIT_OK


# -------------------------------------------------------------------- parser


def _context_flags(p: argparse.ArgumentParser) -> None:
    p.add_argument("--context", help="directory holding A.json, B.json and f.json")
    p.add_argument("--algebra-a", "-a", help="algebra A file")
    p.add_argument("--algebra-b", "-b", help="algebra B file")
    p.add_argument("--map", "-f", help="algebra map A -> B file")


def _common(p: argparse.ArgumentParser) -> None:
    p.add_argument("--out", "-o", default="-", help='output file, "-" for stdout')
    p.add_argument("--seed", type=lambda s: int(s, 0), help="override the search seed")
    p.add_argument("--timing", action="store_true", help="include wall-clock timing in the report")


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="descentkit", description="Descent of modules along maps of local algebras.")
    parser.add_argument("--version", action="version", version=f"descentkit {__version__}")
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("validate", help="check algebra, module and map files")
    p.add_argument("paths", nargs="+")
    _common(p)
    p.set_defaults(func=cmd_validate)

    p = sub.add_parser("descend", help="run the criterion and the descent construction on one module")
    _context_flags(p)
    p.add_argument("--module", "-m", required=True, help="right B-module file")
    p.add_argument("--retries", type=int, help="number of generator lifts to try")
    p.add_argument("--no-oracle", action="store_true", help="skip the brute-force oracle")
    _common(p)
    p.set_defaults(func=cmd_descend)

    p = sub.add_parser("classify", help="tabulate criterion, descent and oracle for a directory of modules")
    _context_flags(p)
    p.add_argument("--modules", required=True, help="directory of module files")
    p.add_argument("--oracle", choices=("on", "off"), default="on")
    p.add_argument("--retries", type=int)
    _common(p)
    p.set_defaults(func=cmd_classify)

    p = sub.add_parser("gallery", help="write a standard extension and starter modules")
    p.add_argument("--family", required=True, help="frobenius:p,a,b | group:Cm<Cn | group:Cn | exterior:a<b")
    p.add_argument("--field", help="field for group and exterior families, e.g. 2 or QQ")
    p.add_argument("--starter-dim", type=int, default=2, help="base-change A-modules up to this dim")
    p.add_argument("--out", "-o", required=True, help="output directory")
    p.add_argument("--seed", type=lambda s: int(s, 0))
    p.add_argument("--timing", action="store_true")
    p.set_defaults(func=cmd_gallery)

    p = sub.add_parser("oracle", help="audit every small B-module against the brute-force oracle")
    _context_flags(p)
    p.add_argument("--max-dim", type=int, required=True)
    p.add_argument("--retries", type=int)
    _common(p)
    p.set_defaults(func=cmd_oracle)
    return parser


def main(argv: list[str] | None = None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return EXIT_PARSE if exc.code not in (0, None) else EXIT_OK
    try:
        return args.func(args)
    except HypothesisError as exc:
        return _error(args, args.command, exc, EXIT_INVALID)
    except DescentKitError as exc:
        return _error(args, args.command, exc, _exit_for(exc))


if __name__ == "__main__":  # pragma: no cover
    sys.exit(main())
