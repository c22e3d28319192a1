"""Command line front end: ``multchar --spec problem.json``.

Exit codes: 0 success, 2 identity breach or failed verification, 64 malformed
input or unknown suite, 65 band-window overflow, 66 failed precondition.
"""
from __future__ import annotations

import argparse
import json
import sys
import time
from typing import Any, Sequence

from .algebra import AlgebraMismatch, WindowOverflow
from .character import (
    LodaySymbol,
    PreconditionError,
    branch_difference,
    multiplicative_character,
)
from .codec import ProblemSpec, SpecError, encode_complex, parse_spec
from .fredholm import ModuleError
from .verify import SUITES, run_suite

EXIT_OK = 0
EXIT_BREACH = 2
EXIT_PARSE = 64
EXIT_WINDOW = 65
EXIT_PRECONDITION = 66


def _lattice_dict(v) -> dict:
    return {
        "raw": encode_complex(v.raw),
        "representative": encode_complex(v.representative),
        "quotient": v.quotient,
        "coordinate": v.coordinate,
        "direction": "(2πi)^p",
    }


def run_character(spec: ProblemSpec, threads: int = 1) -> tuple[dict, int]:
    sym = LodaySymbol(tuple(spec.symbol))
    rep = multiplicative_character(sym, spec.module, threads)
    tol = spec.tolerances["residual"]
    ok = rep.paths.residual <= tol
    doc = {
        "value": _lattice_dict(rep.value),
        "paths": {
            "path_a": encode_complex(rep.paths.path_a),
            "path_b": encode_complex(rep.paths.path_b),
            "residual": rep.paths.residual,
            "scale": rep.paths.scale,
            "tolerance": tol,
            "identity": "τ(ch(a_0,...,a_(2p-1))) = (-1)^p c_p Σ_SE sgn(s) Tr(Π[P x P, P x P])",
            "passed": ok,
        },
    }
    return doc, EXIT_OK if ok else EXIT_BREACH


def run_branch(spec: ProblemSpec, threads: int = 1) -> tuple[dict, int]:
    sym = LodaySymbol(tuple(spec.symbol))
    tol = spec.tolerances["lattice"]
    rep = branch_difference(sym, spec.branch_index, spec.branch_alt, spec.module, tol=tol,
                            exp_tol=spec.tolerances["exp"], threads=threads)
    doc = {
        "difference": _lattice_dict(rep.difference),
        "nearest_multiple": rep.nearest,
        "distance": rep.distance,
        "tolerance": tol,
        "in_lattice": rep.in_lattice,
        "exp_gap": rep.exp_gap,
        "exp_tolerance": spec.tolerances["exp"],
        "identity": "the change lies in (2πi)^p Z",
    }
    return doc, EXIT_OK if rep.in_lattice else EXIT_BREACH


def run_verify(suite: str, seed: int, tol: float, threads: int = 1, instances: int = 20) -> tuple[dict, int]:
    report = run_suite(suite, seed=seed, instances=instances, tol=tol, threads=threads)
    report.update({"suite": suite, "seed": seed, "tolerance": tol, "instances": instances})
    return report, EXIT_OK if report["passed"] else EXIT_BREACH


def build_parser() -> argparse.ArgumentParser:
    ap = argparse.ArgumentParser(prog="multchar", description=__doc__.splitlines()[0])
    ap.add_argument("--spec", help="problem specification (JSON file, or - for stdin)")
    ap.add_argument("--task", choices=["character", "branch", "verify"], help="override the task named in the problem file")
    ap.add_argument("--suite", help=f"verification suite: {', '.join(SUITES)} or all")
    ap.add_argument("--seed", type=int, default=0, help="seed for randomised verification (default 0)")
    ap.add_argument("--tol", type=float, help="residual tolerance (verify default 1e-10)")
    ap.add_argument("--instances", type=int, help="random instances per verification check (default 20)")
    ap.add_argument("--threads", type=int, default=1, help="worker threads for trace sums (default 1)")
    ap.add_argument("--output", help="write the report here instead of stdout")
    ap.add_argument("--timing", action="store_true", help="include wall-clock timing in the report")
    return ap


def _emit(doc: dict, output: str | None) -> None:
    text = json.dumps(doc, sort_keys=True, indent=2, ensure_ascii=False) + "\n"
    if output:
        with open(output, "w", encoding="utf-8") as fh:
            fh.write(text)
    else:
        sys.stdout.write(text)


def _error(kind: str, message: str, code: int, output: str | None, **extra: Any) -> int:
    doc = {"error": {"kind": kind, "message": message, **extra}, "exit_code": code}
    _emit(doc, output)
    print(f"multchar: {kind}: {message}", file=sys.stderr)
    return code


def _load(path: str) -> Any:
    text = sys.stdin.read() if path == "-" else open(path, encoding="utf-8").read()
    return json.loads(text)


def main(argv: Sequence[str] | None = None) -> int:
    args = build_parser().parse_args(argv)
    start = time.perf_counter()
    try:
        doc = _load(args.spec) if args.spec else {}
    except json.JSONDecodeError as e:
        return _error("parse", f"invalid JSON at line {e.lineno} column {e.colno} (char {e.pos}): {e.msg}",
                      EXIT_PARSE, args.output, line=e.lineno, column=e.colno, position=e.pos)
    except OSError as e:
        return _error("parse", f"cannot read spec: {e}", EXIT_PARSE, args.output)

    task = args.task or (doc.get("task") if isinstance(doc, dict) else None)
    if task is None and not args.spec:
        task = "verify"
    try:
        spec = parse_spec(doc, task)
        if spec.task == "verify":
            suite = args.suite or spec.suite
            if suite != "all" and suite not in SUITES:
                raise SpecError("suite", f"unknown suite {suite!r} ({', '.join(SUITES)}, all)")
            tol = args.tol if args.tol is not None else 1e-10
            instances = args.instances or spec.instances
            report, code = run_verify(suite, args.seed, tol, args.threads, instances)
        else:
            if args.tol is not None:
                spec.tolerances["residual"] = args.tol
            runner = run_character if spec.task == "character" else run_branch
            report, code = runner(spec, args.threads)
            report["task"] = spec.echo
    except SpecError as e:
        return _error("parse", str(e), EXIT_PARSE, args.output, where=e.where)
    except (WindowOverflow,) as e:
        return _error("window-overflow", str(e), EXIT_WINDOW, args.output)
    except (PreconditionError, ModuleError) as e:
        return _error("precondition", str(e), EXIT_PRECONDITION, args.output)
    except (AlgebraMismatch, ValueError) as e:
        return _error("parse", str(e), EXIT_PARSE, args.output)

    report["exit_code"] = code
    if args.timing:
        report["timing"] = {"seconds": time.perf_counter() - start}
    if code == EXIT_BREACH:
        for line in report.get("failures", []) or [report.get("paths", report).get("identity", "")]:
            print(f"multchar: identity violated: {line}", file=sys.stderr)
    _emit(report, args.output)
    return code


if __name__ == "__main__":  # pragma: no cover
    sys.exit(main())
