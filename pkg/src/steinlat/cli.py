"""Batch command-line front end.

Three subcommands:

* ``predict``  — combinatorial report only (no group algebra): invariants,
  P-values, V with all applicable closed forms, the P*(c) table, the
  injectivity verdict, and the descending phi chain.
* ``verify``   — builds the lattice and runs the module-structure battery.
* ``sweep``    — iterates verify over a parameter grid and aggregates.

Exit codes: 0 all checks pass, 1 check failure, 2 usage/parameter error,
3 budget exceeded.  Reports are deterministic byte-for-byte for a fixed
configuration; the JSON schema is versioned.
"""

from __future__ import annotations

import argparse
import json
import sys
from importlib import resources

from .galoisring import build_context
from .glgroup import BudgetExceededError, index_GB
from .parabolic import (a10_chain, count_star, count_star_closed,
                        injectivity_verdict, pvalues, star_classes, v_count)

SCHEMA_VERSION = "1"

EXIT_OK = 0
EXIT_CHECK_FAILURE = 1
EXIT_USAGE = 2
EXIT_BUDGET = 3


class UsageError(Exception):
    pass


class _Parser(argparse.ArgumentParser):
    def error(self, message):  # exit 2 on argparse errors
        raise UsageError(message)


# ---------------------------------------------------------------------------
# report assembly


def context_dict(ctx) -> dict:
    return {"n": ctx.n, "q": ctx.q, "p": ctx.p, "ell": ctx.ell,
            "e": ctx.e, "d": ctx.d, "m": ctx.m, "b": ctx.b,
            "s": list(ctx.s), "x": list(ctx.x), "f": ctx.f,
            "precision": ctx.N, "nfloor": ctx.nfloor}


def predict_report(ctx) -> dict:
    vr = v_count(ctx)
    verdict = injectivity_verdict(ctx)
    table = {}
    for c in pvalues(ctx):
        table[str(c)] = sorted(star.partition_string()
                               for star in star_classes(c, ctx))
    witness = None
    if verdict.witness is not None:
        witness = [w.partition_string() for w in verdict.witness]
    chain = [{"label": star.partition_string(), "phi": val}
             for star, val in a10_chain(ctx)]
    return {
        "schema_version": SCHEMA_VERSION,
        "command": "predict",
        "context": context_dict(ctx),
        "pvalues": pvalues(ctx),
        "V": vr.V,
        "V_formulas": {"A": vr.A, "Z": vr.Z, "C": vr.C, "X": vr.X,
                       "Y": vr.Y, "flags": vr.flags},
        "star_count": count_star(ctx),
        "star_count_closed": count_star_closed(ctx),
        "star_table": table,
        "injectivity": {"injective": verdict.injective,
                        "case": verdict.case,
                        "witness": witness},
        "phi_chain": chain,
    }


def _battery(ctx, args):
    # imported lazily: numba compilation is only paid by verify/sweep
    from .modulealg import ModuleAlgebra
    from .steinberg import SteinbergLattice
    SL = SteinbergLattice(ctx, budget_cosets=args.budget_cosets)
    MA = ModuleAlgebra(SL)
    checks = None
    if args.checks:
        checks = [c.strip() for c in args.checks.split(",") if c.strip()]
    rep = MA.verify_structure(checks=checks,
                              dim_budget=args.budget_dim,
                              index_budget=args.budget_index)
    budget_skipped = any(c.status == "skip"
                         and "budget" in c.detail.get("reason", "")
                         for c in rep.checks)
    out = {
        "schema_version": SCHEMA_VERSION,
        "command": "verify",
        "context": context_dict(ctx),
        "filtration_dims": {str(c): list(dims) for c, dims
                            in SL.filtration_dims().items()},
        "checks": [{"name": c.name, "status": c.status,
                    "detail": _jsonable(c.detail)} for c in rep.checks],
        "passed": rep.passed,
    }
    if not budget_skipped:
        out["c_length"] = MA.c_length()
        out["composition_dims"] = MA.composition_dims()
        out["V"] = v_count(ctx).V
        out["star_count"] = count_star(ctx)
    return out, rep.passed, budget_skipped


def verify_report(ctx, args) -> tuple[dict, int]:
    try:
        out, passed, budget_skipped = _battery(ctx, args)
    except BudgetExceededError as exc:
        return ({"schema_version": SCHEMA_VERSION, "command": "verify",
                 "context": context_dict(ctx),
                 "error": f"coset budget exceeded: {exc}"}, EXIT_BUDGET)
    if not passed:
        return out, EXIT_CHECK_FAILURE
    if budget_skipped:
        return out, EXIT_BUDGET
    return out, EXIT_OK


def sweep_report(args) -> tuple[dict, int]:
    ns = _int_list(args.n_list)
    qs = _int_list(args.q_list)
    ells = _int_list(args.ell_list) if args.ell_list else None
    rows = []
    worst = EXIT_OK
    flagged = []
    for n in ns:
        for q in qs:
            cand = ells if ells is not None else _admissible_ells(n, q)
            for ell in cand:
                try:
                    ctx = build_context(n, q, ell,
                                        precision=args.precision)
                except ValueError as exc:
                    if ells is None:
                        continue
                    rows.append({"n": n, "q": q, "ell": ell,
                                 "error": str(exc)})
                    continue
                out, code = verify_report(ctx, args)
                worst = max(worst, code)
                row = {"n": n, "q": q, "ell": ell,
                       "passed": out.get("passed"),
                       "exit": code}
                if "c_length" in out:
                    row["c_length"] = out["c_length"]
                    row["V"] = out["V"]
                    row["star_count"] = out["star_count"]
                    verdict = injectivity_verdict(ctx)
                    if (not verdict.injective
                            and out["c_length"] < out["star_count"]):
                        flagged.append(row | {"note":
                                              "c(L) < |P*| with phi "
                                              "non-injective"})
                rows.append(row)
    return ({"schema_version": SCHEMA_VERSION, "command": "sweep",
             "results": rows, "open_question_flags": flagged},
            worst)


def _jsonable(obj):
    if isinstance(obj, dict):
        return {str(k): _jsonable(v) for k, v in obj.items()}
    if isinstance(obj, (list, tuple)):
        return [_jsonable(v) for v in obj]
    if isinstance(obj, (bool, int, float, str)) or obj is None:
        return obj
    if hasattr(obj, "item"):           # numpy scalar
        return obj.item()
    return str(obj)


def _int_list(text: str) -> list[int]:
    try:
        return [int(t) for t in text.split(",") if t.strip()]
    except ValueError as exc:
        raise UsageError(f"bad integer list {text!r}: {exc}") from exc


def _admissible_ells(n: int, q: int, bound: int = 20) -> list[int]:
    """Primes l <= bound giving a nondegenerate context: l coprime to q
    and e <= n, so that l divides [G:B] and the filtration is
    nontrivial."""
    out = []
    for ell in range(2, bound + 1):
        try:
            ctx = build_context(n, q, ell)
        except ValueError:
            continue
        if ctx.e <= n:
            out.append(ell)
    return out


# ---------------------------------------------------------------------------
# rendering


def render_json(report: dict) -> str:
    return json.dumps(report, indent=2, sort_keys=True) + "\n"


def render_markdown(report: dict) -> str:
    lines = []
    cmd = report.get("command", "?")
    ctx = report.get("context")
    if ctx:
        lines.append(f"# steinlat {cmd}: n={ctx['n']} q={ctx['q']} "
                     f"l={ctx['ell']}")
        lines.append("")
        lines.append("| e | d | m | b | f | precision | floor(n/e) |")
        lines.append("|---|---|---|---|---|-----------|------------|")
        lines.append(f"| {ctx['e']} | {ctx['d']} | {ctx['m']} | {ctx['b']} "
                     f"| {ctx['f']} | {ctx['precision']} | {ctx['nfloor']} |")
        lines.append("")
    if cmd == "predict":
        lines.append(f"P-values: {report['pvalues']}  —  V = {report['V']}, "
                     f"|P*| = {report['star_count']}")
        lines.append("")
        lines.append("| c | P*(c) |")
        lines.append("|---|-------|")
        for c, labels in sorted(report["star_table"].items(),
                                key=lambda kv: int(kv[0])):
            lines.append(f"| {c} | {', '.join(labels)} |")
        lines.append("")
        inj = report["injectivity"]
        lines.append(f"theta injective on P*: **{inj['injective']}** "
                     f"(case: {inj['case']})")
        if inj["witness"]:
            lines.append(f"collision witness: {inj['witness'][0]} vs "
                         f"{inj['witness'][1]}")
        lines.append("")
        lines.append("| step | phi |")
        lines.append("|------|-----|")
        for entry in report["phi_chain"]:
            lines.append(f"| {entry['label']} | {entry['phi']} |")
    elif cmd == "verify":
        if "error" in report:
            lines.append(f"**error**: {report['error']}")
        else:
            dims = report["filtration_dims"]
            lines.append("| c | dim L(c) | dim M(c) |")
            lines.append("|---|----------|----------|")
            for c in sorted(dims, key=int):
                lines.append(f"| {c} | {dims[c][0]} | {dims[c][1]} |")
            lines.append("")
            lines.append("| check | status |")
            lines.append("|-------|--------|")
            for ch in report["checks"]:
                lines.append(f"| {ch['name']} | {ch['status']} |")
            lines.append("")
            if "c_length" in report:
                lines.append(f"c(L) = {report['c_length']}, "
                             f"V = {report['V']}, "
                             f"|P*| = {report['star_count']}")
    elif cmd == "sweep":
        lines.append("| n | q | l | passed | exit |")
        lines.append("|---|---|---|--------|------|")
        for row in report["results"]:
            lines.append(f"| {row['n']} | {row['q']} | {row['ell']} "
                         f"| {row.get('passed')} | {row.get('exit')} |")
        if report["open_question_flags"]:
            lines.append("")
            lines.append(f"flags: {report['open_question_flags']}")
    elif cmd == "fixture-diff":
        lines.append(f"fixture: {report['fixture']}  match: "
                     f"**{report['match']}**")
        for d in report["diffs"]:
            lines.append(f"- {d}")
    return "\n".join(lines) + "\n"


def emit(report: dict, args) -> None:
    text = render_markdown(report) if args.format == "markdown" \
        else render_json(report)
    if args.out:
        with open(args.out, "w") as fh:
            fh.write(text)
    else:
        sys.stdout.write(text)


# ---------------------------------------------------------------------------
# fixtures


def load_fixture(name: str) -> dict:
    ref = resources.files("steinlat") / "fixtures" / f"{name}.json"
    if not ref.is_file():
        raise UsageError(f"unknown fixture {name!r}")
    return json.loads(ref.read_text())


def diff_reports(live: dict, golden: dict, path: str = "") -> list[str]:
    diffs = []
    if isinstance(golden, dict) and isinstance(live, dict):
        for k in sorted(set(golden) | set(live)):
            if k not in live:
                diffs.append(f"{path}/{k}: missing in live output")
            elif k not in golden:
                diffs.append(f"{path}/{k}: extra in live output")
            else:
                diffs.extend(diff_reports(live[k], golden[k], f"{path}/{k}"))
    elif golden != live:
        diffs.append(f"{path}: live {live!r} != golden {golden!r}")
    return diffs


# ---------------------------------------------------------------------------
# entry point


def _add_common(p: argparse.ArgumentParser, need_nql: bool) -> None:
    p.add_argument("--n", type=int, required=need_nql)
    p.add_argument("--q", type=int, required=need_nql)
    p.add_argument("--ell", type=int, required=need_nql)
    p.add_argument("--precision", type=int, default=None,
                   help="working precision N for the coefficient ring "
                        "(default b+2)")
    p.add_argument("--budget-cosets", type=int, default=200_000)
    p.add_argument("--budget-dim", type=int, default=1024,
                   help="largest dim L admitted to the module battery")
    p.add_argument("--budget-index", type=int, default=10_000,
                   help="largest [G:B] admitted to the module battery")
    p.add_argument("--checks", type=str, default=None,
                   help="comma-separated subset of battery checks")
    p.add_argument("--format", choices=["json", "markdown"], default="json")
    p.add_argument("--out", type=str, default=None)
    p.add_argument("--threads", type=int, default=1,
                   help="accepted for interface stability; execution is "
                        "single-threaded and deterministic")


def build_parser() -> _Parser:
    ap = _Parser(prog="steinlat",
                 description="Exact combinatorics and module structure of "
                             "the filtered mod-l Steinberg lattice of "
                             "GL_n(q).")
    sub = ap.add_subparsers(dest="cmd", required=True)

    p = sub.add_parser("predict", parents=[], help="combinatorial report")
    _add_common(p, need_nql=False)
    p.add_argument("--fixture", choices=["tatin1", "tatin2"], default=None,
                   help="diff live output against a golden fixture")

    v = sub.add_parser("verify", help="module-structure battery")
    _add_common(v, need_nql=True)

    s = sub.add_parser("sweep", help="battery over a parameter grid")
    _add_common(s, need_nql=False)
    s.add_argument("--n-list", type=str, required=True)
    s.add_argument("--q-list", type=str, required=True)
    s.add_argument("--ell-list", type=str, default=None,
                   help="default: all admissible l up to 20")
    return ap


def _predict(args) -> int:
    if args.fixture:
        golden = load_fixture(args.fixture)
        gctx = golden["context"]
        ctx = build_context(gctx["n"], gctx["q"], gctx["ell"],
                            precision=args.precision)
        # normalize through JSON so tuples/lists and numpy scalars compare
        live = json.loads(render_json(predict_report(ctx)))
        diffs = diff_reports(live, golden)
        report = {"schema_version": SCHEMA_VERSION,
                  "command": "fixture-diff", "fixture": args.fixture,
                  "match": not diffs, "diffs": diffs, "live": live}
        emit(report, args)
        return EXIT_OK if not diffs else EXIT_CHECK_FAILURE
    if args.n is None or args.q is None or args.ell is None:
        raise UsageError("predict requires --n, --q and --ell "
                         "(or --fixture)")
    ctx = build_context(args.n, args.q, args.ell, precision=args.precision)
    emit(predict_report(ctx), args)
    return EXIT_OK


def main(argv=None) -> int:
    try:
        args = build_parser().parse_args(argv)
        if args.cmd == "predict":
            return _predict(args)
        if args.cmd == "verify":
            ctx = build_context(args.n, args.q, args.ell,
                                precision=args.precision)
            report, code = verify_report(ctx, args)
            emit(report, args)
            return code
        if args.cmd == "sweep":
            report, code = sweep_report(args)
            emit(report, args)
            return code
        raise UsageError(f"unknown command {args.cmd!r}")
    except UsageError as exc:
        print(f"usage error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except ValueError as exc:
        print(f"parameter error: {exc}", file=sys.stderr)
        return EXIT_USAGE


if __name__ == "__main__":
    sys.exit(main())
