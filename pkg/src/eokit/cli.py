"""``eokit`` command line.

Exit codes: 0 success, 1 validation errors, 2 usage or input errors.
Structured output is JSON with sorted keys, so identical inputs give
byte-identical output.
"""

from __future__ import annotations

import argparse
import json
import sys
from typing import Any, Optional, Sequence

import yaml

from . import __version__
from .errors import EOError, ParseError
from .graph import PrefixMap, term_key
from .query import execute, parse_query, render_term
from .reasoner import Reasoner, class_witnesses, strip_explanation_types
from .recommender import (
    CapabilityProfile,
    QuestionDescriptor,
    applicable_types,
    example_questions,
    methods_for_type,
    plan_for_question,
)
from .schema import (
    EXPLANATION_TYPES,
    Ontology,
    SeedKnowledgeBase,
    builtin_ontology,
    explanation_type,
    load_overlay,
    resolve_type,
    seed_kb,
    type_token,
)
from .syntax import parse_turtle, serialize_manchester
from .syntax.manchester import parse_manchester


class UsageError(Exception):
    pass


class _Parser(argparse.ArgumentParser):
    def error(self, message: str):  # argparse prints usage and exits 2 by default; keep that but raise instead
        raise UsageError(f"{self.format_usage()}{self.prog}: error: {message}")


def _read(path: str) -> str:
    if path == "-":
        return sys.stdin.read()
    with open(path, encoding="utf-8") as fh:
        return fh.read()


def _load_doc(path: str) -> Any:
    text = _read(path)
    try:
        data = yaml.safe_load(text)
    except yaml.YAMLError as exc:
        mark = getattr(exc, "problem_mark", None)
        if mark is not None:
            raise ParseError(str(getattr(exc, "problem", exc)), mark.line + 1, mark.column + 1) from None
        raise ParseError(str(exc), 1, 1) from None
    if not isinstance(data, dict):
        raise ParseError(f"{path}: expected a mapping of fields", 1, 1)
    return data


class Context:
    def __init__(self, args: argparse.Namespace) -> None:
        self.format = getattr(args, "format", None) or "table"
        self.out: list[str] = []
        ont, seed = builtin_ontology(), seed_kb()
        overlay = getattr(args, "seed_overlay", None)
        if overlay:
            ont, seed = load_overlay(_read(overlay), ont, seed)
        self.ont: Ontology = ont
        self.seed: SeedKnowledgeBase = seed

    @property
    def structured(self) -> bool:
        return self.format == "structured"

    def emit(self, line: str = "") -> None:
        self.out.append(line)

    def emit_data(self, data: Any) -> None:
        self.out.append(json.dumps(data, indent=2, sort_keys=True, ensure_ascii=False))

    def curie(self, term, prefixes: Optional[PrefixMap] = None) -> str:
        return render_term(term, prefixes or self.ont.prefixes)

    def graph(self, path: str):
        doc = parse_turtle(_read(path), self.ont.prefixes, self.ont.names)
        return doc


# --- subcommands ----------------------------------------------------------------


def cmd_validate(ctx: Context, args) -> int:
    doc = ctx.graph(args.file)
    diags = Reasoner(ctx.ont, doc.graph).validate(doc.prefixes)
    if ctx.structured:
        ctx.emit_data(
            {
                "errors": len(diags.errors),
                "warnings": len(diags.warnings),
                "diagnostics": [
                    {
                        "severity": d.severity,
                        "code": d.code,
                        "message": d.message,
                        "terms": [ctx.curie(t, doc.prefixes) for t in d.terms],
                    }
                    for d in diags
                ],
            }
        )
    else:
        for d in diags:
            ctx.emit(f"{d.severity}: {d.code}: {d.message}")
        ctx.emit(f"{len(diags.errors)} error(s), {len(diags.warnings)} warning(s)")
    return 1 if diags.errors else 0


def cmd_classify(ctx: Context, args) -> int:
    doc = ctx.graph(args.file)
    graph = strip_explanation_types(doc.graph) if args.derive_only else doc.graph
    r = Reasoner(ctx.ont, graph)
    result = r.classify()
    rows = []
    for node, types in result.items():
        for cls in sorted(types, key=term_key):
            trace = r.trace(node, ctx.ont.equivalent(cls))
            rows.append((node, cls, trace))
    if ctx.structured:
        ctx.emit_data(
            {
                "derive_only": bool(args.derive_only),
                "memberships": [
                    {
                        "node": ctx.curie(node, doc.prefixes),
                        "type": ctx.curie(cls, doc.prefixes),
                        "token": type_token(cls),
                        "derived": cls in r.derived(node),
                        "condition_holds": trace.satisfied,
                        "witnesses": [
                            [ctx.curie(c, doc.prefixes), ctx.curie(n, doc.prefixes)] for c, n in class_witnesses(trace)
                        ],
                    }
                    for node, cls, trace in rows
                ],
            }
        )
    else:
        for node, cls, _ in rows:
            ctx.emit(f"{ctx.curie(node, doc.prefixes)} : {ctx.ont.local_name(cls)}")
    return 0


def cmd_sufficiency(ctx: Context, args) -> int:
    spec = explanation_type(ctx.ont, resolve_type(args.type, ctx.ont))
    text = serialize_manchester(spec.condition, ctx.ont.prefixes)
    if ctx.structured:
        ctx.emit_data(
            {
                "type": ctx.curie(spec.cls),
                "label": spec.label,
                "condition": text,
                "provenance": spec.provenance,
            }
        )
    else:
        ctx.emit(text)
    return 0


def cmd_methods(ctx: Context, args) -> int:
    type_ = resolve_type(args.type, ctx.ont)
    pairs = sorted(methods_for_type(ctx.seed, type_), key=lambda p: (p[0].value, p[1].value))
    if ctx.structured:
        ctx.emit_data(
            {
                "type": ctx.curie(type_),
                "generators": [
                    {
                        "task": ctx.curie(t),
                        "method": ctx.curie(m),
                        "task_label": ctx.ont.label(t),
                        "method_label": ctx.ont.label(m),
                    }
                    for t, m in pairs
                ],
            }
        )
    else:
        for label in sorted({ctx.ont.label(m) for _, m in pairs}):
            ctx.emit(label)
    return 0


def cmd_questions(ctx: Context, args) -> int:
    type_ = resolve_type(args.type, ctx.ont)
    identified = list(ctx.seed.questions(type_))
    proto = explanation_type(ctx.ont, type_).question
    if ctx.structured:
        ctx.emit_data({"type": ctx.curie(type_), "identified": identified, "prototypical": proto})
    else:
        for q in example_questions(ctx.seed, type_, ctx.ont):
            ctx.emit(q)
    return 0


def _plan_dict(ctx: Context, plan) -> Optional[dict]:
    if plan is None:
        return None
    return {
        "task": ctx.curie(plan.task),
        "method": ctx.curie(plan.method),
        "knowledge": [ctx.curie(k) for k in sorted(plan.knowledge, key=term_key)],
        "supported": plan.supported,
        "summary": plan.summary(ctx.ont),
    }


def cmd_recommend(ctx: Context, args) -> int:
    profile = CapabilityProfile.from_mapping(_load_doc(args.profile), ctx.ont.prefixes).validate(ctx.ont)
    if args.question:
        q = QuestionDescriptor.from_mapping(_load_doc(args.question))
        ans = plan_for_question(ctx.ont, ctx.seed, profile, q)
        token = type_token(ans.type)
        lines = [f"Explanation type: {token}"]
        if ans.satisfiable and ans.plan is not None:
            lines.append(f"System: {ans.plan.summary(ctx.ont)}")
        elif ans.satisfiable:
            lines.append("System: no generation recipe known for this type")
        else:
            missing = ", ".join(ctx.curie(m) for m in sorted(ans.missing, key=term_key))
            lines.append(f"Missing: {missing}")
        if ctx.structured:
            ctx.emit_data(
                {
                    "intent": ans.intent,
                    "question": q.text,
                    "type": ctx.curie(ans.type),
                    "token": token,
                    "satisfiable": ans.satisfiable,
                    "missing": [ctx.curie(m) for m in sorted(ans.missing, key=term_key)],
                    "plan": _plan_dict(ctx, ans.plan),
                    "answer": lines,
                }
            )
        else:
            for line in lines:
                ctx.emit(line)
        return 0

    report = applicable_types(ctx.ont, ctx.seed, profile)
    if ctx.structured:
        ctx.emit_data(
            {
                "recommendations": [
                    {
                        "rank": i + 1,
                        "type": ctx.curie(r.type),
                        "label": ctx.ont.label(r.type),
                        "token": r.token,
                        "satisfiable": r.satisfiable,
                        "context_match": r.context_match,
                        "missing": [ctx.curie(m) for m in sorted(r.missing, key=term_key)],
                        "plan": _plan_dict(ctx, r.plan),
                    }
                    for i, r in enumerate(report)
                ]
            }
        )
    else:
        for r in report:
            if r.satisfiable:
                flag = " (matches context)" if r.context_match else ""
                ctx.emit(f"{ctx.ont.label(r.type)}{flag}")
        blocked = [r for r in report if not r.satisfiable]
        if blocked:
            ctx.emit("")
            ctx.emit("not supported by this profile:")
            for r in blocked:
                missing = ", ".join(ctx.curie(m) for m in sorted(r.missing, key=term_key))
                ctx.emit(f"  {ctx.ont.label(r.type)}: missing {missing}")
    return 0


def cmd_query(ctx: Context, args) -> int:
    q = parse_query(_read(args.query))
    graph = None
    for path in args.data:
        g = ctx.graph(path).graph
        graph = g if graph is None else graph.union(g)
    result = execute(ctx.ont, graph, q)
    rendered = result.rendered(ctx.ont.prefixes.merged(q.prefixes))
    if ctx.structured:
        ctx.emit_data({"variables": list(result.variables), "rows": [dict(zip(result.variables, row)) for row in rendered]})
    else:
        header = ["?" + v for v in result.variables]
        widths = [max([len(h)] + [len(r[i]) for r in rendered]) for i, h in enumerate(header)]
        ctx.emit("  ".join(h.ljust(w) for h, w in zip(header, widths)).rstrip())
        for row in rendered:
            ctx.emit("  ".join(c.ljust(w) for c, w in zip(row, widths)).rstrip())
    return 0


def cmd_check(ctx: Context, args) -> int:
    """Membership of one node in a class expression, with the evaluation trace."""
    doc = ctx.graph(args.file)
    node = doc.prefixes.expand(args.node)
    expr = parse_manchester(args.expression, doc.prefixes, ctx.ont.names)
    report = Reasoner(ctx.ont, doc.graph).check(node, expr)
    if ctx.structured:
        ctx.emit_data(report.to_dict(doc.prefixes))
    else:
        ctx.emit(f"{ctx.curie(node, doc.prefixes)}: {'satisfied' if report.satisfied else 'not satisfied'}")
        _emit_trace(ctx, report.trace, doc.prefixes, 1)
    return 0


def _emit_trace(ctx: Context, tr, prefixes: PrefixMap, depth: int) -> None:
    pad = "  " * depth
    mark = "+" if tr.satisfied else "-"
    note = f"  [{tr.note}]" if tr.note else ""
    ctx.emit(f"{pad}{mark} {serialize_manchester(tr.expression, prefixes)}{note}")
    for kid in tr.children:
        _emit_trace(ctx, kid, prefixes, depth + 1)
    for node, sub in tr.witnesses:
        ctx.emit(f"{pad}  via {render_term(node, prefixes)}")
        _emit_trace(ctx, sub, prefixes, depth + 2)


def cmd_types(ctx: Context, args) -> int:
    specs = [explanation_type(ctx.ont, t) for t in EXPLANATION_TYPES]
    if ctx.structured:
        ctx.emit_data(
            [
                {"token": s.token, "type": ctx.curie(s.cls), "label": s.label, "question": s.question, "description": s.description}
                for s in specs
            ]
        )
    else:
        width = max(len(s.token) for s in specs)
        for s in specs:
            ctx.emit(f"{s.token.ljust(width)}  {s.label}")
    return 0


# --- argument parsing -------------------------------------------------------------


def build_parser() -> argparse.ArgumentParser:
    common = _Parser(add_help=False)
    common.add_argument("--seed-overlay", metavar="FILE.ttl", default=argparse.SUPPRESS, help="extra classes, recipes, questions and context rules")
    common.add_argument("--format", choices=("table", "structured"), default=argparse.SUPPRESS, help="output style (default: table)")

    parser = _Parser(prog="eokit", description="Explanation-type toolkit for clinical decision support designers.", parents=[common])
    parser.add_argument("--version", action="version", version=f"eokit {__version__}")
    sub = parser.add_subparsers(dest="command", metavar="COMMAND", parser_class=_Parser)
    sub.required = True

    def add(name: str, func, help_text: str) -> argparse.ArgumentParser:
        p = sub.add_parser(name, parents=[common], help=help_text, description=help_text)
        p.set_defaults(func=func)
        return p

    p = add("validate", cmd_validate, "check a Turtle file against the ontology")
    p.add_argument("file", help="Turtle file, or - for stdin")
    p = add("classify", cmd_classify, "list explanation-type memberships per node")
    p.add_argument("file")
    p.add_argument("--derive-only", action="store_true", help="drop asserted explanation types before reasoning")
    p = add("sufficiency", cmd_sufficiency, "print the sufficiency condition of an explanation type")
    p.add_argument("type")
    p = add("methods", cmd_methods, "AI methods known to generate an explanation type")
    p.add_argument("type")
    p = add("questions", cmd_questions, "example questions for an explanation type")
    p.add_argument("type")
    p = add("recommend", cmd_recommend, "rank explanation types for a capability profile")
    p.add_argument("--profile", required=True, metavar="FILE")
    p.add_argument("--question", metavar="FILE", help="answer one question descriptor instead")
    p = add("query", cmd_query, "run a graph-pattern query over the schema view and data")
    p.add_argument("query", help=".rq file")
    p.add_argument("data", nargs="*", help="Turtle data files")
    p = add("check", cmd_check, "trace one node against a class expression")
    p.add_argument("file")
    p.add_argument("node", help="CURIE or <IRI> of the node")
    p.add_argument("expression", help="Manchester-syntax class expression")
    add("types", cmd_types, "list the nine explanation types")
    return parser


def run(argv: Optional[Sequence[str]] = None) -> tuple[int, str, str]:
    """Run a command and return (exit code, stdout text, stderr text)."""
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except UsageError as exc:
        return 2, "", f"{exc}\n"
    except SystemExit as exc:  # --help / --version
        return int(exc.code or 0), "", ""
    try:
        ctx = Context(args)
        code = args.func(ctx, args)
    except ParseError as exc:
        return 2, "", f"eokit: parse error: {exc}\n"
    except (EOError, OSError, ValueError, KeyError) as exc:
        return 2, "", f"eokit: error: {exc}\n"
    out = "\n".join(ctx.out)
    return code, (out + "\n") if ctx.out else "", ""


def main(argv: Optional[Sequence[str]] = None) -> int:
    code, out, err = run(argv)
    sys.stdout.write(out)
    sys.stderr.write(err)
    return code


if __name__ == "__main__":
    sys.exit(main())
