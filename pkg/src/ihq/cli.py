"""``ihq`` command line.

Exit codes: 0 success, 1 a mathematical check failed, 2 usage or schema error.
"""

from __future__ import annotations

import argparse
import json
import os
import sys
from fractions import Fraction
from pathlib import Path

from . import engine
from .engine import EngineError
from .instances import (
    BuilderError,
    SchemaError,
    build_projective_space,
    build_sphere_product,
    dumps,
    rational_str,
    read_instance,
)
from .model import InstanceError, index_of, validate_abbv, validate_extrema, validate_morse

EXIT_OK, EXIT_CHECK, EXIT_USAGE = 0, 1, 2


class UsageError(Exception):
    pass


def _max_degree() -> int | None:
    raw = os.environ.get("IHQ_MAX_DEGREE")
    if not raw:
        return None
    try:
        return int(raw)
    except ValueError:
        raise UsageError(f"IHQ_MAX_DEGREE must be an integer, got {raw!r}") from None


def _int_list(text: str) -> list[int]:
    try:
        return [int(x) for x in text.split(",") if x.strip()]
    except ValueError:
        raise UsageError(f"expected comma-separated integers, got {text!r}") from None


def _rational(text: str) -> Fraction:
    try:
        return Fraction(text)
    except (ValueError, ZeroDivisionError):
        raise UsageError(f"not a rational number: {text!r}") from None


def _validators(inst):
    cap = _max_degree()
    return [validate_abbv(inst, cap), validate_morse(inst, cap), validate_extrema(inst)]


# ---------------------------------------------------------------------------
# commands

def cmd_make_example(args) -> int:
    weights = _int_list(args.weights)
    shift = _rational(args.shift)
    try:
        if args.kind == "cpn":
            inst = build_projective_space(weights, shift)
        else:
            inst = build_sphere_product(weights, shift)
    except (BuilderError, InstanceError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    text = dumps(inst)
    if args.output:
        Path(args.output).write_text(text, encoding="utf-8")
        print(f"wrote {args.output}")
    else:
        sys.stdout.write(text)
    return EXIT_OK


def cmd_validate(args) -> int:
    inst = read_instance(args.input)
    ok = True
    for report in _validators(inst):
        ok &= report.ok
        for line in report.lines():
            print(line)
    return EXIT_OK if ok else EXIT_CHECK


def _matrix(m) -> list[list[str]]:
    return [[rational_str(x) for x in row] for row in m]


def build_report(inst, level: Fraction, sections: set[str]) -> dict:
    checks = [r.as_dict() for r in _validators(inst)]
    critical = engine.is_critical(inst, level)
    plus, minus = engine.sides(inst, level)
    report: dict = {
        "instance": inst.name,
        "level": rational_str(level),
        "mode": "singular" if critical else "regular",
        "reducedDim": inst.reduced_dim,
        "classification": [
            {"id": F.id, "moment": rational_str(F.moment), "dim": F.dim, "index": index_of(F),
             "halfCodim": (inst.dim_m - F.dim) // 2, "side": "plus" if F.id in plus else "minus"}
            for F in inst.components
        ],
    }
    if not all(c["ok"] for c in checks if c["check"] == "validate_morse"):
        report["checks"] = checks
        report["ok"] = False
        return report

    pres = engine.ih_ring(inst, level) if critical else engine.reduced_cohomology_regular(inst, level)
    kernel = engine.ih_betti(inst, level)
    checks.append(engine.duality_check(pres, inst.dim_m).as_dict())
    checks.append(engine.crosscheck_theorems(inst, level).as_dict())

    if "betti" in sections:
        report["betti"] = pres.betti()
        report["kernel"] = [
            {"degree": d, "dimH": k.dim_h, "dimKPlus": len(k.k_plus), "dimKMinus": len(k.k_minus),
             "dimK": k.dim_k, "dimIH": k.dim_ih}
            for d, k in sorted(kernel.per_degree.items())
        ]
    if "pairing" in sections:
        report["representatives"] = {str(d): names for d, names in sorted(pres.representatives.items())}
        report["pairing"] = {str(p): _matrix(m) for p, m in sorted(pres.pairing_matrices.items())}
    if "ring" in sections:
        report["representatives"] = {str(d): names for d, names in sorted(pres.representatives.items())}
        report["ring"] = {
            "products": [
                {"left": [p, i], "right": [q, j], "value": [rational_str(x) for x in v]}
                for (p, i, q, j), v in sorted(pres.structure.items())
            ],
            "integration": [rational_str(x) for x in pres.integration],
        }
    report["checks"] = checks
    report["ok"] = all(c["ok"] for c in checks)
    return report


def _table(header: list[str], rows: list[list]) -> list[str]:
    cells = [header] + [[str(c) for c in r] for r in rows]
    widths = [max(len(r[i]) for r in cells) for i in range(len(header))]

    def fmt(r):
        return "| " + " | ".join(c.ljust(w) for c, w in zip(r, widths)) + " |"

    return [fmt(cells[0]), "|" + "|".join("-" * (w + 2) for w in widths) + "|"] + [fmt(r) for r in cells[1:]]


def render_markdown(report: dict) -> str:
    out = [f"# {report['instance']} at level {report['level']} ({report['mode']})", ""]
    out.append("## Fixed components")
    out += _table(["id", "moment", "dim", "index", "half codim", "side"],
                  [[c["id"], c["moment"], c["dim"], c["index"], c["halfCodim"], c["side"]]
                   for c in report["classification"]])
    out.append("")
    if "betti" in report:
        out.append("## Betti numbers")
        out.append("IH: " + " ".join(str(b) for b in report["betti"]))
        out.append("")
        out += _table(["degree", "dim H", "dim K+", "dim K-", "dim K", "dim IH"],
                      [[k["degree"], k["dimH"], k["dimKPlus"], k["dimKMinus"], k["dimK"], k["dimIH"]]
                       for k in report["kernel"]])
        out.append("")
    if "representatives" in report:
        out.append("## Representatives")
        for d, names in report["representatives"].items():
            out.append(f"- degree {d}: " + (", ".join(names) if names else "(none)"))
        out.append("")
    if "pairing" in report:
        out.append("## Pairing matrices")
        for p, m in report["pairing"].items():
            q = report["reducedDim"] - int(p)
            out.append(f"degree {p} x degree {q}:")
            if m and m[0]:
                out += _table([""] + [f"c{j}" for j in range(len(m[0]))],
                              [[f"r{i}"] + row for i, row in enumerate(m)])
            else:
                out.append("(empty)")
            out.append("")
    if "ring" in report:
        out.append("## Ring structure")
        out += _table(["left", "right", "product"],
                      [[f"{l[0]}:{l[1]}", f"{r[0]}:{r[1]}", " ".join(v)]
                       for l, r, v in ((x["left"], x["right"], x["value"]) for x in report["ring"]["products"])])
        out.append("")
        out.append("integration on top degree: " + " ".join(report["ring"]["integration"]))
        out.append("")
    out.append("## Checks")
    for c in report["checks"]:
        out.append(f"- {c['check']}: {'pass' if c['ok'] else 'FAIL'}")
        for f in c["failures"]:
            out.append("  - " + ", ".join(f"{k}={v}" for k, v in f.items()))
    out.append("")
    return "\n".join(out)


def cmd_compute(args) -> int:
    inst = read_instance(args.input)
    level = _rational(args.level)
    sections = {"betti", "pairing", "ring"} if args.report == "all" else {args.report}
    try:
        engine.check_interior(inst, level)
        report = build_report(inst, level, sections)
    except EngineError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_CHECK
    if args.format == "json":
        sys.stdout.write(json.dumps(report, indent=1, sort_keys=True) + "\n")
    else:
        sys.stdout.write(render_markdown(report))
    return EXIT_OK if report["ok"] else EXIT_CHECK


def make_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="ihq", description="Intersection cohomology of circle quotients.")
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("make-example", help="write a corpus instance")
    p.add_argument("kind", choices=["cpn", "spheres"])
    p.add_argument("--weights", required=True, help="comma-separated integers")
    p.add_argument("--shift", default="0", help="rational moment shift, e.g. 3/2")
    p.add_argument("-o", "--output")
    p.set_defaults(func=cmd_make_example)

    p = sub.add_parser("validate", help="run all validators on an instance file")
    p.add_argument("input", nargs="?")
    p.add_argument("-i", "--input", dest="input_flag")
    p.set_defaults(func=cmd_validate)

    p = sub.add_parser("compute", help="compute IH or reduced cohomology at a level")
    p.add_argument("-i", "--input", required=True)
    p.add_argument("--level", default="0")
    p.add_argument("--report", choices=["betti", "pairing", "ring", "all"], default="all")
    p.add_argument("--format", choices=["json", "md"], default="md")
    p.set_defaults(func=cmd_compute)
    return parser


def main(argv: list[str] | None = None) -> int:
    parser = make_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return EXIT_USAGE if exc.code else EXIT_OK
    if args.command == "validate":
        args.input = args.input or args.input_flag
        if not args.input:
            print("error: an input file is required", file=sys.stderr)
            return EXIT_USAGE
    try:
        return args.func(args)
    except (UsageError, SchemaError, InstanceError, OSError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_USAGE


if __name__ == "__main__":
    sys.exit(main())
