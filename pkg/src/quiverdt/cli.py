"""Command-line interface: input parsing, dispatch and report emission."""

from __future__ import annotations

import argparse
import csv
import io
import json
import re
import sys
import time
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Any, Sequence

from .errors import ArgumentError, ParseError, QuiverDTError, TheoremViolation, UnsupportedError
from .fqrep.count import DEFAULT_BUDGET, exp_sum_count, framed_exp_sum_count
from .jacobi import DEFAULT_NMAX, jacobi_dimension, local_milnor
from .ncalg import Potential, canonical_rotation
from .quiver import Arrow, Quiver

COMMANDS = ("jacobi", "milnor", "spectrum", "bps", "gv", "framed-check", "verify", "count")
_RATIONAL = re.compile(r"^[+-]?\d+(/\d+)?$")
_NAME = re.compile(r"^[A-Za-z_][A-Za-z0-9_]*$")


# -- input format --------------------------------------------------------------------------

def parse_input(text: str) -> tuple[Quiver, Potential]:
    """Parse the ``[quiver]`` / ``[potential]`` text format."""
    section = None
    vertices = None
    arrows: list[Arrow] = []
    terms: list[tuple[Fraction, list[str], int, int]] = []
    for lineno, raw in enumerate(text.splitlines(), start=1):
        line = raw.split("#", 1)[0].rstrip()
        if not line.strip():
            continue
        indent = len(line) - len(line.lstrip())
        body = line.strip()
        if body.startswith("["):
            if body not in ("[quiver]", "[potential]"):
                raise ParseError(f"unknown section {body}", lineno, indent + 1)
            section = body[1:-1]
            continue
        if section is None:
            raise ParseError("content before any section header", lineno, indent + 1)
        tokens = _tokens(line)
        head, col = tokens[0]
        if section == "quiver":
            if head == "vertices" or head.startswith("vertices="):
                m = re.match(r"^\s*vertices\s*=\s*(\S+)\s*$", line)
                if not m or not m.group(1).isdigit():
                    raise ParseError("expected 'vertices = <n>'", lineno, col)
                if vertices is not None:
                    raise ParseError("vertex count given twice", lineno, col)
                vertices = int(m.group(1))
            elif head == "arrow":
                if len(tokens) != 4:
                    raise ParseError("expected 'arrow <name> <source> <target>'", lineno, col)
                (name, ncol), (src, scol), (tgt, tcol) = tokens[1:]
                if not _NAME.match(name):
                    raise ParseError(f"bad arrow name {name!r}", lineno, ncol)
                if any(a.name == name for a in arrows):
                    raise ParseError(f"duplicate arrow name {name!r}", lineno, ncol)
                for val, c in ((src, scol), (tgt, tcol)):
                    if not val.isdigit():
                        raise ParseError(f"vertex {val!r} is not a nonnegative integer", lineno, c)
                arrows.append(Arrow(name, int(src), int(tgt)))
                if vertices is not None:
                    for val, c in ((src, scol), (tgt, tcol)):
                        if int(val) >= vertices:
                            raise ParseError(f"vertex {val} out of range 0..{vertices - 1}", lineno, c)
            else:
                raise ParseError(f"unexpected {head!r} in [quiver]", lineno, col)
        else:
            if head != "term":
                raise ParseError(f"unexpected {head!r} in [potential]", lineno, col)
            if len(tokens) < 3:
                raise ParseError("expected 'term <coefficient> <arrow names>'", lineno, col)
            coeff, ccol = tokens[1]
            if not _RATIONAL.match(coeff):
                raise ParseError(f"malformed rational {coeff!r}", lineno, ccol)
            try:
                value = Fraction(coeff)
            except ZeroDivisionError:
                raise ParseError(f"zero denominator in {coeff!r}", lineno, ccol) from None
            terms.append((value, [t for t, _ in tokens[2:]], lineno, tokens[2][1]))
    if vertices is None:
        raise ParseError("missing 'vertices = <n>' in [quiver]")
    for a in arrows:
        if a.source >= vertices or a.target >= vertices:
            raise ParseError(f"arrow {a.name} uses a vertex outside 0..{vertices - 1}")
    Q = Quiver(vertices, tuple(arrows))
    names = set(Q.arrow_names)
    single = all(len(n) == 1 for n in names)
    words: dict[tuple[int, ...], Fraction] = {}
    for value, toks, lineno, col in terms:
        word: list[int] = []
        for tok in toks:
            if tok in names:
                word.append(Q.arrow_index(tok))
            elif single and all(ch in names for ch in tok):
                word.extend(Q.arrow_index(ch) for ch in tok)
            else:
                raise ParseError(f"unknown arrow {tok!r}", lineno, col)
        for a, b in zip(word, word[1:]):
            if Q.arrows[a].target != Q.arrows[b].source:
                raise ParseError(
                    f"word is not composable at {Q.arrows[a].name} {Q.arrows[b].name}", lineno, col
                )
        if Q.arrows[word[-1]].target != Q.arrows[word[0]].source:
            raise ParseError("word is not closed", lineno, col)
        key = canonical_rotation(word)
        words[key] = words.get(key, Fraction(0)) + value
    return Q, Potential(Q, words)


def _tokens(line: str) -> list[tuple[str, int]]:
    return [(m.group(0), m.start() + 1) for m in re.finditer(r"\S+", line)]


def format_input(Q: Quiver, W: Potential) -> str:
    lines = ["[quiver]", f"vertices = {Q.vertex_count}"]
    lines += [f"arrow {a.name} {a.source} {a.target}" for a in Q.arrows]
    lines.append("[potential]")
    for word, c in W.terms.items():
        lines.append(f"term {c} {' '.join(Q.arrows[i].name for i in word)}")
    return "\n".join(lines) + "\n"


# -- reports ---------------------------------------------------------------------------------

@dataclass
class Report:
    """Rows of a result table plus the exit status it implies."""

    columns: list[str]
    rows: list[dict[str, Any]] = field(default_factory=list)
    exit_code: int = 0
    notes: list[str] = field(default_factory=list)
    text: str | None = None


def _cell(v: Any) -> str:
    if isinstance(v, (list, dict)):
        return json.dumps(v, sort_keys=True, separators=(",", ":"))
    if v is None:
        return ""
    if isinstance(v, bool):
        return "true" if v else "false"
    return str(v)


def emit_report(result: Report, fmt: str) -> bytes:
    if fmt == "json":
        rows = [{k: r.get(k) for k in result.columns if k in r} for r in result.rows]
        return (json.dumps(rows, sort_keys=True, separators=(",", ":")) + "\n").encode()
    if fmt == "csv":
        buf = io.StringIO()
        w = csv.writer(buf, lineterminator="\n")
        w.writerow(result.columns)
        for r in result.rows:
            w.writerow([_cell(r.get(c)) for c in result.columns])
        return buf.getvalue().encode()
    if fmt == "text":
        table = [result.columns] + [[_cell(r.get(c)) for c in result.columns] for r in result.rows]
        widths = [max(len(row[i]) for row in table) for i in range(len(result.columns))]
        out = ["  ".join(cell.ljust(w) for cell, w in zip(row, widths)).rstrip() for row in table]
        out += result.notes
        return ("\n".join(out) + "\n").encode()
    raise ArgumentError(f"unknown format {fmt!r}")


# -- commands --------------------------------------------------------------------------------

def _load(path: str) -> tuple[Quiver, Potential]:
    try:
        with open(path, encoding="utf-8") as fh:
            text = fh.read()
    except OSError as exc:
        raise ArgumentError(f"cannot read {path}: {exc.strerror}") from None
    return parse_input(text)


def _fields(text: str | None):
    if text is None or text == "auto":
        return None
    try:
        return [int(x) for x in text.split(",") if x.strip()]
    except ValueError:
        raise ArgumentError(f"--fields expects 'auto' or a comma separated list of integers, got {text!r}") from None


def _dimvec(text: str) -> list[int]:
    try:
        return [int(x) for x in text.split(",")]
    except ValueError:
        raise ArgumentError(f"--dim expects comma separated integers, got {text!r}") from None


def _need_symmetric(Q: Quiver) -> None:
    if not Q.is_symmetric():
        raise UnsupportedError("BPS invariants are computed for symmetric quivers only")


def _bps_rows(table) -> list[dict]:
    fields = [f["q"] for f in table.fields]
    rows = []
    for e in sorted(table.entries.values(), key=lambda e: e.gamma):
        row = e.as_dict()
        row["fields"] = fields
        row["modulus"] = table.modulus
        rows.append(row)
    return rows


def cmd_jacobi(args) -> Report:
    Q, W = _load(args.input)
    cert = jacobi_dimension(Q, W, args.truncation)
    row = {
        "certified": cert.certified,
        "dim": cert.dim_total,
        "N_star": cert.N_star,
        "dim_by_vertex_pair": cert.dim_by_vertex_pair,
        "profile": cert.profile,
    }
    return Report(["certified", "dim", "N_star", "dim_by_vertex_pair", "profile"], [row])


def cmd_milnor(args) -> Report:
    mu = local_milnor(args.input, args.truncation)
    return Report(["polynomial", "certified", "mu"], [{"polynomial": args.input, "certified": mu is not None, "mu": mu}])


def cmd_spectrum(args) -> Report:
    from .spectrum import polynomial_spectrum, refined_gv_poly, specialize, steenbrink_spectrum

    if args.weights:
        weights = [int(x) for x in args.weights.split(",")]
        if args.degree is None:
            raise ArgumentError("--weights needs --degree")
        S = steenbrink_spectrum(weights, args.degree, args.input)
    else:
        if args.input is None:
            raise ArgumentError("spectrum needs a polynomial or --weights/--degree")
        S = polynomial_spectrum(args.input, args.truncation)
    P = refined_gv_poly(S)
    nums = [str(a) for a in S.spectral_numbers]
    row = {
        "spectrum": nums,
        "mu": S.mu,
        "gv_bivariate": str(P),
        "wtm": str(specialize(P, "wtm")),
        "chi": specialize(P, "chi"),
    }
    rep = Report(["spectrum", "mu", "gv_bivariate", "wtm", "chi"], [row])
    rep.text = ", ".join(nums)
    return rep


def cmd_bps(args) -> Report:
    from .dtbps import bps_extract

    Q, W = _load(args.input)
    _need_symmetric(Q)
    table = bps_extract(Q, W, args.max_total_degree, _fields(args.fields), jobs=args.jobs, budget=args.budget)
    cols = ["gamma", "omega", "omega_num", "positive", "palindromic", "simple_sector", "fields", "modulus"]
    return Report(cols, _bps_rows(table))


def cmd_gv(args) -> Report:
    from .dtbps import gv_table

    Q, W = _load(args.input)
    _need_symmetric(Q)
    rows = gv_table(Q, W, args.rank_max, args.length, _fields(args.fields), jobs=args.jobs, budget=args.budget)
    return Report(["r", "gv_num", "gv_refined", "gv_bivariate"], [r.as_dict() for r in rows])


def cmd_verify(args) -> Report:
    from .dtbps import bps_extract, verify_theoremB

    Q, W = _load(args.input)
    _need_symmetric(Q)
    cert = jacobi_dimension(Q, W, args.truncation)
    if not cert.certified:
        raise UnsupportedError(f"Jacobi algebra not certified finite-dimensional up to degree {args.truncation}")
    table = bps_extract(Q, W, args.max_total_degree, _fields(args.fields), jobs=args.jobs, budget=args.budget)
    if args.self_test:
        g = min((g for g, e in table.entries.items() if e.simple_sector), key=lambda g: (sum(g), g))
        table = table.with_omega(g, table[g] + 1)
    report = verify_theoremB(Q, W, table, cert.dim_total)
    rows = [{"clause": c["clause"], "passed": c["passed"], "detail": c["detail"]} for c in report["clauses"]]
    return Report(["clause", "passed", "detail"], rows, 0 if report["passed"] else TheoremViolation.exit_code)


def cmd_framed(args) -> Report:
    from .dtbps import framed_exp_check

    Q, W = _load(args.input)
    _need_symmetric(Q)
    m = args.framing or 1
    rep = framed_exp_check(Q, W, m, args.max_total_degree, _fields(args.fields), jobs=args.jobs, budget=args.budget)
    rows = []
    if isinstance(rep.get("numeric"), list):
        for block in rep["numeric"]:
            for r in block["coefficients"]:
                rows.append({"check": "exp_identity", "q": block["q"], "gamma": r["gamma"],
                             "lhs": r["framed"], "rhs": r["exp_side"], "agree": r["agree"]})
    if "chi_level" in rep:
        for r in rep["chi_level"]["coefficients"]:
            rows.append({"check": "product_formula", "q": None, "gamma": r["gamma"],
                         "lhs": str(r["framed_at_s1"]), "rhs": str(r["product"]), "agree": r["agree"]})
    if "framing_independence" in rep:
        for r in rep["framing_independence"]["sectors"]:
            rows.append({"check": "framing_independence", "q": None, "gamma": r["gamma"],
                         "lhs": r["framed_omega"], "rhs": r["omega"], "agree": r["agree"]})
    return Report(["check", "q", "gamma", "lhs", "rhs", "agree"], rows,
                  0 if rep["passed"] else TheoremViolation.exit_code)


def cmd_count(args) -> Report:
    Q, W = _load(args.input)
    if args.dim is None:
        raise ArgumentError("count needs --dim")
    gamma = _dimvec(args.dim)
    sizes = _fields(args.fields)
    if not sizes:
        raise ArgumentError("count needs an explicit --fields list")
    rows = []
    for q in sizes:
        start = time.perf_counter()
        if args.framing:
            rep = framed_exp_sum_count(Q, W, gamma, args.framing, q, jobs=args.jobs, budget=args.budget)
        else:
            rep = exp_sum_count(Q, W, gamma, q, jobs=args.jobs, budget=args.budget)
        row = rep.as_dict()
        row["elapsed_ms"] = round((time.perf_counter() - start) * 1000)
        rows.append(row)
    cols = ["gamma", "q", "N0", "N1", "E"]
    if args.format != "json":
        cols.append("elapsed_ms")
    return Report(cols, rows)


HANDLERS = {
    "jacobi": cmd_jacobi,
    "milnor": cmd_milnor,
    "spectrum": cmd_spectrum,
    "bps": cmd_bps,
    "gv": cmd_gv,
    "framed-check": cmd_framed,
    "verify": cmd_verify,
    "count": cmd_count,
}


def build_parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(prog="quiverdt", description="Refined BPS invariants of quivers with potential.")
    p.add_argument("command", choices=COMMANDS)
    p.add_argument("input", nargs="?", help="input file (quiver commands) or polynomial (milnor, spectrum)")
    p.add_argument("--max-total-degree", "-G", type=int, default=3, dest="max_total_degree")
    p.add_argument("--truncation", "-N", type=int, default=DEFAULT_NMAX)
    p.add_argument("--rank-max", type=int, default=2, dest="rank_max")
    p.add_argument("--framing", type=int, default=None)
    p.add_argument("--fields", default="auto")
    p.add_argument("--length", type=int, default=None)
    p.add_argument("--format", choices=("json", "csv", "text"), default="text")
    p.add_argument("--jobs", type=int, default=1)
    p.add_argument("--budget", type=int, default=DEFAULT_BUDGET)
    p.add_argument("--self-test", action="store_true", dest="self_test")
    p.add_argument("--dim", default=None, help="dimension vector for count, e.g. 1,1")
    p.add_argument("--weights", default=None, help="variable weights for spectrum, e.g. 1,1")
    p.add_argument("--degree", type=int, default=None, help="weighted degree for spectrum")
    return p


def dispatch(args: argparse.Namespace, out=None) -> int:
    out = out or sys.stdout.buffer
    if args.command not in ("milnor", "spectrum") and args.input is None:
        raise ArgumentError(f"{args.command} needs an input file")
    if args.jobs < 1:
        raise ArgumentError("--jobs must be positive")
    report = HANDLERS[args.command](args)
    override = report.text
    if args.format == "text" and override is not None:
        out.write((override + "\n").encode())
    else:
        out.write(emit_report(report, args.format))
    return report.exit_code


def main(argv: Sequence[str] | None = None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return 2 if exc.code else 0
    try:
        return dispatch(args)
    except QuiverDTError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return exc.exit_code


if __name__ == "__main__":
    sys.exit(main())
