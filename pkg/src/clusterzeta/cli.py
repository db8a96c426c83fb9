"""Command-line interface: cluster files in, text or JSON reports out.

A cluster file has one record per point::

    # comment
    1 - - 3        <id> <parent-id|-> <label|-> <multiplicity>
    2 1 1 2

Input may also be newline-delimited JSON with one ``{"cluster": "<file text>"}``
object per line (the output of ``random --count``), in which case the
command runs once per cluster and the results stream in input order.

Exit status: 0 when every verdict holds, 1 when some verdict fails (for
example a non-idealistic cluster or a failed conjecture check), 2 on usage
or parse errors.
"""

from __future__ import annotations

import argparse
import json
import sys
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Any, Callable, Iterator, Sequence

from . import __version__
from .constellation import (
    Cluster,
    derive_proximity,
    make_cluster,
    numerical_data,
    random_idealistic_cluster,
    validate_idealistic,
)
from .errors import (
    BoundOverflow,
    ClusterError,
    ClusterSyntaxError,
    LabelClash,
    NegativeExponent,
    OrderViolation,
    ParseError,
)
from .monodromy import acampo, eigenvalue_orders, full_check
from .monomial import (
    general_element,
    ideal_generators,
    is_complete,
    newton_polyhedron,
    render_monomial,
    render_polynomial,
)
from .ratzeta import RationalFunctionQ, format_rational, poles, z_top, z_top_r
from .strata import classify_sign, drt, strata_table

EXIT_OK = 0
EXIT_VERDICT = 1
EXIT_USAGE = 2


# ---------------------------------------------------------------------------
# Cluster files
# ---------------------------------------------------------------------------


def _int_field(token: str, what: str, line: int) -> int:
    try:
        return int(token)
    except ValueError:
        raise ClusterSyntaxError(f"{what} must be an integer, got {token!r}", line) from None


def parse_cluster_file(text: str) -> Cluster:
    """Parse cluster-file text; errors carry the offending 1-based line number."""
    edges: list[tuple[int, int, int]] = []
    mults: list[int] = []
    seen: dict[tuple[int, int], int] = {}
    for lineno, raw in enumerate(text.splitlines(), start=1):
        line = raw.strip()
        if not line or line.startswith("#"):
            continue
        tokens = line.split()
        if len(tokens) != 4:
            raise ClusterSyntaxError(
                f"expected '<id> <parent|-> <label|-> <mult>', got {len(tokens)} fields", lineno
            )
        id_tok, parent_tok, label_tok, mult_tok = tokens
        ident = _int_field(id_tok, "id", lineno)
        mult = _int_field(mult_tok, "multiplicity", lineno)
        if mult < 0:
            raise ClusterSyntaxError(f"multiplicity {mult} is negative", lineno)
        if ident != len(mults) + 1:
            raise OrderViolation(f"expected id {len(mults) + 1}, got {ident}", lineno)
        if (parent_tok == "-") != (label_tok == "-"):
            raise ClusterSyntaxError("the root record needs '-' for both parent and label", lineno)
        if parent_tok == "-":
            if ident != 1:
                raise OrderViolation("only the first record may be the root", lineno)
        else:
            if ident == 1:
                raise OrderViolation("the first record must be the root", lineno)
            parent = _int_field(parent_tok, "parent id", lineno)
            label = _int_field(label_tok, "label", lineno)
            if label not in (1, 2, 3):
                raise ClusterSyntaxError(f"label must be 1, 2 or 3, got {label}", lineno)
            if not 1 <= parent < ident:
                raise OrderViolation(f"parent {parent} must precede point {ident}", lineno)
            if (parent, label) in seen:
                raise LabelClash(
                    f"point {parent} already has a child with label {label} "
                    f"(line {seen[parent, label]})",
                    lineno,
                )
            seen[parent, label] = lineno
            edges.append((ident, parent, label))
        mults.append(mult)
    if not mults:
        raise ClusterSyntaxError("no point records")
    return make_cluster(edges, mults)


def render_cluster_file(cl: Cluster) -> str:
    c = cl.constellation
    lines = []
    for j in cl.points:
        p, a = c.parent(j), c.label(j)
        lines.append(f"{j} {'-' if p is None else p} {'-' if a is None else a} {cl.m(j)}")
    return "\n".join(lines) + "\n"


def iter_inputs(text: str) -> Iterator[tuple[int, str]]:
    """Yield ``(line, cluster text)``: one item for a plain file, one per NDJSON line."""
    stripped = text.lstrip()
    if not stripped.startswith("{"):
        yield 1, text
        return
    for lineno, raw in enumerate(text.splitlines(), start=1):
        if not raw.strip():
            continue
        try:
            obj = json.loads(raw)
        except json.JSONDecodeError as exc:
            raise ClusterSyntaxError(f"invalid JSON: {exc.msg}", lineno) from None
        if not isinstance(obj, dict) or not isinstance(obj.get("cluster"), str):
            raise ClusterSyntaxError("JSON input needs a string field 'cluster'", lineno)
        yield lineno, obj["cluster"]


# ---------------------------------------------------------------------------
# JSON helpers
# ---------------------------------------------------------------------------


def q(x: Fraction | int) -> str:
    """Exact rational as ``"a/b"`` (or ``"a"``)."""
    return format_rational(Fraction(x))


def zeta_json(f: RationalFunctionQ, r: int) -> dict[str, Any]:
    return {
        "r": r,
        "text": f.render(),
        "scalar": q(f.scalar),
        "numerator": [q(c) for c in f.numerator.coeffs],
        "denominator": [
            {"N": N, "nu": nu, "power": k} for (N, nu), k in f.denominator_factors
        ],
    }


def poles_json(f: RationalFunctionQ, cl: Cluster) -> dict[str, Any]:
    report = poles(f, numerical_data(cl))
    return {
        "poles": [
            {
                "s0": q(p.s0),
                "order": p.order,
                "leading_coefficient": q(p.leading_laurent_coefficient),
            }
            for p in report.poles
        ],
        "candidates": [q(c) for c in report.candidate_poles],
    }


# ---------------------------------------------------------------------------
# Commands
# ---------------------------------------------------------------------------


@dataclass
class Outcome:
    ok: bool
    payload: dict[str, Any]
    text: str
    diagnostics: list[str] = field(default_factory=list)


def _require_analysable(cl: Cluster) -> list[str]:
    problems = []
    for j in cl.points:
        if cl.m(j) < 1:
            problems.append(f"m_{j} = {cl.m(j)}: analysis needs multiplicities >= 1")
    report = validate_idealistic(cl)
    for i, (a, b), s in report.violations:
        problems.append(f"proximity inequality at Q_{i} for labels ({a},{b}) fails by {-s}")
    return problems


def cmd_validate(cl: Cluster, args: argparse.Namespace) -> Outcome:
    report = validate_idealistic(cl)
    positive = all(cl.m(j) >= 1 for j in cl.points)
    violations = [
        {"point": i, "labels": [a, b], "slack": s} for i, (a, b), s in report.violations
    ]
    payload = {
        "idealistic": report.idealistic,
        "positive_multiplicities": positive,
        "violations": violations,
        "points": cl.r,
    }
    lines = [f"points: {cl.r}", f"idealistic: {'yes' if report.idealistic else 'no'}"]
    lines += [f"  Q_{v['point']} labels {tuple(v['labels'])}: slack {v['slack']}" for v in violations]
    if not positive:
        lines.append("some multiplicity is zero")
    return Outcome(report.idealistic and positive, payload, "\n".join(lines))


def cmd_info(cl: Cluster, args: argparse.Namespace) -> Outcome:
    px = derive_proximity(cl.constellation)
    nd = numerical_data(cl, px)
    c = cl.constellation
    rows = []
    for j in cl.points:
        rows.append(
            {
                "point": j,
                "parent": c.parent(j),
                "label": c.label(j),
                "multiplicity": cl.m(j),
                "w": list(px.w(j)),
                "N": nd.N[j],
                "nu": nd.nu[j],
                "proximate_to": px.proximate_of(j),
                "labels_below": sorted(px.labels_below[j]),
            }
        )
    payload = {"numerical_data": {"origin": {"N": nd.N[0], "nu": nd.nu[0]}, "points": rows}}
    lines = ["point parent label m  w          N    nu   proximate to"]
    for row in rows:
        lines.append(
            f"{row['point']:>5} {row['parent'] or '-':>6} {row['label'] or '-':>5} "
            f"{row['multiplicity']:<2} {str(tuple(row['w'])):<10} {row['N']:<4} {row['nu']:<4} "
            f"{', '.join(map(str, row['proximate_to'])) or '-'}"
        )
    return Outcome(True, payload, "\n".join(lines))


def cmd_chi(cl: Cluster, args: argparse.Namespace) -> Outcome:
    table = strata_table(cl)
    px = derive_proximity(cl.constellation)
    strata = [
        {"indices": list(key), "chi": chi}
        for key, chi in sorted(table.entries.items(), key=lambda kv: (len(kv[0]), kv[0]))
        if chi != 0
    ]
    decomposition = []
    for i in cl.points:
        d = drt(cl, px, i)
        decomposition.append({"point": i, "D": d.D, "R": d.R, "T": d.T, "chi": d.chi})
    payload = {"strata": {"entries": strata, "drt": decomposition}}
    lines = ["stratum                chi"]
    lines += [f"{'E_' + ','.join(map(str, s['indices'])):<22} {s['chi']:>4}" for s in strata]
    lines.append("")
    lines.append("point     D    R    T  chi")
    lines += [
        f"{d['point']:>5} {d['D']:>5} {d['R']:>4} {d['T']:>4} {d['chi']:>4}" for d in decomposition
    ]
    ok = all(d["chi"] == table.single(d["point"]) for d in decomposition)
    return Outcome(ok, payload, "\n".join(lines))


def cmd_classify(cl: Cluster, args: argparse.Namespace) -> Outcome:
    px = derive_proximity(cl.constellation)
    rows = []
    for i in cl.points:
        sc = classify_sign(cl, px, i)
        rows.append(
            {
                "point": i,
                "chi": sc.chi,
                "sign": sc.sign.value,
                "patterns": list(sc.matched_patterns),
                "consistent": sc.consistent,
            }
        )
    payload = {"classification": rows}
    lines = ["point  chi  sign      patterns"]
    lines += [
        f"{r['point']:>5} {r['chi']:>4}  {r['sign']:<9} {' '.join(r['patterns']) or '-'}"
        + ("" if r["consistent"] else "   INCONSISTENT")
        for r in rows
    ]
    return Outcome(all(r["consistent"] for r in rows), payload, "\n".join(lines))


def _zeta_for(cl: Cluster, r: int) -> RationalFunctionQ:
    return z_top(cl) if r == 1 else z_top_r(cl, r)


def cmd_zeta(cl: Cluster, args: argparse.Namespace) -> Outcome:
    f = _zeta_for(cl, args.r)
    return Outcome(True, {"zeta": zeta_json(f, args.r)}, f.render())


def cmd_poles(cl: Cluster, args: argparse.Namespace) -> Outcome:
    f = _zeta_for(cl, args.r)
    data = poles_json(f, cl)
    lines = [f"{p['s0']}  order {p['order']}  leading coefficient {p['leading_coefficient']}" for p in data["poles"]]
    return Outcome(True, {"poles": data["poles"], "candidates": data["candidates"]}, "\n".join(lines) or "no poles")


EXPAND_DEGREE_LIMIT = 256  # Milnor numbers grow quickly; larger products stay factored


def _monodromy_json(cl: Cluster, expand: bool = True) -> tuple[dict[str, Any], str]:
    cp = acampo(cl)
    exps = cp.exponents
    data: dict[str, Any] = {
        "exponents": {str(d): e for d, e in sorted(exps.items())},
        "milnor_number": cp.milnor_number,
        "is_polynomial": cp.is_polynomial(),
    }
    product = " ".join(f"Phi_{d}^{e}" for d, e in sorted(exps.items())) or "1"
    lines = [f"characteristic polynomial: {product}", f"Milnor number: {cp.milnor_number}"]
    try:
        orders = sorted(eigenvalue_orders(cp))
        data["eigenvalue_orders"] = orders
        small = expand and cp.milnor_number <= EXPAND_DEGREE_LIMIT
        data["characteristic_polynomial"] = cp.expand() if small else None
        lines.append(f"eigenvalue orders: {', '.join(map(str, orders)) or '-'}")
    except NegativeExponent:
        data["eigenvalue_orders"] = None
        data["characteristic_polynomial"] = None
        lines.append("cyclotomic exponents are not all nonnegative")
    return data, "\n".join(lines)


def cmd_monodromy(cl: Cluster, args: argparse.Namespace) -> Outcome:
    data, text = _monodromy_json(cl)
    return Outcome(data["is_polynomial"], {"monodromy": data}, text)


def cmd_check(cl: Cluster, args: argparse.Namespace) -> Outcome:
    fc = full_check(cl, args.r_max)
    mono, _ = _monodromy_json(cl, expand=False)
    mono["conjecture"] = {
        "verdict": fc.monodromy.verdict,
        "poles": [
            {"s0": q(c.s0), "order": c.order, "b": c.b, "J_b": list(c.J_b), "chi_sum": c.chi_sum}
            for c in fc.monodromy.checks
        ],
    }
    holo = {
        "verdict": fc.holomorphy.verdict,
        "orders": sorted(fc.holomorphy.orders),
        "tested": fc.holomorphy.tested,
        "failures": [c.r for c in fc.holomorphy.checks if not c.verdict],
    }
    payload = {
        "verdict": fc.verdict,
        "poles": [
            {"s0": q(p.s0), "order": p.order, "leading_coefficient": q(p.leading_laurent_coefficient)}
            for p in fc.pole_report.poles
        ],
        "monodromy": mono,
        "holomorphy": holo,
        "positive_chi": {
            "verdict": fc.positive_chi.verdict,
            "points": [c.j for c in fc.positive_chi.checks if not c.verdict],
        },
        "compensation": {
            "verdict": all(c.verdict for c in fc.compensation),
            "chains": [{"t": c.t, "chain": list(c.chain), "verdict": c.verdict} for c in fc.compensation],
        },
        "consistency": fc.consistency,
    }
    pole_text = ", ".join(
        p["s0"] + (f" (order {p['order']})" if p["order"] > 1 else "") for p in payload["poles"]
    )
    lines = [
        f"poles: {pole_text or '-'}",
        f"monodromy conjecture: {'holds' if fc.monodromy.verdict else 'FAILS'}",
        f"holomorphy conjecture: {'holds' if fc.holomorphy.verdict else 'FAILS'}"
        f" ({len(holo['tested'])} values of r tested)",
        f"positive chi eigenvalues: {'ok' if fc.positive_chi.verdict else 'FAIL'}",
        f"negative chi compensation: {'ok' if payload['compensation']['verdict'] else 'FAIL'}",
        f"criterion consistency: {'ok' if fc.consistency else 'FAIL'}",
    ]
    return Outcome(fc.verdict, payload, "\n".join(lines))


def cmd_ideal(cl: Cluster, args: argparse.Namespace) -> Outcome:
    ideal = ideal_generators(cl)
    newton = newton_polyhedron(cl)
    gens = list(ideal.generators)
    data: dict[str, Any] = {
        "generators": [list(g) for g in gens],
        "monomials": [render_monomial(g) for g in gens],
        "complete": is_complete(gens, cl),
        "facets": [
            {
                "point": st.j,
                "w": list(st.inequality[0]),
                "v": st.inequality[1],
                "essential": st.essential,
                "D": st.D,
                "witness": None if st.witness is None else list(st.witness),
            }
            for st in newton.statuses
        ],
        "essential_facets": list(newton.essential_facets),
        "rees_agreement": all(st.agrees for st in newton.statuses),
    }
    lines = [f"{len(gens)} generators: {', '.join(data['monomials'])}"]
    lines.append(
        "facets: "
        + ", ".join(f"Q_{st.j}" for st in newton.statuses if st.essential)
        + ("" if data["rees_agreement"] else "   (differs from the Rees criterion)")
    )
    if args.general is not None:
        terms = general_element(cl, args.general)
        data["general_element"] = {
            "seed": args.general,
            "terms": [{"exponent": list(a), "coefficient": q(c)} for a, c in terms],
            "text": render_polynomial(terms),
        }
        lines.append(f"general element: {data['general_element']['text']}")
    return Outcome(data["complete"], {"ideal": data}, "\n".join(lines))


COMMANDS: dict[str, tuple[Callable[[Cluster, argparse.Namespace], Outcome], bool]] = {
    # name -> (handler, needs an idealistic cluster with positive multiplicities)
    "validate": (cmd_validate, False),
    "info": (cmd_info, False),
    "chi": (cmd_chi, True),
    "classify": (cmd_classify, True),
    "zeta": (cmd_zeta, True),
    "poles": (cmd_poles, True),
    "monodromy": (cmd_monodromy, True),
    "check": (cmd_check, True),
    "ideal": (cmd_ideal, True),
}


# ---------------------------------------------------------------------------
# Argument parsing and dispatch
# ---------------------------------------------------------------------------


def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--json", action="store_true", default=argparse.SUPPRESS, help="emit JSON")

    parser = argparse.ArgumentParser(
        prog="clusterzeta",
        description="Zeta functions and monodromy of surfaces general for a toric cluster.",
        parents=[common],
    )
    parser.add_argument("--version", action="version", version=f"%(prog)s {__version__}")
    sub = parser.add_subparsers(dest="command", required=True, metavar="COMMAND")

    def with_file(name: str, help_text: str) -> argparse.ArgumentParser:
        p = sub.add_parser(name, help=help_text, parents=[common])
        p.add_argument("file", nargs="?", default="-", help="cluster file or NDJSON ('-' = stdin)")
        return p

    with_file("validate", "check the linear proximity inequalities")
    with_file("info", "numerical data and proximity")
    with_file("chi", "Euler characteristics of strata and the D - R + T decomposition")
    with_file("classify", "sign of each Euler characteristic and matching patterns")
    for name, what in (("zeta", "the topological zeta function"), ("poles", "poles of the zeta function")):
        p = with_file(name, what)
        p.add_argument("--r", type=int, default=1, help="restrict to divisors with r | N (default 1)")
    p = with_file("monodromy", "characteristic polynomial of monodromy")
    p = with_file("check", "verify the monodromy and holomorphy conjectures")
    p.add_argument("--r-max", type=int, default=None, help="largest r for the holomorphy check")
    p = with_file("ideal", "complete monomial ideal and Newton polyhedron")
    p.add_argument("--general", type=int, metavar="SEED", default=None, help="emit a general element")
    p = sub.add_parser("random", help="random idealistic clusters", parents=[common])
    p.add_argument("--points", type=int, required=True)
    p.add_argument("--seed", type=int, required=True)
    p.add_argument("--count", type=int, default=None, help="emit COUNT clusters as NDJSON")
    p = sub.add_parser("selftest", help="run the built-in fixture and invariant checks", parents=[common])
    p.add_argument("--corpus", type=int, default=60, help="number of random clusters to test")
    return parser


def _read_input(path: str) -> str:
    if path == "-":
        return sys.stdin.read()
    with open(path, encoding="utf-8") as fh:
        return fh.read()


def _emit(out, outcome: Outcome, as_json: bool, batch: bool) -> None:
    if as_json:
        body = dict(outcome.payload)
        body["ok"] = outcome.ok
        out.write(json.dumps(body, sort_keys=True, indent=None if batch else 2) + "\n")
    else:
        out.write(outcome.text + "\n")


def run(argv: Sequence[str] | None = None, stdout=None, stderr=None) -> int:
    out = stdout or sys.stdout
    err = stderr or sys.stderr
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:  # argparse reports usage errors with status 2
        return int(exc.code or 0)
    as_json = getattr(args, "json", False)

    if args.command == "random":
        return _run_random(args, out, err, as_json)
    if args.command == "selftest":
        from .selftest import run_selftest

        return run_selftest(out, as_json=as_json, corpus=args.corpus)

    handler, needs_analysis = COMMANDS[args.command]
    try:
        text = _read_input(args.file)
        inputs = list(iter_inputs(text))
    except OSError as exc:
        err.write(f"error: {exc}\n")
        return EXIT_USAGE
    except ParseError as exc:
        err.write(f"error: {exc}\n")
        return EXIT_USAGE
    batch = len(inputs) > 1 or text.lstrip().startswith("{")

    status = EXIT_OK
    for index, (lineno, cluster_text) in enumerate(inputs):
        where = f"input {index + 1}: " if batch else ""
        try:
            cl = parse_cluster_file(cluster_text)
        except ParseError as exc:
            err.write(f"error: {where}{exc}\n")
            return EXIT_USAGE
        except ClusterError as exc:
            err.write(f"error: {where}{exc}\n")
            return EXIT_USAGE
        if needs_analysis:
            problems = _require_analysable(cl)
            if problems:
                for msg in problems:
                    err.write(f"{where}{msg}\n")
                status = max(status, EXIT_VERDICT)
                if as_json:
                    _emit(out, Outcome(False, {"idealistic": False, "problems": problems}, ""), True, batch)
                continue
        try:
            outcome = handler(cl, args)
        except BoundOverflow as exc:
            err.write(f"error: {where}{exc}\n")
            status = max(status, EXIT_VERDICT)
            continue
        except ClusterError as exc:
            err.write(f"error: {where}{exc}\n")
            status = max(status, EXIT_VERDICT)
            continue
        if batch and not as_json:
            out.write(f"# input {index + 1}: {'ok' if outcome.ok else 'FAIL'}\n")
        _emit(out, outcome, as_json, batch)
        if not outcome.ok:
            status = max(status, EXIT_VERDICT)
    return status


def _run_random(args: argparse.Namespace, out, err, as_json: bool) -> int:
    if args.points < 1:
        err.write("error: --points must be at least 1\n")
        return EXIT_USAGE
    if args.count is not None and args.count < 1:
        err.write("error: --count must be at least 1\n")
        return EXIT_USAGE
    count = 1 if args.count is None else args.count
    ndjson = as_json or args.count is not None
    for n in range(count):
        seed = args.seed + n
        cl = random_idealistic_cluster(args.points, seed)
        text = render_cluster_file(cl)
        if ndjson:
            out.write(json.dumps({"cluster": text, "points": args.points, "seed": seed}, sort_keys=True) + "\n")
        else:
            out.write(text)
    return EXIT_OK


def main(argv: Sequence[str] | None = None) -> None:
    sys.exit(run(argv))


__all__ = [
    "EXIT_OK",
    "EXIT_USAGE",
    "EXIT_VERDICT",
    "build_parser",
    "iter_inputs",
    "main",
    "parse_cluster_file",
    "render_cluster_file",
    "run",
]
