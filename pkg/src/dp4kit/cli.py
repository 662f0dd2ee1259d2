"""Command-line interface: every computation as a subcommand with JSON (or TSV) output.

Exit codes: 0 success, 2 invalid input or usage, 3 evaluation budget exceeded.
Every payload carries "schema": "dp4kit/1"; formats are described in docs/formats.md.
"""

from __future__ import annotations

import argparse
import json
import os
import random
import sys
from dataclasses import dataclass
from typing import Callable, Sequence

from . import census as census_mod
from . import lattice
from .algebra.binary import BinaryForm
from .algebra.fields import GF, FieldError, FieldSpec, field_from_json
from .fibration import cases as cases_mod
from .fibration.numerology import (
    conic_family_params,
    expected_dims_high_height,
    numerology,
    rr_quartic_count,
    section_count_table,
)
from .fibration.discriminant import discriminant_profile
from .fibration.model import FibrationModel, ModelError, base_point, fiber_at, generate_model
from .fibration.sections import distinguished_sections
from .pencil import (
    DegeneratePencilError,
    QuadricPencil,
    classify_stability,
    diagonal_pencil,
    find_split_diagonal_surface,
    lines_on_surface,
    nodal_normal_form,
    random_nodal_data,
    rho_limit,
    sign_flip_orbit,
)
from .quintic import UnstableQuinticError, invariants_quintic, weighted_normal_form, xi_of_pencil
from .varieties import BudgetExceeded

SCHEMA = "dp4kit/1"


class UsageError(ValueError):
    pass


@dataclass
class CommandResult:
    status: int
    payload: dict
    tsv: str | None = None

    def render(self, tsv: bool = False) -> str:
        if tsv:
            if self.tsv is None:
                raise UsageError("this command has no tabular output")
            return self.tsv
        return json.dumps(self.payload, indent=2) + "\n"


def _payload(kind: str, **fields) -> dict:
    return {"schema": SCHEMA, "kind": kind, **fields}


def _tsv(header: Sequence[str], rows) -> str:
    lines = ["\t".join(header)]
    for r in rows:
        lines.append("\t".join("" if v is None else str(v) for v in r))
    return "\n".join(lines) + "\n"


# -- input helpers


def _read_json(path: str) -> dict:
    if path == "-":
        return json.load(sys.stdin)
    with open(path) as fh:
        return json.load(fh)


def _field(args) -> FieldSpec:
    if args.p is None:
        raise UsageError("--p is required")
    return GF(args.p, args.k)


def _csv(text: str) -> list[str]:
    return [x.strip() for x in text.split(";" if ";" in text else ",") if x.strip()]


def _pencil(args) -> QuadricPencil:
    if getattr(args, "input", None):
        return QuadricPencil.from_json(_read_json(args.input))
    if getattr(args, "diagonal", None):
        F = _field(args)
        c = _csv(args.diagonal)
        a = _csv(args.a) if getattr(args, "a", None) else None
        return diagonal_pencil(F, [F(x) for x in c], [F(x) for x in a] if a else None)
    if getattr(args, "nodal", False):
        F = _field(args)
        R1, R2, l1 = random_nodal_data(F, random.Random(args.seed))
        return nodal_normal_form(F, R1, R2, l1)
    raise UsageError("give a pencil file, --diagonal, or --nodal")


def _model(path: str) -> FibrationModel:
    return FibrationModel.from_json(_read_json(path))


def _point(field: FieldSpec, text: str):
    if text.strip().lower() in ("inf", "infinity", "oo"):
        return base_point(field, "inf")
    return base_point(field, field(text))


def _quadrics(args) -> tuple[FieldSpec, list]:
    if args.split:
        F = _field(args)
        return F, census_mod.split_height20_quadrics(F)
    if not args.input:
        raise UsageError("give a quadrics file or --split")
    obj = _read_json(args.input)
    F = field_from_json(obj["field"])
    quads = obj.get("quadrics")
    if quads is None:
        raise UsageError("the quadrics file needs a 'quadrics' list of symmetric matrices")
    return F, [[[F(x) for x in row] for row in M] for M in quads]


# -- commands


def cmd_classify(args) -> CommandResult:
    P = _pencil(args)
    out = {}
    if args.rho:
        out["original"] = classify_stability(P).to_json()
        P = rho_limit(P, [int(w) for w in _csv(args.rho)])
        out["limit"] = P.to_json()
    verdict = classify_stability(P)
    return CommandResult(0, _payload("stability", field=P.field.to_json(), **out, verdict=verdict.to_json()))


def cmd_lines(args) -> CommandResult:
    if args.find_split:
        P, found = find_split_diagonal_surface(max_k=args.k, seed=args.seed)
    else:
        P = _pencil(args)
        # --p/--k already build F_{p^k} for --diagonal; a pencil file is extended by k
        found = lines_on_surface(P, args.k if args.input else 1, force=args.force)
    payload = _payload("lines", field=P.field.to_json(), k=args.k, count=len(found), lines=[ln.to_json() for ln in found])
    if args.find_split or args.diagonal:
        payload["signOrbitSizes"] = sorted(len(o) for o in sign_flip_orbit(found))
    if args.find_split:
        payload["pencil"] = P.to_json()
    return CommandResult(0, payload)


def cmd_invariants(args) -> CommandResult:
    if args.input:
        obj = _read_json(args.input)
        if isinstance(obj, list):
            F = _field(args)
            f = BinaryForm(F, [F(c) for c in obj])
        elif "Q0" in obj:
            from .pencil import determinantal_quintic

            f = determinantal_quintic(QuadricPencil.from_json(obj))
        else:
            F = field_from_json(obj["field"])
            f = BinaryForm(F, [F(c) for c in obj["coeffs"]])
    elif args.coeffs:
        F = _field(args)
        f = BinaryForm(F, [F(c) for c in _csv(args.coeffs)])
    else:
        raise UsageError("give --coeffs or a quintic/pencil file")
    inv = invariants_quintic(f)
    out = _payload("quintic-invariants", field=f.field.to_json(), quintic=f.to_json(), invariants=inv.to_json())
    try:
        out["moduliPoint"] = weighted_normal_form(inv).to_json()
    except UnstableQuinticError as exc:
        out["moduliPoint"] = None
        out["note"] = str(exc)
    return CommandResult(0, out)


def cmd_xi(args) -> CommandResult:
    P = _pencil(args)
    return CommandResult(0, _payload("moduli-point", field=P.field.to_json(), point=xi_of_pencil(P).to_json()))


def cmd_lattice(args) -> CommandResult:
    if args.list_tables:
        tables = lattice.builtin_tables()
        return CommandResult(0, _payload("gram-tables", tables={k: v.to_json() for k, v in sorted(tables.items())}))
    table = _gram_table(args.table) if args.table else None
    if table is not None:
        out = _payload("gram-arithmetic", table=table.to_json(), discriminantGroup=lattice.discriminant_group(table))
        rows = []
        if args.expr:
            classes = [lattice.k3_class_arith(table, e) for e in args.expr]
            out["classes"] = [c.to_json() for c in classes]
            rows = [[c.expr, c.self_intersection] + [c.pairings[lab] for lab in table.labels] + [c.to_json()["genus"]] for c in classes]
        if args.pair:
            a, b = args.pair
            out["pairing"] = {"a": a, "b": b, "value": lattice.pair_exprs(table, a, b)}
        header = ["expr", "selfIntersection"] + [f"pair_{lab}" for lab in table.labels] + ["genus"]
        return CommandResult(0, out, _tsv(header, rows))
    exc = lattice.exceptional_classes()
    orb = lattice.orbit(lattice.E(1))
    out = _payload(
        "picard-lattice",
        weylOrder=len(lattice.weyl_group()),
        exceptionalClasses=[c.label() for c in exc],
        orbitE1Size=len(orb),
        orbitE1EqualsExceptional=sorted(orb) == sorted(exc),
        discriminantGroup=lattice.discriminant_group(lattice.lambda_gram()),
        canonicalSquare=lattice.pic_pairing(lattice.K, lattice.K),
    )
    return CommandResult(0, out)


def _gram_table(name: str) -> lattice.GramTable:
    tables = lattice.builtin_tables()
    if name in tables:
        return tables[name]
    if os.path.exists(name):
        return lattice.GramTable.from_json(_read_json(name))
    raise UsageError(f"unknown table {name!r}: not a file and not one of {', '.join(sorted(tables))}")


def cmd_numerology(args) -> CommandResult:
    if args.all:
        reports = [numerology(h, args.h11) for h in range(0, 43, 2)]
        rows = [r.to_json() for r in reports]
        tsv = _tsv(["h", "delta", "chi", "chiOmega1", "params"], [list(r.values()) for r in rows])
        return CommandResult(0, _payload("numerology-table", h11=args.h11, rows=rows), tsv)
    if args.height is None:
        raise UsageError("give --height H or --all")
    r = numerology(args.height, args.h11)
    body = r.to_json()
    tsv = _tsv(list(body), [list(body.values())])
    return CommandResult(0, {"schema": SCHEMA, **body}, tsv)


def cmd_cases(args) -> CommandResult:
    rows = cases_mod.case_table()
    header = list(rows[0])
    return CommandResult(0, _payload("case-table", rows=rows), _tsv(header, [[_cell(r[k]) for k in header] for r in rows]))


def _cell(v) -> str:
    if isinstance(v, (list, tuple)):
        return ",".join(str(x) for x in v)
    return str(v)


def cmd_generate(args) -> CommandResult:
    spec = cases_mod.CaseSpec(args.case, args.parity, args.n)
    model = generate_model(spec, _field(args), args.seed, max_retries=args.max_retries)
    return CommandResult(0, model.to_json())


def cmd_fiber(args) -> CommandResult:
    model = _model(args.input)
    pt = _point(model.field, args.t)
    P = fiber_at(model, pt)
    out = _payload("fiber", t=args.t, pencil=P.to_json(), verdict=classify_stability(P).to_json())
    if args.count:
        out["pointCount"] = {"k": args.k, "count": census_mod.fiber_point_count(model, pt, args.k, args.force)}
    if args.distinguished:
        out["distinguishedSections"] = distinguished_sections(model).to_json()
    return CommandResult(0, out)


def cmd_discriminant(args) -> CommandResult:
    model = _model(args.input)
    prof = discriminant_profile(model)
    return CommandResult(0, _payload("discriminant", valid=prof.is_valid(), **prof.to_json()))


def cmd_census(args) -> CommandResult:
    model = _model(args.input)
    rep = census_mod.census(model, args.deg, args.k, args.threads, args.force, counts=not args.no_counts)
    return CommandResult(0, rep.to_json(with_timing=args.timing), rep.tsv())


def cmd_basepoints(args) -> CommandResult:
    F, quads = _quadrics(args)
    rep = census_mod.base_points(quads, F, args.kmax, args.seed, args.force)
    out = rep.to_json()
    if args.split or args.gradient:
        out["gradientVanishes"] = all(census_mod.nodal_quartic_gradient_vanishes(quads, p.coords) for p in rep.points)
    rows = [[p.degree] + [c.to_str() for c in p.coords] for p in rep.points]
    return CommandResult(0, out, _tsv(["degree", "x0", "x1", "x2", "x3", "x4"], rows))


def cmd_rrcount(args) -> CommandResult:
    value = rr_quartic_count(args.deg, args.genus, args.ambient_degree)
    out = _payload("rr-count", deg=args.deg, genus=args.genus, ambientDegree=args.ambient_degree, count=value)
    return CommandResult(0, out, _tsv(["deg", "genus", "ambientDegree", "count"], [[args.deg, args.genus, args.ambient_degree, value]]))


def cmd_figure1(args) -> CommandResult:
    rows = []
    for d in range(args.dmax + 1):
        sec, params = section_count_table(d)
        rows.append({"d": d, "secancy": sec, "parameters": params})
    out = _payload("section-table", rows=rows)
    model = None
    if args.input:
        model = _model(args.input)
    elif args.p is not None:
        model = generate_model(cases_mod.CaseSpec(1, "odd", 0), _field(args), args.seed)
    if model is not None:
        out["lineCheck"] = census_mod.figure1_d1_check(model, args.force).to_json()
    tsv = _tsv(["d", "secancy", "parameters"], [[r["d"], r["secancy"], r["parameters"]] for r in rows])
    return CommandResult(0, out, tsv)


def cmd_expected_dims(args) -> CommandResult:
    rows = [r.to_json() for r in expected_dims_high_height()]
    header = list(rows[0])
    out = _payload("expected-dimensions", rows=rows, conicFamilyParams=conic_family_params())
    return CommandResult(0, out, _tsv(header, [[r[k] for k in header] for r in rows]))


# -- parser


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        raise UsageError(message)


def _add_field(p, required: bool = False):
    p.add_argument("--p", type=int, required=required, help="characteristic of the finite field")
    p.add_argument("--k", type=int, default=1, help="extension degree (default 1)")


def _add_pencil_input(p):
    p.add_argument("input", nargs="?", help="pencil JSON file ('-' for stdin)")
    p.add_argument("--diagonal", help="diagonal pencil: comma-separated c_0..c_4 (Q0 = sum x_i^2, Q1 = sum c_i x_i^2)")
    p.add_argument("--a", help="optional weights a_i for Q0 = sum a_i x_i^2")
    _add_field(p)


COMMANDS: dict[str, tuple[Callable, str]] = {}


def build_parser() -> argparse.ArgumentParser:
    parser = _Parser(prog="dp4kit", description="Exact computations for quartic del Pezzo surfaces and their fibrations over P^1.")
    common = _Parser(add_help=False)
    common.add_argument("-o", "--output", help="write the result to a file instead of stdout")
    common.add_argument("--tsv", action="store_true", help="tab-separated output where a table exists")
    common.add_argument("--force", action="store_true", help="ignore the evaluation budget (DP4KIT_BUDGET)")
    sub = parser.add_subparsers(dest="command", parser_class=_Parser)

    def add(name, fn, help_text):
        p = sub.add_parser(name, parents=[common], help=help_text, description=help_text)
        p.set_defaults(func=fn)
        return p

    p = add("classify", cmd_classify, "GIT verdict of a pencil of quadrics in P^4: stable (smooth), strictly semistable (ordinary nodes only) or unstable, from the determinantal quintic and its singular points. --rho applies the one-parameter-subgroup limit with the given weights first.")
    _add_pencil_input(p)
    p.add_argument("--nodal", action="store_true", help="use a random nodal normal form Q0 = x0 x4 + R2, Q1 = x0 l1 + R1")
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--rho", help="weights w_0..w_4 of the one-parameter subgroup, e.g. 1,0,0,0,-1")

    p = add("lines", cmd_lines, "The lines on a quartic del Pezzo surface over F_{p^k} by exhaustive search (16 over the algebraic closure); --find-split searches small fields for a diagonal surface with all sixteen lines rational and reports the orbits of the sign changes.")
    _add_pencil_input(p)
    p.add_argument("--ext", dest="k", type=int, help="same as --k")
    p.add_argument("--find-split", action="store_true")
    p.add_argument("--seed", type=int, default=0)

    p = add("invariants", cmd_invariants, "Invariants I4, I8, I12 of a binary quintic via transvectants, and its point of the weighted projective plane P(1,2,3).")
    p.add_argument("input", nargs="?", help="quintic JSON (array a_0..a_5 with --p, or {'field', 'coeffs'}) or a pencil file")
    p.add_argument("--coeffs", help="a_0..a_5 with f = sum a_i s^(5-i) t^i")
    _add_field(p)

    p = add("xi", cmd_xi, "Moduli point in P(1,2,3) of a smooth pencil, through the invariants of its determinantal quintic.")
    _add_pencil_input(p)

    p = add("lattice", cmd_lattice, "Picard lattice of a quartic del Pezzo surface (W(D5) order, orbit of E1, discriminant group, K.K) or arithmetic in a K3 Gram table: self-intersections, pairings, genus 1 + D^2/2.")
    p.add_argument("--table", help="built-in Gram table name (see --list-tables) or a JSON file with 'labels' and 'gram'")
    p.add_argument("--expr", action="append", help="class expression such as \"C - h\"; repeatable")
    p.add_argument("--pair", nargs=2, metavar=("A", "B"), help="pairing of two class expressions")
    p.add_argument("--list-tables", action="store_true")

    p = add("numerology", cmd_numerology, "Invariants of a quartic del Pezzo fibration of height h: number of singular fibers, topological Euler characteristic, chi(Omega^1) and the parameter count.")
    p.add_argument("--height", type=int)
    p.add_argument("--all", action="store_true", help="all even heights 0..42")
    p.add_argument("--h11", type=int, default=2)

    add("cases", cmd_cases, "The five constructions of fibrations in P^1 x P^k by parity: splitting of the ambient bundle, bidegrees of the defining forms, relative anticanonical twist and height (20n, 20n+10, 20n+8, ...).")

    p = add("generate", cmd_generate, "Random model of a case over F_{p^k} with squarefree discriminant of degree 2h, reproducible from --seed (Python's random.Random).")
    p.add_argument("--case", type=int, required=True)
    p.add_argument("--parity", choices=cases_mod.PARITIES, required=True)
    p.add_argument("--n", type=int, required=True)
    _add_field(p, required=True)
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--max-retries", type=int, default=200)

    p = add("fiber", cmd_fiber, "The fiber of a model over a point t of P^1 as a pencil of quadrics, with its stability verdict and optionally its point count.")
    p.add_argument("input", help="model JSON file")
    p.add_argument("--t", required=True, help="base point: a field element or 'inf'")
    p.add_argument("--count", action="store_true", help="count F_{q^k}-points of the fiber")
    p.add_argument("--k", type=int, default=1)
    p.add_argument("--distinguished", action="store_true", help="also report the distinguished constant sections")

    p = add("discriminant", cmd_discriminant, "Fiberwise discriminant of a model as a binary form of degree 2h in (s : t): degree, order at infinity and multiplicity profile.")
    p.add_argument("input", help="model JSON file")

    p = add("census", cmd_census, "Fiber point counts over P^1(F_q) and an exhaustive search for sections of degree <= --deg, each verified by exact substitution, with anticanonical heights.")
    p.add_argument("input", help="model JSON file")
    p.add_argument("--deg", type=int, default=1)
    p.add_argument("--k", type=int, default=1, help="count fiber points over F_{q^k}")
    p.add_argument("--threads", type=int, default=1)
    p.add_argument("--no-counts", action="store_true")
    p.add_argument("--timing", action="store_true", help="include wall-clock timings (output is then not reproducible)")

    p = add("basepoints", cmd_basepoints, "Common zeros of four quadrics in P^4 over F_{q^k}, k <= --kmax, with a multiplicity-free certificate; --split uses P1 = x1^2 - x0^2, Q1 = x2^2 - x0^2, P2 = x3^2 - x0^2, Q2 = x4^2 - x0^2 and checks that P1 Q2 - Q1 P2 is singular there.")
    p.add_argument("input", nargs="?", help="JSON file with 'field' and 'quadrics' (symmetric 5x5 matrices)")
    p.add_argument("--split", action="store_true")
    p.add_argument("--kmax", type=int, default=1)
    p.add_argument("--gradient", action="store_true", help="check the gradient of P1 Q2 - Q1 P2 (quadrics ordered P1, Q1, P2, Q2)")
    p.add_argument("--seed", type=int, default=0)
    _add_field(p)

    p = add("rrcount", cmd_rrcount, "Riemann-Roch count C(a+3, 3) - (a deg + 1 - genus) of degree-a surfaces in P^3 through a curve of the given degree and genus.")
    p.add_argument("--deg", type=int, required=True)
    p.add_argument("--genus", type=int, required=True)
    p.add_argument("--ambient-degree", type=int, default=4)

    p = add("figure1", cmd_figure1, "Secancy 2d - 1 and parameter count d + 1 of degree-d sections of a height-10 model; with a model (or --p) also certifies the degree-1 row: lines in the quadric threefold meeting the base curve once.")
    p.add_argument("input", nargs="?", help="case 1 odd n = 0 model JSON file")
    p.add_argument("--dmax", type=int, default=5)
    p.add_argument("--seed", type=int, default=0)
    _add_field(p)

    add("expected-dims", cmd_expected_dims, "Expected dimensions of nodal models of heights 14 to 20 next to the parameter counts, and the number of contracted sections.")
    return parser


def run(argv: Sequence[str] | None = None) -> tuple[CommandResult, argparse.Namespace | None]:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
        if args.command is None:
            raise UsageError("missing subcommand")
        return args.func(args), args
    except BudgetExceeded as exc:
        payload = _payload("error", error="budget", message=str(exc), estimate=exc.estimate, budget=exc.budget, partial=False)
        return CommandResult(3, payload), None
    except MemoryError:
        payload = _payload("error", error="memory", message="out of memory; the computation is too large even with --force", partial=False)
        return CommandResult(3, payload), None
    except (
        UsageError,
        ValueError,
        KeyError,
        FieldError,
        ModelError,
        DegeneratePencilError,
        ZeroDivisionError,
        OSError,
    ) as exc:
        message = exc.args[0] if isinstance(exc, KeyError) and exc.args else str(exc)
        return CommandResult(2, _payload("error", error=type(exc).__name__, message=str(message))), None


def main(argv: Sequence[str] | None = None) -> int:
    result, args = run(argv)
    if result.status != 0:
        sys.stderr.write(json.dumps(result.payload) + "\n")
        return result.status
    try:
        text = result.render(args.tsv)
    except UsageError as exc:
        sys.stderr.write(json.dumps(_payload("error", error="UsageError", message=str(exc))) + "\n")
        return 2
    if args.output:
        with open(args.output, "w") as fh:
            fh.write(text)
    else:
        sys.stdout.write(text)
    return 0


if __name__ == "__main__":
    sys.exit(main())
