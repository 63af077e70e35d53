"""Command-line front end.

    quadcy COMMAND FILE [options]

Exit status is 0 when a result was computed (a "no" verdict included), 1 for
malformed input and 2 when the engine could not certify a result.
"""

from __future__ import annotations

import argparse
import itertools
import sys
from fractions import Fraction
from typing import Callable, Dict, List, Optional, Sequence

from . import dsl
from .errors import DocumentError, EngineError, InputError, QuadcyError
from .extensions import (
    DEFAULT_SEARCH_BOUND,
    DoubleOreSpec,
    IteratedSpec,
    OreExtensionSpec,
    cy_double_ore,
    cy_iterated,
    cy_iterated_laurent,
    cy_laurent_diagonal,
    cy_ore,
    cy_skew_laurent,
    double_ore_extend,
    dual_presentation_double_ore,
    free_module_dims,
    iterated_extend,
    nakayama_double_ore,
    nakayama_iterated,
    nakayama_ore,
    ore_extend,
    require_koszul_regular,
)
from .frobenius import dual_of, frobenius_of_dual, hdet, nakayama_nu
from .morphisms import check_automorphism, det_l, det_r, wxyz, wxyz_inverse
from .quadratic import DEFAULT_DEGREE_BOUND, QuadraticPresentation, koszul_check
from .report import SCHEMA, to_json, to_text

COMMANDS = (
    "dual",
    "hilbert",
    "koszul-check",
    "nakayama",
    "hdet",
    "ore",
    "double-ore",
    "cy-ore",
    "cy-double-ore",
    "cy-laurent",
    "cy-laurent-diagonal",
    "cy-iterated",
    "cy-iterated-laurent",
)


class Context:
    """Everything a command needs: the document, one parameter point, and flags."""

    def __init__(self, doc: dsl.Document, env: Dict[str, Fraction], args):
        self.doc = doc
        self.env = env
        self.args = args
        self.field = dsl.document_field(doc, args.field)
        self.degree_bound = args.degree_bound
        self.search_bound = args.search_bound
        self._A: Optional[QuadraticPresentation] = None

    @property
    def A(self) -> QuadraticPresentation:
        if self._A is None:
            self._A = dsl.presentation(self.doc, self.env, self.field)
        return self._A

    def aut_names(self, want: Optional[int] = None) -> List[str]:
        names = list(self.args.aut or [])
        if self.args.ext:
            ext = self.doc.ext(self.args.ext)
            if ext.kind in ("ore", "iterated"):
                names = list(ext.args)
        if not names:
            names = [a.name for a in self.doc.auts]
            if want is not None:
                names = names[:want]
        if want is not None and len(names) != want:
            raise DocumentError(f"expected {want} automorphism(s), got {len(names)}")
        if not names:
            raise DocumentError("no automorphism given")
        return names

    def aut(self, name: str):
        return check_automorphism(self.A, dsl.aut_matrix(self.doc, name, self.env, self.field))

    def sigma_name(self) -> str:
        if self.args.sigma:
            return self.args.sigma
        if self.args.ext:
            ext = self.doc.ext(self.args.ext)
            if ext.kind == "double_ore":
                return ext.args[0]
        if not self.doc.sigmas:
            raise DocumentError("no sigma given")
        return self.doc.sigmas[0].name

    def double_ore_spec(self) -> DoubleOreSpec:
        p, q, blocks = dsl.sigma_data(self.doc, self.sigma_name(), self.env, self.field)
        return DoubleOreSpec.build(self.A, p, q, blocks)


def _presentation(P: QuadraticPresentation, bound: int) -> dict:
    return {"generators": list(P.generator_names), "relations": P.relation_strings(), "dims": P.hilbert(bound)}


def _verdict(v) -> dict:
    return {
        "status": v.status,
        "witness": list(v.witness) if v.witness is not None else None,
        "reasons": v.reasons,
        "bound_used": v.bound_used,
        "diagnostics": v.diagnostics,
    }


def _desc(d) -> dict:
    out = {"on_base": d.on_base, "on_new_generators": d.on_new_generators, "full": d.full()}
    if d.engine is not None:
        out["engine"] = d.engine
        out["agrees_with_engine"] = d.agrees_with_engine()
    out.update(d.extra)
    return out


def cmd_hilbert(ctx: Context) -> dict:
    return _presentation(ctx.A, ctx.degree_bound)


def cmd_dual(ctx: Context) -> dict:
    return _presentation(dual_of(ctx.A), ctx.degree_bound)


def cmd_koszul(ctx: Context) -> dict:
    return koszul_check(ctx.A, ctx.degree_bound).as_dict()


def cmd_nakayama(ctx: Context) -> dict:
    rep = require_koszul_regular(ctx.A, ctx.degree_bound)
    res = nakayama_nu(ctx.A)
    F = frobenius_of_dual(ctx.A)
    return {
        "nu": res.nu,
        "mu_dual": res.mu,
        "top_degree": res.top_degree,
        "dual_dims": [F.algebra.dim(k) for k in range(res.top_degree + 1)],
        "hdet_nu": hdet(ctx.A, res.nu),
        "koszul": rep.as_dict(),
    }


def cmd_hdet(ctx: Context) -> dict:
    name = ctx.aut_names(1)[0]
    th = ctx.aut(name)
    return {"automorphism": name, "matrix": th.matrix, "hdet": hdet(ctx.A, th)}


def _ore_spec(ctx: Context) -> OreExtensionSpec:
    name = ctx.aut_names(1)[0]
    return OreExtensionSpec.build(ctx.A, ctx.aut(name).matrix)


def cmd_ore(ctx: Context) -> dict:
    spec = _ore_spec(ctx)
    D = ore_extend(spec)
    out = _presentation(D, ctx.degree_bound)
    out["expected_dims"] = free_module_dims(ctx.A, 1, ctx.degree_bound)
    out["nakayama"] = _desc(nakayama_ore(spec, True, ctx.degree_bound))
    return out


def cmd_double_ore(ctx: Context) -> dict:
    spec = ctx.double_ore_spec()
    phi = spec.inverse()
    B = double_ore_extend(spec)
    Bd = dual_presentation_double_ore(spec, phi)
    out = _presentation(B, ctx.degree_bound)
    out["expected_dims"] = free_module_dims(ctx.A, 2, ctx.degree_bound)
    out["dual"] = {"generators": list(Bd.generator_names), "relations": Bd.relation_strings(), "matches_computed": True}
    out["det_r"] = det_r(ctx.A, spec.sigma).matrix
    out["det_l"] = det_l(spec.sigma, phi).matrix
    out["wxyz"] = wxyz(ctx.A, spec.sigma)
    out["wxyz_inverse"] = wxyz_inverse(ctx.A, phi)
    out["nakayama"] = _desc(nakayama_double_ore(spec, True, ctx.degree_bound))
    return out


def cmd_cy_ore(ctx: Context) -> dict:
    return _verdict(cy_ore(_ore_spec(ctx), ctx.degree_bound))


def cmd_cy_double_ore(ctx: Context) -> dict:
    return _verdict(cy_double_ore(ctx.double_ore_spec(), ctx.degree_bound))


def cmd_cy_laurent(ctx: Context) -> dict:
    name = ctx.aut_names(1)[0]
    return _verdict(cy_skew_laurent(ctx.A, ctx.aut(name).matrix, ctx.search_bound, ctx.degree_bound))


def cmd_cy_laurent_diagonal(ctx: Context) -> dict:
    if ctx.args.sigma or (ctx.doc.sigmas and not ctx.args.aut):
        p, q, blocks = dsl.sigma_data(ctx.doc, ctx.sigma_name(), ctx.env, ctx.field)
        if q or not blocks[0][1].is_zero() or not blocks[1][0].is_zero():
            raise DocumentError("a diagonal sigma needs q = 0 and S12 = S21 = 0")
        tau, xi = blocks[0][0], blocks[1][1]
    else:
        if ctx.args.p is None:
            raise DocumentError("give --sigma, or two --aut and --p")
        tau_n, xi_n = ctx.aut_names(2)
        tau, xi = ctx.aut(tau_n).matrix, ctx.aut(xi_n).matrix
        p = ctx.field(Fraction(ctx.args.p))
    return _verdict(cy_laurent_diagonal(ctx.A, p, tau, xi, ctx.search_bound, ctx.degree_bound))


def _iterated_spec(ctx: Context) -> IteratedSpec:
    names = ctx.aut_names()
    return IteratedSpec.build(ctx.A, [ctx.aut(n).matrix for n in names])


def cmd_cy_iterated(ctx: Context) -> dict:
    spec = _iterated_spec(ctx)
    out = _verdict(cy_iterated(spec, ctx.degree_bound))
    out["nakayama"] = _desc(nakayama_iterated(spec, True, ctx.degree_bound))
    out["dims"] = iterated_extend(spec).hilbert(ctx.degree_bound)
    return out


def cmd_cy_iterated_laurent(ctx: Context) -> dict:
    return _verdict(cy_iterated_laurent(_iterated_spec(ctx), ctx.search_bound, ctx.degree_bound))


HANDLERS: Dict[str, Callable[[Context], dict]] = {
    "dual": cmd_dual,
    "hilbert": cmd_hilbert,
    "koszul-check": cmd_koszul,
    "nakayama": cmd_nakayama,
    "hdet": cmd_hdet,
    "ore": cmd_ore,
    "double-ore": cmd_double_ore,
    "cy-ore": cmd_cy_ore,
    "cy-double-ore": cmd_cy_double_ore,
    "cy-laurent": cmd_cy_laurent,
    "cy-laurent-diagonal": cmd_cy_laurent_diagonal,
    "cy-iterated": cmd_cy_iterated,
    "cy-iterated-laurent": cmd_cy_iterated_laurent,
}


# -- parameters ---------------------------------------------------------------


def parse_sets(items: Sequence[str]) -> Dict[str, Fraction]:
    out = {}
    for item in items or ():
        name, sep, value = item.partition("=")
        if not sep or not name.strip():
            raise DocumentError(f"--set expects NAME=VALUE, got {item!r}")
        try:
            out[name.strip()] = Fraction(value.strip())
        except ValueError:
            raise DocumentError(f"--set value for {name.strip()!r} is not a rational literal") from None
    return out


def grid(doc: dsl.Document, sets: Dict[str, Fraction]) -> List[Dict[str, Fraction]]:
    """All parameter points, in lexicographic order of declaration and value lists."""
    axes = []
    for p in doc.params:
        values = [sets[p.name]] if p.name in sets else p.expand()
        axes.append((p.name, values))
    extra = {k: v for k, v in sets.items() if doc.param(k) is None}
    points = []
    for combo in itertools.product(*(vals for _, vals in axes)):
        env = dict(extra)
        env.update({name: v for (name, _), v in zip(axes, combo)})
        points.append(env)
    return points


def single_point(doc: dsl.Document, sets: Dict[str, Fraction]) -> Dict[str, Fraction]:
    for p in doc.params:
        if p.name not in sets and len(p.expand()) != 1:
            raise DocumentError(f"parameter {p.name!r} has {len(p.expand())} values; use --set or sweep")
    pts = grid(doc, sets)
    return pts[0]


# -- entry point ---------------------------------------------------------------


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        self.print_usage(sys.stderr)
        sys.stderr.write(f"{self.prog}: error: {message}\n")
        raise SystemExit(1)


def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("file", help="presentation document ('-' for stdin)")
    common.add_argument("--degree-bound", type=int, default=DEFAULT_DEGREE_BOUND)
    common.add_argument("--search-bound", type=int, default=DEFAULT_SEARCH_BOUND)
    common.add_argument("--field", default=None, help="q, or Fp for a prime p (e.g. F7)")
    common.add_argument("--format", choices=("json", "text"), default="json")
    common.add_argument("--set", action="append", metavar="NAME=VALUE", help="fix a parameter")
    common.add_argument("--aut", action="append", metavar="NAME", help="automorphism (repeatable)")
    common.add_argument("--sigma", metavar="NAME")
    common.add_argument("--ext", metavar="NAME", help="use a declared extension")
    common.add_argument("--p", metavar="VALUE", help="p for cy-laurent-diagonal with two --aut")

    parser = _Parser(prog="quadcy", description="Nakayama automorphisms and Calabi-Yau tests for quadratic algebras.")
    sub = parser.add_subparsers(dest="command", required=True, parser_class=_Parser)
    for c in COMMANDS:
        sub.add_parser(c, parents=[common])
    sw = sub.add_parser("sweep", parents=[common], help="run a command over the parameter grid")
    sw.add_argument("--command", dest="inner", required=True, choices=COMMANDS)
    return parser


def _read(path: str) -> str:
    if path == "-":
        return sys.stdin.read()
    try:
        with open(path, encoding="utf-8") as fh:
            return fh.read()
    except OSError as exc:
        raise DocumentError(f"cannot read {path}: {exc.strerror}") from None


def execute(args) -> dict:
    """Run a parsed command line; returns the report or raises ``QuadcyError``."""
    for flag in ("degree_bound", "search_bound"):
        if getattr(args, flag) < (2 if flag == "degree_bound" else 0):
            raise DocumentError(f"--{flag.replace('_', '-')} is too small")
    doc = dsl.parse(_read(args.file))
    sets = parse_sets(args.set)
    field = dsl.document_field(doc, args.field)
    report = {
        "schema": SCHEMA,
        "command": args.command,
        "input": args.file,
        "field": field.name,
        "degree_bound": args.degree_bound,
        "search_bound": args.search_bound,
    }
    if args.command == "sweep":
        report["sweep_command"] = args.inner
        rows = []
        for env in grid(doc, sets):
            row = {"params": {k: str(env[k]) for k in (p.name for p in doc.params)}}
            try:
                row["result"] = HANDLERS[args.inner](Context(doc, env, args))
            except QuadcyError as exc:
                row["error"] = exc.payload()
            rows.append(row)
        report["result"] = {"rows": rows}
        return report
    env = single_point(doc, sets)
    report["params"] = {k: str(v) for k, v in sorted(env.items())}
    report["result"] = HANDLERS[args.command](Context(doc, env, args))
    return report


def main(argv: Optional[Sequence[str]] = None) -> int:
    args = build_parser().parse_args(argv)
    try:
        report = execute(args)
    except InputError as exc:
        sys.stderr.write(to_json({"schema": SCHEMA, **exc.payload()}))
        return 1
    except EngineError as exc:
        sys.stderr.write(to_json({"schema": SCHEMA, **exc.payload()}))
        return 2
    text = to_json(report) if args.format == "json" else to_text(report)
    sys.stdout.write(text)
    return 0


if __name__ == "__main__":
    sys.exit(main())
