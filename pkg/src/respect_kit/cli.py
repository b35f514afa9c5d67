"""Command line entry point ``respect-kit``.

Exit codes: 0 verified success, 1 verified negative, 2 unknown,
64 usage error, 65 unreadable input.
"""

from __future__ import annotations

import argparse
import os
import sys

from . import catalog as cat
from . import decomp as dc
from . import exactlin as el
from . import existence as ex
from . import fileformat as ff
from . import geodesic as geo
from . import liealg as la
from . import report

EXIT_OK, EXIT_NEGATIVE, EXIT_UNKNOWN, EXIT_USAGE, EXIT_DATA = 0, 1, 2, 64, 65


class UsageError(Exception):
    pass


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        self.print_usage(sys.stderr)
        self.exit(EXIT_USAGE, f"{self.prog}: error: {message}\n")


def load_algebra(ref: str) -> la.LieAlgebra:
    """A path to an algebra file, or a catalog name such as ``L6_10``."""
    if os.path.exists(ref):
        return ff.load(ref)
    try:
        return cat.load(ref)
    except cat.UnknownAlgebra:
        raise UsageError(f"{ref!r} is neither a file nor a catalog name") from None


def _vectors(g, text: str) -> el.Subspace:
    vecs = ff.parse_vectors(text, g.basis_names)
    s = el.span(vecs, g.dim)
    if s.dim != len(vecs):
        raise UsageError(f"vectors {text!r} are linearly dependent")
    return s


def _emit(args, tree: dict, text: str) -> None:
    if args.json:
        sys.stdout.write(report.dumps(tree))
    else:
        sys.stdout.write(text if text.endswith("\n") else text + "\n")


def cmd_validate(args) -> int:
    g = ff.load(args.algebra, validate=False) if os.path.exists(args.algebra) else load_algebra(args.algebra)
    rep = la.validate(g)
    tree = {"algebra": g.name, "dim": g.dim, "valid": rep.ok}
    if rep.ok:
        text = f"{g.name or 'algebra'}: valid Lie algebra of dimension {g.dim}"
    else:
        tree["triple"] = list(rep.triple)
        tree["residual"] = g.format_vector(rep.residual)
        text = f"Jacobi identity fails on {rep.triple}: residual {tree['residual']}"
    tree["status"] = "VERIFIED" if rep.ok else "FAILED"
    _emit(args, tree, text)
    return EXIT_OK if rep.ok else EXIT_NEGATIVE


def cmd_info(args) -> int:
    g = load_algebra(args.algebra)
    s = la.series(g)
    fmt = lambda sub: report.basis_strings(g, sub)
    tree = {
        "algebra": g.name,
        "dim": g.dim,
        "basis": list(g.basis_names),
        "derived": fmt(la.derived_algebra(g)),
        "center": fmt(s.center),
        "lower_central_dims": [t.dim for t in s.lower_central_series],
        "derived_series_dims": [t.dim for t in s.derived_series],
        "nilpotent": s.is_nilpotent,
        "nilpotency_class": s.nilpotency_class,
        "filiform": la.is_filiform(g),
        "unimodular": la.is_unimodular(g),
        "ad_traces": [str(t) for t in la.ad_traces(g)],
        "type": la.small_nilpotent_type(g),
        "status": "VERIFIED",
    }
    lines = [f"{k}: {v}" for k, v in tree.items() if k != "status"]
    _emit(args, tree, "\n".join(lines))
    return EXIT_OK


def cmd_check_decomp(args) -> int:
    g = load_algebra(args.algebra)
    H, V = _vectors(g, args.H), _vectors(g, args.V)
    try:
        d = dc.Decomposition(g, H, V)
    except dc.PreconditionError as exc:
        tree = {"algebra": g.name, "complementary": False, "status": "FAILED"}
        _emit(args, tree, f"H and V are not complementary: {exc}")
        return EXIT_NEGATIVE
    tree = {"algebra": g.name, "complementary": True}
    tree.update(report.decomposition_json(d))
    a = d.analysis
    ok = a.open_flag and (a.mutual or not args.mutual)
    if a.respects:
        tree["lemma_checks"] = dc.check_lji(d)
        tree["induced_type"] = dc.induced_type(d)
        tree["consequences"] = dc.consequence_checks(d)
    tree["status"] = "VERIFIED" if ok else "FAILED"
    label = "open mutually respectful" if args.mutual else "open respectful"
    text = "\n".join([
        f"respects: {report._yn(a.respects)}",
        f"H subalgebra: {report._yn(a.h_is_subalgebra)}",
        f"V subalgebra: {report._yn(a.v_is_subalgebra)}",
        f"mutual: {report._yn(a.mutual)}",
        f"{label}: {'YES' if ok else 'NO'}",
    ])
    _emit(args, tree, text)
    return EXIT_OK if ok else EXIT_NEGATIVE


def cmd_find(args) -> int:
    g = load_algebra(args.algebra)
    dim_h = args.dimH if args.dimH is not None else g.dim - args.dimV
    if dim_h + args.dimV != g.dim or dim_h < 0 or args.dimV < 0:
        raise UsageError(f"dimH + dimV must equal dim g = {g.dim}")
    res = ex.witness_search(g, dim_h, args.dimV, mutual=args.mutual, v_subalgebra=args.v_subalgebra,
                            budget=args.budget, seed=args.seed)
    tree = {"algebra": g.name, "dimH": dim_h, "dimV": args.dimV, "trials": res.trials, "seed": res.seed,
            "mutual": args.mutual, "v_subalgebra": args.v_subalgebra}
    if res.decomposition is not None:
        tree["witness"] = report.decomposition_json(res.decomposition)
        tree["phase"] = res.phase
        tree["status"] = "EXISTS"
        w = tree["witness"]
        text = f"found after {res.trials} candidates ({res.phase}): H = {', '.join(w['H'])}; V = {', '.join(w['V'])}"
        _emit(args, tree, text)
        return EXIT_OK
    tree["status"] = "UNKNOWN"
    _emit(args, tree, f"no witness among {res.trials} candidates (a miss proves nothing)")
    return EXIT_UNKNOWN


_STATUS_EXIT = {"EXISTS": EXIT_OK, "NOT_EXISTS": EXIT_NEGATIVE, "UNKNOWN": EXIT_UNKNOWN}


def _verdict_text(tree: dict) -> str:
    lines = [f"verdict: {tree['status']}"]
    if "witness" in tree:
        lines.append(f"H = {', '.join(tree['witness']['H'])}")
        lines.append(f"V = {', '.join(tree['witness']['V'])}")
    if "certificate" in tree:
        c = tree["certificate"]
        lines.append(f"certificate: {c['label']} (replayed: {report._yn(c['replayed'])})")
    if "note" in tree:
        lines.append(f"note: {tree['note']}")
    return "\n".join(lines)


def cmd_decide_v2(args) -> int:
    try:
        ex.check_field(args.field)
    except ex.UnsupportedField as exc:
        raise UsageError(str(exc)) from None
    g = load_algebra(args.algebra)
    tree = {"algebra": g.name}
    tree.update(report.verdict_json(ex.v2_decide(g, seed=args.seed), g))
    _emit(args, tree, _verdict_text(tree))
    return _STATUS_EXIT[tree["status"]]


def cmd_decide_h3(args) -> int:
    g = load_algebra(args.algebra)
    tree = {"algebra": g.name}
    tree.update(report.verdict_json(ex.h3_decide(g, seed=args.seed, budget=args.budget), g))
    _emit(args, tree, _verdict_text(tree))
    return _STATUS_EXIT[tree["status"]]


def cmd_tmain(args) -> int:
    g = load_algebra(args.algebra)
    conds = ex.tmain_conditions(g)
    tree = {"algebra": g.name, "conditions": conds.as_dict(), "failed": conds.failed(),
            "status": "VERIFIED" if conds.all() else "FAILED"}
    text = "\n".join(f"({k}) {'holds' if v else 'fails'}" for k, v in conds.as_dict().items())
    _emit(args, tree, text)
    return EXIT_OK if conds.all() else EXIT_NEGATIVE


def cmd_abelian_hyperplane(args) -> int:
    g = load_algebra(args.algebra)
    ans = ex.abelian_hyperplane(g)
    tree = {"algebra": g.name, "found": ans.found, "record": report.jsonable(ans.record)}
    if ans.found:
        tree["functional"] = [str(x) for x in ans.functional]
        tree["hyperplane"] = report.basis_strings(g, ans.hyperplane)
        text = f"YES: abelian ideal {', '.join(tree['hyperplane'])}"
    else:
        text = f"NO: {ans.record.get('reason')}"
    tree["status"] = "YES" if ans.found else "NO"
    _emit(args, tree, text)
    return EXIT_OK if ans.found else EXIT_NEGATIVE


def cmd_geodesic(args) -> int:
    g = load_algebra(args.algebra)
    v = ff.parse_combination(args.vector, g.basis_names)
    if el.is_zero(v):
        raise UsageError("the vector must be nonzero")
    if args.gram:
        with open(args.gram, encoding="utf-8") as fh:
            gram = ff.parse_gram(fh.read())
    else:
        gram = el.identity(g.dim)
    try:
        m = geo.MetricLieAlgebra(g, gram)
    except (geo.NotPositiveDefinite, el.DimensionError) as exc:
        raise UsageError(f"bad inner product: {exc}") from None
    admissible = geo.geodesic_admissible(g, v)
    geodesic = geo.is_geodesic(m, v)
    tree = {"algebra": g.name, "vector": ff.format_combination(v, g.basis_names),
            "admissible": admissible, "geodesic": geodesic, "status": "YES" if geodesic else "NO"}
    text = f"geodesic for this inner product: {report._yn(geodesic)}\nadmissible for some inner product: {report._yn(admissible)}"
    _emit(args, tree, text)
    return EXIT_OK if geodesic else EXIT_NEGATIVE


def cmd_tables(args) -> int:
    tree = report.reproduce_tables(seed=args.seed)
    if args.figures:
        tree["figures"] = report.write_figures(tree, args.figures)
    _emit(args, tree, report.render_tables(tree))
    return EXIT_OK if tree["status"] == "VERIFIED" else EXIT_NEGATIVE


def build_parser() -> argparse.ArgumentParser:
    p = _Parser(prog="respect-kit", description="Respectful decompositions of Lie algebras.")
    sub = p.add_subparsers(dest="command", required=True, parser_class=_Parser)

    def add(name, func, help_, algebra=True):
        sp = sub.add_parser(name, help=help_)
        if algebra:
            sp.add_argument("algebra", help="algebra file or catalog name")
        sp.add_argument("--json", action="store_true", help="machine-readable output")
        sp.set_defaults(func=func)
        return sp

    add("validate", cmd_validate, "parse and check the Jacobi identity")
    add("info", cmd_info, "structure summary")
    sp = add("check-decomp", cmd_check_decomp, "analyze a decomposition g = H + V")
    sp.add_argument("--H", required=True, help='comma-separated vectors, e.g. "x1,x2,x5+x6"')
    sp.add_argument("--V", required=True)
    sp.add_argument("--mutual", action="store_true")
    sp = add("find", cmd_find, "search for an open respectful decomposition")
    sp.add_argument("--dimV", type=int, required=True)
    sp.add_argument("--dimH", type=int)
    sp.add_argument("--mutual", action="store_true")
    sp.add_argument("--v-subalgebra", action="store_true", help="respectful with V a subalgebra instead of open")
    sp.add_argument("--budget", type=int, default=ex.DEFAULT_BUDGET)
    sp.add_argument("--seed", type=int)
    sp = add("decide-v2", cmd_decide_v2, "existence with dim V = 2")
    sp.add_argument("--field", default="R")
    sp.add_argument("--seed", type=int)
    sp = add("decide-h3", cmd_decide_h3, "existence with dim H = 3 for 6-dimensional nilpotent algebras")
    sp.add_argument("--seed", type=int)
    sp.add_argument("--budget", type=int, default=ex.DEFAULT_BUDGET)
    add("tmain", cmd_tmain, "the four conditions for dim H = 3 in dimension six")
    add("abelian-hyperplane", cmd_abelian_hyperplane, "codimension-1 abelian ideal")
    sp = add("geodesic", cmd_geodesic, "geodesic test for a vector")
    sp.add_argument("--vector", required=True)
    sp.add_argument("--gram", help="file with a symmetric positive definite Gram matrix")
    sp = add("tables", cmd_tables, "reproduce both classification tables", algebra=False)
    sp.add_argument("--figures", metavar="DIR", help="also write PNG figures to DIR")
    sp.add_argument("--seed", type=int)
    return p


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        return args.func(args)
    except UsageError as exc:
        print(f"respect-kit: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except (ff.ParseError, la.JacobiViolation) as exc:
        print(f"respect-kit: {exc}", file=sys.stderr)
        return EXIT_DATA
    except (dc.PreconditionError, la.NotNilpotent, el.DimensionError) as exc:
        print(f"respect-kit: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except OSError as exc:
        print(f"respect-kit: {exc}", file=sys.stderr)
        return EXIT_DATA


if __name__ == "__main__":
    sys.exit(main())
