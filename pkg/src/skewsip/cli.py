"""Command-line experiment runner.

Exit codes: 0 when every asserted property held, 2 when a property check
failed, 1 on usage or shape errors. Reports contain no timestamps, so the
same arguments always produce the same bytes.
"""
from __future__ import annotations

import argparse
import json
import sys
from fractions import Fraction
from pathlib import Path

from .core.formula import Formula
from .core.normal_forms import Cnf, Dnf
from .core.truth import MAX_ORACLE_VARS, MAX_TABLE_VARS, is_subfunction, truth_table
from .errors import CanonicalDTError, CapExceeded, DecodeError, DomainError, ShapeError
from .graphs import formula_to_graph
from .projections import (
    MAX_SUPPORT,
    ProjRestriction,
    preservation_closed_form,
    preservation_probability,
    project_semantic,
    sample_codes,
    survival_certificate,
)
from .reports import canonical_json, csv_text, display, emit, parallel_map, spec_hash
from .rng import generator
from .sipser import AddressSpace, SipserParams, build_dagger, build_skewed_sipser, demorgan_convert
from .stconn import AdjacencyInput, bfs_oracle, build_power_circuit, build_squaring_circuit
from .switching import PslParams, bad_set, bad_set_cnf, project_and_trim, psl_monte_carlo, random_instance_dnfs

OK, FAILED, USAGE = 0, 2, 1


class UsageError(Exception):
    pass


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        self.print_usage(sys.stderr)
        self.exit(USAGE, f"{self.prog}: error: {message}\n")


def _rational(text: str) -> Fraction:
    try:
        return Fraction(text)
    except (ValueError, ZeroDivisionError) as exc:
        raise argparse.ArgumentTypeError(f"not a rational: {text!r}") from exc


def _fr(x: Fraction) -> str:
    return f"{x.numerator}/{x.denominator}"


def _spec(args) -> dict:
    skip = {"func", "out", "csv"}
    out = {}
    for k, v in sorted(vars(args).items()):
        if k in skip:
            continue
        out[k] = _fr(v) if isinstance(v, Fraction) else v
    return out


def _finish(args, report: dict, csv_header=None, csv_rows=(), ok: bool = True) -> int:
    spec = _spec(args)
    h = spec_hash(spec)
    report = dict(report, spec=spec, spec_hash=h, ok=ok)
    emit(canonical_json(report), args.out, sys.stdout)
    if csv_header is not None and args.csv:
        emit(csv_text(["spec_hash"] + list(csv_header), [[h] + list(r) for r in csv_rows]), args.csv, sys.stdout)
    return OK if ok else FAILED


def _load_json(path: str) -> dict:
    try:
        return json.loads(Path(path).read_text())
    except (OSError, json.JSONDecodeError) as exc:
        raise UsageError(f"cannot read {path}: {exc}") from exc


def _params(args) -> SipserParams:
    return SipserParams(args.u, args.w, args.wb, args.d)


# --- constructors ---------------------------------------------------------------------

def cmd_build_sipser(args) -> int:
    f = build_skewed_sipser(_params(args))
    return _finish(args, {"kind": "formula", **f.to_json()})


def cmd_build_dagger(args) -> int:
    f = build_dagger(_params(args))
    return _finish(args, {"kind": "formula", **f.to_json()})


def cmd_to_graph(args) -> int:
    f = Formula.from_json(_load_json(args.input))
    G = formula_to_graph(f)
    if args.format == "edges":
        emit(G.to_edge_list(), args.out, sys.stdout)
        return OK
    return _finish(args, {"kind": "graph", "graph": G.to_json(), "simple": G.is_simple()})


def cmd_build_stconn(args) -> int:
    if args.construction == "squaring":
        C = build_squaring_circuit(args.n, args.k)
    else:
        C = build_power_circuit(args.n, args.k, args.d)
    m = C.metrics()
    verified, ok = None, True
    adj = AdjacencyInput(args.n)
    if args.verify:
        if adj.num_vars > MAX_TABLE_VARS:
            raise CapExceeded(f"exhaustive verification needs at most {MAX_TABLE_VARS} edge variables")
        tt = truth_table(C).bits
        verified = 0
        for mask in range(1 << adj.num_vars):
            if bool(tt[mask]) == bool(bfs_oracle(adj.bits_from_mask(mask), args.n, 0, args.n - 1, args.k)):
                verified += 1
        ok = verified == 1 << adj.num_vars
    d = args.d if args.construction == "power" else ""
    return _finish(args, {"kind": "circuit", "circuit": C.to_json(), "metrics": m._asdict(),
                          "verified_graphs": verified},
                   ["n", "k", "d", "size", "depth", "verified_graphs"],
                   [[args.n, args.k, d, m.size, m.depth, "" if verified is None else verified]], ok)


def cmd_demorgan(args) -> int:
    if args.input:
        h = _load_json(args.input)["header"]
        p = SipserParams(int(h["u"]), int(h["w"]), int(h["w_b"]), int(h["d"]))
    else:
        p = _params(args)
    C = demorgan_convert(p)
    m = C.metrics()
    equivalent = None
    if p.n <= MAX_TABLE_VARS:
        equivalent = truth_table(C) == truth_table(build_skewed_sipser(p))
    ok = equivalent is not False and m.depth == p.d + 1
    return _finish(args, {"kind": "circuit", "params": p.to_json(), "circuit": C.to_json(),
                          "metrics": m._asdict(), "equivalent": equivalent},
                   ["u", "w", "w_b", "d", "size", "depth", "max_fanin", "equivalent"],
                   [[p.u, p.w, p.w_b, p.d, m.size, m.depth, m.max_fanin, equivalent]], ok)


# --- verification --------------------------------------------------------------------

def _psl_one(job):
    F, params, mode, trials, seed, codec, is_cnf = job
    row = {}
    if mode == "exact":
        rep = (bad_set_cnf if is_cnf else bad_set)(F, params, check_codec=codec)
        row.update(rep.to_json())
        row["ok"] = rep.ok
    if trials:
        dnf = Dnf(F.num_vars, F.clauses) if is_cnf else F
        est = psl_monte_carlo(dnf, params, trials, seed)
        row["mc"] = {"estimate": display(est.estimate), "stderr": display(est.stderr),
                     "trials": est.trials, "seed": seed, "hits": est.hits}
        if mode == "exact":
            row["mc"]["within_3se"] = est.within(Fraction(row["exact_prob"]))
    return row


def cmd_psl_verify(args) -> int:
    space = AddressSpace(_params(args))
    if (2 * space.u + 1) ** space.num_blocks > MAX_SUPPORT and args.mode == "exact":
        raise CapExceeded("support too large for exact mode")
    params = PslParams(space, args.r, args.s, args.q)
    is_cnf = False
    if args.formula:
        obj = _load_json(args.formula)
        if "clauses" in obj:
            forms, is_cnf = [Cnf.from_json(obj)], True
        else:
            forms = [Dnf.from_json(obj)]
    else:
        forms = random_instance_dnfs(space, args.r, args.random, args.seed)
    trials = args.trials if args.mode == "monte_carlo" or args.trials else 0
    if args.mode == "monte_carlo" and trials <= 0:
        raise UsageError("monte_carlo mode needs --trials > 0")
    jobs = [(F, params, args.mode, trials, args.seed + i, not args.no_codec, is_cnf) for i, F in enumerate(forms)]
    rows = parallel_map(_psl_one, jobs)
    ok = all(r.get("ok", True) for r in rows)
    header = ["u", "w", "w_b", "d", "r", "s", "q", "instance", "bad_count", "exact_prob", "bound",
              "mc_estimate", "seed"]
    csv_rows = []
    for i, r in enumerate(rows):
        mc = r.get("mc", {})
        csv_rows.append([space.u, space.params.w, space.w_b, space.params.d, args.r, args.s, _fr(params.q), i,
                         r.get("bad_count", ""), r.get("exact_prob", ""), _fr(params.bound),
                         mc.get("estimate", ""), mc.get("seed", args.seed + i)])
    for r in rows:
        r.pop("params", None)
    return _finish(args, {"kind": "psl", "params": params.to_json(), "applicable": params.applicable,
                          "instances": rows}, header, csv_rows, ok)


def cmd_preserve_verify(args) -> int:
    p = _params(args)
    space = AddressSpace(p)
    q = args.q
    closed = preservation_closed_form(p, q)
    report = {"kind": "preservation", "params": p.to_json(), "q": _fr(q), "closed_form": _fr(closed)}
    ok = True
    if (2 * p.u + 1) ** space.num_blocks <= MAX_SUPPORT:
        exact = preservation_probability(p, q)
        report["exact"] = _fr(exact)
        report["exact_matches_closed_form"] = exact == closed
        ok = ok and exact == closed
    if args.trials:
        est = preservation_probability(p, q, mode="monte_carlo", trials=args.trials, seed=args.seed)
        within = est.within(closed)
        report["mc"] = {"estimate": display(est.estimate), "stderr": display(est.stderr),
                        "trials": est.trials, "seed": est.seed, "hits": est.hits, "within_3se": within}
        ok = ok and within
    if args.oracle_samples:
        if p.n > MAX_ORACLE_VARS:
            raise CapExceeded(f"subfunction oracle needs n <= {MAX_ORACLE_VARS}")
        tt = truth_table(build_skewed_sipser(p))
        target = truth_table(build_skewed_sipser(p.lower()))
        codes = sample_codes(space.num_blocks, p.u, q, generator(args.seed, 1 << 20), args.oracle_samples)
        certified = contained = counter = 0
        for row in codes:
            rho = ProjRestriction.from_codes(space, row)
            cert = survival_certificate(rho)
            sub = is_subfunction(target, project_semantic(tt, rho))
            certified += cert
            contained += sub
            counter += cert and not sub
        report["oracle"] = {"samples": args.oracle_samples, "certified": certified,
                            "contained": contained, "counterexamples": counter}
        ok = ok and counter == 0
    return _finish(args, report, ["u", "w", "w_b", "d", "q", "closed_form", "exact", "mc_estimate", "seed"],
                   [[p.u, p.w, p.w_b, p.d, _fr(q), _fr(closed), report.get("exact", ""),
                     report.get("mc", {}).get("estimate", ""), args.seed]], ok)


def cmd_project_and_trim(args) -> int:
    p = _params(args)
    rep = project_and_trim(p, args.q, args.seed, max_attempts=args.max_attempts)
    for st in rep.steps:
        if st.attempts > 1:
            print(f"level {st.level}: certified after {st.attempts} samples", file=sys.stderr)
    if not rep.completed:
        print(f"no certified restriction within {args.max_attempts} samples", file=sys.stderr)
    ok = rep.completed and rep.all_equivalent
    if ok and rep.final_target is not None:
        base = build_skewed_sipser(SipserParams(p.u, p.w, p.w_b, 0))
        ok = truth_table(rep.final_target) == truth_table(base)
    out = rep.to_json()
    out["S_display"] = display(rep.S)
    return _finish(args, {"kind": "project_and_trim", **out},
                   ["u", "w", "w_b", "d", "q", "S", "completed", "steps", "seed"],
                   [[p.u, p.w, p.w_b, p.d, _fr(rep.q), _fr(rep.S), rep.completed, len(rep.steps), args.seed]], ok)


# --- parser ----------------------------------------------------------------------------

def _sipser_args(sp, required=True):
    for name in ("u", "w", "wb", "d"):
        sp.add_argument(f"--{name}", type=int, required=required)


def _outputs(sp):
    sp.add_argument("--out", default=None, help="report path (default: stdout)")
    sp.add_argument("--csv", default=None, help="CSV summary path")


def build_parser() -> argparse.ArgumentParser:
    ap = _Parser(prog="skewsip", description=__doc__.splitlines()[0])
    sub = ap.add_subparsers(dest="command", required=True, parser_class=_Parser)

    sp = sub.add_parser("build-sipser", help="SkewedSipser formula as JSON")
    _sipser_args(sp)
    _outputs(sp)
    sp.set_defaults(func=cmd_build_sipser)

    sp = sub.add_parser("build-dagger", help="dagger variant formula as JSON")
    _sipser_args(sp)
    _outputs(sp)
    sp.set_defaults(func=cmd_build_dagger)

    sp = sub.add_parser("to-graph", help="series-parallel graph of a formula file")
    sp.add_argument("--in", dest="input", required=True)
    sp.add_argument("--format", choices=("json", "edges"), default="json")
    _outputs(sp)
    sp.set_defaults(func=cmd_to_graph)

    sp = sub.add_parser("build-stconn", help="distance-k connectivity circuit")
    sp.add_argument("--n", type=int, required=True)
    sp.add_argument("--k", type=int, required=True)
    sp.add_argument("--d", type=int, default=1)
    sp.add_argument("--construction", choices=("squaring", "power"), default="squaring")
    sp.add_argument("--verify", action="store_true", help="check every graph against BFS")
    _outputs(sp)
    sp.set_defaults(func=cmd_build_stconn)

    sp = sub.add_parser("demorgan", help="depth d+1 circuit for SkewedSipser")
    sp.add_argument("--in", dest="input", default=None)
    _sipser_args(sp, required=False)
    _outputs(sp)
    sp.set_defaults(func=cmd_demorgan)

    sp = sub.add_parser("psl-verify", help="bad-set audit of the switching lemma")
    _sipser_args(sp)
    sp.add_argument("--r", type=int, required=True)
    sp.add_argument("--s", type=int, required=True)
    sp.add_argument("--q", type=_rational, required=True)
    sp.add_argument("--formula", default=None, help="DNF or CNF JSON file")
    sp.add_argument("--random", type=int, default=1, help="number of seeded random r-DNFs")
    sp.add_argument("--mode", choices=("exact", "monte_carlo"), default="exact")
    sp.add_argument("--trials", type=int, default=0)
    sp.add_argument("--seed", type=int, default=0)
    sp.add_argument("--no-codec", action="store_true", help="skip injection, round-trip and ratio checks")
    _outputs(sp)
    sp.set_defaults(func=cmd_psl_verify)

    sp = sub.add_parser("preserve-verify", help="target preservation probability")
    _sipser_args(sp)
    sp.add_argument("--q", type=_rational, required=True)
    sp.add_argument("--trials", type=int, default=0)
    sp.add_argument("--seed", type=int, default=0)
    sp.add_argument("--oracle-samples", type=int, default=0)
    _outputs(sp)
    sp.set_defaults(func=cmd_preserve_verify)

    sp = sub.add_parser("project-and-trim", help="drive project-and-trim from level d down to 0")
    _sipser_args(sp)
    sp.add_argument("--q", type=_rational, required=True)
    sp.add_argument("--seed", type=int, default=0)
    sp.add_argument("--max-attempts", type=int, default=10_000)
    _outputs(sp)
    sp.set_defaults(func=cmd_project_and_trim)
    return ap


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    if args.command == "demorgan" and not args.input and None in (args.u, args.w, args.wb, args.d):
        print("demorgan: give --in or all of --u --w --wb --d", file=sys.stderr)
        return USAGE
    try:
        return args.func(args)
    except (UsageError, ShapeError, DomainError, CapExceeded, KeyError) as exc:
        print(f"{args.command}: error: {exc}", file=sys.stderr)
        return USAGE
    except (CanonicalDTError, DecodeError) as exc:
        print(f"{args.command}: property check failed: {exc}", file=sys.stderr)
        return FAILED


if __name__ == "__main__":
    sys.exit(main())
