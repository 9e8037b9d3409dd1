"""Command-line front end.

Exit codes: 0 ok (no FAIL), 1 at least one FAIL, 2 usage or field error,
3 size cap exceeded, 4 input parse error.
"""

from __future__ import annotations

import argparse
import json
import sys

from .field import Field, FieldError, make_field
from .funcrep import (
    CATALOG_NAMES,
    BadLutLengthError,
    ConditionViolatedError,
    FnError,
    LutFormatError,
    Poly,
    PowerMap,
    catalog,
    materialize,
    read_lut,
    write_lut,
)
from .tables import (
    SizeCapExceededError,
    bct,
    boomerang_spectrum_power,
    boomerang_uniformity,
    c_differential_uniformity,
    cddt,
    cdiff_spectrum_power,
    check_size,
    max_q,
    row_histogram,
    table_to_csv,
    table_to_json,
)
from .theorems import (
    DEFAULT_CE_CAP,
    Status,
    TheoremId,
    inverse_fingerprint,
    run_batch,
    search_du_preserving_switches,
)

EXIT_OK, EXIT_FAIL, EXIT_USAGE, EXIT_CAP, EXIT_PARSE = 0, 1, 2, 3, 4


class UsageError(Exception):
    pass


# -- argument parsing helpers ---------------------------------------------------

def parse_element(F: Field, text: str) -> int:
    """``k`` (encoding), ``-k`` (negation of k) or ``a/b`` (a times b^-1)."""
    text = text.strip()
    try:
        if "/" in text:
            a, b = text.split("/", 1)
            den = parse_element(F, b)
            if den == 0:
                raise UsageError(f"division by zero in {text!r}")
            return F.div(parse_element(F, a), den)
        if text.startswith("-"):
            return F.neg(F.check(int(text[1:])))
        return F.check(int(text))
    except ValueError as exc:
        raise UsageError(f"bad element {text!r}: {exc}") from None


def parse_modulus(text: str | None):
    if text is None:
        return None
    try:
        return [int(c) for c in text.split(",")]
    except ValueError:
        raise UsageError(f"bad modulus {text!r}") from None


def parse_fields(text: str, modulus=None) -> list[Field]:
    out = []
    for item in text.split(","):
        try:
            p, _, n = item.partition(":")
            out.append(make_field(int(p), int(n or 1), modulus))
        except ValueError as exc:
            if isinstance(exc, FieldError):
                raise
            raise UsageError(f"bad field {item!r}; expected p:n") from None
    return out


def parse_range(text: str | None, default: range) -> range:
    if text is None:
        return default
    lo, sep, hi = text.partition(":")
    try:
        return range(int(lo), int(hi) + 1) if sep else range(int(lo), int(lo) + 1)
    except ValueError:
        raise UsageError(f"bad range {text!r}; expected k or lo:hi") from None


def parse_poly(F: Field, text: str) -> Poly:
    """Terms ``coeff:exp`` separated by commas, e.g. ``1:25,2:2``."""
    terms = []
    for item in text.split(","):
        c, sep, e = item.rpartition(":")
        if not sep:
            raise UsageError(f"bad term {item!r}; expected coeff:exp")
        try:
            exp = int(e)
        except ValueError:
            raise UsageError(f"bad exponent in {item!r}") from None
        terms.append((parse_element(F, c), exp))
    return Poly(tuple(terms))


def _catalog_spec(F: Field, args):
    kw = {"k": args.k}
    if args.u is not None:
        kw["u"] = parse_element(F, args.u)
    if args.d is not None:
        kw["d"] = args.d
    if args.s is not None:
        kw["s"] = args.s
    return catalog(F, args.fn, **kw)


def _add_field_opts(sp, positional: bool = False):
    if positional:
        sp.add_argument("p", type=int)
        sp.add_argument("n", type=int, nargs="?", default=1)
    else:
        sp.add_argument("--p", type=int, required=True)
        sp.add_argument("--n", type=int, default=1)
    sp.add_argument("--modulus", help="coefficients c0,c1,...,cn (constant term first)")


def _add_fn_opts(sp, required: bool = True):
    g = sp.add_mutually_exclusive_group(required=required)
    g.add_argument("--fn", choices=CATALOG_NAMES, help="named function family")
    g.add_argument("--poly", help="polynomial as coeff:exp terms, e.g. 1:25,2:2")
    g.add_argument("--lut", help="lookup-table file")
    sp.add_argument("--k", type=int, default=1, help="parameter k of f5")
    sp.add_argument("--u", help="coefficient u of the binomial")
    sp.add_argument("--d", type=int, help="exponent d of switch_monomial")
    sp.add_argument("--s", type=int, help="power s of g in switch_monomial")


def _add_common(sp):
    sp.add_argument("--max-q", type=int, default=None,
                    help="size cap (default $UNIFORMITY_MAX_Q or 2048)")
    sp.add_argument("--workers", type=int, default=1)
    sp.add_argument("--out", help="write output here instead of stdout")


def _field(args) -> Field:
    return make_field(args.p, args.n, parse_modulus(args.modulus))


def _function(args):
    """Build the FnTable selected by --fn / --poly / --lut."""
    if args.lut:
        try:
            with open(args.lut, encoding="utf-8") as fh:
                t = read_lut(fh.read())
        except OSError as exc:
            raise LutFormatError(f"cannot read {args.lut}: {exc}") from None
        if getattr(args, "p", None) is not None and (t.field.p, t.field.n) != (args.p, args.n):
            raise UsageError(f"LUT is over F_{t.field.p}^{t.field.n}, not F_{args.p}^{args.n}")
        return t
    F = _field(args)
    check_size(F.q, getattr(args, "max_q", None))
    spec = parse_poly(F, args.poly) if args.poly else _catalog_spec(F, args)
    return materialize(F, spec)


def _emit(args, text: str):
    if args.out:
        with open(args.out, "w", encoding="utf-8") as fh:
            fh.write(text)
    else:
        sys.stdout.write(text)


# -- subcommands ----------------------------------------------------------------

def cmd_field_info(args) -> int:
    F = _field(args)
    fp = inverse_fingerprint(F)
    sign = {1: "+1", -1: "-1", 0: "0"}
    info = {
        "p": F.p, "n": F.n, "q": F.q, "modulus": list(F.modulus),
        "primitive_element": F.primitive_element,
        "chi(-3)": fp.chi_m3, "chi(5)": fp.chi_5,
        "q mod 3": fp.q_mod_3, "q mod 4": fp.q_mod_4,
    }
    if args.format == "json":
        _emit(args, json.dumps(info) + "\n")
    else:
        lines = [
            f"field {F.label}  q = {F.q}",
            f"modulus (c0..cn): {' '.join(map(str, F.modulus))}",
            f"primitive element: {F.primitive_element}",
            f"chi(-3) = {sign[fp.chi_m3]}",
            f"chi(5) = {sign[fp.chi_5]}",
            f"q = {fp.q_mod_3} mod 3",
            f"q = {fp.q_mod_4} mod 4",
        ]
        _emit(args, "\n".join(lines) + "\n")
    return EXIT_OK


def cmd_fn_eval(args) -> int:
    t = _function(args)
    F = t.field
    if args.format == "lut":
        _emit(args, write_lut(t))
        return EXIT_OK
    xs = [parse_element(F, x) for x in args.x] if args.x else range(F.q)
    if args.format == "json":
        _emit(args, json.dumps({str(x): t[x] for x in xs}) + "\n")
    else:
        _emit(args, "".join(f"{x} {t[x]}\n" for x in xs))
    return EXIT_OK


def _summary(kind: str, c, uni, hist) -> str:
    w = uni.witnesses
    shown = " ".join(f"({a},{b})" for a, b in w[:8]) + (" ..." if len(w) > 8 else "")
    head = f"{kind}" + (f" c={c}" if c is not None else "")
    line = f"{head} max={uni.value} class={uni.classification} witnesses={len(w)}: {shown}"
    if hist is not None:
        line += f"\na=1 row: {hist.render()}"
    return line + "\n"


def cmd_table(args) -> int:
    t = _function(args)
    F = t.field
    check_size(F.q, args.max_q)
    if args.kind == "bct":
        tab = bct(t, workers=args.workers, cap=args.max_q)
        uni = boomerang_uniformity(t, table=tab)
        hist = row_histogram(tab.counts[1], "boomerang", skip_zero_b=True)
        spectrum = boomerang_spectrum_power(t) if isinstance(t.spec, PowerMap) else None
        label, c = "BCT", None
    else:
        c = 1 if args.kind == "ddt" else parse_element(F, args.c)
        tab = cddt(t, c, workers=args.workers, cap=args.max_q)
        uni = c_differential_uniformity(t, c, table=tab)
        hist = row_histogram(tab.counts[1], "cdiff", c)
        spectrum = cdiff_spectrum_power(t, c) if isinstance(t.spec, PowerMap) else None
        label = "DDT" if args.kind == "ddt" else "cDDT"
    if args.format == "csv":
        _emit(args, table_to_csv(tab))
        sys.stderr.write(_summary(label, c, uni, None))
    elif args.format == "json":
        _emit(args, table_to_json(tab, uni, spectrum) + "\n")
    else:
        _emit(args, _summary(label, c, uni, hist))
    return EXIT_OK


def cmd_spectrum(args) -> int:
    t = _function(args)
    F = t.field
    check_size(F.q, args.max_q)
    if args.kind == "boomerang":
        spec = boomerang_spectrum_power(t)
    else:
        spec = cdiff_spectrum_power(t, parse_element(F, args.c))
    if args.format == "json":
        doc = {"kind": spec.kind, "c": spec.c, "q": F.q, "spectrum": spec.to_json(),
               "sum": spec.total, "weighted_sum": spec.weighted_total}
        _emit(args, json.dumps(doc) + "\n")
    else:
        _emit(args, f"{spec.render()}  sum={spec.total} weighted_sum={spec.weighted_total}\n")
    return EXIT_OK


def cmd_verify(args) -> int:
    if args.theorem == "all":
        tids = list(TheoremId)
    else:
        try:
            tids = [TheoremId(x.strip().upper()) for x in args.theorem.split(",")]
        except ValueError:
            raise UsageError(f"unknown theorem {args.theorem!r}; "
                             f"choose from {', '.join(t.value for t in TheoremId)} or all") from None
    fields = parse_fields(args.fields, parse_modulus(args.modulus))
    cap = max_q() if args.max_q is None else args.max_q
    for F in fields:
        check_size(F.q, cap)
    fn_for = None
    if args.fn or args.poly:
        def fn_for(F):
            return parse_poly(F, args.poly) if args.poly else _catalog_spec(F, args)
    c_for = None
    if args.c is not None:
        def c_for(F):
            return parse_element(F, args.c)
    reports = run_batch(tids, fields, fn_for=fn_for, c_for=c_for, workers=args.workers,
                        cap=args.ce_cap, trials=args.trials, seed=args.seed)
    if args.format == "text":
        lines = []
        for r in reports:
            obs = r.observed
            if isinstance(obs, dict) and "spectrum" in obs:
                obs = obs["spectrum"]
            shown = obs.render() if hasattr(obs, "render") else json.dumps(r.to_dict()["observed"])
            lines.append(f"{r.status.value:<14} {r.theorem_id.value:<18} "
                         f"{r.prediction.field.label:<8} {r.prediction.case}  observed={shown}")
        _emit(args, "\n".join(lines) + "\n")
    else:
        _emit(args, "".join(r.to_json() + "\n" for r in reports))
    return EXIT_FAIL if any(r.status is Status.FAIL for r in reports) else EXIT_OK


def cmd_search_switches(args) -> int:
    F = _field(args)
    check_size(F.q, args.max_q)
    d_range = parse_range(args.d_range, range(F.q - 1))
    s_range = parse_range(None if args.s is None else str(args.s), range(F.p))
    if args.s_range is not None:
        s_range = parse_range(args.s_range, range(F.p))
    hits = search_du_preserving_switches(F, d_range, s_range)
    if args.s is not None or args.s_range is not None:
        hits = [h for h in hits if h.s in s_range]
    if args.format == "json":
        rows = [{"d": h.d, "s": h.s, "du": h.du, "permutation": h.is_perm,
                 "convention_independent": h.s == 0} for h in hits]
        _emit(args, json.dumps({"p": F.p, "n": F.n, "modulus": list(F.modulus),
                                "g": F.primitive_element, "rows": rows}) + "\n")
    else:
        lines = [f"# {F.label} modulus={list(F.modulus)} g={F.primitive_element}",
                 "d,s,du,convention_independent"]
        lines += [f"{h.d},{h.s},{h.du},{'yes' if h.s == 0 else 'no'}" for h in hits]
        _emit(args, "\n".join(lines) + "\n")
    return EXIT_OK


# -- entry point ------------------------------------------------------------------

def build_parser() -> argparse.ArgumentParser:
    ap = argparse.ArgumentParser(
        prog="oddsbox",
        description="Difference, c-difference and boomerang tables of functions over GF(p^n), p odd.",
    )
    sub = ap.add_subparsers(dest="cmd", required=True)

    sp = sub.add_parser("field-info", help="modulus, primitive element and case-selecting characters")
    _add_field_opts(sp, positional=True)
    sp.add_argument("--format", choices=("text", "json"), default="text")
    sp.add_argument("--out")
    sp.set_defaults(func=cmd_field_info)

    sp = sub.add_parser("fn-eval", help="evaluate a function")
    sp.add_argument("--p", type=int)
    sp.add_argument("--n", type=int, default=1)
    sp.add_argument("--modulus")
    _add_fn_opts(sp)
    sp.add_argument("--x", action="append", help="element to evaluate (repeatable; default all)")
    sp.add_argument("--format", choices=("text", "json", "lut"), default="text")
    sp.add_argument("--out")
    sp.set_defaults(func=cmd_fn_eval)

    sp = sub.add_parser("table", help="full DDT, c-DDT or BCT")
    sp.add_argument("kind", choices=("ddt", "cddt", "bct"))
    sp.add_argument("--p", type=int)
    sp.add_argument("--n", type=int, default=1)
    sp.add_argument("--modulus")
    _add_fn_opts(sp)
    sp.add_argument("--c", default="1", help="multiplier c: k, -k or a/b")
    sp.add_argument("--format", choices=("text", "csv", "json"), default="text")
    _add_common(sp)
    sp.set_defaults(func=cmd_table)

    sp = sub.add_parser("spectrum", help="c-differential or boomerang spectrum of a power map")
    sp.add_argument("kind", choices=("cdiff", "boomerang"))
    sp.add_argument("--p", type=int)
    sp.add_argument("--n", type=int, default=1)
    sp.add_argument("--modulus")
    _add_fn_opts(sp)
    sp.add_argument("--c", default="1", help="multiplier c: k, -k or a/b")
    sp.add_argument("--format", choices=("text", "json"), default="text")
    _add_common(sp)
    sp.set_defaults(func=cmd_spectrum)

    sp = sub.add_parser("verify", help="check closed-form predictions against brute force")
    sp.add_argument("theorem", help="theorem id, comma-separated ids, or 'all'")
    sp.add_argument("--fields", required=True, help="p:n[,p:n...]")
    sp.add_argument("--modulus")
    _add_fn_opts(sp, required=False)
    sp.add_argument("--c", default=None, help="c for the identity checks (default -1)")
    sp.add_argument("--ce-cap", type=int, default=DEFAULT_CE_CAP,
                    help="counterexamples kept per report")
    sp.add_argument("--trials", type=int, default=50)
    sp.add_argument("--seed", type=int, default=0)
    sp.add_argument("--format", choices=("json", "text"), default="json")
    _add_common(sp)
    sp.set_defaults(func=cmd_verify)

    sp = sub.add_parser("search-switches", help="DU-preserving permutations X^(q-2) + Tr(g^s X^d)")
    _add_field_opts(sp, positional=True)
    sp.add_argument("--d-range", help="lo:hi (default 0:q-2)")
    sp.add_argument("--s", type=int, help="restrict to one s")
    sp.add_argument("--s-range", help="lo:hi (default 0:p-1)")
    sp.add_argument("--format", choices=("csv", "json"), default="csv")
    _add_common(sp)
    sp.set_defaults(func=cmd_search_switches)
    return ap


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    if args.cmd in ("fn-eval", "table", "spectrum") and not args.lut and args.p is None:
        print("error: --p is required unless --lut is given", file=sys.stderr)
        return EXIT_USAGE
    try:
        return args.func(args)
    except SizeCapExceededError as exc:
        print(f"SizeCapExceededError: {exc}", file=sys.stderr)
        return EXIT_CAP
    except (LutFormatError, BadLutLengthError) as exc:
        print(f"{type(exc).__name__}: {exc}", file=sys.stderr)
        return EXIT_PARSE
    except (FieldError, ConditionViolatedError, FnError, UsageError, ZeroDivisionError) as exc:
        print(f"{type(exc).__name__}: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except ValueError as exc:
        print(f"{type(exc).__name__}: {exc}", file=sys.stderr)
        return EXIT_USAGE


if __name__ == "__main__":
    sys.exit(main())
