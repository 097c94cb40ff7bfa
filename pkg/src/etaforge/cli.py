"""Command-line front end.

Every command builds its full output before printing, so a failure never
leaves partial data on stdout.  Exit codes: 0 success, 1 failed check,
2 bad arguments, 3 guard violation.
"""

from __future__ import annotations

import argparse
import csv
import io
import json
import sys
from concurrent.futures import ProcessPoolExecutor
from fractions import Fraction

from . import factor
from .config import Guards, load_guards
from .enumeration import GuardError, enumerate_by_weight
from .eta import (
    EtaQuotient,
    extremal_quotient,
    is_primitive,
    order_vector,
    q_expansion,
    valence_check,
)
from .lattice import matmul
from .matrices import (
    b_inverse,
    b_matrix,
    c_matrix,
    is_identity,
    order_matrix,
    order_matrix_direct,
    order_matrix_inverse,
)
from .numtheory import kappa, num_divisors, parse_level
from .tables import KMIN_REFERENCE, kmax_reference

EXIT_CHECK_FAILED = 1
EXIT_USAGE = 2
EXIT_GUARD = 3


class UsageError(ValueError):
    pass


def parse_levels(text: str) -> list[int]:
    """``"6,10,12"``, ``"6..30"`` or a mix such as ``"2..4,9"``."""
    out: list[int] = []
    for part in text.split(","):
        part = part.strip()
        if not part:
            continue
        if ".." in part:
            lo, hi = (parse_level(s) for s in part.split("..", 1))
            out.extend(range(lo, hi + 1))
        else:
            out.append(parse_level(part))
    if not out or min(out) < 1:
        raise UsageError(f"bad level list {text!r}")
    return out


def _level(text: str) -> int:
    try:
        n = parse_level(text)
    except ValueError:
        raise argparse.ArgumentTypeError(f"not a level: {text!r}") from None
    if n < 1:
        raise argparse.ArgumentTypeError("level must be positive")
    return n


def _guard_divisors(N: int, limit: int) -> None:
    if num_divisors(N) > limit:
        raise GuardError(f"d({N}) = {num_divisors(N)} exceeds the guard of {limit}")


def _json(obj) -> str:
    return json.dumps(obj, sort_keys=False, separators=(", ", ": "))


def _csv(rows: list[list]) -> str:
    buf = io.StringIO()
    csv.writer(buf, lineterminator="\n").writerows(rows)
    return buf.getvalue().rstrip("\n")


# ---------------------------------------------------------------------------
# commands; each returns (exit code, output text)


def cmd_matrix(args, guards: Guards):
    N = args.level
    _guard_divisors(N, guards.max_matrix_divisors)
    which = {
        "A": order_matrix,
        "A-inv": order_matrix_inverse,
        "B": b_matrix,
        "B-inv": b_inverse,
        "C": c_matrix,
    }[args.which]
    m = which(N)
    return 0, m.to_json() if args.json else m.pretty()


def _quotient_record(f: EtaQuotient) -> dict:
    return {
        "exponents": f.to_dict()["exponents"],
        "k": f.weight_numerator(),
        "orders": list(order_vector(f).scaled_orders),
    }


def cmd_enumerate(args, guards: Guards):
    N, k = args.level, args.k
    _guard_divisors(N, guards.max_divisors)
    if k > guards.max_k:
        raise GuardError(f"k = {k} exceeds the guard of {guards.max_k}")
    if k < 0:
        raise UsageError("k must be nonnegative")
    out = []
    for f in enumerate_by_weight(N, k):
        if args.exact_level and (f.level() or 1) != N:
            continue
        if args.primitive and (f.is_constant() or not is_primitive(f)):
            continue
        if args.quasi_irreducible and (f.is_constant() or not factor.is_quasi_irreducible(f, guards)):
            continue
        out.append(f)
    if args.count_only:
        return 0, str(len(out))
    return 0, "\n".join(_json(_quotient_record(f)) for f in out)


def cmd_census(args, guards: Guards):
    entries = factor.nonfactorizable_census(args.level, guards)
    if args.count_only:
        return 0, str(len(entries))
    if args.json:
        return 0, "\n".join(
            _json({**_quotient_record(e.quotient), "level": e.level, "source": e.source,
                   "quasi_irreducible": e.quasi_irreducible})
            for e in entries
        )
    return 0, _csv([list(factor.CENSUS_COLUMNS)] + [e.csv_row() for e in entries])


def cmd_kmin(args, guards: Guards):
    k = factor.k_min(args.level, args.cap, guards)
    return 0, _json({"level": args.level, "k_min": k, "cap": args.cap or kappa(args.level)})


def cmd_kmax(args, guards: Guards):
    k = factor.k_max(args.level, guards)
    return 0, _json({"level": args.level, "k_max": k, "kappa": kappa(args.level)})


def cmd_fn(args, guards: Guards):
    N = args.level
    _guard_divisors(N, guards.max_divisors)
    F = extremal_quotient(N)
    rec = {"level": N, "quotient": F.format(), "k": F.weight_numerator(), "kappa": kappa(N)}
    if args.verify:
        rec["divisibility"] = factor.verify_extremal_divisibility(N, guards)
    return 0, _json(rec)


def _read_quotient(args) -> EtaQuotient:
    try:
        f = EtaQuotient.parse(args.quotient)
    except ValueError as exc:
        raise UsageError(str(exc)) from None
    return f


def cmd_factorize(args, guards: Guards):
    f = _read_quotient(args)
    if f.is_constant():
        raise UsageError("the constant quotient cannot be factorized")
    M = args.modulus or f.level()
    if M % f.level():
        raise UsageError(f"modulus {M} is not a multiple of the level {f.level()}")
    try:
        w = factor.factorizable_on(f, M, guards)
    except ValueError as exc:
        raise UsageError(str(exc)) from None
    rec = {
        "input": f.format(),
        "factorizable": w is not None,
        "witness": None if w is None else {"left": w.left.format(), "right": w.right.format()},
        "modulus": M,
    }
    return 0, _json(rec)


def cmd_qexp(args, guards: Guards):
    f = _read_quotient(args)
    s = q_expansion(f, args.terms)
    rec = {"input": f.format(), "leading_exponent": str(s.leading_exponent), "coefficients": list(s.coefficients)}
    return 0, _json(rec) if args.json else str(s)


def _table_row(job):
    kind, N, cap, guards = job
    try:
        if kind == "kmin":
            k = factor.k_min(N, cap, guards)
            return [N, "none" if k is None else k]
        return [N, factor.k_max(N, guards), kappa(N)]
    except GuardError as exc:
        return [N, f"guard: {exc}"] + ([""] if kind != "kmin" else [])


def cmd_tables(args, guards: Guards):
    levels = parse_levels(args.levels) if args.levels else (
        sorted(KMIN_REFERENCE) if args.kind == "kmin" else sorted(factor_kmax_levels())
    )
    if min(levels) < 2:
        raise UsageError("table levels must be at least 2")
    jobs = [(args.kind, N, args.cap, guards) for N in levels]
    if args.jobs > 1:
        with ProcessPoolExecutor(args.jobs) as ex:
            rows = list(ex.map(_table_row, jobs))
    else:
        rows = [_table_row(j) for j in jobs]
    head = ["N", "k_min"] if args.kind == "kmin" else ["N", "k_max", "kappa"]
    if args.with_reference:
        head.append("reference")
        for r in rows:
            ref = KMIN_REFERENCE.get(r[0]) if args.kind == "kmin" else kmax_reference(r[0])
            r.append("" if ref is None else ref)
    return 0, _csv([head] + rows)


def factor_kmax_levels() -> list[int]:
    from .tables import KMAX_KAPPA_REFERENCE

    return list(KMAX_KAPPA_REFERENCE)


# -- checks ---------------------------------------------------------------------


def _check_inverse_identities(args, guards):
    bad = []
    for N in range(1, args.max_level + 1):
        A = order_matrix(N)
        ok = A.entries == order_matrix_direct(N).entries
        ok &= is_identity(matmul(A.entries, order_matrix_inverse(N).entries))
        ok &= is_identity(matmul(b_matrix(N).entries, b_inverse(N).entries))
        if not ok:
            bad.append(N)
    return {"levels": args.max_level, "failures": bad}, not bad, False


def _check_valence(args, guards):
    bad = []
    for N in range(1, args.max_level + 1):
        if num_divisors(N) > guards.max_divisors:
            continue
        fs = factor.column_quotients(N)
        if num_divisors(N) <= 6:  # keeps the weight-1 enumeration cheap
            fs += enumerate_by_weight(N, 1)
        if not all(valence_check(f.embed(N)) for f in fs):
            bad.append(N)
    return {"levels": args.max_level, "failures": bad}, not bad, False


def _check_census_bounds(args, guards):
    from .numtheory import omega_bound, omega_zero_bound

    rows, ok = [], True
    for N in parse_levels(args.levels or "2,3,4,6,8,9"):
        try:
            es = factor.nonfactorizable_census(N, guards)
        except AssertionError as exc:
            rows.append({"N": N, "error": str(exc)})
            ok = False
            continue
        n, n0 = len(es), sum(1 for e in es if e.level == N)
        good = n <= omega_bound(N) and n0 <= omega_zero_bound(N)
        ok &= good
        rows.append({"N": N, "census": n, "omega": str(Fraction(omega_bound(N))),
                     "exact_level": n0, "omega_zero": str(Fraction(omega_zero_bound(N))), "ok": good})
    return {"rows": rows}, ok, False


def _check_fn(args, guards):
    levels = [args.level] if args.level else parse_levels(args.levels or "1,2,3,4,6")
    rows = [{"N": N, "ok": factor.verify_extremal_divisibility(N, guards)} for N in levels]
    return {"rows": rows}, all(r["ok"] for r in rows), False


def _check_conjecture1(args, guards):
    rows = [r for r in factor.check_conjecture_1(parse_levels(args.levels or "6..30")) if r.k_min is not None]
    recs = [{"N": r.N, "k_min": r.k_min, "bound": r.bound, "holds": r.holds} for r in rows]
    mismatch = [r.N for r in rows if not r.holds]
    return {"rows": recs, "mismatch": mismatch}, True, bool(mismatch)


def _check_conjecture2(args, guards):
    try:
        r = factor.check_conjecture_2(args.p, args.n, guards)
    except ValueError as exc:
        raise UsageError(str(exc)) from None
    rec = {"p": r.p, "n": r.n, "predicted": r.predicted, "computed": r.computed, "mismatch": not r.equal}
    return rec, True, not r.equal


CHECKS = {
    "valence": _check_valence,
    "inverse-identities": _check_inverse_identities,
    "census-bounds": _check_census_bounds,
    "fn-divisibility": _check_fn,
    "conjecture1": _check_conjecture1,
    "conjecture2": _check_conjecture2,
}


def cmd_check(args, guards: Guards):
    report, ok, mismatch = CHECKS[args.target](args, guards)
    report = {"target": args.target, "passed": ok, **report}
    if args.target.startswith("conjecture"):
        report["mismatch"] = bool(mismatch) if args.target == "conjecture2" else report["mismatch"]
    code = 0 if ok else EXIT_CHECK_FAILED
    if args.json:
        return code, _json(report)
    status = "pass" if ok else "FAIL"
    if mismatch:
        status += " (conjecture mismatch reported)"
    return code, f"{args.target}: {status}\n{_json(report)}"


# ---------------------------------------------------------------------------


def build_parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(prog="etaforge", description="Holomorphic eta quotients on Gamma_0(N).")
    p.add_argument("--guards", help="JSON file of guard overrides (default: $ETAFORGE_GUARDS)")
    p.add_argument("--max-divisors", type=int)
    p.add_argument("--max-det", type=int)
    p.add_argument("--max-k", type=int)
    p.add_argument("--verbose", action="store_true", help="print a header line before the data")
    sub = p.add_subparsers(dest="command", required=True)

    s = sub.add_parser("matrix", help="print A, A-inv, B, B-inv or C")
    s.add_argument("--level", type=_level, required=True)
    s.add_argument("--which", choices=["A", "A-inv", "B", "B-inv", "C"], default="A")
    s.add_argument("--json", action="store_true")
    s.set_defaults(func=cmd_matrix)

    s = sub.add_parser("enumerate", help="holomorphic quotients of weight k/2")
    s.add_argument("--level", type=_level, required=True)
    s.add_argument("--k", type=int, required=True)
    s.add_argument("--exact-level", action="store_true")
    s.add_argument("--primitive", action="store_true")
    s.add_argument("--quasi-irreducible", action="store_true")
    s.add_argument("--count-only", action="store_true")
    s.set_defaults(func=cmd_enumerate)

    s = sub.add_parser("census", help="quotients that do not factor on Gamma_0(N)")
    s.add_argument("--level", type=_level, required=True)
    s.add_argument("--json", action="store_true")
    s.add_argument("--count-only", action="store_true")
    s.set_defaults(func=cmd_census)

    s = sub.add_parser("kmin")
    s.add_argument("--level", type=_level, required=True)
    s.add_argument("--cap", type=int)
    s.set_defaults(func=cmd_kmin)

    s = sub.add_parser("kmax")
    s.add_argument("--level", type=_level, required=True)
    s.set_defaults(func=cmd_kmax)

    s = sub.add_parser("fn", help="the extremal quotient F_N")
    s.add_argument("--level", type=_level, required=True)
    s.add_argument("--verify", action="store_true")
    s.set_defaults(func=cmd_fn)

    s = sub.add_parser("factorize")
    s.add_argument("--quotient", required=True, help='e.g. "1^24" or "1^2 2^-1"')
    s.add_argument("--modulus", type=_level)
    s.set_defaults(func=cmd_factorize)

    s = sub.add_parser("qexp")
    s.add_argument("--quotient", required=True)
    s.add_argument("--terms", type=int, default=20)
    s.add_argument("--json", action="store_true")
    s.set_defaults(func=cmd_qexp)

    s = sub.add_parser("tables", help="k_min or (k_max, kappa) rows as CSV")
    s.add_argument("--kind", choices=["kmin", "kmax-kappa"], required=True)
    s.add_argument("--levels", help='"6,10,12" or "6..30"')
    s.add_argument("--cap", type=int)
    s.add_argument("--jobs", type=int, default=1)
    s.add_argument("--with-reference", action="store_true")
    s.set_defaults(func=cmd_tables)

    s = sub.add_parser("check")
    s.add_argument("--target", choices=sorted(CHECKS), required=True)
    s.add_argument("--max-level", type=int, default=60)
    s.add_argument("--level", type=_level)
    s.add_argument("--levels")
    s.add_argument("--p", type=int, default=3)
    s.add_argument("--n", type=int, default=4)
    s.add_argument("--json", action="store_true")
    s.set_defaults(func=cmd_check)
    return p


def main(argv: list[str] | None = None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)  # exits with 2 on bad flags
    try:
        guards = load_guards(args.guards).with_overrides(
            max_divisors=args.max_divisors, max_det=args.max_det, max_k=args.max_k
        )
        code, text = args.func(args, guards)
    except GuardError as exc:
        print(f"etaforge: guard violation: {exc}", file=sys.stderr)
        return EXIT_GUARD
    except (UsageError, ValueError, OSError) as exc:
        print(f"etaforge: {exc}", file=sys.stderr)
        return EXIT_USAGE
    if args.verbose:
        print(f"# etaforge {args.command}")
    if text:
        print(text)
    return code


if __name__ == "__main__":
    sys.exit(main())
