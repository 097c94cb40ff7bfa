#!/usr/bin/env python3
"""Recompute k_min and k_max over a range of levels and compare with the
reference values shipped in etaforge.tables.

    python3 scripts/reproduce_tables.py --kind kmin --levels 6..60
    python3 scripts/reproduce_tables.py --kind kmax --levels 6..32 --jobs 2
"""

import argparse
import csv
import sys
import time
from concurrent.futures import ProcessPoolExecutor

from etaforge.cli import parse_levels
from etaforge.enumeration import GuardError
from etaforge.factor import k_max, k_min
from etaforge.numtheory import kappa
from etaforge.tables import KMIN_REFERENCE, kmax_reference


def row(job):
    kind, N = job
    t0 = time.perf_counter()
    try:
        value = k_min(N) if kind == "kmin" else k_max(N)
    except GuardError as exc:
        value = f"guard: {exc}"
    ref = KMIN_REFERENCE.get(N) if kind == "kmin" else kmax_reference(N)
    if isinstance(value, str) or ref is None:
        status = "n/a"
    else:
        status = "match" if value == ref else "MISMATCH"
    return [N, value, kappa(N), "" if ref is None else ref, status, f"{time.perf_counter() - t0:.2f}"]


def main():
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--kind", choices=["kmin", "kmax"], default="kmin")
    ap.add_argument("--levels", default="6..30")
    ap.add_argument("--jobs", type=int, default=1)
    args = ap.parse_args()
    jobs = [(args.kind, N) for N in parse_levels(args.levels) if N > 1]
    if args.jobs > 1:
        with ProcessPoolExecutor(args.jobs) as ex:
            rows = list(ex.map(row, jobs))
    else:
        rows = map(row, jobs)
    out = csv.writer(sys.stdout, lineterminator="\n")
    out.writerow(["N", args.kind, "kappa", "reference", "status", "seconds"])
    bad = 0
    for r in rows:
        out.writerow(r)
        sys.stdout.flush()
        bad += r[4] == "MISMATCH"
    return 1 if bad else 0


if __name__ == "__main__":
    sys.exit(main())
