"""Command-line front end: ``thompson-moonshine <command> [options]``."""

from __future__ import annotations

import argparse
import csv
import io
import json
import math
import os
import sys
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass
from fractions import Fraction
from pathlib import Path

import mpmath

from . import __version__
from .bqf import class_reps
from .cmeval import PrecisionContext, TraceError, trace_coefficient, trace_singular_moduli
from .qseries import HAUPTMODUL_LEVELS, F3_series, borcherds_product_check
from .rademacher import (CUTOFF_CAP_BASE, DEFAULT_CUTOFF_BASE, MultiplierSystem,
                         RademacherError, converge_rounded, hurwitz, rademacher_coefficient)
from . import thompson as th


@dataclass(frozen=True)
class RunConfig:
    digits: int = 60
    cutoff_base: int = DEFAULT_CUTOFF_BASE
    trunc: int = 33
    fmt: str = "csv"
    data_dir: str | None = None
    jobs: int = 1

    def __post_init__(self):
        if self.digits < 30:
            raise ValueError("--digits must be at least 30")
        if self.trunc < 4:
            raise ValueError("--trunc must be at least 4")
        if self.cutoff_base < 1:
            raise ValueError("--cutoff must be positive")

    @property
    def ctx(self) -> PrecisionContext:
        return PrecisionContext(self.digits)

    @property
    def resolved_data_dir(self) -> Path:
        return th.data_dir(self.data_dir)


# output ------------------------------------------------------------------------

def _fmt_float(x) -> str:
    if x is None:
        return ""
    return f"{float(x):.3e}"


def emit(rows: list[dict], cfg: RunConfig, out, comments: list[str] = (), extra: dict | None = None):
    if cfg.fmt == "json":
        doc = {"rows": rows}
        if comments:
            doc["notes"] = list(comments)
        if extra:
            doc.update(extra)
        json.dump(doc, out, indent=1, sort_keys=True, default=str)
        out.write("\n")
        return
    for c in comments:
        out.write(f"# {c}\n")
    if not rows:
        return
    w = csv.DictWriter(out, fieldnames=list(rows[0].keys()), lineterminator="\n")
    w.writeheader()
    for r in rows:
        w.writerow(r)


# computations shared by several commands -------------------------------------------

def _mt_worker(args):
    cls, trunc, digits, cutoff_base = args
    s = th.mt_series_exact(cls, trunc, PrecisionContext(digits), cutoff_base)
    return s


def compute_all_series(cfg: RunConfig, classes, trunc: int) -> dict[str, th.MTSeries]:
    work = [(c, trunc, cfg.digits, cfg.cutoff_base) for c in classes]
    if cfg.jobs > 1:
        with ProcessPoolExecutor(cfg.jobs) as pool:
            res = list(pool.map(_mt_worker, work))
    else:
        res = [_mt_worker(w) for w in work]
    return {s.cls: s for s in res}


def _mt_rows(s: th.MTSeries) -> list[dict]:
    rows = []
    for n in sorted(s.coefficients):
        c = s.coefficients[n]
        rows.append({"n": n, "value": "" if c.value is None else c.value, "route": c.route,
                     "residue": _fmt_float(c.residue), "cutoff": c.cutoff or "",
                     "tail_indicator": _fmt_float(c.tail_indicator)})
    return rows


# commands ------------------------------------------------------------------------

def cmd_f3(cfg: RunConfig, args, out) -> int:
    F = F3_series(cfg.trunc + 1)
    rows = [{"m": m, "c": int(F[m])} for m in range(-3, cfg.trunc + 1) if m % 4 in (0, 1)]
    emit(rows, cfg, out)
    return 0


def cmd_mt(cfg: RunConfig, args, out) -> int:
    classes = {c.name: c for c in th.load_classes(cfg.resolved_data_dir / "classes.csv")}
    if args.cls not in classes:
        print(f"unknown class {args.cls!r}; known: {' '.join(classes)}", file=sys.stderr)
        return 2
    s = th.mt_series_exact(classes[args.cls], cfg.trunc, cfg.ctx, cfg.cutoff_base)
    emit(_mt_rows(s), cfg, out, [f"class {s.cls}"])
    for f in s.failures:
        last = f.history[-3:] if f.history else []
        print(f"unconverged: {s.cls} n={f.n} route={f.route} last cutoffs {last}", file=sys.stderr)
    return 1 if s.failures else 0


def cmd_trace(cfg: RunConfig, args, out) -> int:
    try:
        val = trace_singular_moduli(args.N, args.D1, args.D2, cfg.ctx)
    except TraceError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2
    reps = class_reps(-args.D1 * args.D2, args.N, True)
    with mpmath.workdps(cfg.ctx.working_digits):
        norm = val / mpmath.sqrt(abs(args.D2))
    rows = [{"N": args.N, "D1": args.D1, "D2": args.D2,
             "trace": mpmath.nstr(val, 25), "normalized": mpmath.nstr(norm, 25),
             "nearest": int(mpmath.nint(norm)),
             "residue": _fmt_float(abs(norm - mpmath.nint(norm)))}]
    emit(rows, cfg, out, ["forms " + " ".join(f"[{r.form.a},{r.form.b},{r.form.c}]" for r in reps)])
    return 0


def cmd_rademacher(cfg: RunConfig, args, out) -> int:
    try:
        ms = MultiplierSystem(args.N, args.v, args.h)
        cutoff = args.cutoff_abs or 4 * args.N * cfg.cutoff_base
        est = rademacher_coefficient(ms, args.n, cutoff)
    except RademacherError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2
    r = round(est.estimate)
    emit([{"N": args.N, "v": args.v, "h": args.h, "n": args.n, "cutoff": cutoff,
           "estimate": repr(est.estimate), "nearest": r,
           "residue": _fmt_float(abs(est.estimate - r)),
           "tail_indicator": _fmt_float(est.tail_indicator)}], cfg, out)
    return 0


def _decompositions(cfg: RunConfig, mMax: int):
    d = cfg.resolved_data_dir
    classes = th.load_classes(d / "classes.csv")
    table = th.load_character_table(d / "thompson_character_table.csv")
    series = compute_all_series(cfg, classes, mMax)
    failures = [(s.cls, f.n) for s in series.values() for f in s.failures]
    decs = {}
    for m in th.exponents(mMax):
        if any(series[g].coefficients[m].value is None for g in table.classes):
            continue
        vec = [series[g].coefficients[m].value for g in table.classes]
        decs[m] = th.decompose(m, vec, table)
    F = F3_series(mMax + 1)
    c = {m: int(F[m]) for m in range(-3, mMax + 1)}
    report = th.verify_discriminant_property(mMax, decs, table, classes, c)
    return decs, report, failures


def cmd_decompose(cfg: RunConfig, args, out) -> int:
    decs, report, failures = _decompositions(cfg, args.max_m)
    rows = []
    for m, dec in decs.items():
        row = {"m": m, "parity": dec.parity}
        row.update({f"V{i + 1}": b for i, b in enumerate(dec.mults)})
        row.update({"residue": _fmt_float(dec.residue), "ok": int(dec.ok)})
        rows.append(row)
    notes = report.text().splitlines()
    notes += [f"unconverged class {g} n={n}" for g, n in failures]
    notes += [f"m={d.m}: {'; '.join(d.issues)}" for d in decs.values() if not d.ok]
    emit(rows, cfg, out, notes)
    return 0 if not failures and all(d.ok for d in decs.values()) else 1


def cmd_verify_discriminant(cfg: RunConfig, args, out) -> int:
    decs, report, failures = _decompositions(cfg, args.max_m)
    rows = [{"section": f.section, "subject": f.subject,
             "status": {True: "PASS", False: "FAIL", None: "N/A"}[f.ok], "detail": f.detail}
            for f in report.findings]
    notes = [f"qualifying D0: {report.qualifying}"]
    notes += [f"type {d}: {report.types[d]}" for d in report.qualifying]
    emit(rows, cfg, out, notes)
    return 0 if report.ok and not failures else 1


# crosscheck ---------------------------------------------------------------------

def reduced_form_weight(d: int) -> Fraction:
    """Sum of 1/omega over reduced forms of discriminant -d, by direct enumeration."""
    tot = Fraction(0)
    a = 1
    while 3 * a * a <= d:
        for b in range(-a + 1, a + 1):
            if (b * b + d) % (4 * a):
                continue
            c = (b * b + d) // (4 * a)
            if c < a or (c == a and b < 0):
                continue
            if b == 0 and a == c:
                tot += Fraction(1, 2)
            elif b == a and a == c:
                tot += Fraction(1, 3)
            else:
                tot += 1
        a += 1
    return tot


def crosscheck_rows(cfg: RunConfig) -> list[dict]:
    rows: list[dict] = []

    def add(a, b, subject, ok, resid, detail=""):
        rows.append({"route_a": a, "route_b": b, "coefficients": subject,
                     "max_residue": _fmt_float(resid), "status": "PASS" if ok else "FAIL",
                     "detail": detail})

    ctx = cfg.ctx
    F = F3_series(cfg.trunc + 1)
    nonsq = [n for n in range(1, cfg.trunc + 1) if n % 4 in (0, 1) and math.isqrt(n) ** 2 != n]

    # level 1: series against traces
    worst, bad = 0.0, []
    for n in nonsq:
        t = trace_coefficient(1, n, ctx)
        worst = max(worst, float(t.residue))
        # F_3 = 2 f_3 + 248 theta and theta vanishes off the squares
        if 2 * t.value != int(F[n]):
            bad.append(f"n={n}: 2*{t.value} vs {F[n]}")
    add("series", "trace", f"N=1 n<={cfg.trunc}", not bad, worst, "; ".join(bad[:3]))

    # traces against Rademacher sums at the genus-zero levels
    for N in HAUPTMODUL_LEVELS:
        ms = MultiplierSystem(N)
        worst, bad = 0.0, []
        for n in nonsq:
            t = trace_coefficient(N, n, ctx)
            cv = converge_rounded(ms, n, scale=1, cutoff_base=cfg.cutoff_base)
            if cv.value is None or cv.value != t.value:
                bad.append(f"n={n}: trace {t.value} rademacher {cv.estimate:.4f}")
            worst = max(worst, cv.residue)
        add("trace", "rademacher", f"N={N} n<={cfg.trunc}", not bad, worst, "; ".join(bad[:3]))

    rep = borcherds_product_check(4)
    add("borcherds", "eisenstein", "j^(1/3) through q^(8/3)", rep.ok, 0.0,
        "" if rep.ok else f"first mismatch {rep.first_mismatch}")

    bad = [d for d in range(3, 101) if d % 4 in (0, 3) and hurwitz(d) != reduced_form_weight(d)]
    add("hurwitz", "reduced-count", "d<=100", not bad, 0.0, f"d={bad[:5]}" if bad else "")
    return rows


def cmd_crosscheck(cfg: RunConfig, args, out) -> int:
    rows = crosscheck_rows(cfg)
    emit(rows, cfg, out)
    failed = [r for r in rows if r["status"] != "PASS"]
    if failed:
        f = failed[0]
        print(f"first failing cell: {f['route_a']} vs {f['route_b']} {f['coefficients']}: "
              f"{f['detail']}", file=sys.stderr)
    return 1 if failed else 0


# argument parsing -------------------------------------------------------------------

def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False, argument_default=argparse.SUPPRESS)
    common.add_argument("--digits", type=int, default=argparse.SUPPRESS, help="working precision (default 60)")
    common.add_argument("--cutoff", type=int, default=argparse.SUPPRESS, dest="cutoff_base",
                        help="starting Rademacher cutoff is 4N times this (default 10^4)")
    common.add_argument("--trunc", type=int, default=argparse.SUPPRESS, help="last exponent (default 33)")
    common.add_argument("--format", choices=("csv", "json"), default=argparse.SUPPRESS, dest="fmt")
    common.add_argument("--data-dir", default=argparse.SUPPRESS)
    common.add_argument("--jobs", type=int, default=argparse.SUPPRESS)
    common.add_argument("-o", "--output", default=argparse.SUPPRESS, help="write to a file instead of stdout")

    p = argparse.ArgumentParser(prog="thompson-moonshine", parents=[common])
    p.add_argument("--version", action="version", version=__version__)
    sub = p.add_subparsers(dest="command", required=True)

    sub.add_parser("f3", parents=[common], help="coefficients of F_3")
    q = sub.add_parser("mt", parents=[common], help="McKay-Thompson series of one class")
    q.add_argument("cls", metavar="CLASS")
    q = sub.add_parser("trace", parents=[common], help="twisted trace of singular moduli")
    q.add_argument("--N", type=int, required=True)
    q.add_argument("--D1", type=int, required=True)
    q.add_argument("--D2", type=int, required=True)
    q = sub.add_parser("rademacher", parents=[common], help="one Rademacher partial sum")
    q.add_argument("--N", type=int, required=True)
    q.add_argument("--v", type=int, default=0)
    q.add_argument("--h", type=int, default=1)
    q.add_argument("--n", type=int, required=True)
    q.add_argument("--max-c", type=int, default=None, dest="cutoff_abs",
                   help="absolute cutoff on c (overrides --cutoff)")
    for name in ("decompose", "verify-discriminant"):
        q = sub.add_parser(name, parents=[common])
        q.add_argument("--max-m", type=int, default=32)
    sub.add_parser("crosscheck", parents=[common], help="route agreement matrix")
    return p


def config_from(args) -> RunConfig:
    def pick(name, default):
        v = getattr(args, name, None)
        return default if v is None else v
    return RunConfig(digits=pick("digits", 60), cutoff_base=pick("cutoff_base", DEFAULT_CUTOFF_BASE),
                     trunc=pick("trunc", 33), fmt=pick("fmt", "csv"),
                     data_dir=pick("data_dir", os.environ.get(th.ENV_DATA_DIR)),
                     jobs=pick("jobs", 1))


COMMANDS = {"f3": cmd_f3, "mt": cmd_mt, "trace": cmd_trace, "rademacher": cmd_rademacher,
            "decompose": cmd_decompose, "verify-discriminant": cmd_verify_discriminant,
            "crosscheck": cmd_crosscheck}


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    try:
        cfg = config_from(args)
    except ValueError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2
    buf = io.StringIO()
    try:
        code = COMMANDS[args.command](cfg, args, buf)
    except th.DataError as exc:
        print(f"data error: {exc}", file=sys.stderr)
        return 2
    text = buf.getvalue()
    if getattr(args, "output", None):
        Path(args.output).write_text(text)
    else:
        sys.stdout.write(text)
    return code


if __name__ == "__main__":
    sys.exit(main())
