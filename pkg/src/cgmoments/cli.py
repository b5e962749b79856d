"""Command-line surface: identity suites, scans, CSV/JSON records.

Every subcommand emits VerificationRecord rows.  The residual_or_remainder
column always holds the exact number a tolerance gate would read; rows whose
suite is a verification (verify, moment, twisted cross-check) are gated and
drive the exit code, decomposition and evaluation rows are informational.

Exit codes: 0 all gates pass, 1 a gated residual exceeded tolerance,
2 invalid input.
"""

from __future__ import annotations

import argparse
import csv
import json
import math
import random
import sys
import time

from dataclasses import dataclass

import numpy as np

from .classgroup import ClassGroup, Discriminant
from .eisenstein import (
    E_fourier,
    E_kronecker_expansion,
    E_level_N,
    E_theta,
    scattering_matrix,
)
from .heegner import heegner_points, level_N_points, principal_point
from .lfuncs import LD_quantity, hecke_residual, partial_zeta
from .moments import (
    heegner_average,
    moment_identity,
    regularized_integral,
    theoremA,
    twisted,
)
from .scans import fundamental_range, remainder_scan, twisted_scan, weyl_scan
from .specfun import dirichlet_L, modular_values, zeta_pair

_EULER = 0.5772156649015329

CSV_FIELDS = (
    "suite", "D", "N", "s_re", "s_im", "lhs", "rhs_or_main",
    "residual_or_remainder", "h", "LD", "runtime_ms",
)


@dataclass(frozen=True)
class VerificationRecord:
    suite: str
    D: int
    N: int
    s_re: float
    s_im: float
    lhs: float
    rhs_or_main: float
    residual_or_remainder: float
    h: int
    LD: float
    runtime_ms: int


# (record, default_tol) pairs; default_tol None marks an ungated row
Row = tuple[VerificationRecord, float | None]


def _rec(suite, *, D=0, N=0, s=0j, lhs=0.0, rhs=0.0, resid=0.0, h=0,
         LD=0.0, ms=0) -> VerificationRecord:
    return VerificationRecord(
        suite, int(D), int(N), float(s.real), float(s.imag), float(lhs),
        float(rhs), float(resid), int(h), float(LD), int(ms))


def _emit(rows: list[Row], fmt: str, stream):
    if fmt == "csv":
        writer = csv.writer(stream)
        writer.writerow(CSV_FIELDS)
        for rec, _ in rows:
            writer.writerow([
                rec.suite, rec.D, rec.N, repr(rec.s_re), repr(rec.s_im),
                repr(rec.lhs), repr(rec.rhs_or_main),
                repr(rec.residual_or_remainder), rec.h, repr(rec.LD),
                rec.runtime_ms,
            ])
    else:
        stream.write(json.dumps(
            [{f: getattr(rec, f) for f in CSV_FIELDS} for rec, _ in rows],
            indent=1))
        stream.write("\n")


def _exit_code(rows: list[Row], tol_flag: float | None) -> int:
    for rec, default_tol in rows:
        if default_tol is None:
            continue
        tol = tol_flag if tol_flag is not None else default_tol
        if not (rec.residual_or_remainder <= tol):
            return 1
    return 0


def _parse_pair(text: str, what: str) -> complex:
    parts = text.split(",")
    if len(parts) not in (1, 2):
        raise ValueError(f"{what} expects 'a' or 'a,b', got {text!r}")
    try:
        re_part = float(parts[0])
        im_part = float(parts[1]) if len(parts) == 2 else 0.0
    except ValueError:
        raise ValueError(f"{what} expects numbers, got {text!r}") from None
    return complex(re_part, im_part)


def _ld(D: int) -> float:
    engine = "theta" if abs(D) > 2500 else "hurwitz"
    return LD_quantity(D, engine=engine).value


# -- subcommands --------------------------------------------------------------

def _cmd_classgroup(args) -> list[Row]:
    t0 = time.perf_counter()
    group = ClassGroup(args.disc)
    ld = _ld(args.disc)
    ms = int((time.perf_counter() - t0) * 1000)
    # one row per reduced form; (a, b, c) ride in the three value columns
    return [(_rec("classgroup", D=args.disc, lhs=f.a, rhs=f.b, resid=f.c,
                  h=group.h, LD=ld, ms=ms), None) for f in group.forms]


def _cmd_heegner(args) -> list[Row]:
    t0 = time.perf_counter()
    group = ClassGroup(args.disc)
    ld = _ld(args.disc)
    rows: list[Row] = []
    if args.level is None:
        pts = heegner_points(args.disc)
        ms = int((time.perf_counter() - t0) * 1000)
        for tau in pts:
            rows.append((_rec("heegner", D=args.disc, lhs=tau.real,
                              rhs=tau.imag, h=group.h, LD=ld, ms=ms), None))
    else:
        pts = level_N_points(args.disc, args.level, group)
        ms = int((time.perf_counter() - t0) * 1000)
        for p in pts:
            rows.append((_rec("heegner_level", D=args.disc, N=args.level,
                              lhs=p.tau.real, rhs=p.tau.imag, h=group.h,
                              LD=ld, ms=ms), None))
    return rows


def _cmd_eval(args) -> list[Row]:
    z = _parse_pair(args.z, "--z")
    if z.imag <= 0:
        raise ValueError("--z must lie in the upper half-plane")
    t0 = time.perf_counter()
    if args.what == "eisenstein":
        s = _parse_pair(args.s, "--s")
        if args.level is None:
            val = E_fourier(s, z).value
        else:
            cusp = {"inf": "infinity", "0": "zero"}[args.cusp]
            val = E_level_N(cusp, s, z, args.level)
        N = args.level or 0
    else:
        s = 0j
        N = 0
        mv = modular_values(z)
        val = mv.eta if args.what == "eta" else mv.j
    ms = int((time.perf_counter() - t0) * 1000)
    return [(_rec("eval_" + args.what, N=N, s=s, lhs=val.real, rhs=val.imag,
                  ms=ms), None)]


def _verify_hecke(args) -> list[Row]:
    s = _parse_pair(args.s, "--s") if args.s else 0.5 + 5j
    group = ClassGroup(args.disc)
    d = group.disc
    ld = _ld(args.disc)
    rows: list[Row] = []
    for idx, form in enumerate(group.forms):
        t0 = time.perf_counter()
        resid = hecke_residual(s, idx, group)
        eis = E_fourier(s, form.root()).value
        pz = partial_zeta(s, form, group).value
        route2 = (d.w / 2) * (d.sqrt_abs / 2) ** s * pz / zeta_pair(2 * s)[0]
        ms = int((time.perf_counter() - t0) * 1000)
        rel = resid / max(1.0, abs(eis))
        rows.append((_rec("hecke", D=args.disc, N=idx, s=s, lhs=abs(eis),
                          rhs=abs(route2), resid=rel, h=group.h, LD=ld,
                          ms=ms), 1e-8))
    return rows


def _verify_kronecker(args) -> list[Row]:
    z = principal_point(args.disc)
    t0 = time.perf_counter()
    _, const = E_kronecker_expansion(z)
    seq = [(math.pi / 3) * E_theta(1 + hh, z).real - 1 / hh
           for hh in (8e-3, 4e-3, 2e-3)]
    r1 = [2 * seq[i + 1] - seq[i] for i in range(2)]
    extrap = (4 * r1[1] - r1[0]) / 3
    ms = int((time.perf_counter() - t0) * 1000)
    group = ClassGroup(args.disc)
    return [(_rec("kronecker", D=args.disc, s=1 + 0j, lhs=extrap,
                  rhs=const.real, resid=abs(extrap - const.real), h=group.h,
                  LD=_ld(args.disc), ms=ms), 1e-5)]


def _verify_average(args) -> list[Row]:
    t0 = time.perf_counter()
    avg = heegner_average("log_eta4", args.disc)
    ld = _ld(args.disc)
    rhs = ld + math.log(2) - _EULER
    ms = int((time.perf_counter() - t0) * 1000)
    group = ClassGroup(args.disc)
    return [(_rec("average", D=args.disc, s=1 + 0j, lhs=-avg, rhs=rhs,
                  resid=abs(-avg - rhs), h=group.h, LD=ld, ms=ms), 1e-8)]


def _verify_identities(args) -> list[Row]:
    s = _parse_pair(args.s, "--s") if args.s else 0.5 + 2j
    rng = random.Random(args.seed)
    z = complex(rng.uniform(-0.5, 0.5), rng.uniform(0.9, 1.8))
    group = ClassGroup(args.disc)
    d = group.disc
    ld = _ld(args.disc)
    rows: list[Row] = []

    def add(suite, lhs, rhs, resid, tol, ms, N=0, s_row=None):
        rows.append((_rec(suite, D=args.disc, N=N,
                          s=s if s_row is None else s_row, lhs=lhs, rhs=rhs,
                          resid=resid, h=group.h, LD=ld, ms=ms), tol))

    t0 = time.perf_counter()
    worst = max(range(group.h),
                key=lambda i: hecke_residual(s, i, group))
    resid = hecke_residual(s, worst, group)
    eis = abs(E_fourier(s, group.forms[worst].root()).value)
    ms = int((time.perf_counter() - t0) * 1000)
    add("hecke", eis, eis, resid / max(1.0, eis), 1e-8, ms, N=worst)

    t0 = time.perf_counter()
    lhs = sum(partial_zeta(s, f, group).value for f in group.forms)
    rhs = 2 * zeta_pair(s)[0] * dirichlet_L(s, d.D)
    ms = int((time.perf_counter() - t0) * 1000)
    add("zeta_split", abs(lhs), abs(rhs), abs(lhs - rhs) / abs(rhs), 1e-8, ms)

    t0 = time.perf_counter()
    rep = moment_identity(args.disc, s)
    ms = int((time.perf_counter() - t0) * 1000)
    add("moment", rep.lhs, rep.main_term,
        abs(rep.remainder) / abs(rep.lhs), 1e-6, ms)

    t0 = time.perf_counter()
    avg = heegner_average("log_eta4", args.disc)
    rhs = ld + math.log(2) - 0.5772156649015329
    ms = int((time.perf_counter() - t0) * 1000)
    add("average", -avg, rhs, abs(-avg - rhs), 1e-8, ms, s_row=1 + 0j)

    N = 3
    t0 = time.perf_counter()
    einf = E_level_N("infinity", s, z, N)
    ezero = E_level_N("zero", s, z, N)
    whole = E_fourier(s, z).value
    recomb = einf + N ** s * ezero
    ms = int((time.perf_counter() - t0) * 1000)
    add("level_split", abs(whole), abs(recomb),
        abs(whole - recomb) / max(1.0, abs(whole)), 1e-9, ms, N=N)

    t0 = time.perf_counter()
    swap = E_level_N("infinity", s, -1 / (N * z), N)
    ms = int((time.perf_counter() - t0) * 1000)
    add("fricke_swap", abs(ezero), abs(swap),
        abs(ezero - swap) / max(1.0, abs(ezero)), 1e-8, ms, N=N)

    t0 = time.perf_counter()
    prod = scattering_matrix(s, 5) @ scattering_matrix(1 - s, 5)
    resid = float(np.abs(prod - np.eye(2)).max())
    ms = int((time.perf_counter() - t0) * 1000)
    add("scattering", float(np.abs(prod[0, 0])), 1.0, resid, 1e-10, ms, N=5)

    return rows


def _cmd_moment(args) -> list[Row]:
    s = complex(0.5, args.t)
    t0 = time.perf_counter()
    rep = moment_identity(args.disc, s)
    ms1 = int((time.perf_counter() - t0) * 1000)
    t0 = time.perf_counter()
    dec = theoremA(args.disc, s)
    ms2 = int((time.perf_counter() - t0) * 1000)
    rel = abs(rep.remainder) / abs(rep.lhs)
    return [
        (_rec("moment", D=args.disc, s=s, lhs=rep.lhs, rhs=rep.main_term,
              resid=rel, h=rep.h, LD=rep.LD, ms=ms1), 1e-6),
        (_rec("moment_decomposition", D=args.disc, s=s, lhs=dec.lhs,
              rhs=dec.main_term, resid=dec.remainder, h=dec.h, LD=dec.LD,
              ms=ms2), None),
    ]


def _cmd_twisted(args) -> list[Row]:
    s = complex(0.5, args.t)
    t0 = time.perf_counter()
    rep = twisted(args.disc, args.N, s)
    ms = int((time.perf_counter() - t0) * 1000)
    d = Discriminant(args.disc)
    geom = (4 / d.w ** 2) * (2 / d.sqrt_abs) * (rep.r_average + rep.c_average)
    rel = abs(geom - rep.twisted_value) / max(1e-12, abs(rep.twisted_value))
    group = ClassGroup(args.disc)
    ld = _ld(args.disc)
    return [
        (_rec("twisted", D=args.disc, N=args.N, s=s,
              lhs=rep.twisted_value.real, rhs=geom.real, resid=rel,
              h=group.h, LD=ld, ms=ms), 1e-6),
        (_rec("twisted_decomposition", D=args.disc, N=args.N, s=s,
              lhs=abs(rep.twisted_value), rhs=abs(rep.r_average),
              resid=rep.scaling_ratio, h=group.h, LD=ld, ms=ms), None),
    ]


def _cmd_scan(args) -> list[Row]:
    s = complex(0.5, args.t)
    if args.what == "remainder":
        scan = remainder_scan(args.dmin, args.dmax, s)
    elif args.what == "weyl":
        scan = weyl_scan(fundamental_range(args.dmin, args.dmax), s)
    else:
        if args.disc is None:
            raise ValueError("scan twisted-scaling requires --disc")
        scan = twisted_scan(args.disc, args.nmax, s)
    return [(_rec(r.suite, D=r.D, N=r.N, s=r.s, lhs=r.lhs, rhs=r.rhs_or_main,
                  resid=r.residual_or_remainder, h=r.h, LD=r.LD,
                  ms=r.runtime_ms), None) for r in scan]


def _cmd_integral(args) -> list[Row]:
    s = complex(0.5, args.t)
    t0 = time.perf_counter()
    val = regularized_integral(args.kind, s, N=args.N, Y=args.Y)
    ms = int((time.perf_counter() - t0) * 1000)
    return [(_rec("integral_" + args.kind, N=args.N or 0, s=s, lhs=val,
                  resid=val, ms=ms), None)]


# -- argument surface ---------------------------------------------------------

def _build_parser() -> argparse.ArgumentParser:
    top = argparse.ArgumentParser(
        prog="cgmoments",
        description="class-group L-function moment toolkit")
    top.add_argument("--tol", type=float, default=None,
                     help="override every gate tolerance")
    top.add_argument("--seed", type=int, default=0,
                     help="seed for randomized evaluation points")
    top.add_argument("--format", choices=("csv", "json"), default="csv")
    # same flags after the subcommand; SUPPRESS keeps the top-level value
    # unless the user actually repeats one there
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--tol", type=float, default=argparse.SUPPRESS)
    common.add_argument("--seed", type=int, default=argparse.SUPPRESS)
    common.add_argument("--format", choices=("csv", "json"),
                        default=argparse.SUPPRESS)
    sub = top.add_subparsers(dest="command", required=True)

    def add_parser(name, **kw):
        return sub.add_parser(name, parents=[common], **kw)

    p = add_parser("classgroup", help="reduced forms and class number")
    p.add_argument("--disc", type=int, required=True)
    p.set_defaults(run=_cmd_classgroup)

    p = add_parser("heegner", help="Heegner points, optionally level N")
    p.add_argument("--disc", type=int, required=True)
    p.add_argument("--level", type=int, default=None)
    p.set_defaults(run=_cmd_heegner)

    p = add_parser("eval", help="evaluate a single special function")
    p.add_argument("what", choices=("eisenstein", "eta", "j"))
    p.add_argument("--s", default="0.5,2")
    p.add_argument("--z", required=True, help="x,y for z = x + iy")
    p.add_argument("--level", type=int, default=None)
    p.add_argument("--cusp", choices=("inf", "0"), default="inf")
    p.set_defaults(run=_cmd_eval)

    p = add_parser("verify", help="run a gated identity check")
    p.add_argument("what",
                   choices=("hecke", "kronecker", "average", "identities"))
    p.add_argument("--disc", type=int, required=True)
    p.add_argument("--s", default=None, help="a,b for s = a + bi")
    p.set_defaults(run=_dispatch_verify)

    p = add_parser("moment", help="second-moment identity at s=1/2+it")
    p.add_argument("--disc", type=int, required=True)
    p.add_argument("--t", type=float, required=True)
    p.set_defaults(run=_cmd_moment)

    p = add_parser("twisted", help="moment twisted by a split prime class")
    p.add_argument("--disc", type=int, required=True)
    p.add_argument("--N", type=int, required=True)
    p.add_argument("--t", type=float, required=True)
    p.set_defaults(run=_cmd_twisted)

    p = add_parser("scan", help="discriminant or level scans, CSV/JSON out")
    p.add_argument("what", choices=("remainder", "twisted-scaling", "weyl"))
    p.add_argument("--dmin", type=int, default=None)
    p.add_argument("--dmax", type=int, default=None)
    p.add_argument("--disc", type=int, default=None,
                   help="fixed discriminant (twisted-scaling)")
    p.add_argument("--nmax", type=int, default=110,
                   help="largest split prime (twisted-scaling)")
    p.add_argument("--t", type=float, default=2.0)
    p.add_argument("--out", required=True)
    p.set_defaults(run=_cmd_scan)

    p = add_parser("integral", help="regularized fundamental-domain integral")
    p.add_argument("--kind", choices=("B", "C"), required=True)
    p.add_argument("--t", type=float, required=True)
    p.add_argument("--N", type=int, default=None)
    p.add_argument("--Y", type=float, required=True)
    p.set_defaults(run=_cmd_integral)

    return top


def _dispatch_verify(args) -> list[Row]:
    return {
        "hecke": _verify_hecke,
        "kronecker": _verify_kronecker,
        "average": _verify_average,
        "identities": _verify_identities,
    }[args.what](args)


def main(argv: list[str] | None = None) -> int:
    args = _build_parser().parse_args(argv)
    try:
        if args.command == "scan":
            if args.what in ("remainder", "weyl"):
                if args.dmin is None or args.dmax is None:
                    raise ValueError(f"scan {args.what} requires --dmin and --dmax")
            rows = args.run(args)
            with open(args.out, "w", newline="") as fh:
                _emit(rows, args.format, fh)
        else:
            rows = args.run(args)
            _emit(rows, args.format, sys.stdout)
    except (ValueError, KeyError) as exc:
        print(f"cgmoments: {exc}", file=sys.stderr)
        return 2
    return _exit_code(rows, args.tol)


if __name__ == "__main__":
    sys.exit(main())
