"""Acceptance suite: one test per numbered criterion, stated tolerances.

Every test prints one ``criterion N: PASS/FAIL`` line (run with ``-s`` to
see them on a green run) and measures wall time.  The long scans persist
rows under tests/_cache/ and resume, so a cold run recomputes everything
and a warm rerun replays it; runtime clauses are checked against the
recorded compute times, not against cache reads.

Three clauses fail against this codebase and are asserted as stated
anyway rather than loosened: the twisted-sum slope window (criterion 6),
the absolute 5e-3 level at Y = 40 (criterion 7), and the kernel-slope
match (criterion 10).
"""

import json
import math
import subprocess
import time
from pathlib import Path

import pytest

from cgmoments.classgroup import ClassGroup, Discriminant
from cgmoments.eisenstein import E_fourier, E_kronecker_expansion, scattering_matrix
from cgmoments.lfuncs import LD_quantity, hecke_residual
from cgmoments.moments import (
    KernelProfile,
    heegner_average,
    moment_identity,
    regularized_integral,
    twisted,
)
from cgmoments.scans import (
    demo_scan,
    dyadic_block_medians,
    fit_loglog_slope,
    fit_slope,
    fundamental_range,
    ld_audit,
    remainder_scan,
    twisted_scan,
    weyl_scan,
    write_rows,
)
from cgmoments.specfun import (
    EULER_GAMMA,
    bessel_K,
    gamma,
    kronecker_limit_constant,
    log_eta,
    zeta_bundle,
    zeta_pair,
)

CACHE = Path(__file__).parent / "_cache"
S_HALF_2 = complex(0.5, 2.0)


def _report(num, ok, detail):
    line = f"criterion {num}: {'PASS' if ok else 'FAIL'} ({detail})"
    print(line)
    assert ok, line


def test_criterion_01_hecke_identity():
    t0 = time.perf_counter()
    worst = 0.0
    for D in (-23, -47, -71):
        group = ClassGroup(D)
        for s in (complex(2.0), complex(0.5, 5.0)):
            for idx, form in enumerate(group.forms):
                scale = abs(E_fourier(s, form.root()).value)
                rel = hecke_residual(s, idx, group) / scale
                worst = max(worst, rel)
    wall = time.perf_counter() - t0
    _report(1, worst < 1e-8 and wall < 5.0,
            f"worst rel residual {worst:.3e}, {wall:.2f}s")


def test_criterion_02_moment_and_twisted():
    t0 = time.perf_counter()
    rep = moment_identity(-23, complex(0.5, 3.0))
    rel_m = abs(rep.remainder) / abs(rep.lhs)
    tw = twisted(-23, 2, complex(0.5, 3.0))
    d = Discriminant(-23)
    geom_route = (4 / d.w**2) * (2 / d.sqrt_abs) * (tw.r_average + tw.c_average)
    rel_t = abs(geom_route - tw.twisted_value) / abs(tw.twisted_value)
    wall = time.perf_counter() - t0
    _report(2, rel_m < 1e-6 and rel_t < 1e-6 and wall < 5.0,
            f"moment rel {rel_m:.3e}, twisted rel {rel_t:.3e}, {wall:.2f}s")


def test_criterion_03_exact_average():
    t0 = time.perf_counter()
    worst = 0.0
    for D in (-7, -23, -163):
        lhs = -heegner_average("log_eta4", D)
        rhs = LD_quantity(D).value + math.log(2) - EULER_GAMMA
        worst = max(worst, abs(lhs - rhs))
    wall = time.perf_counter() - t0
    _report(3, worst < 1e-8 and wall < 2.0,
            f"worst residual {worst:.3e}, {wall:.2f}s")


def test_criterion_04_kronecker_limit():
    t0 = time.perf_counter()
    z = 2j
    seq = [(math.pi / 3) * E_fourier(1 + h, z).value.real - 1 / h
           for h in (8e-3, 4e-3, 2e-3)]
    r1 = [2 * seq[i + 1] - seq[i] for i in range(2)]
    extrap = (4 * r1[1] - r1[0]) / 3
    target = -(math.log(2) + 4 * log_eta(z).real) + 2 * kronecker_limit_constant()
    err = abs(extrap - target)
    # same closed form the series expansion uses; agreement ties the routes
    assert abs(E_kronecker_expansion(z)[1].real - target) < 1e-12
    wall = time.perf_counter() - t0
    _report(4, err < 1e-5 and wall < 2.0,
            f"|extrapolated - closed form| {err:.3e}, {wall:.2f}s")


def test_criterion_05_remainder_trend():
    t0 = time.perf_counter()
    rows = remainder_scan(-20000, -1000, s=S_HALF_2,
                          progress_path=str(CACHE / "criterion5.csv"))
    wall = time.perf_counter() - t0
    compute_s = sum(r.runtime_ms for r in rows) / 1000
    meds = dyadic_block_medians(rows)
    run = best = 1
    for i in range(1, len(meds)):
        run = run + 1 if meds[i][1] < meds[i - 1][1] else 1
        best = max(best, run)
    slope = fit_loglog_slope(meds)
    ok = len(meds) >= 3 and best >= 3 and slope < 0 and compute_s < 600
    _report(5, ok,
            f"{len(rows)} discs, {len(meds)} blocks, longest decreasing run "
            f"{best}, median slope {slope:.3f}, compute {compute_s:.0f}s, "
            f"wall {wall:.1f}s")


def test_criterion_06_twisted_scaling_slope():
    t0 = time.perf_counter()
    rows = twisted_scan(-71, 110, s=S_HALF_2)
    wall = time.perf_counter() - t0
    slope = fit_loglog_slope([(r.N, r.lhs) for r in rows])
    ok = -1.0 <= slope <= 0.0 and wall < 300
    _report(6, ok,
            f"{len(rows)} split primes, log|twisted| vs log N slope "
            f"{slope:+.3f}, window [-1, 0], {wall:.1f}s")


def _criterion7_values():
    path = CACHE / "criterion7.json"
    state = json.loads(path.read_text()) if path.exists() else {}
    for key, kind, N, Y in (("B_Y10", "B", None, 10.0), ("B_Y40", "B", None, 40.0),
                            ("C_Y10", "C", 3, 10.0), ("C_Y40", "C", 3, 40.0)):
        if key not in state:
            t0 = time.perf_counter()
            val = regularized_integral(kind, S_HALF_2, N=N, Y=Y)
            state[key] = {"value": float(val),
                          "seconds": time.perf_counter() - t0}
            CACHE.mkdir(exist_ok=True)
            path.write_text(json.dumps(state, indent=1))
    return state


def test_criterion_07_decay():
    vals = _criterion7_values()
    compute_s = sum(v["seconds"] for v in vals.values())
    drop_b = abs(vals["B_Y40"]["value"]) < abs(vals["B_Y10"]["value"])
    drop_c = abs(vals["C_Y40"]["value"]) < abs(vals["C_Y10"]["value"])
    _report("7 (decay)", drop_b and drop_c and compute_s < 300,
            f"|B|: {abs(vals['B_Y10']['value']):.4f} -> "
            f"{abs(vals['B_Y40']['value']):.4f}, |C|: "
            f"{abs(vals['C_Y10']['value']):.4f} -> "
            f"{abs(vals['C_Y40']['value']):.4f}, compute {compute_s:.0f}s")


def test_criterion_07_absolute_level():
    vals = _criterion7_values()
    worst = max(abs(vals["B_Y40"]["value"]), abs(vals["C_Y40"]["value"]))
    _report("7 (5e-3 level)", worst < 5e-3,
            f"max |integral| at Y=40 is {worst:.4f}, bound 5e-3")


def test_criterion_08_special_function_matrix():
    t0 = time.perf_counter()
    checks = {
        "zeta(2)": abs(zeta_pair(2.0)[0] - math.pi**2 / 6),
        "gamma(1/2)": abs(gamma(0.5) - math.sqrt(math.pi)),
        "K_{1/2}(1)": abs(bessel_K(0.5, 1.0) - math.sqrt(math.pi / 2) / math.e),
    }
    s = complex(0.3, 0.7)
    checks["xi FEQ"] = abs(zeta_bundle(s).xi - zeta_bundle(1 - s).xi)
    phi = scattering_matrix(S_HALF_2, 5) @ scattering_matrix(1 - S_HALF_2, 5)
    checks["Phi(s)Phi(1-s)"] = max(abs(phi[0, 0] - 1), abs(phi[1, 1] - 1),
                                   abs(phi[0, 1]), abs(phi[1, 0]))
    wall = time.perf_counter() - t0
    worst = max(checks.values())
    _report(8, worst < 1e-10 and wall < 1.0,
            f"worst deviation {worst:.3e} ({max(checks, key=checks.get)}), "
            f"{wall:.2f}s")


def test_criterion_09_ld_lower_bound():
    t0 = time.perf_counter()
    rows = ld_audit(-100000, -1000,
                    progress_path=str(CACHE / "criterion9.csv"))
    wall = time.perf_counter() - t0
    compute_s = sum(r.runtime_ms for r in rows) / 1000
    ratios = [(r.D, r.residual_or_remainder) for r in rows]
    min_d, min_ratio = min(ratios, key=lambda p: p[1])
    violations = [(d, round(v, 4)) for d, v in ratios if v < 0.24]
    _report(9, min_ratio >= 0.24 and not violations and compute_s < 1200,
            f"{len(rows)} discs, min L_D/log|D| = {min_ratio:.4f} at D={min_d}, "
            f"violations {violations}, compute {compute_s:.0f}s, wall {wall:.1f}s")


def _demo_rows():
    return demo_scan(progress_path=str(CACHE / "criterion10.csv"))


def test_criterion_10_log_jprime_slope():
    t0 = time.perf_counter()
    rows = _demo_rows()
    wall = time.perf_counter() - t0
    slope = fit_slope([(r.LD, r.lhs) for r in rows])
    _report("10 (log j')", abs(slope - 6.0) <= 0.2,
            f"{len(rows)} discs, slope vs L_D {slope:.4f}, target 6 +- 0.2, "
            f"wall {wall:.1f}s")


def test_criterion_10_kernel_slope():
    rows = _demo_rows()
    prof = KernelProfile(radius=2.0)
    mp = pytest.importorskip("mpmath")
    a2_oracle = 2 * float(mp.quad(lambda u: prof(float(u)) / mp.sqrt(u),
                                  [0, prof.radius]))
    a2 = 3.918167444946677  # frozen from the quadrature oracle above
    assert abs(a2_oracle - a2) < 1e-9
    slope = fit_slope([(r.LD, r.rhs_or_main) for r in rows])
    _report("10 (kernel)", abs(slope - a2) <= 0.1 * a2,
            f"kernel-average slope vs L_D {slope:.4f}, a2 = {a2:.4f}, "
            f"ratio {slope / a2:.3f}, bound 10%")


def _python_refit(kind, rows):
    if kind in ("remainder_decay", "weyl_decay"):
        return fit_loglog_slope(dyadic_block_medians(rows))
    if kind == "twisted_scaling":
        return fit_loglog_slope([(r.N, r.lhs) for r in rows])
    raise ValueError(kind)


def test_criterion_11_report_figures(tmp_path):
    report_cli = Path(__file__).parent.parent / "report" / "dist" / "src" / "cli.js"
    if not report_cli.exists():
        print("criterion 11: SKIP (secondary component absent; primary suite "
              "runs without it)")
        pytest.skip("report component not built")
    from cgmoments import scans

    inputs = {
        "remainder_decay": CACHE / "criterion5.csv",
        "twisted_scaling": CACHE / "criterion6.csv",
        "weyl_decay": CACHE / "weyl.csv",
        "LD_histogram": CACHE / "criterion9.csv",
    }
    if not inputs["twisted_scaling"].exists():
        write_rows(str(inputs["twisted_scaling"]), twisted_scan(-71, 110, s=S_HALF_2))
    if not inputs["weyl_decay"].exists():
        write_rows(str(inputs["weyl_decay"]),
                   weyl_scan(fundamental_range(-2500, -1000), s=S_HALF_2))
    worst = 0.0
    for kind, csv_path in inputs.items():
        assert csv_path.exists(), f"missing scan CSV for {kind}"
        out = tmp_path / f"{kind}.svg"
        proc = subprocess.run(
            ["node", str(report_cli), "--input", str(csv_path),
             "--kind", kind, "--output", str(out)],
            capture_output=True, text=True)
        assert proc.returncode == 0, proc.stderr
        assert out.exists() and out.stat().st_size > 0
        printed = dict(line.split(": ", 1) for line in
                       proc.stdout.strip().splitlines() if ": " in line)
        rows = scans.load_rows(str(csv_path))
        if kind == "LD_histogram":
            mine = min(r.residual_or_remainder for r in rows)
            worst = max(worst, abs(float(printed["min_ratio"]) - mine))
        else:
            worst = max(worst, abs(float(printed["slope"]) - _python_refit(kind, rows)))
    _report(11, worst <= 1e-9,
            f"four figures rendered, max slope mismatch {worst:.2e}")
