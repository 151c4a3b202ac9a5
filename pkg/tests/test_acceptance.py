"""Acceptance criteria 1-12, each at its stated size and tolerance.

Every test prints a single ``criterion N: PASS|FAIL ...`` line; the lines
are repeated in the terminal summary.
"""
import cmath
import time

import numpy as np

from conftest import ACCEPTANCE_LINES
from qweyl.braidops import verify_braid_family, verify_RS, verify_s_mu_alpha
from qweyl.glrep import verify_howe_dims, verify_omega_kappa
from qweyl.monodromy import (
    main_theorem_harness,
    match_eigenvalues,
    verify_flatness,
    verify_kz_casimir,
    verify_main_theorem,
    verify_monodromy_braid,
)
from qweyl.qmatspace import verify_manin, verify_q_pieri, verify_serre
from qweyl.report import Report

SMALL = [(k, n) for k in (1, 2, 3) for n in (1, 2, 3)]


def record(num, ok, detail):
    line = f"criterion {num}: {'PASS' if ok else 'FAIL'}  {detail}"
    print(line)
    ACCEPTANCE_LINES.append(line)
    assert ok, line


def merged(reports):
    out = Report("acceptance")
    for r in reports:
        out.extend(r)
    return out


def summary(rep):
    bad = rep.failures()
    first = f"; first failure {bad[0].identity} @ {bad[0].block}" if bad else ""
    return f"{len(rep.checks)} checks, {len(bad)} failed{first}"


def test_criterion_01_r_equals_s():
    t = time.perf_counter()
    rep = merged(verify_RS(k, n, 4) for k in (2, 3) for n in (2, 3))
    dt = time.perf_counter() - t
    record(1, rep.passed and dt < 60, f"{summary(rep)}, {dt:.1f}s (limit 60s)")


def test_criterion_02_serre():
    rep = merged(verify_serre(k, n, side, 4) for k, n in SMALL for side in ("k", "n"))
    record(2, rep.passed, summary(rep))


def test_criterion_03_manin():
    rep = merged(verify_manin(k, n, words=1000, max_len=6, seed=0, max_degree=5) for k, n in SMALL)
    record(3, rep.passed, summary(rep))


def test_criterion_04_omega_kappa():
    rep = merged(verify_omega_kappa(k, n, 5) for k, n in SMALL)
    record(4, rep.passed, summary(rep))


def test_criterion_05_howe():
    rep = merged(verify_howe_dims(k, n, d) for k in range(1, 5) for n in range(1, 5) for d in range(7))
    record(5, rep.passed, summary(rep))


def test_criterion_06_q_pieri():
    # the two-row highest weight vectors need a second row, so k = 1 is outside the statement
    rep = merged(verify_q_pieri(4, k) for k in (2, 3))
    record(6, rep.passed, summary(rep))


def test_criterion_07_s_mu_alpha():
    rep = verify_s_mu_alpha(8)
    record(7, rep.passed, summary(rep))


def test_criterion_08_flatness():
    reps = [verify_flatness("casimir", n, k, 4, max_dim=100) for n in (2, 3, 4) for k in (1, 2, 3)]
    reps += [verify_flatness("kz", n, k, 4, max_dim=100) for n in (2, 3) for k in (1, 2, 3)]
    rep = merged(reps)
    record(8, rep.passed, summary(rep))


def test_criterion_09_braid():
    exact = merged(verify_braid_family(k, 3, 3) for k in (1, 2, 3))
    numeric = verify_monodromy_braid(3, (1, 0, 0), 3, h=0.05, tol_ode=1e-10, tol=1e-6)
    rep = merged([exact, numeric])
    record(9, rep.passed, f"{summary(rep)}, numerical residual {numeric.worst_residual():.2e} (tol 1e-6)")


def test_criterion_10_sl2():
    hs = (0.02, 0.05, 0.03 + 0.01j)
    t = time.perf_counter()
    worst_pred = worst_s = 0.0
    for res in main_theorem_harness(2, (1, 0), 2, hs):
        r = res.reports[0]
        ev = np.linalg.eigvals(r.matrix)
        pred = 1j * cmath.exp(1j * cmath.pi * res.h) * np.array([1, -1])
        worst_pred = max(worst_pred, match_eigenvalues(ev, pred)[0])
        worst_s = max(worst_s, r.deviation)
    dt = time.perf_counter() - t
    ok = worst_pred < 1e-8 and worst_s < 1e-8 and dt < 5
    record(10, ok, f"vs +-i e^(i pi h) {worst_pred:.2e}, vs spec(S) {worst_s:.2e} (tol 1e-8), {dt:.2f}s (limit 5s)")


def test_criterion_11_main_theorem():
    hs = (0.02, 0.05, 0.03 + 0.01j)
    t = time.perf_counter()
    reps = [verify_main_theorem(3, lam, 3, hs, tol_spec=1e-6, tol_trace=1e-5) for lam in ((1, 0, 0), (2, 1, 0))]
    dt = time.perf_counter() - t
    rep = merged(reps)
    worst = max(r.worst_residual() for r in reps)
    record(11, rep.passed and dt < 300, f"{summary(rep)}, worst {worst:.2e}, {dt:.1f}s (limit 300s)")


def test_criterion_12_kz_casimir():
    hs = (0.05, 0.02, 0.03 + 0.01j)
    rep = verify_kz_casimir(3, None, (1, 1, 1), 2, hs, tol=1e-6, tol_ode=1e-12)
    record(12, rep.passed, f"{summary(rep)}, worst residual {rep.worst_residual():.2e} (tol 1e-6)")
