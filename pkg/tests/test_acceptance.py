"""Acceptance gate: one test per criterion, each reporting a PASS/FAIL line."""

import math
import random
import time

import mpmath as mp
import numpy as np
import pytest

from conftest import ACCEPTANCE_LINES, L_QCD_42, L_SHO_22
from rsm2d import BasisSpec, assemble, diagnostics as dg, domain_optimizer as opt, potentials, solve
from rsm2d.eigensolver import eigenvalues
from rsm2d.potentials import coupling_1d, monomial

# reference energies at N=22 from 20-digit arithmetic, sorted by energy
REF_SHO_E = [
    2.000000000000015572, 4.000000000000278511, 4.000000000000278512, 6.000000000000541453,
    6.000000000018044778, 6.000000000018044778, 8.00000000001830772, 8.00000000001830772,
    8.00000000019999217, 8.00000000019999217, 10.00000000003607398, 10.00000000020025511,
    10.00000000020025511, 10.00000000630282991, 10.00000000630282991, 12.00000000021802137,
    12.00000000021802137, 12.00000000630309285, 12.00000000630309285, 12.00000003939548075,
    12.00000003939548075,
]
REF_QCD_E1 = 1.10822315780256
REF_QCD_E2 = 2.37863785124994
REF_QCD_E10 = 5.01127928161308


def record(name, ok, detail):
    line = f"{'PASS' if ok else 'FAIL'}  {name}: {detail}"
    ACCEPTANCE_LINES.append(line)
    print(line)
    assert ok, line


def rel(a, b):
    return abs(a - b) / abs(b)


def test_c1_box_exactness():
    t0 = time.perf_counter()
    L = math.pi
    w = eigenvalues(assemble(BasisSpec.square(10, L), potentials.free(L)))
    elapsed = time.perf_counter() - t0
    m = np.arange(1, 11)
    exact = np.sort((m[:, None] ** 2 + m[None, :] ** 2).ravel())
    err = float(np.max(np.abs(w - exact) / exact))
    record("C1 box exactness", err <= 1e-12 and elapsed < 1.0,
           f"max rel err {err:.2e} (<= 1e-12), {elapsed:.3f} s (< 1 s)")


def test_c2_sho_table():
    t0 = time.perf_counter()
    l_hat, _ = opt.find_optimal_length(22, potentials.sho, (6, 20))
    L = 1197 / 100
    sol = solve(assemble(BasisSpec.square(22, L), potentials.sho(L)))
    elapsed = time.perf_counter() - t0
    exact = dg.sho_exact_energies(21)
    e = sol.energies[:21]
    tol = np.maximum(10 * np.abs(np.array(REF_SHO_E) - exact) / exact, 1e-11)
    errs = np.abs(e - exact) / exact
    sizes = [len(c) for c in dg.cluster_degeneracies(e)]
    ok = errs[0] <= 1e-11 and np.all(errs <= tol) and sizes == [1, 2, 3, 4, 5, 6] and elapsed <= 60
    record("C2 SHO spectrum", ok,
           f"eps0 rel err {errs[0]:.2e}; worst err/tol {np.max(errs / tol):.2f}; "
           f"clusters {sizes}; pipeline {elapsed:.1f} s")


def test_c3_domain_optimization(qcd_curve):
    l_sho, _ = opt.find_optimal_length(22, potentials.sho, (6, 20))
    n, l_qcd, _ = qcd_curve.samples[-1]
    assert n == 42
    ok = abs(l_sho - 11.97) <= 0.1 and abs(l_qcd - 15.53) <= 0.2
    record("C3 domain optimization", ok, f"L(22) sho = {l_sho:.4f}, L(42) qcd = {l_qcd:.4f}")


def test_c4_qcd_spectrum(qcd42):
    t0 = time.perf_counter()
    L = 1553 / 100
    assert L == L_QCD_42
    _, sol = qcd42
    e = sol.energies
    e1, e2, e3, e10 = e[0], e[1], e[2], e[9]
    spread = rel(e3, e2)
    l30, _ = opt.find_optimal_length(30, potentials.qcd, (8, 25))
    e1_30 = opt.ground_energy(30, l30, potentials.qcd)
    elapsed = time.perf_counter() - t0
    ok = (rel(e1, REF_QCD_E1) <= 1e-8 and rel(e2, REF_QCD_E2) <= 1e-7 and rel(e3, REF_QCD_E2) <= 1e-7
          and spread <= 1e-9 and rel(e10, REF_QCD_E10) <= 1e-7 and rel(e1_30, REF_QCD_E1) <= 1e-6)
    record("C4 QCD spectrum", ok,
           f"E1 {rel(e1, REF_QCD_E1):.1e}, E2 {rel(e2, REF_QCD_E2):.1e}, E3 {rel(e3, REF_QCD_E2):.1e}, "
           f"spread {spread:.1e}, E10 {rel(e10, REF_QCD_E10):.1e}, N=30 E1 {rel(e1_30, REF_QCD_E1):.1e}")


def test_c5_exponential_convergence(sho_curve):
    rows = dg.convergence_study(range(8, 21, 2), sho_curve, 2.0, potentials.sho)
    fit = dg.fit_log_decay(rows, floor=1e-13)
    ok = fit is not None and fit.slope < 0 and fit.r_squared >= 0.98
    record("C5 exponential convergence", ok,
           f"slope {fit.slope:.3f} per N, R^2 {fit.r_squared:.4f} over {fit.n_points} points")


def test_c6_error_estimator(sho_curve):
    ratios = []
    for n in range(12, 23):
        ln, ln1 = sho_curve(n), sho_curve(n + 1)
        a = solve(assemble(BasisSpec.square(n, ln), potentials.sho(ln)))
        b = solve(assemble(BasisSpec.square(n + 1, ln1), potentials.sho(ln1)))
        exact = dg.sho_exact_energies(6)
        for k in range(6):
            d = dg.delta_E(a.energies[k], exact[k])
            if d >= 1e-11:
                ratios.append(dg.delta_hat_E(a, b, k, check_overlap=False) / d)
    ratios = np.array(ratios)
    ok = len(ratios) > 0 and np.all((ratios >= 0.1) & (ratios <= 10))
    record("C6 error estimator", ok,
           f"{len(ratios)} (N, state) pairs, ratio range [{ratios.min():.3f}, {ratios.max():.3f}]")


def test_c7_wavefunction(sho22):
    _, sol = sho22
    assert sol.basis.length_x == L_SHO_22
    d = dg.delta_psi(sol, 0, dg.ShoReference(0, 0), m=101)
    record("C7 wavefunction accuracy", 1e-9 <= d <= 1e-7, f"delta_psi {d:.3e} (reference 1.58e-8)")


def test_c8_matrix_element_oracle():
    rng = random.Random(20240501)
    worst = 0.0
    with mp.workdps(30):
        for _ in range(200):
            k, a, b = rng.randint(0, 4), rng.randint(1, 30), rng.randint(1, 30)
            length = rng.uniform(1.0, 20.0)
            L = mp.mpf(length)
            f = lambda x: 2 / L * mp.sin(a * mp.pi * x / L) * (x - L / 2) ** k * mp.sin(b * mp.pi * x / L)
            ref = float(mp.quad(f, mp.linspace(0, L, 2 * max(a, b) + 2)))
            got = coupling_1d(monomial(k), max(a, b), length).matrix[a - 1, b - 1]
            worst = max(worst, abs(got - ref))
    record("C8 matrix-element oracle", worst <= 1e-12, f"200 elements, max abs diff {worst:.2e}")


def test_c9_property_suite():
    checks = {}
    L = 9.0
    pot = potentials.from_monomials([(1.0, 2, 0), (1.0, 0, 2), (0.2, 2, 2), (0.1, 1, 1)], L)
    op = assemble(BasisSpec.square(10, L), pot)
    checks["symmetry"] = np.array_equal(op.entries, op.entries.T)
    sol = solve(op)
    v = sol.vectors
    checks["orthonormality"] = float(np.max(np.abs(v.T @ v - np.eye(len(sol))))) <= 1e-10

    shifted = potentials.from_monomials([(1.0, 2, 0), (1.0, 0, 2), (0.2, 2, 2), (0.1, 1, 1), (2.5, 0, 0)], L)
    w1 = eigenvalues(assemble(BasisSpec.square(10, L), shifted))
    checks["constant shift"] = float(np.max(np.abs(w1 - sol.energies - 2.5))) <= 1e-12

    exact = dg.sho_exact_energies(21)
    checks["variational bound"] = all(
        np.all(eigenvalues(assemble(BasisSpec.square(n, 10.0), potentials.sho(10.0)), 21) >= exact - 1e-12)
        for n in (5, 8, 12))

    lx, ly = 6.0, 4.5
    g, h = (0.0, 0.3, 1.0, 0.0, 0.05), (0.5, 0.0, 2.0, -0.1)
    sep = potentials.SeparablePotential(
        (potentials.Term(1.0, g, (1.0,)), potentials.Term(1.0, (1.0,), h)), lx, ly)
    w2d = eigenvalues(assemble(BasisSpec(8, lx, ly), sep))

    def spec1d(poly, length):
        m = np.arange(1, 9)
        return np.linalg.eigvalsh(coupling_1d(poly, 8, length).matrix + np.diag((m * math.pi / length) ** 2))

    brute = np.sort(np.add.outer(spec1d(g, lx), spec1d(h, ly)).ravel())
    checks["separable sum"] = float(np.max(np.abs(w2d - brute) / np.abs(brute))) <= 1e-10

    failed = [k for k, ok in checks.items() if not ok]
    record("C9 property suite", not failed,
           "all of " + ", ".join(checks) if not failed else "failed: " + ", ".join(failed))
