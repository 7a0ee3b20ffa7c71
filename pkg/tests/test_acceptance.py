"""Acceptance criteria, one test per criterion, each printing PASS/FAIL.

Run with `pytest tests/test_acceptance.py -v -s` to see the per-criterion
lines. Tolerances are pinned here and nowhere else.
"""

import io
import json
import time

import numpy as np
import pytest

from conftest import (
    C_EXACT,
    L_EXACT,
    Q_EXACT,
    T_EXACT,
    random_density,
    random_pure,
)
from sepcorr.cli import main
from sepcorr.correlations import (
    MeasurementAxis,
    analyze,
    classical_correlation,
    closest_classical,
    dephase,
    l_quantity,
    marginal_product,
    mutual_information,
)
from sepcorr.matcore import (
    DensityMatrix,
    eig_hermitian,
    kron,
    partial_trace,
    rel_entropy,
    trace_distance,
    vn_entropy,
)
from sepcorr.states import counterexample_state, ppt_check, random_separable
from sepcorr.sweep import SweepConfig, run_sweep, write_csv


def _verdict(name, ok):
    print(f"\nACCEPTANCE {name}: {'PASS' if ok else 'FAIL'}")
    assert ok


def test_criterion_1_counterexample_reproduction(capsys):
    t0 = time.time()
    code = main(["counterexample"])
    elapsed = time.time() - t0
    out = capsys.readouterr().out
    rows = {}
    for line in out.splitlines():
        parts = line.split()
        if parts and parts[0] in ("T", "Q", "C", "L"):
            rows[parts[0]] = float(parts[1])
    residual = float(out.split("identity_residual = ")[1].split()[0])
    ok = (
        code == 0
        and abs(rows["T"] - 0.601) <= 1e-3
        and abs(rows["Q"] - 0.5) <= 1e-4
        and abs(rows["C"] - 0.311) <= 1e-3
        and abs(rows["L"] - 0.210) <= 1e-3
        and residual <= 1e-8
        and elapsed < 5.0
    )
    with capsys.disabled():
        _verdict("1 counterexample reproduction", ok)


def test_criterion_2_high_precision_targets():
    rep = analyze(counterexample_state(), grid_n=64, refine=True)
    ok = (
        abs(rep.t - 0.600876) <= 5e-5
        and abs(rep.c - 0.311278) <= 1e-6
        and abs(rep.l - 0.210404) <= 5e-5
        # and against the closed forms evaluated at double precision
        and abs(rep.t - T_EXACT) <= 1e-9
        and abs(rep.q - Q_EXACT) <= 1e-9
        and abs(rep.c - C_EXACT) <= 1e-9
        and abs(rep.l - L_EXACT) <= 1e-9
    )
    _verdict("2 high-precision targets", ok)


def test_criterion_3_closest_classical_state():
    rho = counterexample_state()
    chi, q = closest_classical(rho, grid_n=32, refine=True)
    chi_target = np.diag([0.5, 0.0, 0.25, 0.25])
    dist = trace_distance(chi.rho.mat, chi_target)
    _, q_oracle = closest_classical(rho, grid_n=128, refine=False)
    ok = dist <= 1e-3 and q_oracle >= 0.5 - 5e-4
    _verdict("3 closest classical state (dense-grid oracle)", ok)


def test_criterion_4_identity_property_suite(rng):
    t0 = time.time()
    ok = True
    for i in range(1000):
        rho, _ = random_separable(i, 1 + i % 4)
        axis_a = MeasurementAxis(rng.uniform(0, np.pi / 2), rng.uniform(0, 2 * np.pi))
        axis_b = MeasurementAxis(rng.uniform(0, np.pi / 2), rng.uniform(0, 2 * np.pi))
        chi = dephase(rho, axis_a, axis_b)
        t = mutual_information(rho)
        q = rel_entropy(rho, chi.rho)
        c = classical_correlation(chi)
        l = l_quantity(rho, chi)
        if abs(t - (q + c - l)) > 1e-8:
            ok = False
            break
    elapsed = time.time() - t0
    _verdict("4 algebraic identity over 1000 states+axes", ok and elapsed < 60.0)


def test_criterion_5_superadditivity_sweep(tmp_path, capsys):
    out_path = tmp_path / "sweep1000.csv"
    t0 = time.time()
    code = main(["sweep", "--n", "1000", "--seed", "1", "--k-min", "1", "--k-max", "4",
                 "--grid-n", "16", "--out", str(out_path)])
    elapsed = time.time() - t0
    out = capsys.readouterr().out
    summary = [ln for ln in out.splitlines() if ln.startswith("violations=")][0]
    fields = dict(part.split("=") for part in summary.split())
    rows = [
        ln.split(",") for ln in out_path.read_text().splitlines() if not ln.startswith("#")
    ][1:]
    ls = [float(r[6]) for r in rows]
    ok = (
        code == 0
        and int(fields["violations"]) == 0
        and float(fields["min_l"]) >= -1e-9
        and max(ls) > 1e-3
        and elapsed < 600.0
    )
    with capsys.disabled():
        _verdict("5 superadditivity sweep n=1000", ok)


def test_criterion_6_entropy_linear_algebra_properties(rng):
    ok = True
    for _ in range(1000):
        rho = random_density(rng, 4)
        if rel_entropy(rho, rho) > 1e-12:
            ok = False
    for _ in range(1000):
        a, b = random_density(rng, 4), random_density(rng, 4)
        if rel_entropy(a, b) < 0.0:
            ok = False
    for _ in range(1000):
        r1, r2 = random_density(rng, 2), random_density(rng, 2)
        t1, t2 = random_density(rng, 2), random_density(rng, 2)
        joint = rel_entropy(
            DensityMatrix(kron(r1.mat, r2.mat), (2, 2)),
            DensityMatrix(kron(t1.mat, t2.mat), (2, 2)),
        )
        if abs(joint - rel_entropy(r1, t1) - rel_entropy(r2, t2)) > 1e-8:
            ok = False
    for _ in range(1000):
        a2, b2 = random_density(rng, 2), random_density(rng, 2)
        prod = DensityMatrix(kron(a2.mat, b2.mat), (2, 2))
        if np.abs(partial_trace(prod, "A").mat - b2.mat).max() > 1e-10:
            ok = False
        if np.abs(partial_trace(prod, "B").mat - a2.mat).max() > 1e-10:
            ok = False
    for _ in range(1000):
        g = rng.normal(size=(4, 4)) + 1j * rng.normal(size=(4, 4))
        m = (g + g.conj().T) / 2
        spec = eig_hermitian(m)
        v = spec.eigenvectors
        if np.abs((v * spec.eigenvalues) @ v.conj().T - m).max() > 1e-9:
            ok = False
        if np.abs(v.conj().T @ v - np.eye(4)).max() > 1e-9:
            ok = False
    _verdict("6 entropy/linear-algebra unit properties", ok)


def test_criterion_7_ppt_gate(tmp_path, capsys):
    code_bell = main(["analyze", "fixtures/bell_phi_plus.json"])
    code_ce = main(["analyze", "fixtures/counterexample.json"])
    capsys.readouterr()
    sampler_ok = all(ppt_check(random_separable(seed, 1 + seed % 4)[0]).separable
                     for seed in range(200))
    with capsys.disabled():
        _verdict("7 PPT gate", code_bell == 3 and code_ce == 0 and sampler_ok)


def test_criterion_8_sweep_determinism():
    cfg = SweepConfig(n=25, master_seed=7, k_min=1, k_max=4, grid_n=16,
                      refine=True, include_bell_diagonal=True)
    texts = []
    for _ in range(2):
        records, _ = run_sweep(cfg, append_counterexample=True)
        buf = io.StringIO()
        write_csv(records, cfg, buf, append_counterexample=True)
        texts.append(buf.getvalue())
    _verdict("8 sweep determinism (byte-identical)", texts[0] == texts[1])
