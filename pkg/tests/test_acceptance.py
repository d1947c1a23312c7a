"""Acceptance gate: one check per criterion, each printing a PASS/FAIL line.

Run directly (python3 tests/test_acceptance.py) or through pytest, where the
lines appear in the "acceptance criteria" summary section.
"""
import math
import time

import numpy as np
import pytest

from raman_ctrl.analysis import (
    SchemeSpec,
    gate_fidelity,
    ideal_gate,
    leakage_report,
    optimize_stirap,
    predicted_leakage_ae,
    robustness_grid,
    state_fidelity,
    theta_sample_values,
)
from raman_ctrl.core import TWO_PI, CouplingConfig, basis_state, build_hamiltonian, is_unitary
from raman_ctrl.propagation import propagate_lindblad, propagate_unitary, reference_propagator
from raman_ctrl.schemes import ControlSchedule, ControlSegment, ae_schedule, phase_shift_params, ps_schedule

SYM = CouplingConfig.symmetric()


def check_1():
    worst_f, worst_pe = 1.0, 0.0
    for ratio in (0.5, 1, 2, 3, 5, 7, 10, 20, 50):
        for theta in (math.pi / 2, math.pi):
            u = propagate_unitary(ps_schedule(ratio * TWO_PI, SYM, theta), basis_state(0)).final_propagator
            worst_f = min(worst_f, gate_fidelity(u, ideal_gate(SYM, theta)))
            worst_pe = max(worst_pe, float(np.max(np.abs(u[2, :2]) ** 2)))
    ok = worst_f >= 1 - 1e-9 and worst_pe <= 1e-10
    return ok, f"ps exact gate: min F_g = 1 - {1 - worst_f:.1e}, max final Pe = {worst_pe:.1e}"


def check_2():
    target = {2: 2.58e-2, 20: 3.12e-4, 40: 7.81e-5}
    parts, ok = [], True
    for ratio, ref in target.items():
        rec = propagate_unitary(ps_schedule(ratio * TWO_PI, SYM, math.pi), basis_state(0))
        got = leakage_report(rec).average_pe
        rel = abs(got - ref) / ref
        ok &= rel <= 0.02
        parts.append(f"D={ratio}O {got:.4g} vs {ref:.3g} ({100 * rel:.2f}%)")
    return ok, "ps average leakage: " + ", ".join(parts)


def check_3():
    target = [(5.39e-2, 0.75, 0.175), (4.89e-3, 1.02, 0.4), (5.32e-4, 15.6, 13.4)]
    start = time.perf_counter()
    parts, ok = [], True
    for ratio, (pe_ref, s_ref, m_ref) in zip((2, 20, 40), target):
        T = ps_schedule(ratio * TWO_PI, SYM, math.pi).duration
        opt = optimize_stirap(T, SYM)
        pe_ok = abs(opt.average_pe - pe_ref) <= 0.10 * pe_ref
        par_ok = abs(opt.sigma - s_ref) <= 0.15 * s_ref and abs(opt.t_m - m_ref) <= 0.15 * m_ref
        ok &= opt.final_fidelity >= 0.999 and pe_ok and par_ok
        parts.append(
            f"T={T:.4g}: F={opt.final_fidelity:.6f} Pe={opt.average_pe:.3g} (ref {pe_ref:.3g}) "
            f"sigma,t_m=({opt.sigma:.3g},{opt.t_m:.3g}) (ref ({s_ref},{m_ref}))"
        )
    elapsed = time.perf_counter() - start
    ok &= elapsed < 120
    return ok, "stirap optimum: " + "; ".join(parts) + f"; {elapsed:.0f} s"


def check_4():
    parts, ok = [], True
    for ratio in (10, 20, 40):
        delta = ratio * TWO_PI
        ae = leakage_report(propagate_unitary(ae_schedule(delta, SYM, math.pi), SYM.bright())).average_pe
        ps = leakage_report(propagate_unitary(ps_schedule(delta, SYM, math.pi), SYM.bright())).average_pe
        law = (1 / ratio) ** 2
        r_ae, r_ps = ae / (law / 2), ps / (law / 4)
        ok &= abs(r_ae - 1) <= 0.05 and abs(r_ps - 1) <= 0.10 and 0.4 <= ps / ae <= 0.6
        parts.append(f"D={ratio}O AE/law={r_ae:.3f} PS/law={r_ps:.3f} ratio={ps / ae:.3f}")
    return ok, "analytic averages: " + ", ".join(parts)


def check_5():
    theta, gamma = math.pi / 2, 0.5
    psi0 = basis_state(0)
    target = ideal_gate(SYM, theta) @ psi0[:2]
    margins, drift, ok = [], 0.0, True
    for ratio in np.linspace(1, 10, 20):
        f = {}
        for name, build in (("ae", ae_schedule), ("ps", ps_schedule)):
            rec = propagate_lindblad(build(ratio * TWO_PI, SYM, theta), gamma, psi0)
            drift = max(drift, float(np.max(np.abs(rec.trace - 1))))
            f[name] = state_fidelity(target, rec.final_state)
        margins.append(f["ps"] - f["ae"])
    ok = min(margins) > 0 and drift <= 1e-8
    return ok, f"gamma=0.5 ordering: min(F_ps - F_ae) = {min(margins):.3e} over 20 points, max trace drift {drift:.1e}"


def _peaks(values, maxima=True):
    v = np.asarray(values) if maxima else -np.asarray(values)
    return [i for i in range(1, len(v) - 1) if v[i] > v[i - 1] and v[i] > v[i + 1]]


def check_6():
    start = time.perf_counter()
    parts, ok = [], True
    for ratio in (3.0, 7.0):
        ae = robustness_grid(SchemeSpec("ae", ratio))
        ps = robustness_grid(SchemeSpec("ps", ratio))
        frac = float(np.mean(ps.fidelity >= ae.fidelity))
        centre = len(ae.axis_delta_omega) // 2
        found = _peaks(ae.fidelity[centre])
        t = ae_schedule(ratio * TWO_PI, SYM, math.pi).duration
        pred_pe = [predicted_leakage_ae(t, 1.0, ratio * TWO_PI, TWO_PI, d_delta=dd) for dd in ae.axis_delta_delta]
        predicted = _peaks(pred_pe, maxima=False)
        aligned = len(found) == len(predicted) and all(abs(a - b) <= 1 for a, b in zip(found, predicted))
        ok &= frac >= 0.99 and aligned
        parts.append(f"D={ratio:g}O ps>=ae in {100 * frac:.1f}% of cells, peaks {found} vs predicted {predicted}")

    ratio = 20.0
    pe = theta_sample_values(SchemeSpec("ae", ratio), n=10_000, metric="final_pe", initial=SYM.bright())
    law = 0.5 * (1 / ratio) ** 2
    se = pe.std(ddof=1) / math.sqrt(pe.size)
    z = (pe.mean() - law) / se
    ok &= abs(z) <= 3
    elapsed = time.perf_counter() - start
    ok &= elapsed < 300
    parts.append(f"<Pe>_theta at D=20O = {pe.mean():.4e} vs {law:.4e} ({z:+.2f} SE)")
    return ok, "robustness: " + "; ".join(parts) + f"; {elapsed:.0f} s"


def _random_schedule(rng):
    c = CouplingConfig(*(rng.normal(size=2) + 1j * rng.normal(size=2)) * rng.uniform(1, 10))
    n = rng.integers(1, 5)
    segs = tuple(
        ControlSegment(rng.uniform(0.05, 2.0), rng.uniform(-40, 40), rng.uniform(-math.pi, math.pi), rng.uniform(0.5, 1.5))
        for _ in range(n)
    )
    return ControlSchedule(c, segments=segs)


def check_7():
    rng = np.random.default_rng(2024)
    worst = 0.0
    for _ in range(100):
        sched = _random_schedule(rng)
        u = propagate_unitary(sched, basis_state(0)).final_propagator
        worst = max(worst, float(np.max(np.abs(u - reference_propagator(sched)))))
    pop_gap = 0.0
    for ratio in (0.5, 2.0, 10.0):
        for build in (ae_schedule, ps_schedule):
            sched = build(ratio * TWO_PI, SYM, math.pi)
            for psi in (basis_state(0), SYM.bright()):
                a = propagate_unitary(sched, psi).populations
                b = propagate_lindblad(sched, 0.0, psi).populations
                pop_gap = max(pop_gap, float(np.max(np.abs(a - b))))
    ok = worst <= 1e-8 and pop_gap <= 1e-7
    return ok, f"oracles: spectral vs reference max |dU| = {worst:.1e} (100 schedules), Lindblad(0) vs unitary {pop_gap:.1e}"


def check_8():
    rng = np.random.default_rng(8)
    unitary = all(is_unitary(propagate_unitary(_random_schedule(rng), basis_state(0)).final_propagator) for _ in range(20))
    norm = 0.0
    for ratio in (0.5, 3.0, 20.0):
        rec = propagate_unitary(ps_schedule(ratio * TWO_PI, SYM, math.pi / 2), basis_state(1))
        norm = max(norm, float(np.max(np.abs(rec.populations.sum(axis=1) - 1))))
    lrec = propagate_lindblad(ae_schedule(3 * TWO_PI, SYM, math.pi), 0.5, basis_state(0))
    trace = float(np.max(np.abs(lrec.trace - 1)))
    dark = float(np.max(propagate_unitary(ps_schedule(2 * TWO_PI, SYM, math.pi), SYM.dark()).pe))
    park, flat = 1.0, 0.0
    for ratio in (0.5, 1, 2, 3, 5, 7, 10, 20, 50):
        delta = ratio * TWO_PI
        p = phase_shift_params(delta, SYM)
        psi = propagate_unitary(ControlSchedule(SYM, segments=(ControlSegment(p.t_c, delta, 0.0),)), SYM.bright()).final_state
        _, vecs = np.linalg.eigh(build_hamiltonian(delta, SYM, p.phi_c))
        park = min(park, float(np.max(np.abs(vecs.conj().T @ psi) ** 2)))
        sched = ps_schedule(delta, SYM, math.pi)
        rec = propagate_unitary(sched, SYM.bright())
        b = sched.segment_bounds()
        pe = rec.pe[(rec.times > b[1]) & (rec.times < b[2])]
        flat = max(flat, float(np.ptp(pe) / np.max(pe)))
    ok = unitary and norm < 1e-12 and trace <= 1e-8 and dark < 1e-20 and park >= 1 - 1e-10 and flat < 1e-10
    return ok, (
        f"invariants: unitary={unitary}, norm drift {norm:.1e}, trace drift {trace:.1e}, dark Pe {dark:.1e}, "
        f"parking overlap 1 - {1 - park:.1e}, parked Pe spread {flat:.1e}"
    )


CHECKS = {1: check_1, 2: check_2, 3: check_3, 4: check_4, 5: check_5, 6: check_6, 7: check_7, 8: check_8}


@pytest.mark.parametrize("number", sorted(CHECKS))
def test_criterion(number, acceptance):
    ok, detail = CHECKS[number]()
    print(f"{'PASS' if ok else 'FAIL'} criterion {number}: {detail}")
    acceptance(number, ok, detail)
    assert ok, detail


if __name__ == "__main__":
    for number, check in CHECKS.items():
        ok, detail = check()
        print(f"{'PASS' if ok else 'FAIL'} criterion {number}: {detail}", flush=True)
