"""Acceptance criteria, one test per criterion, each at its stated tolerance.

Run ``pytest tests/test_acceptance.py -v``; the verdict lines are printed in
the "acceptance criteria" section of the terminal summary.
"""

import math
import time

import numpy as np

from diracinv import glsolver
from diracinv.core import B, uniform_mesh
from diracinv.potentials import example1
from oracles import block_rel_error, gl_blocks_by_quadrature

C_ALPHA = -math.pi / 2
WINDOW = (0.05, 0.95)


def _sup(errors):
    return max(errors["sup_p"], errors["sup_q"])


def test_criterion_1_null_potential(runs, acceptance_log):
    inv, seconds = runs["null"]
    pot = inv.potential_
    worst = float(max(np.abs(pot.p).max(), np.abs(pot.q).max()))
    ok = worst <= 1e-10 and seconds < 5.0
    acceptance_log(1, "null-potential identity", ok,
                   f"max(|p|,|q|) = {worst:.2e} (<= 1e-10), forward+recover {seconds:.2f} s (< 5 s)")
    assert ok


def test_criterion_2_block_oracle(spectra, acceptance_log):
    t0 = time.perf_counter()
    data = spectra("example1", 5)
    assert len(data) == 11
    worst_w = worst_f = 0.0
    for x in (0.25, 0.5, 1.0):
        W, f = gl_blocks_by_quadrature(data, x, 3)
        blocks = glsolver.assemble_system(data, x, 3, "C")
        for n in range(4):
            worst_f = max(worst_f, block_rel_error(blocks.f[n], f[n]))
            for k in range(4):
                worst_w = max(worst_w, block_rel_error(blocks.W_block(n, k), W[n, k]))
    seconds = time.perf_counter() - t0
    ok = worst_w <= 1e-8 and worst_f <= 1e-8 and seconds < 30.0
    acceptance_log(2, "system blocks vs quadrature oracle", ok,
                   f"rel err W {worst_w:.1e}, f {worst_f:.1e} (<= 1e-8), {seconds:.2f} s (< 30 s)")
    assert ok


def test_criterion_3_example1_round_trip(runs, acceptance_log):
    pot = example1()
    big, t_big = runs["ex1_exact_2001"]
    small, _ = runs["ex1_exact_201"]
    e_big = big.potential_.errors(pot, WINDOW)
    e_small = small.potential_.errors(pot, WINDOW)
    improves = e_big["sup_p"] < e_small["sup_p"] and e_big["sup_q"] < e_small["sup_q"]
    ok = _sup(e_big) <= 1e-2 and improves and t_big <= 60.0
    acceptance_log(3, "Example 1 round trip", ok,
                   f"2001 pairs sup p {e_big['sup_p']:.2e} q {e_big['sup_q']:.2e} (<= 1e-2); "
                   f"201 pairs sup p {e_small['sup_p']:.2e} q {e_small['sup_q']:.2e}; inversion {t_big:.2f} s")
    assert ok


def test_criterion_4_aev_efficiency(runs, acceptance_log):
    pot = example1()
    ref = _sup(runs["ex1_exact_2001"][0].potential_.errors(pot, WINDOW))
    inv11, t11 = runs["ex1_aev_11"]
    inv51, _ = runs["ex1_aev_51"]
    e11 = _sup(inv11.potential_.errors(pot, WINDOW))
    k11, k51 = inv11.report_["K"], inv51.report_["K"]
    ok = (inv11.report_["n_total"] == 10001 and e11 <= 5 * ref and 4 <= k11 <= 6 and 7 <= k51 <= 9)
    acceptance_log(4, "data efficiency with AEVs", ok,
                   f"11 pairs + AEVs sup {e11:.2e} vs 5 x {ref:.2e}; K(11) = {k11} in [4,6], "
                   f"K(51) = {k51} in [7,9]; inversion {t11:.2f} s")
    assert ok


def test_criterion_5_beta_recovery(runs, acceptance_log):
    hidden = runs["ex3_hidden_beta_41"][0].report_
    err = abs(hidden["beta_recovered"] - math.pi / 4)
    k2 = runs["ex2_aev_21"][0].report_["K"]
    k3 = runs["ex3_aev_41"][0].report_["K"]
    ok = err <= 5e-3 and k2 == 1 and k3 == 1
    acceptance_log(5, "beta recovery", ok,
                   f"|beta - beta_rec| = {err:.2e} (<= 5e-3); K = {k2} (Example 2), {k3} (Example 3), expected 1")
    assert ok


def test_criterion_6_smooth_order(runs, acceptance_log):
    rep = runs["ex4_aev_41"][0].report_
    a1 = abs(rep["a"][0])
    ok = rep["K"] == 10 and a1 <= 1e-6
    acceptance_log(6, "K selection for a smooth potential", ok,
                   f"K = {rep['K']} (expected 10), |a1| = {a1:.1e} (<= 1e-6)")
    assert ok


def test_criterion_7_conjugation(spectra, acceptance_log):
    data = spectra("example1", 25)
    worst = 0.0
    for x in (0.1, 0.5, 1.0):
        wc = glsolver.assemble_system(data, x, 5, "C")
        wa = glsolver.assemble_system(data, x, 5, "alpha")
        for n in range(6):
            for k in range(6):
                worst = max(worst, np.abs(wa.W_block(n, k) - B @ wc.W_block(n, k) @ B.T).max())
    ok = worst <= 1e-13
    acceptance_log(7, "conjugation property", ok, f"max |W_alpha - B W_C B^T| = {worst:.1e} (<= 1e-13)")
    assert ok


def test_criterion_8_stability(runs, acceptance_log):
    worst = 0.0
    worst_growth = 0.0
    for label, (inv, _) in runs.items():
        c10 = inv.report_["condition_max"]
        c5 = glsolver.solve_field(inv.data_, uniform_mesh(), 5, beta=inv.extender_.beta_).cond.max()
        worst = max(worst, c10, c5)
        worst_growth = max(worst_growth, c10 / c5)
    ok = worst < 1e3 and worst_growth <= 2.0
    acceptance_log(8, "stability monitor", ok,
                   f"max condition {worst:.2f} (< 1e3) over {len(runs)} runs, "
                   f"max growth N 5 -> 10 {worst_growth:.3f} (<= 2)")
    assert ok
