"""Acceptance suite: one test per criterion, each printing a PASS/FAIL line.

Run alone with ``pytest tests/test_acceptance.py -v`` or
``python3 tests/test_acceptance.py``; the summary lines also appear at the end
of any pytest run that includes this module.
"""

import time

import numpy as np
import pytest

from ellthom import thomfix as tf
from ellthom.chargenus import ManifoldData, ahat_value, partitions, twisted_a_hat, witten_genus_q
from ellthom.equivrep import VirtualRep, check_double_periodicity, check_parity, degree, zero_pole_ledger
from ellthom.fixtures import load_shipped
from ellthom.lattice import Lattice, build_adapted_cover, torsion_points, verify_adapted
from ellthom.theta import (OCHANINE_P, ThetaFunction, ochanine_crosscheck, ochanine_eval, odd_residual,
                           sigma_character, verify_translation)

RESULTS: dict = {}
TAUS = (1j, 0.3 + 0.9j)


def record(n: int, ok: bool, detail: str):
    RESULTS[n] = (ok, detail)
    print(f"criterion {n}: {'PASS' if ok else 'FAIL'}  {detail}")
    assert ok, detail


def _cell(L, n, seed):
    rng = np.random.default_rng(seed)
    return L.from_coords(rng.uniform(0.02, 0.98, n), rng.uniform(0.02, 0.98, n))


def test_criterion_1_theta_axioms():
    t0 = time.perf_counter()
    worst = 0.0
    for tau in TAUS:
        L = Lattice(tau, "witten")
        th = ThetaFunction.sigma(L, 60)
        zs = _cell(L, 50, 1)
        worst = max(worst, odd_residual(th, zs))
        for jk in ((1, 0), (0, 1), (1, 1)):
            worst = max(worst, verify_translation(th, L.vector(*jk), zs)["max_residual"])
    dt = time.perf_counter() - t0
    record(1, worst < 1e-8 and dt < 1.0, f"max residual {worst:.2e} (< 1e-8), {dt:.2f}s (< 1s)")


def test_criterion_2_period_relation():
    ok = True
    worst = 0.0
    for tau in TAUS:
        ch = sigma_character(Lattice(tau, "witten"))
        pairs = [(a, b) for a in range(-3, 4) for b in range(-3, 4)]
        for a in pairs:
            for b in pairs:
                ok &= ch.period_relation_integer(a, b, tol=1e-10) is not None
                worst = max(worst, ch.quotient_identity_residual(a, b))
    record(2, ok and worst < 1e-10, f"integer multiples of 2πi: {ok}; c-quotient residual {worst:.2e}")


def test_criterion_3_ochanine():
    shift = cross = limit = 0.0
    for tau in TAUS:
        L = Lattice(tau, "ochanine")
        zs = _cell(L, 30, 2)
        P = OCHANINE_P(L)
        s = ochanine_eval(zs, L)
        shift = max(shift, float(np.max(np.abs(ochanine_eval(zs + P, L) + s) / (1 + np.abs(s)))))
        cross = max(cross, ochanine_crosscheck(zs, L)["max_residual"])
        ws = np.linspace(-2, 2, 21) + 0.3j
        limit = max(limit, float(np.max(np.abs(ochanine_eval(ws, L, 0) - 2 * np.tanh(ws / 2)))))
    ok = shift < 1e-8 and cross < 1e-7 and limit < 1e-12
    record(3, ok, f"s(z+P)+s(z) {shift:.2e}; product vs quotient {cross:.2e}; q=0 limit {limit:.2e}")


def test_criterion_4_genus_engine():
    from fractions import Fraction

    t0 = time.perf_counter()
    ok = ahat_value(ManifoldData(4, {"p1": -48})) == 2
    M8 = ManifoldData(8, {"p1^2": 11, "p2": 7})
    ok &= ahat_value(M8) == Fraction(7 * 11 - 4 * 7, 5760)
    rng = np.random.default_rng(4)
    q0 = True
    for i in range(10):
        dim = (4, 8, 12)[i % 3]
        parts = partitions(dim // 4)
        M = ManifoldData(dim, {p: int(v) for p, v in zip(parts, rng.integers(-100, 100, len(parts)))})
        q0 &= witten_genus_q(M, 1).coeffs[0] == ahat_value(M)
    twisted = all(witten_genus_q(M, 10) == twisted_a_hat(M, 10)
                  for M in (ManifoldData(4, {"p1": 3}), M8))
    dt = time.perf_counter() - t0
    record(4, ok and q0 and twisted and dt < 5.0,
           f"Â values {ok}; q⁰ = Â on 10 manifolds {q0}; Witten ≡ twisted Â through q¹⁰ {twisted}; {dt:.2f}s (< 5s)")


def test_criterion_5_virtual_reps():
    L = Lattice(0.3 + 0.9j, "witten")
    f = VirtualRep.parse("z^3 - 9z")
    per = check_double_periodicity(f, L)["max_residual"]
    par = check_parity(f, L)["parity"]
    ok = degree(f) == 0 and per < 1e-8 and par == "even"
    neg = []
    ledger_ok = True
    for n in range(1, 5):
        g = VirtualRep({n: 1})
        r = check_double_periodicity(g, L)["max_residual"]
        neg.append(r)
        ok &= degree(g) == -n * n and r > 1e-2
        ledger_ok &= all(w == e for _, w, e in zero_pole_ledger(g, L))
    ledger_ok &= all(w == e for _, w, e in zero_pole_ledger(f, L))
    record(5, ok and ledger_ok, f"z³−9z residual {per:.2e}, parity {par}; zⁿ residuals min {min(neg):.2e}; "
                                f"argument principle matches divisor {ledger_ok}")


def test_criterion_6_adapted_covers():
    rng = np.random.default_rng(6)
    taus = rng.uniform(-0.5, 0.5, 20) + 1j * rng.uniform(0.5, 1.5, 20)
    bad = []
    for tau in taus:
        L = Lattice(complex(tau), "witten")
        for n in range(1, 7):
            special = torsion_points(L, n)
            res = verify_adapted(build_adapted_cover(special, L), special)
            if not all(res.values()):
                bad.append((tau, n, res))
    record(6, not bad, f"{20 * 6 - len(bad)}/120 covers adapted")


def test_criterion_7_transfer_equation():
    t0 = time.perf_counter()
    names = ("w_zero", "point_z3_9z", "point_z2_4z", "nilpotent_two_gen")
    worst = {"transfer": 0.0, "ellipticity": 0.0, "cocycle": 0.0}
    exact = True
    ok = True
    for tau in TAUS:
        L = Lattice(tau, "witten")
        th = ThetaFunction.sigma(L)
        zs = tf.default_samples(L, 20)
        for name in names:
            rep = tf.verify_model(load_shipped(name), th, zs)
            ok &= rep["pass"]
            for c in rep["components"]:
                worst["ellipticity"] = max(worst["ellipticity"], max(c["ellipticity"].values()))
            for sp in rep["special_points"]:
                for c in sp["components"]:
                    worst["transfer"] = max(worst["transfer"], c["transfer"])
                    worst["cocycle"] = max(worst["cocycle"], c["cocycle"])
                    exact &= c["alpha_equals_G"] and c["root_identity"]
                    ok &= c["used"] == 20
    F = load_shipped("nilpotent_two_gen").components[0]
    negatives = all(not tf.ccr_validate(tf.corrupt(F, w), (2,))[w] for w in ("z-1", "z-2", "z-3"))
    dt = time.perf_counter() - t0
    passed = ok and exact and negatives and all(v < 1e-8 for v in worst.values()) and dt < 30
    record(7, passed, ", ".join(f"{k} {v:.2e}" for k, v in worst.items())
           + f"; α=G and c1 identity exact {exact}; negative controls {negatives}; {dt:.1f}s (< 30s)")


def test_criterion_8_rigidity():
    L = Lattice(0.3 + 0.9j, "witten")
    th = ThetaFunction.sigma(L)
    zs = tf.default_samples(L, 20)
    s2 = float(np.max(np.abs(tf.rigidity_localized(load_shipped("s2_rotation"), th, zs))))
    grid = [L.from_coords(s, t) for s in np.linspace(0.05, 0.95, 10) for t in np.linspace(0.05, 0.95, 10)]
    deg0 = tf.spread(tf.rigidity_localized(load_shipped("point_z3_9z"), th, grid))
    model = tf.FixedPointModel((tf.point_component(VirtualRep.parse("z^2")),))
    degn = tf.spread(tf.rigidity_localized(model, th, grid))
    ok = s2 < 1e-10 and deg0 < 1e-6 and degn > 1e-1
    record(8, ok, f"S² sum {s2:.2e} (< 1e-10); degree-0 point spread {deg0:.3e} (< 1e-6); "
                  f"degree≠0 spread {degn:.3e} (> 1e-1)")


if __name__ == "__main__":
    import sys

    sys.exit(pytest.main([__file__, "-q", "-s"]))
