#!/usr/bin/env python3
"""Smoke test for the specphase_py extension module.

Build it first:  ./python/build_ext.sh
Then run:        python3 python/smoke_test.py
"""

import math
import os
import sys
import tempfile

sys.path.insert(0, os.path.dirname(os.path.abspath(__file__)))

import specphase_py as sp


def check(cond, msg):
    if not cond:
        raise SystemExit(f"FAIL: {msg}")
    print(f"ok: {msg}")


def main():
    # closed forms: c=3, Γ=0.9 detectable eigenvalue 2·0.9 + 1/0.9
    forms = sp.regular_closed_forms(3, 0.9, theta=1.0)
    check(abs(forms["lambda1_detectable"] - (1.8 + 1 / 0.9)) < 1e-12, "closed-form λ₁(Γ=0.9)")
    check(abs(forms["gamma_star"] - 1 / math.sqrt(2)) < 1e-12, "closed-form Γ* = 1/√2")

    # thresholds: regular numeric matches closed form; Poisson is finite
    check(abs(sp.detectability_threshold(c=3) - forms["gamma_star"]) < 1e-8,
          "numeric Γ* (regular)")
    gs_poisson = sp.detectability_threshold(c_bar=6.0)
    check(0.3 < gs_poisson < 0.7, f"Poisson c̄=6 Γ* = {gs_poisson:.4f}")

    # generation + spectral: detectable regular instance
    g = sp.generate_regular(4000, 3, 0.9, seed=42)
    check(g.n_nodes == 4000 and g.n_edges == 6000, "regular graph size")
    check(g.cross_edge_count() is not None, "cross-edge bookkeeping")
    out = sp.spectral(g, theta=1.0, seed=1)
    pred = forms["lambda1_detectable"]
    check(abs(out["lambda1"] - pred) / pred < 0.05, f"λ₁ = {out['lambda1']:.4f} ≈ {pred:.4f}")
    check(out["overlap"] > 0.8, f"overlap = {out['overlap']:.3f} > 0.8")
    check(not out["unpartitioned"], "partitioned at θ=1")

    # unpartitioned phase at small θ
    out_lo = sp.spectral(g, theta=0.02, seed=1)
    check(out_lo["unpartitioned"], "unpartitioned at θ=0.02, Γ=0.9 < Γ_un")
    check(abs(out_lo["lambda1"] - 3 * 0.98) / (3 * 0.98) < 0.02, "λ₁ ≈ c(1−θ)")

    # SBM + EMA classification agree on the phase
    s = sp.structure_strength(6.0, cin_minus_cout=8.0)
    sol = sp.classify_phase(s["gamma_struct"], theta=1.0, c_bar=6.0)
    check(sol["phase"] == "D", "EMA: c̄=6, c_in−c_out=8 detectable")
    h = sp.generate_sbm(5000, 6 + 4.0, 6 - 4.0, seed=7)
    mc = sp.spectral(h, theta=1.0, seed=2)
    check(abs(mc["lambda1"] - sol["lambda1"]) / sol["lambda1"] < 0.1,
          f"SBM λ₁ = {mc['lambda1']:.4f} ≈ EMA {sol['lambda1']:.4f}")
    check(mc["overlap"] > 0.7, f"SBM overlap = {mc['overlap']:.3f}")

    # edge-list round trip
    with tempfile.TemporaryDirectory() as d:
        path = os.path.join(d, "g.el")
        g.write_edge_list(path)
        g2 = sp.Graph.read_edge_list(path)
        check(g2.n_nodes == g.n_nodes and g2.n_edges == g.n_edges, "edge-list round trip")
        check(g2.planted_labels() == g.planted_labels(), "labels survive round trip")

    # exact small-instance objectives on a 4-cycle
    c4 = sp.Graph.from_edges(4, [(0, 1), (1, 2), (2, 3), (3, 0)], None)
    num, den = c4.exact_min_ncut()
    check((num, den) == (1, 1), "4-cycle θ* = 1")
    check(abs(c4.ncut([1, 1, 2, 2]) - 1.0) < 1e-12, "4-cycle ncut of the even split")

    # overlap prediction is monotone above threshold
    o1, o2 = sp.predicted_overlap_regular(3, 0.8), sp.predicted_overlap_regular(3, 0.95)
    check(0.5 < o1 < o2 <= 1.0, f"predicted overlap monotone ({o1:.3f} < {o2:.3f})")

    print("smoke test passed")


if __name__ == "__main__":
    main()
