"""Acceptance suite: one test per criterion, each printing a PASS/FAIL line.

Run with `pytest tests/test_acceptance.py -v -s` to see the lines as the
criteria execute.
"""

import math
import time

import numpy as np
import pytest

from econotherm import (
    CumulativePoints,
    ModelFamily,
    ModelParams,
    ProxySeries,
    extract_series,
    grid_oracle,
    lm_fit,
    rescale,
    select_model,
    sum_of_squares,
    symmetry_check,
    synth_points,
    synth_table,
    temperature_report,
    to_cumulative,
)
from econotherm.models import _partials, _values
from reference_params import C_RANGE, MU_RANGE, RECORDS, T_RANGE, rows

FD = ModelFamily.FERMI_DIRAC
BE = ModelFamily.BOSE_EINSTEIN


def report(n, name, passed, detail):
    print(f"ACCEPTANCE {n} {name}: {'PASS' if passed else 'FAIL'} ({detail})")
    assert passed, f"criterion {n} {name}: {detail}"


def test_01_roundtrip_recovery_of_all_reference_rows():
    t0 = time.perf_counter()
    worst_err = 0.0
    worst_r2 = 1.0
    for r in RECORDS:
        truth = ModelParams(T=r["T"], mu=r["mu"], c=r["c"])
        table = synth_table(truth, FD, r["kind"], year=r["year"], country=r["country"])
        fr = lm_fit(to_cumulative(table), FD)
        err = max(
            abs(fr.params.T - truth.T),
            abs(fr.params.mu - truth.mu),
            abs(fr.params.c - truth.c),
        )
        worst_err = max(worst_err, err)
        worst_r2 = min(worst_r2, fr.r_squared)
    elapsed = time.perf_counter() - t0
    ok = worst_err <= 1e-6 and worst_r2 >= 1 - 1e-10 and elapsed < 10.0
    report(
        1, "round-trip recovery",
        ok,
        f"{len(RECORDS)} rows, worst param err {worst_err:.2e}, "
        f"worst R^2 deficit {1 - worst_r2:.2e}, {elapsed:.1f}s",
    )


def test_02_noise_floor():
    t0 = time.perf_counter()
    rng = np.random.default_rng(1002)
    n = 500
    r2_ok = 0
    joint_ok = 0
    for _ in range(n):
        truth = ModelParams(
            T=rng.uniform(*T_RANGE), mu=rng.uniform(*MU_RANGE), c=rng.uniform(*C_RANGE)
        )
        clean = synth_points(truth, FD, "upper")
        pts = CumulativePoints(x=clean.x, y=clean.y + rng.normal(0, 0.01, len(clean)))
        fr = lm_fit(pts, FD)
        good_r2 = fr.r_squared >= 0.97
        r2_ok += good_r2
        rel = max(
            abs(fr.params.T - truth.T) / truth.T,
            abs(fr.params.mu - truth.mu) / abs(truth.mu),
            abs(fr.params.c - truth.c) / truth.c,
        )
        joint_ok += good_r2 and rel <= 0.10
    elapsed = time.perf_counter() - t0
    ok = r2_ok >= 0.95 * n and joint_ok >= 0.95 * n and elapsed < 60.0
    report(
        2, "noise floor",
        ok,
        f"R^2>=0.97 in {r2_ok}/{n}, +params within 10% in {joint_ok}/{n}, {elapsed:.1f}s",
    )


def test_03_model_selection():
    t0 = time.perf_counter()
    rng = np.random.default_rng(1003)
    n = 200
    fd_first = 0
    be_lower = 0
    for i in range(n):
        truth = ModelParams(
            T=rng.uniform(*T_RANGE), mu=rng.uniform(*MU_RANGE), c=rng.uniform(4.56, 5.8)
        )
        kind = "upper" if i % 2 else "mean"
        clean = synth_points(truth, FD, kind)
        if i < n // 2:
            pts = clean
        else:
            pts = CumulativePoints(x=clean.x, y=clean.y + rng.normal(0, 0.01, len(clean)))
        ranked = select_model(pts)
        be = next(r for r in ranked if r.family is BE)
        fd_first += ranked[0].family is FD
        be_lower += be.error is None and be.r_squared < ranked[0].r_squared
    elapsed = time.perf_counter() - t0
    ok = fd_first == n and be_lower == n and elapsed < 60.0
    report(
        3, "model selection",
        ok,
        f"FD first {fd_first}/{n}, BE strictly lower {be_lower}/{n}, {elapsed:.1f}s",
    )


def test_04_oracle_agreement():
    t0 = time.perf_counter()
    rng = np.random.default_rng(1004)
    n = 200
    agree = 0
    for _ in range(n):
        truth = ModelParams(
            T=rng.uniform(*T_RANGE), mu=rng.uniform(*MU_RANGE), c=rng.uniform(4.56, 5.8)
        )
        pts = synth_points(truth, FD, "upper")
        # box spans +-30% around truth, center offset half a step so the
        # lattice misses the exact optimum
        bounds = tuple((v * 0.715, v * 1.315) for v in truth.as_tuple())
        best = grid_oracle(pts, FD, bounds, 21)
        agree += lm_fit(pts, FD).ss_res <= sum_of_squares(pts, FD, best)
    elapsed = time.perf_counter() - t0
    ok = agree == n and elapsed < 120.0
    report(4, "oracle agreement", ok, f"lm <= grid in {agree}/{n}, {elapsed:.1f}s")


def test_05_gradient_check():
    t0 = time.perf_counter()
    rng = np.random.default_rng(1005)
    h = 1e-6
    n_total = 0
    worst = 0.0
    for family in ModelFamily:
        n = 3334
        T = rng.uniform(*T_RANGE, n)
        mu = rng.uniform(*MU_RANGE, n)
        c = rng.uniform(*C_RANGE, n)
        off = rng.uniform(0.05, 8.0, n) * T * rng.choice([-1.0, 1.0], n)
        if family is BE:
            off = np.abs(off)  # stay clear of the pole
        x = mu + off
        analytic = _partials(family, T, mu, c, x)
        numeric = (
            (_values(family, T + h, mu, c, x) - _values(family, T - h, mu, c, x)) / (2 * h),
            (_values(family, T, mu + h, c, x) - _values(family, T, mu - h, c, x)) / (2 * h),
            (_values(family, T, mu, c + h, x) - _values(family, T, mu, c - h, x)) / (2 * h),
        )
        for a, b in zip(analytic, numeric):
            rel = np.abs(a - b) / np.maximum(np.abs(b), 1e-9)
            worst = max(worst, float(rel.max()))
        n_total += n
    elapsed = time.perf_counter() - t0
    ok = worst <= 1e-5 and elapsed < 5.0
    report(
        5, "gradient check",
        ok,
        f"{n_total} evaluations, worst rel err {worst:.2e}, {elapsed:.2f}s",
    )


def test_06_scale_equivariance():
    truth = ModelParams(T=0.7977, mu=7.581, c=5.722)  # heavy-leu scale parameters
    pts = synth_points(truth, FD, "mean")
    s = 10000.0
    base = lm_fit(pts, FD)
    scaled = lm_fit(rescale(pts, s), FD)
    d_T = abs(scaled.params.T - base.params.T)
    d_c = abs(scaled.params.c - base.params.c)
    d_mu = abs((scaled.params.mu - base.params.mu) - math.log(s))
    d_r2 = abs(scaled.r_squared - base.r_squared)
    ok = d_T <= 1e-8 and d_c <= 1e-8 and d_mu <= 1e-8 and d_r2 <= 1e-10
    report(
        6, "scale equivariance",
        ok,
        f"s=10000: dT={d_T:.1e} dc={d_c:.1e} dmu-ln(s)={d_mu:.1e} dR2={d_r2:.1e}",
    )


def test_07_trend_flags():
    def flags_for(records):
        tables = [
            synth_table(
                ModelParams(r["T"], r["mu"], r["c"]), FD, r["kind"],
                country=r["country"], year=r["year"],
            )
            for r in records
        ]
        return temperature_report(extract_series(tables, FD)).flagged_drops

    from econotherm import IncomeBasis, TableKind

    finland = [
        r for r in rows("Finland", TableKind.MEAN_INCOME, IncomeBasis.NET)
        if r["year"] >= 2002
    ]
    mexico = [r for r in rows("Mexico", TableKind.MEAN_INCOME) if r["year"] <= 2006]
    fin_flags = flags_for(finland)
    mex_flags = flags_for(mexico)
    ok = fin_flags == (2008, 2009) and mex_flags == (2002, 2004)
    report(
        7, "trend flags",
        ok,
        f"Finland {list(fin_flags)} (want [2008, 2009]), Mexico {list(mex_flags)} (want [2002, 2004])",
    )


def test_08_symmetry_diagnostic():
    rng = np.random.default_rng(1008)
    mus = [10.0]
    for _ in range(19):
        mus.append(mus[-1] + rng.uniform(0.08, 0.25) * rng.choice([-1.0, 1.0]))
    tables = [
        synth_table(ModelParams(rng.uniform(0.4, 0.8), mu, 5.0), FD, "mean", year=1990 + i)
        for i, mu in enumerate(mus)
    ]
    series = extract_series(tables, FD)
    proxy = ProxySeries(
        entries=tuple(
            (1991 + i, float(-d + rng.normal(0, 0.05)))
            for i, d in enumerate(np.diff(mus))
        )
    )
    rep = symmetry_check(series, proxy)
    ok = rep.pearson_r <= -0.8 and rep.sign_agreement >= 0.8 and rep.n_overlap == 19
    report(
        8, "symmetry diagnostic",
        ok,
        f"pearson_r={rep.pearson_r:.3f} sign_agreement={rep.sign_agreement:.2f} n={rep.n_overlap}",
    )
