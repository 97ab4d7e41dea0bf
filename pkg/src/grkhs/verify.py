"""Self-contained verification suite for the library's numerical claims.

Each check pairs a closed-form quantity with an independent numerical
route (quadrature, brute-force enumeration, random designs) and a fixed
tolerance.  The checks are deterministic: fixed seeds, fixed grids, no
wall-clock content, so two runs render byte-identical reports.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .algorithms import minimal_error_all, spline_worst_case_error
from .complexity import (
    error_sequence_all,
    estimate_rate,
    info_complexity,
    quasipoly_exponent,
    tractability_probe,
)
from .kernel import ShapeSequence, initial_error, kernel_eval
from .quadrature import gauss_hermite, nystrom_eigs
from .spectrum import top_n_tensor_eigenvalues, univariate_spectrum

__all__ = ["CheckResult", "run_checks", "render_report", "DETERMINISM_CHECK_NAME"]

DETERMINISM_CHECK_NAME = "12 determinism"


@dataclass(frozen=True)
class CheckResult:
    name: str
    passed: bool
    detail: str


def _fmt(x: float) -> str:
    return f"{x:.3e}"


def check_spectral_oracle() -> CheckResult:
    worst = 0.0
    per_gamma = []
    for gamma in (0.1, 0.5, 1.0, 2.0, 10.0):
        spec = univariate_spectrum(gamma)
        lam = spec.eigenvalue(np.arange(1, 11))
        approx = nystrom_eigs(gamma, 200, 10)
        rel = float(np.max(np.abs(approx - lam) / lam))
        per_gamma.append(f"gamma={gamma:g}: {_fmt(rel)}")
        worst = max(worst, rel)
    return CheckResult(
        "01 spectral oracle equivalence",
        worst <= 1e-6,
        "max rel err " + ", ".join(per_gamma) + " (tol 1e-6)",
    )


def check_trace_identity() -> CheckResult:
    worst = 0.0
    for gamma in (0.1, 0.5, 1.0, 2.0, 10.0):
        spec = univariate_spectrum(gamma)
        partial = float(np.sum(spec.eigenvalue(np.arange(1, 2001))))
        target = 1.0 - spec.omega**2000
        worst = max(worst, abs(partial - target))
    return CheckResult(
        "02 trace identity",
        worst <= 1e-12,
        f"max |partial sum - (1 - omega^2000)| = {_fmt(worst)} (tol 1e-12)",
    )


def check_orthonormality() -> CheckResult:
    rule = gauss_hermite(200)
    worst = 0.0
    for gamma in (0.5, 1.0, 2.0):
        spec = univariate_spectrum(gamma)
        P = spec.eigenfunctions(10, rule.nodes)
        G = (P * rule.weights) @ P.T
        worst = max(worst, float(np.max(np.abs(G - np.eye(10)))))
    return CheckResult(
        "03 eigenfunction orthonormality",
        worst <= 1e-8,
        f"max |Gram - I| = {_fmt(worst)} (tol 1e-8)",
    )


def check_mercer() -> CheckResult:
    shape = ShapeSequence.isotropic(1.0)
    spec = univariate_spectrum(1.0)
    grid = np.linspace(-2.0, 2.0, 5)
    P = spec.eigenfunctions(50, grid)
    lam = spec.eigenvalue(np.arange(1, 51))
    recon = (P.T * lam) @ P
    exact = np.array(
        [[kernel_eval(shape, 1, [x], [t]) for t in grid] for x in grid]
    )
    worst = float(np.max(np.abs(recon - exact)))
    return CheckResult(
        "04 Mercer reconstruction",
        worst <= 1e-8,
        f"max |partial expansion - kernel| = {_fmt(worst)} (tol 1e-8)",
    )


def _brute_force_top(shape, d, n, box=40):
    import itertools

    from .kernel import eigenvalue_ratio
    from .spectrum import _log_product

    ratios = np.array([eigenvalue_ratio(g) for g in shape.gammas(d)])
    base = float(np.sum(np.log1p(-ratios)))
    log_ratio = np.log(ratios)
    idx_all = []
    for dense in itertools.product(range(1, box + 1), repeat=d):
        entries = tuple((pos, j) for pos, j in enumerate(dense, start=1) if j > 1)
        logval = _log_product(base, log_ratio, entries)
        key = tuple((pos, -j) for pos, j in entries)
        idx_all.append((-logval, key, dense))
    idx_all.sort()
    return [(-neg, dense) for neg, _, dense in idx_all[:n]]


def check_tensor_enumeration() -> CheckResult:
    cases = [
        (ShapeSequence.isotropic(1.0), 2),
        (ShapeSequence.isotropic(1.0), 3),
        (ShapeSequence.explicit([1.0, 0.5, 0.25]), 2),
        (ShapeSequence.explicit([1.0, 0.5, 0.25]), 3),
    ]
    for shape, d in cases:
        top = top_n_tensor_eigenvalues(shape, d, 100)
        brute = _brute_force_top(shape, d, 100)
        for k in range(100):
            lv, idx = top.log_values[k], top.indices[k].dense()
            blv, bidx = brute[k]
            if lv != blv or idx != bidx:
                return CheckResult(
                    "05 tensor enumeration vs brute force",
                    False,
                    f"first mismatch at rank {k} for {shape!r}, d={d}: "
                    f"{idx} vs {bidx}",
                )
    return CheckResult(
        "05 tensor enumeration vs brute force",
        True,
        "top-100 value- and index-exact for 4 shape/dimension cases",
    )


def check_half_rate_bound() -> CheckResult:
    shapes = [ShapeSequence.isotropic(1.0), ShapeSequence.power_law(1.0, 2.0)]
    worst = -math.inf
    for shape in shapes:
        for d in (1, 2, 5, 10, 50):
            seq = error_sequence_all(shape, d, 10_000)
            bound = (np.arange(10_001) + 1.0) ** -0.5
            worst = max(worst, float(np.max(seq.values - bound)))
    return CheckResult(
        "06 dimension-free 1/2-rate bound",
        worst <= 0.0,
        f"max e(n) - (n+1)^(-1/2) = {_fmt(worst)} (must be <= 0)",
    )


def check_rate_fits() -> CheckResult:
    window = (100, 10_000)
    decaying = estimate_rate(
        error_sequence_all(ShapeSequence.power_law(1.0, 2.0), 16, 10_000), window
    )
    iso = estimate_rate(
        error_sequence_all(ShapeSequence.isotropic(1.0), 16, 10_000), window
    )
    ok = 1.3 <= decaying.rate <= 2.5 and decaying.rate - iso.rate >= 0.5
    return CheckResult(
        "07 rate fit for decaying shapes",
        ok,
        f"powerlaw rate {decaying.rate:.3f} (window [1.3, 2.5]), "
        f"iso rate {iso.rate:.3f}, gap {decaying.rate - iso.rate:.3f} (>= 0.5)",
    )


def check_complexity_exponent() -> CheckResult:
    report = tractability_probe(
        ShapeSequence.isotropic(1.0),
        [2.0**-j for j in range(1, 8)],
        list(range(1, 17)),
        "absolute",
    )
    ok = 1.7 <= report.p_hat <= 2.3 and report.q_hat <= 0.1
    return CheckResult(
        "08 isotropic absolute complexity exponent",
        ok,
        f"p_hat = {report.p_hat:.3f} (window [1.7, 2.3]), "
        f"q_hat = {report.q_hat:.3f} (<= 0.1), class {report.classification}",
    )


def check_quasipoly() -> CheckResult:
    shape = ShapeSequence.isotropic(1.0)
    bound = 1.15 * quasipoly_exponent(1.0)
    t_hat = 0.0
    for d in range(1, 33):
        for j in range(1, 7):
            n = info_complexity(shape, d, 2.0**-j, "normalized")
            if n >= 1:
                t = math.log(n) / ((1.0 + math.log(d)) * (1.0 + j * math.log(2.0)))
                t_hat = max(t_hat, t)
    ns = [info_complexity(shape, d, 0.5, "normalized") for d in range(1, 33)]
    increasing = all(a < b for a, b in zip(ns, ns[1:]))
    ok = t_hat <= bound and increasing
    return CheckResult(
        "09 isotropic normalized quasi-polynomial consistency",
        ok,
        f"t_hat = {t_hat:.3f} (<= {bound:.3f}), "
        f"n(1/2, d) strictly increasing: {increasing}",
    )


def check_spline_ordering() -> CheckResult:
    shape = ShapeSequence.isotropic(1.0)
    lower = {d: error_sequence_all(shape, d, 20).values for d in (1, 2)}
    rng = np.random.default_rng(20240817)
    min_margin = math.inf
    for _ in range(200):
        d = int(rng.integers(1, 3))
        n = int(rng.integers(1, 21))
        design = rng.standard_normal((n, d))
        m = 200 if d == 1 else 32
        wce = spline_worst_case_error(shape, d, design, m)
        min_margin = min(min_margin, wce - lower[d][n])
    empty_err = abs(
        spline_worst_case_error(shape, 1, np.empty((0, 1)), 200)
        - initial_error(shape, 1)
    )
    ok = min_margin >= -1e-9 and empty_err <= 1e-6
    return CheckResult(
        "10 spline vs optimal ordering",
        ok,
        f"min margin over 200 designs = {_fmt(min_margin)} (>= -1e-9), "
        f"empty-design deviation = {_fmt(empty_err)} (<= 1e-6)",
    )


def check_point_complexity() -> CheckResult:
    n = info_complexity(ShapeSequence.isotropic(1.0), 1, 0.1, "absolute")
    return CheckResult(
        "11 point complexity spot value",
        n == 5,
        f"n(0.1, d=1, absolute) = {n} (expected 5)",
    )


CHECKS = [
    check_spectral_oracle,
    check_trace_identity,
    check_orthonormality,
    check_mercer,
    check_tensor_enumeration,
    check_half_rate_bound,
    check_rate_fits,
    check_complexity_exponent,
    check_quasipoly,
    check_spline_ordering,
    check_point_complexity,
]


def run_checks() -> list:
    """Run checks 1-11 and return their results."""
    return [fn() for fn in CHECKS]


def render_report(results) -> str:
    lines = []
    for res in results:
        status = "PASS" if res.passed else "FAIL"
        lines.append(f"[{status}] {res.name}: {res.detail}")
    return "\n".join(lines) + "\n"


def run_full(include_determinism: bool = True):
    """Run all checks; the determinism check re-runs the suite and compares reports."""
    results = run_checks()
    if include_determinism:
        first = render_report(results)
        second = render_report(run_checks())
        results = results + [
            CheckResult(
                DETERMINISM_CHECK_NAME,
                first == second,
                "two runs render byte-identical reports"
                if first == second
                else "reports differ between runs",
            )
        ]
    return results
