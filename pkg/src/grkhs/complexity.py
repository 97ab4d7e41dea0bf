"""Information complexity, decay rates and tractability diagnostics.

Everything here is about how the minimal errors behave jointly in the
number of data n, the tolerance eps and the dimension d: the shape-decay
rate r, the error sequence e(n), the information complexity n(eps, d),
empirical convergence-rate fits, and a grid probe that classifies the
observed growth of n(eps, d).
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np

from .errors import ResourceLimitError
from .kernel import ShapeSequence, eigenvalue_ratio, initial_error
from .spectrum import max_enumeration, stream_tensor_eigenvalues

__all__ = [
    "DecayRate",
    "decay_rate_r",
    "ErrorSequence",
    "error_sequence_all",
    "info_complexity",
    "quasipoly_exponent",
    "RateFit",
    "estimate_rate",
    "ComplexityReport",
    "tractability_probe",
]

# relative RMS residual below which the envelope fit counts as polynomial
POLY_FIT_THRESHOLD = 0.05
# |q| below which a polynomial fit counts as dimension-free
STRONG_POLY_Q = 0.1
# growth factor of t-hat between half and full d-grid tolerated as "bounded"
QUASI_STABLE_FACTOR = 1.3

SUPERPOLY_SLOPE = 5.0


@dataclass(frozen=True)
class DecayRate:
    """Decay rate of a shape sequence: sup{beta > 0 : sum gamma_l^(1/beta) finite}."""

    value: float
    kind: str


def decay_rate_r(shape: ShapeSequence) -> DecayRate:
    """Analytic decay rate of the closed-form shape kinds.

    Isotropic sequences have rate 0 (empty supremum), power laws with
    exponent alpha have rate alpha, geometric sequences have infinite
    rate.  Finite explicit lists carry no asymptotics and are rejected.
    """
    if shape.kind == "isotropic":
        return DecayRate(0.0, shape.kind)
    if shape.kind == "power-law":
        return DecayRate(shape.params["alpha"], shape.kind)
    if shape.kind == "geometric":
        return DecayRate(math.inf, shape.kind)
    raise ValueError("finite explicit shapes have no asymptotic decay rate")


@dataclass
class ErrorSequence:
    """Nonincreasing error values e(0), e(1), ..., e(N)."""

    values: np.ndarray
    provenance: str  # "all-class exact" or "std-class empirical"

    def __len__(self):
        return self.values.size


def error_sequence_all(shape: ShapeSequence, d: int, N: int) -> ErrorSequence:
    """Exact minimal errors e(n), n = 0..N, for arbitrary-functional data.

    e(n) is the square root of the (n+1)-st largest tensor eigenvalue,
    obtained by streaming the best-first enumeration once.
    """
    if N < 0:
        raise ValueError(f"need N >= 0, got {N}")
    if N + 1 > max_enumeration():
        raise ResourceLimitError(f"N+1 = {N + 1} exceeds guard {max_enumeration()}")
    logs = np.empty(N + 1)
    stream = stream_tensor_eigenvalues(shape, d, limit=N + 1)
    for i, (logval, _) in enumerate(stream):
        logs[i] = logval
        if i == N:
            break
    return ErrorSequence(values=np.exp(0.5 * logs), provenance="all-class exact")


def _coordinate_costs(shape: ShapeSequence, d: int):
    """Log-domain description of the d-variate spectrum.

    Per coordinate, eigenvalues are lambda_1 * ratio^k; returns the total
    log lambda_1 offset and the per-coordinate costs -log(ratio) > 0.
    """
    ratios = np.array([eigenvalue_ratio(g) for g in shape.gammas(d)])
    offset = float(np.sum(np.log1p(-ratios)))
    costs = -np.log(ratios)
    return offset, costs


def _count_below_budget(costs: np.ndarray, budget: float, guard: int) -> int:
    """Number of k >= 0 vectors with sum k_l * costs_l < budget.

    Coordinates with equal cost are grouped, and a whole group of size g
    at total excess s contributes binomial(s + g - 1, g - 1) vectors, so
    isotropic shapes are counted in closed form.  The guard bounds the
    work of the remaining recursion over distinct costs, not the returned
    count.
    """
    groups = []  # (cost, multiplicity), descending cost
    for c in sorted(costs, reverse=True):
        if groups and abs(groups[-1][0] - c) < 1e-14 * c:
            groups[-1][1] += 1
        else:
            groups.append([c, 1])
    work = 0

    def rec(i: int, budget: float) -> int:
        nonlocal work
        if i == len(groups):
            return 1
        work += 1
        if work > guard:
            raise ResourceLimitError(
                f"complexity count exceeded work guard of {guard}"
            )
        c, g = groups[i]
        total = 0
        s = 0
        while s * c < budget - 1e-12:
            total += math.comb(s + g - 1, g - 1) * rec(i + 1, budget - s * c)
            s += 1
        return total

    return rec(0, budget)


def info_complexity(shape: ShapeSequence, d: int, eps: float, criterion: str) -> int:
    """Minimal number of linear functionals for an eps approximation.

    Smallest n with e(n) <= eps * CRI, where CRI is 1 for the absolute
    criterion and the initial error for the normalized one.  Computed as
    the exact count of tensor eigenvalues above the squared threshold,
    which equals the index at which the streamed enumeration would cross
    it.
    """
    if not 0.0 < eps < 1.0:
        raise ValueError(f"eps must lie in (0, 1), got {eps}")
    if criterion not in ("absolute", "normalized"):
        raise ValueError(f"criterion must be absolute or normalized, got {criterion!r}")
    offset, costs = _coordinate_costs(shape, d)
    # count log lambda = offset - sum k_l costs_l > 2 log(eps * CRI)
    budget = -2.0 * math.log(eps)
    if criterion == "absolute":
        budget += offset  # CRI = 1, threshold 2 log eps; offset moves to budget
    if budget <= 0:
        return 0
    return _count_below_budget(costs, budget, max_enumeration())


def quasipoly_exponent(gamma: float) -> float:
    """Quasi-polynomial tractability exponent 2 / log(1 / omega) for isotropic shapes."""
    return 2.0 / -math.log(eigenvalue_ratio(gamma))


@dataclass(frozen=True)
class RateFit:
    """Least-squares log-log convergence rate over an index window."""

    rate: float
    superpolynomial: bool
    degenerate: bool


def estimate_rate(seq: ErrorSequence, window) -> RateFit:
    """Fit -log e(n) against log n by ordinary least squares over a window.

    ``window`` is an inclusive (lo, hi) index range with lo >= 1.  Super-
    polynomial decay (the log-log points curve away from any line) is
    flagged when either the fitted slope exceeds 5 or the second-half
    slope exceeds 1.5 times the first-half slope.  A constant window is
    flagged degenerate with rate 0.
    """
    lo, hi = int(window[0]), int(window[1])
    if not 1 <= lo < hi or hi >= len(seq):
        raise ValueError(f"window {window} not inside sequence of length {len(seq)}")
    e = seq.values[lo : hi + 1]
    if np.any(e <= 0):
        raise ValueError("rate fit needs strictly positive errors")
    n = np.arange(lo, hi + 1)
    if np.allclose(e, e[0], rtol=1e-15, atol=0.0):
        return RateFit(rate=0.0, superpolynomial=False, degenerate=True)

    def slope(nn, ee):
        x, y = np.log(nn), -np.log(ee)
        A = np.column_stack([np.ones_like(x), x])
        return float(np.linalg.lstsq(A, y, rcond=None)[0][1])

    full = slope(n, e)
    half = (lo + hi) // 2
    first = slope(n[n <= half], e[n <= half]) if np.sum(n <= half) >= 2 else full
    second = slope(n[n > half], e[n > half]) if np.sum(n > half) >= 2 else full
    superpoly = full > SUPERPOLY_SLOPE or (first > 0 and second > 1.5 * first)
    return RateFit(rate=full, superpolynomial=superpoly, degenerate=False)


@dataclass
class ComplexityReport:
    """Result of a tractability grid probe."""

    criterion: str
    table: list  # rows (d, eps, n)
    p_hat: float
    q_hat: float
    envelope_residual: float
    t_hat: float
    classification: str
    guard_hit: bool = False
    info: dict = field(default_factory=dict)


def _ols(X, y):
    coef, *_ = np.linalg.lstsq(X, y, rcond=None)
    return coef


def tractability_probe(
    shape: ShapeSequence, eps_grid, d_grid, criterion: str, cls: str = "all"
) -> ComplexityReport:
    """Fill the n(eps, d) table over a grid and classify its growth.

    The exponent p of eps^(-1) is fitted on the per-eps envelope
    max_d n(eps, d), which is the quantity the tractability bounds
    constrain; q is the ln d coefficient of the joint least-squares fit
    over all nontrivial cells.  Classification:

    - envelope fit residual <= 0.05 and |q| <= 0.1 -> strong-poly
    - envelope fit residual <= 0.05 otherwise     -> poly
    - t-hat = max ln n / ((1 + ln d)(1 + ln eps^-1)) stable between the
      lower-half and full d grid                   -> quasi-poly-consistent
    - otherwise                                    -> inconclusive

    Cells whose count would exceed the work guard are recorded as lower
    bounds and degrade the classification to inconclusive.
    """
    if cls != "all":
        raise ValueError("only the arbitrary-functional class is exactly computable")
    eps_grid = [float(e) for e in eps_grid]
    d_grid = [int(d) for d in d_grid]
    if not eps_grid or not d_grid:
        raise ValueError("grids must be nonempty")
    table = []
    guard_hit = False
    for d in d_grid:
        for eps in eps_grid:
            try:
                n = info_complexity(shape, d, eps, criterion)
            except ResourceLimitError as exc:
                n = exc.partial if exc.partial is not None else max_enumeration()
                guard_hit = True
            table.append((d, eps, n))

    def t_hat_over(ds):
        vals = [
            math.log(n) / ((1.0 + math.log(d)) * (1.0 + math.log(1.0 / eps)))
            for d, eps, n in table
            if n >= 1 and d in ds
        ]
        return max(vals) if vals else 0.0

    envelope = {}
    for d, eps, n in table:
        envelope[eps] = max(envelope.get(eps, 0), n)
    env_pts = [(math.log(1.0 / e), math.log(n)) for e, n in envelope.items() if n >= 1]
    cells = [
        (math.log(1.0 / eps), math.log(d), math.log(n))
        for d, eps, n in table
        if n >= 1
    ]
    if len(env_pts) >= 2 and len(cells) >= 3:
        Xe = np.array([[1.0, x] for x, _ in env_pts])
        ye = np.array([y for _, y in env_pts])
        ce = _ols(Xe, ye)
        p_hat = float(ce[1])
        resid = Xe @ ce - ye
        scale = max(1e-12, float(np.sqrt(np.mean(ye**2))))
        env_res = float(np.sqrt(np.mean(resid**2))) / scale
        Xj = np.array([[1.0, le, ld] for le, ld, _ in cells])
        yj = np.array([ln for *_, ln in cells])
        q_hat = float(_ols(Xj, yj)[2])
    else:
        p_hat, q_hat, env_res = math.nan, math.nan, math.inf

    d_sorted = sorted(set(d_grid))
    half = set(d_sorted[: max(1, len(d_sorted) // 2)])
    t_half = t_hat_over(half)
    t_full = t_hat_over(set(d_sorted))

    if guard_hit or math.isnan(p_hat):
        classification = "inconclusive"
    elif env_res <= POLY_FIT_THRESHOLD and abs(q_hat) <= STRONG_POLY_Q:
        classification = "strong-poly"
    elif env_res <= POLY_FIT_THRESHOLD:
        classification = "poly"
    elif t_half > 0 and t_full <= QUASI_STABLE_FACTOR * t_half:
        classification = "quasi-poly-consistent"
    else:
        classification = "inconclusive"

    return ComplexityReport(
        criterion=criterion,
        table=table,
        p_hat=p_hat,
        q_hat=q_hat,
        envelope_residual=env_res,
        t_hat=t_full,
        classification=classification,
        guard_hit=guard_hit,
        info={"t_hat_half_grid": t_half},
    )
