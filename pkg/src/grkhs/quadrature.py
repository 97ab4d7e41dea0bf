"""Gauss-Hermite quadrature for the probability weight and the Nystrom oracle.

All rules are normalized to the density rho_1(t) = pi^(-1/2) exp(-t^2), so
weights sum to one and no sqrt(pi) factor leaks downstream.
"""

from __future__ import annotations

from dataclasses import dataclass
from math import lgamma, log

import numpy as np
from scipy.special import roots_hermite

from .errors import ResourceLimitError

__all__ = ["QuadratureRule", "gauss_hermite", "nystrom_eigs", "integrate", "tensor_rule"]

MAX_RULE_SIZE = 512
MAX_GRID_SIZE = 10_000_000


@dataclass(frozen=True)
class QuadratureRule:
    """Nodes and weights integrating against rho_1 exactly on degree <= 2m-1."""

    nodes: np.ndarray
    weights: np.ndarray

    def __len__(self):
        return self.nodes.size


def gauss_hermite(m: int) -> QuadratureRule:
    """m-point Gauss-Hermite rule for the weight pi^(-1/2) exp(-t^2).

    Nodes and weights come from the symmetric tridiagonal eigenproblem of
    the Hermite three-term recurrence (no hard-coded tables); the classical
    exp(-t^2) weights are divided by sqrt(pi) here so that they sum to 1.
    """
    if not 1 <= m <= MAX_RULE_SIZE:
        raise ValueError(f"rule size must be in [1, {MAX_RULE_SIZE}], got {m}")
    nodes, weights = roots_hermite(m)
    return QuadratureRule(nodes=nodes, weights=weights / np.sqrt(np.pi))


def _nystrom_matrix(gamma: float, m: int) -> np.ndarray:
    rule = gauss_hermite(m)
    t = rule.nodes
    K = np.exp(-(gamma * (t[:, None] - t[None, :])) ** 2)
    s = np.sqrt(rule.weights)
    return s[:, None] * K * s[None, :]


# Largest Taylor length of exp(2 g^2 t s) we are willing to carry in the
# factored eigensolve; the truncation error decays like rho^(k/2) with
# rho = 2 g^2 / (1 + 2 g^2), so this bounds gamma from above.
_MAX_FACTOR_TERMS = 3000


def _factor_terms(gamma: float) -> int:
    g2 = gamma * gamma
    rho = 2.0 * g2 / (1.0 + 2.0 * g2)
    # aim at a truncation below 1e-30 absolute
    needed = int(np.ceil(2.0 * 30.0 * np.log(10.0) / -np.log(rho))) + 32
    return needed


def _nystrom_eigs_factored(gamma: float, m: int, terms: int) -> np.ndarray:
    """Eigenvalues of the Nystrom matrix via an SVD of an explicit factor.

    Writing K(t,s) = e^(-g^2 t^2) e^(2 g^2 t s) e^(-g^2 s^2) and expanding
    the middle exponential gives A = B B^T with graded columns

        B[a, k] = sqrt(w_a) e^(-g^2 t_a^2) sqrt((2 g^2)^k / k!) t_a^k.

    Singular values of B square to the eigenvalues of A with far better
    relative accuracy on the tiny end of the spectrum than a dense
    symmetric eigensolve, whose noise floor is eps * lambda_max.
    """
    rule = gauss_hermite(m)
    t = rule.nodes
    g2 = 2.0 * gamma * gamma
    ks = np.arange(terms)
    log_coef = 0.5 * (ks * log(g2) - np.array([lgamma(k + 1.0) for k in ks]))
    with np.errstate(divide="ignore"):
        log_abs_t = np.where(t == 0.0, -np.inf, np.log(np.abs(t)))
    log_B = (
        0.5 * np.log(rule.weights)[:, None]
        - (gamma * t[:, None]) ** 2
        + log_coef[None, :]
        + ks[None, :] * log_abs_t[:, None]
    )
    # t = 0 contributes only through the constant term
    zero = t == 0.0
    if np.any(zero):
        log_B[zero, 0] = 0.5 * np.log(rule.weights[zero]) + log_coef[0]
        log_B[zero, 1:] = -np.inf
    signs = np.where(t[:, None] < 0, np.where(ks[None, :] % 2 == 1, -1.0, 1.0), 1.0)
    B = signs * np.exp(log_B)
    sv = np.linalg.svd(B, compute_uv=False)
    lam = np.zeros(m)
    lam[: sv.size] = sv[:m] ** 2
    return lam


def nystrom_eigs(gamma: float, m: int, k: int) -> np.ndarray:
    """Largest k eigenvalues of the Nystrom discretization of the kernel operator.

    The m x m matrix is A[a, b] = sqrt(w_a w_b) K_1(t_a, t_b) on the
    Gauss-Hermite rule; its spectrum converges to that of the integral
    operator as m grows.  Values are returned in descending order.

    This routine is the numerical oracle the closed-form spectrum is
    checked against, so it never consults the closed form.  For moderate
    gamma the eigenvalues are obtained from a factored SVD (high relative
    accuracy down to the underflow floor); for large gamma, where the
    kernel Taylor factor would need too many terms, a dense symmetric
    eigensolve is used instead.
    """
    if gamma <= 0:
        raise ValueError(f"shape parameter must be positive, got {gamma}")
    if not 1 <= k <= m:
        raise ValueError(f"need 1 <= k <= m, got k={k}, m={m}")
    terms = _factor_terms(gamma)
    if terms <= _MAX_FACTOR_TERMS:
        lam = _nystrom_eigs_factored(gamma, m, terms)
    else:
        lam = np.linalg.eigvalsh(_nystrom_matrix(gamma, m))[::-1]
    return lam[:k]


def integrate(d: int, m: int, g) -> float:
    """Tensor-product Gauss-Hermite approximation of the rho_d integral of g.

    ``g`` is called with an (N, d) array of points and must return N values;
    a scalar signature ``g(point)`` is also accepted as a fallback.  Limited
    to d <= 4 and grids of at most 10^7 nodes.
    """
    if d < 1:
        raise ValueError(f"dimension must be >= 1, got {d}")
    if d > 4:
        raise ResourceLimitError(f"tensor quadrature limited to d <= 4, got d={d}")
    pts, w = tensor_rule(d, m)
    try:
        vals = np.asarray(g(pts), dtype=float)
        if vals.shape != (pts.shape[0],):
            raise TypeError
    except TypeError:
        vals = np.array([float(g(p)) for p in pts])
    return float(np.dot(w, vals))


def tensor_rule(d: int, m: int):
    """Tensor grid points (N, d) and normalized weights (N,) for rho_d."""
    if d < 1:
        raise ValueError(f"dimension must be >= 1, got {d}")
    if m**d > MAX_GRID_SIZE:
        raise ResourceLimitError(f"tensor grid m^d = {m**d} exceeds {MAX_GRID_SIZE}")
    rule = gauss_hermite(m)
    grids = np.meshgrid(*([rule.nodes] * d), indexing="ij")
    pts = np.column_stack([a.ravel() for a in grids])
    w = rule.weights
    for _ in range(d - 1):
        w = np.outer(w, rule.weights).ravel()
    return pts, w
