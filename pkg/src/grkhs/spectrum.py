"""Closed-form spectrum of the Gaussian-kernel integral operator.

Univariate eigenvalues are geometric, lambda_j = (1 - omega) omega^(j-1)
with ratio omega depending only on the shape parameter, and the
eigenfunctions are scaled Hermite functions.  The d-variate operator is the
tensor product, so its spectrum consists of products of univariate
eigenvalues indexed by multi-indices; :func:`top_n_tensor_eigenvalues`
enumerates the largest ones best-first.
"""

from __future__ import annotations

import heapq
import os
from dataclasses import dataclass, field

import numpy as np

from .errors import EvaluationOverflowError, ResourceLimitError
from .kernel import ShapeSequence, eigenvalue_ratio

__all__ = [
    "UnivariateSpectrum",
    "univariate_spectrum",
    "mercer_check",
    "MultiIndex",
    "TensorEigenList",
    "top_n_tensor_eigenvalues",
    "stream_tensor_eigenvalues",
    "tensor_log_eigenvalue",
    "max_enumeration",
]

DEFAULT_MAX_EIGS = 10_000_000

# largest |x| for which exp(x^2 / 2) stays finite in double precision
_X_OVERFLOW = 37.6


def max_enumeration() -> int:
    """Enumeration guard, overridable through the GRKHS_MAX_EIGS variable."""
    raw = os.environ.get("GRKHS_MAX_EIGS")
    if raw is None:
        return DEFAULT_MAX_EIGS
    try:
        val = int(raw)
    except ValueError as exc:
        raise ValueError(f"GRKHS_MAX_EIGS must be an integer, got {raw!r}") from exc
    if val < 1:
        raise ValueError(f"GRKHS_MAX_EIGS must be >= 1, got {val}")
    return val


@dataclass(frozen=True)
class UnivariateSpectrum:
    """Eigenvalue law of the univariate kernel operator for one shape parameter.

    Attributes
    ----------
    gamma : float
        Shape parameter.
    omega : float
        Eigenvalue ratio in (0, 1); lambda_j = (1 - omega) omega^(j-1).
    delta_sq : float
        Exponent shift of the eigenfunctions, (sqrt(1 + 4 gamma^2) - 1) / 2.
    beta : float
        Argument scale of the eigenfunctions, (1 + 4 gamma^2)^(1/4).
    """

    gamma: float
    omega: float = field(init=False)
    delta_sq: float = field(init=False)
    beta: float = field(init=False)

    def __post_init__(self):
        if self.gamma <= 0:
            raise ValueError(f"shape parameter must be positive, got {self.gamma}")
        s = np.sqrt(1.0 + 4.0 * self.gamma**2)
        object.__setattr__(self, "omega", eigenvalue_ratio(self.gamma))
        object.__setattr__(self, "delta_sq", (s - 1.0) / 2.0)
        object.__setattr__(self, "beta", float(s**0.5))

    def eigenvalue(self, j):
        """lambda_j = (1 - omega) omega^(j-1), vectorized over j >= 1."""
        j = np.asarray(j)
        if np.any(j < 1):
            raise ValueError("eigenvalue index must be >= 1")
        return (1.0 - self.omega) * self.omega ** (j - 1)

    def log_eigenvalue(self, j):
        j = np.asarray(j)
        if np.any(j < 1):
            raise ValueError("eigenvalue index must be >= 1")
        return np.log1p(-self.omega) + (j - 1) * np.log(self.omega)

    def eigenfunction(self, j: int, x):
        """Evaluate the j-th orthonormal eigenfunction at x (scalar or array).

        phi_j(x) = sqrt(beta / (2^(j-1) (j-1)!)) e^(-delta_sq x^2) H_{j-1}(beta x),
        computed through the bounded Hermite-function recurrence as

            phi_j(x) = sqrt(beta) pi^(1/4) psi_{j-1}(beta x) e^(x^2 / 2),

        which is stable for any index; only the final e^(x^2/2) envelope can
        overflow, at |x| > 37.6.
        """
        return self.eigenfunctions(j, x)[-1]

    def eigenfunctions(self, J: int, x) -> np.ndarray:
        """Rows phi_1 .. phi_J evaluated at x; shape (J,) + shape(x)."""
        if J < 1:
            raise ValueError(f"need J >= 1, got {J}")
        x = np.atleast_1d(np.asarray(x, dtype=float))
        if np.any(np.abs(x) > _X_OVERFLOW):
            raise EvaluationOverflowError(
                f"eigenfunction envelope exp(x^2/2) overflows for |x| > {_X_OVERFLOW}"
            )
        u = self.beta * x
        psi = np.empty((J,) + x.shape)
        psi[0] = np.pi**-0.25 * np.exp(-0.5 * u * u)
        if J > 1:
            psi[1] = np.sqrt(2.0) * u * psi[0]
        for k in range(2, J):
            psi[k] = np.sqrt(2.0 / k) * u * psi[k - 1] - np.sqrt((k - 1.0) / k) * psi[k - 2]
        return np.sqrt(self.beta) * np.pi**0.25 * psi * np.exp(0.5 * x * x)


def univariate_spectrum(gamma: float) -> UnivariateSpectrum:
    """Closed-form univariate spectrum for one shape parameter."""
    return UnivariateSpectrum(gamma=gamma)


def mercer_check(spec: UnivariateSpectrum, x: float, t: float, J: int) -> float:
    """Partial eigen-expansion sum_{j<=J} lambda_j phi_j(x) phi_j(t).

    Converges to the kernel value as J grows; used to validate the
    closed-form eigenpairs against direct kernel evaluation.
    """
    if J < 1:
        raise ValueError(f"need J >= 1, got {J}")
    js = np.arange(1, J + 1)
    lam = spec.eigenvalue(js)
    px = spec.eigenfunctions(J, np.array([float(x)]))[:, 0]
    pt = spec.eigenfunctions(J, np.array([float(t)]))[:, 0]
    return float(np.sum(lam * px * pt))


class MultiIndex:
    """Multi-index of eigenfunction numbers, stored sparsely.

    Only coordinates above 1 are kept, as (position, value) pairs with
    1-based positions, so indices stay small even for d in the hundreds.
    """

    __slots__ = ("d", "_entries")

    def __init__(self, d: int, entries=()):
        self.d = d
        self._entries = tuple(entries)  # ((pos, j), ...) sorted, j >= 2

    @classmethod
    def from_dense(cls, values) -> "MultiIndex":
        values = tuple(int(v) for v in values)
        if any(v < 1 for v in values):
            raise ValueError("multi-index entries must be >= 1")
        ent = tuple((i + 1, v) for i, v in enumerate(values) if v > 1)
        return cls(len(values), ent)

    def dense(self) -> tuple:
        out = [1] * self.d
        for pos, j in self._entries:
            out[pos - 1] = j
        return tuple(out)

    def __getitem__(self, l: int) -> int:
        if not 1 <= l <= self.d:
            raise IndexError(l)
        for pos, j in self._entries:
            if pos == l:
                return j
        return 1

    def __eq__(self, other):
        return (
            isinstance(other, MultiIndex)
            and self.d == other.d
            and self._entries == other._entries
        )

    def __hash__(self):
        return hash((self.d, self._entries))

    def __repr__(self):
        return f"MultiIndex{self.dense()!r}"


@dataclass
class TensorEigenList:
    """The n largest d-variate eigenvalues with their multi-indices, descending."""

    d: int
    log_values: np.ndarray
    indices: list

    @property
    def values(self) -> np.ndarray:
        return np.exp(self.log_values)

    def __len__(self):
        return self.log_values.size

    def __iter__(self):
        return iter(zip(self.values, self.indices))


def _log_product(base: float, log_ratio: np.ndarray, entries) -> float:
    # fixed accumulation order so equal indices give bit-equal values
    v = base
    for pos, j in entries:
        v += (j - 1) * log_ratio[pos - 1]
    return v


def tensor_log_eigenvalue(shape: ShapeSequence, d: int, dense_index) -> float:
    """log of the tensor eigenvalue at a dense multi-index.

    Uses the same accumulation order as the best-first enumeration, so
    values agree bit-for-bit with those in a :class:`TensorEigenList`.
    """
    g = shape.gammas(d)
    ratios = np.array([eigenvalue_ratio(x) for x in g])
    entries = tuple(
        (pos, int(j)) for pos, j in enumerate(dense_index, start=1) if j > 1
    )
    return _log_product(float(np.sum(np.log1p(-ratios))), np.log(ratios), entries)


def _heap_stream(shape: ShapeSequence, d: int):
    """Yield (log_value, sparse_entries) best-first, ties dense-prefix ordered.

    Each index is generated exactly once: coordinate l may be incremented
    only if no earlier coordinate sits above 1 beyond l, i.e. l runs up to
    the first raised position.  Equal log-values (exact float ties, common
    for isotropic shapes) pop in the fixed tie-break order given by the
    (position, -excess) key, which sorts (2,1) before (1,2).
    """
    g = shape.gammas(d)
    ratios = np.array([eigenvalue_ratio(x) for x in g])
    log_ratio = np.log(ratios)
    base = float(np.sum(np.log1p(-ratios)))
    # heap entries: (-log_value, tie_key, sparse entries ((pos, j), ...))
    heap = [(-base, (), ())]
    while heap:
        neg, _, entries = heapq.heappop(heap)
        yield -neg, entries
        first = entries[0][0] if entries else d
        for l in range(1, first + 1):
            if entries and entries[0][0] == l:
                child = ((l, entries[0][1] + 1),) + entries[1:]
            else:
                child = ((l, 2),) + entries
            key = tuple((pos, -j) for pos, j in child)
            heapq.heappush(
                heap, (-_log_product(base, log_ratio, child), key, child)
            )


def stream_tensor_eigenvalues(shape: ShapeSequence, d: int, limit: int | None = None):
    """Generator of (log_value, MultiIndex) in descending order.

    ``limit`` defaults to the enumeration guard; exceeding it raises
    :class:`ResourceLimitError`.
    """
    if d < 1:
        raise ValueError(f"dimension must be >= 1, got {d}")
    guard = max_enumeration() if limit is None else limit
    for count, (logval, entries) in enumerate(_heap_stream(shape, d), start=1):
        if count > guard:
            raise ResourceLimitError(
                f"tensor eigenvalue enumeration exceeded guard of {guard}"
            )
        yield logval, MultiIndex(d, entries)


def top_n_tensor_eigenvalues(shape: ShapeSequence, d: int, n: int) -> TensorEigenList:
    """The n largest eigenvalues of the d-variate tensor operator.

    Values are products of univariate eigenvalues, accumulated in log
    space so that large d cannot underflow; exact value ties are broken
    deterministically (see :func:`_heap_stream`).
    """
    if n < 1:
        raise ValueError(f"need n >= 1, got {n}")
    if n > max_enumeration():
        raise ResourceLimitError(
            f"requested {n} eigenvalues, guard is {max_enumeration()}"
        )
    logs = np.empty(n)
    idxs = []
    stream = stream_tensor_eigenvalues(shape, d, limit=n)
    for i, (logval, idx) in enumerate(stream):
        logs[i] = logval
        idxs.append(idx)
        if i + 1 == n:
            break
    return TensorEigenList(d=d, log_values=logs, indices=idxs)
