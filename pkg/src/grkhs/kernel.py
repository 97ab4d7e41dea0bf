"""Anisotropic Gaussian kernel, shape-parameter sequences and Gram matrices.

The kernel is

    K_d(x, t) = exp(-sum_l gamma_l^2 (x_l - t_l)^2),

with one positive shape parameter per coordinate.  A :class:`ShapeSequence`
is the rule gamma_1, gamma_2, ... ; it is a rule rather than a stored array
so the same object can serve experiments that sweep the dimension.
"""

from __future__ import annotations

import numpy as np

__all__ = [
    "ShapeSequence",
    "gaussian_weight",
    "kernel_eval",
    "gram_matrix",
    "initial_error",
]


class ShapeSequence:
    """Rule defining the shape parameters gamma_l of the Gaussian kernel.

    Construct through one of the classmethods:

    - ``isotropic(gamma)``: gamma_l = gamma for all l
    - ``power_law(c, alpha)``: gamma_l = c * l**(-alpha)
    - ``geometric(q)``: gamma_l = q**l with q in (0, 1)
    - ``explicit(values)``: a finite list, which fixes the dimension

    ``power_law`` with alpha = 0 coincides with ``isotropic(c)``.
    """

    def __init__(self, kind, params):
        self.kind = kind
        self.params = params

    @classmethod
    def isotropic(cls, gamma: float) -> "ShapeSequence":
        if gamma <= 0:
            raise ValueError(f"shape parameter must be positive, got {gamma}")
        return cls("isotropic", {"gamma": float(gamma)})

    @classmethod
    def power_law(cls, c: float, alpha: float) -> "ShapeSequence":
        if c <= 0:
            raise ValueError(f"power-law scale must be positive, got {c}")
        if alpha < 0:
            raise ValueError(f"power-law exponent must be >= 0, got {alpha}")
        return cls("power-law", {"c": float(c), "alpha": float(alpha)})

    @classmethod
    def geometric(cls, q: float) -> "ShapeSequence":
        if not 0 < q < 1:
            raise ValueError(f"geometric base must lie in (0, 1), got {q}")
        return cls("geometric", {"q": float(q)})

    @classmethod
    def explicit(cls, values) -> "ShapeSequence":
        vals = np.asarray(values, dtype=float)
        if vals.ndim != 1 or vals.size == 0:
            raise ValueError("explicit shape needs a nonempty 1-d list")
        if np.any(vals <= 0):
            raise ValueError("all shape parameters must be positive")
        return cls("explicit", {"values": vals})

    @property
    def dim(self):
        """Implied dimension for explicit lists, ``None`` otherwise."""
        if self.kind == "explicit":
            return self.params["values"].size
        return None

    def gamma(self, l: int) -> float:
        """Shape parameter of coordinate ``l`` (1-based)."""
        if l < 1:
            raise ValueError(f"coordinate index must be >= 1, got {l}")
        if self.kind == "isotropic":
            return self.params["gamma"]
        if self.kind == "power-law":
            return self.params["c"] * float(l) ** (-self.params["alpha"])
        if self.kind == "geometric":
            return self.params["q"] ** l
        vals = self.params["values"]
        if l > vals.size:
            raise ValueError(f"explicit shape has {vals.size} entries, asked for {l}")
        return float(vals[l - 1])

    def gammas(self, d: int) -> np.ndarray:
        """First ``d`` shape parameters as an array."""
        if d < 1:
            raise ValueError(f"dimension must be >= 1, got {d}")
        if self.kind == "explicit" and d > self.params["values"].size:
            raise ValueError(
                f"explicit shape has {self.params['values'].size} entries, asked for d={d}"
            )
        return np.array([self.gamma(l) for l in range(1, d + 1)])

    def __repr__(self):
        if self.kind == "isotropic":
            return f"ShapeSequence.isotropic({self.params['gamma']!r})"
        if self.kind == "power-law":
            return f"ShapeSequence.power_law({self.params['c']!r}, {self.params['alpha']!r})"
        if self.kind == "geometric":
            return f"ShapeSequence.geometric({self.params['q']!r})"
        return f"ShapeSequence.explicit({self.params['values'].tolist()!r})"


def gaussian_weight(points: np.ndarray) -> np.ndarray:
    """Density rho_d(t) = pi^(-d/2) exp(-||t||^2) of the reference measure.

    ``points`` has shape (..., d); the density is evaluated along the last
    axis.  Each coordinate has mean 0 and variance 1/2.
    """
    pts = np.asarray(points, dtype=float)
    d = pts.shape[-1]
    return np.pi ** (-d / 2) * np.exp(-np.sum(pts * pts, axis=-1))


def _check_point(x, d, name):
    x = np.asarray(x, dtype=float)
    if x.ndim == 0 and d == 1:
        x = x.reshape(1)
    if x.shape != (d,):
        raise ValueError(f"{name} must have dimension {d}, got shape {x.shape}")
    return x


def kernel_eval(shape: ShapeSequence, d: int, x, t) -> float:
    """Evaluate K_d(x, t) = exp(-sum gamma_l^2 (x_l - t_l)^2).

    The value lies in (0, 1] and equals 1 exactly when x = t.
    """
    x = _check_point(x, d, "x")
    t = _check_point(t, d, "t")
    g = shape.gammas(d)
    return float(np.exp(-np.sum((g * (x - t)) ** 2)))


def gram_matrix(shape: ShapeSequence, d: int, points) -> np.ndarray:
    """Kernel Gram matrix of a point set.

    Parameters
    ----------
    points : array_like, shape (n, d)
        The data sites.  A 1-d array is accepted for d = 1.

    Returns
    -------
    ndarray, shape (n, n)
        Symmetric positive semidefinite with unit diagonal.
    """
    pts = np.asarray(points, dtype=float)
    if pts.size == 0:
        raise ValueError("point list must be nonempty")
    if pts.ndim == 1:
        if d != 1:
            raise ValueError(f"1-d point array only valid for d=1, got d={d}")
        pts = pts[:, None]
    if pts.ndim != 2 or pts.shape[1] != d:
        raise ValueError(f"points must have shape (n, {d}), got {pts.shape}")
    g = shape.gammas(d)
    scaled = pts * g  # weighted coordinates, squared distance then separates
    sq = np.sum(scaled * scaled, axis=1)
    d2 = sq[:, None] + sq[None, :] - 2.0 * scaled @ scaled.T
    np.maximum(d2, 0.0, out=d2)
    K = np.exp(-d2)
    K = 0.5 * (K + K.T)
    np.fill_diagonal(K, 1.0)
    return K


def eigenvalue_ratio(gamma: float) -> float:
    """Common ratio omega of the geometric univariate eigenvalue sequence.

    omega = 2 gamma^2 / (1 + 2 gamma^2 + sqrt(1 + 4 gamma^2)), strictly
    increasing in gamma with values in (0, 1).
    """
    if gamma <= 0:
        raise ValueError(f"shape parameter must be positive, got {gamma}")
    g2 = gamma * gamma
    return 2.0 * g2 / (1.0 + 2.0 * g2 + np.sqrt(1.0 + 4.0 * g2))


def initial_error(shape: ShapeSequence, d: int) -> float:
    """Norm of the embedding into L2(rho_d), i.e. the error of the zero algorithm.

    Equals sqrt(prod_l lambda_1(gamma_l)) with lambda_1 = 1 - omega the
    largest univariate eigenvalue; always <= 1.
    """
    g = shape.gammas(d)
    log_l1 = np.log1p(-np.array([eigenvalue_ratio(x) for x in g]))
    return float(np.exp(0.5 * np.sum(log_l1)))
