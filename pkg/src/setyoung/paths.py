"""Paths sampled on uniform grids, grid Hölder norms, fractional Brownian motion."""

from __future__ import annotations

import csv
import math
from dataclasses import dataclass
from functools import lru_cache
from typing import NamedTuple

import numpy as np

from .errors import GridError, InvalidExponent, InvalidHurst, NumericalFailure

CIRCULANT_THRESHOLD = 2**12


@dataclass(frozen=True, eq=False)
class SampledPath:
    """Values on the uniform grid 0 = t_0 < ... < t_m = T, linear in between.

    ``values`` has shape ``(m + 1,)`` for a scalar path, ``(m + 1, k)`` for
    a vector path and ``(m + 1, e, d)`` for a matrix path.
    """

    T: float
    values: np.ndarray

    def __post_init__(self):
        v = np.array(self.values, dtype=float)
        if not (self.T > 0 and math.isfinite(self.T)):
            raise GridError(f"horizon must be positive and finite, got {self.T}")
        if v.ndim == 0 or len(v) < 2:
            raise GridError("a sampled path needs at least two nodes")
        if not np.all(np.isfinite(v)):
            raise ValueError("path values must be finite")
        v.flags.writeable = False
        object.__setattr__(self, "T", float(self.T))
        object.__setattr__(self, "values", v)

    @classmethod
    def from_function(cls, fn, T: float, m: int) -> SampledPath:
        t = np.linspace(0.0, T, m + 1)
        return cls(T, np.array([fn(s) for s in t], dtype=float))

    @property
    def m(self) -> int:
        return len(self.values) - 1

    @property
    def h(self) -> float:
        return self.T / self.m

    @property
    def grid(self) -> np.ndarray:
        return np.linspace(0.0, self.T, self.m + 1)

    @property
    def value_shape(self) -> tuple:
        return self.values.shape[1:]

    def flat(self) -> np.ndarray:
        return self.values.reshape(self.m + 1, -1)

    def __call__(self, t):
        t = np.asarray(t, dtype=float)
        s = np.clip(t / self.h, 0.0, self.m)
        i = np.minimum(np.floor(s).astype(int), self.m - 1)
        lam = (s - i).reshape(s.shape + (1,) * len(self.value_shape))
        return (1 - lam) * self.values[i] + lam * self.values[i + 1]

    def coarsen(self, step: int) -> SampledPath:
        if step < 1 or self.m % step:
            raise GridError(f"step {step} does not divide m = {self.m}")
        return SampledPath(self.T, self.values[::step])

    def resample(self, m: int) -> SampledPath:
        return SampledPath(self.T, self(np.linspace(0.0, self.T, m + 1)))

    def head(self, j: int) -> SampledPath:
        """Restriction to [0, t_j]."""
        if not 1 <= j <= self.m:
            raise GridError(f"node index {j} outside 1..{self.m}")
        return SampledPath(j * self.h, self.values[: j + 1])

    def __add__(self, other: SampledPath) -> SampledPath:
        _check_same_grid(self, other)
        return SampledPath(self.T, self.values + other.values)

    def __sub__(self, other: SampledPath) -> SampledPath:
        _check_same_grid(self, other)
        return SampledPath(self.T, self.values - other.values)

    def __mul__(self, c: float) -> SampledPath:
        return SampledPath(self.T, self.values * float(c))

    __rmul__ = __mul__

    def to_csv(self, path) -> None:
        flat = self.flat()
        with open(path, "w", newline="") as fh:
            wr = csv.writer(fh)
            wr.writerow(["t"] + [f"v{i + 1}" for i in range(flat.shape[1])])
            for t, row in zip(self.grid, flat):
                wr.writerow([repr(float(t))] + [repr(float(x)) for x in row])

    @classmethod
    def from_csv(cls, path, value_shape: tuple | None = None) -> SampledPath:
        data = np.loadtxt(path, delimiter=",", skiprows=1, ndmin=2)
        t, vals = data[:, 0], data[:, 1:]
        if not np.allclose(np.diff(t), t[1] - t[0], rtol=1e-9, atol=1e-12) or t[0] != 0.0:
            raise GridError("CSV grid is not a uniform dissection starting at 0")
        if value_shape is not None:
            vals = vals.reshape((len(t),) + tuple(value_shape))
        elif vals.shape[1] == 1:
            vals = vals[:, 0]
        return cls(float(t[-1]), vals)


def _check_same_grid(a: SampledPath, b: SampledPath):
    if a.m != b.m or not math.isclose(a.T, b.T, rel_tol=1e-12):
        raise GridError(f"grids differ: (T={a.T}, m={a.m}) vs (T={b.T}, m={b.m})")


class HolderNorms(NamedTuple):
    seminorm: float
    sup: float
    total: float  # sup + seminorm


def pairwise_holder_max(X: np.ndarray, h: float, alpha: float, max_lag: int | None = None) -> float:
    """max over node pairs i < j of |X_j - X_i| / ((j - i) h)^alpha."""
    X = X.reshape(len(X), -1)
    m = len(X) - 1
    best = 0.0
    for k in range(1, (m if max_lag is None else min(m, max_lag)) + 1):
        d = X[k:] - X[:-k]
        r = math.sqrt(float(np.max(np.einsum("ij,ij->i", d, d)))) / (k * h) ** alpha
        if r > best:
            best = r
    return best


def holder_seminorm(p: SampledPath, alpha: float, max_lag: int | None = None) -> HolderNorms:
    """Grid alpha-Hölder seminorm, sup norm and their sum.

    The seminorm is the maximum ratio over all pairs of nodes, a lower bound
    for the seminorm of the interpolated path that is exact in the limit of
    refinement. Matrix values use the Frobenius norm. ``max_lag`` restricts
    the pairs to index gaps <= max_lag (a cheaper, smaller lower bound).
    """
    if not (0 < alpha <= 1):
        raise InvalidExponent(f"Hölder exponent must lie in (0, 1], got {alpha}")
    X = p.flat()
    semi = pairwise_holder_max(X, p.h, alpha, max_lag)
    sup = float(np.sqrt(np.max(np.sum(X * X, axis=1))))
    return HolderNorms(semi, sup, sup + semi)


# ---------------------------------------------------------------------------
# fractional Brownian motion


def fbm_covariance(s, t, H: float):
    s, t = np.asarray(s, dtype=float), np.asarray(t, dtype=float)
    return 0.5 * (t ** (2 * H) + s ** (2 * H) - np.abs(t - s) ** (2 * H))


@lru_cache(maxsize=32)
def _cholesky_factor(H: float, T: float, m: int) -> np.ndarray:
    t = np.linspace(0.0, T, m + 1)[1:]
    cov = fbm_covariance(t[:, None], t[None, :], H)
    for jitter in (0.0, 1e-12):
        try:
            return np.linalg.cholesky(cov + jitter * np.eye(m))
        except np.linalg.LinAlgError:
            continue
    raise NumericalFailure(f"fBm covariance not positive definite (H={H}, m={m}) after jitter 1e-12")


@lru_cache(maxsize=32)
def _circulant_eigs(H: float, m: int):
    k = np.arange(m + 1, dtype=float)
    gamma = 0.5 * ((k + 1) ** (2 * H) + np.abs(k - 1) ** (2 * H) - 2 * k ** (2 * H))
    c = np.concatenate([gamma, gamma[-2:0:-1]])
    lam = np.fft.fft(c).real
    if lam.min() < -1e-10 * lam.max():
        return None
    return np.clip(lam, 0.0, None)


def sample_fbm(H: float, T: float = 1.0, m: int = 1024, dims: int = 1, seed=0) -> SampledPath:
    """Exact Gaussian sample of a fBm with Hurst index H on the uniform grid.

    Independent coordinates; Cholesky factorization of the covariance for
    m <= 4096, circulant embedding of the increments above that (with a
    Cholesky fallback if the embedding is not nonnegative). Scalar path for
    ``dims == 1``.
    """
    if not (0.5 < H < 1.0):
        raise InvalidHurst(f"Hurst index must lie in (1/2, 1), got {H}")
    if m < 2:
        raise GridError("need m >= 2")
    rng = np.random.default_rng(seed)
    lam = _circulant_eigs(float(H), int(m)) if m > CIRCULANT_THRESHOLD else None
    if lam is not None:
        M = len(lam)
        cols = []
        for _ in range(dims):
            W = rng.standard_normal(M) + 1j * rng.standard_normal(M)
            incr = np.fft.fft(np.sqrt(lam / M) * W)[:m].real
            cols.append(np.concatenate([[0.0], np.cumsum(incr)]) * (T / m) ** H)
        vals = np.stack(cols, axis=1)
    else:
        L = _cholesky_factor(float(H), float(T), int(m))
        vals = np.vstack([np.zeros((1, dims)), L @ rng.standard_normal((m, dims))])
    return SampledPath(T, vals[:, 0] if dims == 1 else vals)


def time_augmented(w: SampledPath) -> SampledPath:
    """Path t -> (t, w(t))."""
    return SampledPath(w.T, np.column_stack([w.grid, w.flat()]))
