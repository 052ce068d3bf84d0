"""Young integration of Hölder integrands against Hölder signals."""

from __future__ import annotations

import math
from dataclasses import asdict, dataclass, field

import numpy as np

from .errors import DimMismatch, GridError, InvalidExponent
from .paths import SampledPath, holder_seminorm

MAX_COMMON_M = 2**20


@dataclass(frozen=True)
class YoungConfig:
    """Exponents of the integrand (alpha) and of the signal (beta).

    ``scheme="trapezoid"`` integrates the piecewise-linear interpolants of f
    and w exactly; ``scheme="left"`` is the left-point Riemann sum
    sum_k f(t_k)(w(t_{k+1}) - w(t_k)). Both converge to the Young integral.
    """

    alpha: float
    beta: float
    richardson_levels: int = 4
    tol: float = 1e-6
    scheme: str = "trapezoid"

    def __post_init__(self):
        for name in ("alpha", "beta"):
            v = getattr(self, name)
            if not (0 < v <= 1):
                raise InvalidExponent(f"{name} must lie in (0, 1], got {v}")
        if self.alpha + self.beta <= 1:
            raise InvalidExponent(f"need alpha + beta > 1, got {self.alpha} + {self.beta}")
        if self.richardson_levels < 2:
            raise ValueError("richardson_levels must be >= 2")
        if self.scheme not in ("trapezoid", "left"):
            raise ValueError(f"unknown scheme {self.scheme!r}")

    @property
    def theta(self) -> float:
        return self.alpha + self.beta

    @property
    def sewing_constant(self) -> float:
        """(1 - 2^{1 - (alpha + beta)})^{-1}, the dyadic sewing-lemma constant."""
        return 1.0 / (1.0 - 2.0 ** (1.0 - self.theta))

    def holder_constant(self, T: float) -> float:
        """sewing_constant * max(T^alpha, 1)."""
        return self.sewing_constant * max(T**self.alpha, 1.0)


def _common_grid(f: SampledPath, w: SampledPath) -> tuple[SampledPath, SampledPath]:
    if not math.isclose(f.T, w.T, rel_tol=1e-12):
        raise GridError(f"horizons differ: {f.T} vs {w.T}")
    if f.m == w.m:
        return f, w
    m = math.lcm(f.m, w.m)
    if m > MAX_COMMON_M:
        raise GridError(f"grids with m = {f.m} and m = {w.m} have no common refinement below {MAX_COMMON_M}")
    return f.resample(m), w.resample(m)


def _shapes(f: SampledPath, w: SampledPath):
    W = w.values.reshape(w.m + 1, -1)
    d = W.shape[1]
    F = f.values
    if F.ndim == 1:
        if d != 1:
            raise DimMismatch(f"scalar integrand against a signal in R^{d}")
        return F.reshape(-1, 1, 1), W, True
    if F.ndim == 2:
        k = F.shape[1]
        if k % d:
            raise DimMismatch(f"flattened integrand of size {k} is not e x {d}")
        return F.reshape(-1, k // d, d), W, False
    if F.ndim == 3:
        if F.shape[2] != d:
            raise DimMismatch(f"integrand in M_{{{F.shape[1]},{F.shape[2]}}} against a signal in R^{d}")
        return F, W, False
    raise DimMismatch(f"unsupported integrand shape {F.shape}")


def _increments(F: np.ndarray, W: np.ndarray, scheme: str) -> np.ndarray:
    dW = np.diff(W, axis=0)
    G = 0.5 * (F[:-1] + F[1:]) if scheme == "trapezoid" else F[:-1]
    return np.einsum("ked,kd->ke", G, dW)


def young_integral(f: SampledPath, w: SampledPath, cfg: YoungConfig | None = None) -> SampledPath:
    """Indefinite integral t_j -> int_0^{t_j} f dw on the (common) grid.

    f takes values in M_{e,d} (shape (m+1, e, d), or flattened row-major to
    (m+1, e*d)), or is scalar when w is scalar. The result is vector-valued
    (m+1, e), scalar when both inputs are scalar.
    """
    scheme = cfg.scheme if cfg is not None else "trapezoid"
    f, w = _common_grid(f, w)
    F, W, scalar = _shapes(f, w)
    I = np.concatenate([np.zeros((1, F.shape[1])), np.cumsum(_increments(F, W, scheme), axis=0)])
    return SampledPath(f.T, I[:, 0] if scalar else I)


def riemann_sum(f: SampledPath, w: SampledPath, nodes, scheme: str = "trapezoid") -> np.ndarray:
    """int_0^T f dw approximated on the sub-dissection given by node indices
    (must start at 0 and end at m)."""
    f, w = _common_grid(f, w)
    nodes = np.asarray(nodes, dtype=int)
    if nodes[0] != 0 or nodes[-1] != f.m or np.any(np.diff(nodes) <= 0):
        raise GridError("dissection must be strictly increasing from node 0 to node m")
    F, W, _ = _shapes(f, w)
    return _increments(F[nodes], W[nodes], scheme).sum(axis=0)


@dataclass
class ConvergenceReport:
    meshes: list
    finals: list
    differences: list
    order: float | None
    expected_min_order: float

    def to_dict(self) -> dict:
        return asdict(self)


def young_convergence(f: SampledPath, w: SampledPath, cfg: YoungConfig) -> ConvergenceReport:
    """Integrate on ``richardson_levels`` dyadic coarsenings of the grid and
    fit the empirical order of the successive differences."""
    f, w = _common_grid(f, w)
    L = cfg.richardson_levels
    if f.m % 2 ** (L - 1):
        raise GridError(f"m = {f.m} is not divisible by 2^{L - 1}")
    finals, meshes = [], []
    for k in range(L):
        s = 2**k
        finals.append(np.atleast_1d(young_integral(f.coarsen(s), w.coarsen(s), cfg).values[-1]))
        meshes.append(f.h * s)
    diffs = [float(np.linalg.norm(finals[k + 1] - finals[k])) for k in range(L - 1)]
    pos = [(h, d) for h, d in zip(meshes[:-1], diffs) if d > 0]
    order = None
    if len(pos) >= 2:
        order = float(np.polyfit(np.log([h for h, _ in pos]), np.log([d for _, d in pos]), 1)[0])
    return ConvergenceReport(meshes, [x.tolist() for x in finals], diffs, order, cfg.theta - 1)


@dataclass
class YoungLoveReport:
    bound_lhs: float  # worst local defect
    bound_rhs: float  # its right-hand side
    worst_ratio: float
    global_ratio: float
    increment_ratio: float
    satisfied: bool
    sewing_constant: float
    f_alpha: float
    f_sup: float
    w_beta: float
    per_interval: list = field(default_factory=list)

    def to_dict(self) -> dict:
        d = asdict(self)
        d["constant_choice"] = "c = (1 - 2^(1 - alpha - beta))^-1"
        return d


def verify_young_love(
    f: SampledPath, w: SampledPath, cfg: YoungConfig, n_intervals: int = 200, seed=0
) -> YoungLoveReport:
    """Check the local Young-Love defect bound on sampled subintervals and
    the global beta-Hölder bound on the indefinite integral.

    Local: |int_s^t f dw - f(s)(w(t) - w(s))| <= c |w|_beta |f|_alpha (t-s)^(alpha+beta).
    Increment: |int_s^t f dw| <= c |w|_beta (|f|_alpha T^alpha + |f|_inf) (t-s)^beta.
    Global: |int_0^. f dw|_beta <= c max(T^alpha, 1) |w|_beta N_alpha(f).
    All seminorms are grid seminorms.
    """
    f, w = _common_grid(f, w)
    F, W, _ = _shapes(f, w)
    I = young_integral(f, w, cfg)
    Iv = I.values.reshape(I.m + 1, -1)
    fa = holder_seminorm(f, cfg.alpha)
    wb = holder_seminorm(w, cfg.beta).seminorm
    c = cfg.sewing_constant
    T, h, m = f.T, f.h, f.m

    rng = np.random.default_rng(seed)
    pairs = {(0, m)}
    while len(pairs) < min(n_intervals, m * (m + 1) // 2):
        i, j = sorted(rng.choice(m + 1, size=2, replace=False))
        pairs.add((int(i), int(j)))
    per, worst, worst_inc = [], (0.0, 0.0, 0.0), 0.0
    for i, j in sorted(pairs):
        dt = (j - i) * h
        inc = Iv[j] - Iv[i]
        lhs = float(np.linalg.norm(inc - F[i] @ (W[j] - W[i])))
        rhs = c * wb * fa.seminorm * dt**cfg.theta
        ratio = lhs / rhs if rhs > 0 else (0.0 if lhs <= 1e-12 else math.inf)
        inc_rhs = c * wb * (fa.seminorm * T**cfg.alpha + fa.sup) * dt**cfg.beta
        inc_ratio = float(np.linalg.norm(inc)) / inc_rhs if inc_rhs > 0 else 0.0
        worst_inc = max(worst_inc, inc_ratio)
        per.append({"s": i * h, "t": j * h, "lhs": lhs, "rhs": rhs, "ratio": ratio})
        if ratio >= worst[2]:
            worst = (lhs, rhs, ratio)
    glob_rhs = cfg.holder_constant(T) * wb * fa.total
    glob_lhs = holder_seminorm(I, cfg.beta).seminorm
    glob_ratio = glob_lhs / glob_rhs if glob_rhs > 0 else (0.0 if glob_lhs <= 1e-12 else math.inf)
    ok = worst[2] <= 1.0 and glob_ratio <= 1.0 and worst_inc <= 1.0
    return YoungLoveReport(
        worst[0], worst[1], worst[2], glob_ratio, worst_inc, ok, c, fa.seminorm, fa.sup, wb, per
    )


def iterated_integral(w0: SampledPath, cfg: YoungConfig | None = None) -> SampledPath:
    """The planar path (w0(t), int_0^t w0 dw0) for a scalar w0."""
    if w0.values.ndim != 1:
        raise DimMismatch("iterated_integral needs a scalar path")
    second = young_integral(w0, w0, cfg).values
    return SampledPath(w0.T, np.column_stack([w0.values, second]))
