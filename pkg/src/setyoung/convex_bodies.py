"""Nonempty compact convex sets represented as polytopes.

A :class:`ConvexBody` is the convex hull of a finite vertex list. Everything
here (support functions, exposed faces, projections, Hausdorff and Demyanov
distances, Steiner points, Minkowski combinations) is exact for polytopes
except the quantities that are defined as integrals over directions, which
are Monte Carlo estimates with an explicit seed.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from functools import cached_property
from typing import NamedTuple

import numpy as np
from scipy import integrate
from scipy.spatial import ConvexHull, QhullError

from .errors import (
    DimMismatch,
    InvalidCoefficient,
    InvalidDirection,
    InvalidMeasure,
    NoCommonExposingDirection,
)

TIE_TOL = 1e-9


def unit_ball_volume(n: int) -> float:
    return math.pi ** (n / 2) / math.gamma(1 + n / 2)


def steiner_lipschitz_bracket(n: int) -> tuple[float, float]:
    """Open bracket (lower, upper) for the sharp Lipschitz constant of the
    Steiner point on convex bodies of R^n."""
    return math.sqrt(2 * n / math.pi), math.sqrt(2 * (n + 1) / math.pi)


# ---------------------------------------------------------------------------
# canonicalization helpers


def _affine_frame(P: np.ndarray, tol: float):
    origin = P.mean(axis=0)
    X = P - origin
    if len(P) == 1:
        return origin, np.zeros((0, P.shape[1]))
    _, s, vt = np.linalg.svd(X, full_matrices=False)
    thresh = tol * max(1.0, s[0])
    r = int(np.sum(s > thresh))
    return origin, vt[:r]


def _extreme_indices(P: np.ndarray, tol: float) -> np.ndarray:
    origin, basis = _affine_frame(P, tol)
    r = len(basis)
    if r == 0:
        return np.array([0])
    Q = (P - origin) @ basis.T
    if r == 1:
        q = Q[:, 0]
        return np.array(sorted({int(np.argmin(q)), int(np.argmax(q))}))
    try:
        # for r == 2 Qhull lists polygon vertices in boundary order
        return np.asarray(ConvexHull(Q).vertices)
    except QhullError:
        return np.arange(len(P))


# ---------------------------------------------------------------------------
# the body


@dataclass(frozen=True, eq=False)
class ConvexBody:
    """Convex hull of ``vertices`` (shape ``(k, n)``, k >= 1).

    Duplicate and non-extreme input points are dropped at construction, so
    ``vertices`` always holds the extreme points. For bodies of affine rank 2
    they are stored in boundary order.
    """

    vertices: np.ndarray
    tol_geom: float = 1e-10

    def __post_init__(self):
        V = np.asarray(self.vertices, dtype=float)
        if V.ndim == 1:
            V = V[None, :]
        if V.ndim != 2 or V.shape[0] == 0 or V.shape[1] == 0:
            raise ValueError("a convex body needs at least one point in R^n, n >= 1")
        if not np.all(np.isfinite(V)):
            raise ValueError("vertices must be finite")
        V = np.unique(V, axis=0)
        V = np.ascontiguousarray(V[_extreme_indices(V, self.tol_geom)])
        V.flags.writeable = False
        object.__setattr__(self, "vertices", V)

    # -- constructors -----------------------------------------------------

    @classmethod
    def point(cls, p) -> ConvexBody:
        return cls(np.atleast_1d(np.asarray(p, dtype=float))[None, :])

    @classmethod
    def interval(cls, a: float, b: float) -> ConvexBody:
        return cls(np.array([[a], [b]], dtype=float))

    @classmethod
    def box(cls, lo, hi) -> ConvexBody:
        lo, hi = np.atleast_1d(lo).astype(float), np.atleast_1d(hi).astype(float)
        n = len(lo)
        corners = np.array(np.meshgrid(*[[0, 1]] * n, indexing="ij")).reshape(n, -1).T
        return cls(lo + corners * (hi - lo))

    @classmethod
    def regular_polygon(cls, k: int, radius: float = 1.0, center=(0.0, 0.0), phase: float = 0.0):
        ang = phase + 2 * np.pi * np.arange(k) / k
        return cls(np.asarray(center, dtype=float) + radius * np.c_[np.cos(ang), np.sin(ang)])

    @classmethod
    def ball_polytope(cls, n: int, radius: float = 1.0, k: int = 12) -> ConvexBody:
        """Polytope inscribed in the radius-``radius`` ball: interval for
        n = 1, regular k-gon for n = 2, cross-polytope otherwise."""
        if n == 1:
            return cls.interval(-radius, radius)
        if n == 2:
            return cls.regular_polygon(k, radius)
        eye = np.eye(n) * radius
        return cls(np.vstack([eye, -eye]))

    @classmethod
    def from_dict(cls, d: dict) -> ConvexBody:
        V = np.asarray(d["vertices"], dtype=float)
        if V.ndim != 2 or V.shape[1] != int(d["dim"]):
            raise DimMismatch(f"declared dim {d['dim']} does not match vertices of shape {V.shape}")
        return cls(V)

    def to_dict(self) -> dict:
        return {"dim": self.dim, "vertices": self.vertices.tolist()}

    # -- basic attributes -----------------------------------------------------

    @property
    def dim(self) -> int:
        return self.vertices.shape[1]

    def __len__(self) -> int:
        return len(self.vertices)

    def __repr__(self) -> str:
        return f"ConvexBody(dim={self.dim}, n_vertices={len(self)})"

    @cached_property
    def _frame(self):
        return _affine_frame(self.vertices, self.tol_geom)

    @property
    def affine_rank(self) -> int:
        return len(self._frame[1])

    @cached_property
    def _equations(self):
        # facet inequalities A x + b <= 0, only for full-dimensional bodies
        if self.affine_rank < self.dim or self.dim < 2:
            return None
        try:
            return ConvexHull(self.vertices).equations
        except QhullError:
            return None

    @property
    def norm(self) -> float:
        """sup of |x| over the body (its Hausdorff distance to {0})."""
        return float(np.sqrt(np.max(np.sum(self.vertices**2, axis=1))))

    @property
    def diameter(self) -> float:
        V = self.vertices
        return float(np.sqrt(np.max(np.sum((V[:, None] - V[None]) ** 2, axis=-1))))

    def shifted(self, v) -> ConvexBody:
        return ConvexBody(self.vertices + np.asarray(v, dtype=float), self.tol_geom)

    def scaled(self, s: float) -> ConvexBody:
        return ConvexBody(self.vertices * float(s), self.tol_geom)

    def contains(self, p, tol: float = 1e-9) -> bool:
        return distance_to_set(p, self) <= tol

    def contains_body(self, other: ConvexBody, tol: float = 1e-9) -> bool:
        _check_dims(self, other)
        return bool(np.all(_project(self, other.vertices)[1] <= tol))

    def same_hull(self, other: ConvexBody, tol: float = 1e-9) -> bool:
        return self.contains_body(other, tol) and other.contains_body(self, tol)


def _check_dims(A: ConvexBody, B: ConvexBody):
    if A.dim != B.dim:
        raise DimMismatch(f"ambient dimensions differ: {A.dim} vs {B.dim}")


# ---------------------------------------------------------------------------
# support calculus


def support_function(C: ConvexBody, l) -> float:
    l = np.asarray(l, dtype=float).reshape(-1)
    if not np.all(np.isfinite(l)):
        raise InvalidDirection("direction has non-finite components")
    if len(l) != C.dim:
        raise DimMismatch(f"direction of length {len(l)} for a body in R^{C.dim}")
    return float(np.max(C.vertices @ l))


@dataclass(frozen=True)
class NonUnique:
    """Maximizing face Y(l, C) when it has more than one vertex."""

    vertices: np.ndarray

    def face(self) -> ConvexBody:
        return ConvexBody(self.vertices)


def exposed_point(C: ConvexBody, l, tie_tol: float = TIE_TOL):
    """Exposed point y(l, C), or :class:`NonUnique` carrying the face."""
    l = np.asarray(l, dtype=float).reshape(-1)
    if not np.all(np.isfinite(l)):
        raise InvalidDirection("direction has non-finite components")
    if len(l) != C.dim:
        raise DimMismatch(f"direction of length {len(l)} for a body in R^{C.dim}")
    nl = float(np.linalg.norm(l))
    if nl == 0.0:
        raise InvalidDirection("zero direction exposes the whole body")
    scores = C.vertices @ l
    near = scores >= scores.max() - tie_tol * nl
    if near.sum() == 1:
        return C.vertices[np.argmax(scores)].copy()
    return NonUnique(C.vertices[near].copy())


def minkowski_combine(lam: float, A: ConvexBody, nu: float, B: ConvexBody) -> ConvexBody:
    """lam*A + nu*B for lam, nu >= 0."""
    if lam < 0 or nu < 0 or not (np.isfinite(lam) and np.isfinite(nu)):
        raise InvalidCoefficient(f"Minkowski coefficients must be finite and >= 0, got {lam}, {nu}")
    _check_dims(A, B)
    pts = (lam * A.vertices)[:, None, :] + (nu * B.vertices)[None, :, :]
    return ConvexBody(pts.reshape(-1, A.dim), min(A.tol_geom, B.tol_geom))


# ---------------------------------------------------------------------------
# projections and distances


def _affine_min(Q: np.ndarray) -> np.ndarray:
    k = len(Q)
    K = np.zeros((k + 1, k + 1))
    K[:k, :k] = Q @ Q.T
    K[:k, k] = K[k, :k] = 1.0
    rhs = np.zeros(k + 1)
    rhs[k] = 1.0
    return np.linalg.lstsq(K, rhs, rcond=None)[0][:k]


def min_norm_point(P: np.ndarray, max_iter: int = 500) -> np.ndarray:
    """Point of smallest norm in conv(P), by Wolfe's algorithm."""
    scale = max(1.0, float(np.max(np.sum(P * P, axis=1))))
    eps = 1e-14
    S = [int(np.argmin(np.sum(P * P, axis=1)))]
    lam = np.array([1.0])
    x = P[S[0]].copy()
    for _ in range(max_iter):
        g = P @ x
        j = int(np.argmin(g))
        if x @ x - g[j] <= 1e-13 * scale or j in S:
            break
        S.append(j)
        lam = np.append(lam, 0.0)
        for _ in range(len(P) + 2):
            mu = _affine_min(P[S])
            if np.all(mu > eps):
                lam = mu
                break
            neg = mu <= eps
            theta = min(1.0, float(np.min(lam[neg] / (lam[neg] - mu[neg]))))
            lam = theta * mu + (1.0 - theta) * lam
            keep = lam > eps
            S = [s for s, kp in zip(S, keep) if kp]
            lam = lam[keep] / lam[keep].sum()
        x = lam @ P[S]
    return x


def _project_polygon(V: np.ndarray, X: np.ndarray):
    A = V
    E = np.roll(V, -1, axis=0) - A
    area2 = np.sum(A[:, 0] * np.roll(A[:, 1], -1) - np.roll(A[:, 0], -1) * A[:, 1])
    orient = 1.0 if area2 >= 0 else -1.0
    rel = X[:, None, :] - A[None]
    cross = orient * (E[None, :, 0] * rel[..., 1] - E[None, :, 1] * rel[..., 0])
    elen = np.sqrt(np.sum(E * E, axis=1))
    inside = np.all(cross >= -1e-13 * np.maximum(elen, 1.0), axis=1)
    t = np.clip(np.sum(rel * E[None], axis=-1) / np.sum(E * E, axis=1)[None], 0.0, 1.0)
    P = A[None] + t[..., None] * E[None]
    d2 = np.sum((X[:, None, :] - P) ** 2, axis=-1)
    j = np.argmin(d2, axis=1)
    proj = P[np.arange(len(X)), j]
    proj[inside] = X[inside]
    return proj


def _project(C: ConvexBody, X) -> tuple[np.ndarray, np.ndarray]:
    """Euclidean projections of the rows of X onto C, and the distances."""
    X = np.atleast_2d(np.asarray(X, dtype=float))
    if X.shape[1] != C.dim:
        raise DimMismatch(f"points in R^{X.shape[1]} vs body in R^{C.dim}")
    if not np.all(np.isfinite(X)):
        raise ValueError("points must be finite")
    V = C.vertices
    r = C.affine_rank
    if r == 0:
        proj = np.broadcast_to(V[0], X.shape).copy()
    elif r == 1:
        a, b = V[0], V[1]
        e = b - a
        t = np.clip((X - a) @ e / (e @ e), 0.0, 1.0)
        proj = a + t[:, None] * e
    elif r == 2:
        origin, basis = C._frame
        q = (X - origin) @ basis.T
        pq = _project_polygon((V - origin) @ basis.T, q)
        proj = origin + pq @ basis
    else:
        proj = np.empty_like(X)
        todo = np.ones(len(X), dtype=bool)
        eq = C._equations
        if eq is not None:
            inside = np.all(X @ eq[:, :-1].T + eq[:, -1] <= 1e-12, axis=1)
            proj[inside] = X[inside]
            todo = ~inside
        for i in np.flatnonzero(todo):
            proj[i] = X[i] + min_norm_point(V - X[i])
    dist = np.sqrt(np.sum((X - proj) ** 2, axis=1))
    return proj, dist


def project(p, C: ConvexBody) -> np.ndarray:
    """Nearest point of C to p."""
    return _project(C, np.asarray(p, dtype=float).reshape(1, -1))[0][0]


def distance_to_set(p, C: ConvexBody) -> float:
    return float(_project(C, np.asarray(p, dtype=float).reshape(1, -1))[1][0])


def distances_to_set(X, C: ConvexBody) -> np.ndarray:
    """Vectorized :func:`distance_to_set` over the rows of X."""
    return _project(C, X)[1]


def hausdorff_distance(A: ConvexBody, B: ConvexBody) -> float:
    _check_dims(A, B)
    # distance to a convex set is convex, so vertex maxima suffice
    dab = _project(B, A.vertices)[1].max()
    dba = _project(A, B.vertices)[1].max()
    return float(max(dab, dba))


# ---------------------------------------------------------------------------
# directions and measures


def _uniform_ball(rng: np.random.Generator, size: int, n: int) -> np.ndarray:
    g = rng.standard_normal((size, n))
    g /= np.linalg.norm(g, axis=1, keepdims=True)
    return g * rng.random(size)[:, None] ** (1.0 / n)


def _uniform_sphere(rng: np.random.Generator, size: int, n: int) -> np.ndarray:
    g = rng.standard_normal((size, n))
    return g / np.linalg.norm(g, axis=1, keepdims=True)


@dataclass(frozen=True)
class SmoothBallMeasure:
    """Probability measure with a C^1 density on the closed unit ball.

    ``kind="uniform"`` has density 1/v_n. ``kind="bump"`` has density
    proportional to (1 - |x - center|^2 / rho^2)_+^2 with rho = 1/concentration;
    its support must lie inside the unit ball so that the density stays C^1
    on the ball and the normalizer has a closed form.
    """

    kind: str = "uniform"
    center: tuple | None = None
    concentration: float | None = None

    def __post_init__(self):
        if self.kind == "uniform":
            return
        if self.kind != "bump":
            raise InvalidMeasure(f"unknown measure kind {self.kind!r}")
        if self.center is None or self.concentration is None:
            raise InvalidMeasure("a bump measure needs a center and a concentration")
        c = np.asarray(self.center, dtype=float).reshape(-1)
        object.__setattr__(self, "center", tuple(float(v) for v in c))
        if not np.all(np.isfinite(c)) or not (self.concentration > 0):
            raise InvalidMeasure("bump center must be finite and concentration positive")
        if np.linalg.norm(c) + 1.0 / self.concentration > 1.0 + 1e-12:
            raise InvalidMeasure(
                f"bump support B(c, {1.0 / self.concentration:g}) leaves the unit ball; "
                "increase the concentration or move the center inward"
            )

    @classmethod
    def uniform(cls) -> SmoothBallMeasure:
        return cls("uniform")

    @classmethod
    def bump(cls, center, concentration: float) -> SmoothBallMeasure:
        return cls("bump", tuple(np.asarray(center, dtype=float).tolist()), float(concentration))

    @classmethod
    def from_dict(cls, d: dict) -> SmoothBallMeasure:
        if d.get("kind") == "bump":
            return cls.bump(d["center"], d["concentration"])
        return cls(d.get("kind", "uniform"))

    def to_dict(self) -> dict:
        if self.kind == "uniform":
            return {"kind": "uniform"}
        return {"kind": "bump", "center": list(self.center), "concentration": self.concentration}

    @property
    def radius(self) -> float:
        return 1.0 if self.kind == "uniform" else 1.0 / self.concentration

    def _check_dim(self, n: int):
        if self.kind == "bump" and len(self.center) != n:
            raise DimMismatch(f"bump center in R^{len(self.center)} used in R^{n}")

    def normalizer(self, n: int) -> float:
        """Integral over the ball of the unnormalized density; the closed form
        is cross-checked against radial quadrature to 1e-6."""
        self._check_dim(n)
        vn = unit_ball_volume(n)
        if self.kind == "uniform":
            return vn
        rho = self.radius
        closed = rho**n * vn * 8.0 / ((n + 2) * (n + 4))
        radial, _ = integrate.quad(lambda s: (1 - s * s) ** 2 * s ** (n - 1), 0.0, 1.0)
        quad = n * vn * rho**n * radial
        if abs(quad / closed - 1.0) > 1e-6:
            raise InvalidMeasure("bump density fails the normalization check")
        return closed

    def density(self, x) -> np.ndarray:
        x = np.atleast_2d(np.asarray(x, dtype=float))
        n = x.shape[1]
        inball = np.sum(x * x, axis=1) <= 1.0 + 1e-15
        if self.kind == "uniform":
            return np.where(inball, 1.0 / unit_ball_volume(n), 0.0)
        c = np.asarray(self.center)
        u = 1.0 - np.sum((x - c) ** 2, axis=1) / self.radius**2
        return np.where(inball, np.clip(u, 0.0, None) ** 2, 0.0) / self.normalizer(n)

    def sample(self, n: int, size: int, rng: np.random.Generator) -> np.ndarray:
        self._check_dim(n)
        if self.kind == "uniform":
            return _uniform_ball(rng, size, n)
        out = []
        got = 0
        c = np.asarray(self.center)
        while got < size:
            y = _uniform_ball(rng, max(64, 2 * (size - got) * (n + 2) * (n + 4) // 8), n)
            acc = rng.random(len(y)) < (1.0 - np.sum(y * y, axis=1)) ** 2
            y = y[acc][: size - got]
            out.append(c + self.radius * y)
            got += len(y)
        return np.vstack(out)


# ---------------------------------------------------------------------------
# Steiner points


class SteinerEstimate(NamedTuple):
    point: np.ndarray
    stderr: np.ndarray


def steiner_point_exact(C: ConvexBody) -> np.ndarray | None:
    """Exact Steiner point for bodies of affine rank <= 2, else None.

    In the plane of a polygon the Steiner point is the vertex average weighted
    by exterior angles (each normal cone's share of the full turn). The
    Steiner point is intrinsic, so this also holds for planar faces of
    higher-dimensional bodies.
    """
    V = C.vertices
    r = C.affine_rank
    if r == 0:
        return V[0].copy()
    if r == 1:
        return V.mean(axis=0)
    if r > 2:
        return None
    origin, basis = C._frame
    Q = (V - origin) @ basis.T
    e_in = Q - np.roll(Q, 1, axis=0)
    e_out = np.roll(Q, -1, axis=0) - Q
    turn = np.abs(
        np.arctan2(
            e_in[:, 0] * e_out[:, 1] - e_in[:, 1] * e_out[:, 0],
            np.sum(e_in * e_out, axis=1),
        )
    )
    return (turn / turn.sum()) @ V


def _top_two(scores: np.ndarray):
    idx = np.argmax(scores, axis=1)
    best = scores[np.arange(len(scores)), idx]
    if scores.shape[1] == 1:
        return idx, best, np.full_like(best, -np.inf)
    second = np.partition(scores, -2, axis=1)[:, -2]
    return idx, best, second


def _face_steiner(vertices: np.ndarray, seed: int) -> np.ndarray:
    face = ConvexBody(vertices)
    exact = steiner_point_exact(face)
    if exact is not None:
        return exact
    return steiner_point(face, 4096, seed).point


@dataclass(frozen=True, eq=False)
class DirectionSample:
    """A fixed draw of points x_i from a measure on the unit ball.

    ``estimate(C)`` averages St(Y(x_i, C)). Reusing one sample across bodies
    (common random numbers) makes the estimate a deterministic selection:
    a convex combination of points of C, so it always lies in C.
    """

    points: np.ndarray
    tie_tol: float = TIE_TOL
    seed: int = 0

    @classmethod
    def draw(cls, mu: SmoothBallMeasure, n: int, n_samples: int, rng_seed=0, tie_tol=TIE_TOL):
        rng = np.random.default_rng(rng_seed)
        return cls(mu.sample(n, n_samples, rng), tie_tol, int(np.random.SeedSequence(rng_seed).generate_state(1)[0]))

    def values(self, C: ConvexBody) -> np.ndarray:
        X = self.points
        if X.shape[1] != C.dim:
            raise DimMismatch(f"sample in R^{X.shape[1]} vs body in R^{C.dim}")
        V = C.vertices
        if len(V) == 1:
            return np.broadcast_to(V[0], X.shape).copy()
        scores = X @ V.T
        idx, best, second = _top_two(scores)
        out = V[idx]
        ties = np.flatnonzero(best - second <= self.tie_tol * np.linalg.norm(X, axis=1))
        for i in ties:
            face = V[scores[i] >= best[i] - self.tie_tol * np.linalg.norm(X[i])]
            out[i] = _face_steiner(face, self.seed + int(i))
        return out

    def estimate(self, C: ConvexBody) -> SteinerEstimate:
        vals = self.values(C)
        N = len(vals)
        se = vals.std(axis=0, ddof=1) / math.sqrt(N) if N > 1 else np.zeros(C.dim)
        return SteinerEstimate(vals.mean(axis=0), se)


def steiner_point(C: ConvexBody, n_samples: int = 100_000, rng_seed=0) -> SteinerEstimate:
    """Monte Carlo Steiner point: the average exposed point over directions
    drawn uniformly in the unit ball. Tie directions are redrawn."""
    if n_samples < 1:
        raise ValueError("n_samples must be >= 1")
    V = C.vertices
    n = C.dim
    if len(V) == 1:
        return SteinerEstimate(V[0].copy(), np.zeros(n))
    rng = np.random.default_rng(rng_seed)
    X = _uniform_ball(rng, n_samples, n)
    pts = np.empty((n_samples, n))
    todo = np.arange(n_samples)
    for _ in range(100):
        scores = X[todo] @ V.T
        idx, best, second = _top_two(scores)
        ok = best - second > TIE_TOL * np.linalg.norm(X[todo], axis=1)
        pts[todo[ok]] = V[idx[ok]]
        todo = todo[~ok]
        if len(todo) == 0:
            break
        X[todo] = _uniform_ball(rng, len(todo), n)
    else:  # pragma: no cover - needs ~100 consecutive measure-zero hits
        raise RuntimeError("could not draw non-tie directions")
    se = pts.std(axis=0, ddof=1) / math.sqrt(n_samples) if n_samples > 1 else np.zeros(n)
    return SteinerEstimate(pts.mean(axis=0), se)


def generalized_steiner_point(
    C: ConvexBody, mu: SmoothBallMeasure, n_samples: int = 100_000, rng_seed=0
) -> SteinerEstimate:
    """Monte Carlo estimate of St_mu(C) = int St(Y(x, C)) mu(dx)."""
    if n_samples < 1:
        raise ValueError("n_samples must be >= 1")
    return DirectionSample.draw(mu, C.dim, n_samples, rng_seed).estimate(C)


# ---------------------------------------------------------------------------
# Demyanov distance


class DemyanovEstimate(NamedTuple):
    value: float
    n_accepted: int
    support_gap: float  # max over the same directions of |h_A - h_B|


def demyanov_estimate(
    A: ConvexBody, B: ConvexBody, n_dirs: int = 2000, rng_seed=0, tie_tol: float = TIE_TOL
) -> DemyanovEstimate:
    """Lower estimate of the Demyanov distance from sampled unit directions.

    Directions that expose a face rather than a point of A or B are dropped.
    ``support_gap`` is the support-function discrepancy on the same sample,
    a lower estimate of the Hausdorff distance that the returned value always
    dominates.
    """
    _check_dims(A, B)
    if n_dirs < 1:
        raise ValueError("n_dirs must be >= 1")
    L = _uniform_sphere(np.random.default_rng(rng_seed), n_dirs, A.dim)
    sa, sb = L @ A.vertices.T, L @ B.vertices.T
    ia, ba, qa = _top_two(sa)
    ib, bb, qb = _top_two(sb)
    ok = (ba - qa > tie_tol) & (bb - qb > tie_tol)
    if not np.any(ok):
        raise NoCommonExposingDirection("no sampled direction exposes a point of both bodies")
    gaps = np.linalg.norm(A.vertices[ia[ok]] - B.vertices[ib[ok]], axis=1)
    return DemyanovEstimate(float(gaps.max()), int(ok.sum()), float(np.max(np.abs(ba - bb)[ok])))


def demyanov_distance(A: ConvexBody, B: ConvexBody, n_dirs: int = 2000, rng_seed=0, tie_tol=TIE_TOL) -> float:
    return demyanov_estimate(A, B, n_dirs, rng_seed, tie_tol).value


def random_polytope(rng: np.random.Generator, n: int, k: int | None = None, scale: float = 1.0) -> ConvexBody:
    """Hull of k Gaussian points around a random center (test/experiment helper)."""
    k = k if k is not None else rng.integers(1, 2 * n + 4)
    return ConvexBody(rng.normal(size=n) * scale + rng.normal(size=(k, n)) * scale)
