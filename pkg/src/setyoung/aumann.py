"""Set-valued paths, certified selection families and the Aumann-Young integral.

The integral of a multifunction F against a signal w is the set of Young
integrals of the selections of F whose alpha-Hölder seminorm is at most r.
Here that set is approximated from inside by a finite family of certified
selections (Steiner, generalized Steiner and projection selections); the hull
of their integrals is convex by construction and is reported together with
an outer radius from the Young-Love estimate.
"""

from __future__ import annotations

import json
import math
import warnings
from dataclasses import dataclass, field
from typing import NamedTuple

import numpy as np

from .convex_bodies import (
    TIE_TOL,
    ConvexBody,
    DirectionSample,
    SmoothBallMeasure,
    _top_two,
    _uniform_sphere,
    distances_to_set,
    hausdorff_distance,
    minkowski_combine,
    _project,
    project,
    steiner_lipschitz_bracket,
    steiner_point_exact,
)
from .errors import DimMismatch, EmptyFamily, GridError, InvalidExponent, ResolutionWarning
from .paths import SampledPath, holder_seminorm, pairwise_holder_max
from .young import YoungConfig, young_integral

TOL_MEMBERSHIP = 1e-8
TOL_SEMINORM = 1e-9
DEFAULT_N_MEASURES = 32
DEFAULT_N_ANCHORS = 64


def _check_alpha(alpha: float):
    if not (0 < alpha <= 1):
        raise InvalidExponent(f"Hölder exponent must lie in (0, 1], got {alpha}")


# ---------------------------------------------------------------------------
# set-valued paths


@dataclass(frozen=True, eq=False)
class SetValuedPath:
    """Convex bodies F(t_0), ..., F(t_m) on the uniform grid of [0, T].

    Between nodes F is the Minkowski convex combination of the neighbouring
    node bodies. ``shape = (e, d)`` records that the bodies live in M_{e,d}
    flattened row-major to R^{e*d}; ``None`` means plain vectors.
    """

    T: float
    bodies: tuple
    shape: tuple | None = None

    def __post_init__(self):
        bodies = tuple(self.bodies)
        if len(bodies) < 2:
            raise GridError("a set-valued path needs at least two nodes")
        if not (self.T > 0 and math.isfinite(self.T)):
            raise GridError(f"horizon must be positive and finite, got {self.T}")
        n = bodies[0].dim
        if any(B.dim != n for B in bodies):
            raise DimMismatch("all node bodies must live in the same space")
        if self.shape is not None:
            shape = tuple(int(s) for s in self.shape)
            if len(shape) != 2 or shape[0] * shape[1] != n:
                raise DimMismatch(f"matrix shape {shape} does not flatten to R^{n}")
            object.__setattr__(self, "shape", shape)
        object.__setattr__(self, "T", float(self.T))
        object.__setattr__(self, "bodies", bodies)

    @classmethod
    def from_function(cls, fn, T: float, m: int, shape=None) -> SetValuedPath:
        return cls(T, tuple(fn(t) for t in np.linspace(0.0, T, m + 1)), shape)

    @classmethod
    def constant(cls, C: ConvexBody, T: float, m: int, shape=None) -> SetValuedPath:
        return cls(T, (C,) * (m + 1), shape)

    @property
    def m(self) -> int:
        return len(self.bodies) - 1

    @property
    def h(self) -> float:
        return self.T / self.m

    @property
    def grid(self) -> np.ndarray:
        return np.linspace(0.0, self.T, self.m + 1)

    @property
    def dim(self) -> int:
        return self.bodies[0].dim

    def __len__(self) -> int:
        return len(self.bodies)

    def __getitem__(self, i) -> ConvexBody:
        return self.bodies[i]

    def __call__(self, t: float) -> ConvexBody:
        s = min(max(t / self.h, 0.0), self.m)
        i = min(int(math.floor(s)), self.m - 1)
        lam = s - i
        if lam == 0.0:
            return self.bodies[i]
        if lam == 1.0:
            return self.bodies[i + 1]
        return minkowski_combine(1.0 - lam, self.bodies[i], lam, self.bodies[i + 1])

    def sup_norm(self) -> float:
        return max(B.norm for B in self.bodies)

    def max_rank(self) -> int:
        return max(B.affine_rank for B in self.bodies)

    def hausdorff_seminorm(self, alpha: float, max_lag: int | None = None) -> float:
        """Grid alpha-Hölder seminorm in the Hausdorff metric (all node pairs
        unless ``max_lag`` limits the index gap)."""
        _check_alpha(alpha)
        best = 0.0
        top = self.m if max_lag is None else min(self.m, max_lag)
        for k in range(1, top + 1):
            scale = (k * self.h) ** alpha
            for i in range(self.m + 1 - k):
                A, B = self.bodies[i], self.bodies[i + k]
                if A is B:
                    continue
                best = max(best, hausdorff_distance(A, B) / scale)
        return best

    def _direction_tables(self, n_dirs: int, rng_seed, tie_tol: float = TIE_TOL):
        L = _uniform_sphere(np.random.default_rng(rng_seed), n_dirs, self.dim)
        S, E, ok = [], [], []
        for B in self.bodies:
            sc = L @ B.vertices.T
            idx, best, second = _top_two(sc)
            S.append(best)
            E.append(B.vertices[idx])
            ok.append(best - second > tie_tol)
        return np.array(S), np.array(E), np.array(ok)

    def demyanov_seminorm(self, alpha: float, n_dirs: int = 512, rng_seed=0, max_lag=None) -> float:
        """Monte Carlo estimate of the grid alpha-Hölder seminorm in the
        Demyanov metric, with one direction sample shared by all node pairs.
        Directions exposing a face of either body are skipped for that pair."""
        _check_alpha(alpha)
        _, E, ok = self._direction_tables(n_dirs, rng_seed)
        best = 0.0
        top = self.m if max_lag is None else min(self.m, max_lag)
        for k in range(1, top + 1):
            both = ok[k:] & ok[:-k]
            if not both.any():
                continue
            gap = np.linalg.norm(E[k:] - E[:-k], axis=2)
            best = max(best, float(np.max(np.where(both, gap, 0.0))) / (k * self.h) ** alpha)
        return best

    def support_seminorm(self, alpha: float, n_dirs: int = 512, rng_seed=0) -> float:
        """Lower estimate of the Hausdorff seminorm from support functions on
        a shared direction sample (cheap; used for the r_min warning)."""
        _check_alpha(alpha)
        S, _, _ = self._direction_tables(n_dirs, rng_seed)
        return _sup_pairwise(S, self.h, alpha)

    def to_dict(self) -> dict:
        return {
            "T": self.T,
            "shape": list(self.shape) if self.shape else None,
            "bodies": [B.to_dict() for B in self.bodies],
        }

    @classmethod
    def from_dict(cls, d: dict) -> SetValuedPath:
        return cls(float(d["T"]), tuple(ConvexBody.from_dict(b) for b in d["bodies"]), d.get("shape"))

    def to_json(self, path) -> None:
        with open(path, "w") as fh:
            json.dump(self.to_dict(), fh, sort_keys=True)

    @classmethod
    def from_json(cls, path) -> SetValuedPath:
        with open(path) as fh:
            return cls.from_dict(json.load(fh))


def _sup_pairwise(S: np.ndarray, h: float, alpha: float) -> float:
    """max over node pairs of max_l |S_j(l) - S_i(l)| / ((j - i) h)^alpha."""
    m = len(S) - 1
    best = 0.0
    for k in range(1, m + 1):
        best = max(best, float(np.max(np.abs(S[k:] - S[:-k]))) / (k * h) ** alpha)
    return best


class RMinEstimate(NamedTuple):
    value: float
    steiner_term: float  # Lipschitz bracket times the Hausdorff seminorm
    demyanov_term: float
    lipschitz_constant: float


def r_min_estimate(F: SetValuedPath, alpha: float, n_dirs: int = 512, rng_seed=0, exact_hausdorff: bool = True):
    """Smallest budget for which the Steiner-type recipes are guaranteed to
    give selections: min(L * |F|_alpha, |F|_alpha,Demyanov) with
    L = sqrt(2 (n + 1) / pi).

    With ``exact_hausdorff=False`` the Hausdorff seminorm is replaced by its
    cheap support-function lower estimate.
    """
    _check_alpha(alpha)
    L = steiner_lipschitz_bracket(F.dim)[1]
    haus = F.hausdorff_seminorm(alpha) if exact_hausdorff else F.support_seminorm(alpha, n_dirs, rng_seed)
    dem = F.demyanov_seminorm(alpha, n_dirs, rng_seed)
    st = L * haus
    return RMinEstimate(min(st, dem), st, dem, L)


# ---------------------------------------------------------------------------
# selection families


@dataclass
class SelectionFamily:
    """Finite set of certified selections of a set-valued path.

    Every member lies in F(t_i) at every node (within ``TOL_MEMBERSHIP``)
    and has grid alpha-seminorm at most r. Members are stored flattened,
    values of shape (m + 1, n).
    """

    members: list
    r: float
    alpha: float
    provenance: list
    seminorms: list
    rejection_log: list = field(default_factory=list)
    shape: tuple | None = None

    def __len__(self) -> int:
        return len(self.members)

    def values_at(self, i: int) -> np.ndarray:
        return np.array([f.values[i] for f in self.members])

    def hull_at(self, i: int) -> ConvexBody:
        return ConvexBody(self.values_at(i))

    def subset(self, idx) -> SelectionFamily:
        idx = list(idx)
        return SelectionFamily(
            [self.members[i] for i in idx],
            self.r,
            self.alpha,
            [self.provenance[i] for i in idx],
            [self.seminorms[i] for i in idx],
            list(self.rejection_log),
            self.shape,
        )

    def restrict_budget(self, r: float) -> SelectionFamily:
        """Members certified at the smaller budget r."""
        if r > self.r + TOL_SEMINORM:
            raise ValueError(f"cannot raise the budget from {self.r} to {r} without re-certifying")
        fam = self.subset(i for i, s in enumerate(self.seminorms) if s <= r + TOL_SEMINORM)
        fam.r = float(r)
        return fam

    def with_member(self, f: SampledPath, tag: str, F: SetValuedPath) -> SelectionFamily:
        """Certify one more candidate against F and add it if it passes."""
        fam = SelectionFamily(
            list(self.members), self.r, self.alpha, list(self.provenance), list(self.seminorms),
            list(self.rejection_log), self.shape,
        )
        _certify(F, f, tag, self.alpha, self.r, fam)
        return fam


def _groups(F: SetValuedPath) -> dict:
    """Node indices sharing one body object."""
    g = {}
    for i, B in enumerate(F.bodies):
        g.setdefault(id(B), (B, []))[1].append(i)
    return g


def _node_map(F: SetValuedPath, fn) -> np.ndarray:
    """Evaluate fn once per distinct body object and spread over the nodes."""
    out = np.empty((F.m + 1, F.dim))
    for B, idx in _groups(F).values():
        out[idx] = fn(B)
    return out


def _certify_many(F: SetValuedPath, candidates: list, alpha: float, r: float, fam: SelectionFamily):
    """Append every (tag, path) candidate that passes membership and the
    seminorm budget to ``fam``; log the others."""
    if not candidates:
        return
    X = np.array([f.values.reshape(F.m + 1, -1) for _, f in candidates])
    if X.shape[2] != F.dim:
        raise DimMismatch(f"selection in R^{X.shape[2]} for bodies in R^{F.dim}")
    miss = np.zeros(len(candidates))
    for B, idx in _groups(F).values():
        pts = X[:, idx].reshape(-1, F.dim)
        miss = np.maximum(miss, _project(B, pts)[1].reshape(len(candidates), -1).max(axis=1))
    for (tag, _), Xc, mi in zip(candidates, X, miss):
        if mi > TOL_MEMBERSHIP:
            fam.rejection_log.append({"provenance": tag, "reason": "membership", "value": float(mi)})
            continue
        semi = pairwise_holder_max(Xc, F.h, alpha)
        if semi > r + TOL_SEMINORM:
            fam.rejection_log.append({"provenance": tag, "reason": "seminorm", "value": semi, "r": r})
        else:
            fam.members.append(SampledPath(F.T, Xc))
            fam.provenance.append(tag)
            fam.seminorms.append(semi)


def _certify(F: SetValuedPath, f: SampledPath, tag: str, alpha: float, r: float, fam: SelectionFamily):
    _certify_many(F, [(tag, f)], alpha, r, fam)


def steiner_selection(F: SetValuedPath, n_samples: int = 4000, rng_seed=0) -> tuple[SampledPath, str]:
    """Node-wise Steiner points: exact when every node has affine rank <= 2,
    otherwise a common-random-numbers Monte Carlo estimate."""
    if F.max_rank() <= 2:
        return SampledPath(F.T, _node_map(F, steiner_point_exact)), "steiner"
    sample = DirectionSample.draw(SmoothBallMeasure.uniform(), F.dim, n_samples, rng_seed)
    return SampledPath(F.T, _node_map(F, lambda B: sample.estimate(B).point)), "steiner"


def generalized_steiner_selection(
    F: SetValuedPath, mu: SmoothBallMeasure, n_samples: int = 2000, rng_seed=0
) -> SampledPath:
    """t -> St_mu(F(t)) with one direction sample reused at every node, so the
    result is an exact selection (each value is a convex combination of
    vertices of the node body)."""
    sample = DirectionSample.draw(mu, F.dim, n_samples, rng_seed)
    return SampledPath(F.T, _node_map(F, lambda B: sample.estimate(B).point))


def projection_selection(F: SetValuedPath, anchor: SampledPath) -> SampledPath:
    """t -> proj_{F(t)}(a(t))."""
    A = anchor.resample(F.m) if anchor.m != F.m else anchor
    X = A.values.reshape(F.m + 1, -1)
    if X.shape[1] != F.dim:
        raise DimMismatch(f"anchor in R^{X.shape[1]} for bodies in R^{F.dim}")
    return SampledPath(F.T, np.array([project(x, B) for x, B in zip(X, F.bodies)]))


def _batched_generalized_steiner(F: SetValuedPath, measures, n_samples: int, seeds) -> list:
    """generalized_steiner_selection for several measures, one pass over the nodes."""
    if not measures:
        return []
    samples = [DirectionSample.draw(mu, F.dim, n_samples, sd) for mu, sd in zip(measures, seeds)]
    out = np.empty((len(measures), F.m + 1, F.dim))
    for B, idx in _groups(F).values():
        for j, smp in enumerate(samples):
            out[j, idx] = smp.estimate(B).point
    return [SampledPath(F.T, X) for X in out]


def _batched_projections(F: SetValuedPath, anchors) -> list:
    """projection_selection for several anchors, one projection call per node."""
    if not anchors:
        return []
    A = np.array([(a.resample(F.m) if a.m != F.m else a).values.reshape(F.m + 1, -1) for a in anchors])
    if A.shape[2] != F.dim:
        raise DimMismatch(f"anchors in R^{A.shape[2]} for bodies in R^{F.dim}")
    out = np.empty_like(A)
    for i, B in enumerate(F.bodies):
        out[:, i] = _project(B, A[:, i])[0]
    return [SampledPath(F.T, X) for X in out]


def default_measures(n: int, count: int = DEFAULT_N_MEASURES, rng_seed=0, concentration: float = 4.0):
    """Bump measures centered at s*u with u uniform on the sphere and s uniform
    in [0, 1 - 1/concentration]."""
    rng = np.random.default_rng(rng_seed)
    u = _uniform_sphere(rng, count, n)
    s = rng.uniform(0.0, 1.0 - 1.0 / concentration, size=count)
    return [SmoothBallMeasure.bump(c, concentration) for c in u * s[:, None]]


def default_anchors(F: SetValuedPath, count: int = DEFAULT_N_ANCHORS, rng_seed=0, enlarge: float = 1.5):
    """Constant anchors drawn uniformly in the bounding box of F enlarged by
    the factor ``enlarge`` about its center."""
    V = np.vstack([B.vertices for B in F.bodies])
    lo, hi = V.min(axis=0), V.max(axis=0)
    mid, half = 0.5 * (lo + hi), 0.5 * enlarge * (hi - lo) + 1e-12
    pts = np.random.default_rng(rng_seed).uniform(mid - half, mid + half, size=(count, F.dim))
    return [SampledPath(F.T, np.tile(p, (F.m + 1, 1))) for p in pts]


def build_selection_family(
    F: SetValuedPath,
    alpha: float,
    r: float,
    measures=None,
    anchors=None,
    rng_seed=0,
    n_samples: int = 2000,
    include_steiner: bool = True,
    check_r_min: bool = True,
) -> SelectionFamily:
    """Candidate selections of F, each kept iff it is certified as a member of
    the class of selections with grid alpha-seminorm at most r.

    Candidates: the Steiner selection, one generalized Steiner selection per
    measure and one projection selection per anchor path. ``None`` picks the
    default budgets (32 bump measures, 64 constant anchors); pass ``[]`` to
    skip a recipe. Rejected candidates are logged, never repaired.
    """
    _check_alpha(alpha)
    if not (r >= 0 and math.isfinite(r)):
        raise ValueError(f"budget r must be finite and >= 0, got {r}")
    if measures is None:
        measures = default_measures(F.dim, rng_seed=rng_seed)
    if anchors is None:
        anchors = default_anchors(F, rng_seed=rng_seed)
    if check_r_min:
        est = r_min_estimate(F, alpha, rng_seed=rng_seed, exact_hausdorff=False)
        if r < est.value:
            warnings.warn(
                f"r = {r:g} is below the estimated minimal budget {est.value:g}; the family may be empty",
                stacklevel=2,
            )
    fam = SelectionFamily([], float(r), float(alpha), [], [], [], F.shape)
    seeds = [int(q.generate_state(1)[0]) for q in np.random.SeedSequence(rng_seed).spawn(len(measures) + 1)]
    cands = []
    if include_steiner:
        f, tag = steiner_selection(F, rng_seed=seeds[0])
        cands.append((tag, f))
    cands += [(f"generalized_steiner({j})", f)
              for j, f in enumerate(_batched_generalized_steiner(F, measures, n_samples, seeds[1:]))]
    cands += [(f"projection_anchor({j})", f) for j, f in enumerate(_batched_projections(F, anchors))]
    _certify_many(F, cands, alpha, r, fam)
    if not fam.members:
        raise EmptyFamily(
            f"no candidate selection passed certification at r = {r:g}; "
            f"{len(fam.rejection_log)} rejected (first: {fam.rejection_log[:1]})"
        )
    return fam


# ---------------------------------------------------------------------------
# integrals


def _matrix_path(f: SampledPath, w: SampledPath, shape) -> SampledPath:
    """Restore the M_{e,d} structure of a flattened member for integration."""
    d = int(np.prod(w.value_shape)) if w.value_shape else 1
    n = f.values.shape[1]
    if shape is not None:
        e, dd = shape
        if dd != d:
            raise DimMismatch(f"bodies in M_{{{e},{dd}}} against a signal in R^{d}")
    elif n % d:
        raise DimMismatch(f"bodies in R^{n} cannot be read as e x {d} matrices")
    else:
        e = n // d
    return SampledPath(f.T, f.values.reshape(f.m + 1, e, d))


def _check_family(family: SelectionFamily, cfg: YoungConfig, r: float):
    if not family.members:
        raise EmptyFamily("empty selection family")
    if abs(family.alpha - cfg.alpha) > 1e-12:
        raise InvalidExponent(f"family certified at alpha = {family.alpha}, integrating at {cfg.alpha}")
    if family.r > r + TOL_SEMINORM:
        raise ValueError(f"family certified for r = {family.r}, larger than the requested r = {r}")


def _member_integrals(family: SelectionFamily, w: SampledPath, cfg: YoungConfig) -> np.ndarray:
    """Array (k, m + 1, e) of indefinite integrals of every member."""
    out = []
    for f in family.members:
        I = young_integral(_matrix_path(f, w, family.shape), w, cfg)
        out.append(I.values.reshape(I.m + 1, -1))
    return np.array(out)


def young_love_radius(cfg: YoungConfig, T: float, w_beta: float, r: float, F_sup: float) -> float:
    """c T^beta max(T^alpha, 1) |w|_beta (r + |F|_inf), the outer radius of
    the integral set."""
    return cfg.holder_constant(T) * T**cfg.beta * w_beta * (r + F_sup)


def increment_constant(cfg: YoungConfig, T: float, w_beta: float, r: float, F_sup: float) -> float:
    """Hölder constant of the indefinite integral in the Hausdorff metric:
    c max(T^alpha, 1) (|F|_inf + r) |w|_beta."""
    return cfg.holder_constant(T) * (F_sup + r) * w_beta


def rho_w(cfg: YoungConfig, T: float, w_beta: float, r: float, F_sup: float) -> float:
    """Bound on the alpha-seminorm of the indefinite integral:
    increment_constant * T^(beta - alpha)."""
    return increment_constant(cfg, T, w_beta, r, F_sup) * T ** (cfg.beta - cfg.alpha)


@dataclass
class AumannYoungResult:
    """Inner estimate of the integral set with an outer Young-Love radius."""

    hull: ConvexBody
    values: np.ndarray
    radius_bound: float
    family_size: int
    rejection_log: list
    provenance: list

    def to_dict(self) -> dict:
        return {
            "hull_vertices": self.hull.vertices.tolist(),
            "radius_bound": self.radius_bound,
            "family_size": self.family_size,
            "rejection_log": self.rejection_log,
            "provenance": self.provenance,
            "kind": "inner estimate with outer Young-Love radius",
        }


def aumann_young_integral(
    F: SetValuedPath, w: SampledPath, cfg: YoungConfig, r: float, family: SelectionFamily
) -> AumannYoungResult:
    """Hull of the integrals over [0, T] of the family members."""
    _check_family(family, cfg, r)
    I = _member_integrals(family, w, cfg)
    vals = I[:, -1, :]
    radius = young_love_radius(cfg, F.T, holder_seminorm(w, cfg.beta).seminorm, r, F.sup_norm())
    return AumannYoungResult(
        ConvexBody(vals), vals, radius, len(family), list(family.rejection_log), list(family.provenance)
    )


def indefinite_aumann_integral(
    F: SetValuedPath, w: SampledPath, cfg: YoungConfig, r: float, family: SelectionFamily
) -> SetValuedPath:
    """Node-wise hulls of int_0^t f dw over the family members.

    The members are the same selections of F on the whole of [0, T],
    truncated at t; they are not re-selected on each subinterval.
    """
    _check_family(family, cfg, r)
    I = _member_integrals(family, w, cfg)
    return SetValuedPath(F.T, tuple(ConvexBody(I[:, i, :]) for i in range(I.shape[1])))


# ---------------------------------------------------------------------------
# time discretization


def _check_nodes(nodes, m: int) -> np.ndarray:
    nodes = np.asarray(nodes)
    if nodes.dtype.kind not in "iu" or nodes[0] != 0 or nodes[-1] != m or np.any(np.diff(nodes) <= 0):
        raise GridError("dissection must be increasing integer node indices from 0 to m")
    return nodes.astype(int)


def interpolate_multifunction(F: SetValuedPath, nodes) -> SetValuedPath:
    """Piecewise Minkowski interpolation of F between the dissection nodes:
    F_n(t) = ((t_{k+1} - t) F(t_k) + (t - t_k) F(t_{k+1})) / (t_{k+1} - t_k),
    evaluated on the full grid of F."""
    nodes = _check_nodes(nodes, F.m)
    out = list(F.bodies)
    for a, b in zip(nodes[:-1], nodes[1:]):
        for i in range(a + 1, b):
            lam = (i - a) / (b - a)
            out[i] = minkowski_combine(1.0 - lam, F.bodies[a], lam, F.bodies[b])
    return SetValuedPath(F.T, tuple(out), F.shape)


def interpolate_path(f: SampledPath, nodes) -> SampledPath:
    nodes = _check_nodes(nodes, f.m)
    X = f.values.reshape(f.m + 1, -1)
    idx = np.arange(f.m + 1)
    Y = np.column_stack([np.interp(idx, nodes, X[nodes, j]) for j in range(X.shape[1])])
    return SampledPath(f.T, Y)


def interpolate_family(family: SelectionFamily, F: SetValuedPath, nodes, r: float | None = None) -> SelectionFamily:
    """Piecewise-linear interpolation of every member between the nodes.

    The interpolants are selections of ``interpolate_multifunction(F, nodes)``;
    they are re-certified at budget r (default: the family's budget).
    """
    Fn = interpolate_multifunction(F, nodes)
    r = family.r if r is None else r
    fam = SelectionFamily([], float(r), family.alpha, [], [], [], family.shape)
    _certify_many(
        Fn,
        [(f"interpolated({tag})", interpolate_path(f, nodes)) for f, tag in zip(family.members, family.provenance)],
        family.alpha,
        r,
        fam,
    )
    if not fam.members:
        raise EmptyFamily("no interpolated member passed certification")
    return fam


# ---------------------------------------------------------------------------
# continuity in the signal


@dataclass
class LipschitzReport:
    lhs: float
    rhs: float
    satisfied: bool
    w_diff_beta: float

    def to_dict(self) -> dict:
        return {"lhs": self.lhs, "rhs": self.rhs, "satisfied": self.satisfied, "w_diff_beta": self.w_diff_beta}


def integral_lipschitz_in_w_check(
    F: SetValuedPath, w1: SampledPath, w2: SampledPath, cfg: YoungConfig, r: float, family: SelectionFamily
) -> LipschitzReport:
    """d_H(J(F, w1), J(F, w2)) against c T^beta max(T^alpha, 1) (r + |F|_inf) |w1 - w2|_beta,
    both integrals taken over the same family."""
    J1 = aumann_young_integral(F, w1, cfg, r, family).hull
    J2 = aumann_young_integral(F, w2, cfg, r, family).hull
    dw = holder_seminorm(w1 - w2, cfg.beta).seminorm
    lhs = hausdorff_distance(J1, J2)
    rhs = young_love_radius(cfg, F.T, dw, r, F.sup_norm())
    return LipschitzReport(lhs, rhs, lhs <= rhs + 1e-12, dw)


# ---------------------------------------------------------------------------
# unbounded selections: the divergent sequence for w(t) = t^(2 beta) cos(pi / t)


def oscillating_signal(beta: float, T: float = 1.0, m: int = 1000) -> SampledPath:
    """w(t) = t^(2 beta) cos(pi / t), w(0) = 0."""
    t = np.linspace(0.0, T, m + 1)
    with np.errstate(divide="ignore", invalid="ignore"):
        v = np.where(t > 0, t ** (2 * beta) * np.cos(np.pi / np.where(t > 0, t, 1.0)), 0.0)
    return SampledPath(T, v)


def _oscillating_integral(n: int, beta: float, sign: float, nodes: int = 48) -> float:
    """int_{1/n}^1 sign sin(pi/t) w'(t) dt by Gauss-Legendre in u = 1/t on
    each [k, k + 1]."""
    x, wts = np.polynomial.legendre.leggauss(nodes)
    total = 0.0
    for k in range(1, n):
        u = k + 0.5 * (x + 1.0)
        # w'(t) dt with t = 1/u, dt = -du/u^2; orientation flips the sign back
        dw = 2 * beta * u ** (1 - 2 * beta) * np.cos(np.pi * u) + np.pi * u ** (2 - 2 * beta) * np.sin(np.pi * u)
        total += 0.5 * float(np.sum(wts * sign * np.sin(np.pi * u) * dw / u**2))
    return total


def oscillation_bound_chain(n: int, beta: float) -> float:
    """(1 - n^(-2 beta)) - sum_{k=1}^{n-1} (k + 1)^(-2 beta): upper bound for
    the integral of the selection -sin(pi/t) 1_[1/n, 1]."""
    k = np.arange(1, n)
    return (1.0 - n ** (-2 * beta)) - float(np.sum((k + 1.0) ** (-2 * beta)))


@dataclass
class DivergenceReport:
    n: list
    integrals: list  # quadrature
    grid_integrals: list  # Young integral on the sampling grid
    bound_chain: list
    seminorms: list  # grid alpha-seminorm lower estimates of f_n
    seminorm_max_lag: int
    hull_radius: float
    young_love_radius: float
    family_size: int
    alpha: float
    beta: float
    r: float
    sign: float
    m: int

    def to_dict(self) -> dict:
        return dict(self.__dict__)


def _suffix_seminorms(f: np.ndarray, starts: list, h: float, alpha: float, max_lag: int) -> list:
    """Grid alpha-seminorms of f * 1_[t_s, T] for each start index s, over
    index gaps <= max_lag plus the pairs straddling the jump at s."""
    m = len(f) - 1
    within = np.zeros(len(starts))
    st = np.asarray(starts)
    for k in range(1, min(max_lag, m) + 1):
        d = np.abs(f[k:] - f[:-k]) / (k * h) ** alpha
        suff = np.maximum.accumulate(d[::-1])[::-1]
        ok = st <= m - k
        within[ok] = np.maximum(within[ok], suff[st[ok]])
    out = []
    for s, wv in zip(starts, within):
        if s == 0:
            out.append(float(wv))
            continue
        j = np.arange(s, m + 1)
        cross = float(np.max(np.abs(f[s:]) / ((j - s + 1) * h) ** alpha))
        out.append(max(float(wv), cross))
    return out


def example3_divergence(
    beta: float = 0.5,
    n_max: int = 50,
    m: int | None = None,
    alpha: float = 0.75,
    r: float = 10.0,
    sign: float = -1.0,
    max_lag: int | None = None,
    rng_seed=0,
) -> DivergenceReport:
    """Integrals of f_n = sign * sin(pi/t) 1_[1/n, 1] against
    w(t) = t^(2 beta) cos(pi/t), for n = 1..n_max.

    Each f_n is a selection of F = [-1, 1], yet the integrals are unbounded
    (to -inf for sign = -1, +inf for sign = +1) and so are the seminorms of
    f_n. The bounded-budget integral of the same F against the same w stays
    inside the Young-Love radius: ``hull_radius`` is the norm of the hull
    obtained from a certified family at budget r.

    Integrals are computed by Gauss-Legendre quadrature of f_n w' (w is C^1
    on [1/n, 1]) and cross-checked by the Young integral on the grid.
    """
    if n_max < 2:
        raise ValueError("n_max must be >= 2")
    if m is None:
        m = 100 * n_max**2
    if m < 100 * n_max**2:
        warnings.warn(
            f"m = {m} under-resolves the oscillations near t = 1/{n_max} (need m >= {100 * n_max**2})",
            ResolutionWarning,
            stacklevel=2,
        )
    cfg = YoungConfig(alpha, beta)
    w = oscillating_signal(beta, 1.0, m)
    t = w.grid
    with np.errstate(divide="ignore"):
        g = np.where(t > 0, sign * np.sin(np.pi / np.where(t > 0, t, 1.0)), 0.0)
    ns = list(range(1, n_max + 1))
    starts = [int(math.ceil(m / n - 1e-9)) for n in ns]
    quad, grid_vals = [], []
    dw = np.diff(w.values)
    for n, s in zip(ns, starts):
        quad.append(_oscillating_integral(n, beta, sign))
        fn = np.where(np.arange(m + 1) >= s, g, 0.0)
        grid_vals.append(float(np.sum(0.5 * (fn[:-1] + fn[1:]) * dw)))
    lag = max_lag if max_lag is not None else max(1, int(math.ceil(4 * m / n_max**2)))
    semis = _suffix_seminorms(g, starts, w.h, alpha, lag)

    # bounded-budget integral of F = [-1, 1]: constant and clipped oscillating selections
    mc = min(m, 2000)
    wc = w.resample(mc) if m % mc else w.coarsen(m // mc)
    Fc = SetValuedPath.constant(ConvexBody.interval(-1.0, 1.0), 1.0, mc)
    tc = Fc.grid
    anchors = default_anchors(Fc, 16, rng_seed) + [
        SampledPath(1.0, (2.0 * np.sin(np.pi * k * tc))[:, None]) for k in range(1, 9)
    ]
    fam = build_selection_family(Fc, alpha, r, measures=default_measures(1, 8, rng_seed), anchors=anchors,
                                 rng_seed=rng_seed, check_r_min=False)
    res = aumann_young_integral(Fc, wc, cfg, r, fam)
    return DivergenceReport(
        ns, quad, grid_vals, [oscillation_bound_chain(n, beta) for n in ns], semis, lag,
        res.hull.norm, res.radius_bound, len(fam), alpha, beta, r, sign, m,
    )
