"""Picard solvers for first- and second-order inclusions driven by Hölder signals.

The first-order problem is x(t) in xi + int_0^t Phi(s, x(s)) dw(s) with the
bounded-budget set-valued integral on the right. A strategy fixes one
selection rule C -> point of C (Steiner, generalized Steiner, projection of an
anchor); iterating x <- xi + int sel(Phi(., x)) dw on short windows and
gluing the windows yields one solution, certified a posteriori by its
distance to the integral hull. Several strategies give an inner picture of
the solution funnel.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np

from .aumann import (
    SelectionFamily,
    SetValuedPath,
    _certify,
    _member_integrals,
    build_selection_family,
    default_measures,
    rho_w,
)
from .convex_bodies import (
    ConvexBody,
    DirectionSample,
    SmoothBallMeasure,
    hausdorff_distance,
    distances_to_set,
    project,
    steiner_point_exact,
)
from .errors import InvalidProblem, NonConvergence
from .paths import SampledPath, holder_seminorm, sample_fbm, time_augmented
from .young import YoungConfig, iterated_integral, young_integral

# ---------------------------------------------------------------------------
# coefficient multifunctions


@dataclass(frozen=True)
class Coefficient:
    """A multifunction (t, x) -> ConvexBody in M_{e,d} (flattened) together
    with declared constants: k1 for alpha-Hölder continuity in t, k2 for
    Lipschitz continuity in x (both in the Hausdorff metric) and the uniform
    bound R on the norm of the values."""

    name: str
    fn: object
    e: int
    d: int
    k1: float
    k2: float
    R: float
    params: dict = field(default_factory=dict)

    def __call__(self, t: float, x) -> ConvexBody:
        return self.fn(float(t), np.atleast_1d(np.asarray(x, dtype=float)))

    @property
    def dim(self) -> int:
        return self.e * self.d

    def to_dict(self) -> dict:
        return {"name": self.name, "e": self.e, "d": self.d, "k1": self.k1, "k2": self.k2, "R": self.R,
                **self.params}


def constant_phi(body, e: int, d: int) -> Coefficient:
    C = body if isinstance(body, ConvexBody) else ConvexBody(np.asarray(body, dtype=float).reshape(-1, e * d))
    if C.dim != e * d:
        raise InvalidProblem(f"constant body in R^{C.dim} is not in M_{{{e},{d}}}")
    return Coefficient("constant", lambda t, x: C, e, d, 0.0, 0.0, C.norm, {"vertices": C.vertices.tolist()})


def translate_phi(body, e: int, d: int, a: float, b: float, alpha: float, T: float = 1.0, direction=None):
    """Phi(t, x) = C + (a t^alpha + b mean(sin x)) u with a unit vector u."""
    C = body if isinstance(body, ConvexBody) else ConvexBody(np.asarray(body, dtype=float).reshape(-1, e * d))
    u = np.ones(e * d) if direction is None else np.asarray(direction, dtype=float)
    u = u / np.linalg.norm(u)

    def fn(t, x):
        return C.shifted((a * t**alpha + b * float(np.mean(np.sin(x)))) * u)

    return Coefficient(
        "translate", fn, e, d, abs(a), abs(b), C.norm + abs(a) * T**alpha + abs(b),
        {"vertices": C.vertices.tolist(), "a": a, "b": b, "alpha": alpha, "direction": u.tolist()},
    )


def radius_field_phi(center, e: int, d: int, rho0: float, a: float, b: float, alpha: float, T: float = 1.0,
                     k: int = 8):
    """Phi(t, x) = center + ball polytope of radius rho0 + a t^alpha + b |sin x_1|."""
    c = np.asarray(center, dtype=float).reshape(-1)
    if len(c) != e * d:
        raise InvalidProblem(f"center in R^{len(c)} is not in M_{{{e},{d}}}")
    if rho0 < 0 or a < 0 or b < 0:
        raise InvalidProblem("radius parameters must be >= 0")
    unit = ConvexBody.ball_polytope(e * d, 1.0, k)

    def fn(t, x):
        rho = rho0 + a * t**alpha + b * abs(math.sin(x[0]))
        return ConvexBody(c + rho * unit.vertices)

    return Coefficient(
        "radius_field", fn, e, d, a, b, float(np.linalg.norm(c)) + rho0 + a * T**alpha + b,
        {"center": c.tolist(), "rho0": rho0, "a": a, "b": b, "alpha": alpha, "k": k},
    )


def rotating_segment_phi(scale: float = 1.0, omega: float = 1.0, alpha: float = 1.0, T: float = 1.0):
    """Phi(t, x) = segment from -scale u(t) to scale u(t), u(t) = (cos omega t, sin omega t).
    Lipschitz in t in the Hausdorff metric but not in the Demyanov metric."""

    def fn(t, x):
        u = scale * np.array([math.cos(omega * t), math.sin(omega * t)])
        return ConvexBody(np.array([-u, u]))

    return Coefficient(
        "rotating_segment", fn, 1, 2, scale * omega * T ** (1 - alpha), 0.0, scale,
        {"scale": scale, "omega": omega, "alpha": alpha},
    )


PHI_REGISTRY = {
    "constant": constant_phi,
    "translate": translate_phi,
    "radius_field": radius_field_phi,
    "rotating_segment": rotating_segment_phi,
}


def make_phi(entry: dict) -> Coefficient:
    """Build a registry coefficient from ``{"name": ..., **params}``; declared
    constants k1, k2, R in the entry override the computed ones."""
    entry = dict(entry)
    name = entry.pop("name")
    if name not in PHI_REGISTRY:
        raise InvalidProblem(f"unknown coefficient {name!r}; choose from {sorted(PHI_REGISTRY)}")
    over = {k: entry.pop(k) for k in ("k1", "k2", "R") if k in entry}
    phi = PHI_REGISTRY[name](**entry)
    if over:
        phi = Coefficient(phi.name, phi.fn, phi.e, phi.d, over.get("k1", phi.k1), over.get("k2", phi.k2),
                          over.get("R", phi.R), phi.params)
    return phi


# ---------------------------------------------------------------------------
# problems and strategies


@dataclass(frozen=True)
class Strategy:
    """A single-valued selection rule C -> point of C.

    kind: "steiner" (exact in rank <= 2, else common-random-numbers Monte
    Carlo), "generalized_steiner" (with ``measure``) or "anchor" (projection
    of the constant point ``anchor``).
    """

    kind: str = "steiner"
    measure: SmoothBallMeasure | None = None
    anchor: tuple | None = None
    n_samples: int = 2000
    seed: int = 0

    def __post_init__(self):
        if self.kind not in ("steiner", "generalized_steiner", "anchor"):
            raise InvalidProblem(f"unknown strategy {self.kind!r}")
        if self.kind == "generalized_steiner" and self.measure is None:
            raise InvalidProblem("generalized_steiner needs a measure")
        if self.kind == "anchor" and self.anchor is None:
            raise InvalidProblem("anchor strategy needs an anchor point")

    def selector(self, n: int):
        if self.kind == "anchor":
            a = np.asarray(self.anchor, dtype=float)
            return lambda C: project(a, C)
        mu = self.measure if self.kind == "generalized_steiner" else SmoothBallMeasure.uniform()
        sample = DirectionSample.draw(mu, n, self.n_samples, self.seed)
        if self.kind == "steiner":
            def sel(C):
                p = steiner_point_exact(C)
                return p if p is not None else sample.estimate(C).point
            return sel
        return lambda C: sample.estimate(C).point

    @property
    def tag(self) -> str:
        if self.kind == "anchor":
            return f"anchor{list(self.anchor)}"
        if self.kind == "generalized_steiner":
            return f"generalized_steiner{self.measure.to_dict()}"
        return "steiner"


@dataclass
class InclusionProblem:
    """x(t) in xi + int_0^t Phi(s, x(s)) dw(s) (order 1) or
    x(t) in xi + int_0^t int_0^s Phi(u, x(u)) dw0(u) dw0(s) (order 2, scalar
    Phi and scalar driver w0)."""

    phi: Coefficient
    xi: np.ndarray
    w: SampledPath
    alpha: float
    beta: float
    r: float | None = None  # None: the minimal budget
    order: int = 1
    gamma: float = 1.0
    tol: float = 1e-6
    max_iter: int = 50
    n_probes: int = 64

    def __post_init__(self):
        self.xi = np.atleast_1d(np.asarray(self.xi, dtype=float))
        if self.order not in (1, 2):
            raise InvalidProblem("order must be 1 or 2")
        if not (0 < self.gamma <= 1) or self.alpha * self.gamma + self.beta <= 1:
            raise InvalidProblem("need 0 < gamma <= 1 and alpha*gamma + beta > 1")
        self.cfg = YoungConfig(self.alpha, self.beta)
        if self.order == 1:
            d = int(np.prod(self.w.value_shape)) if self.w.value_shape else 1
            if self.phi.d != d or self.phi.e != len(self.xi):
                raise InvalidProblem(
                    f"Phi in M_{{{self.phi.e},{self.phi.d}}} needs xi in R^{self.phi.e} and w in R^{self.phi.d}"
                )
            self.signal = self.w
        else:
            if self.w.values.ndim != 1 or self.phi.dim != 1 or len(self.xi) != 1:
                raise InvalidProblem("second-order problems need scalar Phi, scalar xi and scalar w0")
            self.signal = iterated_integral(self.w, self.cfg)
        rmin = self.minimal_budget()
        if self.r is None:
            self.r = rmin
        elif self.r < rmin - 1e-12:
            raise InvalidProblem(f"budget r = {self.r} is below the required {rmin}")

    @property
    def T(self) -> float:
        return self.w.T

    @property
    def w_beta(self) -> float:
        return holder_seminorm(self.signal, self.beta).seminorm

    def minimal_budget(self) -> float:
        """R + k1 + k2 for order 1; k1 + k2 (|w0|_alpha + 1) for order 2."""
        if self.order == 1:
            return self.phi.R + self.phi.k1 + self.phi.k2
        return self.phi.k1 + self.phi.k2 * (holder_seminorm(self.w, self.alpha).total + 1.0)

    def window_bound(self, T0: float) -> float:
        """(1 + T0^alpha) rho_w(T0, r) with the uniform bound R of Phi."""
        return (1.0 + T0**self.alpha) * rho_w(self.cfg, T0, self.w_beta, self.r, self.phi.R)

    def check_constants(self, seed=0, x_scale: float | None = None):
        """Probe the declared constants on random (t, s, x, y); raise
        InvalidProblem on the first violation."""
        rng = np.random.default_rng(seed)
        n = len(self.xi) if self.order == 1 else 1
        scale = x_scale if x_scale is not None else 2.0 + float(np.linalg.norm(self.xi))
        T, ph = self.T, self.phi
        for _ in range(self.n_probes):
            t, s = rng.uniform(0, T, 2)
            x, y = self.xi + rng.uniform(-scale, scale, (2, n))
            A, B = ph(t, x), ph(s, x)
            if A.norm > ph.R * (1 + 1e-9) + 1e-12:
                raise InvalidProblem(f"|Phi({t:.3g}, x)| = {A.norm:.6g} exceeds R = {ph.R}")
            if hausdorff_distance(A, B) > ph.k1 * abs(t - s) ** self.alpha * (1 + 1e-9) + 1e-12:
                raise InvalidProblem(f"time regularity constant k1 = {ph.k1} violated at t={t:.3g}, s={s:.3g}")
            dx = float(np.linalg.norm(x - y))
            if hausdorff_distance(A, ph(t, y)) > ph.k2 * dx**self.gamma * (1 + 1e-9) + 1e-12:
                raise InvalidProblem(f"space regularity constant k2 = {ph.k2} violated")


@dataclass
class SolutionReport:
    path: SampledPath
    residual: float
    iterations: int  # maximum over windows
    window_schedule: list  # (start node, end node) per window
    window_sizes: list
    window_condition: list  # (1 + T0^alpha) rho_w(T0, r) per window size
    fallback: bool  # no grid multiple met the window condition
    increments: list  # sup-node change per iteration, last window
    strategy: str
    selection: SampledPath
    ibp_residual: float | None = None
    slack: float = 0.0

    def to_dict(self) -> dict:
        return {
            "residual": self.residual,
            "iterations": self.iterations,
            "window_schedule": self.window_schedule,
            "window_sizes": self.window_sizes,
            "window_condition": self.window_condition,
            "fallback": self.fallback,
            "strategy": self.strategy,
            "ibp_residual": self.ibp_residual,
            "final_value": np.asarray(self.path.values[-1]).tolist(),
        }


# ---------------------------------------------------------------------------
# solver


def choose_window(p: InclusionProblem) -> tuple[int, bool]:
    """Largest number of grid steps k with (1 + (k h)^alpha) rho_w(k h, r) <= 1;
    (1, True) if even one step violates it."""
    h, m = p.w.h, p.w.m
    if p.window_bound(h) > 1.0:
        return 1, True
    lo, hi = 1, m
    if p.window_bound(m * h) <= 1.0:
        return m, False
    while hi - lo > 1:  # the bound is increasing in T0
        mid = (lo + hi) // 2
        if p.window_bound(mid * h) <= 1.0:
            lo = mid
        else:
            hi = mid
    return lo, False


def _state(p: InclusionProblem, I: np.ndarray, W0: np.ndarray | None) -> np.ndarray:
    if p.order == 1:
        return p.xi + I
    return p.xi + (W0 * I[:, 0] - I[:, 1])[:, None]


def _integrand(p: InclusionProblem, phi_vals: np.ndarray) -> np.ndarray:
    """Selection values (k, n) as matrices (k, e, d) against the signal."""
    if p.order == 1:
        return phi_vals.reshape(len(phi_vals), p.phi.e, p.phi.d)
    return phi_vals[:, 0][:, None, None] * np.eye(2)


def _increments(G: np.ndarray, dW: np.ndarray) -> np.ndarray:
    return np.einsum("ked,kd->ke", 0.5 * (G[:-1] + G[1:]), dW)


def _solve_windows(p: InclusionProblem, sel, k: int):
    m = p.w.m
    tgrid = p.w.grid
    W = p.signal.values.reshape(m + 1, -1)
    dW = np.diff(W, axis=0)
    W0 = p.w.values if p.order == 2 else None
    e_int = p.phi.e if p.order == 1 else 2
    I = np.zeros((m + 1, e_int))
    X = np.tile(p.xi, (m + 1, 1))
    vals = np.zeros((m + 1, p.phi.dim))
    vals[0] = sel(p.phi(0.0, X[0]))
    schedule, iters, incs = [], 0, []
    a = 0
    while a < m:
        b = min(a + k, m)
        X[a + 1 : b + 1] = X[a]
        incs = []
        for it in range(1, p.max_iter + 1):
            for i in range(a + 1, b + 1):
                vals[i] = sel(p.phi(tgrid[i], X[i]))
            G = _integrand(p, vals[a : b + 1])
            I[a + 1 : b + 1] = I[a] + np.cumsum(_increments(G, dW[a:b]), axis=0)
            Xn = _state(p, I[a : b + 1], None if W0 is None else W0[a : b + 1])
            change = float(np.max(np.abs(Xn[1:] - X[a + 1 : b + 1])))
            X[a + 1 : b + 1] = Xn[1:]
            incs.append(change)
            if change <= p.tol:
                break
        else:
            return None, (a, b, it, incs, X, vals, schedule)
        iters = max(iters, it)
        schedule.append((a, b))
        a = b
    return (X, vals, schedule, iters, incs), None


def _membership_residual(p: InclusionProblem, X: np.ndarray, sel_path: SampledPath, strategy_tag: str,
                         extra_measures: int, seed) -> tuple[float, SelectionFamily]:
    """max over nodes of dist(x(t) - xi, inner hull of the set-valued integral
    at t), with the family built on F(t) = Phi(t, x(t)) and containing the
    strategy's own selection."""
    tg = p.w.grid
    F = SetValuedPath(p.T, tuple(p.phi(t, x) for t, x in zip(tg, X)),
                      (p.phi.e, p.phi.d) if p.order == 1 else None)
    fam = SelectionFamily([], float(p.r), p.alpha, [], [], [], F.shape)
    _certify(F, sel_path, strategy_tag, p.alpha, p.r, fam)
    try:
        extra = build_selection_family(F, p.alpha, p.r, measures=default_measures(F.dim, extra_measures, seed),
                                       anchors=[], rng_seed=seed, check_r_min=False)
        fam.members += extra.members
        fam.provenance += extra.provenance
        fam.seminorms += extra.seminorms
        fam.rejection_log += extra.rejection_log
    except Exception:  # the strategy's own member is enough for the residual
        pass
    if not fam.members:
        return math.inf, fam
    if p.order == 1:
        I = _member_integrals(fam, p.signal, p.cfg)
        pts = I
    else:
        pts = []
        for f in fam.members:
            G = f.values[:, 0][:, None, None] * np.eye(2)
            J = young_integral(SampledPath(p.T, G), p.signal, p.cfg).values
            pts.append((p.w.values * J[:, 0] - J[:, 1])[:, None])
        pts = np.array(pts)
    target = X - p.xi
    res = 0.0
    for i in range(len(tg)):
        res = max(res, float(distances_to_set(target[i : i + 1], ConvexBody(pts[:, i, :]))[0]))
    return res, fam


def solve(p: InclusionProblem, strategy: Strategy | None = None, seed=0, check: bool = True,
          residual_measures: int = 4) -> SolutionReport:
    """Picard iteration on glued windows with one selection strategy.

    The window is the largest grid multiple satisfying the smallness
    condition; on NonConvergence the window is halved once before failing.
    """
    strategy = strategy or Strategy()
    if check:
        p.check_constants(seed)
    sel = strategy.selector(p.phi.dim)
    k, fallback = choose_window(p)
    out, fail = _solve_windows(p, sel, k)
    tried = [k]
    if out is None and k > 1:
        k = max(1, k // 2)
        tried.append(k)
        out, fail = _solve_windows(p, sel, k)
    h = p.w.h
    if out is None:
        a, b, it, incs, X, vals, schedule = fail
        rep = SolutionReport(SampledPath(p.T, X if p.order == 1 or X.shape[1] > 1 else X[:, 0]), math.inf, it,
                             schedule, [t * h for t in tried], [p.window_bound(t * h) for t in tried], fallback,
                             incs, strategy.tag, SampledPath(p.T, vals))
        raise NonConvergence(f"no convergence in {p.max_iter} iterations on window nodes {a}..{b}", rep)
    X, vals, schedule, iters, incs = out
    sel_path = SampledPath(p.T, vals)
    res, _ = _membership_residual(p, X, sel_path, strategy.tag, residual_measures, seed)
    ibp = None
    if p.order == 2:
        ibp = integration_by_parts_residual(p.w, sel_path, p.cfg)
    path = SampledPath(p.T, X[:, 0] if X.shape[1] == 1 else X)
    return SolutionReport(path, res, iters, schedule, [t * h for t in tried],
                          [p.window_bound(t * h) for t in tried], fallback, incs, strategy.tag, sel_path, ibp,
                          p.tol)


def solve_first_order(p: InclusionProblem, strategy: Strategy | None = None, seed=0) -> SolutionReport:
    if p.order != 1:
        raise InvalidProblem("not a first-order problem")
    return solve(p, strategy, seed)


def solve_second_order(p: InclusionProblem, strategy: Strategy | None = None, seed=0) -> SolutionReport:
    if p.order != 2:
        raise InvalidProblem("not a second-order problem")
    return solve(p, strategy, seed)


def integration_by_parts_residual(w0: SampledPath, phi: SampledPath, cfg: YoungConfig) -> float:
    """sup_t |int_0^t int_0^s phi dw0 dw0 - (w0(t) I1(t) - I2(t))| with
    I1 = int phi dw0 and I2 = int phi w0 dw0, each side integrated separately."""
    f = SampledPath(phi.T, phi.values.reshape(phi.m + 1, -1)[:, 0])
    I1 = young_integral(f, w0, cfg)
    double = young_integral(I1, w0, cfg).values
    I2 = young_integral(SampledPath(f.T, f.values * w0.values), w0, cfg).values
    return float(np.max(np.abs(double - (w0.values * I1.values - I2))))


# ---------------------------------------------------------------------------
# funnels and ensembles


@dataclass
class FunnelReport:
    reports: list
    failures: list
    hulls: list  # per-node ConvexBody of solution values

    def widths(self) -> np.ndarray:
        return np.array([H.diameter for H in self.hulls])

    def to_dict(self) -> dict:
        return {
            "reports": [r.to_dict() for r in self.reports],
            "failures": self.failures,
            "widths": self.widths().tolist(),
        }


def solution_funnel(p: InclusionProblem, strategies: list, seed=0) -> FunnelReport:
    """Solve once per strategy; node-wise hulls of the solution values."""
    reps, fails = [], []
    for j, s in enumerate(strategies):
        try:
            reps.append(solve(p, s, seed, check=(j == 0)))
        except NonConvergence as exc:
            fails.append({"strategy": s.tag, "error": str(exc)})
    if not reps:
        raise NonConvergence("every strategy failed", fails)
    P = np.array([r.path.values.reshape(p.w.m + 1, -1) for r in reps])
    return FunnelReport(reps, fails, [ConvexBody(P[:, i]) for i in range(p.w.m + 1)])


def default_strategies(n: int, count: int = 6, seed=0) -> list:
    """Steiner plus generalized Steiner strategies for bump measures."""
    return [Strategy()] + [
        Strategy("generalized_steiner", mu, seed=seed + j) for j, mu in enumerate(default_measures(n, count - 1, seed))
    ]


@dataclass
class EnsembleReport:
    H: float
    n_paths: int
    success_rate: float
    residuals: list
    failures: list
    law_check: dict | None = None

    def to_dict(self) -> dict:
        return dict(self.__dict__)


def stochastic_inclusion_run(
    H: float,
    template: dict,
    n_paths: int,
    seed=0,
    tol_check: float = 1e-3,
    strategy: Strategy | None = None,
    law_times=(0.25, 0.5, 0.75, 1.0),
) -> EnsembleReport:
    """Pathwise solves with fBm drivers.

    ``template`` holds ``phi`` (registry entry), ``xi``, ``alpha``, ``beta``,
    optional ``r``, ``order`` (1: w = (t, B_1, ..., B_{d-1}); 2: w0 = B
    scalar), ``T`` and ``m``. Path i uses seed ``seed + i``. For order 2 the
    law check compares the sample mean of x(t) - xi with t^(2H)/2, the
    answer for Phi = {1}.
    """
    phi = make_phi(template["phi"])
    order = int(template.get("order", 1))
    T, m = float(template.get("T", 1.0)), int(template.get("m", 128))
    res, fails, finals = [], [], []
    for i in range(n_paths):
        if order == 1:
            B = sample_fbm(H, T, m, dims=phi.d - 1, seed=seed + i)
            w = time_augmented(B)
        else:
            w = sample_fbm(H, T, m, dims=1, seed=seed + i)
        try:
            p = InclusionProblem(phi, template["xi"], w, template["alpha"], template["beta"], template.get("r"),
                                 order, tol=template.get("tol", 1e-6))
            rep = solve(p, strategy, seed=seed + i, check=(i == 0),
                        residual_measures=template.get("residual_measures", 2))
            res.append(rep.residual)
            if rep.residual > tol_check:
                fails.append({"path": i, "residual": rep.residual})
            finals.append(rep.path.values.reshape(m + 1, -1)[:, 0] - p.xi[0])
        except NonConvergence as exc:
            fails.append({"path": i, "error": str(exc)})
            res.append(math.inf)
    law = None
    if order == 2 and finals:
        Y = np.array(finals)
        idx = [int(round(t / T * m)) for t in law_times]
        mean = Y[:, idx].mean(axis=0)
        se = Y[:, idx].std(axis=0, ddof=1) / math.sqrt(len(Y)) if len(Y) > 1 else np.zeros(len(idx))
        expected = [(i * T / m) ** (2 * H) / 2 for i in idx]
        law = {"times": [i * T / m for i in idx], "mean": mean.tolist(), "stderr": se.tolist(),
               "expected": expected}
    ok = n_paths - len(fails)
    return EnsembleReport(H, n_paths, ok / n_paths if n_paths else 0.0, res, fails, law)
