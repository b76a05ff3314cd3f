"""Time integration: inner forward Euler, direct RK4, and projective steppers.

A projective step takes K+1 damping steps of size dt_inner with forward
Euler, estimates the time derivative from the last chord,

    k = (f^{K+1} - f^{K}) / dt_inner,

and extrapolates over the remaining dt_outer - (K+1) dt_inner.  Projective
Runge-Kutta (PRK) repeats this per stage of an explicit tableau: stage s >= 2
is seeded from the stage-1 inner endpoint plus the partial stage combination,
runs its own fresh K+1 damping steps, and contributes its chord slope.  With
a single stage and unit weight the construction reduces exactly to projective
forward Euler.

All steppers treat the tendency as autonomous and work on raw ndarrays; the
``integrate`` driver owns snapshot landing, final-step truncation, and error
context.
"""

from __future__ import annotations

import sys
from dataclasses import dataclass

import numpy as np

from .errors import InvalidTableau, PibgkError, StepUnstable
from .phase_space import DistributionField

_REL_SLACK = 1e-9   # tolerance for float comparisons of user-supplied step sizes


@dataclass
class ButcherTableau:
    """Coefficients (a, b, c) of an explicit Runge-Kutta method."""

    a: np.ndarray
    b: np.ndarray
    c: np.ndarray

    def __post_init__(self):
        self.a = np.asarray(self.a, dtype=float)
        self.b = np.asarray(self.b, dtype=float)
        self.c = np.asarray(self.c, dtype=float)
        s = self.b.shape[0]
        if self.a.shape != (s, s) or self.c.shape != (s,):
            raise InvalidTableau(
                f"inconsistent tableau shapes a={self.a.shape} b={self.b.shape} c={self.c.shape}"
            )

    @property
    def stages(self):
        return self.b.shape[0]


def validate_tableau(tab, tol=1e-12):
    """Check the explicit-RK consistency conditions; returns all violations.

    Conditions: strictly lower triangular a, 0 <= b <= 1 summing to 1,
    0 <= c <= 1 with c_1 = 0, row sums of a equal to c, and c_s > 0 for
    stages s >= 2 (the projective stage seed divides by c_s).
    """
    violations = []
    a, b, c = tab.a, tab.b, tab.c
    s = tab.stages
    if np.any((b < -tol) | (b > 1 + tol)):
        violations.append(f"weights outside [0, 1]: b = {b.tolist()}")
    total = float(b.sum())
    if abs(total - 1.0) > tol:
        violations.append(f"sum(b) = {total} != 1")
    if np.any((c < -tol) | (c > 1 + tol)):
        violations.append(f"nodes outside [0, 1]: c = {c.tolist()}")
    if abs(c[0]) > tol:
        violations.append(f"c_1 = {c[0]} != 0")
    upper = np.triu(a)
    if np.any(np.abs(upper) > tol):
        violations.append("matrix a is not strictly lower triangular")
    for row in range(1, s):
        rowsum = float(a[row, :row].sum())
        if abs(rowsum - c[row]) > tol:
            violations.append(f"row {row + 1}: sum(a) = {rowsum} != c_{row + 1} = {c[row]}")
        if c[row] <= tol:
            violations.append(f"c_{row + 1} = {c[row]} must be positive for stages >= 2")
    return violations


def require_valid_tableau(tab):
    violations = validate_tableau(tab)
    if violations:
        raise InvalidTableau("; ".join(violations))


def named_tableau(name):
    """Well-known explicit tableaus by name: euler, heun, rk4."""
    key = name.lower()
    if key == "euler":
        return ButcherTableau(a=[[0.0]], b=[1.0], c=[0.0])
    if key == "heun":
        return ButcherTableau(a=[[0.0, 0.0], [1.0, 0.0]], b=[0.5, 0.5], c=[0.0, 1.0])
    if key == "rk4":
        return ButcherTableau(
            a=[[0.0, 0.0, 0.0, 0.0],
               [0.5, 0.0, 0.0, 0.0],
               [0.0, 0.5, 0.0, 0.0],
               [0.0, 0.0, 1.0, 0.0]],
            b=[1.0 / 6.0, 1.0 / 3.0, 1.0 / 3.0, 1.0 / 6.0],
            c=[0.0, 0.5, 0.5, 1.0],
        )
    raise InvalidTableau(f"unknown tableau {name!r}, expected euler, heun, or rk4")


@dataclass(frozen=True)
class ProjectiveParameters:
    """Inner step size, damping step count K, and outer step size.

    The chord slope is taken between inner steps K and K+1, so a projective
    step spends (K+1) dt_inner inside the damping phase and must satisfy
    dt_outer >= (K+1) dt_inner.
    """

    dt_inner: float
    damping_steps: int
    dt_outer: float

    def __post_init__(self):
        if not self.dt_inner > 0:
            raise ValueError(f"dt_inner must be positive, got {self.dt_inner}")
        if int(self.damping_steps) != self.damping_steps or self.damping_steps < 1:
            raise ValueError(f"damping_steps must be an integer >= 1, got {self.damping_steps}")
        if self.dt_outer < self.inner_span * (1 - _REL_SLACK):
            raise ValueError(
                f"projective constraint violated: dt_outer = {self.dt_outer} "
                f"< (K+1) dt_inner = {self.inner_span}"
            )

    @property
    def inner_span(self):
        return (self.damping_steps + 1) * self.dt_inner

    def with_outer(self, dt_outer):
        return ProjectiveParameters(self.dt_inner, self.damping_steps, dt_outer)


def _require_finite(values, what):
    if not np.isfinite(values).all():
        raise StepUnstable(f"{what} produced NaN/Inf values")


def forward_euler_step(values, dt, rhs):
    """One explicit Euler step values + dt * rhs(values)."""
    out = values + dt * rhs(values)
    _require_finite(out, "forward Euler step")
    return out


def rk4_step(values, dt, rhs):
    """One classical fourth-order Runge-Kutta step."""
    k1 = rhs(values)
    k2 = rhs(values + (0.5 * dt) * k1)
    k3 = rhs(values + (0.5 * dt) * k2)
    k4 = rhs(values + dt * k3)
    out = values + (dt / 6.0) * (k1 + 2.0 * (k2 + k3) + k4)
    _require_finite(out, "RK4 step")
    return out


def _inner_chain(values, params, rhs):
    """K+1 forward Euler damping steps; returns (f^K, f^{K+1})."""
    cur = values
    for _ in range(params.damping_steps):
        cur = forward_euler_step(cur, params.dt_inner, rhs)
    last = forward_euler_step(cur, params.dt_inner, rhs)
    return cur, last


def pfe_step(values, params, rhs):
    """Projective forward Euler: damp, then extrapolate along the chord."""
    fk, fk1 = _inner_chain(values, params, rhs)
    slope = (fk1 - fk) / params.dt_inner
    out = fk1 + (params.dt_outer - params.inner_span) * slope
    _require_finite(out, "projective extrapolation")
    return out


def check_stage_spans(tableau, params):
    """Stage seeds must not extrapolate backwards past the damping phase.

    Every stage with c_s > 0 rebases at time c_s dt_outer, which must not be
    earlier than the (K+1) dt_inner already consumed by damping.
    """
    problems = []
    for s in range(1, tableau.stages):
        if tableau.c[s] * params.dt_outer < params.inner_span * (1 - _REL_SLACK):
            problems.append(
                f"stage {s + 1}: c_s dt_outer = {tableau.c[s] * params.dt_outer:.6g} "
                f"< (K+1) dt_inner = {params.inner_span:.6g}"
            )
    return problems


def prk_step(values, tableau, params, rhs):
    """One projective Runge-Kutta step of the given explicit tableau."""
    require_valid_tableau(tableau)
    problems = check_stage_spans(tableau, params)
    if problems:
        raise ValueError("projective stage constraint violated: " + "; ".join(problems))

    span = params.inner_span
    fk, fk1 = _inner_chain(values, params, rhs)
    slopes = [(fk1 - fk) / params.dt_inner]
    for s in range(1, tableau.stages):
        acc = None
        for l in range(s):
            a_sl = tableau.a[s, l]
            if a_sl == 0.0:
                continue
            term = (a_sl / tableau.c[s]) * slopes[l]
            acc = term if acc is None else acc + term
        seed = fk1 if acc is None else fk1 + (tableau.c[s] * params.dt_outer - span) * acc
        try:
            gk, gk1 = _inner_chain(seed, params, rhs)
        except PibgkError as exc:
            raise type(exc)(f"PRK stage {s + 1}: {exc}") from exc
        slopes.append((gk1 - gk) / params.dt_inner)

    comb = tableau.b[0] * slopes[0]
    for s in range(1, tableau.stages):
        comb = comb + tableau.b[s] * slopes[s]
    out = fk1 + (params.dt_outer - span) * comb
    _require_finite(out, "projective extrapolation")
    return out


@dataclass(frozen=True)
class TimeScheme:
    """A fully specified time integration method.

    kind "fe" or "rk4" uses the plain step size ``dt``; "pfe" and "prk" use
    ProjectiveParameters, with "prk" additionally carrying a tableau.
    """

    kind: str
    dt: float | None = None
    params: ProjectiveParameters | None = None
    tableau: ButcherTableau | None = None

    def __post_init__(self):
        if self.kind in ("fe", "rk4"):
            if self.dt is None or not self.dt > 0:
                raise ValueError(f"method {self.kind!r} needs a positive dt")
        elif self.kind in ("pfe", "prk"):
            if self.params is None:
                raise ValueError(f"method {self.kind!r} needs projective parameters")
            if self.kind == "prk":
                if self.tableau is None:
                    raise ValueError("method 'prk' needs a tableau")
                require_valid_tableau(self.tableau)
                problems = check_stage_spans(self.tableau, self.params)
                if problems:
                    raise ValueError(
                        "projective stage constraint violated: " + "; ".join(problems)
                    )
        else:
            raise ValueError(f"unknown method kind {self.kind!r}")

    @property
    def outer_dt(self):
        return self.dt if self.kind in ("fe", "rk4") else self.params.dt_outer

    def label(self):
        if self.kind == "prk":
            return f"prk{self.tableau.stages}"
        return self.kind


@dataclass
class StepperState:
    """Where a run ended up: final field, time, and work counters."""

    field: DistributionField
    t: float
    steps: int
    rhs_evals: int
    method: str


def _projective_landing_ok(scheme, step):
    """Whether a shortened outer step keeps the projective structure valid."""
    if step < scheme.params.inner_span * (1 - _REL_SLACK):
        return False
    if scheme.kind == "prk":
        trial = scheme.params.with_outer(step)
        return not check_stage_spans(scheme.tableau, trial)
    return True


def integrate(field, scheme, rhs_values, t_end, snapshot_times=None, sink=None,
              progress_every=0, progress_stream=None):
    """Advance a field from t = 0 to t_end, landing exactly on snapshot times.

    The final (and any snapshot-landing) outer step is shrunk to hit the
    target time; when a shrunken projective step could no longer contain its
    damping phase, the remainder is covered by plain forward Euler steps of
    the inner size instead, preserving the stability logic near the end.

    ``sink(t, field)`` is called at each requested snapshot time (including
    t = 0 when requested).  Errors raised by steppers are re-raised with the
    outer step index and time attached.
    """
    if t_end < 0:
        raise ValueError(f"t_end must be >= 0, got {t_end}")
    snaps = sorted(set(float(s) for s in (snapshot_times or [])))
    for s in snaps:
        if s < 0 or s > t_end * (1 + _REL_SLACK):
            raise ValueError(f"snapshot time {s} outside [0, {t_end}]")

    evals = 0

    def counted(values):
        nonlocal evals
        evals += 1
        return rhs_values(values)

    stream = progress_stream if progress_stream is not None else sys.stderr

    values = field.values
    t = 0.0
    n = 0
    if snaps and snaps[0] == 0.0 and sink is not None:
        sink(0.0, DistributionField(values.copy(), field.space, field.velocity))

    targets = [s for s in snaps if s > 0.0]
    if not targets or targets[-1] < t_end * (1 - _REL_SLACK):
        targets.append(t_end)

    nominal = scheme.outer_dt
    for target in targets:
        while t < target * (1 - _REL_SLACK):
            remaining = target - t
            landing = remaining <= nominal * (1 + _REL_SLACK)
            step = remaining if landing else nominal
            try:
                if scheme.kind == "fe":
                    values = forward_euler_step(values, step, counted)
                elif scheme.kind == "rk4":
                    values = rk4_step(values, step, counted)
                elif not _projective_landing_ok(scheme, step):
                    # Remainder shorter than the damping phase: finish with
                    # plain inner-size Euler steps.
                    landing = remaining <= scheme.params.dt_inner * (1 + _REL_SLACK)
                    step = remaining if landing else scheme.params.dt_inner
                    values = forward_euler_step(values, step, counted)
                elif scheme.kind == "pfe":
                    values = pfe_step(values, scheme.params.with_outer(step), counted)
                else:
                    values = prk_step(values, scheme.tableau,
                                      scheme.params.with_outer(step), counted)
            except PibgkError as exc:
                raise type(exc)(f"outer step {n} at t = {t:.9g}: {exc}") from exc
            n += 1
            t = target if landing else t + step
            if progress_every and n % progress_every == 0:
                print(f"step {n}: t = {t:.6g}", file=stream, flush=True)
        t = target
        if sink is not None and target > 0.0 and target in snaps:
            sink(target, DistributionField(values.copy(), field.space, field.velocity))

    out = DistributionField(values, field.space, field.velocity)
    return StepperState(field=out, t=t_end, steps=n, rhs_evals=evals, method=scheme.label())
