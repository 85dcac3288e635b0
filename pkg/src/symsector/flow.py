"""Trajectory integration, escape detection, and branch-direction limits.

Public wrappers around the adaptive kernels: single trajectories with
optional recording, batched integration (jit or vectorized numpy,
selected automatically), and the rescaled limit Delta of the w-flow
whose real part is the hypersurface offset c.
"""

from dataclasses import dataclass

import numpy as np

from . import _kernels
from ._accel import using_numba
from .geometry import ALPHA_DEFAULT, SteinParams, SymPoint

TERM_ESCAPED = "ESCAPED"
TERM_MAX_TIME = "MAX_TIME"
TERM_NEAR_CRITICAL = "NEAR_CRITICAL"

_ATOL = 1e-30
_REC_CAP = 65536


class NoEscapeError(RuntimeError):
    """The trajectory failed to reach its target region in max_time."""


class NonFiniteFlowError(RuntimeError):
    """The integrator produced a non-finite state."""


@dataclass
class FlowSettings:
    """Integration controls shared by all flow-based operations.

    escape_radius defaults to 1e3 * max(1, epsilon) when left None, so
    escape always means leaving the region where the perturbation and
    the hypersurfaces live.
    """

    max_time: float = 60.0
    escape_radius: float = None
    step_tolerance: float = 1e-9
    stall_threshold: float = 1e-10
    h_max: float = 0.1
    max_steps: int = 1_000_000

    def __post_init__(self):
        if self.max_time <= 0 or self.step_tolerance <= 0 or self.h_max <= 0:
            raise ValueError("flow settings must be positive")
        if self.escape_radius is not None and self.escape_radius <= 0:
            raise ValueError("escape_radius must be positive")


def resolve_escape_radius(settings, params):
    """Concrete escape radius for a parameter set."""
    if settings.escape_radius is not None:
        return float(settings.escape_radius)
    return 1e3 * max(1.0, params.epsilon)


@dataclass
class Trajectory:
    """Recorded downward-flow trajectory.

    times and states hold the accepted integration samples (states are
    rows [Re z, Im z, Re w, Im w]); termination is one of ESCAPED,
    MAX_TIME, NEAR_CRITICAL.  For escaped trajectories escape_data
    carries the crossing time and the ordered sign pair of
    (Re z1, Re z2) at escape.
    """

    times: np.ndarray
    states: np.ndarray
    termination: str
    escape_data: dict = None

    @property
    def samples(self):
        """Samples as (t, SymPoint) pairs."""
        out = []
        for t, row in zip(self.times, self.states):
            out.append(
                (float(t), SymPoint.from_sym(row[0] + 1j * row[1], row[2] + 1j * row[3]))
            )
        return out

    def final_state(self):
        return self.states[-1].copy()

    def final_point(self):
        row = self.states[-1]
        return SymPoint.from_sym(row[0] + 1j * row[1], row[2] + 1j * row[3])


def flow_unperturbed_z(z0, t, alpha=ALPHA_DEFAULT):
    """Exact saddle flow of the z-coordinate, ignoring the w-coupling.

    Downward flow for t > 0: Re z grows at rate alpha-1, Im z decays at
    rate alpha.  Negative t flows upward.
    """
    z0 = np.asarray(z0, dtype=complex)
    return np.exp((alpha - 1.0) * t) * z0.real + 1j * np.exp(-alpha * t) * z0.imag


def state_of(p):
    """Real state vector of a SymPoint."""
    return p.state()


def point_of(state):
    """SymPoint of a real state vector."""
    return SymPoint.from_sym(state[0] + 1j * state[1], state[2] + 1j * state[3])


def escape_sign_pair(state):
    """Ordered sign pair of (Re z1, Re z2) recovered from a state."""
    r = float(np.hypot(state[2], state[3]))
    u = np.sqrt(max(r + state[2], 0.0) * 0.5)
    x_hi = state[0] + u
    x_lo = state[0] - u
    return (int(np.sign(x_lo)), int(np.sign(x_hi)))


def _drive_state(state, t0, t_end, params, settings, event_kind, record, fdir=1.0):
    """Run the scalar kernel from a state; returns kernel outputs."""
    radius = resolve_escape_radius(settings, params)
    rec = np.empty((_REC_CAP if record else 1, 5))
    res = _kernels._drive(
        float(state[0]),
        float(state[1]),
        float(state[2]),
        float(state[3]),
        float(t0),
        float(t_end),
        params.alpha,
        params.table,
        settings.step_tolerance,
        _ATOL,
        settings.h_max,
        radius,
        params.epsilon,
        event_kind,
        settings.stall_threshold,
        settings.max_steps,
        rec,
        record,
        fdir,
    )
    status, t, y0, y1, y2, y3, esign, nrec, _ = res
    out_state = np.array([y0, y1, y2, y3])
    return status, t, out_state, esign, rec[:nrec]


def integrate_flow(p0, params=None, settings=None, record=True):
    """Integrate the downward flow from p0 until escape or max_time.

    The trajectory terminates ESCAPED when both pair coordinates have
    |Re| beyond the escape radius and the point is outside the perturbed
    band |w| <= epsilon; it terminates NEAR_CRITICAL if the speed drops
    below the stall threshold, and MAX_TIME otherwise.

    Raises
    ------
    NonFiniteFlowError
        If the state leaves the representable range.
    """
    if params is None:
        params = SteinParams()
    if settings is None:
        settings = FlowSettings()
    state = p0.state() if isinstance(p0, SymPoint) else np.asarray(p0, dtype=float)
    status, t, out_state, _, rec = _drive_state(
        state, 0.0, settings.max_time, params, settings,
        _kernels.EVENT_PAIR_ESCAPE, record,
    )
    if status == _kernels.STATUS_NONFINITE:
        raise NonFiniteFlowError("non-finite state during integration")
    if status == _kernels.STATUS_RUNNING:
        raise RuntimeError("step budget exhausted before max_time")
    if record:
        times = rec[:, 0].copy()
        states = rec[:, 1:5].copy()
    else:
        times = np.array([0.0, t])
        states = np.vstack([state, out_state])
    if status == _kernels.STATUS_EVENT:
        termination = TERM_ESCAPED
        escape_data = {"time": float(t), "signs": escape_sign_pair(out_state)}
    elif status == _kernels.STATUS_STALLED:
        termination = TERM_NEAR_CRITICAL
        escape_data = None
    else:
        termination = TERM_MAX_TIME
        escape_data = None
    return Trajectory(times, states, termination, escape_data)


def flow_state_to_time(state, t, params, settings=None, direction=1.0):
    """State advanced by time t along the downward (or upward) flow."""
    if settings is None:
        settings = FlowSettings()
    status, _, out_state, _, _ = _drive_state(
        np.asarray(state, dtype=float), 0.0, float(t), params, settings,
        _kernels.EVENT_NONE, False, fdir=direction,
    )
    if status == _kernels.STATUS_NONFINITE:
        raise NonFiniteFlowError("non-finite state during integration")
    if status != _kernels.STATUS_TIME_END:
        raise RuntimeError("time integration terminated early")
    return out_state


def first_event(state, event_kind, params, settings):
    """First hit of an event region along the downward flow.

    Returns (hit, t, state, sign); hit is False if max_time elapsed
    without entering the region.  A start already inside the region
    returns t = 0.
    """
    state = np.asarray(state, dtype=float)
    radius = resolve_escape_radius(settings, params)
    hit0, sign0 = _kernels._event_val(
        state[0], state[1], state[2], state[3], radius, params.epsilon, event_kind
    )
    if hit0:
        return True, 0.0, state.copy(), int(sign0)
    status, t, out_state, esign, _ = _drive_state(
        state, 0.0, settings.max_time, params, settings, event_kind, False
    )
    if status == _kernels.STATUS_NONFINITE:
        raise NonFiniteFlowError("non-finite state during integration")
    if status == _kernels.STATUS_EVENT:
        return True, float(t), out_state, int(esign)
    return False, float(t), out_state, 0


def drive_batch(Y, params, settings, event_kind, t_end=None, direction=1.0):
    """Integrate every row of Y in place; returns (status, t, sign).

    Dispatches to the jit batch kernel when numba is active and to the
    vectorized numpy twin otherwise.
    """
    n = Y.shape[0]
    out_status = np.zeros(n, dtype=np.int64)
    out_t = np.zeros(n)
    out_sign = np.zeros(n, dtype=np.int64)
    radius = resolve_escape_radius(settings, params)
    fn = _kernels._drive_batch if using_numba() else _kernels._drive_batch_np
    fn(
        Y,
        0.0,
        float(settings.max_time if t_end is None else t_end),
        params.alpha,
        params.table,
        settings.step_tolerance,
        _ATOL,
        settings.h_max,
        radius,
        params.epsilon,
        event_kind,
        settings.stall_threshold,
        settings.max_steps,
        out_status,
        out_t,
        out_sign,
        direction,
    )
    return out_status, out_t, out_sign


def default_u_star(epsilon):
    """Reading threshold for the branch-direction limit.

    Beyond this |Re sqrt(w)| the drift left in the rescaled reading is
    below 1e-9 per unit time, so two readings 0.7 apart agreeing to
    1e-8 certify convergence.
    """
    return max(4.0 * epsilon, (3e9 * epsilon * epsilon) ** (1.0 / 7.0))


def compute_delta(
    sqrt_w0,
    params=None,
    settings=None,
    want_im_converged=False,
    agree_tol=1e-8,
    im_tol=5e-9,
    u_star_factor=1.0,
):
    """Rescaled branch-direction limit Delta of one w-trajectory.

    The w-flow started at w0 = sqrt_w0^2 is integrated while a branch of
    sqrt(w) is continued through the motion from the principal root of
    w0, and Delta = lim exp(-(alpha-1) t) sqrt(w(t)).  Because the
    branch is continued (rather than re-chosen), Delta is exactly odd in
    sqrt_w0 and Re Delta is even under conjugation.

    Raises
    ------
    NoEscapeError
        If no stable reading is reached within max_time.
    """
    if params is None:
        params = SteinParams()
    if settings is None:
        settings = FlowSettings()
    s0 = complex(sqrt_w0)
    w0 = s0 * s0
    u_star = default_u_star(params.epsilon) * u_star_factor
    status, dre, dim, _ = _kernels._delta_one(
        w0.real,
        w0.imag,
        params.alpha,
        params.table,
        settings.step_tolerance,
        _ATOL,
        settings.h_max,
        u_star,
        agree_tol,
        im_tol,
        want_im_converged,
        settings.max_time,
        settings.max_steps,
    )
    if status == _kernels.STATUS_NONFINITE:
        raise NonFiniteFlowError("non-finite state in w-flow")
    if status != _kernels.STATUS_EVENT:
        raise NoEscapeError("no stable branch-direction reading before max_time")
    d = complex(dre, dim)
    # the continued branch starts at the principal root; flip to the
    # branch through sqrt_w0 itself for odd symmetry
    if abs(np.sqrt(w0) - s0) > abs(np.sqrt(w0) + s0):
        d = -d
    return d


def compute_c(sqrt_w0, params=None, settings=None, **kw):
    """Hypersurface offset c = |Re Delta| >= 0 of one w-value."""
    return abs(compute_delta(sqrt_w0, params, settings, **kw).real)


def compute_delta_batch(
    sqrt_w0s,
    params=None,
    settings=None,
    want_im_converged=False,
    agree_tol=1e-8,
    im_tol=5e-9,
    u_star_factor=1.0,
):
    """Branch-direction limits of many w-values.

    Returns (delta, status) where delta is complex (nan where the
    reading did not converge) and status is the raw kernel status row.
    """
    if params is None:
        params = SteinParams()
    if settings is None:
        settings = FlowSettings()
    s0 = np.asarray(sqrt_w0s, dtype=complex).ravel()
    w0 = s0 * s0
    n = w0.size
    W = np.column_stack([w0.real, w0.imag])
    out_status = np.zeros(n, dtype=np.int64)
    out_re = np.zeros(n)
    out_im = np.zeros(n)
    out_t = np.zeros(n)
    u_star = default_u_star(params.epsilon) * u_star_factor
    fn = _kernels._delta_batch if using_numba() else _kernels._delta_batch_np
    fn(
        W,
        params.alpha,
        params.table,
        settings.step_tolerance,
        _ATOL,
        settings.h_max,
        u_star,
        agree_tol,
        im_tol,
        want_im_converged,
        settings.max_time,
        settings.max_steps,
        out_status,
        out_re,
        out_im,
        out_t,
    )
    delta = out_re + 1j * out_im
    flip = np.abs(np.sqrt(w0) - s0) > np.abs(np.sqrt(w0) + s0)
    delta[flip] = -delta[flip]
    delta[out_status != _kernels.STATUS_EVENT] = np.nan
    return delta, out_status


def compute_c_batch(sqrt_w0s, params=None, settings=None, **kw):
    """Offsets c = |Re Delta| for many w-values (nan where unresolved)."""
    delta, _ = compute_delta_batch(sqrt_w0s, params, settings, **kw)
    return np.abs(delta.real)
