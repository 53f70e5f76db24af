"""Hot numeric kernels: adaptive Runge-Kutta flows of rational scalar fields.

Every kernel integrates the one-dimensional field

    u(x) = (c0 + c1*x + c2*x^2 + c3*x^3 + c4*x^4 + c5*x^5) / (1 + q1*x)

with a Dormand-Prince 5(4) embedded pair.  This family covers the model
unfolding (x^2+eps)/(1+a*x), the normal-form generators x^2/(1-a*x), and
polynomially perturbed generators used in tests.

The kernels are compiled with ``numba.njit`` unless the environment variable
``PARABOLICA_DISABLE_NUMBA`` is set to a non-empty value other than ``0`` (or
numba is unavailable); in that case the same source runs as pure Python.
``benchmarks/kernel_bench.py`` times the two paths against each other.

Status flags returned by the kernels:
    0  success
    1  step count exceeded
    2  step size underflow
    3  denominator 1 + q1*x vanished on the orbit
    4  no section crossing within the time cap
"""

import os

import numpy as np

_env = os.environ.get("PARABOLICA_DISABLE_NUMBA", "").strip()
_want_numba = _env in ("", "0")

NUMBA_ENABLED = False
if _want_numba:
    try:
        import numba

        NUMBA_ENABLED = True
    except ImportError:  # pragma: no cover - numba is a declared dependency
        NUMBA_ENABLED = False

if NUMBA_ENABLED:
    prange = numba.prange

    def _jit(**kw):
        return numba.njit(cache=True, **kw)
else:
    prange = range

    def _jit(**kw):
        def deco(func):
            return func

        return deco


def set_thread_cap(n: int) -> None:
    """Cap kernel parallelism; honored only on the numba path."""
    if NUMBA_ENABLED and n > 0:
        numba.set_num_threads(max(1, min(n, numba.config.NUMBA_NUM_THREADS)))


MAX_STEPS = 5_000_000

# Dormand-Prince 5(4) tableau.
_A21 = 1.0 / 5.0
_A31, _A32 = 3.0 / 40.0, 9.0 / 40.0
_A41, _A42, _A43 = 44.0 / 45.0, -56.0 / 15.0, 32.0 / 9.0
_A51, _A52, _A53, _A54 = (19372.0 / 6561.0, -25360.0 / 2187.0,
                          64448.0 / 6561.0, -212.0 / 729.0)
_A61, _A62, _A63, _A64, _A65 = (9017.0 / 3168.0, -355.0 / 33.0,
                                46732.0 / 5247.0, 49.0 / 176.0,
                                -5103.0 / 18656.0)
_B1, _B3, _B4, _B5, _B6 = (35.0 / 384.0, 500.0 / 1113.0, 125.0 / 192.0,
                           -2187.0 / 6784.0, 11.0 / 84.0)
# Weights of y5 - y4; the last one multiplies k7 = f(y5) (FSAL).
_E1, _E3, _E4, _E5, _E6, _E7 = (71.0 / 57600.0, -71.0 / 16695.0,
                                71.0 / 1920.0, -17253.0 / 339200.0,
                                22.0 / 525.0, -1.0 / 40.0)


@_jit()
def rhs(coef, x):
    den = 1.0 + coef[6] * x
    num = coef[0] + x * (coef[1] + x * (coef[2] + x * (coef[3] + x * (coef[4] + x * coef[5]))))
    return num / den


@_jit()
def _dp_step(coef, x, h, k1):
    """One 5th-order step of size h from x; returns (x_new, k7, err)."""
    k2 = rhs(coef, x + h * (_A21 * k1))
    k3 = rhs(coef, x + h * (_A31 * k1 + _A32 * k2))
    k4 = rhs(coef, x + h * (_A41 * k1 + _A42 * k2 + _A43 * k3))
    k5 = rhs(coef, x + h * (_A51 * k1 + _A52 * k2 + _A53 * k3 + _A54 * k4))
    k6 = rhs(coef, x + h * (_A61 * k1 + _A62 * k2 + _A63 * k3 + _A64 * k4 + _A65 * k5))
    x_new = x + h * (_B1 * k1 + _B3 * k3 + _B4 * k4 + _B5 * k5 + _B6 * k6)
    k7 = rhs(coef, x_new)
    err = h * (_E1 * k1 + _E3 * k3 + _E4 * k4 + _E5 * k5 + _E6 * k6 + _E7 * k7)
    return x_new, k7, err


@_jit()
def flow(coef, x0, duration, rtol, atol):
    """Flow x' = u(x) for a signed duration.  Returns (x_end, flag, nsteps)."""
    if duration == 0.0:
        return x0, 0, 0
    direction = 1.0 if duration > 0.0 else -1.0
    span = abs(duration)
    h_max = max(1.0, 0.25 * span)
    dcoef = coef.copy()
    for i in range(6):
        dcoef[i] = coef[i] * direction
    s = 0.0
    x = x0
    if abs(1.0 + coef[6] * x) < 1e-12:
        return x, 3, 0
    k1 = rhs(dcoef, x)
    h = min(h_max, 1e-3, span)
    nsteps = 0
    while s < span:
        if nsteps >= MAX_STEPS:
            return x, 1, nsteps
        if h < 1e-14 * max(1.0, s):
            return x, 2, nsteps
        if h > span - s:
            h = span - s
        x_new, k7, err = _dp_step(dcoef, x, h, k1)
        if abs(1.0 + coef[6] * x_new) < 1e-12:
            return x_new, 3, nsteps
        sc = atol + rtol * max(abs(x), abs(x_new))
        en = abs(err) / sc
        nsteps += 1
        if en <= 1.0:
            s += h
            x = x_new
            k1 = k7
            fac = 5.0 if en == 0.0 else min(5.0, max(0.2, 0.9 * en ** -0.2))
            h = min(h_max, h * fac)
        else:
            h = h * max(0.2, 0.9 * en ** -0.2)
    return x, 0, nsteps


@_jit()
def _hermite(x0, f0, x1, f1, h, theta):
    t2 = theta * theta
    om = 1.0 - theta
    return (om * om * (1.0 + 2.0 * theta) * x0
            + theta * om * om * h * f0
            + t2 * (3.0 - 2.0 * theta) * x1
            + t2 * (theta - 1.0) * h * f1)


@_jit()
def transit(coef, x0, x_target, s_cap, rtol, atol):
    """Integrate forward until x crosses x_target from below.

    Returns (s_cross, x_cross, flag, nsteps).  The crossing is seeded by a
    cubic Hermite bisection over the straddling step and polished by Newton
    iterations against single in-step solutions of the flow itself.
    """
    if x0 >= x_target:
        return 0.0, x0, 0, 0
    s = 0.0
    x = x0
    if abs(1.0 + coef[6] * x) < 1e-12:
        return 0.0, x, 3, 0
    k1 = rhs(coef, x)
    h = 1e-3
    h_max = max(1.0, 0.01 * s_cap)
    nsteps = 0
    while s < s_cap:
        if nsteps >= MAX_STEPS:
            return s, x, 1, nsteps
        if h < 1e-14 * max(1.0, s):
            return s, x, 2, nsteps
        x_new, k7, err = _dp_step(coef, x, h, k1)
        if abs(1.0 + coef[6] * x_new) < 1e-12:
            return s, x_new, 3, nsteps
        sc = atol + rtol * max(abs(x), abs(x_new))
        en = abs(err) / sc
        nsteps += 1
        if en > 1.0:
            h = h * max(0.2, 0.9 * en ** -0.2)
            continue
        if x_new >= x_target:
            lo, hi = 0.0, 1.0
            for _i in range(40):
                mid = 0.5 * (lo + hi)
                if _hermite(x, k1, x_new, k7, h, mid) < x_target:
                    lo = mid
                else:
                    hi = mid
            theta = 0.5 * (lo + hi)
            for _i in range(3):
                if theta <= 1e-16:
                    theta = 1e-16
                xg, _kg, _eg = _dp_step(coef, x, theta * h, k1)
                theta = theta - (xg - x_target) / (h * rhs(coef, xg))
                if theta < 0.0:
                    theta = 0.0
                elif theta > 1.0:
                    theta = 1.0
            xg, _kg, _eg = _dp_step(coef, x, theta * h, k1)
            return s + theta * h, xg, 0, nsteps
        s += h
        x = x_new
        k1 = k7
        fac = 5.0 if en == 0.0 else min(5.0, max(0.2, 0.9 * en ** -0.2))
        h = min(h_max, h * fac)
    return s, x, 4, nsteps


@_jit(parallel=True)
def transit_grid(eps_arr, a, x0, x_target, s_cap, rtol, atol):
    """Transit times across the annulus for a whole parameter grid."""
    n = eps_arr.shape[0]
    out_s = np.empty(n, dtype=np.float64)
    out_flag = np.zeros(n, dtype=np.int64)
    for i in prange(n):
        coef = np.zeros(7, dtype=np.float64)
        coef[0] = eps_arr[i]
        coef[2] = 1.0
        coef[6] = a
        sc, _xc, fl, _ns = transit(coef, x0, x_target, s_cap, rtol, atol)
        out_s[i] = sc
        out_flag[i] = fl
    return out_s, out_flag


def model_coef(eps: float, a: float) -> np.ndarray:
    """Coefficients of the unfolding field (x^2 + eps)/(1 + a*x)."""
    coef = np.zeros(7)
    coef[0] = eps
    coef[2] = 1.0
    coef[6] = a
    return coef


def generator_coef(a: float) -> np.ndarray:
    """Coefficients of the normal-form generator x^2/(1 - a*x)."""
    coef = np.zeros(7)
    coef[2] = 1.0
    coef[6] = -a
    return coef


def poly_coef(c: "list[float]", q1: float = 0.0) -> np.ndarray:
    """Coefficients of (sum c[i] x^i)/(1 + q1 x), c padded to degree 5."""
    coef = np.zeros(7)
    for i, v in enumerate(c):
        if i > 5:
            raise ValueError("numerator degree at most 5")
        coef[i] = float(v)
    coef[6] = q1
    return coef


def warm_up() -> None:
    """Trigger JIT compilation of all kernels (no-op on the pure path)."""
    c = model_coef(0.01, 0.0)
    flow(c, -1.0, 0.5, 1e-10, 1e-12)
    flow(c, -0.5, -0.25, 1e-10, 1e-12)
    transit(c, -1.0, 1.0, 1e4, 1e-10, 1e-12)
    transit_grid(np.array([0.01, 0.02]), 0.0, -1.0, 1.0, 1e4, 1e-10, 1e-12)
