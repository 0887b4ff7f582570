"""Gamma, Mittag-Leffler, and fractional trigonometric functions.

Everything here is a plain series evaluation in IEEE double precision with
an explicit truncation contract: a result is returned only when the
stopping rule certifies it, otherwise a typed error is raised.  The
classical reductions (E_1(z) = exp(z), E_2(z) = cosh(sqrt z),
E_{1,2}(z) = (exp(z) - 1)/z, E_{2,2}(z) = sinh(sqrt z)/sqrt z) are used
as test oracles only, never as evaluation shortcuts.
"""

import cmath
import math
from dataclasses import dataclass

import numpy as np

from .errors import DomainError, NonConvergenceError

__all__ = [
    "SeriesControl",
    "DEFAULT_CONTROL",
    "gamma",
    "log_gamma",
    "ml_one",
    "ml_two",
    "cos_frac",
    "sin_frac",
    "cos_sin_at_power",
]


@dataclass(frozen=True)
class SeriesControl:
    """Truncation control: relative tolerance and term budget."""

    rel_tol: float = 1e-13
    k_max: int = 10_000

    def __post_init__(self):
        if not (0.0 < self.rel_tol < 1.0):
            raise DomainError(f"rel_tol must lie in (0, 1), got {self.rel_tol}")
        if self.k_max < 1:
            raise DomainError(f"k_max must be >= 1, got {self.k_max}")


DEFAULT_CONTROL = SeriesControl()

# Largest x with Gamma(x) representable in double precision.
_GAMMA_OVERFLOW = 171.624
# Natural log of the double-precision overflow threshold.
_LOG_HUGE = 709.0
# Results whose cancellation noise exceeds this fraction of (1 + |value|)
# are rejected rather than returned.
_CANCELLATION_LIMIT = 1e-3

# Lanczos approximation, g = 7, 9 coefficients.  Relative error of the
# rational part is ~1e-15 over the positive real axis.
_LANCZOS_G = 7.0
_LANCZOS_C = (
    0.99999999999980993,
    676.5203681218851,
    -1259.1392167224028,
    771.32342877765313,
    -176.61502916214059,
    12.507343278686905,
    -0.13857109526572012,
    9.9843695780195716e-6,
    1.5056327351493116e-7,
)
_SQRT_TWO_PI = 2.5066282746310002
_SQRT_PI = 1.7724538509055159


def _lanczos_series(z):
    acc = _LANCZOS_C[0]
    for i in range(1, 9):
        acc += _LANCZOS_C[i] / (z + i)
    return acc


def log_gamma(x: float) -> float:
    """Natural log of Gamma(x) for x > 0."""
    if not (x > 0.0) or math.isnan(x):
        raise DomainError(f"log_gamma requires x > 0, got {x}")
    if x < 0.5:
        return log_gamma(x + 1.0) - math.log(x)
    z = x - 1.0
    t = z + _LANCZOS_G + 0.5
    return (
        0.5 * math.log(2.0 * math.pi)
        + (z + 0.5) * math.log(t)
        - t
        + math.log(_lanczos_series(z))
    )


def gamma(x: float) -> float:
    """Gamma(x) for 0 < x <= 171.624; integer and half-integer fast paths."""
    if not (x > 0.0) or math.isnan(x):
        raise DomainError(f"gamma requires x > 0, got {x}")
    if x > _GAMMA_OVERFLOW:
        raise OverflowError(f"gamma({x}) exceeds double-precision range")
    n = round(x)
    if x == n:
        return float(math.factorial(int(n) - 1))
    if x == n + 0.5 and n >= 0:
        # Gamma(n + 1/2) = (2n)! sqrt(pi) / (4^n n!), exact integer ratio
        m = int(n)
        return _SQRT_PI * (math.factorial(2 * m) / (4**m * math.factorial(m)))
    if x < 0.5:
        return gamma(x + 1.0) / x
    z = x - 1.0
    t = z + _LANCZOS_G + 0.5
    # split the power to keep intermediates in range near the overflow edge
    half = t ** (0.5 * (z + 0.5))
    return _SQRT_TWO_PI * half * (half * math.exp(-t)) * _lanczos_series(z)


def _denominator(y: float) -> float | None:
    """Gamma(y) by the most accurate in-range route, or None if too large."""
    if y > _GAMMA_OVERFLOW:
        return None
    return gamma(y)


def _check_convergence_failure(z_has_growth: bool, detail: str):
    if z_has_growth:
        raise OverflowError(detail)
    raise NonConvergenceError(detail)


def _hump_index(absz: float, alpha: float) -> int:
    if absz <= 1.0:
        return 1
    return math.ceil(absz ** (1.0 / alpha))


def _ml_scalar(alpha: float, beta: float, z: complex, ctl: SeriesControl):
    """Sum z^k / Gamma(beta + alpha k) with the certified stopping rule."""
    is_real = z.imag == 0.0
    x = z.real
    if z == 0:
        return complex(1.0 / gamma(beta), 0.0)
    absz = abs(z)
    logabsz = math.log(absz)
    argz = math.atan2(z.imag, z.real)
    hump = _hump_index(absz, alpha)
    re_terms = [1.0 / gamma(beta)]
    im_terms = [0.0]
    run_re, run_im = re_terms[0], 0.0
    sum_abs = abs(re_terms[0])
    consec = 0
    for k in range(1, ctl.k_max + 1):
        y = beta + alpha * k
        logmag = k * logabsz - log_gamma(y)
        if logmag > _LOG_HUGE:
            _check_convergence_failure(
                z.real >= 0.0,
                f"series term at k={k} exceeds double range for z={z}",
            )
        klog = k * logabsz
        den = _denominator(y) if klog < _LOG_HUGE - 60.0 else None
        if den is not None:
            term = (x**k / den) + 0j if is_real else z**k / den
        else:
            mag = math.exp(logmag)
            if is_real:
                term = complex(mag if (x > 0 or k % 2 == 0) else -mag, 0.0)
            else:
                term = mag * cmath.exp(1j * (k * argz))
        re_terms.append(term.real)
        im_terms.append(term.imag)
        run_re += term.real
        run_im += term.imag
        sum_abs += abs(term)
        if math.isinf(run_re) or math.isinf(run_im):
            raise OverflowError(f"partial sum overflow for z={z}")
        if abs(term) <= ctl.rel_tol * math.hypot(run_re, run_im) and k >= hump:
            consec += 1
            if consec >= 3:
                break
        else:
            consec = 0
    else:
        raise NonConvergenceError(
            f"stopping rule did not fire within k_max={ctl.k_max} for z={z}"
        )
    value = complex(math.fsum(re_terms), math.fsum(im_terms))
    noise = 2.22e-16 * sum_abs
    if noise > _CANCELLATION_LIMIT * (1.0 + abs(value)):
        raise NonConvergenceError(
            f"catastrophic cancellation for z={z}: "
            f"noise floor {noise:.2e} vs magnitude {abs(value):.2e}"
        )
    return value


def _ml_array(alpha: float, beta: float, z: np.ndarray, ctl: SeriesControl):
    """Vectorized series; log-space term magnitudes, per-point stopping."""
    is_real = not np.iscomplexobj(z)
    zc = np.asarray(z, dtype=float if is_real else complex)
    absz = np.abs(zc)
    out = np.full(zc.shape, 1.0 / gamma(beta), dtype=float if is_real else complex)
    with np.errstate(divide="ignore"):
        logabs = np.where(absz > 0.0, np.log(np.where(absz > 0.0, absz, 1.0)), -np.inf)
    if not is_real:
        argz = np.angle(zc)
    neg = zc.real < 0.0
    hump = np.where(absz > 1.0, np.ceil(absz ** (1.0 / alpha)), 1.0)
    consec = np.zeros(zc.shape, dtype=np.int64)
    done = absz == 0.0
    sum_abs = np.abs(out).astype(float)
    for k in range(1, ctl.k_max + 1):
        lg = log_gamma(beta + alpha * k)
        logmag = k * logabs - lg
        active = ~done
        if np.any(logmag[active] > _LOG_HUGE):
            bad = active & (logmag > _LOG_HUGE)
            _check_convergence_failure(
                bool(np.any(zc.real[bad] >= 0.0)),
                f"series term at k={k} exceeds double range",
            )
        mag = np.exp(np.where(done, -np.inf, logmag))
        if is_real:
            term = np.where(neg & (k % 2 == 1), -mag, mag)
        else:
            term = mag * np.exp(1j * (k * argz))
        out = out + term
        sum_abs += mag
        small = mag <= ctl.rel_tol * np.abs(out)
        consec = np.where(small & (k >= hump), consec + 1, 0)
        done = done | (consec >= 3)
        if done.all():
            break
    else:
        raise NonConvergenceError(
            f"stopping rule did not fire within k_max={ctl.k_max} "
            f"for {int((~done).sum())} grid point(s)"
        )
    if np.any(np.isinf(out)):
        raise OverflowError("partial sum overflow in vectorized evaluation")
    noise = 2.22e-16 * sum_abs
    if np.any(noise > _CANCELLATION_LIMIT * (1.0 + np.abs(out))):
        raise NonConvergenceError("catastrophic cancellation on evaluation grid")
    return out


def ml_two(alpha: float, beta: float, z, ctl: SeriesControl | None = None):
    """Two-parameter Mittag-Leffler function E_{alpha,beta}(z).

    Accepts a real/complex scalar or an ndarray; the output follows the
    input type.  Raises NonConvergenceError or OverflowError when the
    truncation contract cannot be met.
    """
    if not (alpha > 0.0):
        raise DomainError(f"alpha must be > 0, got {alpha}")
    if not (beta > 0.0):
        raise DomainError(f"beta must be > 0, got {beta}")
    if ctl is None:
        ctl = DEFAULT_CONTROL
    if isinstance(z, np.ndarray):
        return _ml_array(alpha, beta, z, ctl)
    zc = complex(z)
    value = _ml_scalar(alpha, beta, zc, ctl)
    if zc.imag == 0.0:
        return value.real
    return value


def ml_one(alpha: float, z, ctl: SeriesControl | None = None):
    """One-parameter Mittag-Leffler function E_alpha(z) = E_{alpha,1}(z)."""
    return ml_two(alpha, 1.0, z, ctl)


def _trig_scalar(alpha: float, u: float, ctl: SeriesControl):
    """Fractional cos/sin series in the variable u = x**alpha, u >= 0.

    Returns (cos, sin, error_bound) where the bound is the magnitude of
    the first dropped term of whichever series stopped last.
    """
    if u == 0.0:
        return 1.0, 0.0, 0.0
    logu = math.log(u)
    hump = _hump_index(u, alpha)

    def alternating(start_power: int, gamma_arg):
        terms = []
        partial = 0.0
        prev_mag = math.inf
        k = 0
        while k <= ctl.k_max:
            power = start_power + 2 * k
            y = gamma_arg(k)
            logmag = power * logu - log_gamma(y)
            if logmag > _LOG_HUGE:
                raise NonConvergenceError(
                    f"fractional trig term overflow at u={u}"
                )
            den = _denominator(y)
            if den is not None and power * logu < _LOG_HUGE - 60.0:
                mag = u**power / den
            else:
                mag = math.exp(logmag)
            term = -mag if k % 2 else mag
            terms.append(term)
            partial += term
            if mag <= ctl.rel_tol * abs(partial) and mag <= prev_mag and 2 * k >= hump:
                # alternating series: first dropped term bounds the tail
                next_power = power + 2
                next_log = next_power * logu - log_gamma(gamma_arg(k + 1))
                return math.fsum(terms), math.exp(min(next_log, _LOG_HUGE))
            prev_mag = mag
            k += 1
        raise NonConvergenceError(
            f"fractional trig series did not converge within k_max for u={u}"
        )

    cos_val, cos_bound = alternating(0, lambda k: 1.0 + 2.0 * alpha * k)
    sin_val, sin_bound = alternating(1, lambda k: 1.0 + (2.0 * k + 1.0) * alpha)
    return cos_val, sin_val, max(cos_bound, sin_bound)


def _trig_array(alpha: float, u: np.ndarray, ctl: SeriesControl):
    u = np.asarray(u, dtype=float)
    cos = np.ones_like(u)
    sin = np.zeros_like(u)
    with np.errstate(divide="ignore"):
        logu = np.where(u > 0.0, np.log(np.where(u > 0.0, u, 1.0)), -np.inf)
    hump = np.where(u > 1.0, np.ceil(u ** (1.0 / alpha)), 1.0)
    done_c = u == 0.0
    done_s = u == 0.0
    prev_c = np.full(u.shape, np.inf)
    prev_s = np.full(u.shape, np.inf)
    for k in range(0, ctl.k_max + 1):
        sgn = -1.0 if k % 2 else 1.0
        if k > 0:
            mc = np.exp(np.where(done_c, -np.inf, 2 * k * logu - log_gamma(1.0 + 2.0 * alpha * k)))
            cos = cos + sgn * mc
            small_c = (mc <= ctl.rel_tol * np.abs(cos)) & (mc <= prev_c) & (2 * k >= hump)
            done_c = done_c | small_c
            prev_c = mc
        ms = np.exp(np.where(done_s, -np.inf,
                             (2 * k + 1) * logu - log_gamma(1.0 + (2.0 * k + 1.0) * alpha)))
        sin = sin + sgn * ms
        small_s = (ms <= ctl.rel_tol * np.abs(sin)) & (ms <= prev_s) & (2 * k >= hump)
        done_s = done_s | small_s
        prev_s = ms
        if done_c.all() and done_s.all():
            break
    else:
        raise NonConvergenceError("fractional trig series did not converge on grid")
    return cos, sin


def cos_sin_at_power(alpha: float, u, ctl: SeriesControl | None = None):
    """Fractional cosine and sine as functions of the power u = x**alpha.

    This is the evaluation the system solver needs: the trigonometric
    factor of an oscillatory mode at time t is the pair at u = q * t**alpha.
    """
    if not (0.0 < alpha <= 1.0):
        raise DomainError(f"alpha must lie in (0, 1], got {alpha}")
    if ctl is None:
        ctl = DEFAULT_CONTROL
    if isinstance(u, np.ndarray):
        if np.any(u < 0.0):
            raise DomainError("u must be nonnegative")
        return _trig_array(alpha, u, ctl)
    if u < 0.0:
        raise DomainError(f"u must be nonnegative, got {u}")
    c, s, _ = _trig_scalar(alpha, float(u), ctl)
    return c, s


def cos_frac(alpha: float, x: float, ctl: SeriesControl | None = None) -> float:
    """Fractional cosine: sum (-1)^k x^(2 k alpha) / Gamma(1 + 2 alpha k)."""
    if not (0.0 < alpha <= 1.0):
        raise DomainError(f"alpha must lie in (0, 1], got {alpha}")
    if x < 0.0:
        raise DomainError(f"x must be nonnegative, got {x}")
    if ctl is None:
        ctl = DEFAULT_CONTROL
    c, _, _ = _trig_scalar(alpha, float(x) ** alpha, ctl)
    return c


def sin_frac(alpha: float, x: float, ctl: SeriesControl | None = None) -> float:
    """Fractional sine: sum (-1)^k x^((2k+1) alpha) / Gamma(1 + (2k+1) alpha)."""
    if not (0.0 < alpha <= 1.0):
        raise DomainError(f"alpha must lie in (0, 1], got {alpha}")
    if x < 0.0:
        raise DomainError(f"x must be nonnegative, got {x}")
    if ctl is None:
        ctl = DEFAULT_CONTROL
    _, s, _ = _trig_scalar(alpha, float(x) ** alpha, ctl)
    return s
