"""Special functions, adaptive quadrature and scalar minimization.

Everything here is dependency-free apart from numpy (used only to evaluate
integrands on a whole Gauss-Kronrod panel at once) and is a pure function of
its inputs.
"""

from __future__ import annotations

import heapq
import math
from dataclasses import dataclass
from typing import Callable

import numpy as np

from .errors import DomainError, InvalidBracket, NonConvergence

__all__ = [
    "EULER_GAMMA",
    "QuadratureSpec",
    "MinimizeResult",
    "log_gamma",
    "gamma",
    "log_beta",
    "beta",
    "expn",
    "exp_integral_e1",
    "integrate",
    "integrate_radial",
    "minimize_scalar",
]

EULER_GAMMA = 0.57721566490153286060651209008240243

_EPS = 2.220446049250313e-16

# ---------------------------------------------------------------------------
# Gamma family
# ---------------------------------------------------------------------------

# Lanczos approximation, g = 7, n = 9.
_LANCZOS_G = 7.0
_LANCZOS_COEF = (
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
_HALF_LOG_2PI = 0.91893853320467274178032973640562


def _zeta(s, m=12):
    """Riemann zeta for integer s >= 2 by Euler-Maclaurin summation."""
    bernoulli = (1 / 6, -1 / 30, 1 / 42, -1 / 30, 5 / 66, -691 / 2730, 7 / 6)
    total = math.fsum(n ** -s for n in range(1, m))
    total += m ** (1 - s) / (s - 1) + 0.5 * m ** -s
    rising = s
    factorial = 2.0
    for j, b2j in enumerate(bernoulli, start=1):
        total += b2j / factorial * rising * m ** (-s - 2 * j + 1)
        rising *= (s + 2 * j - 1) * (s + 2 * j)
        factorial *= (2 * j + 1) * (2 * j + 2)
    return total


# Taylor coefficients of ln Gamma(1 + z) = -gamma z + sum_k (-1)^k zeta(k) z^k / k.
_LNGAMMA1P_COEF = tuple((-1) ** k * _zeta(k) / k for k in range(2, 34))


def _lngamma1p_series(z):
    acc = 0.0
    for c in reversed(_LNGAMMA1P_COEF):
        acc = acc * z + c
    return z * (acc * z - EULER_GAMMA)


def _lanczos(x):
    z = x - 1.0
    acc = _LANCZOS_COEF[0]
    for i in range(1, len(_LANCZOS_COEF)):
        acc += _LANCZOS_COEF[i] / (z + i)
    t = z + _LANCZOS_G + 0.5
    return _HALF_LOG_2PI + (z + 0.5) * math.log(t) - t + math.log(acc)


def log_gamma(x: float) -> float:
    """Natural log of Gamma(x) for x > 0.

    Near the zeros of ln Gamma (x = 1 and x = 2) a Taylor series keeps the
    result accurate in the relative sense.
    """
    x = float(x)
    if not x > 0.0 or math.isinf(x):
        raise DomainError(f"log_gamma requires a finite x > 0, got {x!r}")
    if abs(x - 1.0) < 0.2:
        return _lngamma1p_series(x - 1.0)
    if abs(x - 2.0) < 0.2:
        z = x - 2.0
        return _lngamma1p_series(z) + math.log1p(z)
    if x < 0.5:
        return log_gamma(x + 1.0) - math.log(x)
    return _lanczos(x)


def gamma(x: float) -> float:
    """Gamma(x) for x > 0; overflows to inf past x ~ 171."""
    try:
        return math.exp(log_gamma(x))
    except OverflowError:
        return math.inf


def log_beta(x: float, y: float) -> float:
    if not (x > 0 and y > 0):
        raise DomainError(f"beta requires positive arguments, got ({x!r}, {y!r})")
    return log_gamma(x) + log_gamma(y) - log_gamma(x + y)


def beta(x: float, y: float) -> float:
    """Euler Beta function Gamma(x)Gamma(y)/Gamma(x+y), evaluated in log space."""
    return math.exp(log_beta(x, y))


# ---------------------------------------------------------------------------
# Exponential integrals
# ---------------------------------------------------------------------------


def _expn_scaled_cf(n, x):
    """exp(x) * E_n(x) by modified Lentz continued fraction, x > 1."""
    tiny = 1e-300
    b = x + n
    c = 1.0 / tiny
    d = 1.0 / b
    h = d
    for i in range(1, 10_000):
        an = -i * (n - 1 + i)
        b += 2.0
        d = 1.0 / (an * d + b)
        c = b + an / c
        delta = c * d
        h *= delta
        if abs(delta - 1.0) < _EPS:
            return h
    raise NonConvergence(f"E_{n}({x}) continued fraction did not converge", value=h)


def _expn_series(n, x):
    if n == 1:
        ans = -math.log(x) - EULER_GAMMA
    else:
        ans = 1.0 / (n - 1)
    fact = 1.0
    for i in range(1, 10_000):
        fact *= -x / i
        if i != n - 1:
            term = -fact / (i - n + 1)
        else:
            psi = -EULER_GAMMA + math.fsum(1.0 / j for j in range(1, n))
            term = fact * (-math.log(x) + psi)
        ans += term
        if abs(term) < abs(ans) * _EPS:
            return ans
    raise NonConvergence(f"E_{n}({x}) series did not converge", value=ans)


def expn(n: int, x: float) -> float:
    """Generalized exponential integral E_n(x) = int_1^inf e^{-xt} t^{-n} dt.

    Power series for x <= 1, continued fraction above.
    """
    if n < 0 or int(n) != n:
        raise DomainError(f"expn order must be a non-negative integer, got {n!r}")
    n = int(n)
    x = float(x)
    if not x > 0.0:
        if x == 0.0 and n > 1:
            return 1.0 / (n - 1)
        raise DomainError(f"expn requires x > 0, got {x!r}")
    if n == 0:
        return math.exp(-x) / x
    if x > 1.0:
        return math.exp(-x) * _expn_scaled_cf(n, x)
    return _expn_series(n, x)


def log_expn(n: int, x: float) -> float:
    """ln E_n(x); stays finite where E_n itself underflows."""
    if x > 1.0 and n >= 1:
        return -x + math.log(_expn_scaled_cf(int(n), float(x)))
    return math.log(expn(n, x))


def exp_integral_e1(a: float) -> float:
    """E_1(a) = int_a^inf e^{-u}/u du for a > 0."""
    if not a > 0:
        raise DomainError(f"exp_integral_e1 requires a > 0, got {a!r}")
    return expn(1, a)


# ---------------------------------------------------------------------------
# Adaptive Gauss-Kronrod quadrature
# ---------------------------------------------------------------------------

# 15-point Kronrod abscissae (descending, last is the centre) and weights;
# the 7-point Gauss rule uses every second abscissa.
_XGK = np.array([
    0.991455371120812639206854697526329,
    0.949107912342758524526189684047851,
    0.864864423359769072789712788640926,
    0.741531185599394439863864773280788,
    0.586087235467691130294144845693013,
    0.405845151377397166906606412076961,
    0.207784955007898467600689403773245,
    0.000000000000000000000000000000000,
])
_WGK = np.array([
    0.022935322010529224963732008058970,
    0.063092092629978553290700663189204,
    0.104790010322250183839876322541518,
    0.140653259715525918745189590510238,
    0.169004726639267902826583426598550,
    0.190350578064785409913256402421014,
    0.204432940075298892414161999234649,
    0.209482141084727828012999174891714,
])
_WG = np.array([
    0.129484966168869693270611432679082,
    0.279705391489276667901467771423780,
    0.381830050505118944950369775488975,
    0.417959183673469387755102040816327,
])

_NODES = np.concatenate([-_XGK[:-1], _XGK[::-1]])  # ascending, 15 points
_WK15 = np.concatenate([_WGK[:-1], _WGK[::-1]])
_WG7 = np.zeros(15)
_WG7[[1, 3, 5]] = _WG[:3]
_WG7[[9, 11, 13]] = _WG[2::-1]
_WG7[7] = _WG[3]


@dataclass(frozen=True)
class QuadratureSpec:
    """Tolerances for :func:`integrate` and :func:`integrate_radial`.

    A run succeeds once the summed panel error estimate is at most
    ``max(rel_tol * |I|, abs_tol)``.
    """

    rel_tol: float = 1e-10
    abs_tol: float = 1e-14
    max_subdivisions: int = 200

    def __post_init__(self):
        if not self.rel_tol > 0 or not self.abs_tol > 0:
            raise ValueError("quadrature tolerances must be positive")
        if self.max_subdivisions < 1:
            raise ValueError("max_subdivisions must be at least 1")


DEFAULT_QUADRATURE = QuadratureSpec()


def _kronrod_panels(f, lo, hi):
    """Apply the G7/K15 pair to each panel [lo_i, hi_i]."""
    centre = 0.5 * (lo + hi)
    half = 0.5 * (hi - lo)
    x = centre[:, None] + half[:, None] * _NODES[None, :]
    fx = np.asarray(f(x.ravel()), dtype=float).reshape(x.shape)
    if not np.all(np.isfinite(fx)):
        bad = x[~np.isfinite(fx)][0]
        raise FloatingPointError(f"integrand is not finite at x = {bad!r}")
    resk = fx @ _WK15
    resg = fx @ _WG7
    resabs = np.abs(fx) @ _WK15
    mean = resk / 2.0
    resasc = np.abs(fx - mean[:, None]) @ _WK15
    err = np.abs(resk - resg) * half
    resk = resk * half
    resabs = resabs * np.abs(half)
    resasc = resasc * np.abs(half)
    # QUADPACK error scaling: |K-G| badly overestimates the Kronrod error.
    with np.errstate(divide="ignore", invalid="ignore"):
        scaled = resasc * np.minimum(1.0, (200.0 * err / resasc) ** 1.5)
    err = np.where((resasc > 0) & (err > 0), scaled, err)
    err = np.maximum(err, 50.0 * _EPS * resabs)
    return resk, err


def integrate(f: Callable, lo: float, hi: float, spec: QuadratureSpec = DEFAULT_QUADRATURE,
              initial_panels: int = 4):
    """Adaptive Gauss-Kronrod integral of ``f`` over the finite interval [lo, hi].

    ``f`` is called with 1-D numpy arrays of abscissae and must be vectorized.
    Endpoints are never evaluated, so integrable endpoint singularities are
    allowed.

    Returns
    -------
    (value, error_estimate)

    Raises
    ------
    NonConvergence
        When ``spec.max_subdivisions`` panels are not enough; the partial
        value and error are attached to the exception.
    """
    lo = float(lo)
    hi = float(hi)
    if not (math.isfinite(lo) and math.isfinite(hi)):
        raise ValueError("integrate needs finite limits; use integrate_radial for [0, inf)")
    if lo == hi:
        return 0.0, 0.0
    n0 = max(1, min(initial_panels, spec.max_subdivisions))
    edges = np.linspace(lo, hi, n0 + 1)
    vals, errs = _kronrod_panels(f, edges[:-1], edges[1:])
    heap = [(-e, a, b, v) for a, b, v, e in zip(edges[:-1], edges[1:], vals, errs)]
    heapq.heapify(heap)
    total = math.fsum(vals)
    total_err = math.fsum(errs)
    while total_err > max(spec.rel_tol * abs(total), spec.abs_tol):
        if len(heap) >= spec.max_subdivisions:
            raise NonConvergence(
                f"integral did not reach tolerance within {spec.max_subdivisions} panels",
                value=total, error=total_err)
        neg_err, a, b, v = heapq.heappop(heap)
        mid = 0.5 * (a + b)
        if not (a < mid < b):
            raise NonConvergence("panel width reached floating-point resolution",
                                 value=total, error=total_err)
        v2, e2 = _kronrod_panels(f, np.array([a, mid]), np.array([mid, b]))
        heapq.heappush(heap, (-e2[0], a, mid, v2[0]))
        heapq.heappush(heap, (-e2[1], mid, b, v2[1]))
        # resum rather than update incrementally to avoid drift
        total = math.fsum(item[3] for item in heap)
        total_err = math.fsum(-item[0] for item in heap)
    return total, total_err


_LOG_2 = math.log(2.0)


def integrate_radial(f: Callable, support=(0.0, math.inf), spec: QuadratureSpec = DEFAULT_QUADRATURE,
                     scale: float = 1.0):
    """Integrate ``f(r)`` over a radial support ``[0, R]`` or ``[0, inf)``.

    A semi-infinite support is mapped onto [0, 1) in two steps,
    u = ln(1 + r/scale) and then u = x/(1 - x). The log step turns power-law
    tails into exponential ones, so q-exponential densities converge as fast
    as exponential ones. ``scale`` should be a characteristic length of the
    integrand. Abscissae beyond the float range (r > ~1e308) contribute zero,
    and so do NaN integrand values beyond r = scale, which arise as an
    overflowed power times an underflowed decay. Infinite values still raise.
    """
    lo, hi = support
    if lo != 0:
        raise ValueError("radial supports start at r = 0")
    if math.isfinite(hi):
        return integrate(f, 0.0, hi, spec)
    if not scale > 0:
        raise ValueError("scale must be positive")

    def mapped(x):
        one_minus = 1.0 - x
        with np.errstate(over="ignore", divide="ignore"):
            u = x / one_minus
            r = scale * np.expm1(np.minimum(u, 709.0))
            jac = scale * np.exp(np.minimum(u, 709.0)) / (one_minus * one_minus)
        ok = np.isfinite(jac) & np.isfinite(r) & (u < 709.0)
        out = np.zeros_like(x)
        if np.any(ok):
            with np.errstate(over="ignore", invalid="ignore"):
                vals = f(r[ok]) * jac[ok]
            # NaN in the tail is inf * 0: an overflowed power times an underflowed decay
            vals = np.where(np.isnan(vals) & (u[ok] > _LOG_2), 0.0, vals)
            out[ok] = vals
        return out

    return integrate(mapped, 0.0, 1.0, spec)


# ---------------------------------------------------------------------------
# Scalar minimization
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class MinimizeResult:
    argmin: float
    min_value: float
    evaluations: int
    converged: bool
    bracket: tuple = (math.nan, math.nan)


_GOLDEN = 0.5 * (3.0 - math.sqrt(5.0))


def minimize_scalar(f: Callable[[float], float], bracket, tol: float = 1e-10,
                    max_evaluations: int = 500, prescan: int | None = None) -> MinimizeResult:
    """Minimize a unimodal ``f`` on ``[lo, hi]`` by Brent's method.

    Golden-section steps are mixed with parabolic interpolation. The search
    stops once the bracketing interval is no wider than ``tol``.

    If ``prescan`` is given, ``f`` is first sampled on that many evenly spaced
    points, and the search is restricted to the two grid cells around the
    lowest sample. Ties go to the smaller abscissa.
    """
    lo, hi = (float(v) for v in bracket)
    if not lo < hi:
        raise InvalidBracket(f"bracket must satisfy lo < hi, got ({lo}, {hi})")
    if not tol > 0:
        raise ValueError("tol must be positive")
    evaluations = 0
    if prescan:
        grid = np.linspace(lo, hi, int(prescan))
        values = [f(float(g)) for g in grid]
        evaluations += len(grid)
        i = int(np.argmin(values))
        lo = float(grid[max(i - 1, 0)])
        hi = float(grid[min(i + 1, len(grid) - 1)])

    a, b = lo, hi
    x = w = v = a + _GOLDEN * (b - a)
    fx = fw = fv = f(x)
    evaluations += 1
    d = e = 0.0
    while True:
        xm = 0.5 * (a + b)
        tol1 = 0.25 * tol + 4.0 * _EPS * abs(x)
        tol2 = 2.0 * tol1
        if abs(x - xm) <= tol2 - 0.5 * (b - a):
            break
        if evaluations >= max_evaluations:
            raise NonConvergence(
                f"minimize_scalar exhausted {max_evaluations} evaluations", value=x)
        use_golden = True
        if abs(e) > tol1:
            r = (x - w) * (fx - fv)
            q = (x - v) * (fx - fw)
            p = (x - v) * q - (x - w) * r
            q = 2.0 * (q - r)
            if q > 0.0:
                p = -p
            q = abs(q)
            e_prev = e
            e = d
            if abs(p) < abs(0.5 * q * e_prev) and q * (a - x) < p < q * (b - x):
                d = p / q
                u = x + d
                if (u - a) < tol2 or (b - u) < tol2:
                    d = tol1 if xm >= x else -tol1
                use_golden = False
        if use_golden:
            e = (a - x) if x >= xm else (b - x)
            d = _GOLDEN * e
        u = x + (d if abs(d) >= tol1 else math.copysign(tol1, d))
        fu = f(u)
        evaluations += 1
        if fu <= fx:
            if u >= x:
                a = x
            else:
                b = x
            v, fv = w, fw
            w, fw = x, fx
            x, fx = u, fu
        else:
            if u < x:
                a = u
            else:
                b = u
            if fu <= fw or w == x:
                v, fv = w, fw
                w, fw = u, fu
            elif fu <= fv or v == x or v == w:
                v, fv = u, fu
    converged = (b - a) <= tol + 16.0 * _EPS * abs(x)
    return MinimizeResult(argmin=x, min_value=fx, evaluations=evaluations,
                          converged=converged, bracket=(a, b))
