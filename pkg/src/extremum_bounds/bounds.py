"""Heisenberg-like bounds  <r^alpha>^{k/alpha} <p^k>  >=  f(k, alpha, q, N, d).

Every bound here comes from the semiclassical spin-dependent inequality

    <p^k>  >=  K_d(k) q^{-k/d} W_{1+k/d}[rho]        (reversed for k < 0)

evaluated on one of the extremizer densities of :mod:`extremum_bounds.densities`.
The closed forms below and :func:`dt_bound_from_density` are two independent
routes to the same coefficient. Coefficients are built in log space and
exponentiated once.

A :class:`ScalingLaw` stores the q-free coefficient; ``evaluate(N, q)``
supplies the N and q powers.
"""

from __future__ import annotations

import math
from fractions import Fraction
from dataclasses import dataclass, field, replace
from functools import lru_cache
from typing import Sequence

import numpy as np

from .densities import ExtremizerDensity, Family, entropic_moment
from .errors import DomainError, GammaDomainError, MixedDirection, NonConvergence
from .numerics import log_beta, log_expn, log_gamma, minimize_scalar

__all__ = [
    "LOWER",
    "UPPER",
    "ProductSpec",
    "ScalingLaw",
    "BoundChain",
    "DTBound",
    "BoundComparison",
    "spin_to_q",
    "kd_constant",
    "c_k",
    "daubechies_infimum",
    "daubechies_correction",
    "rigorous_kd_constant",
    "dt_bound_from_density",
    "maxent_bound",
    "maxent_coefficient_3d",
    "mininf_bound",
    "mininf_coefficient_3d",
    "maxtent_upper_bound",
    "maxtent_lower_bound",
    "optimize_tsallis_t",
    "chain_r2_pinv",
    "LITERATURE_MAXENT_RINV_P2",
    "compare_bounds",
]

LOWER = "lower"
UPPER = "upper"


@dataclass(frozen=True)
class ProductSpec:
    """The product <r^alpha>^{k/alpha} <p^k>."""

    alpha: float
    k: float

    def __post_init__(self):
        if self.alpha == 0:
            raise DomainError("the position moment order alpha must be non-zero")

    @property
    def label(self):
        """Compact text form, e.g. ``<r^2>^(1/2)<p>`` or ``<r^-1>^-2<p^2>``."""
        ratio = Fraction(self.k).limit_denominator(1000) / Fraction(self.alpha).limit_denominator(1000)
        outer = "" if ratio == 1 else f"^{_power(ratio)}"
        return f"<{_base('r', self.alpha)}>{outer}<{_base('p', self.k)}>"


def _num(x):
    return str(int(x)) if float(x).is_integer() else f"{x:g}"


def _base(symbol, order):
    return symbol if order == 1 else f"{symbol}^{_num(order)}"


def _power(f):
    if f.denominator == 1:
        return str(f.numerator)
    return f"({f.numerator}/{f.denominator})"


@dataclass(frozen=True)
class ScalingLaw:
    """coefficient * N^exponent_N * q^exponent_q, as a lower or upper bound.

    ``q`` is the spin multiplicity the law was requested for and is used by
    :meth:`evaluate` when no other ``q`` is given.
    """

    direction: str
    coefficient: float
    exponent_N: float
    exponent_q: float
    family: str
    product: ProductSpec
    d: int = 3
    t: float | None = None
    q: int = 2
    validity: dict = field(default_factory=dict, compare=False)

    def __post_init__(self):
        if self.direction not in (LOWER, UPPER):
            raise ValueError(f"direction must be 'lower' or 'upper', got {self.direction!r}")
        if not self.coefficient > 0:
            raise ValueError(f"coefficient must be positive, got {self.coefficient!r}")

    def coefficient_at(self, q=None):
        """The N-prefactor once q is fixed."""
        q = self.q if q is None else q
        return self.coefficient * q ** self.exponent_q

    def evaluate(self, N, q=None):
        return self.coefficient_at(q) * np.power(N, self.exponent_N)

    def power(self, p):
        """The law for the product raised to the power ``p``; p < 0 flips the direction."""
        if p == 0:
            raise ValueError("power must be non-zero")
        direction = self.direction if p > 0 else (UPPER if self.direction == LOWER else LOWER)
        return replace(self, direction=direction, coefficient=self.coefficient ** p,
                       exponent_N=self.exponent_N * p, exponent_q=self.exponent_q * p,
                       validity={**self.validity, "power": p})


@dataclass(frozen=True)
class BoundChain:
    lower: ScalingLaw
    upper: ScalingLaw

    def holds(self, N, q=None):
        return bool(self.lower.evaluate(N, q) <= self.upper.evaluate(N, q))


@dataclass(frozen=True)
class DTBound:
    """Bound from the Daubechies-Thakkar inequality on a concrete density.

    ``momentum_bound`` bounds <p^k>; ``product_bound`` bounds
    <r^alpha>^{k/alpha} <p^k> with alpha, <r^alpha> taken from the density's
    constraint. For k = 0 both equal N and the direction is ``"equality"``.
    """

    direction: str
    momentum_bound: float
    product_bound: float


def spin_to_q(s: float) -> int:
    """Spin multiplicity q = 2s + 1 for a (half-)integer spin s >= 0."""
    q = 2 * s + 1
    if s < 0 or not float(q).is_integer():
        raise DomainError(f"spin must be a non-negative half-integer, got {s!r}")
    return int(q)


def _direction(k):
    return LOWER if k > 0 else UPPER


# ---------------------------------------------------------------------------
# Semiclassical constants
# ---------------------------------------------------------------------------


def kd_constant(d: int, k: float) -> float:
    """K_d(k) = d/(k+d) (2 pi)^k Gamma(1 + d/2)^{k/d} / pi^{k/2}."""
    if k + d == 0:
        raise DomainError("K_d(k) is undefined at k = -d")
    return d / (k + d) * math.exp(k * math.log(2.0 * math.pi) + (k / d) * log_gamma(1.0 + d / 2.0)
                                  - 0.5 * k * math.log(math.pi))


def c_k(k: float) -> float:
    """Three-dimensional spin-1/2 constant 3 (3 pi^2)^{k/3} / (k + 3)."""
    if k == -3:
        raise DomainError("c_k is undefined at k = -3")
    return 3.0 * (3.0 * math.pi ** 2) ** (k / 3.0) / (k + 3.0)


def daubechies_infimum(d: int, k: float, grid: int = 64, tol: float = 1e-10):
    """Minimize ln[a^{-d/k} / E_2(a)] over u = ln a.

    The inner integral int_a^inf e^{-u}(u - a)/u du equals
    e^{-a} - a E_1(a) = E_2(a). Returns the :class:`MinimizeResult` in the
    variable u.
    """
    if not (d >= 1 and k > 0):
        raise DomainError(f"rigorous correction needs d >= 1 and k > 0, got d={d}, k={k}")
    ratio = d / k

    def objective(u):
        return -ratio * u - log_expn(2, math.exp(u))

    result = minimize_scalar(objective, (math.log(1e-8), math.log(1e2)), tol=tol, prescan=grid)
    if not result.converged:
        raise NonConvergence(f"infimum for B({d}, {k}) did not converge", value=result.argmin)
    return result


@lru_cache(maxsize=None)
def daubechies_correction(d: int, k: float, grid: int = 64) -> float:
    """B(d, k) = {Gamma(d/k) inf_a [a^{-d/k} / E_2(a)]}^{-k/d}."""
    res = daubechies_infimum(d, k, grid)
    return math.exp(-(k / d) * (log_gamma(d / k) + res.min_value))


def rigorous_kd_constant(d: int, k: float, grid: int = 64) -> float:
    """K'_d(k) = K_d(k) * B(d, k)."""
    return kd_constant(d, k) * daubechies_correction(d, k, grid)


def dt_bound_from_density(rho: ExtremizerDensity, k: float, q: int | None = None,
                          rigorous: bool = False) -> DTBound:
    """Apply the Daubechies-Thakkar inequality to the closed-form W_{1+k/d}[rho]."""
    d = rho.d
    q = rho.system.q if q is None else q
    if k == 0:
        return DTBound("equality", rho.N, rho.N)
    if rigorous and k < 0:
        raise DomainError("the rigorous constant exists only for k > 0")
    w = entropic_moment(rho, 1.0 + k / d, "analytic").value
    const = rigorous_kd_constant(d, k) if rigorous else kd_constant(d, k)
    momentum = const * q ** (-k / d) * w
    alpha, value = rho.constraint.alpha, rho.constraint.value
    product = value ** (k / alpha) * momentum
    return DTBound(_direction(k), momentum, product)


# ---------------------------------------------------------------------------
# Closed-form coefficients (q-free, natural log)
# ---------------------------------------------------------------------------


def _gamma_arg(name, value):
    if not value > 0:
        raise GammaDomainError(name, value)
    return value


def _log_maxent(d, k, alpha):
    return ((d - 2) * k / d * math.log(2.0)
            + (alpha + d) * (d + k) / (alpha * d) * math.log(d)
            - (alpha + d) / alpha * math.log(d + k)
            + k * (1.0 / d - 1.0 / alpha) * math.log(alpha)
            + (2.0 * k / d) * log_gamma(d / 2.0)
            - (k / d) * log_gamma(d / alpha))


def _log_mininf(d, k):
    return ((d + 1) * math.log(d) + k * math.log(d - 1) - (d + 1) * math.log(d + k)
            + k / (2.0 * d) * math.log(math.pi)
            + (k / d) * (log_gamma(d / 2.0 + 1.0) - log_gamma((d + 1) / 2.0)))


def _check_subcritical(t, alpha, k):
    if not 0.0 < t < 1.0:
        raise DomainError(f"subcritical MaxTent bound needs 0 < t < 1, got t = {t}")
    if not alpha > 3.0 * (1.0 - t) / t:
        raise DomainError(
            f"subcritical MaxTent bound needs alpha > 3(1-t)/t = {3.0 * (1.0 - t) / t:.6g}, "
            f"got alpha = {alpha}")
    if not -3.0 < k < 0.0:
        raise DomainError(f"subcritical MaxTent bound needs -3 < k < 0, got k = {k}")
    s = 1.0 / (1.0 - t)
    _gamma_arg("3/alpha", 3.0 / alpha)
    _gamma_arg("(k+3)/(3(1-t)) - 3/alpha", (k + 3.0) * s / 3.0 - 3.0 / alpha)
    _gamma_arg("1/(1-t) - 3/alpha", s - 3.0 / alpha)
    _gamma_arg("t/(1-t) - 3/alpha", s - 1.0 - 3.0 / alpha)


def _log_maxtent_upper(t, alpha, k):
    _check_subcritical(t, alpha, k)
    s = 1.0 / (1.0 - t)
    e = (1.0 / alpha + 1.0 / 3.0) * k + 1.0
    return (-(k / 3.0) * math.log(2.0) + (k / 3.0) * math.log(math.pi) + e * math.log(3.0)
            + (alpha - 3.0) * k / (3.0 * alpha) * math.log(alpha)
            - (k / 3.0) * log_gamma(3.0 / alpha)
            + (k / 3.0 + 1.0) * log_gamma(s)
            + log_gamma((k + 3.0) * s / 3.0 - 3.0 / alpha)
            - e * log_gamma(s - 3.0 / alpha)
            + (k / alpha) * log_gamma(s - 1.0 - 3.0 / alpha)
            - math.log(k + 3.0)
            - log_gamma((k + 3.0) * s / 3.0))


def _check_compact(t, alpha, k):
    if not t > 1.0:
        raise DomainError(f"compact MaxTent bound needs t > 1, got t = {t}")
    if not alpha > 0:
        raise DomainError(f"compact MaxTent bound needs alpha > 0, got alpha = {alpha}")
    if not k > 0:
        raise DomainError(f"compact MaxTent bound needs k > 0, got k = {k}")


def _log_maxtent_lower(t, alpha, k):
    _check_compact(t, alpha, k)
    g = (k + 3.0 * t) / (3.0 * (t - 1.0))
    e = (1.0 / alpha + 1.0 / 3.0) * k + 1.0
    return ((k / 3.0) * math.log(math.pi / 2.0) + e * math.log(3.0) + (k / 3.0) * math.log(alpha)
            - (k / alpha) * math.log(alpha * t / (t - 1.0) + 3.0) - math.log(k + 3.0)
            + log_gamma(g) + log_gamma(3.0 / alpha) - log_gamma(g + 3.0 / alpha)
            - (1.0 + k / 3.0) * log_beta(3.0 / alpha, t / (t - 1.0)))


def _exponent_N(alpha, k, d):
    return k * (1.0 / alpha + 1.0 / d) + 1.0


def _check_common(d, k, q):
    if int(d) != d or d < 1:
        raise DomainError(f"dimension must be an integer >= 1, got {d!r}")
    if int(q) != q or q < 1:
        raise DomainError(f"spin multiplicity must be a positive integer, got {q!r}")
    if not k > 0:
        raise DomainError(f"k must be positive, got {k}")


# ---------------------------------------------------------------------------
# Bound families
# ---------------------------------------------------------------------------


def maxent_bound(d: int, k: float, alpha: float, q: int = 2) -> ScalingLaw:
    """Lower bound from the Shannon-maximizing density (alpha > 0, k > 0)."""
    _check_common(d, k, q)
    if not alpha > 0:
        raise DomainError(f"MaxEnt bound needs alpha > 0, got {alpha}")
    return ScalingLaw(LOWER, math.exp(_log_maxent(d, k, alpha)), _exponent_N(alpha, k, d), -k / d,
                      family="MaxEnt", product=ProductSpec(alpha, k), d=int(d), q=int(q),
                      validity={"alpha": "> 0", "k": "> 0"})


def maxent_coefficient_3d(k: float, alpha: float) -> float:
    """Three-dimensional spin-1/2 MaxEnt coefficient in its own closed form."""
    return (2.0 ** (-2.0 * k / 3.0) * math.pi ** (k / 3.0)
            * 3.0 ** ((alpha + 3.0) * (k + 3.0) / (3.0 * alpha))
            * math.exp(-(k / 3.0) * log_gamma(3.0 / alpha))
            * alpha ** (k * (alpha - 3.0) / (3.0 * alpha))
            / (k + 3.0) ** (1.0 + 3.0 / alpha))


def mininf_bound(d: int, k: float, q: int = 2) -> ScalingLaw:
    """Lower bound on <r^-1>^{-k} <p^k> from the Fisher-minimizing density."""
    _check_common(d, k, q)
    if d < 2:
        raise DomainError("MinInf bound needs d >= 2")
    return ScalingLaw(LOWER, math.exp(_log_mininf(d, k)), _exponent_N(-1.0, k, d), -k / d,
                      family="MinInf", product=ProductSpec(-1.0, k), d=int(d), q=int(q),
                      validity={"d": ">= 2", "k": "> 0"})


def mininf_coefficient_3d(k: float) -> float:
    """3^{k/3+4} pi^{k/3} / (k+3)^4, the d = 3, q = 2 MinInf coefficient."""
    return 3.0 ** (k / 3.0 + 4.0) * math.pi ** (k / 3.0) / (k + 3.0) ** 4


def maxtent_upper_bound(t: float, alpha: float, k: float, q: int = 2) -> ScalingLaw:
    """Upper bound (k < 0) from the heavy-tailed Tsallis maximizer, d = 3."""
    if int(q) != q or q < 1:
        raise DomainError(f"spin multiplicity must be a positive integer, got {q!r}")
    coef = math.exp(_log_maxtent_upper(float(t), float(alpha), float(k)))
    return ScalingLaw(UPPER, coef, _exponent_N(alpha, k, 3), -k / 3.0,
                      family="MaxTent", product=ProductSpec(alpha, k), d=3, t=float(t), q=int(q),
                      validity={"t": "(0, 1)", "alpha": "> 3(1-t)/t", "k": "(-3, 0)"})


def maxtent_lower_bound(t: float, alpha: float, k: float, q: int = 2) -> ScalingLaw:
    """Lower bound (k > 0) from the compactly supported Tsallis maximizer, d = 3."""
    if int(q) != q or q < 1:
        raise DomainError(f"spin multiplicity must be a positive integer, got {q!r}")
    coef = math.exp(_log_maxtent_lower(float(t), float(alpha), float(k)))
    return ScalingLaw(LOWER, coef, _exponent_N(alpha, k, 3), -k / 3.0,
                      family="MaxTent", product=ProductSpec(alpha, k), d=3, t=float(t), q=int(q),
                      validity={"t": "> 1", "alpha": "> 0", "k": "> 0"})


# ---------------------------------------------------------------------------
# Tsallis-parameter selection
# ---------------------------------------------------------------------------

COMPACT = "compact"
SUBCRITICAL = "subcritical"


def _bisect(f, lo, hi, tol=1e-13, max_iter=200):
    flo = f(lo)
    for _ in range(max_iter):
        mid = 0.5 * (lo + hi)
        if abs(hi - lo) <= tol * max(1.0, abs(mid)):
            break
        fm = f(mid)
        if (fm > 0) == (flo > 0):
            lo, flo = mid, fm
        else:
            hi = mid
    return 0.5 * (lo + hi)


def _subcritical_floor(alpha, k):
    """Infimum of valid t for the subcritical bound at (alpha, k)."""
    return max(3.0 / (alpha + 3.0), 1.0 - alpha * (k + 3.0) / 9.0)


def optimize_tsallis_t(spec: ProductSpec, q: int = 2, branch: str | None = None,
                       criterion: str = "maxent-crossing", resolution: float | None = 0.1,
                       t_max: float = 50.0, grid: int = 400):
    """Choose the Tsallis parameter t for the MaxTent bound on ``spec``.

    The branch follows the sign of k: ``compact`` (t > 1, lower bound) for
    k > 0 and ``subcritical`` (0 < t < 1, upper bound) for k < 0.

    The coefficient as a function of t is extremal at t = 1 + k/3. At that
    value the Tsallis maximizer is the extremizer of the very entropic moment
    the bound uses, so it is the most conservative member of the family.
    Away from it the bound tightens monotonically over the scanned range.

    ``criterion="maxent-crossing"`` (default) returns the first t, moving away
    from 1 + k/3 and from t = 1, at which the MaxTent bound becomes at least
    as tight as the MaxEnt bound. With ``resolution`` set, that t is snapped
    outward to the resolution grid. The snap goes up for compact and down
    for subcritical, and is only applied if the snapped t is still valid.

    ``criterion="extremum"`` returns the tightest coefficient on a log-spaced
    grid over the validity interval, refined by :func:`minimize_scalar`. For
    the compact branch this is typically the upper end ``t_max``.

    Returns
    -------
    (t_star, law)
    """
    alpha, k = float(spec.alpha), float(spec.k)
    if branch is None:
        branch = COMPACT if k > 0 else SUBCRITICAL
    if branch == COMPACT:
        if not k > 0:
            raise DomainError("the compact branch gives lower bounds and needs k > 0")
        if not alpha > 0:
            raise DomainError("the compact branch needs alpha > 0")
        log_coef = lambda t: _log_maxtent_lower(t, alpha, k)  # noqa: E731
        build = lambda t: maxtent_lower_bound(t, alpha, k, q)  # noqa: E731
        ts = 1.0 + np.logspace(-4.0, math.log10(t_max - 1.0), grid)
        sign = 1.0  # larger coefficient is tighter
    elif branch == SUBCRITICAL:
        if not k < 0:
            raise DomainError("the subcritical branch gives upper bounds and needs k < 0")
        if not (alpha > 0 and k > -3.0):
            raise DomainError("the subcritical branch needs alpha > 0 and -3 < k < 0")
        t_floor = _subcritical_floor(alpha, k)
        if not t_floor < 1.0 - 1e-4:
            raise DomainError(f"no valid t in (0, 1) for alpha = {alpha}, k = {k}")
        log_coef = lambda t: _log_maxtent_upper(t, alpha, k)  # noqa: E731
        build = lambda t: maxtent_upper_bound(t, alpha, k, q)  # noqa: E731
        gap = np.logspace(math.log10((1.0 - t_floor) * (1.0 - 1e-6)), -4.0, grid)
        ts = 1.0 - gap
        sign = -1.0  # smaller coefficient is tighter
    else:
        raise ValueError(f"unknown branch {branch!r}")

    if criterion == "extremum":
        values = np.array([sign * log_coef(t) for t in ts])
        i = int(np.argmax(values))
        if 0 < i < len(ts) - 1:
            lo, hi = sorted((ts[i - 1], ts[i + 1]))
            res = minimize_scalar(lambda t: -sign * log_coef(t), (lo, hi), tol=1e-9)
            t_star = res.argmin if -res.min_value >= values[i] else float(ts[i])
        else:
            t_star = float(ts[i])
        return t_star, build(t_star)

    if criterion != "maxent-crossing":
        raise ValueError(f"unknown criterion {criterion!r}")
    log_ref = _log_maxent(3, k, alpha)
    t_w = 1.0 + k / 3.0
    gap_fn = lambda t: sign * (log_coef(t) - log_ref)  # noqa: E731  >= 0 once at least as tight
    beyond = [t for t in ts if (t > t_w if branch == COMPACT else t < t_w)]
    if branch == SUBCRITICAL:
        beyond = beyond[::-1]
    prev = t_w
    t_cross = None
    for t in beyond:
        if gap_fn(t) >= 0:
            t_cross = t if prev == t_w and gap_fn(prev) >= 0 else _bisect(gap_fn, prev, t)
            break
        prev = t
    if t_cross is None:
        raise NonConvergence(
            f"MaxTent never reaches the MaxEnt coefficient beyond t = {t_w:.6g} "
            f"for alpha = {alpha}, k = {k}; try criterion='extremum'")
    t_star = t_cross
    if resolution:
        steps = t_cross / resolution
        snapped = (math.ceil(steps - 1e-9) if branch == COMPACT else math.floor(steps + 1e-9))
        candidate = round(snapped * resolution, 12)
        try:
            if gap_fn(candidate) >= -1e-12:
                t_star = candidate
        except DomainError:
            pass
    return t_star, build(t_star)


# ---------------------------------------------------------------------------
# Chains and comparisons
# ---------------------------------------------------------------------------

CHAIN_T = 0.78


def chain_r2_pinv(q: int = 2) -> BoundChain:
    """(12N)^{-1/3} <= <r^2><p^-1>^{-2} <= 0.4958 N^{-1/3} for N-electron systems.

    The upper member is the subcritical MaxTent law at t = 0.78, alpha = 2,
    k = -1, raised to the power -2 and kept in its published orientation.
    Inverting an upper bound on <r^2>^{-1/2}<p^-1> strictly yields a lower
    bound, so :meth:`ScalingLaw.power` would flip it. The ``validity``
    record notes this.
    """
    if q != 2:
        raise DomainError("the <r^2><p^-1>^-2 chain is stated for electrons only (q = 2)")
    product = ProductSpec(2.0, -1.0)
    lower = ScalingLaw(LOWER, 12.0 ** (-1.0 / 3.0), -1.0 / 3.0, 0.0, family="(12N)^(-1/3)",
                       product=product, q=2, validity={"q": 2})
    inverted = maxtent_upper_bound(CHAIN_T, 2.0, -1.0, q).power(-2)
    upper = replace(inverted, direction=UPPER, product=product,
                    validity={**inverted.validity, "orientation": "as published; power(-2) gives lower"})
    return BoundChain(lower, upper)


LITERATURE_MAXENT_RINV_P2 = ScalingLaw(
    LOWER, 0.4615, -1.0 / 3.0, 0.0, family="MaxEnt (literature)", product=ProductSpec(-1.0, 2.0),
    q=2, validity={"q": 2, "source": "reference constant, not computed"})


@dataclass(frozen=True)
class BoundComparison:
    """Laws ranked tightest first, with ``ratios[i][j] = value_i / value_j``."""

    direction: str
    N: float
    ranking: list
    values: list
    ratios: list

    @property
    def best_ratio(self):
        return self.ratios[0][1] if len(self.values) > 1 else 1.0


def compare_bounds(laws: Sequence[ScalingLaw], N: float, q: int | None = None) -> BoundComparison:
    """Evaluate each law at (N, q) and rank by tightness."""
    laws = list(laws)
    if not laws:
        raise ValueError("nothing to compare")
    directions = {law.direction for law in laws}
    if len(directions) > 1:
        raise MixedDirection("cannot rank lower bounds against upper bounds")
    products = {(law.product.alpha, law.product.k) for law in laws}
    if len(products) > 1:
        raise ValueError(f"laws describe different products: {sorted(products)}")
    direction = directions.pop()
    scored = [(law, float(law.evaluate(N, q))) for law in laws]
    scored.sort(key=lambda item: item[1], reverse=(direction == LOWER))
    values = [v for _, v in scored]
    ratios = [[vi / vj for vj in values] for vi in values]
    return BoundComparison(direction, N, [law for law, _ in scored], values, ratios)
