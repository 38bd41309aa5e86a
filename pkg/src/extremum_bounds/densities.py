"""Extremum-entropy radial densities and their information functionals.

Four families are built from the constraints (N, <r^alpha>):

* ``MaxEnt``  - maximizer of the Shannon entropy, exp(-lambda - mu r^alpha)
* ``MinInf``  - minimizer of the Fisher information under (N, <r^-1>), a pure
  exponential
* ``MaxTentSubcritical`` - Tsallis maximizer for 0 < t < 1, a heavy-tailed
  q-exponential on [0, inf)
* ``MaxTentCompact`` - Tsallis maximizer for t > 1, supported on [0, a]

Densities are radial, normalized to N in d dimensions, and immutable. All
closed-form work is done in log space; integrals over the density go
through :func:`extremum_bounds.numerics.integrate_radial`.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from enum import Enum
from types import MappingProxyType
from typing import Mapping

import numpy as np

from .errors import DivergentMoment, DomainError, GammaDomainError
from .numerics import DEFAULT_QUADRATURE, QuadratureSpec, integrate_radial, log_beta, log_gamma

__all__ = [
    "Family",
    "SystemSpec",
    "Constraint",
    "MomentResult",
    "ExtremizerDensity",
    "build_maxent",
    "build_mininf",
    "build_maxtent_subcritical",
    "build_maxtent_compact",
    "rebuild",
    "match_moment",
    "eval_density",
    "entropic_moment",
    "radial_expectation",
    "shannon_entropy",
    "tsallis_entropy",
    "fisher_information",
    "log_solid_angle",
]

_LOG_4PI = math.log(4.0 * math.pi)


class Family(str, Enum):
    MAXENT = "MaxEnt"
    MININF = "MinInf"
    MAXTENT_SUBCRITICAL = "MaxTentSubcritical"
    MAXTENT_COMPACT = "MaxTentCompact"


@dataclass(frozen=True)
class SystemSpec:
    """Dimension ``d``, particle number ``N`` and spin multiplicity ``q = 2s + 1``."""

    d: int = 3
    N: float = 1.0
    q: int = 2

    def __post_init__(self):
        if int(self.d) != self.d or self.d < 1:
            raise DomainError(f"dimension must be an integer >= 1, got {self.d!r}")
        if not self.N > 0:
            raise DomainError(f"particle number must be positive, got {self.N!r}")
        if int(self.q) != self.q or self.q < 1:
            raise DomainError(f"spin multiplicity must be a positive integer, got {self.q!r}")


@dataclass(frozen=True)
class Constraint:
    """The radial expectation value ``<r^alpha> = value``."""

    alpha: float
    value: float

    def __post_init__(self):
        if not self.value > 0:
            raise DomainError(f"<r^alpha> must be positive, got {self.value!r}")


@dataclass(frozen=True)
class MomentResult:
    order: float
    value: float
    method: str


def log_solid_angle(d):
    """ln of the surface area 2 pi^{d/2} / Gamma(d/2) of the unit sphere in R^d."""
    return math.log(2.0) + 0.5 * d * math.log(math.pi) - log_gamma(0.5 * d)


def _positive_gamma_arg(name, value):
    if not value > 0:
        raise GammaDomainError(name, value)
    return value


@dataclass(frozen=True, eq=False)
class ExtremizerDensity:
    """A constructed radial density. Use the ``build_*`` functions, not this class."""

    family: Family
    system: SystemSpec
    constraint: Constraint
    params: Mapping[str, float]
    support: tuple
    t: float | None = None
    length_scale: float = field(default=1.0, repr=False)

    @property
    def d(self):
        return self.system.d

    @property
    def N(self):
        return self.system.N

    def __call__(self, r):
        return eval_density(self, r)

    # Family hooks ---------------------------------------------------------
    def log_density(self, r):
        raise NotImplementedError

    def dlog_density(self, r):
        """d/dr ln rho(r)."""
        raise NotImplementedError

    def log_entropic_moment(self, n):
        """ln W_n from the closed form."""
        raise NotImplementedError

    def check_entropic_moment(self, n):
        if not n > 0:
            raise DivergentMoment(f"entropic moment order must be positive, got {n}")

    def check_radial(self, m):
        if not m > -self.d:
            raise DivergentMoment(f"<r^{m}> diverges at the origin in d = {self.d}")

    def check_fisher(self):
        pass


class _MaxEnt(ExtremizerDensity):
    def log_density(self, r):
        lam, mu, al = self.params["lambda"], self.params["mu"], self.constraint.alpha
        with np.errstate(over="ignore"):
            return -lam - mu * np.power(r, al)

    def dlog_density(self, r):
        mu, al = self.params["mu"], self.constraint.alpha
        return -mu * al * np.power(r, al - 1.0)

    def log_entropic_moment(self, n):
        d, al = self.d, self.constraint.alpha
        lam, mu = self.params["lambda"], self.params["mu"]
        return (-n * lam + log_solid_angle(d) + log_gamma(d / al) - math.log(al)
                - (d / al) * math.log(n * mu))

    def check_fisher(self):
        al = self.constraint.alpha
        if not 2.0 * al - 2.0 + self.d > 0:
            raise DivergentMoment(f"Fisher information diverges at the origin for alpha = {al}")


class _MinInf(ExtremizerDensity):
    def log_density(self, r):
        return self.params["log_prefactor"] - self.params["decay"] * np.asarray(r, dtype=float)

    def dlog_density(self, r):
        return np.full_like(np.asarray(r, dtype=float), -self.params["decay"])

    def log_entropic_moment(self, n):
        d = self.d
        return (n * self.params["log_prefactor"] + log_solid_angle(d) + log_gamma(d)
                - d * math.log(n * self.params["decay"]))


class _MaxTentSubcritical(ExtremizerDensity):
    # rho = C t^s (a^alpha + r^alpha)^{-s},  s = 1/(1 - t) > 1

    def _s(self):
        return 1.0 / (1.0 - self.t)

    def log_density(self, r):
        al, s = self.constraint.alpha, self._s()
        log_a = self.params["log_a"]
        with np.errstate(divide="ignore"):
            log_r = np.log(r)
        return (self.params["log_C"] + s * math.log(self.t)
                - s * np.logaddexp(al * log_a, al * log_r))

    def dlog_density(self, r):
        al, s = self.constraint.alpha, self._s()
        r = np.asarray(r, dtype=float)
        x = np.exp(al * (np.log(r) - self.params["log_a"]))
        return -s * al * x / (r * (1.0 + x))

    def log_entropic_moment(self, n):
        al, s = self.constraint.alpha, self._s()
        return (n * self.params["log_C"] + n * s * math.log(self.t) + _LOG_4PI
                + (3.0 - al * n * s) * self.params["log_a"] - math.log(al)
                + log_beta(3.0 / al, n * s - 3.0 / al))

    def check_entropic_moment(self, n):
        super().check_entropic_moment(n)
        al, s = self.constraint.alpha, self._s()
        if not n * s > 3.0 / al:
            raise DivergentMoment(
                f"W_{n} diverges: the q-exponential tail needs n/(1-t) > 3/alpha "
                f"({n * s:.6g} <= {3.0 / al:.6g})")

    def check_radial(self, m):
        super().check_radial(m)
        al, s = self.constraint.alpha, self._s()
        if not al * s - m > 3.0:
            raise DivergentMoment(f"<r^{m}> diverges in the power-law tail (needs m < {al * s - 3.0:.6g})")


class _MaxTentCompact(ExtremizerDensity):
    # rho = C t^{-s} (a^alpha - r^alpha)^s on [0, a],  s = 1/(t - 1) > 0

    def _s(self):
        return 1.0 / (self.t - 1.0)

    def log_density(self, r):
        al, s = self.constraint.alpha, self._s()
        log_a = self.params["log_a"]
        r = np.asarray(r, dtype=float)
        inside = r < self.support[1]
        with np.errstate(divide="ignore", invalid="ignore"):
            gap = -np.expm1(al * (np.log(r) - log_a))  # 1 - (r/a)^alpha
            out = self.params["log_C"] - s * math.log(self.t) + s * (al * log_a + np.log(gap))
        return np.where(inside, out, -np.inf)

    def dlog_density(self, r):
        al, s = self.constraint.alpha, self._s()
        r = np.asarray(r, dtype=float)
        with np.errstate(divide="ignore", invalid="ignore"):
            lx = al * (np.log(r) - self.params["log_a"])
            out = -s * al * np.exp(lx) / (r * -np.expm1(lx))
        return np.where(r < self.support[1], out, 0.0)

    def log_entropic_moment(self, n):
        al, s = self.constraint.alpha, self._s()
        return (n * self.params["log_C"] - n * s * math.log(self.t) + _LOG_4PI
                + (3.0 + al * n * s) * self.params["log_a"] - math.log(al)
                + log_beta(3.0 / al, n * s + 1.0))

    def check_fisher(self):
        if not self.t < 2.0:
            raise DivergentMoment(
                f"Fisher information diverges at the support edge for t = {self.t} (needs t < 2)")


# ---------------------------------------------------------------------------
# Builders
# ---------------------------------------------------------------------------


def build_maxent(sys: SystemSpec, c: Constraint) -> ExtremizerDensity:
    """Shannon maximizer rho = exp(-lambda - mu r^alpha) for alpha > 0."""
    if not c.alpha > 0:
        raise DomainError(f"MaxEnt density needs alpha > 0, got {c.alpha}")
    d, N, al, m = sys.d, sys.N, float(c.alpha), float(c.value)
    mu = d * N / (al * m)
    # lambda from the normalization integral, then checked against the closed form
    lam = log_solid_angle(d) + log_gamma(d / al) - math.log(al) - (d / al) * math.log(mu) - math.log(N)
    lam_closed = (math.log(2.0) + 0.5 * d * math.log(math.pi) - (d / al) * math.log(d)
                  + (d / al - 1.0) * math.log(al) + (d / al) * math.log(m)
                  + log_gamma(d / al) - log_gamma(d / 2.0) - (d / al + 1.0) * math.log(N))
    if not math.isclose(lam, lam_closed, rel_tol=1e-11, abs_tol=1e-11):
        raise ArithmeticError(f"MaxEnt multiplier mismatch: {lam!r} vs closed form {lam_closed!r}")
    return _MaxEnt(
        family=Family.MAXENT, system=sys, constraint=Constraint(al, m),
        params=MappingProxyType({"lambda": lam, "mu": mu}),
        support=(0.0, math.inf), length_scale=mu ** (-1.0 / al))


def build_mininf(sys: SystemSpec, r_inv: float) -> ExtremizerDensity:
    """Fisher minimizer under (N, <r^-1>): an exponential with decay (d-1)<r^-1>/N."""
    d, N = sys.d, sys.N
    if d < 2:
        raise DomainError("MinInf density needs d >= 2 (the decay rate carries a factor d - 1)")
    if not r_inv > 0:
        raise DomainError(f"<r^-1> must be positive, got {r_inv}")
    r_inv = float(r_inv)
    decay = (d - 1) * r_inv / N
    log_pref = (-d * math.log(2.0) + 0.5 * (1 - d) * math.log(math.pi) + d * math.log(d - 1)
                - log_gamma(0.5 * (d + 1)) + (1 - d) * math.log(N) + d * math.log(r_inv))
    log_norm = math.log(N) + d * math.log(decay) - log_solid_angle(d) - log_gamma(d)
    if not math.isclose(log_pref, log_norm, rel_tol=1e-11, abs_tol=1e-11):
        raise ArithmeticError("MinInf prefactor disagrees with its normalization")
    return _MinInf(
        family=Family.MININF, system=sys, constraint=Constraint(-1.0, r_inv),
        params=MappingProxyType({"log_prefactor": log_pref, "decay": decay,
                                 "prefactor": math.exp(log_pref)}),
        support=(0.0, math.inf), length_scale=1.0 / decay)


def _exp_or_inf(x):
    # C alone can leave the float range near t = 1; all evaluation uses log_C
    return math.exp(x) if x < 709.0 else math.inf


def _require_three_dimensions(sys):
    if sys.d != 3:
        raise DomainError(f"MaxTent densities are only available for d = 3, got d = {sys.d}")


def build_maxtent_subcritical(sys: SystemSpec, c: Constraint, t: float) -> ExtremizerDensity:
    """Tsallis maximizer C[(a^alpha + r^alpha)/t]^{1/(t-1)} for 0 < t < 1."""
    _require_three_dimensions(sys)
    t = float(t)
    if not 0.0 < t < 1.0:
        raise DomainError(f"subcritical MaxTent needs 0 < t < 1, got t = {t}")
    al, m, N = float(c.alpha), float(c.value), sys.N
    if not al > 3.0 * (1.0 - t) / t:
        raise DomainError(
            f"subcritical MaxTent needs alpha > 3(1-t)/t = {3.0 * (1.0 - t) / t:.6g}, got alpha = {al}")
    s = 1.0 / (1.0 - t)
    g_num = _positive_gamma_arg("1/(1-t) - 3/alpha", s - 3.0 / al)
    g_den = _positive_gamma_arg("t/(1-t) - 3/alpha", s - 1.0 - 3.0 / al)
    log_a_alpha = (math.log(m) + math.log(al) + log_gamma(g_num) - math.log(3.0) - math.log(N)
                   - log_gamma(g_den))
    log_a = log_a_alpha / al
    log_C = (math.log(N) + math.log(al) - _LOG_4PI - s * math.log(t) - (3.0 - al * s) * log_a
             - log_beta(3.0 / al, g_num))
    return _MaxTentSubcritical(
        family=Family.MAXTENT_SUBCRITICAL, system=sys, constraint=Constraint(al, m),
        params=MappingProxyType({"a": math.exp(log_a), "C": _exp_or_inf(log_C),
                                 "log_a": log_a, "log_C": log_C}),
        support=(0.0, math.inf), t=t, length_scale=math.exp(log_a))


def build_maxtent_compact(sys: SystemSpec, c: Constraint, t: float) -> ExtremizerDensity:
    """Tsallis maximizer C[(a^alpha - r^alpha)/t]^{1/(t-1)} on [0, a] for t > 1.

    ``C`` is fixed by normalization to N.
    """
    _require_three_dimensions(sys)
    t = float(t)
    if not t > 1.0:
        raise DomainError(f"compact MaxTent needs t > 1, got t = {t}")
    al, m, N = float(c.alpha), float(c.value), sys.N
    if not al > 0:
        raise DomainError(f"compact MaxTent needs alpha > 0, got {al}")
    s = 1.0 / (t - 1.0)
    log_a_alpha = (math.log(m) + math.log(al * t + 3.0 * (t - 1.0)) - math.log(3.0 * N)
                   - math.log(t - 1.0))
    log_a = log_a_alpha / al
    log_C = (math.log(N) + math.log(al) - _LOG_4PI + s * math.log(t) - (3.0 + al * s) * log_a
             - log_beta(3.0 / al, s + 1.0))
    a = math.exp(log_a)
    return _MaxTentCompact(
        family=Family.MAXTENT_COMPACT, system=sys, constraint=Constraint(al, m),
        params=MappingProxyType({"a": a, "C": _exp_or_inf(log_C), "log_a": log_a, "log_C": log_C}),
        support=(0.0, a), t=t, length_scale=a)


def rebuild(rho: ExtremizerDensity, value: float) -> ExtremizerDensity:
    """Same family, system and t, with the constraint value replaced."""
    if rho.family is Family.MININF:
        return build_mininf(rho.system, value)
    c = Constraint(rho.constraint.alpha, value)
    if rho.family is Family.MAXENT:
        return build_maxent(rho.system, c)
    if rho.family is Family.MAXTENT_SUBCRITICAL:
        return build_maxtent_subcritical(rho.system, c, rho.t)
    return build_maxtent_compact(rho.system, c, rho.t)


def match_moment(rho: ExtremizerDensity, m: float, target: float,
                 spec: QuadratureSpec = DEFAULT_QUADRATURE) -> ExtremizerDensity:
    """Dilate ``rho`` within its family so that <r^m> equals ``target``.

    A dilation r -> c r multiplies <r^m> by c^m and the constraint value by
    c^alpha, so the current <r^m> fixes c.
    """
    if m == 0:
        raise DomainError("cannot match the zeroth moment by dilation")
    current = radial_expectation(rho, m, spec)
    c = (target / current) ** (1.0 / m)
    return rebuild(rho, rho.constraint.value * c ** rho.constraint.alpha)


# ---------------------------------------------------------------------------
# Evaluation and functionals
# ---------------------------------------------------------------------------


def eval_density(rho: ExtremizerDensity, r):
    """rho(r); zero outside a compact support. Accepts scalars or arrays."""
    r_arr = np.asarray(r, dtype=float)
    if np.any(r_arr < 0):
        raise ValueError("radius must be non-negative")
    with np.errstate(divide="ignore"):
        out = np.exp(rho.log_density(r_arr))
    return float(out) if np.ndim(out) == 0 else out


def _radial_quad(rho, integrand, spec):
    """Omega_d * int r^{d-1} integrand(r) dr over the support of ``rho``."""
    d = rho.d

    def f(r):
        with np.errstate(divide="ignore", over="ignore", under="ignore"):
            return integrand(r, (d - 1) * np.log(r))

    value, _ = integrate_radial(f, rho.support, spec, scale=rho.length_scale)
    return math.exp(log_solid_angle(d)) * value


def entropic_moment(rho: ExtremizerDensity, n: float, method: str = "analytic",
                    spec: QuadratureSpec = DEFAULT_QUADRATURE) -> MomentResult:
    """W_n = int rho^n d^d r by closed form or by quadrature."""
    rho.check_entropic_moment(n)
    if method == "analytic":
        value = rho.N if n == 1 else math.exp(rho.log_entropic_moment(n))
    elif method == "quadrature":
        value = _radial_quad(rho, lambda r, lj: np.exp(lj + n * rho.log_density(r)), spec)
    else:
        raise ValueError(f"unknown method {method!r}")
    return MomentResult(order=n, value=value, method=method)


def radial_expectation(rho: ExtremizerDensity, m: float,
                       spec: QuadratureSpec = DEFAULT_QUADRATURE) -> float:
    """<r^m> = int r^m rho d^d r by quadrature."""
    rho.check_radial(m)
    if m == 0:
        return rho.N
    return _radial_quad(rho, lambda r, lj: np.exp(lj + m * np.log(r) + rho.log_density(r)), spec)


def shannon_entropy(rho: ExtremizerDensity, spec: QuadratureSpec = DEFAULT_QUADRATURE) -> float:
    """S = -int rho ln rho d^d r by quadrature."""

    def integrand(r, lj):
        logp = rho.log_density(r)
        finite = np.isfinite(logp)
        safe = np.where(finite, logp, 0.0)
        return np.where(finite, -np.exp(lj + safe) * safe, 0.0)

    return _radial_quad(rho, integrand, spec)


def tsallis_entropy(rho: ExtremizerDensity, t: float, method: str = "analytic",
                    spec: QuadratureSpec = DEFAULT_QUADRATURE) -> float:
    """T_t = (1 - W_t)/(t - 1).

    The t -> 1 limit reproduces the Shannon entropy only for densities
    normalized to one.
    """
    if not t > 0 or t == 1:
        raise DomainError(f"Tsallis order must satisfy t > 0, t != 1; got {t}")
    w = entropic_moment(rho, t, method, spec).value
    return (1.0 - w) / (t - 1.0)


def fisher_information(rho: ExtremizerDensity, spec: QuadratureSpec = DEFAULT_QUADRATURE) -> float:
    """I = int rho (rho'/rho)^2 d^d r, using the analytic radial log-derivative."""
    rho.check_fisher()
    return _radial_quad(
        rho, lambda r, lj: np.exp(lj + rho.log_density(r)) * rho.dlog_density(r) ** 2, spec)
