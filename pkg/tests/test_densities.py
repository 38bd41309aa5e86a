import dataclasses
import math

import numpy as np
import pytest
import scipy.integrate
from hypothesis import given, settings
from hypothesis import strategies as st

from extremum_bounds.densities import (Constraint, Family, SystemSpec, build_maxent,
                                       build_maxtent_compact, build_maxtent_subcritical,
                                       build_mininf, entropic_moment, eval_density,
                                       fisher_information, match_moment, radial_expectation,
                                       rebuild, shannon_entropy, tsallis_entropy)
from extremum_bounds.errors import DivergentMoment, DomainError, GammaDomainError

S3 = SystemSpec(3, 1.0)


def scipy_radial(rho, m=0.0, power=1.0):
    """Independent oracle: scipy.quad of r^{2+m} rho^power over the support, times 4 pi."""
    hi = rho.support[1]
    f = lambda r: r ** (2 + m) * eval_density(rho, r) ** power  # noqa: E731
    if math.isfinite(hi):
        val, _ = scipy.integrate.quad(f, 0, hi, epsabs=0, epsrel=1e-12, limit=400)
    else:
        L = rho.length_scale
        val = sum(scipy.integrate.quad(f, lo, up, epsabs=0, epsrel=1e-12, limit=400)[0]
                  for lo, up in ((0, L), (L, 10 * L), (10 * L, np.inf)))
    return 4 * math.pi * val


class TestMaxEnt:
    def test_gaussian_case(self):
        rho = build_maxent(S3, Constraint(2, 1.5))
        assert rho.params["mu"] == pytest.approx(1.0, rel=1e-15)
        assert entropic_moment(rho, 1, "quadrature").value == pytest.approx(1.0, rel=1e-10)
        assert radial_expectation(rho, 2) == pytest.approx(1.5, rel=1e-10)
        # exp(-lambda) = pi^{-3/2} for a unit-normalized e^{-r^2} profile
        assert rho(0.0) == pytest.approx(math.pi ** -1.5, rel=1e-13)

    def test_normalization_five_particles(self):
        rho = build_maxent(SystemSpec(3, 5.0), Constraint(1, 2.7))
        assert entropic_moment(rho, 1, "quadrature").value == pytest.approx(5.0, rel=1e-10)
        assert scipy_radial(rho) == pytest.approx(5.0, rel=1e-9)

    def test_two_dimensions(self):
        rho = build_maxent(SystemSpec(2, 1.0), Constraint(1, 2.0))
        assert rho.params["mu"] == pytest.approx(1.0)
        assert radial_expectation(rho, 1) == pytest.approx(2.0, rel=1e-8)

    def test_origin_value(self):
        rho = build_maxent(S3, Constraint(1.3, 0.8))
        assert eval_density(rho, 0.0) == pytest.approx(math.exp(-rho.params["lambda"]), rel=1e-15)

    @pytest.mark.parametrize("alpha", [0.0, -1.0])
    def test_domain(self, alpha):
        with pytest.raises(DomainError):
            build_maxent(S3, Constraint(alpha, 1.0))

    def test_shannon_closed_form(self):
        rho = build_maxent(SystemSpec(3, 2.0), Constraint(1.5, 0.9))
        lam, mu = rho.params["lambda"], rho.params["mu"]
        assert shannon_entropy(rho) == pytest.approx(lam * 2.0 + mu * 0.9, rel=1e-10)

    def test_shannon_dilation(self):
        # r -> c r multiplies <r^alpha> by c^alpha and shifts S by N d ln c;
        # equivalently <r^alpha> -> c <r^alpha> shifts S by N (d/alpha) ln c
        N, al, m, c = 2.0, 1.5, 0.9, 2.0
        a = build_maxent(SystemSpec(3, N), Constraint(al, m))
        b = build_maxent(SystemSpec(3, N), Constraint(al, m * c ** al))
        assert shannon_entropy(b) - shannon_entropy(a) == pytest.approx(N * 3 * math.log(c), rel=1e-9)
        b = build_maxent(SystemSpec(3, N), Constraint(al, m * c))
        assert shannon_entropy(b) - shannon_entropy(a) == pytest.approx(N * (3 / al) * math.log(c),
                                                                          rel=1e-9)

    def test_gaussian_moment_analytic_vs_quadrature(self):
        rho = build_maxent(S3, Constraint(2, 1.5))
        n = 5 / 3
        exact = math.pi ** (-1.5 * n) * (math.pi / n) ** 1.5
        assert entropic_moment(rho, n).value == pytest.approx(exact, rel=1e-12)
        assert entropic_moment(rho, n, "quadrature").value == pytest.approx(exact, rel=1e-8)


class TestMinInf:
    def test_three_dimensional_example(self):
        rho = build_mininf(SystemSpec(3, 2.0), 4.0)
        r = np.linspace(0, 3, 13)
        assert np.allclose(rho(r), 16 / math.pi * np.exp(-4 * r), rtol=1e-13, atol=0)
        assert entropic_moment(rho, 1, "quadrature").value == pytest.approx(2.0, rel=1e-10)
        assert radial_expectation(rho, -1) == pytest.approx(4.0, rel=1e-10)

    def test_origin(self):
        rho = build_mininf(S3, 1.0)
        assert rho(0.0) == pytest.approx(1 / math.pi, rel=1e-14)

    def test_strictly_decreasing(self):
        rho = build_mininf(SystemSpec(4, 3.0), 0.7)
        vals = rho(np.linspace(0, 20, 200))
        assert np.all(np.diff(vals) < 0)

    def test_mean_radius(self):
        assert radial_expectation(build_mininf(S3, 1.0), 1) == pytest.approx(1.5, rel=1e-10)

    @pytest.mark.parametrize("n", [0.5, 1.5, 2.0, 3.0])
    @pytest.mark.parametrize("N,r_inv", [(1.0, 1.0), (2.0, 4.0), (7.0, 0.3)])
    def test_entropic_moment_closed_form(self, n, N, r_inv):
        rho = build_mininf(SystemSpec(3, N), r_inv)
        expected = math.pi ** (1 - n) * n ** -3 * N ** (3 - 2 * n) * r_inv ** (3 * (n - 1))
        assert entropic_moment(rho, n).value == pytest.approx(expected, rel=1e-12)
        assert entropic_moment(rho, n, "quadrature").value == pytest.approx(expected, rel=1e-8)

    @pytest.mark.parametrize("N,r_inv", [(1.0, 1.0), (2.0, 4.0), (5.0, 0.5)])
    def test_fisher_closed_form(self, N, r_inv):
        rho = build_mininf(SystemSpec(3, N), r_inv)
        assert fisher_information(rho) == pytest.approx(4 * r_inv ** 2 / N, rel=1e-8)

    def test_domain(self):
        with pytest.raises(DomainError):
            build_mininf(SystemSpec(1, 1.0), 1.0)
        with pytest.raises(DomainError):
            build_mininf(S3, 0.0)


class TestMaxTentSubcritical:
    def test_unit_width(self):
        # choose <r^2> so that a = 1 for t = 0.9, alpha = 2
        t, al = 0.9, 2.0
        s = 1 / (1 - t)
        m = 3 * math.gamma(s - 1 - 3 / al) / (al * math.gamma(s - 3 / al))
        rho = build_maxtent_subcritical(S3, Constraint(al, m), t)
        assert rho.params["a"] == pytest.approx(1.0, rel=1e-13)
        assert entropic_moment(rho, 1, "quadrature").value == pytest.approx(1.0, rel=1e-10)
        assert scipy_radial(rho) == pytest.approx(1.0, rel=1e-8)

    def test_validity_condition(self):
        build_maxtent_subcritical(S3, Constraint(2, 1.0), 0.9)
        with pytest.raises(DomainError, match="3\\(1-t\\)/t"):
            build_maxtent_subcritical(S3, Constraint(2, 1.0), 0.5)

    def test_validity_edge_is_excluded(self):
        # alpha = 3(1-t)/t exactly is the normalizability edge
        with pytest.raises(DomainError):
            build_maxtent_subcritical(S3, Constraint(3.0, 1.0), 0.5)

    def test_strictly_positive(self):
        rho = build_maxtent_subcritical(S3, Constraint(2, 1.0), 0.8)
        assert np.all(rho(np.geomspace(1e-3, 1e6, 50)) > 0)

    def test_tail_divergence_reported(self):
        rho = build_maxtent_subcritical(S3, Constraint(2, 1.0), 0.7)
        with pytest.raises(DivergentMoment):
            entropic_moment(rho, 0.3)
        with pytest.raises(DivergentMoment):
            radial_expectation(rho, 4.0)

    def test_converges_to_maxent_in_the_bulk(self):
        for al in (1.0, 2.0, 3.0):
            c = Constraint(al, 1.5)
            me = build_maxent(S3, c)
            sub = build_maxtent_subcritical(S3, c, 0.999)
            r = (np.linspace(0, 3, 61) / me.params["mu"]) ** (1 / al)
            assert np.max(np.abs(sub(r) / me(r) - 1)) <= 1e-2

    def test_three_dimensions_only(self):
        with pytest.raises(DomainError):
            build_maxtent_subcritical(SystemSpec(2, 1.0), Constraint(2, 1.0), 0.9)


class TestMaxTentCompact:
    def test_example(self):
        rho = build_maxtent_compact(S3, Constraint(2, 1.0), 2.0)
        assert rho.params["a"] == pytest.approx(math.sqrt(7 / 3), rel=1e-14)
        assert entropic_moment(rho, 1, "quadrature").value == pytest.approx(1.0, rel=1e-10)
        assert radial_expectation(rho, 2) == pytest.approx(1.0, rel=1e-10)
        assert scipy_radial(rho, m=2) == pytest.approx(1.0, rel=1e-9)

    def test_edge_zero_and_outside(self):
        rho = build_maxtent_compact(S3, Constraint(1.5, 0.8), 1.7)
        a = rho.params["a"]
        assert rho(a) == 0.0
        assert rho(a * (1 - 1e-9)) < 1e-6 * rho(0.0)
        assert np.all(rho(np.array([1.01 * a, 2 * a, 1e3])) == 0.0)

    def test_three_particles(self):
        rho = build_maxtent_compact(SystemSpec(3, 3.0), Constraint(1, 1.0), 2.0)
        assert entropic_moment(rho, 1, "quadrature").value == pytest.approx(3.0, rel=1e-10)

    @pytest.mark.parametrize("t,alpha", [(1.0, 2.0), (0.5, 2.0), (2.0, 0.0)])
    def test_domain(self, t, alpha):
        with pytest.raises(DomainError):
            build_maxtent_compact(S3, Constraint(alpha, 1.0), t)

    def test_fisher_diverges_beyond_two(self):
        rho = build_maxtent_compact(S3, Constraint(2, 1.0), 2.5)
        with pytest.raises(DivergentMoment):
            fisher_information(rho)


class TestGeneric:
    def test_negative_radius(self):
        with pytest.raises(ValueError):
            eval_density(build_mininf(S3, 1.0), -0.1)

    def test_immutable(self):
        rho = build_maxent(S3, Constraint(2, 1.0))
        with pytest.raises(dataclasses.FrozenInstanceError):
            rho.t = 3.0
        with pytest.raises(TypeError):
            rho.params["mu"] = 2.0

    def test_rebuild_returns_new_value(self):
        rho = build_maxtent_compact(S3, Constraint(2, 1.0), 2.0)
        other = rebuild(rho, 2.0)
        assert other is not rho and rho.constraint.value == 1.0
        assert other.family is Family.MAXTENT_COMPACT and other.t == 2.0

    def test_moment_orders(self):
        rho = build_maxent(S3, Constraint(2, 1.0))
        assert radial_expectation(rho, 0) == 1.0
        assert entropic_moment(rho, 1).value == 1.0
        with pytest.raises(DivergentMoment):
            radial_expectation(rho, -3.0)
        with pytest.raises(DivergentMoment):
            entropic_moment(rho, 0.0)
        with pytest.raises(ValueError):
            entropic_moment(rho, 2.0, method="bogus")

    def test_match_moment(self):
        rho = build_maxent(S3, Constraint(2, 1.0))
        matched = match_moment(rho, -1, 3.0)
        assert radial_expectation(matched, -1) == pytest.approx(3.0, rel=1e-9)


class TestTsallis:
    @pytest.mark.parametrize("alpha,value", [(1.0, 1.0), (2.0, 1.5), (3.0, 1.5)])
    def test_shannon_limit(self, alpha, value):
        rho = build_maxent(S3, Constraint(alpha, value))
        s = shannon_entropy(rho)
        for t in (1 - 1e-4, 1 + 1e-4):
            assert abs(tsallis_entropy(rho, t) - s) <= 1e-3

    def test_shannon_limit_is_first_order(self):
        rho = build_maxent(S3, Constraint(1.0, 1.5))
        s = shannon_entropy(rho)
        gaps = [abs(tsallis_entropy(rho, 1 + h) - s) for h in (1e-3, 5e-4, 2.5e-4)]
        assert gaps[1] / gaps[0] == pytest.approx(0.5, rel=0.01)
        assert gaps[2] / gaps[1] == pytest.approx(0.5, rel=0.01)

    @pytest.mark.parametrize("builder", ["maxent", "mininf", "compact", "subcritical"])
    def test_analytic_matches_quadrature(self, builder):
        rho = {"maxent": lambda: build_maxent(SystemSpec(3, 2.0), Constraint(1.2, 0.9)),
               "mininf": lambda: build_mininf(SystemSpec(3, 2.0), 1.1),
               "compact": lambda: build_maxtent_compact(SystemSpec(3, 2.0), Constraint(2, 1), 1.8),
               "subcritical": lambda: build_maxtent_subcritical(SystemSpec(3, 2.0),
                                                                Constraint(3, 1), 0.85)}[builder]()
        for t in (0.8, 1.5, 2.5):
            assert tsallis_entropy(rho, t, "analytic") == pytest.approx(
                tsallis_entropy(rho, t, "quadrature"), rel=1e-8)

    def test_order_validation(self):
        rho = build_maxent(S3, Constraint(1, 1))
        for t in (1.0, 0.0, -1.0):
            with pytest.raises(DomainError):
                tsallis_entropy(rho, t)


class TestExtremality:
    @pytest.mark.parametrize("alpha,value,N", [(1.0, 1.3, 1.0), (2.0, 2.0, 3.0), (1.5, 0.7, 1.0)])
    def test_shannon_and_tsallis(self, alpha, value, N):
        sys, c = SystemSpec(3, N), Constraint(alpha, value)
        maxent = build_maxent(sys, c)
        mininf = match_moment(build_mininf(sys, 1.0), alpha, value)
        compact = build_maxtent_compact(sys, c, 1.5)
        sub = build_maxtent_subcritical(sys, c, max(0.9, 3 / (alpha + 3) + 0.05))
        family = [maxent, mininf, compact, sub]
        s_max = shannon_entropy(maxent)
        assert all(shannon_entropy(r) <= s_max * (1 + 1e-10) + 1e-10 for r in family)
        for winner in (compact, sub):
            t = winner.t
            best = tsallis_entropy(winner, t)
            for other in family:
                assert tsallis_entropy(other, t) <= best + 1e-10 * abs(best)

    def test_maxent_against_mininf_shape(self):
        # with matched <r>, the exponential MinInf profile coincides with alpha = 1 MaxEnt
        sys = SystemSpec(3, 2.0)
        maxent = build_maxent(sys, Constraint(1.0, 3.0))
        mininf = match_moment(build_mininf(sys, 1.0), 1.0, 3.0)
        assert shannon_entropy(mininf) == pytest.approx(shannon_entropy(maxent), rel=1e-10)

    @pytest.mark.parametrize("N,r_inv", [(1.0, 1.0), (2.0, 4.0)])
    def test_fisher_minimality(self, N, r_inv):
        sys = SystemSpec(3, N)
        mininf = build_mininf(sys, r_inv)
        others = [match_moment(build_maxent(sys, Constraint(a, 1.0)), -1, r_inv) for a in (1.5, 2, 3)]
        others.append(match_moment(build_maxtent_compact(sys, Constraint(2, 1.0), 1.5), -1, r_inv))
        others.append(match_moment(build_maxtent_subcritical(sys, Constraint(2, 1.0), 0.8), -1, r_inv))
        i_min = fisher_information(mininf)
        assert i_min == pytest.approx(4 * r_inv ** 2 / N, rel=1e-8)
        for other in others:
            assert fisher_information(other) > i_min
        same_shape = match_moment(build_maxent(sys, Constraint(1.0, 1.0)), -1, r_inv)
        assert fisher_information(same_shape) == pytest.approx(i_min, rel=1e-8)


positive_value = st.floats(0.1, 10.0)


@settings(max_examples=25, deadline=None)
@given(st.integers(1, 4), st.floats(0.5, 50), st.floats(0.5, 4), positive_value)
def test_maxent_invariants(d, N, alpha, value):
    rho = build_maxent(SystemSpec(d, N), Constraint(alpha, value))
    assert entropic_moment(rho, 1, "quadrature").value == pytest.approx(N, rel=1e-8)
    assert radial_expectation(rho, alpha) == pytest.approx(value, rel=1e-8)
    for n in (0.6, 1.7):
        assert entropic_moment(rho, n, "quadrature").value == pytest.approx(
            entropic_moment(rho, n).value, rel=1e-8)


@settings(max_examples=25, deadline=None)
@given(st.floats(0.5, 50), st.floats(0.5, 4), positive_value, st.floats(1.05, 6))
def test_compact_invariants(N, alpha, value, t):
    rho = build_maxtent_compact(SystemSpec(3, N), Constraint(alpha, value), t)
    assert entropic_moment(rho, 1, "quadrature").value == pytest.approx(N, rel=1e-8)
    assert radial_expectation(rho, alpha) == pytest.approx(value, rel=1e-8)
    assert entropic_moment(rho, 2.0, "quadrature").value == pytest.approx(
        entropic_moment(rho, 2.0).value, rel=1e-8)


@settings(max_examples=25, deadline=None)
@given(st.floats(0.5, 50), st.floats(0.5, 4), positive_value, st.floats(0.02, 0.98))
def test_subcritical_invariants(N, alpha, value, frac):
    t_lo = 3 / (alpha + 3)
    t = t_lo + frac * (0.98 - t_lo)
    try:
        rho = build_maxtent_subcritical(SystemSpec(3, N), Constraint(alpha, value), t)
    except GammaDomainError:
        return
    assert entropic_moment(rho, 1, "quadrature").value == pytest.approx(N, rel=1e-8)
    assert radial_expectation(rho, alpha) == pytest.approx(value, rel=1e-8)
    assert rho(0.0) > 0
