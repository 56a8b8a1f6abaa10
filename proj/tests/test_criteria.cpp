#include "hardylab/criteria.hpp"
#include "hardylab/errors.hpp"

#include <doctest.h>

#include <cmath>
#include <limits>

using namespace hardylab;
using namespace hardylab::criteria;
using numerics::cplx;
using numerics::two_pi;
using symbols::SymbolSpec;

namespace {

SymbolSpec spec_of(const std::string& family)
{
    SymbolSpec s;
    s.family = family;
    return s;
}

SymbolSpec theta(double th)
{
    SymbolSpec s = spec_of("theta");
    s.theta = th;
    return s;
}

const symbols::BoundaryTrace& theta4_trace()
{
    static const auto tr = symbols::sample_trace(theta(4.0), 4096, 40);
    return tr;
}

FitResult fit_of(double exponent)
{
    FitResult f;
    f.exponent = exponent;
    f.residual = 0.01;
    return f;
}

} // namespace

TEST_CASE("luecking sums of a scaled rotation")
{
    SymbolSpec s = spec_of("rotation");
    s.r = cplx(0.75, 0.0);
    auto H = measure::pullback_histogram(symbols::sample_trace(s, 1024, 10), 12);
    for (double p : {0.5, 1.0, 2.0, 5.0}) {
        auto L = luecking_partial_sums(H, p);
        REQUIRE(L.per_level.size() == 13);
        for (std::size_t n = 0; n < L.per_level.size(); ++n)
            CHECK(std::abs(L.per_level[n] - (n == 2 ? 4.0 : 0.0)) < 1e-12);
        CHECK(std::abs(L.partial_sums.back() - 4.0) < 1e-12);
        for (std::size_t n = 1; n < L.partial_sums.size(); ++n)
            CHECK(L.partial_sums[n] >= L.partial_sums[n - 1]);
    }
    CHECK_THROWS_AS(luecking_partial_sums(H, 0.0), ParameterError);
    auto shallow = measure::pullback_histogram(symbols::sample_trace(s, 1024, 10), 4);
    CHECK_THROWS_AS(luecking_partial_sums(shallow, 1.0), ParameterError);
}

TEST_CASE("luecking verdicts around the cutoff p = 4/theta")
{
    auto H = measure::pullback_histogram(theta4_trace(), 30);
    auto lo = luecking_partial_sums(H, 0.8);
    CHECK(lo.verdict == SumVerdict::diverging);
    CHECK(std::abs(lo.growth_fit.exponent - (1.0 - 4.0 * 0.8 / 2.0)) < 0.3);
    auto hi = luecking_partial_sums(H, 1.5);
    CHECK(hi.verdict == SumVerdict::converging);
    CHECK(luecking_partial_sums(H, 3.0).verdict == SumVerdict::converging);
}

TEST_CASE("luecking verdicts are monotone in p")
{
    auto H = measure::pullback_histogram(theta4_trace(), 30);
    bool converged = false;
    for (double p : {0.4, 0.6, 0.8, 1.0, 1.2, 1.5, 2.0, 3.0, 5.0}) {
        const auto v = luecking_partial_sums(H, p).verdict;
        if (converged)
            CHECK(v == SumVerdict::converging);
        converged = converged || v == SumVerdict::converging;
    }
    CHECK(converged);
}

TEST_CASE("box and window sums")
{
    SymbolSpec s = spec_of("rotation");
    s.r = cplx(0.75, 0.0);
    auto H = measure::pullback_histogram(symbols::sample_trace(s, 1024, 10), 12);
    for (int D = 2; D <= 12; ++D) {
        auto [box, window] = box_window_sums(H, 2.0, D);
        CHECK(std::abs(box - 4.0) < 1e-12);
        CHECK(std::abs(window - 7.0) < 1e-12);
    }
    CHECK(box_window_consistency(H, 2.0).passed == Tri::yes);

    SymbolSpec c = spec_of("constant");
    c.c = cplx(0.0, 0.0);
    auto C = measure::pullback_histogram(symbols::sample_trace(c, 256, 8), 10);
    CHECK(box_window_consistency(C, 2.0).passed == Tri::yes);

    auto T = measure::pullback_histogram(theta4_trace(), 14);
    for (int D = 6; D <= 14; ++D) {
        auto [box, window] = box_window_sums(T, 1.5, D);
        CHECK(box <= window);
    }
    auto v = box_window_consistency(T, 1.5, {8, 14, 3.0});
    CHECK(v.passed == Tri::yes);
    CHECK(!v.evidence.empty());
}

TEST_CASE("maccluer verdicts")
{
    SymbolSpec phi = spec_of("sin_beta");
    phi.beta = 2.0;
    auto P1 = measure::carleson_profile(symbols::sample_trace(phi, 4096, 40), 20);
    CHECK(maccluer_test(P1).passed == Tri::no);

    auto P2 = measure::carleson_profile(symbols::sample_trace(theta(1.0), 4096, 40), 20);
    CHECK(maccluer_test(P2, {8, 16}).passed == Tri::yes);

    SymbolSpec c = spec_of("constant");
    c.c = cplx(0.3, 0.0);
    auto P3 = measure::carleson_profile(symbols::sample_trace(c, 256, 8), 12);
    auto v = maccluer_test(P3);
    CHECK(v.passed == Tri::yes);
    CHECK(!v.evidence.empty());

    auto I = measure::carleson_profile(symbols::sample_trace(spec_of("identity"), 4096, 12), 12);
    CHECK(maccluer_test(I).passed == Tri::no);
}

TEST_CASE("schatten necessary condition")
{
    auto L = measure::carleson_profile(symbols::sample_trace(spec_of("loglog"), 4096, 40), 16);
    for (double p : {1.0, 2.0, 4.0})
        CHECK(necessary_condition_diag(L, p, {8, 16}).passed == Tri::no);
    CHECK(maccluer_test(L, {8, 16}).passed == Tri::yes);

    auto T = measure::carleson_profile(symbols::sample_trace(theta(2.0), 4096, 40), 16);
    CHECK(necessary_condition_diag(T, 2.0, {8, 16}).passed == Tri::yes);

    SymbolSpec s = spec_of("rotation");
    s.r = cplx(0.75, 0.0);
    auto R = measure::carleson_profile(symbols::sample_trace(s, 1024, 10), 12);
    for (int n = 3; n <= 12; ++n)
        CHECK(R.level(n).rho_hat == 0.0);
    CHECK(necessary_condition_diag(R, 2.0).passed == Tri::yes);
    CHECK_THROWS_AS(necessary_condition_diag(R, 0.0), ParameterError);
}

TEST_CASE("necessary condition at p = infinity reduces to the maccluer statistic")
{
    const double inf = std::numeric_limits<double>::infinity();
    for (const auto& spec : {theta(1.0), theta(2.0), spec_of("loglog")}) {
        auto P = measure::carleson_profile(symbols::sample_trace(spec, 4096, 40), 16);
        auto u = necessary_condition_diag(P, inf, {8, 16});
        auto r = maccluer_test(P, {8, 16});
        CHECK(u.passed == r.passed);
        REQUIRE(u.evidence.size() == r.evidence.size());
        for (std::size_t i = 0; i < u.evidence.size(); ++i) {
            CHECK(u.evidence[i].first == r.evidence[i].first);
            CHECK(std::abs(u.evidence[i].second / r.evidence[i].second - 1.0) < 1e-12);
        }
        // large finite p approaches the same statistic
        auto big = necessary_condition_diag(P, 1e6, {8, 16});
        for (std::size_t i = 0; i < big.evidence.size(); ++i)
            CHECK(std::abs(big.evidence[i].second / r.evidence[i].second - 1.0) < 1e-4);
    }
}

TEST_CASE("alpha-carleson sufficient condition")
{
    CHECK(alpha_carleson_sufficient(fit_of(1.5), 4.5).passed == Tri::yes);
    CHECK(alpha_carleson_sufficient(fit_of(1.5), 3.9).passed == Tri::inconclusive);
    CHECK(alpha_carleson_sufficient(fit_of(1.0), 100.0).passed == Tri::inconclusive);
    CHECK(alpha_carleson_sufficient(fit_of(1.04), 1e6).passed == Tri::inconclusive);
    // the cap applies before the threshold 2 / (alpha - 1)
    CHECK(alpha_carleson_sufficient(fit_of(2.5), 2.0, 1.8).passed == Tri::inconclusive);
    CHECK(alpha_carleson_sufficient(fit_of(2.5), 3.0, 1.8).passed == Tri::yes);
    FitResult noisy = fit_of(1.5);
    noisy.residual = 0.5;
    CHECK_THROWS_AS(alpha_carleson_sufficient(noisy, 5.0), ParameterError);
}

TEST_CASE("hilbert-schmidt integral")
{
    SymbolSpec half = spec_of("rotation");
    half.r = cplx(0.5, 0.0);
    auto h = hs_integral(symbols::sample_trace(half, 4096, 10));
    CHECK(std::abs(h.value - 4.0 / 3.0) < 1e-10);
    CHECK(std::abs(h.value_modulus - 2.0) < 1e-10);
    CHECK(!h.divergent);

    SymbolSpec phi = spec_of("sin_beta");
    phi.beta = 2.0;
    CHECK(hs_integral(symbols::sample_trace(phi, 4096, 40)).divergent);
    CHECK(hs_integral(symbols::sample_trace(theta(2.0), 4096, 40)).divergent);
    CHECK_THROWS_AS(hs_integral(symbols::sample_trace(spec_of("identity"), 256, 8)), SingularityError);
}

TEST_CASE("angular derivative probe")
{
    std::vector<double> r;
    for (int k = 1; k <= 30; ++k)
        r.push_back(1.0 - std::ldexp(1.0, -k));

    auto a = angular_derivative_probe(spec_of("affine"), 1.0, r);
    for (double v : a.ratios)
        CHECK(std::abs(v - 0.5) < 1e-12);
    CHECK(a.trend == Trend::bounded);
    CHECK(std::abs(a.liminf_estimate - 0.5) < 1e-12);

    SymbolSpec c = spec_of("constant");
    c.c = cplx(0.0, 0.0);
    auto z = angular_derivative_probe(c, 1.0, r);
    for (std::size_t i = 0; i < r.size(); ++i)
        CHECK(std::abs(z.ratios[i] * (1.0 - r[i]) - 1.0) < 1e-12);
    CHECK(z.trend == Trend::increasing);

    auto t = angular_derivative_probe(theta(2.0), 1.0, r);
    for (std::size_t i = 1; i < t.ratios.size(); ++i)
        CHECK(t.ratios[i] > t.ratios[i - 1]);
    CHECK(t.trend == Trend::increasing);

    CHECK_THROWS_AS(angular_derivative_probe(spec_of("affine"), 1.0, {0.5}), ParameterError);
    CHECK_THROWS_AS(angular_derivative_probe(spec_of("affine"), 1.0, {0.9, 0.5}), ParameterError);
}
