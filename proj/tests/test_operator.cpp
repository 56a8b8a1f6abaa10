#include "hardylab/criteria.hpp"
#include "hardylab/errors.hpp"
#include "hardylab/operator.hpp"

#include <doctest.h>

#include <cmath>

using namespace hardylab;
using namespace hardylab::op;
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

double max_entry_error(const OperatorMatrix& A, const std::function<cplx(std::size_t, std::size_t)>& expected)
{
    double e = 0.0;
    for (std::size_t n = 0; n < A.N; ++n)
        for (std::size_t m = 0; m < A.N; ++m)
            e = std::max(e, std::abs(A.at(n, m) - expected(n, m)));
    return e;
}

double norm_p(const SingularSpectrum& s, double p)
{
    double t = 0.0;
    for (double v : s.values)
        t += std::pow(v, p);
    return std::pow(t, 1.0 / p);
}

} // namespace

TEST_CASE("matrix of a scaled rotation is diagonal")
{
    SymbolSpec s = spec_of("rotation");
    s.r = cplx(0.5, 0.0);
    auto A = matrix_truncation(*symbols::make_symbol(s), 8, 64);
    CHECK(max_entry_error(A, [](std::size_t n, std::size_t m) {
              return n == m ? cplx(std::pow(0.5, static_cast<double>(m))) : cplx(0.0);
          }) < 1e-14);
    auto S = singular_spectrum(A);
    for (std::size_t k = 0; k < 8; ++k)
        CHECK(std::abs(S.values[k] - std::pow(0.5, static_cast<double>(k))) < 1e-10);
}

TEST_CASE("matrix of a constant has one nonzero row")
{
    SymbolSpec c = spec_of("constant");
    c.c = cplx(0.6, 0.0);
    auto A = matrix_truncation(*symbols::make_symbol(c), 32, 256);
    CHECK(max_entry_error(A, [](std::size_t n, std::size_t m) {
              return n == 0 ? cplx(std::pow(0.6, static_cast<double>(m))) : cplx(0.0);
          }) < 1e-14);
    auto S = singular_spectrum(A);
    // column norms of the single row: (sum 0.36^m)^{1/2} = (1 - 0.36)^{-1/2} up to 0.36^32
    CHECK(std::abs(S.values[0] - 1.25) < 1e-6);
    for (std::size_t k = 1; k < 32; ++k)
        CHECK(S.values[k] < 1e-12);
}

TEST_CASE("matrix of z^2")
{
    SymbolSpec z2 = spec_of("monomial");
    z2.k = 2;
    auto A = matrix_truncation(*symbols::make_symbol(z2), 8, 64);
    CHECK(max_entry_error(A, [](std::size_t n, std::size_t m) { return n == 2 * m ? cplx(1.0) : cplx(0.0); }) <
          1e-14);
    auto S = singular_spectrum(A);
    for (std::size_t k = 0; k < 8; ++k)
        CHECK(std::abs(S.values[k] - (k < 4 ? 1.0 : 0.0)) < 1e-12);
}

TEST_CASE("matrix size checks")
{
    auto sym = symbols::make_symbol(spec_of("identity"));
    CHECK_THROWS_AS(matrix_truncation(*sym, 0, 64), ParameterError);
    CHECK_THROWS_AS(matrix_truncation(*sym, 16, 64), SizeError);
    CHECK_THROWS_AS(matrix_truncation(*sym, 8, 96), SizeError);
}

TEST_CASE("schatten sum of z/2 matches the hilbert-schmidt integral")
{
    SymbolSpec s = spec_of("rotation");
    s.r = cplx(0.5, 0.0);
    auto tr = symbols::sample_trace(s, 4096, 10);
    auto S = singular_spectrum(matrix_truncation(tr, 64, 1024));
    auto sum = schatten_sum(S, 2.0);
    CHECK(std::abs(sum.sum - 4.0 / 3.0) < 1e-12);
    CHECK(std::abs(sum.sum - criteria::hs_integral(tr).value) < 1e-6);
    CHECK(sum.decay_available);
}

TEST_CASE("column Parseval bound, monotone truncation and p-monotonicity")
{
    std::vector<SingularSpectrum> spectra;
    for (std::size_t N : {64, 128, 256}) {
        auto A = matrix_truncation(*symbols::make_symbol(theta(4.0)), N, 16 * N);
        CHECK(A.aliasing_change < 1e-8);
        double worst = 0.0;
        for (std::size_t m = 0; m < N; ++m) {
            double col = 0.0;
            for (std::size_t n = 0; n < N; ++n)
                col += std::norm(A.at(n, m));
            worst = std::max(worst, col);
        }
        CHECK(worst <= 1.0 + 1e-8);
        spectra.push_back(singular_spectrum(A));
    }
    for (std::size_t i = 1; i < spectra.size(); ++i)
        for (std::size_t k = 0; k < spectra[i - 1].values.size(); ++k)
            CHECK(spectra[i].values[k] >= spectra[i - 1].values[k] - 1e-10);
    for (const auto& S : spectra) {
        CHECK(std::is_sorted(S.values.rbegin(), S.values.rend()));
        const std::vector<double> ps = {0.5, 0.8, 1.0, 1.5, 2.0, 3.0, 5.0};
        for (std::size_t i = 1; i < ps.size(); ++i)
            CHECK(norm_p(S, ps[i]) <= norm_p(S, ps[i - 1]) * (1.0 + 1e-12));
    }
}

TEST_CASE("spectral tail study on synthetic sums")
{
    // sigma_k = k^{-1}: p = 2 converges, p = 1 grows
    std::vector<std::size_t> Ns = {64, 128, 256, 512};
    std::vector<SingularSpectrum> spectra;
    for (std::size_t N : Ns) {
        SingularSpectrum s;
        s.N = N;
        for (std::size_t k = 1; k <= N; ++k)
            s.values.push_back(1.0 / static_cast<double>(k));
        spectra.push_back(s);
    }
    auto c = spectral_tail_study(Ns, spectra, 2.0);
    CHECK(c.verdict == TailVerdict::cauchy);
    CHECK(std::abs(c.increment_ratio - 0.5) < 0.01);
    auto g = spectral_tail_study(Ns, spectra, 1.0);
    CHECK(g.verdict == TailVerdict::growing);
    CHECK(std::abs(g.increments.back() - std::log(2.0)) < 0.01);

    // increments n^s at N = 2^n: s = -2 converges, s = -1/2 does not
    for (double s : {-2.0, -0.5}) {
        std::vector<SingularSpectrum> synth;
        for (std::size_t i = 0; i < Ns.size(); ++i) {
            double total = 0.0;
            for (std::size_t j = 1; j <= i; ++j)
                total += std::pow(std::log2(static_cast<double>(Ns[j])), s);
            SingularSpectrum one;
            one.N = Ns[i];
            one.values = {std::sqrt(1.0 + total)};
            synth.push_back(one);
        }
        auto t = spectral_tail_study(Ns, synth, 2.0);
        CHECK(std::abs(t.increment_exponent - s) < 1e-9);
        CHECK(t.verdict == (s < -1.0 ? TailVerdict::cauchy : TailVerdict::growing));
    }
}

TEST_CASE("luecking and spectral routes agree for theta = 2")
{
    auto sym = symbols::make_symbol(theta(2.0));
    auto H = measure::pullback_histogram(symbols::sample_trace(sym, {}), 30);
    std::vector<std::size_t> Ns = {64, 128, 256};
    std::vector<SingularSpectrum> spectra;
    for (std::size_t N : Ns)
        spectra.push_back(singular_spectrum(matrix_truncation(*sym, N, 16 * N)));
    for (double p : {0.8, 1.5, 3.0, 5.0}) {
        const auto l = criteria::luecking_partial_sums(H, p).verdict;
        const auto s = spectral_tail_study(Ns, spectra, p).verdict;
        if (l == criteria::SumVerdict::inconclusive || s == TailVerdict::inconclusive)
            continue;
        CHECK((l == criteria::SumVerdict::converging) == (s == TailVerdict::cauchy));
    }
}

TEST_CASE("poisson sums of elementary measures")
{
    WeightedPoints delta;
    delta.z = {0.0};
    delta.w = {1.0};
    auto d = poisson_moment_sums(delta, 1.5, 64);
    CHECK(std::abs(d.partial_sums.back() - 1.0) < 1e-15);

    WeightedPoints circle;
    const std::size_t M = 64;
    for (std::size_t j = 0; j < M; ++j) {
        circle.z.push_back(std::polar(0.5, two_pi * static_cast<double>(j) / M));
        circle.w.push_back(1.0 / M);
    }
    const double p = 1.5;
    auto c = poisson_moment_sums(circle, p, 64);
    for (std::size_t n = 0; n <= 64; ++n) {
        CHECK(std::abs(c.moments[n] - std::pow(0.25, static_cast<double>(n))) < 1e-15);
        const double q = std::pow(0.25, p / 2.0);
        const double closed = 1.0 + 2.0 * q * (1.0 - std::pow(q, static_cast<double>(n))) / (1.0 - q);
        CHECK(std::abs(c.partial_sums[n] - closed) < 1e-13);
    }

    WeightedPoints bad = delta;
    bad.w = {0.5};
    CHECK_THROWS_AS(poisson_moment_sums(bad, 1.5, 64), ValidationError);
    CHECK_THROWS_AS(poisson_moment_sums(delta, 2.5, 64), ParameterError);
}

TEST_CASE("poisson sums of the beta = 3 radial measure")
{
    auto mu = radial_power_measure(3.0);
    double total = 0.0;
    for (double w : mu.w)
        total += w;
    CHECK(std::abs(total - 1.0) < 1e-12);
    auto P = poisson_moment_sums(mu, 1.5, 1 << 14);
    // density (1 - r) on the disc: m_n = 6 / ((2n + 2)(2n + 3))
    for (std::size_t n : {0, 1, 2, 10, 100, 1000, 16384}) {
        const double nn = static_cast<double>(n);
        const double exact = 6.0 / ((2.0 * nn + 2.0) * (2.0 * nn + 3.0));
        CHECK(std::abs(P.moments[n] / exact - 1.0) < 1e-8);
    }
    CHECK(std::abs(P.moment_fit.exponent + 2.0) < 0.2);
    CHECK(P.cauchy);
}
