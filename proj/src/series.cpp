#include "hardylab/errors.hpp"
#include "hardylab/symbols.hpp"

#include <Eigen/Dense>

#include <algorithm>
#include <cmath>

namespace hardylab::symbols {

using numerics::CompensatedSum;
using numerics::pi;
using numerics::two_pi;

double CosineSeries::eval(double t) const
{
    CompensatedSum s;
    for (std::size_t k = 0; k < a.size(); ++k)
        s.add(a[k] * std::cos(static_cast<double>(k) * t));
    return s.value();
}

double conjugate_series(const CosineSeries& series, double t)
{
    CompensatedSum s;
    for (std::size_t k = 1; k < series.a.size(); ++k)
        s.add(series.a[k] * std::sin(static_cast<double>(k) * t));
    return s.value();
}

namespace {

CosineSeries exact_beta_two(std::size_t K)
{
    CosineSeries s;
    s.beta = 2.0;
    s.a.assign(K + 1, 0.0);
    s.a[0] = 0.5;
    if (K >= 1)
        s.a[1] = -0.5;
    return s;
}

std::vector<double> fft_cosines(double beta, std::size_t K, std::size_t M)
{
    std::vector<numerics::cplx> x(M);
    for (std::size_t j = 0; j < M; ++j) {
        double t = two_pi * static_cast<double>(j) / static_cast<double>(M);
        x[j] = std::pow(std::abs(std::sin(0.5 * t)), beta);
    }
    auto c = numerics::fft_coefficients(x);
    std::vector<double> out(K + 1);
    out[0] = c[M / 2].real();
    for (std::size_t k = 1; k <= K; ++k)
        out[k] = 2.0 * c[M / 2 + k].real();
    return out;
}

} // namespace

CosineSeries sin_beta_coeffs(double beta, std::size_t K)
{
    if (!(beta > 0.0 && beta <= 2.0))
        throw ParameterError("sin_beta_coeffs: beta must lie in (0, 2]");
    if (K < 1)
        throw ParameterError("sin_beta_coeffs: K must be at least 1");
    if (beta == 2.0)
        return exact_beta_two(K);

    // trapezoid aliasing error is C M^{-(beta+1)} to leading order; one
    // Richardson step in M removes it
    std::size_t M = std::size_t{1} << 16;
    while (M < 8 * (K + 1))
        M <<= 1;
    const std::size_t max_M = std::size_t{1} << 26;
    const double w = std::pow(2.0, beta + 1.0);
    auto richardson = [&](const std::vector<double>& coarse, const std::vector<double>& fine) {
        std::vector<double> r(K + 1);
        for (std::size_t k = 0; k <= K; ++k)
            r[k] = (w * fine[k] - coarse[k]) / (w - 1.0);
        return r;
    };
    auto coarse = fft_cosines(beta, K, M);
    auto fine = fft_cosines(beta, K, 2 * M);
    M *= 2;
    auto prev = richardson(coarse, fine);
    while (2 * M <= max_M) {
        coarse = std::move(fine);
        fine = fft_cosines(beta, K, 2 * M);
        M *= 2;
        auto next = richardson(coarse, fine);
        double change = 0.0;
        for (std::size_t k = 0; k <= K; ++k)
            change = std::max(change, std::abs(next[k] - prev[k]));
        prev = std::move(next);
        if (change < 1e-14)
            break;
    }
    CosineSeries s;
    s.beta = beta;
    s.a = std::move(prev);
    return s;
}

CosineSeries binomial_coeff_oracle(double beta, std::size_t K, BinomialOracleInfo* info)
{
    if (!(beta > 0.0 && beta <= 2.0))
        throw ParameterError("binomial_coeff_oracle: beta must lie in (0, 2)");
    if (K < 1)
        throw ParameterError("binomial_coeff_oracle: K must be at least 1");
    if (beta == 2.0) {
        if (info)
            *info = {};
        return exact_beta_two(K);
    }

    // (1 - cos t)^p = 1 - sum_k alpha_k cos^k t, p = beta/2,
    // cos^k t = sum_j b_{j,k} cos(j t).
    const double p = 0.5 * beta;
    const double e = p + 0.5;  // remainder over k decays like M^{-e}
    std::size_t M = std::size_t{1} << 20;
    while (M < 64 * (K + 1) * (K + 1) && M < (std::size_t{1} << 23))
        M <<= 1;
    constexpr int levels = 6;  // checkpoints M/32 .. M

    std::vector<double> alpha_start(K + 3);
    alpha_start[1] = p;
    for (std::size_t k = 1; k + 1 < alpha_start.size(); ++k)
        alpha_start[k + 1] = alpha_start[k] * (static_cast<double>(k) - p) / static_cast<double>(k + 1);

    CosineSeries out;
    out.beta = beta;
    out.a.assign(K + 1, 0.0);
    double worst_tail = 0.0, worst_bound = 0.0;

    for (std::size_t j = 0; j <= K; ++j) {
        std::size_t k = j == 0 ? 2 : j;
        double a = alpha_start[k];
        double b = j == 0 ? 0.5 : std::ldexp(1.0, 1 - static_cast<int>(j));
        CompensatedSum s;
        std::vector<double> partial(levels);
        std::vector<double> cut(levels);
        int level = 0;
        for (int l = 0; l < levels; ++l)
            cut[l] = static_cast<double>(M >> (levels - 1 - l));
        while (level < levels) {
            s.add(a * b);
            const double kd = static_cast<double>(k);
            const double jd = static_cast<double>(j);
            const double next = kd + 2.0;
            while (level < levels && next > cut[level]) {
                partial[level] = s.value();
                ++level;
            }
            a *= (kd - p) * (kd + 1.0 - p) / ((kd + 1.0) * (kd + 2.0));
            b *= 0.25 * (kd + 2.0) * (kd + 1.0) / ((0.5 * (kd - jd) + 1.0) * (0.5 * (kd + jd) + 1.0));
            k += 2;
        }
        // S(M_l) = S - sum_i B_i (M_l/M)^{-e-i}
        auto extrapolate = [&](int first) {
            const int n = levels - first;
            Eigen::MatrixXd A(n, n);
            Eigen::VectorXd rhs(n);
            for (int r = 0; r < n; ++r) {
                const double mu = cut[first + r] / static_cast<double>(M);
                A(r, 0) = 1.0;
                for (int i = 1; i < n; ++i)
                    A(r, i) = -std::pow(mu, -e - (i - 1));
                rhs(r) = partial[first + r];
            }
            return A.colPivHouseholderQr().solve(rhs)(0);
        };
        const double S = extrapolate(0);
        const double S_lower = extrapolate(1);
        worst_tail = std::max(worst_tail, std::abs(S - partial[levels - 1]));
        worst_bound = std::max(worst_bound, std::abs(S - S_lower));
        const double scale = std::pow(2.0, -p);
        out.a[j] = j == 0 ? scale * (1.0 - S) : -scale * S;
    }
    if (info) {
        info->terms = M;
        info->tail_estimate = worst_tail;
        info->tail_bound = worst_bound;
    }
    return out;
}

} // namespace hardylab::symbols
