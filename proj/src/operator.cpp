#include "hardylab/errors.hpp"
#include "hardylab/operator.hpp"

#include <Eigen/Dense>

#include <algorithm>
#include <cmath>
#include <string>

namespace hardylab::op {

using numerics::pi;
using numerics::two_pi;

const char* to_string(TailVerdict v)
{
    switch (v) {
    case TailVerdict::cauchy:
        return "cauchy";
    case TailVerdict::growing:
        return "growing";
    default:
        return "inconclusive";
    }
}

namespace {

// 1 on x <= 0, 0 on x >= 1, C-infinity in between
double smooth_step(double x)
{
    if (x <= 0.0)
        return 1.0;
    if (x >= 1.0)
        return 0.0;
    const double a = std::exp(-1.0 / (1.0 - x));
    const double b = std::exp(-1.0 / x);
    return a / (a + b);
}

double periodic_distance(double t, double c)
{
    return std::abs(std::remainder(t - c, two_pi));
}

struct Bump {
    double center;
    double tau;
    double operator()(double t) const
    {
        return smooth_step((periodic_distance(t, center) / tau - 0.1) / 0.9);
    }
};

cplx guarded(cplx v)
{
    const double a = std::abs(v);
    return a > 1.0 ? v / a : v;
}

// rows n = 0..N-1 of the coefficients of (phi*)^m * weight, on K cell centres
std::vector<cplx> fft_part(const symbols::Symbol& symbol, std::size_t N, std::size_t K,
                           const std::vector<Bump>& bumps)
{
    const double d = two_pi / static_cast<double>(K);
    const double t0 = -pi + 0.5 * d;
    std::vector<cplx> v(K);
    std::vector<double> u(K);
    numerics::parallel_for(K, 4096, [&](std::size_t lo, std::size_t hi) {
        for (std::size_t j = lo; j < hi; ++j) {
            const double t = t0 + d * static_cast<double>(j);
            v[j] = guarded(symbol.boundary(t).value);
            double w = 1.0;
            for (const auto& b : bumps)
                w -= b(t);
            u[j] = w;
        }
    });
    std::vector<cplx> phase(N);
    for (std::size_t n = 0; n < N; ++n)
        phase[n] = std::polar(1.0 / static_cast<double>(K), -static_cast<double>(n) * t0);
    std::vector<cplx> out(N * N);
    std::vector<cplx> pm(K, cplx(1.0, 0.0)), x(K), y(K);
    for (std::size_t m = 0; m < N; ++m) {
        for (std::size_t j = 0; j < K; ++j)
            x[j] = pm[j] * u[j];
        numerics::fft_forward_raw(x.data(), y.data(), K);
        for (std::size_t n = 0; n < N; ++n)
            out[n * N + m] = y[n] * phase[n];
        for (std::size_t j = 0; j < K; ++j)
            pm[j] *= v[j];
    }
    return out;
}

struct LocalRule {
    std::vector<double> t;
    std::vector<double> w;
};

LocalRule local_rule(const symbols::Symbol& symbol, std::size_t N, const std::vector<Bump>& bumps,
                     std::size_t max_panels)
{
    const auto& gx = numerics::gauss16_nodes();
    const auto& gw = numerics::gauss16_weights();
    LocalRule rule;
    std::size_t panels = 0;
    const double Nd = static_cast<double>(N);
    for (const auto& bump : bumps) {
        for (int side : {-1, 1}) {
            for (int k = 0; k < 60; ++k) {
                const double a = std::ldexp(bump.tau, -k - 1), b = std::ldexp(bump.tau, -k);
                // phase variation of (phi*)^m e^{-int} across the panel
                constexpr int probes = 33;
                double turn = 0.0;
                cplx prev = 0.0;
                for (int i = 0; i < probes; ++i) {
                    const double s = a + (b - a) * i / (probes - 1.0);
                    const cplx v = symbol.boundary(bump.center + side * s).value;
                    if (i > 0 && std::abs(v) > 0.0 && std::abs(prev) > 0.0)
                        turn += std::abs(std::arg(v * std::conj(prev)));
                    prev = v;
                }
                const double total = Nd * turn + Nd * (b - a);
                const auto npan = static_cast<std::size_t>(std::max(1.0, std::ceil(total / 3.0)));
                panels += npan;
                if (panels > max_panels)
                    throw ResolutionError(
                        "matrix_truncation: boundary values oscillate too fast near t = " +
                        std::to_string(bump.center) + " for a local quadrature");
                for (std::size_t p = 0; p < npan; ++p) {
                    const double lo = a + (b - a) * static_cast<double>(p) / static_cast<double>(npan);
                    const double hi = a + (b - a) * static_cast<double>(p + 1) / static_cast<double>(npan);
                    for (std::size_t i = 0; i < gx.size(); ++i) {
                        const double s = 0.5 * (lo + hi) + 0.5 * (hi - lo) * gx[i];
                        const double t = bump.center + side * s;
                        const double w = 0.5 * (hi - lo) * gw[i] * bump(t);
                        if (w > 0.0) {
                            rule.t.push_back(t);
                            rule.w.push_back(w / two_pi);
                        }
                    }
                }
            }
        }
    }
    return rule;
}

std::vector<cplx> local_part(const symbols::Symbol& symbol, std::size_t N, const LocalRule& rule)
{
    const auto L = static_cast<Eigen::Index>(rule.t.size());
    const auto n = static_cast<Eigen::Index>(N);
    std::vector<cplx> vals(rule.t.size());
    numerics::parallel_for(rule.t.size(), 1024, [&](std::size_t lo, std::size_t hi) {
        for (std::size_t l = lo; l < hi; ++l)
            vals[l] = guarded(symbol.boundary(rule.t[l]).value);
    });
    Eigen::MatrixXcd E(n, L), P(L, n);
    for (Eigen::Index l = 0; l < L; ++l) {
        const auto li = static_cast<std::size_t>(l);
        const cplx step = std::polar(1.0, -rule.t[li]);
        cplx e = rule.w[li];
        cplx pw = 1.0;
        for (Eigen::Index r = 0; r < n; ++r) {
            E(r, l) = e;
            P(l, r) = pw;
            e *= step;
            pw *= vals[li];
        }
    }
    Eigen::Matrix<cplx, Eigen::Dynamic, Eigen::Dynamic, Eigen::RowMajor> A = E * P;
    return std::vector<cplx>(A.data(), A.data() + A.size());
}

} // namespace

OperatorMatrix matrix_truncation(const symbols::Symbol& symbol, std::size_t N, std::size_t K,
                                 const TruncationOptions& options)
{
    if (N < 1)
        throw ParameterError("matrix_truncation: N must be positive");
    if (!numerics::is_power_of_two(K) || K < 8 * N)
        throw SizeError("matrix_truncation: K must be a power of two with K >= 8N");
    std::vector<Bump> bumps;
    const double tau = std::clamp(48.0 * two_pi / static_cast<double>(K), 0.03, 0.3);
    for (double c : symbol.singular_points())
        bumps.push_back({c, tau});

    OperatorMatrix A;
    A.N = N;
    A.fft_size = K;
    A.entries = fft_part(symbol, N, K, bumps);
    if (options.check_aliasing) {
        const auto finer = fft_part(symbol, N, 2 * K, bumps);
        double change = 0.0;
        for (std::size_t i = 0; i < finer.size(); ++i)
            change = std::max(change, std::abs(finer[i] - A.entries[i]));
        A.aliasing_change = change;
        if (!(change < options.aliasing_tolerance))
            throw ResolutionError("matrix_truncation: entries changed by " + std::to_string(change) +
                                  " when doubling K; suggested K = " + std::to_string(4 * K));
    }
    if (!bumps.empty()) {
        const auto rule = local_rule(symbol, N, bumps, options.max_local_panels);
        A.local_nodes = rule.t.size();
        const auto loc = local_part(symbol, N, rule);
        for (std::size_t i = 0; i < loc.size(); ++i)
            A.entries[i] += loc[i];
    }
    for (const auto& z : A.entries)
        if (!std::isfinite(z.real()) || !std::isfinite(z.imag()))
            throw ResolutionError("matrix_truncation: non-finite entry");
    return A;
}

OperatorMatrix matrix_truncation(const symbols::BoundaryTrace& trace, std::size_t N, std::size_t K,
                                 const TruncationOptions& options)
{
    if (!trace.symbol)
        throw ParameterError("matrix_truncation: trace carries no symbol to resample");
    return matrix_truncation(*trace.symbol, N, K, options);
}

SingularSpectrum singular_spectrum(const OperatorMatrix& A)
{
    SingularSpectrum S;
    S.N = A.N;
    S.values = numerics::svd_values(A.entries, A.N, A.N);
    return S;
}

SchattenSum schatten_sum(const SingularSpectrum& spectrum, double p)
{
    if (!(p > 0.0))
        throw ParameterError("schatten_sum: p must be positive");
    SchattenSum R;
    numerics::CompensatedSum s;
    for (double v : spectrum.values)
        if (v > 0.0)
            s.add(std::pow(v, p));
    R.sum = s.value();
    std::vector<std::pair<double, double>> pts;
    const std::size_t trusted = std::max<std::size_t>(spectrum.values.size() / 4, 1);
    for (std::size_t k = 0; k < trusted; ++k)
        if (spectrum.values[k] > 1e-300)
            pts.emplace_back(static_cast<double>(k + 1), spectrum.values[k]);
    if (pts.size() >= 3) {
        R.decay_fit = numerics::loglog_fit(pts);
        R.decay_available = true;
    }
    return R;
}

TailStudy spectral_tail_study(const std::vector<std::size_t>& Ns,
                              const std::vector<SingularSpectrum>& spectra, double p)
{
    if (Ns.size() != spectra.size())
        throw ParameterError("spectral_tail_study: size mismatch");
    TailStudy T;
    T.p = p;
    T.Ns = Ns;
    for (const auto& s : spectra)
        T.sums.push_back(schatten_sum(s, p).sum);
    for (std::size_t i = 1; i < T.sums.size(); ++i)
        T.increments.push_back(T.sums[i] - T.sums[i - 1]);
    if (T.increments.size() < 2)
        return T;
    const double last = T.increments.back();
    const double prev = T.increments[T.increments.size() - 2];
    if (std::abs(last) <= 1e-14 * std::abs(T.sums.back())) {
        T.increment_ratio = 0.0;
        T.verdict = TailVerdict::cauchy;
        return T;
    }
    if (!(prev > 0.0))
        return T;
    T.increment_ratio = last / prev;
    // the increment from N/2 to N collects the level n = log2 N of the
    // Luecking sum, so it is compared with n^s and the series converges iff s < -1
    std::vector<double> x, y;
    for (std::size_t i = 0; i < T.increments.size(); ++i) {
        if (!(T.increments[i] > 0.0))
            return T;
        x.push_back(std::log(std::log2(static_cast<double>(Ns[i + 1]))));
        y.push_back(std::log(T.increments[i]));
    }
    const double m = static_cast<double>(x.size());
    double sx = 0.0, sy = 0.0, sxx = 0.0, sxy = 0.0;
    for (std::size_t i = 0; i < x.size(); ++i) {
        sx += x[i];
        sy += y[i];
        sxx += x[i] * x[i];
        sxy += x[i] * y[i];
    }
    T.increment_exponent = (m * sxy - sx * sy) / (m * sxx - sx * sx);
    if (T.increment_exponent < -1.2)
        T.verdict = TailVerdict::cauchy;
    else if (T.increment_exponent > -0.8)
        T.verdict = TailVerdict::growing;
    return T;
}

WeightedPoints radial_power_measure(double beta, int levels)
{
    if (!(beta > 1.0))
        throw ParameterError("radial_power_measure: beta must exceed 1");
    const auto& gx = numerics::gauss16_nodes();
    const auto& gw = numerics::gauss16_weights();
    constexpr double golden_angle = 2.39996322972865332223;
    WeightedPoints mu;
    numerics::CompensatedSum total;
    std::size_t idx = 0;
    auto panel = [&](double a, double b) {
        for (std::size_t i = 0; i < gx.size(); ++i) {
            const double s = 0.5 * (a + b) + 0.5 * (b - a) * gx[i];
            const double w = 0.5 * (b - a) * gw[i] * std::pow(s, beta - 2.0) * (1.0 - s);
            mu.z.push_back(std::polar(1.0 - s, golden_angle * static_cast<double>(idx++)));
            mu.w.push_back(w);
            total.add(w);
        }
    };
    for (int k = 0; k < levels; ++k)
        panel(std::ldexp(1.0, -k - 1), std::ldexp(1.0, -k));
    panel(0.0, std::ldexp(1.0, -levels));
    const double T = total.value();
    for (auto& w : mu.w)
        w /= T;
    return mu;
}

PoissonReport poisson_moment_sums(const WeightedPoints& mu, double p, std::size_t n_max)
{
    if (!(p > 0.0 && p <= 2.0))
        throw ParameterError("poisson_moment_sums: p must lie in (0, 2]");
    if (mu.z.size() != mu.w.size() || mu.z.empty())
        throw ValidationError("poisson_moment_sums: malformed sample set");
    numerics::CompensatedSum wt;
    for (double w : mu.w)
        wt.add(w);
    if (std::abs(wt.value() - 1.0) > 1e-12)
        throw ValidationError("poisson_moment_sums: weights must sum to 1");
    PoissonReport R;
    R.p = p;
    R.moments.assign(n_max + 1, 0.0);
    std::vector<numerics::CompensatedSum> acc(n_max + 1);
    for (std::size_t i = 0; i < mu.z.size(); ++i) {
        const double x = std::norm(mu.z[i]);
        double pw = 1.0;
        for (std::size_t n = 0; n <= n_max; ++n) {
            acc[n].add(mu.w[i] * pw);
            pw *= x;
            if (pw == 0.0)
                break;
        }
    }
    for (std::size_t n = 0; n <= n_max; ++n)
        R.moments[n] = acc[n].value();
    numerics::CompensatedSum S;
    for (std::size_t n = 0; n <= n_max; ++n) {
        const double term = R.moments[n] > 0.0 ? std::pow(R.moments[n], 0.5 * p) : 0.0;
        S.add(n == 0 ? term : 2.0 * term);
        R.partial_sums.push_back(S.value());
    }
    std::vector<std::pair<double, double>> pts;
    for (std::size_t n = std::max<std::size_t>(n_max / 16, 1); n <= n_max; ++n)
        if (R.moments[n] > 0.0)
            pts.emplace_back(static_cast<double>(n), R.moments[n]);
    if (pts.size() >= 3)
        R.moment_fit = numerics::loglog_fit(pts);
    for (std::size_t N = 2; N <= n_max; N *= 2)
        R.doubling_increments.emplace_back(N, R.partial_sums[N] - R.partial_sums[N / 2]);
    // increments over successive doublings shrink
    R.cauchy = true;
    const auto& inc = R.doubling_increments;
    const std::size_t k0 = inc.size() >= 4 ? inc.size() - 4 : 0;
    for (std::size_t k = k0 + 1; k < inc.size(); ++k) {
        const double scale = 1e-14 * std::max(1.0, std::abs(R.partial_sums.back()));
        if (inc[k].second > scale && !(inc[k].second < inc[k - 1].second))
            R.cauchy = false;
    }
    return R;
}

} // namespace hardylab::op
