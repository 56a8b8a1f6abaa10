#include "hardylab/numerics.hpp"
#include "hardylab/errors.hpp"

#include <Eigen/Dense>
#include <boost/math/quadrature/gauss.hpp>
#include <boost/math/tools/roots.hpp>
#include <fftw3.h>

#include <algorithm>
#include <atomic>
#include <cmath>
#include <cstdlib>
#include <map>
#include <mutex>
#include <string>
#include <thread>

namespace hardylab::numerics {

void validate_grid(const Grid1D& g, double tol)
{
    if (g.nodes.size() != g.weights.size() || g.nodes.empty())
        throw ValidationError("grid: nodes and weights must be nonempty and of equal length");
    CompensatedSum total;
    for (std::size_t i = 0; i < g.nodes.size(); ++i) {
        double t = g.nodes[i];
        if (!(t > -pi && t <= pi))
            throw ValidationError("grid: node outside (-pi, pi]");
        if (t == 0.0)
            throw ValidationError("grid: node at t = 0");
        if (i > 0 && !(t > g.nodes[i - 1]))
            throw ValidationError("grid: nodes not strictly increasing");
        if (!(g.weights[i] > 0.0))
            throw ValidationError("grid: nonpositive weight");
        total.add(g.weights[i]);
    }
    if (std::abs(total.value() - two_pi) > tol * two_pi)
        throw ValidationError("grid: weights do not sum to 2pi");
}

bool is_power_of_two(std::size_t k) { return k != 0 && (k & (k - 1)) == 0; }

namespace {

std::mutex plan_mutex;
std::map<std::pair<std::size_t, int>, fftw_plan> plan_cache;

fftw_plan get_plan(std::size_t K, int sign)
{
    std::lock_guard<std::mutex> lock(plan_mutex);
    auto key = std::make_pair(K, sign);
    auto it = plan_cache.find(key);
    if (it != plan_cache.end())
        return it->second;
    auto* a = fftw_alloc_complex(K);
    auto* b = fftw_alloc_complex(K);
    fftw_plan p = fftw_plan_dft_1d(static_cast<int>(K), a, b, sign,
                                   FFTW_ESTIMATE | FFTW_UNALIGNED);
    fftw_free(a);
    fftw_free(b);
    plan_cache.emplace(key, p);
    return p;
}

void execute(const cplx* in, cplx* out, std::size_t K, int sign)
{
    fftw_plan p = get_plan(K, sign);
    fftw_execute_dft(p, reinterpret_cast<fftw_complex*>(const_cast<cplx*>(in)),
                     reinterpret_cast<fftw_complex*>(out));
}

} // namespace

void fft_forward_raw(const cplx* in, cplx* out, std::size_t K)
{
    if (!is_power_of_two(K))
        throw SizeError("fft: size must be a power of two");
    execute(in, out, K, FFTW_FORWARD);
}

std::vector<cplx> fft_coefficients(const std::vector<cplx>& samples, double t0)
{
    const std::size_t K = samples.size();
    if (!is_power_of_two(K) || K < 4)
        throw SizeError("fft_coefficients: K must be a power of two, K >= 4 (got " +
                        std::to_string(K) + ")");
    std::vector<cplx> raw(K);
    execute(samples.data(), raw.data(), K, FFTW_FORWARD);
    std::vector<cplx> out(K);
    const long half = static_cast<long>(K / 2);
    for (long n = -half; n < half; ++n) {
        std::size_t idx = static_cast<std::size_t>((n + static_cast<long>(K)) % static_cast<long>(K));
        cplx c = raw[idx] / static_cast<double>(K);
        if (t0 != 0.0)
            c *= std::polar(1.0, -static_cast<double>(n) * t0);
        out[static_cast<std::size_t>(n + half)] = c;
    }
    return out;
}

std::vector<cplx> fft_samples(const std::vector<cplx>& coefficients, double t0)
{
    const std::size_t K = coefficients.size();
    if (!is_power_of_two(K) || K < 4)
        throw SizeError("fft_samples: K must be a power of two, K >= 4");
    const long half = static_cast<long>(K / 2);
    std::vector<cplx> raw(K);
    for (long n = -half; n < half; ++n) {
        cplx c = coefficients[static_cast<std::size_t>(n + half)];
        if (t0 != 0.0)
            c *= std::polar(1.0, static_cast<double>(n) * t0);
        raw[static_cast<std::size_t>((n + static_cast<long>(K)) % static_cast<long>(K))] = c;
    }
    std::vector<cplx> out(K);
    execute(raw.data(), out.data(), K, FFTW_BACKWARD);
    return out;
}

FitResult loglog_fit(const std::vector<std::pair<double, double>>& pairs)
{
    if (pairs.size() < 3)
        throw InsufficientDataError("loglog_fit: need at least 3 pairs");
    const double n = static_cast<double>(pairs.size());
    double sx = 0, sy = 0;
    double hmin = pairs.front().first, hmax = pairs.front().first;
    for (auto [h, y] : pairs) {
        if (!(h > 0) || !(y > 0))
            throw ValidationError("loglog_fit: h and y must be positive");
        sx += std::log(h);
        sy += std::log(y);
        hmin = std::min(hmin, h);
        hmax = std::max(hmax, h);
    }
    const double mx = sx / n, my = sy / n;
    double sxx = 0, sxy = 0;
    for (auto [h, y] : pairs) {
        double dx = std::log(h) - mx;
        sxx += dx * dx;
        sxy += dx * (std::log(y) - my);
    }
    if (!(sxx > 0))
        throw InsufficientDataError("loglog_fit: h values must be distinct");
    FitResult r;
    r.exponent = sxy / sxx;
    const double intercept = my - r.exponent * mx;
    r.prefactor = std::exp(intercept);
    double ss = 0;
    for (auto [h, y] : pairs) {
        double e = std::log(y) - (intercept + r.exponent * std::log(h));
        ss += e * e;
    }
    r.residual = std::sqrt(ss / n);
    r.h_min = hmin;
    r.h_max = hmax;
    return r;
}

std::vector<double> svd_values(const std::vector<cplx>& matrix, std::size_t rows, std::size_t cols)
{
    if (matrix.size() != rows * cols)
        throw ValidationError("svd_values: matrix size mismatch");
    for (const auto& z : matrix)
        if (!std::isfinite(z.real()) || !std::isfinite(z.imag()))
            throw ValidationError("svd_values: non-finite entry");
    if (rows == 0 || cols == 0)
        return {};
    Eigen::Map<const Eigen::Matrix<cplx, Eigen::Dynamic, Eigen::Dynamic, Eigen::RowMajor>> A(
        matrix.data(), static_cast<Eigen::Index>(rows), static_cast<Eigen::Index>(cols));
    Eigen::MatrixXcd M = A;
    Eigen::BDCSVD<Eigen::MatrixXcd> svd(M);
    auto s = svd.singularValues();
    std::vector<double> out(s.data(), s.data() + s.size());
    std::sort(out.begin(), out.end(), std::greater<>());
    return out;
}

double bisect_inverse(const std::function<double(double)>& f, double a, double b, double y)
{
    const double fa = f(a) - y, fb = f(b) - y;
    if (fa == 0.0)
        return a;
    if (fb == 0.0)
        return b;
    if ((fa > 0) == (fb > 0))
        throw BracketError("bisect_inverse: target outside [f(a), f(b)]");
    auto g = [&](double t) { return f(t) - y; };
    boost::math::tools::eps_tolerance<double> tol(std::numeric_limits<double>::digits);
    std::uintmax_t iters = 2000;
    auto [lo, hi] = boost::math::tools::bisect(g, a, b, tol, iters);
    return std::abs(g(lo)) <= std::abs(g(hi)) ? lo : hi;
}

const std::vector<double>& gauss16_nodes()
{
    static const std::vector<double> nodes = [] {
        using G = boost::math::quadrature::gauss<double, 16>;
        std::vector<double> v;
        for (auto x : G::abscissa())
            if (x > 0) {
                v.push_back(-x);
                v.push_back(x);
            }
        std::sort(v.begin(), v.end());
        return v;
    }();
    return nodes;
}

const std::vector<double>& gauss16_weights()
{
    static const std::vector<double> weights = [] {
        using G = boost::math::quadrature::gauss<double, 16>;
        const auto& x = G::abscissa();
        const auto& w = G::weights();
        std::vector<std::pair<double, double>> v;
        for (std::size_t i = 0; i < x.size(); ++i)
            if (x[i] > 0) {
                v.emplace_back(-x[i], w[i]);
                v.emplace_back(x[i], w[i]);
            }
        std::sort(v.begin(), v.end());
        std::vector<double> out;
        for (auto& p : v)
            out.push_back(p.second);
        return out;
    }();
    return weights;
}

unsigned thread_count()
{
    if (const char* env = std::getenv("HARDY_LAB_THREADS")) {
        char* end = nullptr;
        long v = std::strtol(env, &end, 10);
        if (end != env && v > 0)
            return static_cast<unsigned>(v);
    }
    unsigned hw = std::thread::hardware_concurrency();
    return hw == 0 ? 1u : hw;
}

void parallel_for(std::size_t n, std::size_t chunk,
                  const std::function<void(std::size_t, std::size_t)>& body)
{
    if (n == 0)
        return;
    chunk = std::max<std::size_t>(chunk, 1);
    const std::size_t nchunks = (n + chunk - 1) / chunk;
    const unsigned workers = static_cast<unsigned>(std::min<std::size_t>(thread_count(), nchunks));
    if (workers <= 1) {
        for (std::size_t c = 0; c < nchunks; ++c)
            body(c * chunk, std::min(n, (c + 1) * chunk));
        return;
    }
    std::atomic<std::size_t> next{0};
    std::exception_ptr failure;
    std::mutex failure_mutex;
    auto work = [&] {
        for (;;) {
            std::size_t c = next.fetch_add(1);
            if (c >= nchunks)
                return;
            try {
                body(c * chunk, std::min(n, (c + 1) * chunk));
            } catch (...) {
                std::lock_guard<std::mutex> lock(failure_mutex);
                if (!failure)
                    failure = std::current_exception();
            }
        }
    };
    std::vector<std::thread> pool;
    for (unsigned w = 1; w < workers; ++w)
        pool.emplace_back(work);
    work();
    for (auto& t : pool)
        t.join();
    if (failure)
        std::rethrow_exception(failure);
}

} // namespace hardylab::numerics
