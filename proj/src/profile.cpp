#include "hardylab/errors.hpp"
#include "hardylab/measure.hpp"

#include <algorithm>
#include <cmath>

namespace hardylab::measure {

using numerics::two_pi;

const ProfileLevel& CarlesonProfile::level(int n) const
{
    for (const auto& l : levels)
        if (l.n == n)
            return l;
    throw ParameterError("profile: level " + std::to_string(n) + " not present");
}

namespace {

struct Point {
    double a;
    double d;
    double w;
};

struct Prefix {
    std::vector<double> a;
    std::vector<long double> cum;  // cum[i] = sum of w over points < i

    std::size_t lower(double x) const
    {
        return static_cast<std::size_t>(std::lower_bound(a.begin(), a.end(), x) - a.begin());
    }
    std::size_t upper(double x) const
    {
        return static_cast<std::size_t>(std::upper_bound(a.begin(), a.end(), x) - a.begin());
    }
};

} // namespace

CarlesonProfile carleson_profile(const BoundaryTrace& trace, int n_max)
{
    if (n_max < 1 || n_max > 24)
        throw ParameterError("carleson_profile: n_max must lie in [1, 24]");
    std::vector<Point> pts;
    pts.reserve(trace.mirrored ? 2 * trace.size() : trace.size());
    const double h1 = 0.5;
    for (std::size_t i = 0; i < trace.size(); ++i) {
        const double d = trace.defects[i];
        if (d > h1)
            continue;
        const auto v = trace.values[i];
        double a = std::atan2(v.imag(), v.real());
        if (a < 0.0)
            a += two_pi;
        if (a >= two_pi)
            a = 0.0;
        const double w = trace.grid.weights[i] / two_pi;
        pts.push_back({a, d, w});
        if (trace.mirrored)
            pts.push_back({a == 0.0 ? 0.0 : two_pi - a, d, w});
    }
    std::stable_sort(pts.begin(), pts.end(), [](const Point& x, const Point& y) { return x.a < y.a; });

    CarlesonProfile P;
    P.sup_resolution = 4;
    for (int n = 1; n <= n_max; ++n) {
        const double h = std::ldexp(1.0, -n);
        pts.erase(std::remove_if(pts.begin(), pts.end(), [h](const Point& p) { return p.d > h; }),
                  pts.end());
        Prefix pre;
        pre.a.reserve(pts.size());
        pre.cum.reserve(pts.size() + 1);
        pre.cum.push_back(0.0L);
        for (const auto& p : pts) {
            pre.a.push_back(p.a);
            pre.cum.push_back(pre.cum.back() + static_cast<long double>(p.w));
        }
        const std::size_t centers = P.sup_resolution << n;
        const double step = two_pi / static_cast<double>(centers);
        ProfileLevel L;
        L.n = n;
        L.h = h;
        L.centers_tested = centers;
        long double best = -1.0L;
        // closed window [c - h, c + h] modulo 2 pi
        std::size_t lo = 0, hi = 0;
        for (std::size_t c = 0; c < centers; ++c) {
            const double xc = step * static_cast<double>(c);
            long double mass;
            std::size_t count;
            const double left = xc - h, right = xc + h;
            if (left >= 0.0 && right < two_pi) {
                while (lo < pre.a.size() && pre.a[lo] < left)
                    ++lo;
                if (hi < lo)
                    hi = lo;
                while (hi < pre.a.size() && pre.a[hi] <= right)
                    ++hi;
                mass = pre.cum[hi] - pre.cum[lo];
                count = hi - lo;
            } else if (left < 0.0) {
                const std::size_t u = pre.upper(right);
                const std::size_t l = pre.lower(left + two_pi);
                mass = pre.cum[u] + (pre.cum.back() - pre.cum[l]);
                count = u + (pre.a.size() - l);
            } else {
                const std::size_t l = pre.lower(left);
                const std::size_t u = pre.upper(right - two_pi);
                mass = (pre.cum.back() - pre.cum[l]) + pre.cum[u];
                count = (pre.a.size() - l) + u;
            }
            if (mass > best) {
                best = mass;
                L.effective_samples = count;
                L.best_center = xc;
            }
        }
        L.rho_hat = std::min(1.0, static_cast<double>(std::max(best, 0.0L)));
        P.levels.push_back(L);
    }
    // a window at h contains the one at h/2 with the same center
    for (std::size_t i = P.levels.size(); i-- > 1;) {
        auto& big = P.levels[i - 1];
        const auto& small = P.levels[i];
        if (small.rho_hat > big.rho_hat) {
            big.rho_hat = small.rho_hat;
            big.effective_samples = small.effective_samples;
            big.best_center = small.best_center;
        }
    }
    double C = 0.0;
    for (std::size_t i = 0; i < P.levels.size(); ++i)
        for (std::size_t k = 0; k < i; ++k)
            if (P.levels[k].rho_hat > 0.0)
                C = std::max(C, std::ldexp(P.levels[i].rho_hat / P.levels[k].rho_hat,
                                           P.levels[i].n - P.levels[k].n));
    P.doubling_constant = C;
    return P;
}

FitResult fit_carleson_exponent(const CarlesonProfile& profile, int n_lo, int n_hi)
{
    if (n_hi - n_lo < 3)
        throw InsufficientDataError("fit_carleson_exponent: need n_hi - n_lo >= 3");
    std::vector<std::pair<double, double>> pairs;
    for (int n = n_lo; n <= n_hi; ++n) {
        const auto& l = profile.level(n);
        if (!(l.rho_hat > 0.0))
            throw DegenerateProfileError("fit_carleson_exponent: zero rho_hat at level " +
                                         std::to_string(n));
        pairs.emplace_back(l.h, l.rho_hat);
    }
    return numerics::loglog_fit(pairs);
}

} // namespace hardylab::measure
