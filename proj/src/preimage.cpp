#include "hardylab/errors.hpp"
#include "hardylab/measure.hpp"

#include <algorithm>
#include <cmath>

namespace hardylab::measure {

using numerics::pi;
using numerics::two_pi;

double WindowPreimage::measure() const
{
    numerics::CompensatedSum s;
    for (const auto& iv : intervals)
        s.add(iv.t_hi - iv.t_lo);
    s.add(tail_mass);
    return s.value();
}

namespace {

// gamma^{-1}(y) on (0, t_max], gamma decreasing with gamma ~ 2/t
double gamma_inverse(const symbols::GeneralConstructionSymbol& sym, double y, double t_max)
{
    if (sym.gamma(t_max) >= y)
        return t_max;
    double t = std::min(2.0 / y, t_max);
    for (int it = 0; it < 200; ++it) {
        const double s = std::sin(0.5 * t);
        double slope = -0.5 / (s * s);
        if (sym.beta() && *sym.beta() == 2.0)
            slope -= 0.5 * std::cos(t);
        const double r = sym.gamma(t) - y;
        double tn = t - r / slope;
        if (!(tn > 0.0))
            tn = 0.5 * t;
        if (tn > t_max)
            tn = 0.5 * (t + t_max);
        if (std::abs(tn - t) <= 4e-16 * t)
            return tn;
        t = tn;
    }
    return numerics::bisect_inverse([&](double x) { return sym.gamma(x); },
                                    std::ldexp(1.0, -60), t_max, y);
}

struct Cutoff {
    double t_h;
    double gamma_min;
};

Cutoff modulus_cutoff(const symbols::GeneralConstructionSymbol& sym, double h)
{
    const double level = -std::log1p(-h);
    double t_h = pi;
    if (sym.f(pi) > level)
        t_h = numerics::bisect_inverse([&](double t) { return sym.f(t); }, std::ldexp(1.0, -60), pi, level);
    return {t_h, sym.gamma(t_h)};
}

void check_monotone(const symbols::GeneralConstructionSymbol& sym, double t_h)
{
    double prev = sym.gamma(t_h);
    const int m = 512;
    for (int i = 1; i <= m; ++i) {
        const double t = t_h * std::pow(1e-6, static_cast<double>(i) / m);
        const double g = sym.gamma(t);
        if (!(g > prev))
            throw MethodInapplicableError("window_preimage_intervals: gamma not decreasing on (0, t_h]");
        prev = g;
    }
}

WindowPreimage preimage(const symbols::GeneralConstructionSymbol& sym, double h, double theta,
                        const Cutoff& cut)
{
    WindowPreimage P;
    P.h = h;
    P.xi_angle = theta;
    P.modulus_cutoff = cut.t_h;
    const long n_start =
        std::max(0L, static_cast<long>(std::ceil((cut.gamma_min - theta - h) / two_pi)));
    const long n_end = std::max(200 * n_start, 2000L);
    P.n_start = n_start;
    P.n_end = n_end;
    for (long n = n_start; n <= n_end; ++n) {
        const double y_hi = theta + h + two_pi * static_cast<double>(n);
        double y_lo = theta - h + two_pi * static_cast<double>(n);
        bool clipped = false;
        if (y_lo < cut.gamma_min) {
            y_lo = cut.gamma_min;
            clipped = true;
        }
        if (!(y_hi > y_lo))
            continue;
        const double t_lo = gamma_inverse(sym, y_hi, cut.t_h);
        const double t_hi = gamma_inverse(sym, y_lo, cut.t_h);
        if (t_hi > t_lo)
            P.intervals.push_back({t_lo, t_hi, n, clipped});
    }
    std::sort(P.intervals.begin(), P.intervals.end(),
              [](const PreimageInterval& a, const PreimageInterval& b) { return a.t_lo < b.t_lo; });
    const double t_end = gamma_inverse(sym, theta - h + two_pi * static_cast<double>(n_end + 1), cut.t_h);
    P.tail_mass = t_end * (2.0 * h / two_pi);
    return P;
}

double wrap(double a)
{
    a = std::fmod(a, two_pi);
    return a < 0 ? a + two_pi : a;
}

} // namespace

WindowPreimage window_preimage_intervals(const symbols::GeneralConstructionSymbol& sym, double h,
                                         double xi_angle)
{
    if (!sym.include_inner_factor())
        throw ParameterError("window_preimage_intervals: symbol must carry the inner factor");
    if (!(h > 0.0 && h <= 1.0 / 16.0))
        throw ParameterError("window_preimage_intervals: h must lie in (0, 2^-4]");
    const Cutoff cut = modulus_cutoff(sym, h);
    check_monotone(sym, cut.t_h);
    return preimage(sym, h, wrap(xi_angle), cut);
}

double semi_analytic_rho(const symbols::GeneralConstructionSymbol& sym, double h, std::size_t centers)
{
    if (!sym.include_inner_factor())
        throw ParameterError("semi_analytic_rho: symbol must carry the inner factor");
    if (!(h > 0.0 && h <= 1.0 / 16.0))
        throw ParameterError("semi_analytic_rho: h must lie in (0, 2^-4]");
    const Cutoff cut = modulus_cutoff(sym, h);
    check_monotone(sym, cut.t_h);
    std::vector<double> mass(centers);
    numerics::parallel_for(centers, 16, [&](std::size_t lo, std::size_t hi) {
        for (std::size_t c = lo; c < hi; ++c) {
            const double theta = two_pi * static_cast<double>(c) / static_cast<double>(centers);
            // t > 0 carries argument gamma(t); t < 0 carries -gamma(|t|)
            const double m = preimage(sym, h, wrap(theta), cut).measure() +
                             preimage(sym, h, wrap(-theta), cut).measure();
            mass[c] = m / two_pi;
        }
    });
    return *std::max_element(mass.begin(), mass.end());
}

} // namespace hardylab::measure
