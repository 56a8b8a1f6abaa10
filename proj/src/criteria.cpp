#include "hardylab/criteria.hpp"
#include "hardylab/errors.hpp"

#include <Eigen/Dense>

#include <algorithm>
#include <cmath>
#include <optional>

namespace hardylab::criteria {

using numerics::two_pi;

const char* to_string(Tri t)
{
    switch (t) {
    case Tri::yes:
        return "yes";
    case Tri::no:
        return "no";
    default:
        return "inconclusive";
    }
}

const char* to_string(SumVerdict v)
{
    switch (v) {
    case SumVerdict::converging:
        return "converging";
    case SumVerdict::diverging:
        return "diverging";
    default:
        return "inconclusive";
    }
}

const char* to_string(Trend t)
{
    switch (t) {
    case Trend::bounded:
        return "bounded";
    case Trend::increasing:
        return "increasing";
    default:
        return "inconclusive";
    }
}

namespace {

double level_power_sum(const measure::SparseLevel& lvl, double alpha)
{
    numerics::CompensatedSum s;
    for (double m : lvl.mass)
        if (m > 0.0)
            s.add(std::pow(m, alpha));
    return s.value();
}

// slope of log y against log n over entries with y > 0
std::optional<double> log_slope(const std::vector<std::pair<double, double>>& pts)
{
    std::vector<std::pair<double, double>> pos;
    for (auto [n, y] : pts)
        if (y > 0.0)
            pos.emplace_back(n, y);
    if (pos.size() < 3)
        return std::nullopt;
    return numerics::loglog_fit(pos).exponent;
}

std::vector<std::pair<double, double>> scaled_profile(const measure::CarlesonProfile& profile,
                                                      LevelRange range, double log_power)
{
    std::vector<std::pair<double, double>> out;
    for (const auto& l : profile.levels) {
        if (range.n_lo >= 0 && l.n < range.n_lo)
            continue;
        if (range.n_hi >= 0 && l.n > range.n_hi)
            continue;
        double u = l.rho_hat * std::ldexp(1.0, l.n);
        if (log_power != 0.0)
            u *= std::pow(l.n * std::log(2.0), log_power);
        out.emplace_back(static_cast<double>(l.n), u);
    }
    return out;
}

} // namespace

LueckingReport luecking_partial_sums(const measure::PullbackHistogram& hist, double p,
                                     const LueckingOptions& options)
{
    if (!(p > 0.0))
        throw ParameterError("luecking_partial_sums: p must be positive");
    if (hist.depth < 6)
        throw ParameterError("luecking_partial_sums: histogram depth must be at least 6");
    LueckingReport R;
    R.p = p;
    const double alpha = 0.5 * p;
    numerics::CompensatedSum S;
    for (int n = 0; n <= hist.depth; ++n) {
        const double L = std::pow(2.0, n * alpha) *
                         level_power_sum(hist.box_mass[static_cast<std::size_t>(n)], alpha);
        R.per_level.push_back(L);
        S.add(L);
        R.partial_sums.push_back(S.value());
    }
    const int lo = std::max(1, options.n_lo >= 0 ? options.n_lo : hist.depth / 3);
    const int hi = options.n_hi >= 0 ? std::min(options.n_hi, hist.depth) : hist.depth;
    std::vector<std::pair<double, double>> pts;
    // levels fed by fewer than 100 samples are left out of the fit
    for (int n = lo; n <= hi; ++n)
        if (R.per_level[static_cast<std::size_t>(n)] > 0.0 &&
            hist.samples_per_level[static_cast<std::size_t>(n)] >= 100)
            pts.emplace_back(static_cast<double>(n), R.per_level[static_cast<std::size_t>(n)]);
    if (pts.size() < 3) {
        // no mass in the fitted range: the tail vanishes
        R.rank_deficient = true;
        R.verdict = SumVerdict::converging;
        return R;
    }
    if (options.log_correction) {
        const auto m = static_cast<Eigen::Index>(pts.size());
        Eigen::MatrixXd A(m, 3);
        Eigen::VectorXd b(m);
        for (Eigen::Index i = 0; i < m; ++i) {
            const double n = pts[static_cast<std::size_t>(i)].first;
            A(i, 0) = 1.0;
            A(i, 1) = std::log(n);
            A(i, 2) = std::log(std::log(n));
            b(i) = std::log(pts[static_cast<std::size_t>(i)].second);
        }
        Eigen::VectorXd x = A.colPivHouseholderQr().solve(b);
        Eigen::VectorXd res = A * x - b;
        R.growth_fit.exponent = x(1);
        R.growth_fit.prefactor = std::exp(x(0));
        R.growth_fit.residual = std::sqrt(res.squaredNorm() / static_cast<double>(m));
        R.growth_fit.h_min = pts.front().first;
        R.growth_fit.h_max = pts.back().first;
        R.kappa = x(2);
    } else {
        R.growth_fit = numerics::loglog_fit(pts);
    }
    const double s = R.growth_fit.exponent;
    if (s < -1.2 && R.growth_fit.residual < 0.5)
        R.verdict = SumVerdict::converging;
    else if (s > -0.8)
        R.verdict = SumVerdict::diverging;
    else
        R.verdict = SumVerdict::inconclusive;
    return R;
}

std::pair<double, double> box_window_sums(const measure::PullbackHistogram& hist, double p, int D)
{
    const double alpha = 0.5 * p;
    numerics::CompensatedSum B, W;
    for (int n = 0; n <= std::min(D, hist.depth); ++n) {
        const double scale = std::pow(2.0, n * alpha);
        B.add(scale * level_power_sum(hist.box_mass[static_cast<std::size_t>(n)], alpha));
        W.add(scale * level_power_sum(hist.window_mass[static_cast<std::size_t>(n)], alpha));
    }
    return {B.value(), W.value()};
}

CriterionVerdict box_window_consistency(const measure::PullbackHistogram& hist, double p,
                                        const BoxWindowOptions& options)
{
    if (hist.depth < 6)
        throw ParameterError("box_window_consistency: histogram depth must be at least 6");
    CriterionVerdict V;
    V.name = "box_window_consistency";
    V.tolerance_used = options.bracket;
    const int hi = options.depth_hi >= 0 ? std::min(options.depth_hi, hist.depth) : hist.depth;
    bool contained = true;
    double rmin = std::numeric_limits<double>::infinity(), rmax = 0.0;
    for (int D = options.depth_lo; D <= hi; ++D) {
        auto [b, w] = box_window_sums(hist, p, D);
        double ratio;
        if (b == 0.0 && w == 0.0)
            ratio = 1.0;
        else if (b == 0.0)
            ratio = std::numeric_limits<double>::infinity();
        else
            ratio = w / b;
        if (w < b)
            contained = false;
        rmin = std::min(rmin, ratio);
        rmax = std::max(rmax, ratio);
        V.evidence.emplace_back(static_cast<double>(D), ratio);
    }
    const bool bounded = std::isfinite(rmax) && rmax <= options.bracket * rmin;
    V.passed = contained && bounded ? Tri::yes : Tri::no;
    V.note = "ratio window/box in [" + std::to_string(rmin) + ", " + std::to_string(rmax) + "]";
    return V;
}

namespace {

// yes: statistic trends to zero; no: bounded below
void trend_to_zero(CriterionVerdict& V, const std::vector<std::pair<double, double>>& u)
{
    V.tolerance_used = 0.3;
    V.evidence = u;
    if (u.size() < 5) {
        V.note = "fewer than 5 levels";
        return;
    }
    const bool all_zero = std::all_of(u.begin(), u.end(), [](auto& x) { return x.second == 0.0; });
    if (all_zero) {
        V.passed = Tri::yes;
        V.note = "statistic identically zero";
        return;
    }
    if (u.back().second == 0.0) {
        V.passed = Tri::yes;
        V.note = "statistic reaches zero";
        return;
    }
    const auto slope = log_slope(u);
    if (!slope) {
        V.note = "too few positive levels";
        return;
    }
    std::vector<std::pair<double, double>> tail(u.begin() + static_cast<long>(u.size() / 2), u.end());
    const auto tail_slope = log_slope(tail);
    double umin = std::numeric_limits<double>::infinity();
    for (auto& x : u)
        umin = std::min(umin, x.second);
    const bool halves = u.front().second >= 2.0 * u.back().second;
    V.note = "slope " + std::to_string(*slope);
    if ((halves && tail_slope && *tail_slope < 0.0) || *slope <= -0.3)
        V.passed = Tri::yes;
    else if (*slope >= -0.1 && umin > 0.0)
        V.passed = Tri::no;
}

} // namespace

CriterionVerdict maccluer_test(const measure::CarlesonProfile& profile, LevelRange range)
{
    CriterionVerdict V;
    V.name = "maccluer";
    trend_to_zero(V, scaled_profile(profile, range, 0.0));
    return V;
}

CriterionVerdict necessary_condition_diag(const measure::CarlesonProfile& profile, double p,
                                          LevelRange range)
{
    if (!(p > 0.0))
        throw ParameterError("necessary_condition_diag: p must be positive");
    CriterionVerdict V;
    V.name = "necessary_condition";
    const double power = std::isinf(p) ? 0.0 : 2.0 / p;
    trend_to_zero(V, scaled_profile(profile, range, power));
    return V;
}

CriterionVerdict alpha_carleson_sufficient(const FitResult& fit, double p, double alpha_cap)
{
    if (!(fit.residual < 0.3))
        throw ParameterError("alpha_carleson_sufficient: fit residual must be below 0.3");
    CriterionVerdict V;
    V.name = "alpha_carleson_sufficient";
    V.tolerance_used = 0.1;
    const double alpha = std::min(fit.exponent, alpha_cap);
    if (alpha <= 1.05) {
        V.evidence.emplace_back(p, std::numeric_limits<double>::infinity());
        V.note = "alpha too close to 1";
        return V;
    }
    const double threshold = 2.0 / (alpha - 1.0);
    V.evidence.emplace_back(p, threshold);
    V.note = "alpha " + std::to_string(alpha) + ", threshold p > " + std::to_string(threshold);
    if (alpha - 0.1 > 1.0 && p > threshold)
        V.passed = Tri::yes;
    return V;
}

HsResult hs_integral(const symbols::BoundaryTrace& trace)
{
    HsResult R;
    const double cut = std::ldexp(1.0, -((trace.refinement_depth + 1) / 2));
    numerics::CompensatedSum full, half, modulus;
    const double mult = trace.mirrored ? 2.0 : 1.0;
    for (std::size_t i = 0; i < trace.size(); ++i) {
        const double d = trace.defects[i];
        if (!(d > 0.0))
            throw SingularityError("hs_integral: |phi*| = 1 at a sampled node");
        const double w = mult * trace.grid.weights[i] / two_pi;
        const double v = w / (d * (2.0 - d));
        full.add(v);
        modulus.add(w / d);
        if (std::abs(trace.grid.nodes[i]) >= cut)
            half.add(v);
    }
    R.value = full.value();
    R.value_half = half.value();
    R.value_modulus = modulus.value();
    R.divergent = std::abs(R.value - R.value_half) > 0.1 * std::abs(R.value);
    return R;
}

AngularProbe angular_derivative_probe(const symbols::Symbol& symbol, numerics::cplx xi,
                                      const std::vector<double>& r_values)
{
    if (!symbol.has_interior())
        throw UnsupportedError("angular_derivative_probe: no interior evaluator");
    if (r_values.size() < 2)
        throw ParameterError("angular_derivative_probe: need at least two radii");
    for (std::size_t i = 0; i < r_values.size(); ++i) {
        if (!(r_values[i] > 0.0 && r_values[i] < 1.0))
            throw ParameterError("angular_derivative_probe: radii must lie in (0, 1)");
        if (i && !(r_values[i] > r_values[i - 1]))
            throw ParameterError("angular_derivative_probe: radii must increase");
    }
    const numerics::cplx u = xi / std::abs(xi);
    AngularProbe P;
    P.r_values = r_values;
    for (double r : r_values)
        P.ratios.push_back(symbol.interior_defect(r * u) / (1.0 - r));
    const auto [mn, mx] = std::minmax_element(P.ratios.begin(), P.ratios.end());
    const std::size_t half = P.ratios.size() / 2;
    P.liminf_estimate = *std::min_element(P.ratios.begin() + static_cast<long>(half), P.ratios.end());
    bool nondecreasing = true;
    for (std::size_t i = half + 1; i < P.ratios.size(); ++i)
        if (P.ratios[i] < P.ratios[i - 1] * (1.0 - 1e-9))
            nondecreasing = false;
    if (*mx <= 1.5 * *mn)
        P.trend = Trend::bounded;
    else if (nondecreasing && P.ratios.back() >= 2.0 * P.ratios.front())
        P.trend = Trend::increasing;
    return P;
}

AngularProbe angular_derivative_probe(const symbols::SymbolSpec& spec, numerics::cplx xi,
                                      const std::vector<double>& r_values)
{
    return angular_derivative_probe(*symbols::make_symbol(spec), xi, r_values);
}

} // namespace hardylab::criteria
