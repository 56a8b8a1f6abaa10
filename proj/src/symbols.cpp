#include "hardylab/errors.hpp"
#include "hardylab/symbols.hpp"

#include <boost/math/quadrature/tanh_sinh.hpp>

#include <cmath>
#include <sstream>

namespace hardylab::symbols {

using numerics::pi;
using numerics::two_pi;

namespace {

constexpr cplx I{0.0, 1.0};

double cot_half(double t) { return 1.0 / std::tan(0.5 * t); }

// Re((1+z)/(1-z)) = (1-|z|^2)/|1-z|^2
double inner_log_modulus(cplx z)
{
    const double n = std::norm(1.0 - z);
    return (1.0 - std::norm(z)) / n;
}

std::string fmt(double x)
{
    std::ostringstream os;
    os.precision(6);
    os << x;
    return os.str();
}

} // namespace

std::string SymbolSpec::label() const
{
    std::ostringstream os;
    os << family;
    std::vector<std::string> parts;
    if (beta)
        parts.push_back("beta=" + fmt(*beta));
    if (theta)
        parts.push_back("theta=" + fmt(*theta));
    if (q)
        parts.push_back("q=" + fmt(*q));
    if (epsilon)
        parts.push_back("eps=" + fmt(*epsilon));
    if (r)
        parts.push_back("r=" + fmt(r->real()) + (r->imag() != 0 ? "+" + fmt(r->imag()) + "i" : ""));
    if (c)
        parts.push_back("c=" + fmt(c->real()) + (c->imag() != 0 ? "+" + fmt(c->imag()) + "i" : ""));
    if (k)
        parts.push_back("k=" + std::to_string(*k));
    if (inner_factor)
        parts.push_back("inner");
    if (!parts.empty()) {
        os << "(";
        for (std::size_t i = 0; i < parts.size(); ++i)
            os << (i ? "," : "") << parts[i];
        os << ")";
    }
    return os.str();
}

cplx Symbol::interior(cplx) const
{
    throw UnsupportedError("symbol family has no interior evaluator: " + spec_.family);
}

// ---------------------------------------------------------------- elementary

ElementarySymbol::ElementarySymbol(const SymbolSpec& spec) : Symbol(spec)
{
    const auto& f = spec.family;
    if (f == "identity") {
        kind_ = Kind::identity;
    } else if (f == "rotation") {
        kind_ = Kind::rotation;
        param_ = spec.r.value_or(cplx(0.5, 0.0));
        if (!(std::abs(param_) <= 1.0))
            throw ParameterError("rotation: |r| must be at most 1");
    } else if (f == "constant") {
        kind_ = Kind::constant;
        param_ = spec.c.value_or(cplx(0.0, 0.0));
        if (!(std::abs(param_) < 1.0))
            throw ParameterError("constant: |c| must be below 1");
    } else if (f == "monomial") {
        kind_ = Kind::monomial;
        power_ = spec.k.value_or(2);
        if (power_ < 1)
            throw ParameterError("monomial: k must be at least 1");
    } else if (f == "affine") {
        kind_ = Kind::affine;
    } else {
        throw ParameterError("not an elementary family: " + f);
    }
}

BoundaryValue ElementarySymbol::boundary(double t) const
{
    switch (kind_) {
    case Kind::identity:
        return {std::polar(1.0, t), 0.0};
    case Kind::rotation:
        return {param_ * std::polar(1.0, t), 1.0 - std::abs(param_)};
    case Kind::constant:
        return {param_, 1.0 - std::abs(param_)};
    case Kind::monomial:
        return {std::polar(1.0, power_ * t), 0.0};
    case Kind::affine: {
        const cplx v = 0.5 * (1.0 + std::polar(1.0, t));
        return {v, 1.0 - std::abs(std::cos(0.5 * t))};
    }
    }
    return {0.0, 1.0};
}

cplx ElementarySymbol::interior(cplx z) const
{
    switch (kind_) {
    case Kind::identity:
        return z;
    case Kind::rotation:
        return param_ * z;
    case Kind::constant:
        return param_;
    case Kind::monomial:
        return std::pow(z, power_);
    case Kind::affine:
        return 0.5 * (1.0 + z);
    }
    return 0.0;
}

bool ElementarySymbol::mirror_symmetric() const
{
    if (kind_ == Kind::rotation || kind_ == Kind::constant)
        return param_.imag() == 0.0;
    return true;
}

// ------------------------------------------------------ general construction

GeneralConstructionSymbol::GeneralConstructionSymbol(CosineSeries series, bool include_inner_factor,
                                                     SymbolSpec spec)
    : Symbol(std::move(spec)), series_(std::move(series)), inner_(include_inner_factor)
{
    if (series_.beta) {
        const double b = *series_.beta;
        if (!(b > 0.0 && b <= 2.0))
            throw ParameterError("general construction: beta must lie in (0, 2]");
    } else {
        if (series_.a.empty())
            throw ParameterError("general construction: empty cosine series");
        double s = 0.0;
        for (double a : series_.a)
            s += a;
        if (std::abs(s) > 1e-10)
            throw ValidationError("general construction: f(0) = sum a_k must vanish");
        for (int j = 0; j < 4096; ++j) {
            double t = -pi + two_pi * j / 4096.0;
            if (series_.eval(t) < -1e-12)
                throw ValidationError("general construction: f must be nonnegative");
        }
    }
    if (spec_.family.empty()) {
        spec_.family = series_.beta ? "sin_beta" : "series";
        spec_.beta = series_.beta;
        spec_.inner_factor = inner_;
        if (!series_.beta)
            spec_.coefficients = series_.a;
    }
}

double GeneralConstructionSymbol::f(double t) const
{
    if (series_.beta) {
        const double s = std::sin(0.5 * t);
        if (*series_.beta == 2.0)
            return s * s;
        return std::pow(std::abs(s), *series_.beta);
    }
    return series_.eval(t);
}

double GeneralConstructionSymbol::hf(double t) const
{
    if (!series_.beta)
        return conjugate_series(series_, t);
    const double b = *series_.beta;
    if (b == 2.0)
        return -0.5 * std::sin(t);
    if (t == 0.0)
        return 0.0;
    const double sign = t > 0 ? 1.0 : -1.0;
    double u = std::abs(std::remainder(t, two_pi));
    if (b == 1.0)
        return -sign * (2.0 / pi) * std::sin(0.5 * u) * std::log(1.0 / std::tan(0.25 * u));
    // (1/2pi) PV int_0^pi [f(u-s) - f(u+s)] cot(s/2) ds, kink at s = u
    // f(u-s) - f(u+s) = y^b expm1(b log1p((x-y)/y)) with x = |sin((u-s)/2)|,
    // y = sin((u+s)/2) and x - y formed by a product formula
    auto integrand = [&](double s) {
        if (s <= 0.0)
            return 0.0;
        const double y = std::sin(0.5 * (u + s));
        if (y <= 0.0)
            return 0.0;
        const double d = s > u ? -2.0 * std::cos(0.5 * s) * std::sin(0.5 * u)
                               : -2.0 * std::cos(0.5 * u) * std::sin(0.5 * s);
        const double diff = std::pow(y, b) * std::expm1(b * std::log1p(std::max(d / y, -1.0)));
        return diff / std::tan(0.5 * s);
    };
    boost::math::quadrature::tanh_sinh<double> ts;
    double v = ts.integrate(integrand, 0.0, u, 1e-13);
    if (u < pi)
        v += ts.integrate(integrand, u, pi, 1e-13);
    return sign * v / two_pi;
}

double GeneralConstructionSymbol::gamma(double t) const { return hf(t) + cot_half(t); }

BoundaryValue GeneralConstructionSymbol::boundary(double t) const
{
    if (t == 0.0)
        throw SingularityError("general construction: t = 0 must be excluded");
    const double fv = f(t);
    double phase = hf(t);
    if (inner_)
        phase += cot_half(t);
    return {std::polar(std::exp(-fv), -phase), -std::expm1(-fv)};
}

std::vector<double> GeneralConstructionSymbol::singular_points() const
{
    if (inner_ || (series_.beta && *series_.beta < 2.0))
        return {0.0};
    return {};
}

const CosineSeries& GeneralConstructionSymbol::taylor() const
{
    std::call_once(taylor_once_, [this] {
        if (!series_.beta) {
            taylor_ = series_;
            return;
        }
        const double b = *series_.beta;
        std::size_t K = static_cast<std::size_t>(std::ceil(std::pow(1e14, 1.0 / (b + 1.0))));
        K = std::min<std::size_t>(std::max<std::size_t>(K, 16), std::size_t{1} << 16);
        taylor_ = sin_beta_coeffs(b, K);
    });
    return taylor_;
}

cplx GeneralConstructionSymbol::analytic_F(cplx z) const
{
    if (series_.beta && *series_.beta == 2.0)
        return 0.5 - 0.5 * z;
    if (series_.beta && *series_.beta == 1.0) {
        // sum_{k>=1} z^k/(4k^2-1) = (1/2)[atanh(w)(z-1)/w + 1], w = sqrt z
        cplx S;
        if (std::abs(z) < 1e-4) {
            S = z / 3.0 + z * z / 15.0 + z * z * z / 35.0;
        } else {
            const cplx w = std::sqrt(z);
            S = 0.5 * (std::atanh(w) * (z - 1.0) / w + 1.0);
        }
        return 2.0 / pi - (4.0 / pi) * S;
    }
    const auto& a = taylor().a;
    cplx acc = 0.0;
    for (std::size_t k = a.size(); k-- > 0;)
        acc = acc * z + a[k];
    return acc;
}

cplx GeneralConstructionSymbol::interior(cplx z) const
{
    if (!(std::abs(z) < 1.0))
        throw DomainError("interior evaluation requires |z| < 1");
    cplx v = std::exp(-analytic_F(z));
    if (inner_)
        v *= std::exp(-(1.0 + z) / (1.0 - z));
    return v;
}

double GeneralConstructionSymbol::interior_defect(cplx z) const
{
    if (!(std::abs(z) < 1.0))
        throw DomainError("interior evaluation requires |z| < 1");
    double e = analytic_F(z).real();
    if (inner_)
        e += inner_log_modulus(z);
    return -std::expm1(-e);
}

// ----------------------------------------------------------------- log power

LogPowerSymbol::LogPowerSymbol(LogPowerVariant variant, double theta, double q, double epsilon,
                               bool include_inner_factor, SymbolSpec spec)
    : Symbol(std::move(spec)), variant_(variant), theta_(theta), q_(q), eps_(epsilon),
      inner_(include_inner_factor)
{
    if (variant_ != LogPowerVariant::loglog_only && !(theta_ > 0.0))
        throw ParameterError("log-power symbol: theta must be positive");
    if (!(eps_ > 0.0 && eps_ <= std::exp(-pi / 2)))
        throw ParameterError("log-power symbol: epsilon must lie in (0, exp(-pi/2)]");
    if (spec_.family.empty()) {
        spec_.family = variant_ == LogPowerVariant::theta          ? "theta"
                       : variant_ == LogPowerVariant::theta_loglog ? "theta_loglog"
                                                                   : "loglog";
        if (variant_ != LogPowerVariant::loglog_only)
            spec_.theta = theta_;
        if (variant_ == LogPowerVariant::theta_loglog)
            spec_.q = q_;
        spec_.epsilon = eps_;
        spec_.inner_factor = inner_;
    }
}

cplx LogPowerSymbol::f(cplx w) const { return log_power_f(variant_, theta_, q_, w); }

BoundaryValue LogPowerSymbol::boundary(double t) const
{
    if (t == 0.0)
        throw SingularityError("log-power symbol: t = 0 must be excluded");
    const cplx F = f(conformal_g_boundary(t, eps_));
    if (!(F.real() > 0.0))
        throw DomainError("log-power symbol: Re f(g(e^{it})) must be positive");
    double phase = F.imag();
    if (inner_)
        phase += cot_half(t);
    return {std::polar(std::exp(-F.real()), -phase), -std::expm1(-F.real())};
}

cplx LogPowerSymbol::interior(cplx z) const
{
    if (!(std::abs(z) < 1.0))
        throw DomainError("interior evaluation requires |z| < 1");
    cplx v = std::exp(-f(conformal_g(z, eps_)));
    if (inner_)
        v *= std::exp(-(1.0 + z) / (1.0 - z));
    return v;
}

double LogPowerSymbol::interior_defect(cplx z) const
{
    if (!(std::abs(z) < 1.0))
        throw DomainError("interior evaluation requires |z| < 1");
    double e = f(conformal_g(z, eps_)).real();
    if (inner_)
        e += inner_log_modulus(z);
    return -std::expm1(-e);
}

std::vector<double> LogPowerSymbol::singular_points() const { return {-pi / 2, 0.0, pi / 2}; }

BoundaryValue eval_general_boundary(const GeneralConstructionSymbol& sym, double t)
{
    return sym.boundary(t);
}

BoundaryValue eval_log_power_boundary(const LogPowerSymbol& sym, double t)
{
    return sym.boundary(t);
}

SymbolPtr make_symbol(const SymbolSpec& spec)
{
    const auto& f = spec.family;
    if (f == "identity" || f == "rotation" || f == "constant" || f == "monomial" || f == "affine")
        return std::make_shared<ElementarySymbol>(spec);
    if (f == "sin_beta") {
        CosineSeries s;
        s.beta = spec.beta.value_or(2.0);
        if (!(*s.beta > 0.0 && *s.beta <= 2.0))
            throw ParameterError("sin_beta: beta must lie in (0, 2]");
        s.a = sin_beta_coeffs(*s.beta, 64).a;
        auto out = spec;
        out.beta = s.beta;
        return std::make_shared<GeneralConstructionSymbol>(std::move(s), spec.inner_factor, out);
    }
    if (f == "series") {
        CosineSeries s;
        s.a = spec.coefficients;
        return std::make_shared<GeneralConstructionSymbol>(std::move(s), spec.inner_factor, spec);
    }
    const double eps = spec.epsilon.value_or(0.1);
    auto out = spec;
    out.epsilon = eps;
    if (f == "theta") {
        if (!spec.theta)
            throw ParameterError("theta family requires theta");
        return std::make_shared<LogPowerSymbol>(LogPowerVariant::theta, *spec.theta, 0.0, eps,
                                                spec.inner_factor, out);
    }
    if (f == "theta_loglog") {
        if (!spec.theta)
            throw ParameterError("theta_loglog family requires theta");
        const double q = spec.q.value_or(*spec.theta);
        out.q = q;
        return std::make_shared<LogPowerSymbol>(LogPowerVariant::theta_loglog, *spec.theta, q, eps,
                                                spec.inner_factor, out);
    }
    if (f == "loglog")
        return std::make_shared<LogPowerSymbol>(LogPowerVariant::loglog_only, 0.0, 0.0, eps,
                                                spec.inner_factor, out);
    throw ParameterError("unknown symbol family: " + f);
}

} // namespace hardylab::symbols
