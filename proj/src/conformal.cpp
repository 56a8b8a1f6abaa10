#include "hardylab/errors.hpp"
#include "hardylab/symbols.hpp"

#include <cmath>

namespace hardylab::symbols {

namespace {

constexpr cplx I{0.0, 1.0};

// g = eps (1+i)(1-z) / (2 w (1 - i z) + (1+i)(1+z)),  w = sqrt((i - z)/(1 - i z))
cplx g_from(cplx z, cplx one_minus_z, double eps)
{
    const cplx one_minus_iz = 1.0 - I * z;
    cplx denom = (1.0 + I) * (1.0 + z);
    if (one_minus_iz != 0.0) {
        cplx q = (I - z) / one_minus_iz;
        // Im q >= 0 on the closed disc; clear rounding on the real axis
        if (q.imag() < 0.0)
            q = cplx(q.real(), 0.0);
        if (q.imag() == 0.0)
            q = cplx(q.real(), +0.0);
        const cplx w = std::sqrt(q);
        denom += 2.0 * w * one_minus_iz;
    }
    return eps * (1.0 + I) * one_minus_z / denom;
}

void check_eps(double eps)
{
    if (!(eps > 0.0 && eps <= std::exp(-numerics::pi / 2)))
        throw ParameterError("epsilon must lie in (0, exp(-pi/2)]");
}

} // namespace

cplx conformal_g(cplx z, double epsilon)
{
    check_eps(epsilon);
    if (std::abs(z) > 1.0 + 1e-14)
        throw DomainError("conformal_g: |z| > 1");
    return g_from(z, 1.0 - z, epsilon);
}

cplx conformal_g_boundary(double t, double epsilon)
{
    check_eps(epsilon);
    const double s = std::sin(0.5 * t);
    const cplx one_minus_z(2.0 * s * s, -std::sin(t));
    return g_from(std::polar(1.0, t), one_minus_z, epsilon);
}

cplx log_power_f(LogPowerVariant variant, double theta, double q, cplx w)
{
    if (w == 0.0)
        return 0.0;
    const cplx L = -std::log(w);
    if (!(L.real() > 0.0))
        throw DomainError("log_power_f: Re(-log w) must be positive");
    switch (variant) {
    case LogPowerVariant::theta:
        return w * std::pow(L, theta);
    case LogPowerVariant::theta_loglog:
        return w * std::pow(L, theta) * std::pow(std::log(L), q);
    case LogPowerVariant::loglog_only:
        return w * std::log(L);
    }
    return 0.0;
}

} // namespace hardylab::symbols
