#pragma once

#include "hardylab/numerics.hpp"

#include <memory>
#include <mutex>
#include <optional>
#include <string>
#include <vector>

namespace hardylab::symbols {

using numerics::cplx;

// f(t) = sum_k a[k] cos(k t).
struct CosineSeries {
    std::vector<double> a;
    std::optional<double> beta;

    double eval(double t) const;
    std::size_t size() const { return a.size(); }
};

// Cosine coefficients c_0..c_K of |sin(t/2)|^beta by FFT with automatic
// doubling of the transform size.
CosineSeries sin_beta_coeffs(double beta, std::size_t K);

struct BinomialOracleInfo {
    std::size_t terms = 0;       // cos^k powers summed directly
    double tail_estimate = 0.0;  // largest extrapolated tail
    double tail_bound = 0.0;     // disagreement between extrapolation orders
};

// Same coefficients from the binomial series 1 - sum alpha_k cos^k t,
// expanded into cosines; the slowly decaying remainder over k is removed by
// Richardson extrapolation in the known exponent.
CosineSeries binomial_coeff_oracle(double beta, std::size_t K, BinomialOracleInfo* info = nullptr);

// sum_{k>=1} a_k sin(k t).
double conjugate_series(const CosineSeries& series, double t);

enum class LogPowerVariant { theta, theta_loglog, loglog_only };

struct SymbolSpec {
    std::string family;  // identity, rotation, constant, monomial, affine, sin_beta, series, theta, theta_loglog, loglog
    std::optional<double> beta;
    std::optional<double> theta;
    std::optional<double> q;
    std::optional<double> epsilon;
    std::optional<cplx> r;
    std::optional<cplx> c;
    std::optional<int> k;
    std::vector<double> coefficients;  // family "series" only
    bool inner_factor = false;

    std::string label() const;
};

struct BoundaryValue {
    cplx value;
    double defect;  // 1 - |value|, computed without cancellation where possible
};

class Symbol {
public:
    explicit Symbol(SymbolSpec spec) : spec_(std::move(spec)) {}
    virtual ~Symbol() = default;

    virtual BoundaryValue boundary(double t) const = 0;
    virtual bool has_interior() const { return false; }
    virtual cplx interior(cplx z) const;
    virtual double interior_defect(cplx z) const { return 1.0 - std::abs(interior(z)); }
    // phi*(e^{-it}) = conj(phi*(e^{it})); traces may then store t > 0 only.
    virtual bool mirror_symmetric() const { return false; }
    // boundary argument winds infinitely often near t = 0
    virtual bool winds() const { return false; }
    // points where phi* is not smooth; the operator module treats them locally
    virtual std::vector<double> singular_points() const { return {}; }

    const SymbolSpec& spec() const { return spec_; }

protected:
    SymbolSpec spec_;
};

using SymbolPtr = std::shared_ptr<const Symbol>;

class ElementarySymbol : public Symbol {
public:
    enum class Kind { identity, rotation, constant, monomial, affine };
    explicit ElementarySymbol(const SymbolSpec& spec);

    BoundaryValue boundary(double t) const override;
    bool has_interior() const override { return true; }
    cplx interior(cplx z) const override;
    bool mirror_symmetric() const override;
    Kind kind() const { return kind_; }

private:
    Kind kind_;
    cplx param_{0.0, 0.0};
    int power_ = 1;
};

// phi = M * exp(-F) with F = sum a_k z^k, f = Re F on the circle, M the
// singular inner function exp(-(1+z)/(1-z)).
class GeneralConstructionSymbol : public Symbol {
public:
    GeneralConstructionSymbol(CosineSeries series, bool include_inner_factor, SymbolSpec spec = {});

    BoundaryValue boundary(double t) const override;
    bool has_interior() const override { return true; }
    cplx interior(cplx z) const override;
    double interior_defect(cplx z) const override;
    bool mirror_symmetric() const override { return true; }
    bool winds() const override { return inner_; }
    std::vector<double> singular_points() const override;

    double f(double t) const;
    double hf(double t) const;
    // gamma(t) = Hf(t) + cot(t/2)
    double gamma(double t) const;
    bool include_inner_factor() const { return inner_; }
    const CosineSeries& series() const { return series_; }
    std::optional<double> beta() const { return series_.beta; }

private:
    cplx analytic_F(cplx z) const;
    const CosineSeries& taylor() const;

    CosineSeries series_;
    bool inner_;
    mutable std::once_flag taylor_once_;
    mutable CosineSeries taylor_;
};

class LogPowerSymbol : public Symbol {
public:
    LogPowerSymbol(LogPowerVariant variant, double theta, double q, double epsilon,
                   bool include_inner_factor, SymbolSpec spec = {});

    BoundaryValue boundary(double t) const override;
    bool has_interior() const override { return true; }
    cplx interior(cplx z) const override;
    double interior_defect(cplx z) const override;
    bool winds() const override { return inner_; }
    std::vector<double> singular_points() const override;

    // f_variant(w) for w in the closed half disc V_eps
    cplx f(cplx w) const;
    LogPowerVariant variant() const { return variant_; }
    double theta() const { return theta_; }
    double q() const { return q_; }
    double epsilon() const { return eps_; }

private:
    LogPowerVariant variant_;
    double theta_;
    double q_;
    double eps_;
    bool inner_;
};

cplx log_power_f(LogPowerVariant variant, double theta, double q, cplx w);

// Conformal map of the disc onto V_eps = {Re w > 0, |w| < eps} with g(1) = 0,
// g(-1) = eps, g'(1) = -eps/4.
cplx conformal_g(cplx z, double epsilon);
// Same map on the circle, z = e^{it}, with 1 - z formed without cancellation.
cplx conformal_g_boundary(double t, double epsilon);

BoundaryValue eval_general_boundary(const GeneralConstructionSymbol& sym, double t);
BoundaryValue eval_log_power_boundary(const LogPowerSymbol& sym, double t);

SymbolPtr make_symbol(const SymbolSpec& spec);

struct TraceOptions {
    std::size_t base_count = 4096;
    int refinement_depth = 40;
    std::size_t nodes_per_octave = 512;
    // node density C/t^3 used where the argument winds, tapered below the cutoff
    double winding_density = 200.0;
    double winding_cutoff = 1.0 / 128.0;
    double winding_taper = 0.5;
    bool use_symmetry = true;
};

struct BoundaryTrace {
    numerics::Grid1D grid;
    std::vector<cplx> values;
    std::vector<double> defects;
    // when set, only t > 0 is stored and each node also stands for -t with the
    // conjugate value; stored weights then sum to pi
    bool mirrored = false;
    double modulus_floor = 1.0;
    int refinement_depth = 0;
    SymbolPtr symbol;

    std::size_t size() const { return values.size(); }
    double total_weight() const;
    // explicit two-sided copy (no mirroring)
    BoundaryTrace expanded() const;
};

BoundaryTrace sample_trace(const SymbolSpec& spec, std::size_t base_count, int refinement_depth,
                           TraceOptions options = {});
BoundaryTrace sample_trace(const SymbolPtr& symbol, const TraceOptions& options);

} // namespace hardylab::symbols
