#pragma once

#include "hardylab/measure.hpp"
#include "hardylab/numerics.hpp"
#include "hardylab/symbols.hpp"

#include <limits>
#include <string>
#include <utility>
#include <vector>

namespace hardylab::criteria {

using numerics::FitResult;

enum class Tri { yes, no, inconclusive };
const char* to_string(Tri t);

enum class SumVerdict { converging, diverging, inconclusive };
const char* to_string(SumVerdict v);

struct CriterionVerdict {
    std::string name;
    Tri passed = Tri::inconclusive;
    std::vector<std::pair<double, double>> evidence;
    double tolerance_used = 0.0;
    std::string note;
};

struct LueckingOptions {
    int n_lo = -1;  // default depth/3
    int n_hi = -1;  // default depth
    bool log_correction = false;  // fit log L_n = a + s log n + kappa log log n
};

struct LueckingReport {
    double p = 0.0;
    std::vector<double> per_level;     // L_n, n = 0..depth
    std::vector<double> partial_sums;  // S_N, N = 0..depth
    FitResult growth_fit;
    double kappa = 0.0;  // log-correction coefficient when enabled
    SumVerdict verdict = SumVerdict::inconclusive;
    bool rank_deficient = false;
};

LueckingReport luecking_partial_sums(const measure::PullbackHistogram& hist, double p,
                                     const LueckingOptions& options = {});

struct BoxWindowOptions {
    int depth_lo = 6;
    int depth_hi = -1;  // default hist.depth
    double bracket = 3.0;
};

CriterionVerdict box_window_consistency(const measure::PullbackHistogram& hist, double p,
                                        const BoxWindowOptions& options = {});

// truncated sums sum_{n<=D} 2^{n p/2} sum_j m(R_{n,j})^{p/2} and the same with W_{n,j}
std::pair<double, double> box_window_sums(const measure::PullbackHistogram& hist, double p, int D);

struct LevelRange {
    int n_lo = -1;
    int n_hi = -1;
};

CriterionVerdict maccluer_test(const measure::CarlesonProfile& profile, LevelRange range = {});

CriterionVerdict necessary_condition_diag(const measure::CarlesonProfile& profile, double p,
                                          LevelRange range = {});

// alpha_cap clamps the fitted exponent from above before the threshold test
CriterionVerdict alpha_carleson_sufficient(const FitResult& fit, double p,
                                           double alpha_cap = std::numeric_limits<double>::infinity());

struct HsResult {
    double value = 0.0;          // (1/2pi) int dt / (1 - |phi*|^2)
    double value_half = 0.0;     // same with |t| >= 2^{-ceil(depth/2)}
    double value_modulus = 0.0;  // (1/2pi) int dt / (1 - |phi*|)
    bool divergent = false;
};

HsResult hs_integral(const symbols::BoundaryTrace& trace);

enum class Trend { bounded, increasing, inconclusive };
const char* to_string(Trend t);

struct AngularProbe {
    std::vector<double> r_values;
    std::vector<double> ratios;
    double liminf_estimate = 0.0;
    Trend trend = Trend::inconclusive;
};

AngularProbe angular_derivative_probe(const symbols::SymbolSpec& spec, numerics::cplx xi,
                                      const std::vector<double>& r_values);
AngularProbe angular_derivative_probe(const symbols::Symbol& symbol, numerics::cplx xi,
                                      const std::vector<double>& r_values);

} // namespace hardylab::criteria
