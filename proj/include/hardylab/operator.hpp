#pragma once

#include "hardylab/numerics.hpp"
#include "hardylab/symbols.hpp"

#include <string>
#include <vector>

namespace hardylab::op {

using numerics::cplx;
using numerics::FitResult;

struct OperatorMatrix {
    std::size_t N = 0;
    std::size_t fft_size = 0;
    std::vector<cplx> entries;  // row-major: entries[n * N + m] = n-th coefficient of phi^m
    double aliasing_change = 0.0;  // max entry change from K to 2K
    std::size_t local_nodes = 0;   // quadrature nodes near singular points

    cplx at(std::size_t n, std::size_t m) const { return entries[n * N + m]; }
};

struct TruncationOptions {
    double aliasing_tolerance = 1e-8;
    bool check_aliasing = true;
    std::size_t max_local_panels = 400000;
};

// Fourier coefficients 0..N-1 of (phi*)^m, m = 0..N-1, on a uniform grid of
// size K. Singular points of phi* are cut out with a smooth partition of
// unity and integrated on graded Gauss-Legendre panels.
OperatorMatrix matrix_truncation(const symbols::Symbol& symbol, std::size_t N, std::size_t K,
                                 const TruncationOptions& options = {});
OperatorMatrix matrix_truncation(const symbols::BoundaryTrace& trace, std::size_t N, std::size_t K,
                                 const TruncationOptions& options = {});

struct SingularSpectrum {
    std::vector<double> values;
    std::size_t N = 0;
};

SingularSpectrum singular_spectrum(const OperatorMatrix& A);

struct SchattenSum {
    double sum = 0.0;
    FitResult decay_fit;  // sigma_k against k over k <= N/4
    bool decay_available = false;
};

SchattenSum schatten_sum(const SingularSpectrum& spectrum, double p);

enum class TailVerdict { cauchy, growing, inconclusive };
const char* to_string(TailVerdict v);

struct TailStudy {
    double p = 0.0;
    std::vector<std::size_t> Ns;
    std::vector<double> sums;
    std::vector<double> increments;  // sums[i] - sums[i-1]
    double increment_ratio = 0.0;    // last increment / previous increment
    double increment_exponent = 0.0; // slope of log increment against log log2 N
    TailVerdict verdict = TailVerdict::inconclusive;
};

// Partial Schatten sums across doubling truncations. The increment between
// N/2 and N behaves like the Luecking term of level log2 N, so the sums are
// called Cauchy when increments fall faster than 1/log2 N (exponent < -1.2)
// and growing when they fall slower (exponent > -0.8).
TailStudy spectral_tail_study(const std::vector<std::size_t>& Ns,
                              const std::vector<SingularSpectrum>& spectra, double p);

struct WeightedPoints {
    std::vector<cplx> z;
    std::vector<double> w;
};

// Radial density proportional to (1-|z|)^{beta-2} with respect to area,
// discretised on graded Gauss-Legendre panels in 1-|z|; angles follow the
// golden-angle sequence. Weights sum to 1.
WeightedPoints radial_power_measure(double beta, int levels = 48);

struct PoissonReport {
    double p = 0.0;
    std::vector<double> moments;       // m_n = int |z|^{2n} dmu, n = 0..n_max
    std::vector<double> partial_sums;  // S_N = m_0^{p/2} + 2 sum_{1<=n<=N} m_n^{p/2}
    FitResult moment_fit;              // m_n against n over [n_max/16, n_max]
    std::vector<std::pair<std::size_t, double>> doubling_increments;  // (N, S_N - S_{N/2})
    bool cauchy = false;
};

PoissonReport poisson_moment_sums(const WeightedPoints& mu, double p, std::size_t n_max);

} // namespace hardylab::op
