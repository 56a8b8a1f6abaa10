#pragma once

#include <complex>
#include <cstddef>
#include <functional>
#include <utility>
#include <vector>

namespace hardylab::numerics {

using cplx = std::complex<double>;

inline constexpr double pi = 3.14159265358979323846;
inline constexpr double two_pi = 6.28318530717958647692;

struct Grid1D {
    std::vector<double> nodes;
    std::vector<double> weights;
};

// Throws ValidationError unless nodes increase strictly inside (-pi, pi],
// weights are positive, no node is exactly 0 and the weights sum to 2pi
// within tol.
void validate_grid(const Grid1D& g, double tol = 1e-12);

struct FitResult {
    double exponent = 0.0;
    double prefactor = 0.0;
    double residual = 0.0;
    double h_min = 0.0;
    double h_max = 0.0;
};

bool is_power_of_two(std::size_t k);

// Coefficients c_n = (1/K) sum_j x_j exp(-i n t_j) with t_j = t0 + 2 pi j / K.
// Result index n + K/2 holds c_n for n = -K/2 .. K/2-1.
std::vector<cplx> fft_coefficients(const std::vector<cplx>& samples, double t0 = 0.0);

// Inverse of fft_coefficients on the same grid.
std::vector<cplx> fft_samples(const std::vector<cplx>& coefficients, double t0 = 0.0);

// Plain forward DFT without normalisation or reordering (out_n = sum_j x_j e^{-2 pi i jn/K}).
void fft_forward_raw(const cplx* in, cplx* out, std::size_t K);

FitResult loglog_fit(const std::vector<std::pair<double, double>>& pairs);

// Singular values, sorted nonincreasing. Matrix is row-major N_rows x N_cols.
std::vector<double> svd_values(const std::vector<cplx>& matrix, std::size_t rows, std::size_t cols);

// Solves f(t) = y for strictly monotone f on [a, b].
double bisect_inverse(const std::function<double(double)>& f, double a, double b, double y);

// Gauss-Legendre rule with 16 nodes on [-1, 1].
const std::vector<double>& gauss16_nodes();
const std::vector<double>& gauss16_weights();

// Neumaier compensated summation.
class CompensatedSum {
public:
    void add(double x) {
        double t = sum_ + x;
        if (std::abs(sum_) >= std::abs(x))
            comp_ += (sum_ - t) + x;
        else
            comp_ += (x - t) + sum_;
        sum_ = t;
    }
    double value() const { return sum_ + comp_; }

private:
    double sum_ = 0.0;
    double comp_ = 0.0;
};

// Worker count: HARDY_LAB_THREADS if set and positive, else hardware concurrency.
unsigned thread_count();

// Runs body(begin, end) over fixed-size chunks of [0, n). Chunk boundaries do
// not depend on the thread count, so writes into per-index slots are
// deterministic.
void parallel_for(std::size_t n, std::size_t chunk,
                  const std::function<void(std::size_t, std::size_t)>& body);

} // namespace hardylab::numerics
