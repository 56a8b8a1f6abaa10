#pragma once

#include "hardylab/numerics.hpp"
#include "hardylab/symbols.hpp"

#include <cstdint>
#include <utility>
#include <vector>

namespace hardylab::measure {

using numerics::FitResult;
using symbols::BoundaryTrace;

// Sparse level: sorted (j, mass) pairs.
struct SparseLevel {
    std::vector<std::uint64_t> index;
    std::vector<double> mass;

    double at(std::uint64_t j) const;
    std::size_t size() const { return index.size(); }
};

struct PullbackHistogram {
    int depth = 0;
    // box_mass[n], window_mass[n] for n = 0..depth; level 0 holds the core
    // box |w| < 1/2 and the whole-disc window
    std::vector<SparseLevel> box_mass;
    std::vector<SparseLevel> window_mass;
    std::vector<std::size_t> samples_per_level;
    // mass deeper than level depth (including |w| = 1), by sector j at level depth
    SparseLevel overflow_by_sector;
    double core_mass = 0.0;
    double overflow_mass = 0.0;
    double total = 0.0;

    double binned_mass() const;  // levels 1..depth
};

PullbackHistogram pullback_histogram(const BoundaryTrace& trace, int depth);

struct ProfileLevel {
    int n = 0;
    double h = 0.0;
    double rho_hat = 0.0;
    std::size_t centers_tested = 0;
    std::size_t effective_samples = 0;  // samples inside the maximising window
    double best_center = 0.0;
};

struct CarlesonProfile {
    std::vector<ProfileLevel> levels;  // n = 1..n_max
    std::size_t sup_resolution = 4;    // centers per 2^n
    double doubling_constant = 0.0;    // max_{k<n} 2^{n-k} rho(2^-n) / rho(2^-k)

    const ProfileLevel& level(int n) const;
};

CarlesonProfile carleson_profile(const BoundaryTrace& trace, int n_max);

FitResult fit_carleson_exponent(const CarlesonProfile& profile, int n_lo, int n_hi);

struct PreimageInterval {
    double t_lo = 0.0;
    double t_hi = 0.0;
    long winding = 0;  // n in gamma(t) = theta +- h + 2 pi n
    bool clipped = false;  // shortened by the modulus constraint
};

struct WindowPreimage {
    double h = 0.0;
    double xi_angle = 0.0;
    std::vector<PreimageInterval> intervals;
    long n_start = 0;
    long n_end = 0;
    double modulus_cutoff = 0.0;  // t_h: f(t) <= log(1/(1-h)) iff t <= t_h
    double tail_mass = 0.0;       // t-length beyond n_end, from equidistribution

    double measure() const;  // sum of interval lengths plus tail (t-length)
};

// {t > 0 : phi*(e^{-it}) in W(xi, h)} for phi = M exp(-F).
WindowPreimage window_preimage_intervals(const symbols::GeneralConstructionSymbol& sym, double h,
                                         double xi_angle);

// rho(h) from preimages over `centers` equally spaced xi, both signs of t.
double semi_analytic_rho(const symbols::GeneralConstructionSymbol& sym, double h, std::size_t centers);

} // namespace hardylab::measure
