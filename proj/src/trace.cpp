#include "hardylab/errors.hpp"
#include "hardylab/symbols.hpp"

#include <algorithm>
#include <cmath>

namespace hardylab::symbols {

using numerics::pi;
using numerics::two_pi;

namespace {

constexpr double golden = 0.61803398874989484820;

struct Cell {
    double t;
    double w;
};

// Cells of width matching node density rho(t) = C/t^3 (tapered) are laid out
// uniformly in u = 1/t with step pi/(M + golden): consecutive nodes then
// advance the argument 2u by an irrational fraction of a full turn, which
// spreads each winding's samples evenly over the circle.
void winding_cells(double a, double b, double count, std::vector<Cell>& out)
{
    const double ua = 1.0 / b, ub = 1.0 / a;
    const double du0 = (ub - ua) / count;
    double du;
    if (du0 < pi) {
        const double M = std::max(std::round(pi / du0 - golden), 1.0);
        du = pi / (M + golden);
    } else {
        du = pi * (std::floor(du0 / pi) + golden);
    }
    double u = ua;
    for (;;) {
        double un = u + du;
        if (un >= ub * (1.0 - 1e-15))
            un = ub;
        const double hi = 1.0 / u, lo = 1.0 / un;
        out.push_back({0.5 * (lo + hi), hi - lo});
        if (un == ub)
            break;
        u = un;
    }
}

void uniform_cells(double a, double b, std::size_t m, std::vector<Cell>& out)
{
    for (std::size_t i = 0; i < m; ++i) {
        const double lo = a + (b - a) * static_cast<double>(i) / static_cast<double>(m);
        const double hi = i + 1 == m ? b : a + (b - a) * static_cast<double>(i + 1) / static_cast<double>(m);
        out.push_back({0.5 * (lo + hi), hi - lo});
    }
}

double density_integral(double a, double b, const TraceOptions& o)
{
    // int_a^b rho, rho = C/t^3 above the cutoff, C/tc^3 (tc/t)^taper below
    const double C = o.winding_density, tc = o.winding_cutoff, s = o.winding_taper;
    auto upper = [&](double lo, double hi) { return 0.5 * C * (1.0 / (lo * lo) - 1.0 / (hi * hi)); };
    auto lower = [&](double lo, double hi) {
        const double k = C / (tc * tc * tc) * std::pow(tc, s);
        return k * (std::pow(hi, 1.0 - s) - std::pow(lo, 1.0 - s)) / (1.0 - s);
    };
    if (a >= tc)
        return upper(a, b);
    if (b <= tc)
        return lower(a, b);
    return lower(a, tc) + upper(tc, b);
}

std::vector<Cell> positive_cells(const Symbol& sym, const TraceOptions& o)
{
    if (!numerics::is_power_of_two(o.base_count) || o.base_count < 4)
        throw ParameterError("sample_trace: base_count must be a power of two, at least 4");
    if (o.refinement_depth < 0 || o.refinement_depth > 48)
        throw ParameterError("sample_trace: refinement_depth must lie in [0, 48]");
    const double floor_t = std::ldexp(1.0, -o.refinement_depth);
    const double cell = two_pi / static_cast<double>(o.base_count);
    std::vector<Cell> cells;
    double b = pi;
    for (int k = 0;; ++k) {
        const double a = std::max(std::ldexp(pi, -k - 1), floor_t);
        const double n_uniform = std::ceil((b - a) / cell - 1e-9);
        const double plain = std::max({n_uniform, static_cast<double>(o.nodes_per_octave), 1.0});
        const double wind = sym.winds() && k >= 1 ? density_integral(a, b, o) : 0.0;
        if (wind > plain)
            winding_cells(a, b, wind, cells);
        else
            uniform_cells(a, b, static_cast<std::size_t>(plain), cells);
        b = a;
        if (a == floor_t)
            break;
    }
    cells.push_back({0.5 * b, b});
    std::sort(cells.begin(), cells.end(), [](const Cell& x, const Cell& y) { return x.t < y.t; });
    return cells;
}

} // namespace

double BoundaryTrace::total_weight() const
{
    numerics::CompensatedSum s;
    for (double w : grid.weights)
        s.add(w);
    return mirrored ? 2.0 * s.value() : s.value();
}

BoundaryTrace BoundaryTrace::expanded() const
{
    if (!mirrored)
        return *this;
    BoundaryTrace out;
    out.mirrored = false;
    out.modulus_floor = modulus_floor;
    out.refinement_depth = refinement_depth;
    out.symbol = symbol;
    const std::size_t n = size();
    out.grid.nodes.reserve(2 * n);
    out.grid.weights.reserve(2 * n);
    out.values.reserve(2 * n);
    out.defects.reserve(2 * n);
    for (std::size_t i = n; i-- > 0;) {
        out.grid.nodes.push_back(-grid.nodes[i]);
        out.grid.weights.push_back(grid.weights[i]);
        out.values.push_back(std::conj(values[i]));
        out.defects.push_back(defects[i]);
    }
    for (std::size_t i = 0; i < n; ++i) {
        out.grid.nodes.push_back(grid.nodes[i]);
        out.grid.weights.push_back(grid.weights[i]);
        out.values.push_back(values[i]);
        out.defects.push_back(defects[i]);
    }
    return out;
}

BoundaryTrace sample_trace(const SymbolPtr& symbol, const TraceOptions& options)
{
    if (!symbol)
        throw ParameterError("sample_trace: null symbol");
    const auto cells = positive_cells(*symbol, options);
    BoundaryTrace tr;
    tr.symbol = symbol;
    tr.refinement_depth = options.refinement_depth;
    tr.mirrored = options.use_symmetry && symbol->mirror_symmetric();
    const std::size_t n = cells.size();
    const std::size_t total = tr.mirrored ? n : 2 * n;
    tr.grid.nodes.resize(total);
    tr.grid.weights.resize(total);
    tr.values.resize(total);
    tr.defects.resize(total);
    const std::size_t offset = tr.mirrored ? 0 : n;
    for (std::size_t i = 0; i < n; ++i) {
        tr.grid.nodes[offset + i] = cells[i].t;
        tr.grid.weights[offset + i] = cells[i].w;
        if (!tr.mirrored) {
            tr.grid.nodes[n - 1 - i] = -cells[i].t;
            tr.grid.weights[n - 1 - i] = cells[i].w;
        }
    }
    numerics::parallel_for(total, 4096, [&](std::size_t lo, std::size_t hi) {
        for (std::size_t i = lo; i < hi; ++i) {
            const auto bv = symbol->boundary(tr.grid.nodes[i]);
            tr.values[i] = bv.value;
            tr.defects[i] = bv.defect;
        }
    });
    double floor = 1.0;
    for (double d : tr.defects)
        floor = std::min(floor, d);
    tr.modulus_floor = floor;
    return tr;
}

BoundaryTrace sample_trace(const SymbolSpec& spec, std::size_t base_count, int refinement_depth,
                           TraceOptions options)
{
    options.base_count = base_count;
    options.refinement_depth = refinement_depth;
    return sample_trace(make_symbol(spec), options);
}

} // namespace hardylab::symbols
