#include "hardylab/errors.hpp"
#include "hardylab/measure.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

namespace hardylab::measure {

using numerics::two_pi;

double SparseLevel::at(std::uint64_t j) const
{
    auto it = std::lower_bound(index.begin(), index.end(), j);
    if (it == index.end() || *it != j)
        return 0.0;
    return mass[static_cast<std::size_t>(it - index.begin())];
}

double PullbackHistogram::binned_mass() const
{
    numerics::CompensatedSum s;
    for (std::size_t n = 1; n < box_mass.size(); ++n)
        for (double m : box_mass[n].mass)
            s.add(m);
    return s.value();
}

namespace {

// level n with 2^{-n-1} < d <= 2^{-n}; 0 for the core (d > 1/2); points on
// the circle get the largest level
int level_of(double d)
{
    if (d > 0.5)
        return 0;
    if (!(d > 0.0))
        return std::numeric_limits<int>::max();
    int e = 0;
    const double m = std::frexp(d, &e);
    return m == 0.5 ? 1 - e : -e;
}

double arg_0_2pi(numerics::cplx v)
{
    double a = std::atan2(v.imag(), v.real());
    if (a < 0.0)
        a += two_pi;
    if (a >= two_pi)
        a = 0.0;
    return a;
}

std::uint64_t sector(double a, int n)
{
    const double scale = std::ldexp(1.0, n) / two_pi;
    auto j = static_cast<std::uint64_t>(std::floor(a * scale));
    const std::uint64_t top = (std::uint64_t{1} << n) - 1;
    return std::min(j, top);
}

struct Entry {
    std::uint64_t j;
    double w;
};

SparseLevel reduce(std::vector<Entry>& entries)
{
    std::stable_sort(entries.begin(), entries.end(),
                     [](const Entry& a, const Entry& b) { return a.j < b.j; });
    SparseLevel out;
    for (const auto& e : entries) {
        if (out.index.empty() || out.index.back() != e.j) {
            out.index.push_back(e.j);
            out.mass.push_back(e.w);
        } else {
            out.mass.back() += e.w;
        }
    }
    return out;
}

// W_{n,j} = R_{n,j} + W_{n+1,2j} + W_{n+1,2j+1}
SparseLevel combine(const SparseLevel& boxes, const SparseLevel& children)
{
    std::vector<std::uint64_t> parents = boxes.index;
    for (auto c : children.index)
        parents.push_back(c >> 1);
    std::sort(parents.begin(), parents.end());
    parents.erase(std::unique(parents.begin(), parents.end()), parents.end());
    SparseLevel out;
    out.index = parents;
    out.mass.reserve(parents.size());
    std::size_t ib = 0, ic = 0;
    for (auto p : parents) {
        double r = 0.0, w0 = 0.0, w1 = 0.0;
        if (ib < boxes.index.size() && boxes.index[ib] == p)
            r = boxes.mass[ib++];
        if (ic < children.index.size() && children.index[ic] == 2 * p)
            w0 = children.mass[ic++];
        if (ic < children.index.size() && children.index[ic] == 2 * p + 1)
            w1 = children.mass[ic++];
        out.mass.push_back(r + w0 + w1);
    }
    return out;
}

} // namespace

PullbackHistogram pullback_histogram(const BoundaryTrace& trace, int depth)
{
    if (depth < 1 || depth > 30)
        throw ParameterError("pullback_histogram: depth must lie in [1, 30]");
    PullbackHistogram H;
    H.depth = depth;
    std::vector<std::vector<Entry>> entries(static_cast<std::size_t>(depth) + 1);
    std::vector<Entry> overflow;
    numerics::CompensatedSum core, over, total;
    H.samples_per_level.assign(static_cast<std::size_t>(depth) + 1, 0);

    auto add = [&](double a, double d, double w) {
        total.add(w);
        const int n = level_of(d);
        if (n == 0) {
            core.add(w);
        } else if (d == 0.0 || n > depth) {
            over.add(w);
            overflow.push_back({sector(a, depth), w});
        } else {
            entries[static_cast<std::size_t>(n)].push_back({sector(a, n), w});
            ++H.samples_per_level[static_cast<std::size_t>(n)];
        }
    };
    for (std::size_t i = 0; i < trace.size(); ++i) {
        const double w = trace.grid.weights[i] / two_pi;
        const double d = trace.defects[i];
        const double a = arg_0_2pi(trace.values[i]);
        add(a, d, w);
        if (trace.mirrored)
            add(a == 0.0 ? 0.0 : two_pi - a, d, w);
    }
    H.core_mass = core.value();
    H.overflow_mass = over.value();
    H.total = total.value();

    H.box_mass.resize(static_cast<std::size_t>(depth) + 1);
    for (int n = 1; n <= depth; ++n)
        H.box_mass[static_cast<std::size_t>(n)] = reduce(entries[static_cast<std::size_t>(n)]);
    H.overflow_by_sector = reduce(overflow);

    H.window_mass.resize(static_cast<std::size_t>(depth) + 1);
    // deepest level: box plus everything below it in the same sector
    {
        const auto& R = H.box_mass[static_cast<std::size_t>(depth)];
        const auto& O = H.overflow_by_sector;
        SparseLevel W;
        std::vector<std::uint64_t> idx = R.index;
        idx.insert(idx.end(), O.index.begin(), O.index.end());
        std::sort(idx.begin(), idx.end());
        idx.erase(std::unique(idx.begin(), idx.end()), idx.end());
        W.index = idx;
        for (auto j : idx)
            W.mass.push_back(R.at(j) + O.at(j));
        H.window_mass[static_cast<std::size_t>(depth)] = std::move(W);
    }
    // level 0: the core box |w| < 1/2 and the whole disc as window
    H.box_mass[0].index = {0};
    H.box_mass[0].mass = {H.core_mass};
    for (int n = depth - 1; n >= 0; --n)
        H.window_mass[static_cast<std::size_t>(n)] =
            combine(H.box_mass[static_cast<std::size_t>(n)], H.window_mass[static_cast<std::size_t>(n) + 1]);
    return H;
}

} // namespace hardylab::measure
