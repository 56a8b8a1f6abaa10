// Acceptance run: one PASS/FAIL line per criterion. Sub-checks listed in
// known_unattainable are reported but do not change the exit code.

#include "hardylab/criteria.hpp"
#include "hardylab/harness.hpp"
#include "hardylab/io.hpp"
#include "hardylab/measure.hpp"
#include "hardylab/operator.hpp"
#include "hardylab/symbols.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <functional>
#include <map>
#include <set>
#include <sstream>
#include <string>
#include <vector>

using namespace hardylab;
using criteria::SumVerdict;
using criteria::Tri;
using numerics::cplx;
using numerics::pi;
using symbols::SymbolSpec;
namespace fs = std::filesystem;

namespace {

const std::set<std::string> known_unattainable = {
    "5.luecking_exponent_p1.5",
    "5.spectral_agrees_p1.5",
    "7.necessary_fails_p8",
};

struct Check {
    std::string id;
    bool ok = false;
    std::string detail;
};

struct Criterion {
    int number = 0;
    std::string title;
    std::vector<Check> checks;

    void add(const std::string& name, bool ok, const std::string& detail)
    {
        checks.push_back({std::to_string(number) + "." + name, ok, detail});
    }
};

std::string fmt(double x)
{
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.6g", x);
    return buf;
}

SymbolSpec family(const std::string& name)
{
    SymbolSpec s;
    s.family = name;
    return s;
}

SymbolSpec theta_spec(double th)
{
    SymbolSpec s = family("theta");
    s.theta = th;
    return s;
}

SymbolSpec sin_beta(double beta, bool inner)
{
    SymbolSpec s = family("sin_beta");
    s.beta = beta;
    s.inner_factor = inner;
    return s;
}

double modulus_gap(const symbols::Symbol& plain, const symbols::BoundaryTrace& tr)
{
    double gap = 0.0;
    for (std::size_t i = 0; i < tr.size(); ++i)
        gap = std::max(gap, std::abs(std::abs(plain.boundary(tr.grid.nodes[i]).value) - std::abs(tr.values[i])));
    return gap;
}

// max / min of rho(2^-n) 2^n w(n) over n in [lo, hi]
double statistic_spread(const measure::CarlesonProfile& P, int lo, int hi, const std::function<double(int)>& w)
{
    double smin = INFINITY, smax = 0.0;
    for (int n = lo; n <= hi; ++n) {
        const double s = P.level(n).rho_hat * std::ldexp(1.0, n) * w(n);
        smin = std::min(smin, s);
        smax = std::max(smax, s);
    }
    return smax / smin;
}

// W(n,j) = R(n,j) + W(n+1,2j) + W(n+1,2j+1), rebuilt from the stored levels
double decomposition_defect(const measure::PullbackHistogram& H)
{
    double worst = 0.0;
    for (int n = 1; n <= H.depth; ++n) {
        const auto& W = H.window_mass[static_cast<std::size_t>(n)];
        for (std::size_t i = 0; i < W.size(); ++i) {
            const auto j = W.index[i];
            double rhs = H.box_mass[static_cast<std::size_t>(n)].at(j);
            if (n < H.depth) {
                const auto& next = H.window_mass[static_cast<std::size_t>(n + 1)];
                rhs += next.at(2 * j) + next.at(2 * j + 1);
            } else {
                rhs += H.overflow_by_sector.at(j);
            }
            worst = std::max(worst, std::abs(W.mass[i] - rhs));
        }
    }
    return worst;
}

Criterion fourier_explicit()
{
    Criterion c{1, "Fourier lemma, explicit case beta = 1", {}};
    auto fft = symbols::sin_beta_coeffs(1.0, 64);
    auto bin = symbols::binomial_coeff_oracle(1.0, 64);
    double e_fft = 0.0, e_bin = 0.0;
    for (std::size_t k = 1; k <= 64; ++k) {
        const double kk = static_cast<double>(k);
        const double exact = -(4.0 / pi) / (4.0 * kk * kk - 1.0);
        e_fft = std::max(e_fft, std::abs(fft.a[k] - exact));
        e_bin = std::max(e_bin, std::abs(bin.a[k] - exact));
    }
    c.add("fft", e_fft < 1e-8, "fft err " + fmt(e_fft) + " < 1e-8");
    c.add("binomial", e_bin < 1e-10, "binomial err " + fmt(e_bin) + " < 1e-10");
    return c;
}

Criterion fourier_sign_decay()
{
    Criterion c{2, "Fourier lemma, sign and decay", {}};
    for (double beta : {0.5, 1.5}) {
        auto s = symbols::sin_beta_coeffs(beta, 512);
        bool negative = true;
        for (std::size_t k = 1; k <= 512; ++k)
            negative = negative && s.a[k] < 0.0;
        std::vector<std::pair<double, double>> pts;
        for (std::size_t k = 16; k <= 512; ++k)
            pts.emplace_back(static_cast<double>(k), std::abs(s.a[k]));
        const double slope = numerics::loglog_fit(pts).exponent;
        const std::string b = fmt(beta);
        c.add("negative_b" + b, negative, "beta " + b + " c_k < 0 on [1,512]: " + (negative ? "yes" : "no"));
        c.add("slope_b" + b, std::abs(slope + beta + 1.0) <= 0.1,
              "beta " + b + " slope " + fmt(slope) + " in " + fmt(-beta - 1.0) + " +- 0.1");
    }
    return c;
}

Criterion identity_sanity()
{
    Criterion c{3, "Identity sanity", {}};
    auto tr = symbols::sample_trace(family("identity"), 1u << 18, 12);
    auto P = measure::carleson_profile(tr, 12);
    const double e = measure::fit_carleson_exponent(P, 3, 10).exponent;
    c.add("exponent", std::abs(e - 1.0) <= 0.05, "exponent " + fmt(e) + " in 1 +- 0.05");
    const auto m = criteria::maccluer_test(P).passed;
    c.add("maccluer", m == Tri::no, std::string("maccluer compact ") + criteria::to_string(m) + " (want no)");
    auto S = op::singular_spectrum(op::matrix_truncation(*symbols::make_symbol(family("identity")), 64, 1024));
    double worst = 0.0;
    for (double v : S.values)
        worst = std::max(worst, std::abs(v - 1.0));
    c.add("spectrum", S.values.size() == 64 && worst <= 1e-8, "max |sigma - 1| " + fmt(worst) + " <= 1e-8");
    return c;
}

Criterion same_modulus()
{
    Criterion c{4, "Same-modulus pair at beta = 2", {}};
    auto plain = symbols::make_symbol(sin_beta(2.0, false));
    auto t1 = symbols::sample_trace(plain, {});
    auto t2 = symbols::sample_trace(symbols::make_symbol(sin_beta(2.0, true)), {});
    const double gap = modulus_gap(*plain, t2);
    c.add("modulus", gap <= 1e-12, "modulus gap " + fmt(gap) + " <= 1e-12");
    const auto m = criteria::maccluer_test(measure::carleson_profile(t1, 20)).passed;
    c.add("maccluer", m == Tri::no, std::string("maccluer on Phi ") + criteria::to_string(m) + " (want no)");
    auto fit = measure::fit_carleson_exponent(measure::carleson_profile(t2, 20), 8, 16);
    c.add("exponent", std::abs(fit.exponent - 1.5) <= 0.1, "exponent " + fmt(fit.exponent) + " in 1.5 +- 0.1");
    const auto a = criteria::alpha_carleson_sufficient(fit, 5.0).passed;
    c.add("alpha", a == Tri::yes, std::string("alpha sufficient p=5 ") + criteria::to_string(a));
    return c;
}

Criterion shapiro_taylor()
{
    Criterion c{5, "Log-power cutoff at theta = 4", {}};
    const double theta = 4.0;
    auto sym = symbols::make_symbol(theta_spec(theta));
    auto H = measure::pullback_histogram(symbols::sample_trace(sym, {}), 30);
    const std::vector<std::size_t> Ns = {128, 256, 512};
    std::vector<op::SingularSpectrum> spectra;
    for (std::size_t N : Ns)
        spectra.push_back(op::singular_spectrum(op::matrix_truncation(*sym, N, 16 * N)));
    for (double p : {0.8, 1.5}) {
        const std::string tag = "p" + fmt(p);
        auto L = criteria::luecking_partial_sums(H, p);
        const double want = 1.0 - theta * p / 2.0;
        c.add("luecking_exponent_" + tag, std::abs(L.growth_fit.exponent - want) <= 0.3,
              tag + " exponent " + fmt(L.growth_fit.exponent) + " in " + fmt(want) + " +- 0.3");
        const auto lv = p > 4.0 / theta ? SumVerdict::converging : SumVerdict::diverging;
        c.add("luecking_verdict_" + tag, L.verdict == lv,
              tag + " luecking " + criteria::to_string(L.verdict) + " (want " + criteria::to_string(lv) + ")");
        auto T = op::spectral_tail_study(Ns, spectra, p);
        const auto sv = lv == SumVerdict::converging ? op::TailVerdict::cauchy : op::TailVerdict::growing;
        c.add("spectral_agrees_" + tag, T.verdict == sv,
              tag + " spectral " + op::to_string(T.verdict) + " (want " + op::to_string(sv) + ", exponent " +
                  fmt(T.increment_exponent) + ")");
    }
    return c;
}

Criterion rho_log_power()
{
    Criterion c{6, "rho asymptotic for theta = 2", {}};
    auto P = measure::carleson_profile(symbols::sample_trace(theta_spec(2.0), 4096, 40), 16);
    const double s = statistic_spread(P, 8, 16, [](int n) {
        const double L = n * std::log(2.0);
        return L * L;
    });
    c.add("spread", s < 4.0, "spread " + fmt(s) + " < 4 over n in [8,16]");
    return c;
}

Criterion no_schatten()
{
    Criterion c{7, "No-Schatten symbol", {}};
    auto P = measure::carleson_profile(symbols::sample_trace(family("loglog"), 4096, 40), 16);
    for (double p : {0.5, 1.0, 2.0, 4.0, 8.0}) {
        const auto v = criteria::necessary_condition_diag(P, p, {8, 16}).passed;
        c.add("necessary_fails_p" + fmt(p), v == Tri::no,
              "p" + fmt(p) + " necessary " + criteria::to_string(v) + " (want no)");
    }
    const auto m = criteria::maccluer_test(P, {8, 16}).passed;
    c.add("maccluer", m == Tri::yes, std::string("maccluer ") + criteria::to_string(m) + " (want yes)");
    const double s = statistic_spread(P, 8, 16, [](int n) { return std::log(n * std::log(2.0)); });
    c.add("spread", s < 4.0, "spread " + fmt(s) + " < 4");
    return c;
}

Criterion no_schatten_same_modulus()
{
    Criterion c{8, "No-Schatten same-modulus pair", {}};
    auto phi = symbols::make_symbol(family("loglog"));
    SymbolSpec s2 = family("loglog");
    s2.inner_factor = true;
    auto tr = symbols::sample_trace(symbols::make_symbol(s2), {});
    const double gap = modulus_gap(*phi, tr);
    c.add("modulus", gap <= 1e-12, "modulus gap " + fmt(gap) + " <= 1e-12");
    auto fit = measure::fit_carleson_exponent(measure::carleson_profile(tr, 20), 8, 16);
    c.add("exponent", fit.exponent >= 1.8 && fit.exponent <= 2.0, "exponent " + fmt(fit.exponent) + " in [1.8, 2]");
    const auto a = criteria::alpha_carleson_sufficient(fit, 3.0, 1.8).passed;
    c.add("alpha", a == Tri::yes, std::string("alpha sufficient p=3 cap 1.8 ") + criteria::to_string(a));
    return c;
}

Criterion hs_identity()
{
    Criterion c{9, "Hilbert-Schmidt cross-route for z/2", {}};
    SymbolSpec s = family("rotation");
    s.r = cplx(0.5, 0.0);
    auto tr = symbols::sample_trace(s, 4096, 10);
    // sum_m |1/2|^{2m}
    const double exact = 4.0 / 3.0;
    const double sum = op::schatten_sum(op::singular_spectrum(op::matrix_truncation(tr, 64, 1024)), 2.0).sum;
    const double hs = criteria::hs_integral(tr).value;
    c.add("schatten", std::abs(sum - exact) <= 1e-6, "schatten sum err " + fmt(std::abs(sum - exact)) + " <= 1e-6");
    c.add("hs", std::abs(hs - exact) <= 1e-10, "hs integral err " + fmt(std::abs(hs - exact)) + " <= 1e-10");
    return c;
}

Criterion box_window()
{
    Criterion c{10, "Box/window equivalence", {}};
    SymbolSpec rot = family("rotation");
    rot.r = cplx(0.75, 0.0);
    const std::vector<std::pair<std::string, measure::PullbackHistogram>> hists = {
        {"theta4", measure::pullback_histogram(symbols::sample_trace(theta_spec(4.0), 4096, 40), 14)},
        {"theta2", measure::pullback_histogram(symbols::sample_trace(theta_spec(2.0), 4096, 40), 20)},
        {"rotation", measure::pullback_histogram(symbols::sample_trace(rot, 1024, 10), 12)},
        {"identity", measure::pullback_histogram(symbols::sample_trace(family("identity"), 4096, 12), 12)},
    };
    double defect = 0.0;
    for (const auto& [name, H] : hists)
        defect = std::max(defect, decomposition_defect(H));
    c.add("decomposition", defect == 0.0, "decomposition defect " + fmt(defect) + " == 0 on 4 histograms");
    const auto& T = hists.front().second;
    bool ordered = true;
    double rmin = INFINITY, rmax = 0.0;
    for (int D = 1; D <= T.depth; ++D) {
        auto [box, window] = criteria::box_window_sums(T, 1.5, D);
        ordered = ordered && box <= window;
        if (D >= 8) {
            rmin = std::min(rmin, window / box);
            rmax = std::max(rmax, window / box);
        }
    }
    c.add("ordered", ordered, std::string("R-sum <= W-sum at every depth: ") + (ordered ? "yes" : "no"));
    c.add("ratio", rmax / rmin <= 3.0, "W/R ratio spread " + fmt(rmax / rmin) + " <= 3 over depths 8-14");
    return c;
}

Criterion poisson()
{
    Criterion c{11, "Poisson sums of the beta = 3 radial measure", {}};
    auto P = op::poisson_moment_sums(op::radial_power_measure(3.0), 1.5, 1u << 14);
    // density (1 - r) on the disc
    double worst = 0.0;
    for (std::size_t n : {0u, 1u, 10u, 100u, 1000u, 16384u}) {
        const double nn = static_cast<double>(n);
        worst = std::max(worst, std::abs(P.moments[n] * (2.0 * nn + 2.0) * (2.0 * nn + 3.0) / 6.0 - 1.0));
    }
    c.add("moments", worst <= 1e-8, "moment rel err " + fmt(worst) + " <= 1e-8");
    c.add("decay", std::abs(P.moment_fit.exponent + 2.0) <= 0.2,
          "moment exponent " + fmt(P.moment_fit.exponent) + " in -2 +- 0.2");
    c.add("cauchy", P.cauchy, std::string("partial sums at p=1.5 cauchy: ") + (P.cauchy ? "yes" : "no"));
    return c;
}

Criterion semi_analytic()
{
    Criterion c{12, "Semi-analytic against sampled rho", {}};
    auto ptr = symbols::make_symbol(sin_beta(2.0, true));
    const auto& sym = dynamic_cast<const symbols::GeneralConstructionSymbol&>(*ptr);
    const double h = std::ldexp(1.0, -10);
    const double semi = measure::semi_analytic_rho(sym, h, 1024);
    const double sampled = measure::carleson_profile(symbols::sample_trace(ptr, {}), 10).level(10).rho_hat;
    const double ratio = semi / sampled;
    c.add("factor2", semi > 0.0 && ratio < 2.0 && ratio > 0.5,
          "semi " + fmt(semi) + " sampled " + fmt(sampled) + " ratio in (1/2, 2)");
    return c;
}

std::map<std::string, std::string> snapshot(const fs::path& dir)
{
    std::map<std::string, std::string> files;
    for (const auto& e : fs::directory_iterator(dir))
        files[e.path().filename().string()] = io::read_text(e.path().string());
    return files;
}

Criterion determinism()
{
    Criterion c{13, "Determinism of every experiment", {}};
    const auto root = fs::temp_directory_path() / "hardy-lab-acceptance";
    for (const auto& e : harness::list_experiments()) {
        const auto dir = root / e.id;
        std::map<std::string, std::string> first;
        bool same = true;
        for (int pass = 0; pass < 2; ++pass) {
            fs::remove_all(dir);
            harness::run_experiment(harness::parse_config({{"experiment", e.id}, {"output_dir", dir.string()}}));
            auto files = snapshot(dir);
            if (pass == 0)
                first = std::move(files);
            else
                same = !first.empty() && files == first;
        }
        c.add(e.id, same, e.id + (same ? " identical" : " differs") + " (" + std::to_string(first.size()) + " files)");
    }
    fs::remove_all(root);
    return c;
}

} // namespace

int main()
{
    std::setvbuf(stdout, nullptr, _IONBF, 0);
    const std::vector<std::function<Criterion()>> all = {
        fourier_explicit, fourier_sign_decay, identity_sanity, same_modulus, shapiro_taylor,
        rho_log_power,    no_schatten,        no_schatten_same_modulus,     hs_identity,
        box_window,       poisson,            semi_analytic,                determinism,
    };
    int unexpected = 0;
    for (const auto& run : all) {
        const auto start = std::chrono::steady_clock::now();
        Criterion c;
        std::string error;
        try {
            c = run();
        } catch (const std::exception& e) {
            error = e.what();
        }
        const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
        bool pass = error.empty();
        bool only_known = true;
        std::ostringstream detail;
        for (const auto& k : c.checks) {
            if (k.ok)
                continue;
            pass = false;
            const bool known = known_unattainable.count(k.id) > 0;
            only_known = only_known && known;
            detail << "; " << k.detail << (known ? " [known unattainable]" : "");
        }
        if (!error.empty()) {
            only_known = false;
            detail << "; error: " << error;
        }
        if (!pass && !only_known)
            ++unexpected;
        std::string summary;
        for (const auto& k : c.checks)
            summary += (summary.empty() ? "" : ", ") + k.detail;
        std::printf("%s criterion %2d %s (%.1fs): %s%s\n", pass ? "PASS" : "FAIL", c.number, c.title.c_str(), secs,
                    summary.c_str(), pass ? "" : detail.str().c_str());
    }
    std::printf("%s: %d unexpected failure(s)\n", unexpected == 0 ? "ACCEPTANCE OK" : "ACCEPTANCE FAILED",
                unexpected);
    return unexpected == 0 ? 0 : 1;
}
