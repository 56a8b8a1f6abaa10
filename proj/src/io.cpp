#include "hardylab/errors.hpp"
#include "hardylab/io.hpp"

#include <algorithm>
#include <cstdio>
#include <fstream>
#include <optional>
#include <sstream>

namespace hardylab::io {

namespace {

std::optional<symbols::cplx> complex_from_json(const json& j, const char* key)
{
    if (!j.is_number() && !(j.is_array() && j.size() == 2 && j[0].is_number() && j[1].is_number()))
        throw ValidationError(std::string("symbol field '") + key + "' must be a number or [re, im]");
    if (j.is_number())
        return symbols::cplx(j.get<double>(), 0.0);
    return symbols::cplx(j[0].get<double>(), j[1].get<double>());
}

std::optional<double> number_field(const json& j, const char* key)
{
    if (!j.contains(key))
        return std::nullopt;
    if (!j[key].is_number())
        throw ValidationError(std::string("symbol field '") + key + "' must be a number");
    return j[key].get<double>();
}

class CsvFile {
public:
    explicit CsvFile(const std::string& path) : out_(path, std::ios::binary)
    {
        if (!out_)
            throw ValidationError("cannot open for writing: " + path);
    }
    void line(const std::string& s) { out_ << s << "\r\n"; }
    ~CsvFile() { out_.flush(); }

private:
    std::ofstream out_;
};

} // namespace

symbols::SymbolSpec spec_from_json(const json& j)
{
    if (!j.is_object())
        throw ValidationError("symbol must be a JSON object");
    if (!j.contains("family") || !j["family"].is_string())
        throw ValidationError("symbol requires a string 'family'");
    static const std::vector<std::string> known = {"family", "beta", "theta", "q", "epsilon", "r", "c",
                                                   "k", "coefficients", "inner_factor"};
    for (const auto& item : j.items())
        if (std::find(known.begin(), known.end(), item.key()) == known.end())
            throw ValidationError("unknown symbol field '" + item.key() + "'");
    symbols::SymbolSpec s;
    s.family = j["family"].get<std::string>();
    s.beta = number_field(j, "beta");
    s.theta = number_field(j, "theta");
    s.q = number_field(j, "q");
    s.epsilon = number_field(j, "epsilon");
    if (j.contains("r"))
        s.r = complex_from_json(j["r"], "r");
    if (j.contains("c"))
        s.c = complex_from_json(j["c"], "c");
    if (j.contains("k")) {
        if (!j["k"].is_number_integer())
            throw ValidationError("symbol field 'k' must be an integer");
        s.k = j["k"].get<int>();
    }
    if (j.contains("coefficients")) {
        if (!j["coefficients"].is_array())
            throw ValidationError("symbol field 'coefficients' must be an array");
        for (const auto& a : j["coefficients"]) {
            if (!a.is_number())
                throw ValidationError("coefficients must be numbers");
            s.coefficients.push_back(a.get<double>());
        }
    }
    if (j.contains("inner_factor")) {
        if (!j["inner_factor"].is_boolean())
            throw ValidationError("symbol field 'inner_factor' must be a boolean");
        s.inner_factor = j["inner_factor"].get<bool>();
    }
    return s;
}

json spec_to_json(const symbols::SymbolSpec& s)
{
    json j;
    j["family"] = s.family;
    if (s.beta)
        j["beta"] = *s.beta;
    if (s.theta)
        j["theta"] = *s.theta;
    if (s.q)
        j["q"] = *s.q;
    if (s.epsilon)
        j["epsilon"] = *s.epsilon;
    if (s.r)
        j["r"] = {s.r->real(), s.r->imag()};
    if (s.c)
        j["c"] = {s.c->real(), s.c->imag()};
    if (s.k)
        j["k"] = *s.k;
    if (!s.coefficients.empty())
        j["coefficients"] = s.coefficients;
    if (s.inner_factor)
        j["inner_factor"] = true;
    return j;
}

std::string format_double(double x)
{
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.17e", x);
    return buf;
}

void write_trace_csv(const std::string& path, const symbols::BoundaryTrace& trace)
{
    const auto full = trace.mirrored ? trace.expanded() : trace;
    CsvFile out(path);
    out.line("t,re,im,weight");
    for (std::size_t i = 0; i < full.size(); ++i)
        out.line(format_double(full.grid.nodes[i]) + "," + format_double(full.values[i].real()) + "," +
                 format_double(full.values[i].imag()) + "," + format_double(full.grid.weights[i]));
}

void write_histogram_csv(const std::string& path, const measure::PullbackHistogram& hist)
{
    CsvFile out(path);
    out.line("n,j,box_mass,window_mass");
    for (int n = 0; n <= hist.depth; ++n) {
        const auto& B = hist.box_mass[static_cast<std::size_t>(n)];
        const auto& W = hist.window_mass[static_cast<std::size_t>(n)];
        std::vector<std::uint64_t> idx = W.index;
        idx.insert(idx.end(), B.index.begin(), B.index.end());
        std::sort(idx.begin(), idx.end());
        idx.erase(std::unique(idx.begin(), idx.end()), idx.end());
        for (auto j : idx)
            out.line(std::to_string(n) + "," + std::to_string(j) + "," + format_double(B.at(j)) + "," +
                     format_double(W.at(j)));
    }
}

void write_profile_csv(const std::string& path, const measure::CarlesonProfile& profile)
{
    CsvFile out(path);
    out.line("n,h,rho_hat,centers_tested,effective_samples");
    for (const auto& L : profile.levels)
        out.line(std::to_string(L.n) + "," + format_double(L.h) + "," + format_double(L.rho_hat) + "," +
                 std::to_string(L.centers_tested) + "," + std::to_string(L.effective_samples));
}

void write_spectrum_csv(const std::string& path, const op::SingularSpectrum& spectrum)
{
    CsvFile out(path);
    out.line("k,sigma_k");
    for (std::size_t k = 0; k < spectrum.values.size(); ++k)
        out.line(std::to_string(k + 1) + "," + format_double(spectrum.values[k]));
}

void write_matrix_csv(const std::string& path, const op::OperatorMatrix& A)
{
    if (A.N > 64)
        throw SizeError("matrix export is limited to N <= 64");
    CsvFile out(path);
    out.line("n,m,re,im");
    for (std::size_t n = 0; n < A.N; ++n)
        for (std::size_t m = 0; m < A.N; ++m)
            out.line(std::to_string(n) + "," + std::to_string(m) + "," + format_double(A.at(n, m).real()) +
                     "," + format_double(A.at(n, m).imag()));
}

void write_text(const std::string& path, const std::string& text)
{
    std::ofstream out(path, std::ios::binary);
    if (!out)
        throw ValidationError("cannot open for writing: " + path);
    out << text;
}

std::string read_text(const std::string& path)
{
    std::ifstream in(path, std::ios::binary);
    if (!in)
        throw ValidationError("cannot read " + path);
    std::ostringstream os;
    os << in.rdbuf();
    return os.str();
}

} // namespace hardylab::io
