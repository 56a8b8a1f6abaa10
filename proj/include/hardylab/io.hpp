#pragma once

#include "hardylab/measure.hpp"
#include "hardylab/operator.hpp"
#include "hardylab/symbols.hpp"

#include <json.hpp>

#include <string>

namespace hardylab::io {

using nlohmann::json;

// r and c accept a number or [re, im]
symbols::SymbolSpec spec_from_json(const json& j);
json spec_to_json(const symbols::SymbolSpec& spec);

// %.17e, enough to round-trip a double
std::string format_double(double x);

void write_trace_csv(const std::string& path, const symbols::BoundaryTrace& trace);
void write_histogram_csv(const std::string& path, const measure::PullbackHistogram& hist);
void write_profile_csv(const std::string& path, const measure::CarlesonProfile& profile);
void write_spectrum_csv(const std::string& path, const op::SingularSpectrum& spectrum);
// only for N <= 64
void write_matrix_csv(const std::string& path, const op::OperatorMatrix& A);

void write_text(const std::string& path, const std::string& text);
std::string read_text(const std::string& path);

} // namespace hardylab::io
