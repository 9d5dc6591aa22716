#pragma once

#include <filesystem>
#include <string>
#include <vector>

#include "causaldo/experiment.hpp"

namespace causaldo {

/// Mean KL (log scale) against n: one polyline with point markers and
/// stderr bars per series, legend sorted by method name. A series is one
/// method, or one (scenario, method) pair when several scenarios are present.
/// Throws EmptyInput for no rows.
std::string render_summary_svg(const std::vector<SummaryRow>& rows);

void plot_emit(const std::vector<SummaryRow>& rows, const std::filesystem::path& out);

}  // namespace causaldo
