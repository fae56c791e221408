#pragma once

#include <string>

namespace sbcode {

// Renders sweep-result CSV text as an SVG: one panel per s value, one series
// per (p, decoder), x = epsilon, y = mean_err_over_k, plus the uncoded
// reference line y = epsilon. Output is deterministic for identical input.
// Throws std::invalid_argument on a missing column (naming it) or an empty
// body.
std::string render_results_svg(const std::string& csv_text);

}  // namespace sbcode
