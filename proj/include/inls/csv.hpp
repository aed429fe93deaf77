#pragma once

#include <string>
#include <vector>

namespace inls {

// Fixed-precision decimal text (printf %.{precision}g). Used for every
// number we emit so that repeated runs are byte-identical.
std::string format_real(double v, int precision);

std::string join_csv(const std::vector<std::string>& cells);

// Splits one CSV line on commas; no quoting support (we never emit quotes).
std::vector<std::string> split_csv(const std::string& line);

}  // namespace inls
