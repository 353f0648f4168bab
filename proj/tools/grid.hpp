#pragma once

#include <string>
#include <vector>

namespace spherehit::cli {

// "1,0,-2.5" -> {1, 0, -2.5}
std::vector<double> parse_vector(const std::string& text);

// "a:b:n" linear, "ga:b:n" geometric, or a comma list. The result must be
// strictly increasing.
std::vector<double> parse_grid(const std::string& text);

}  // namespace spherehit::cli
