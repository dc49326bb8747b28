#pragma once

#include <map>
#include <string>

namespace tanglab {

// Static SVG bar chart of a k-histogram.
std::string histogram_svg(const std::map<int, double>& probabilities, const std::string& title);

}  // namespace tanglab
