#include "tanglab/svg.hpp"

#include <algorithm>
#include <sstream>

namespace tanglab {

std::string histogram_svg(const std::map<int, double>& probabilities, const std::string& title) {
    const int width = 640, height = 400, margin = 50;
    double pmax = 0.0;
    int kmax = 2;
    for (const auto& [k, p] : probabilities) {
        pmax = std::max(pmax, p);
        kmax = std::max(kmax, k);
    }
    if (pmax <= 0.0) pmax = 1.0;
    const int bars = kmax + 1;
    const double bw = static_cast<double>(width - 2 * margin) / bars;
    std::ostringstream s;
    s << "<svg xmlns='http://www.w3.org/2000/svg' width='" << width << "' height='" << height
      << "'>\n";
    s << "<rect width='100%' height='100%' fill='white'/>\n";
    s << "<text x='" << width / 2 << "' y='24' text-anchor='middle' font-size='15'>" << title
      << "</text>\n";
    s << "<line x1='" << margin << "' y1='" << height - margin << "' x2='" << width - margin
      << "' y2='" << height - margin << "' stroke='black'/>\n";
    for (int k = 0; k <= kmax; ++k) {
        auto it = probabilities.find(k);
        double p = it == probabilities.end() ? 0.0 : it->second;
        double hbar = (height - 2 * margin) * p / pmax;
        double x = margin + k * bw;
        if (p > 0.0)
            s << "<rect x='" << x + 2 << "' y='" << height - margin - hbar << "' width='"
              << bw - 4 << "' height='" << hbar << "' fill='#4878a8'/>\n";
        if (bars <= 40 || k % 2 == 0)
            s << "<text x='" << x + bw / 2 << "' y='" << height - margin + 16
              << "' text-anchor='middle' font-size='10'>" << k << "</text>\n";
    }
    s << "<text x='" << margin - 8 << "' y='" << margin << "' text-anchor='end' font-size='10'>"
      << pmax << "</text>\n";
    s << "</svg>\n";
    return s.str();
}

}  // namespace tanglab
