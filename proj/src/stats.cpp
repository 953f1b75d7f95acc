#include "swarmft/stats.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

namespace swarmft {

double quantile(std::vector<double> values, double p) {
    if (values.empty()) return std::numeric_limits<double>::quiet_NaN();
    std::sort(values.begin(), values.end());
    const double h = (static_cast<double>(values.size()) - 1.0) * std::clamp(p, 0.0, 1.0);
    const auto lo = static_cast<std::size_t>(std::floor(h));
    const auto hi = std::min(lo + 1, values.size() - 1);
    return values[lo] + (h - static_cast<double>(lo)) * (values[hi] - values[lo]);
}

double median(std::span<const double> values) {
    return quantile(std::vector<double>(values.begin(), values.end()), 0.5);
}

Quartiles quartiles(std::span<const double> values) {
    std::vector<double> v(values.begin(), values.end());
    return {quantile(v, 0.25), quantile(v, 0.5), quantile(v, 0.75), v.size()};
}

}  // namespace swarmft
