#pragma once

#include <span>
#include <vector>

namespace swarmft {

struct Quartiles {
    double q1 = 0.0;
    double median = 0.0;
    double q3 = 0.0;
    std::size_t count = 0;

    double iqr() const { return q3 - q1; }
};

/// Linear-interpolation quantile (R type 7) of unsorted data; NaN when empty.
double quantile(std::vector<double> values, double p);
double median(std::span<const double> values);
Quartiles quartiles(std::span<const double> values);

}  // namespace swarmft
