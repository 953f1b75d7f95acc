#include "swarmft/matching.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace swarmft {

Series::Series(std::span<const double> row_major, std::size_t dims) : Series(dims) {
    if (dims == 0 || row_major.size() % dims != 0) {
        throw std::invalid_argument("Series: sample count is not a multiple of dims");
    }
    values_.reserve(row_major.size());
    prefix_.reserve(row_major.size() + dims);
    for (std::size_t i = 0; i < row_major.size(); i += dims) push(row_major.subspan(i, dims));
}

void Series::push(std::span<const double> sample) {
    if (sample.size() != dims_) throw std::invalid_argument("Series: sample has wrong dimensionality");
    const std::size_t base = prefix_.size() - dims_;
    for (std::size_t d = 0; d < dims_; ++d) {
        values_.push_back(sample[d]);
        prefix_.push_back(prefix_[base + d] + sample[d]);
    }
}

double match_specificity(const Series& probe, const Series& target, const MatchParams& params,
                         ResidualForm form) {
    if (probe.empty() || target.empty()) throw std::invalid_argument("match_specificity: empty operand");
    if (probe.dims() != target.dims()) throw std::invalid_argument("match_specificity: dimension mismatch");
    if (params.g <= 0 || params.k < 0) throw std::invalid_argument("match_specificity: g must be > 0, k >= 0");

    const auto len_p = static_cast<long>(probe.length());
    const auto len_t = static_cast<long>(target.length());
    const long lo = -(params.k / 2);
    const long hi = (len_t - len_p) + (params.k + 1) / 2;
    if (hi < lo) return 0.0;

    double total = 0.0;
    long count = 0;
    for (long o = lo; o <= hi; o += params.g) ++count;

    for (std::size_t d = 0; d < probe.dims(); ++d) {
        double acc = 0.0;
        for (long o = lo; o <= hi; o += params.g) {
            const long n0 = std::max(0L, -o);
            const long n1 = std::min(len_p, len_t - o);
            if (n1 <= n0) continue;  // no overlap contributes nothing
            const double residual = probe.range_sum(d, static_cast<std::size_t>(n0), static_cast<std::size_t>(n1)) -
                                    target.range_sum(d, static_cast<std::size_t>(n0 + o), static_cast<std::size_t>(n1 + o));
            const double r = form == ResidualForm::Absolute ? std::abs(residual) : residual;
            acc += std::max(0.0, params.s - r);
        }
        total += acc / static_cast<double>(count);
    }
    return total / static_cast<double>(probe.dims());
}

}  // namespace swarmft
