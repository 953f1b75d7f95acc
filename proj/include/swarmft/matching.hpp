#pragma once

#include <cstddef>
#include <span>
#include <vector>

namespace swarmft {

/// Residual convention inside G[s - r]. Absolute bounds m by s.
enum class ResidualForm { Absolute, Signed };

/// s: residual cap, g: alignment stride, k: permissible index offset.
struct MatchParams {
    double s = 1.5;
    int g = 1;
    int k = 10;
};

/// Row-major multi-dimensional series with per-dimension prefix sums, so the
/// residual sum at any alignment is two subtractions.
class Series {
public:
    explicit Series(std::size_t dims = 1) : dims_(dims), prefix_(dims, 0.0) {}
    Series(std::span<const double> row_major, std::size_t dims);

    void push(std::span<const double> sample);

    std::size_t length() const { return dims_ == 0 ? 0 : values_.size() / dims_; }
    std::size_t dims() const { return dims_; }
    bool empty() const { return values_.empty(); }
    double at(std::size_t n, std::size_t d) const { return values_[n * dims_ + d]; }
    std::span<const double> values() const { return values_; }

    /// Sum of dimension d over indices [begin, end).
    double range_sum(std::size_t d, std::size_t begin, std::size_t end) const {
        return prefix_[end * dims_ + d] - prefix_[begin * dims_ + d];
    }

private:
    std::size_t dims_;
    std::vector<double> values_;
    std::vector<double> prefix_;  // (length + 1) x dims
};

/// Matching specificity of `probe` (signature) against `target` (signature or window):
/// the dimension-averaged mean over alignment offsets of G[s - |summed residual|].
/// Offsets run from -floor(k/2) to (|target| - |probe|) + ceil(k/2) in steps of g.
/// Throws std::invalid_argument for empty operands or a dimension mismatch.
double match_specificity(const Series& probe, const Series& target, const MatchParams& params,
                         ResidualForm form = ResidualForm::Absolute);

}  // namespace swarmft
