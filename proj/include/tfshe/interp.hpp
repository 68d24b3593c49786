#pragma once

#include <memory>
#include <vector>

namespace tfshe {

// Monotonicity-preserving cubic (Steffen) interpolant over sorted nodes.
class MonotoneSpline {
public:
    MonotoneSpline() = default;
    MonotoneSpline(std::vector<double> x, std::vector<double> y);
    double operator()(double x) const;
    bool empty() const { return !impl_; }
    double x_min() const;
    double x_max() const;

private:
    struct Impl;
    std::shared_ptr<const Impl> impl_;
};

} // namespace tfshe
