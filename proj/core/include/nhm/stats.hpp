#pragma once

#include <span>

namespace nhm {

struct LineFit {
    double slope;
    double intercept;
};

/// Ordinary least squares y = slope * x + intercept.
LineFit fit_line(std::span<const double> x, std::span<const double> y);

/// Least-squares exponent of y ~ C x^k from log-log data.
LineFit fit_power_law(std::span<const double> x, std::span<const double> y);

/// True when the last `count` entries are strictly decreasing.
bool tail_decreasing(std::span<const double> values, std::size_t count);

}  // namespace nhm
