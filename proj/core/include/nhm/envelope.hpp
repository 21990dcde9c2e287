#pragma once

namespace nhm {

/// Coupling profile g(t) on [0, T]: sin^2 ramp up over r*T, flat plateau,
/// sin^2 ramp down over the last r*T. The plateau height 1/((1 - r) T) makes
/// the integral of g exactly one; g(0) = g(T) = 0 and g' is continuous.
class Envelope {
public:
    explicit Envelope(double duration, double ramp_fraction = 0.1);

    [[nodiscard]] double duration() const noexcept { return duration_; }
    [[nodiscard]] double ramp_fraction() const noexcept { return ramp_; }
    [[nodiscard]] double ramp_time() const noexcept { return ramp_ * duration_; }
    [[nodiscard]] double plateau_height() const noexcept { return height_; }

    /// g(t); zero outside [0, T].
    [[nodiscard]] double operator()(double t) const;
    /// G(t) = integral of g from 0 to t (closed form).
    [[nodiscard]] double integral(double t) const;
    /// (G(b) - G(a)) / (b - a), exactly the plateau height when [a, b] lies
    /// inside the plateau.
    [[nodiscard]] double slice_average(double a, double b) const;
    [[nodiscard]] bool in_plateau(double a, double b) const;

private:
    double duration_;
    double ramp_;
    double height_;
};

}  // namespace nhm
