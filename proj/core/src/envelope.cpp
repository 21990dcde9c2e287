#include "nhm/envelope.hpp"

#include <cmath>
#include <numbers>

#include "nhm/errors.hpp"

namespace nhm {

Envelope::Envelope(double duration, double ramp_fraction) : duration_(duration), ramp_(ramp_fraction) {
    if (!(duration > 0.0) || !std::isfinite(duration)) throw InvalidArgument("envelope duration T must be positive");
    if (!(ramp_fraction > 0.0 && ramp_fraction < 0.5))
        throw InvalidArgument("envelope ramp fraction must lie in (0, 1/2)");
    height_ = 1.0 / ((1.0 - ramp_) * duration_);
}

double Envelope::operator()(double t) const {
    if (t <= 0.0 || t >= duration_) return 0.0;
    const double tau = ramp_time();
    if (t < tau) {
        const double s = std::sin(std::numbers::pi * t / (2.0 * tau));
        return height_ * s * s;
    }
    if (t > duration_ - tau) {
        const double s = std::sin(std::numbers::pi * (duration_ - t) / (2.0 * tau));
        return height_ * s * s;
    }
    return height_;
}

double Envelope::integral(double t) const {
    const double tau = ramp_time();
    const auto ramp_area = [&](double x) {  // integral of h sin^2(pi s / 2 tau) over [0, x]
        return height_ * (x / 2.0 - tau / (2.0 * std::numbers::pi) * std::sin(std::numbers::pi * x / tau));
    };
    if (t <= 0.0) return 0.0;
    if (t >= duration_) return 1.0;
    if (t <= tau) return ramp_area(t);
    if (t <= duration_ - tau) return height_ * tau / 2.0 + height_ * (t - tau);
    return 1.0 - ramp_area(duration_ - t);
}

double Envelope::slice_average(double a, double b) const {
    if (in_plateau(a, b)) return height_;
    return (integral(b) - integral(a)) / (b - a);
}

bool Envelope::in_plateau(double a, double b) const {
    const double tau = ramp_time();
    return a >= tau && b <= duration_ - tau;
}

}  // namespace nhm
