#include "vibsim/signal_filters.hpp"

#include <cmath>
#include <stdexcept>

namespace vibsim {

void FilterSpec::validate() const {
    if (!(K_g > 0.0))
        throw std::invalid_argument("FilterSpec: K_g must be positive");
    if (variant == FilterVariant::LowPass) {
        if (!(omega_lp > 0.0))
            throw std::invalid_argument("FilterSpec: omega_lp must be positive");
        if (!(zeta_lp > 0.0 && zeta_lp < 1.0))
            throw std::invalid_argument("FilterSpec: zeta_lp must lie in (0,1)");
        if (!(T_s > 0.0))
            throw std::invalid_argument("FilterSpec: T_s must be positive");
    } else if (variant == FilterVariant::DispEstimator) {
        if (!(nu_hp > 0.0))
            throw std::invalid_argument("FilterSpec: nu_hp must be positive");
        if (!(T_s > 0.0))
            throw std::invalid_argument("FilterSpec: T_s must be positive");
    }
}

LowPassCoefficients lowpass_coefficients(double K_g, double omega_lp, double zeta_lp,
                                         double T_s) {
    FilterSpec spec;
    spec.variant = FilterVariant::LowPass;
    spec.K_g = K_g;
    spec.omega_lp = omega_lp;
    spec.zeta_lp = zeta_lp;
    spec.T_s = T_s;
    spec.validate();

    const double r = std::exp(-zeta_lp * omega_lp * T_s);
    const double theta = omega_lp * T_s * std::sqrt(1.0 - zeta_lp * zeta_lp);
    LowPassCoefficients c;
    c.K_g = K_g;
    c.a1 = -2.0 * r * std::cos(theta);
    c.a2 = r * r;
    c.b = 1.0 + c.a1 + c.a2;
    return c;
}

double highpass_step(HighPassState& s, double nu_hp, double x) {
    const double y = x - s.x1 + nu_hp / (nu_hp + 1.0) * s.y1;
    s.x1 = x;
    s.y1 = y;
    return y;
}

double trapezoid_step(TrapezoidState& s, double T_s, double x) {
    const double y = s.y1 + T_s / 2.0 * (x + s.x1);
    s.x1 = x;
    s.y1 = y;
    return y;
}

SignalFilter::SignalFilter(const FilterSpec& spec) : spec_(spec) {
    spec_.validate();
    if (spec_.variant == FilterVariant::LowPass)
        lp_ = lowpass_coefficients(spec_.K_g, spec_.omega_lp, spec_.zeta_lp, spec_.T_s);
}

void SignalFilter::reset() {
    lp_z1_ = lp_z2_ = lp_e1_ = 0.0;
    hp_ = {};
    integ_ = {};
}

double SignalFilter::step(double e) {
    switch (spec_.variant) {
    case FilterVariant::Gain:
        return spec_.K_g * e;
    case FilterVariant::LowPass: {
        // z_k = -a1 z_{k-1} - a2 z_{k-2} + K_g b e_{k-1}
        const double z = -lp_.a1 * lp_z1_ - lp_.a2 * lp_z2_ + lp_.K_g * lp_.b * lp_e1_;
        lp_z2_ = lp_z1_;
        lp_z1_ = z;
        lp_e1_ = e;
        return z;
    }
    case FilterVariant::DispEstimator: {
        double s = highpass_step(hp_[0], spec_.nu_hp, e);
        s = trapezoid_step(integ_[0], spec_.T_s, s);
        s = highpass_step(hp_[1], spec_.nu_hp, s);
        s = trapezoid_step(integ_[1], spec_.T_s, s);
        s = highpass_step(hp_[2], spec_.nu_hp, s);
        return spec_.K_g * s;
    }
    }
    throw std::logic_error("SignalFilter: unknown variant");
}

} // namespace vibsim
