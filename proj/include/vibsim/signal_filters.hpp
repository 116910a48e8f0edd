#ifndef VIBSIM_SIGNAL_FILTERS_HPP
#define VIBSIM_SIGNAL_FILTERS_HPP

#include <array>

namespace vibsim {

enum class FilterVariant { Gain, LowPass, DispEstimator };

// Signal-conditioning filter F mapping the sampled error e_k to the
// performance variable z_k.
struct FilterSpec {
    FilterVariant variant = FilterVariant::Gain;
    double K_g = 1.0;      // output gain, all variants
    double omega_lp = 0.0; // low-pass cutoff [rad/s]
    double zeta_lp = 0.0;  // low-pass damping, in (0,1)
    double nu_hp = 0.0;    // displacement-estimator high-pass parameter
    double T_s = 0.0;      // sample period [s]

    void validate() const; // throws std::invalid_argument
};

struct LowPassCoefficients {
    double K_g;
    double a1; // -2 r cos(theta)
    double a2; // r^2
    double b;  // 1 + a1 + a2, so the DC gain is exactly K_g
};

LowPassCoefficients lowpass_coefficients(double K_g, double omega_lp, double zeta_lp,
                                         double T_s);

// y_k = x_k - x_{k-1} + (nu/(nu+1)) y_{k-1}
struct HighPassState {
    double x1 = 0.0;
    double y1 = 0.0;
};
double highpass_step(HighPassState& s, double nu_hp, double x);

// y_k = y_{k-1} + (T_s/2)(x_k + x_{k-1})
struct TrapezoidState {
    double x1 = 0.0;
    double y1 = 0.0;
};
double trapezoid_step(TrapezoidState& s, double T_s, double x);

// Stateful realization of one FilterSpec. The displacement estimator is the
// stage-by-stage cascade HP -> integrator -> HP -> integrator -> HP -> K_g;
// the (q-1) factors are not cancelled symbolically. All delay registers
// start at zero.
class SignalFilter {
  public:
    explicit SignalFilter(const FilterSpec& spec);

    double step(double e);
    void reset();

    const FilterSpec& spec() const { return spec_; }
    const LowPassCoefficients& lowpass() const { return lp_; }

  private:
    FilterSpec spec_;
    LowPassCoefficients lp_{};
    double lp_z1_ = 0.0, lp_z2_ = 0.0, lp_e1_ = 0.0;
    std::array<HighPassState, 3> hp_{};
    std::array<TrapezoidState, 2> integ_{};
};

} // namespace vibsim

#endif
