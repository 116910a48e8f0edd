#include <doctest.h>

#include <cmath>
#include <complex>
#include <numbers>
#include <random>
#include <vector>

#include "helpers.hpp"
#include "vibsim/signal_filters.hpp"

using namespace vibsim;
using vibsim::test::fit_sinusoid;

namespace {

constexpr double kTs = 2.5e-3;

FilterSpec gain_spec(double K_g = 500.0) {
    FilterSpec s;
    s.variant = FilterVariant::Gain;
    s.K_g = K_g;
    s.T_s = kTs;
    return s;
}

FilterSpec lowpass_spec() {
    FilterSpec s;
    s.variant = FilterVariant::LowPass;
    s.K_g = 1.0;
    s.omega_lp = 2.0 * std::numbers::pi * 150.0;
    s.zeta_lp = 0.8;
    s.T_s = kTs;
    return s;
}

FilterSpec dispest_spec(double K_g = 1.0) {
    FilterSpec s;
    s.variant = FilterVariant::DispEstimator;
    s.K_g = K_g;
    s.nu_hp = 20.0;
    s.T_s = kTs;
    return s;
}

// Analytic transfer function of the realized filter at z = e^{i w T_s}.
std::complex<double> analytic_gain(const FilterSpec& spec, double omega) {
    const std::complex<double> z = std::polar(1.0, omega * spec.T_s);
    switch (spec.variant) {
    case FilterVariant::Gain:
        return spec.K_g;
    case FilterVariant::LowPass: {
        const auto c = lowpass_coefficients(spec.K_g, spec.omega_lp, spec.zeta_lp, spec.T_s);
        return spec.K_g * c.b * z / (z * z + c.a1 * z + c.a2);
    }
    case FilterVariant::DispEstimator: {
        const double p = spec.nu_hp / (spec.nu_hp + 1.0);
        const std::complex<double> hp = (z - 1.0) / (z - p);
        const std::complex<double> integ = spec.T_s / 2.0 * (z + 1.0) / (z - 1.0);
        return spec.K_g * hp * hp * hp * integ * integ;
    }
    }
    return 0.0;
}

} // namespace

TEST_CASE("low-pass coefficients follow the pole-placement formulas") {
    const auto c = lowpass_coefficients(1.0, 2.0 * std::numbers::pi * 150.0, 0.8, kTs);
    // frozen closed-form evaluations: r = e^{-0.8 w Ts} = 0.151836,
    // theta = 0.6 w Ts = 1.413717
    CHECK(c.a1 == doctest::Approx(-0.047504704913594549).epsilon(1e-12));
    CHECK(c.a2 == doctest::Approx(0.023054110763106813).epsilon(1e-12));
    CHECK(c.b == doctest::Approx(0.97554940584951222).epsilon(1e-12));

    SUBCASE("DC gain is the configured gain by construction") {
        const auto c2 = lowpass_coefficients(500.0, 2.0 * std::numbers::pi * 150.0, 0.8, kTs);
        CHECK(std::abs(c2.K_g * c2.b / (1.0 + c2.a1 + c2.a2) - 500.0) <= 1e-12 * 500.0);
    }
    SUBCASE("poles sit at radius r inside the unit circle") {
        CHECK(std::sqrt(c.a2) < 1.0);
        CHECK(std::sqrt(c.a2) ==
              doctest::Approx(std::exp(-0.8 * 2.0 * std::numbers::pi * 150.0 * kTs))
                  .epsilon(1e-12));
    }
    SUBCASE("poles coalesce toward the real axis as zeta approaches one") {
        const auto cc =
            lowpass_coefficients(1.0, 2.0 * std::numbers::pi * 150.0, 1.0 - 1e-8, kTs);
        CHECK(std::abs(cc.a1 * cc.a1 - 4.0 * cc.a2) <= 1e-6 * 4.0 * cc.a2);
    }
    SUBCASE("invalid parameters are rejected") {
        CHECK_THROWS_AS(lowpass_coefficients(0.0, 1.0, 0.5, kTs), std::invalid_argument);
        CHECK_THROWS_AS(lowpass_coefficients(1.0, 1.0, 0.0, kTs), std::invalid_argument);
        CHECK_THROWS_AS(lowpass_coefficients(1.0, 1.0, 1.0, kTs), std::invalid_argument);
        CHECK_THROWS_AS(lowpass_coefficients(1.0, -1.0, 0.5, kTs), std::invalid_argument);
    }
}

TEST_CASE("high-pass block") {
    SUBCASE("unit step, nu = 20") {
        HighPassState s;
        CHECK(highpass_step(s, 20.0, 1.0) == 1.0);
        CHECK(highpass_step(s, 20.0, 1.0) == doctest::Approx(20.0 / 21.0).epsilon(1e-15));
    }
    SUBCASE("constant input decays geometrically with ratio nu/(nu+1)") {
        HighPassState s;
        double prev = highpass_step(s, 5.0, 3.0);
        for (int k = 0; k < 50; ++k) {
            const double y = highpass_step(s, 5.0, 3.0);
            CHECK(y == doctest::Approx(prev * 5.0 / 6.0).epsilon(1e-12));
            prev = y;
        }
    }
    SUBCASE("zero in, zero out") {
        HighPassState s;
        for (int k = 0; k < 10; ++k)
            CHECK(highpass_step(s, 20.0, 0.0) == 0.0);
    }
}

TEST_CASE("trapezoidal integrator block") {
    SUBCASE("constant input from rest accumulates c*Ts*(n - 1/2)") {
        TrapezoidState s;
        const double c = 0.37;
        for (int n = 1; n <= 40; ++n) {
            const double y = trapezoid_step(s, kTs, c);
            CHECK(y == doctest::Approx(c * kTs * (n - 0.5)).epsilon(1e-13));
        }
    }
    SUBCASE("zero in, zero out") {
        TrapezoidState s;
        for (int k = 0; k < 10; ++k)
            CHECK(trapezoid_step(s, kTs, 0.0) == 0.0);
    }
    SUBCASE("integrating a cosine recovers the sine within trapezoid accuracy") {
        TrapezoidState s;
        const double w = 2.0 * std::numbers::pi * 5.0;
        double worst = 0.0;
        for (int k = 0; k < 800; ++k) {
            const double t = k * kTs;
            const double y = trapezoid_step(s, kTs, w * std::cos(w * t));
            // integration effectively starts half a sample early
            worst = std::max(worst,
                             std::abs(y - (std::sin(w * t) - std::sin(-w * kTs / 2.0))));
        }
        CHECK(worst <= 2e-3);
    }
}

TEST_CASE("filter application per variant") {
    SUBCASE("gain") {
        SignalFilter f(gain_spec(500.0));
        CHECK(f.step(0.002) == doctest::Approx(1.0).epsilon(1e-15));
    }
    SUBCASE("displacement estimator recovers a 20 Hz displacement from acceleration") {
        SignalFilter f(dispest_spec(1.0));
        const double w = 2.0 * std::numbers::pi * 20.0;
        std::vector<double> z;
        const std::size_t n = 2000; // 5 s
        z.reserve(n);
        for (std::size_t k = 0; k < n; ++k) {
            const double t = static_cast<double>(k) * kTs;
            z.push_back(f.step(-w * w * std::sin(w * t)));
        }
        const auto fit = fit_sinusoid(z, kTs, w, n - 400, n);
        CHECK(std::abs(fit.amplitude() - 1.0) <= 0.1);
        // the realized cascade gain at 20 Hz is 1.0208, not exactly 1
        CHECK(fit.amplitude() ==
              doctest::Approx(std::abs(analytic_gain(dispest_spec(1.0), w)) * w * w)
                  .epsilon(1e-6));
    }
    SUBCASE("displacement estimator washes out a constant bias") {
        SignalFilter f(dispest_spec(500.0));
        double z = 0.0;
        for (int k = 0; k < 4000; ++k)
            z = f.step(0.7);
        CHECK(std::abs(z) <= 1e-9);
    }
    SUBCASE("displacement estimator impulse response stays bounded over 1e5 steps") {
        SignalFilter f(dispest_spec(1.0));
        double worst = 0.0;
        for (int k = 0; k < 100000; ++k) {
            const double y = f.step(k == 0 ? 1.0 : 0.0);
            worst = std::max(worst, std::abs(y));
        }
        CHECK(std::isfinite(worst));
        CHECK(worst <= 1.0);
    }
}

TEST_CASE("linearity of every variant") {
    std::mt19937_64 rng(0x5eed);
    std::uniform_real_distribution<double> dist(-1.0, 1.0);
    const double a = 1.7, b = -0.4;
    for (const FilterSpec& spec : {gain_spec(), lowpass_spec(), dispest_spec()}) {
        SignalFilter fx(spec), fy(spec), fxy(spec);
        double scale = 1.0;
        for (int k = 0; k < 300; ++k) {
            const double x = dist(rng), y = dist(rng);
            const double zx = fx.step(x);
            const double zy = fy.step(y);
            const double zxy = fxy.step(a * x + b * y);
            scale = std::max({scale, std::abs(zx), std::abs(zy)});
            CHECK(std::abs(zxy - (a * zx + b * zy)) <=
                  1e-12 * scale * (std::abs(a) + std::abs(b)));
        }
    }
}

TEST_CASE("realized frequency response matches the analytic transfer function") {
    const std::size_t settle = 3000, fit_len = 400;
    for (const FilterSpec& spec : {gain_spec(1.0), lowpass_spec(), dispest_spec()}) {
        for (double f_hz : {5.0, 20.0, 80.0}) {
            const double w = 2.0 * std::numbers::pi * f_hz;
            SignalFilter filt(spec);
            std::vector<double> out;
            out.reserve(settle + fit_len);
            for (std::size_t k = 0; k < settle + fit_len; ++k)
                out.push_back(filt.step(std::sin(w * static_cast<double>(k) * kTs)));
            const auto fit = fit_sinusoid(out, kTs, w, settle, settle + fit_len);
            const std::complex<double> expect = analytic_gain(spec, w);
            CAPTURE(f_hz);
            CHECK(std::abs(fit.gain() - expect) <= 1e-6 * std::abs(expect));
        }
    }
}

TEST_CASE("filter spec validation") {
    FilterSpec s = lowpass_spec();
    s.zeta_lp = 1.0;
    CHECK_THROWS_AS(SignalFilter{s}, std::invalid_argument);
    s = dispest_spec();
    s.nu_hp = 0.0;
    CHECK_THROWS_AS(SignalFilter{s}, std::invalid_argument);
    s = gain_spec();
    s.K_g = -2.0;
    CHECK_THROWS_AS(SignalFilter{s}, std::invalid_argument);
}
