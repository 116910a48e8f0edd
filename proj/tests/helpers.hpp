#ifndef VIBSIM_TESTS_HELPERS_HPP
#define VIBSIM_TESTS_HELPERS_HPP

#include <cmath>
#include <complex>
#include <numbers>
#include <vector>

#include "vibsim/beam_model.hpp"

namespace vibsim::test {

inline BeamParams paper_beam() {
    return BeamParams{}; // defaults carry the published parameter set
}

struct ModelChain {
    LumpedConstants lumped;
    SecondOrderModel model;
    StateSpace ss;
};

inline ModelChain paper_chain(int i_u = 12, int i_d = 5, int n_b = 20, double alpha = 1.5,
                              double beta = 2.5e-4) {
    BeamParams p = paper_beam();
    p.n_b = n_b;
    p.alpha = alpha;
    p.beta = beta;
    ModelChain c;
    c.lumped = derive_constants(p);
    c.model = assemble_second_order(c.lumped, p);
    c.ss = build_state_space(c.model, i_u, i_d);
    return c;
}

// Least-squares fit y ~ a sin(w t) + b cos(w t) + c over [from, to).
// For input sin(w t), (a, b) is the complex frequency response (Re, Im).
struct SinusoidFit {
    double a, b, c;
    double amplitude() const { return std::hypot(a, b); }
    std::complex<double> gain() const { return {a, b}; }
};

inline SinusoidFit fit_sinusoid(const std::vector<double>& y, double T_s, double omega,
                                std::size_t from, std::size_t to) {
    double s_ss = 0, s_cc = 0, s_sc = 0, s_s = 0, s_c = 0;
    double r_s = 0, r_c = 0, r_1 = 0;
    std::size_t n = 0;
    for (std::size_t k = from; k < to; ++k) {
        const double t = static_cast<double>(k) * T_s;
        const double s = std::sin(omega * t), cc = std::cos(omega * t);
        s_ss += s * s;
        s_cc += cc * cc;
        s_sc += s * cc;
        s_s += s;
        s_c += cc;
        r_s += y[k] * s;
        r_c += y[k] * cc;
        r_1 += y[k];
        ++n;
    }
    Eigen::Matrix3d A;
    A << s_ss, s_sc, s_s, s_sc, s_cc, s_c, s_s, s_c, static_cast<double>(n);
    Eigen::Vector3d rhs(r_s, r_c, r_1);
    Eigen::Vector3d sol = A.ldlt().solve(rhs);
    return SinusoidFit{sol(0), sol(1), sol(2)};
}

// Impulse response of a rational transfer function by polynomial long
// division: num/den in descending powers of q, den monic.
inline std::vector<double> long_division(const std::vector<double>& num,
                                         const std::vector<double>& den,
                                         std::size_t terms) {
    // Shift to a series in q^{-1}: relative degree leading zeros first.
    const std::size_t rel = den.size() - num.size();
    std::vector<double> coeffs(terms, 0.0);
    std::vector<double> rem(terms + den.size(), 0.0);
    for (std::size_t i = 0; i < num.size(); ++i)
        rem[rel + i] = num[i];
    for (std::size_t k = 0; k < terms; ++k) {
        const double q = rem[k]; // den is monic
        coeffs[k] = q;
        if (q != 0.0)
            for (std::size_t j = 0; j < den.size(); ++j)
                rem[k + j] -= q * den[j];
    }
    return coeffs;
}

} // namespace vibsim::test

#endif
