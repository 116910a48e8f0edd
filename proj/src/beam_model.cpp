#include "vibsim/beam_model.hpp"

#include <algorithm>
#include <cmath>
#include <complex>
#include <numbers>
#include <stdexcept>
#include <string>

namespace vibsim {

void BeamParams::validate() const {
    if (!(L > 0.0) || !(b > 0.0) || !(h > 0.0) || !(m > 0.0) || !(E > 0.0))
        throw std::invalid_argument("BeamParams: L, b, h, m, E must be positive");
    if (alpha < 0.0 || beta < 0.0)
        throw std::invalid_argument("BeamParams: alpha and beta must be nonnegative");
    if (n_b < 5)
        throw std::invalid_argument("BeamParams: n_b must be at least 5, got " +
                                    std::to_string(n_b));
}

LumpedConstants derive_constants(const BeamParams& p) {
    p.validate();
    LumpedConstants c;
    c.dL = p.L / p.n_b;
    c.dm = p.m / p.n_b;
    c.K_phi = p.E * p.b * p.h * p.h * p.h / (4.0 * c.dL);
    const double r2 = (p.h / c.dL) * (p.h / c.dL);
    c.gamma1 = c.dm / 2.0 * (1.0 + (1.0 + r2) / 3.0);
    c.gamma2 = c.dm / 4.0 * (1.0 - (1.0 + r2) / 3.0);
    return c;
}

SecondOrderModel assemble_second_order(const LumpedConstants& c, const BeamParams& p) {
    p.validate();
    const int n = p.n_b;

    SecondOrderModel s;
    s.M = Eigen::MatrixXd::Zero(n, n);
    for (int i = 0; i < n; ++i) {
        s.M(i, i) = c.gamma1;
        if (i + 1 < n) {
            s.M(i, i + 1) = c.gamma2;
            s.M(i + 1, i) = c.gamma2;
        }
    }
    s.M(n - 1, n - 1) = c.gamma1 / 2.0;

    // Integer stencil first, one scale at the end, so K is exactly symmetric.
    Eigen::MatrixXd stencil = Eigen::MatrixXd::Zero(n, n);
    for (int i = 0; i < n; ++i) {
        if (i == 0) {
            stencil(0, 0) = 6; stencil(0, 1) = -4; stencil(0, 2) = 1;
        } else if (i == 1) {
            stencil(1, 0) = -4; stencil(1, 1) = 6; stencil(1, 2) = -4; stencil(1, 3) = 1;
        } else if (i == n - 2) {
            stencil(i, i - 2) = 1; stencil(i, i - 1) = -4;
            stencil(i, i) = 5; stencil(i, i + 1) = -2;
        } else if (i == n - 1) {
            stencil(i, i - 2) = 1; stencil(i, i - 1) = -2; stencil(i, i) = 1;
        } else {
            stencil(i, i - 2) = 1; stencil(i, i - 1) = -4; stencil(i, i) = 6;
            stencil(i, i + 1) = -4; stencil(i, i + 2) = 1;
        }
    }
    s.K = (c.K_phi / (c.dL * c.dL)) * stencil;
    s.C_R = p.alpha * s.M + p.beta * s.K;
    return s;
}

StateSpace build_state_space(const SecondOrderModel& s, int i_u, int i_d) {
    const int n = s.n_b();
    if (i_u < 1 || i_u > n || i_d < 1 || i_d > n)
        throw std::invalid_argument("build_state_space: element index out of range");

    Eigen::LLT<Eigen::MatrixXd> llt(s.M);
    if (llt.info() != Eigen::Success)
        throw std::runtime_error("build_state_space: mass matrix is not positive definite");

    auto solve_checked = [&](const Eigen::MatrixXd& rhs) {
        Eigen::MatrixXd x = llt.solve(rhs);
        const double resid = (s.M * x - rhs).norm();
        if (resid > 1e-10 * rhs.norm())
            throw std::runtime_error("build_state_space: mass solve residual too large");
        return x;
    };

    StateSpace ss;
    ss.i_u = i_u;
    ss.i_d = i_d;
    ss.A = Eigen::MatrixXd::Zero(2 * n, 2 * n);
    ss.A.topRightCorner(n, n) = Eigen::MatrixXd::Identity(n, n);
    ss.A.bottomLeftCorner(n, n) = -solve_checked(s.K);
    ss.A.bottomRightCorner(n, n) = -solve_checked(s.C_R);

    Eigen::VectorXd e_u = Eigen::VectorXd::Unit(n, i_u - 1);
    Eigen::VectorXd e_d = Eigen::VectorXd::Unit(n, i_d - 1);
    ss.B_u = Eigen::VectorXd::Zero(2 * n);
    ss.B_d = Eigen::VectorXd::Zero(2 * n);
    ss.B_u.tail(n) = solve_checked(e_u);
    ss.B_d.tail(n) = solve_checked(e_d);
    return ss;
}

OutputMap output_map(const SecondOrderModel& s, const StateSpace& ss, int i_y,
                     MeasurementKind kind) {
    const int n = s.n_b();
    if (ss.A.rows() != 2 * n)
        throw std::invalid_argument("output_map: model and state space disagree on n_b");
    if (i_y < 1 || i_y > n)
        throw std::invalid_argument("output_map: i_y out of range");

    OutputMap om;
    om.kind = kind;
    om.i_y = i_y;
    if (kind == MeasurementKind::Displacement) {
        om.C = Eigen::RowVectorXd::Zero(2 * n);
        om.C(i_y - 1) = 1.0;
        om.D_u = 0.0;
        om.D_d = 0.0;
    } else {
        // [0 e^T] A picks the acceleration row; likewise for the feedthroughs.
        om.C = ss.A.row(n + i_y - 1);
        om.D_u = ss.B_u(n + i_y - 1);
        om.D_d = ss.B_d(n + i_y - 1);
    }
    return om;
}

ModalSummary modal_summary(const StateSpace& ss) {
    const Eigen::Index dim = ss.A.rows();
    if (dim == 0 || dim % 2 != 0 || ss.A.cols() != dim)
        throw std::invalid_argument("modal_summary: A must be square with even dimension");
    const Eigen::Index n = dim / 2;

    // Equilibrate the two block scales before the eigensolve; the diagonal
    // similarity leaves the spectrum unchanged.
    double scale = std::sqrt(std::max(ss.A.bottomLeftCorner(n, n).cwiseAbs().maxCoeff(), 1.0));
    Eigen::VectorXd d(dim);
    d.head(n).setConstant(scale);
    d.tail(n).setConstant(1.0);
    Eigen::MatrixXd balanced = d.asDiagonal() * ss.A * d.cwiseInverse().asDiagonal();

    Eigen::EigenSolver<Eigen::MatrixXd> es(balanced, /*computeEigenvectors=*/false);
    if (es.info() != Eigen::Success)
        throw std::runtime_error("modal_summary: eigensolver failed to converge");

    ModalSummary modes;
    for (Eigen::Index i = 0; i < dim; ++i) {
        const std::complex<double> lambda = es.eigenvalues()(i);
        const double mag = std::abs(lambda);
        if (mag == 0.0)
            continue;
        if (lambda.imag() < -1e-9 * mag)
            continue; // conjugate partner already reported
        Mode mode;
        mode.frequency_hz = mag / (2.0 * std::numbers::pi);
        mode.damping_ratio = -lambda.real() / mag;
        modes.push_back(mode);
    }
    std::sort(modes.begin(), modes.end(),
              [](const Mode& a, const Mode& b) { return a.frequency_hz < b.frequency_hz; });
    return modes;
}

} // namespace vibsim
