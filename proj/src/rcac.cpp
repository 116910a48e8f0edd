#include "vibsim/rcac.hpp"

#include <cmath>
#include <numbers>
#include <stdexcept>

namespace vibsim {

TargetModel build_target_model(double N, int d_f, double f_f, double alpha_f, double T_s) {
    if (N != 1.0 && N != -1.0)
        throw std::invalid_argument("build_target_model: N must be +1 or -1");
    if (d_f < 0)
        throw std::invalid_argument("build_target_model: d_f must be nonnegative");
    if (!(alpha_f > 0.0 && alpha_f <= 1.0))
        throw std::invalid_argument("build_target_model: alpha_f must lie in (0,1]");
    if (!(T_s > 0.0))
        throw std::invalid_argument("build_target_model: T_s must be positive");
    if (!(f_f >= 0.0) || f_f >= 0.5 / T_s)
        throw std::invalid_argument("build_target_model: f_f must lie below Nyquist 1/(2 T_s)");

    TargetModel tm;
    tm.sign = N;
    tm.d_f = d_f;
    tm.f_f = f_f;
    tm.alpha_f = alpha_f;
    tm.T_s = T_s;
    const double w_f = 2.0 * std::numbers::pi * f_f;
    tm.c1 = 2.0 * alpha_f * std::cos(w_f * T_s);
    tm.c2 = alpha_f * alpha_f;

    // q^{d_f} (q^2 - c1 q + c2), highest power first.
    tm.denominator = Eigen::VectorXd::Zero(d_f + 3);
    tm.denominator(0) = 1.0;
    tm.denominator(1) = -tm.c1;
    tm.denominator(2) = tm.c2;
    return tm;
}

TargetModelFilter::TargetModelFilter(const TargetModel& tm, Eigen::Index rows,
                                     Eigen::Index cols)
    : c1_(tm.c1), c2_(tm.c2), sign_(tm.sign) {
    y1_ = Eigen::MatrixXd::Zero(rows, cols);
    y2_ = Eigen::MatrixXd::Zero(rows, cols);
    y_ = Eigen::MatrixXd::Zero(rows, cols);
    inputs_.assign(static_cast<std::size_t>(tm.lag()), Eigen::MatrixXd::Zero(rows, cols));
}

void TargetModelFilter::reset() {
    y1_.setZero();
    y2_.setZero();
    y_.setZero();
    for (auto& x : inputs_)
        x.setZero();
}

const Eigen::MatrixXd& TargetModelFilter::advance() {
    y_ = c1_ * y1_ - c2_ * y2_ + sign_ * inputs_.back();
    y2_.swap(y1_);
    y1_ = y_;
    return y_;
}

void TargetModelFilter::push_input(const Eigen::MatrixXd& x) {
    if (x.rows() != y_.rows() || x.cols() != y_.cols())
        throw std::invalid_argument("TargetModelFilter: sample shape mismatch");
    inputs_.pop_back();
    inputs_.push_front(x);
}

const Eigen::MatrixXd& TargetModelFilter::step(const Eigen::MatrixXd& x) {
    advance();
    push_input(x);
    return y1_;
}

void RcacConfig::validate() const {
    if (l_c < 1 || l_u < 1 || l_z < 1)
        throw std::invalid_argument("RcacConfig: l_c, l_u, l_z must be positive");
    if (!(p0 > 0.0))
        throw std::invalid_argument("RcacConfig: p0 must be positive");
    if (!(u_min < u_max))
        throw std::invalid_argument("RcacConfig: u_min must be below u_max");
    if (R_u.rows() != l_u || R_u.cols() != l_u)
        throw std::invalid_argument("RcacConfig: R_u must be l_u x l_u");
    if ((R_u - R_u.transpose()).norm() > 1e-12 * (1.0 + R_u.norm()))
        throw std::invalid_argument("RcacConfig: R_u must be symmetric");
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(R_u);
    if (es.eigenvalues().minCoeff() < -1e-12 * (1.0 + R_u.norm()))
        throw std::invalid_argument("RcacConfig: R_u must be positive semidefinite");
    if (l_u != l_z)
        throw std::invalid_argument("RcacConfig: the scalar target model requires l_u == l_z");
}

RcacConfig RcacConfig::siso(int l_c, double p0, double R_u, double u_max,
                            const TargetModel& target) {
    RcacConfig cfg;
    cfg.l_c = l_c;
    cfg.l_u = 1;
    cfg.l_z = 1;
    cfg.p0 = p0;
    cfg.R_u = Eigen::MatrixXd::Constant(1, 1, R_u);
    cfg.u_min = -u_max;
    cfg.u_max = u_max;
    cfg.target = target;
    return cfg;
}

double saturate(double u, double u_min, double u_max) {
    if (u > u_max) return u_max;
    if (u < u_min) return u_min;
    return u;
}

Eigen::VectorXd saturate(const Eigen::VectorXd& u, double u_min, double u_max) {
    return u.cwiseMin(u_max).cwiseMax(u_min);
}

Eigen::MatrixXd make_regressor(const std::deque<Eigen::VectorXd>& u_hist,
                               const std::deque<Eigen::VectorXd>& z_hist,
                               const RcacConfig& cfg) {
    const int l_c = cfg.l_c, l_u = cfg.l_u, l_z = cfg.l_z;
    Eigen::RowVectorXd w = Eigen::RowVectorXd::Zero(l_c * (l_u + l_z));
    for (int i = 0; i < l_c; ++i) {
        if (i < static_cast<int>(u_hist.size()))
            w.segment(i * l_u, l_u) = u_hist[static_cast<std::size_t>(i)].transpose();
        if (i < static_cast<int>(z_hist.size()))
            w.segment(l_c * l_u + i * l_z, l_z) =
                z_hist[static_cast<std::size_t>(i)].transpose();
    }
    // w (x) I_{l_u}
    Eigen::MatrixXd phi = Eigen::MatrixXd::Zero(l_u, cfg.l_theta());
    for (int j = 0; j < w.size(); ++j)
        for (int a = 0; a < l_u; ++a)
            phi(a, j * l_u + a) = w(j);
    return phi;
}

void rls_update(Eigen::VectorXd& theta, Eigen::MatrixXd& P,
                const Eigen::MatrixXd& phi_f, const Eigen::MatrixXd& phi,
                const Eigen::VectorXd& u_f, const Eigen::VectorXd& z,
                const Eigen::MatrixXd& R_u, RlsDiagnostics* diag) {
    const Eigen::Index l_z = phi_f.rows();
    const Eigen::Index l_u = phi.rows();
    const Eigen::Index l_theta = phi.cols();
    const Eigen::Index s = l_z + l_u;

    Eigen::MatrixXd stacked(s, l_theta);
    stacked.topRows(l_z) = phi_f;
    stacked.bottomRows(l_u) = phi;

    // Rbar = diag(I_{l_z}, R_u) and its symmetric square root.
    Eigen::MatrixXd Rbar = Eigen::MatrixXd::Identity(s, s);
    Rbar.bottomRightCorner(l_u, l_u) = R_u;
    Eigen::MatrixXd Rsqrt = Eigen::MatrixXd::Identity(s, s);
    {
        Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(R_u);
        if (es.info() != Eigen::Success)
            throw std::runtime_error("rls_update: R_u eigensolve failed");
        Eigen::VectorXd ev = es.eigenvalues().cwiseMax(0.0);
        Rsqrt.bottomRightCorner(l_u, l_u) =
            es.eigenvectors() * ev.cwiseSqrt().asDiagonal() * es.eigenvectors().transpose();
    }

    // P <- P - (W Phi P)^T (I + W Phi P Phi^T W)^{-1} (W Phi P), W = Rbar^{1/2}.
    Eigen::MatrixXd T = Rsqrt * stacked * P; // s x l_theta
    Eigen::MatrixXd inner = Eigen::MatrixXd::Identity(s, s) + T * stacked.transpose() * Rsqrt;
    inner = 0.5 * (inner + inner.transpose());
    Eigen::LLT<Eigen::MatrixXd> llt(inner);
    if (llt.info() != Eigen::Success)
        throw std::runtime_error("rls_update: inner update matrix is singular");
    P.noalias() -= T.transpose() * llt.solve(T);

    const double p_norm = P.norm();
    const double asym = (p_norm > 0.0) ? (P - P.transpose()).norm() / p_norm : 0.0;
    if (diag) {
        diag->worst_asymmetry = std::max(diag->worst_asymmetry, asym);
        if (asym > 1e-10)
            ++diag->symmetrizations;
    }
    P = 0.5 * (P + P.transpose()).eval();

    // theta <- theta - P_{k+1} Phi^T Rbar [z - (u_f - phi_f theta); phi theta]
    Eigen::VectorXd residual(s);
    residual.head(l_z) = z - (u_f - phi_f * theta);
    residual.tail(l_u) = phi * theta;
    theta.noalias() -= P * (stacked.transpose() * (Rbar * residual));
}

Controller::Controller(RcacConfig cfg)
    : cfg_(std::move(cfg)),
      theta_(Eigen::VectorXd::Zero(cfg_.l_theta())),
      P_(),
      phi_filter_(cfg_.target, cfg_.l_u, cfg_.l_theta()),
      u_filter_(cfg_.target, cfg_.l_u, 1) {
    cfg_.validate();
    P_ = cfg_.p0 * Eigen::MatrixXd::Identity(cfg_.l_theta(), cfg_.l_theta());
    const Eigen::VectorXd zero_u = Eigen::VectorXd::Zero(cfg_.l_u);
    const Eigen::VectorXd zero_z = Eigen::VectorXd::Zero(cfg_.l_z);
    u_hist_.assign(static_cast<std::size_t>(cfg_.l_c), zero_u);
    z_hist_.assign(static_cast<std::size_t>(cfg_.l_c), zero_z);
}

void Controller::push_history(const Eigen::VectorXd& u, const Eigen::VectorXd& z) {
    u_hist_.pop_back();
    u_hist_.push_front(u);
    z_hist_.pop_back();
    z_hist_.push_front(z);
}

void Controller::observe(const Eigen::VectorXd& z) {
    if (z.size() != cfg_.l_z)
        throw std::invalid_argument("Controller::observe: z dimension mismatch");
    push_history(Eigen::VectorXd::Zero(cfg_.l_u), z);
}

void Controller::observe_scalar(double z) {
    observe(Eigen::VectorXd::Constant(1, z));
}

Eigen::VectorXd Controller::step(const Eigen::VectorXd& z) {
    if (z.size() != cfg_.l_z)
        throw std::invalid_argument("Controller::step: z dimension mismatch");

    Eigen::MatrixXd phi = make_regressor(u_hist_, z_hist_, cfg_);

    const Eigen::MatrixXd& phi_f = phi_filter_.step(phi);
    const Eigen::MatrixXd& u_f_mat = u_filter_.advance();

    if (adapt_)
        rls_update(theta_, P_, phi_f, phi, u_f_mat.col(0), z, cfg_.R_u, &diag_);

    Eigen::VectorXd u_c = phi * theta_;
    Eigen::VectorXd u = saturate(u_c, cfg_.u_min, cfg_.u_max);
    if ((u - u_c).cwiseAbs().maxCoeff() > 0.0)
        ++saturated_;
    ++steps_;

    u_filter_.push_input(u);
    push_history(u, z);
    return u;
}

double Controller::step_scalar(double z) {
    return step(Eigen::VectorXd::Constant(1, z))(0);
}

double Controller::saturation_fraction() const {
    return steps_ == 0 ? 0.0 : static_cast<double>(saturated_) / static_cast<double>(steps_);
}

void Controller::set_theta(const Eigen::VectorXd& theta) {
    if (theta.size() != cfg_.l_theta())
        throw std::invalid_argument("Controller::set_theta: dimension mismatch");
    theta_ = theta;
}

} // namespace vibsim
