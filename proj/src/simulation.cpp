#include "vibsim/simulation.hpp"

#include <cmath>
#include <numbers>
#include <stdexcept>
#include <string>

namespace vibsim {

int SimConfig::substeps_per_tick() const {
    const double ratio = T_s / T_sim;
    const int n = static_cast<int>(std::lround(ratio));
    if (n < 1 || std::abs(ratio - n) > 1e-9 * ratio)
        throw std::invalid_argument("SimConfig: T_s must be an integer multiple of T_sim");
    return n;
}

void SimConfig::validate() const {
    if (!(T_sim > 0.0) || !(T_s > 0.0) || !(t_end > 0.0))
        throw std::invalid_argument("SimConfig: T_sim, T_s, t_end must be positive");
    (void)substeps_per_tick();
    if (!(f_dist >= 0.0) || f_dist >= 0.5 / T_s)
        throw std::invalid_argument("SimConfig: f_dist must lie below Nyquist 1/(2 T_s)");
    if (!std::isinf(t_enable) && !(t_enable < t_end))
        throw std::invalid_argument("SimConfig: t_enable must precede t_end");
    if (ss.A.rows() == 0 || ss.A.rows() != ss.A.cols() || ss.A.rows() % 2 != 0)
        throw std::invalid_argument("SimConfig: state space not initialized");
    if (om.C.size() != ss.A.rows())
        throw std::invalid_argument("SimConfig: output map does not match state dimension");
}

double disturbance(double t, double f_dist) {
    return std::sin(2.0 * std::numbers::pi * f_dist * t);
}

Rk4Integrator::Rk4Integrator(const StateSpace& ss) : ss_(&ss) {
    const Eigen::Index n = ss.A.rows();
    k1_.resize(n);
    k2_.resize(n);
    k3_.resize(n);
    k4_.resize(n);
    xt_.resize(n);
}

void Rk4Integrator::deriv(const Eigen::VectorXd& x, double u, double t, double f_dist,
                          Eigen::VectorXd& out) {
    out.noalias() = ss_->A * x;
    out.noalias() += ss_->B_u * u;
    out.noalias() += ss_->B_d * disturbance(t, f_dist);
}

void Rk4Integrator::substep(Eigen::VectorXd& x, double u_held, double t, double h,
                            double f_dist) {
    deriv(x, u_held, t, f_dist, k1_);
    xt_ = x + (h / 2.0) * k1_;
    deriv(xt_, u_held, t + h / 2.0, f_dist, k2_);
    xt_ = x + (h / 2.0) * k2_;
    deriv(xt_, u_held, t + h / 2.0, f_dist, k3_);
    xt_ = x + h * k3_;
    deriv(xt_, u_held, t + h, f_dist, k4_);
    x += (h / 6.0) * (k1_ + 2.0 * k2_ + 2.0 * k3_ + k4_);
}

Eigen::VectorXd rk4_substep(const StateSpace& ss, const Eigen::VectorXd& x, double u_held,
                            double t, double h, double f_dist) {
    Rk4Integrator rk(ss);
    Eigen::VectorXd out = x;
    rk.substep(out, u_held, t, h, f_dist);
    return out;
}

Eigen::VectorXd integrate_control_period(const StateSpace& ss, Eigen::VectorXd x,
                                         double u_held, double t0, double f_dist,
                                         int n_sub, double T_sim) {
    Rk4Integrator rk(ss);
    for (int s = 0; s < n_sub; ++s)
        rk.substep(x, u_held, t0 + s * T_sim, T_sim, f_dist);
    return x;
}

SimRecord run_simulation(const SimConfig& cfg) {
    cfg.validate();
    const int n = cfg.ss.n_b();
    const int n_sub = cfg.substeps_per_tick();
    const long n_ticks = std::lround(std::floor(cfg.t_end / cfg.T_s));
    const int i_y = cfg.om.i_y;
    if (i_y < 1 || i_y > n)
        throw std::invalid_argument("run_simulation: i_y out of range");

    // Acceleration channel at i_y is always recorded, whatever feeds back.
    const Eigen::RowVectorXd acc_row = cfg.ss.A.row(n + i_y - 1);
    const double acc_du = cfg.ss.B_u(n + i_y - 1);
    const double acc_dd = cfg.ss.B_d(n + i_y - 1);

    Controller controller(cfg.controller);
    SignalFilter filter(cfg.filter);
    Rk4Integrator rk(cfg.ss);

    SimRecord rec;
    const std::size_t len = static_cast<std::size_t>(n_ticks) + 1;
    rec.t.resize(len);
    rec.y_disp.resize(len);
    rec.y_acc.resize(len);
    rec.u.resize(len);
    rec.d.resize(len);
    rec.z.resize(len);
    if (cfg.record_theta && cfg.mode == SimMode::ClosedLoop)
        rec.theta_history.setZero(static_cast<Eigen::Index>(len), cfg.controller.l_theta());

    Eigen::VectorXd x = Eigen::VectorXd::Zero(2 * n);
    double u_held = 0.0; // value the ZOH is holding when the sampler fires

    for (long k = 0; k <= n_ticks; ++k) {
        const double t = k * cfg.T_s;
        const double d_k = disturbance(t, cfg.f_dist);
        const double y_k = sample_output(cfg.om, x, u_held, d_k);
        const double e_k = -y_k; // r = 0
        const double z_k = filter.step(e_k);

        double u_k = 0.0;
        const bool enabled = cfg.mode == SimMode::ClosedLoop && t >= cfg.t_enable;
        if (enabled)
            u_k = controller.step_scalar(z_k);
        else
            controller.observe_scalar(z_k);

        rec.t[static_cast<std::size_t>(k)] = t;
        rec.y_disp[static_cast<std::size_t>(k)] = x(i_y - 1);
        rec.y_acc[static_cast<std::size_t>(k)] =
            acc_row.dot(x) + acc_du * u_held + acc_dd * d_k;
        rec.u[static_cast<std::size_t>(k)] = u_k;
        rec.d[static_cast<std::size_t>(k)] = d_k;
        rec.z[static_cast<std::size_t>(k)] = z_k;
        if (rec.theta_history.size() > 0)
            rec.theta_history.row(k) = controller.theta().transpose();

        if (!std::isfinite(y_k) || !std::isfinite(z_k) || !std::isfinite(u_k))
            throw std::runtime_error("run_simulation: non-finite signal at tick " +
                                     std::to_string(k) + " (t=" + std::to_string(t) + " s)");

        if (k < n_ticks) {
            for (int s = 0; s < n_sub; ++s)
                rk.substep(x, u_k, t + s * cfg.T_sim, cfg.T_sim, cfg.f_dist);
            u_held = u_k;
            if (!x.allFinite())
                throw std::runtime_error("run_simulation: non-finite state after tick " +
                                         std::to_string(k) + " (t=" + std::to_string(t) +
                                         " s); the integrator step is likely too large");
        }
    }

    rec.saturation_fraction = controller.saturation_fraction();
    return rec;
}

double sample_output(const OutputMap& om, const Eigen::VectorXd& x, double u, double d) {
    if (om.C.size() != x.size())
        throw std::invalid_argument("sample_output: dimension mismatch");
    return om.C.dot(x) + om.D_u * u + om.D_d * d;
}

} // namespace vibsim
