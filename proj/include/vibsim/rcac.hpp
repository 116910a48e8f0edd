#ifndef VIBSIM_RCAC_HPP
#define VIBSIM_RCAC_HPP

#include <Eigen/Dense>
#include <deque>

namespace vibsim {

// Target model G_f(q) = N / (q^{d_f} (q^2 - 2 alpha_f cos(w_f T_s) q + alpha_f^2)).
// Realized as y_k = c1 y_{k-1} - c2 y_{k-2} + N x_{k-(d_f+2)}.
struct TargetModel {
    double sign = -1.0; // N, +1 or -1
    int d_f = 0;        // delay exponent
    double f_f = 0.0;   // encoded disturbance frequency [Hz]
    double alpha_f = 1.0;
    double T_s = 0.0;
    double c1 = 0.0; // 2 alpha_f cos(w_f T_s)
    double c2 = 0.0; // alpha_f^2
    Eigen::VectorXd denominator; // monic, degree d_f + 2

    int lag() const { return d_f + 2; }
};

TargetModel build_target_model(double N, int d_f, double f_f, double alpha_f, double T_s);

// Runs G_f elementwise over a fixed-shape matrix signal (a 1x1 matrix for
// u_f, an l_u x l_theta matrix for phi_f). Output at step k depends only on
// inputs up to step k - (d_f+2), so the output can be advanced before the
// newest input sample exists.
class TargetModelFilter {
  public:
    TargetModelFilter(const TargetModel& tm, Eigen::Index rows, Eigen::Index cols);

    // Computes y_k from the recorded history and shifts the output registers.
    const Eigen::MatrixXd& advance();
    // Appends x_k to the input delay line.
    void push_input(const Eigen::MatrixXd& x);
    // advance() then push_input(x).
    const Eigen::MatrixXd& step(const Eigen::MatrixXd& x);

    void reset();

  private:
    double c1_, c2_, sign_;
    std::deque<Eigen::MatrixXd> inputs_; // x_{k-1}, ..., x_{k-lag}
    Eigen::MatrixXd y1_, y2_, y_;
};

struct RcacConfig {
    int l_c = 20; // controller window length
    int l_u = 1;  // input dimension
    int l_z = 1;  // performance dimension
    double p0 = 1.0;
    Eigen::MatrixXd R_u; // l_u x l_u control weighting, positive semidefinite
    double u_min = -2.5;
    double u_max = 2.5;
    TargetModel target;

    int l_theta() const { return l_c * l_u * (l_u + l_z); }
    void validate() const;

    static RcacConfig siso(int l_c, double p0, double R_u, double u_max,
                           const TargetModel& target);
};

double saturate(double u, double u_min, double u_max);
Eigen::VectorXd saturate(const Eigen::VectorXd& u, double u_min, double u_max);

// phi_k = [u_{k-1}^T ... u_{k-l_c}^T  z_{k-1}^T ... z_{k-l_c}^T] (x) I_{l_u},
// with histories ordered newest first. Short histories are zero-padded.
Eigen::MatrixXd make_regressor(const std::deque<Eigen::VectorXd>& u_hist,
                               const std::deque<Eigen::VectorXd>& z_hist,
                               const RcacConfig& cfg);

struct RlsDiagnostics {
    long symmetrizations = 0;   // asymmetry corrections beyond tolerance
    double worst_asymmetry = 0; // largest relative asymmetry seen pre-correction
};

// One RLS step over the stacked regressor [phi_f; phi] with weighting
// Rbar = diag(I_{l_z}, R_u). Theta becomes the minimizer of the cumulative
// retrospective cost over the data seen so far. The covariance update runs
// through a square-root weighting so only an (l_z+l_u)-sized SPD system is
// solved; R_u may be singular.
void rls_update(Eigen::VectorXd& theta, Eigen::MatrixXd& P,
                const Eigen::MatrixXd& phi_f, const Eigen::MatrixXd& phi,
                const Eigen::VectorXd& u_f, const Eigen::VectorXd& z,
                const Eigen::MatrixXd& R_u, RlsDiagnostics* diag = nullptr);

// Retrospective cost adaptive controller in its sampled-data form.
// While disabled, feed measurements through observe(): the u-history
// accumulates zeros and the z-history accumulates the measured z, so the
// regressor is warm when the controller is first stepped. The G_f filter
// states stay at zero until the first step().
class Controller {
  public:
    explicit Controller(RcacConfig cfg);

    // One enabled controller tick: build phi, advance the G_f filters,
    // RLS-update theta, emit u = sigma(phi theta), push buffers.
    Eigen::VectorXd step(const Eigen::VectorXd& z);
    double step_scalar(double z);

    // Disabled tick: records z and a zero control, nothing else moves.
    void observe(const Eigen::VectorXd& z);
    void observe_scalar(double z);

    const RcacConfig& config() const { return cfg_; }
    const Eigen::VectorXd& theta() const { return theta_; }
    const Eigen::MatrixXd& covariance() const { return P_; }
    const std::deque<Eigen::VectorXd>& u_history() const { return u_hist_; }
    const std::deque<Eigen::VectorXd>& z_history() const { return z_hist_; }
    long steps_taken() const { return steps_; }
    long saturation_count() const { return saturated_; }
    double saturation_fraction() const;
    const RlsDiagnostics& rls_diagnostics() const { return diag_; }

    // Test and warm-start hooks.
    void set_theta(const Eigen::VectorXd& theta);
    void set_adaptation(bool enabled) { adapt_ = enabled; }

  private:
    RcacConfig cfg_;
    Eigen::VectorXd theta_;
    Eigen::MatrixXd P_;
    std::deque<Eigen::VectorXd> u_hist_, z_hist_;
    TargetModelFilter phi_filter_, u_filter_;
    RlsDiagnostics diag_;
    bool adapt_ = true;
    long steps_ = 0;
    long saturated_ = 0;

    void push_history(const Eigen::VectorXd& u, const Eigen::VectorXd& z);
};

} // namespace vibsim

#endif
