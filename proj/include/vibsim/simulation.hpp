#ifndef VIBSIM_SIMULATION_HPP
#define VIBSIM_SIMULATION_HPP

#include <Eigen/Dense>
#include <vector>

#include "vibsim/beam_model.hpp"
#include "vibsim/rcac.hpp"
#include "vibsim/signal_filters.hpp"

namespace vibsim {

enum class SimMode { OpenLoop, ClosedLoop };

// Full parameterization of one sampled-data experiment.
struct SimConfig {
    StateSpace ss;
    OutputMap om;          // feedback measurement map
    double f_dist = 20.0;  // disturbance frequency [Hz]
    double T_sim = 1.25e-5; // integration substep [s]
    double T_s = 2.5e-3;   // controller period [s]
    double t_end = 30.0;
    double t_enable = 2.5; // +inf keeps the controller off for the whole run
    RcacConfig controller;
    FilterSpec filter;
    SimMode mode = SimMode::ClosedLoop;
    bool record_theta = true;

    int substeps_per_tick() const;
    void validate() const;
};

// Uniformly sampled trajectories at the controller period.
struct SimRecord {
    std::vector<double> t;
    std::vector<double> y_disp; // displacement at i_y [m]
    std::vector<double> y_acc;  // acceleration at i_y [m/s^2]
    std::vector<double> u;      // applied control [N]
    std::vector<double> d;      // disturbance [N]
    std::vector<double> z;      // performance variable
    Eigen::MatrixXd theta_history; // one row per tick (0 columns when not recorded)
    double saturation_fraction = 0.0;

    std::size_t ticks() const { return t.size(); }
};

// d(t) = sin(2 pi f_dist t)
double disturbance(double t, double f_dist);

// Classical RK4 on xdot = A x + B_u u + B_d d(t) with preallocated stages.
// u is held constant over the substep; d is evaluated at the stage times.
class Rk4Integrator {
  public:
    explicit Rk4Integrator(const StateSpace& ss);
    void substep(Eigen::VectorXd& x, double u_held, double t, double h, double f_dist);

  private:
    const StateSpace* ss_;
    Eigen::VectorXd k1_, k2_, k3_, k4_, xt_;

    void deriv(const Eigen::VectorXd& x, double u, double t, double f_dist,
               Eigen::VectorXd& out);
};

Eigen::VectorXd rk4_substep(const StateSpace& ss, const Eigen::VectorXd& x, double u_held,
                            double t, double h, double f_dist);

// n_sub chained RK4 substeps of length T_sim covering one controller period.
Eigen::VectorXd integrate_control_period(const StateSpace& ss, Eigen::VectorXd x,
                                         double u_held, double t0, double f_dist,
                                         int n_sub, double T_sim);

double sample_output(const OutputMap& om, const Eigen::VectorXd& x, double u, double d);

// Runs the closed (or open) loop from rest: per tick, sample y, form
// e = -y, condition it to z, step or bypass the controller, hold u for one
// period and integrate. Fully deterministic. Throws on non-finite signals,
// naming the offending tick.
SimRecord run_simulation(const SimConfig& cfg);

} // namespace vibsim

#endif
