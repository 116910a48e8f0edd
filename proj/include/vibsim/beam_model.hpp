#ifndef VIBSIM_BEAM_MODEL_HPP
#define VIBSIM_BEAM_MODEL_HPP

#include <Eigen/Dense>
#include <vector>

namespace vibsim {

// Physical description of the clamped cantilever plus Rayleigh damping
// coefficients and the number of lumped elements.
struct BeamParams {
    double L = 0.5;       // beam length [m]
    double b = 0.05;      // cross-section width [m]
    double h = 0.001;     // cross-section height [m]
    double m = 0.07;      // total mass [kg]
    double E = 69e9;      // Young's modulus [N/m^2]
    double alpha = 1.5;   // Rayleigh mass coefficient [1/s]
    double beta = 2.5e-4; // Rayleigh stiffness coefficient [s]
    int n_b = 20;         // number of elements

    void validate() const; // throws std::invalid_argument
};

// Per-element constants derived from BeamParams.
struct LumpedConstants {
    double dL;     // element length [m]
    double dm;     // element mass [kg]
    double K_phi;  // inter-element rotational stiffness [N*m]
    double gamma1; // effective inertia, diagonal [kg]
    double gamma2; // effective inertia, off-diagonal [kg]
};

// M \ddot w + C_R \dot w + K w = f
struct SecondOrderModel {
    Eigen::MatrixXd M;
    Eigen::MatrixXd K;
    Eigen::MatrixXd C_R;

    int n_b() const { return static_cast<int>(M.rows()); }
};

// First-order form \dot x = A x + B_u u + B_d d with x = [w; \dot w].
struct StateSpace {
    Eigen::MatrixXd A;
    Eigen::VectorXd B_u;
    Eigen::VectorXd B_d;
    int i_u = 0; // element index of the control force (1-based)
    int i_d = 0; // element index of the disturbance force (1-based)

    int n_b() const { return static_cast<int>(A.rows()) / 2; }
};

enum class MeasurementKind { Displacement, Acceleration };

// y = C x + D_u u + D_d d for the sensed element i_y.
struct OutputMap {
    MeasurementKind kind = MeasurementKind::Displacement;
    Eigen::RowVectorXd C;
    double D_u = 0.0;
    double D_d = 0.0;
    int i_y = 0; // sensed element index (1-based)
};

// One vibration mode. Real eigenvalues are reported individually with
// damping_ratio = -Re(lambda)/|lambda| (i.e. 1 for a stable real pole);
// complex-conjugate pairs appear once.
struct Mode {
    double frequency_hz;
    double damping_ratio;
};

using ModalSummary = std::vector<Mode>;

LumpedConstants derive_constants(const BeamParams& p);

// Mass matrix is tridiagonal (gamma1 diagonal, halved at the free end,
// gamma2 off-diagonals). Stiffness is the integer pentadiagonal stencil
// scaled once by K_phi/dL^2. C_R = alpha*M + beta*K.
SecondOrderModel assemble_second_order(const LumpedConstants& c, const BeamParams& p);

// M^{-1} products are formed by Cholesky solves; the solve residual must
// satisfy ||M x - e|| <= 1e-10 ||e|| or the construction throws.
StateSpace build_state_space(const SecondOrderModel& s, int i_u, int i_d);

OutputMap output_map(const SecondOrderModel& s, const StateSpace& ss, int i_y,
                     MeasurementKind kind);

// Frequencies |lambda|/(2 pi), damping ratios -Re(lambda)/|lambda|,
// sorted ascending by frequency.
ModalSummary modal_summary(const StateSpace& ss);

} // namespace vibsim

#endif
