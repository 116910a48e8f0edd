#ifndef VIBSIM_EXPERIMENTS_HPP
#define VIBSIM_EXPERIMENTS_HPP

#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "vibsim/config.hpp"
#include "vibsim/simulation.hpp"

namespace vibsim {

inline constexpr std::string_view kVersion = "0.1.0";

enum class FeedbackCase { Disp, AccLowPass, AccDispEst };

std::string to_string(FeedbackCase c);
FeedbackCase feedback_case_from_string(const std::string& s);

// Steady-state attenuation of one open/closed pair.
struct Metric {
    double y_ol = 0.0;
    double y_cl = 0.0;
    double ratio = 0.0;          // y_ol / y_cl
    double attenuation_db = 0.0; // 20 log10(ratio)
    bool y_cl_zero = false;      // attenuation reported as +inf
};

// max |value| over samples with t >= t.back() - window.
double steady_state_amplitude(const std::vector<double>& series,
                              const std::vector<double>& t, double window = 0.5);

double attenuation_db(double y_ol, double y_cl);
Metric make_metric(double y_ol, double y_cl);

struct SpectrumPoint {
    double frequency_hz;
    double magnitude;
};

// Hann-windowed single-sided DFT amplitude of a uniformly sampled series,
// bins up to Nyquist. Normalized so an on-bin unit sinusoid reads ~1.
std::vector<SpectrumPoint> magnitude_spectrum(const std::vector<double>& series, double T_s);

// One experiment cell, fully resolved.
struct ExperimentConfig {
    BeamParams beam;
    FeedbackCase fb_case = FeedbackCase::Disp;
    FilterVariant filter_variant = FilterVariant::Gain;
    int i_u = 12;
    int i_d = 5;
    int i_y = 20;
    double f_dist = 20.0;
    int d_f = 5;
    double R_u = 1.0;
    int l_c = 20;
    double p0 = 1.0;
    double N = -1.0;
    double alpha_f = 0.95;
    double f_f = 0.0; // 0 -> track f_dist
    double u_max = 2.5;
    double u_min = -2.5;
    double K_g = 500.0;
    double omega_lp = 0.0;
    double zeta_lp = 0.0;
    double nu_hp = 0.0;
    double T_sim = 1.25e-5;
    double T_s = 2.5e-3;
    double t_end = 30.0;
    double t_enable = 2.5;
    bool open_loop = false;

    double resolved_f_f() const { return f_f > 0.0 ? f_f : f_dist; }
};

// Per-case hyperparameters fixed across a table.
ExperimentConfig case_preset(FeedbackCase c);

// (d_f, R_u) from the bundled per-case tables, when (f_dist, i_u) is a
// table cell.
std::optional<std::pair<int, double>> lookup_table_cell(FeedbackCase c, double f_dist,
                                                        int i_u);

SimConfig build_sim_config(const ExperimentConfig& cfg);

struct SweepSpec {
    ExperimentConfig base;
    std::vector<double> f_dist; // rows
    std::vector<int> i_u;       // columns
    std::vector<std::vector<int>> d_f;    // [row][col]
    std::vector<std::vector<double>> R_u; // [row][col]
    int workers = 1;

    void validate() const;
};

// The full Table sweep for one feedback case.
SweepSpec sweep_preset(FeedbackCase c);

struct CellResult {
    double f_dist = 0.0;
    int i_u = 0;
    int d_f = 0;
    double R_u = 0.0;
    Metric metric;
    double saturation_fraction = 0.0;
    bool failed = false;
    std::string error;
};

struct SweepResult {
    SweepSpec spec;
    std::vector<CellResult> cells;      // row-major over (f_dist, i_u)
    std::vector<SimRecord> open_loop;   // one per f_dist row
    std::vector<SimRecord> closed_loop; // one per cell; empty record when failed

    const CellResult& cell(std::size_t row, std::size_t col) const;
};

// Runs every cell (one shared open-loop run per disturbance frequency plus
// one closed-loop run per cell) on up to `workers` threads. Results do not
// depend on scheduling order. A failing cell is recorded, not fatal.
SweepResult run_sweep(const SweepSpec& spec);

// results.csv, per-cell trajectory and spectrum CSVs, and manifest.ini
// under out_dir (created if needed).
void emit_outputs(const SweepResult& result, const std::string& out_dir);

void write_results_csv(const SweepResult& result, const std::string& path);
void write_trajectory_csv(const SimRecord& rec, const std::string& path);
void write_spectrum_csv(const SimRecord& rec, double T_s, double window,
                        const std::string& path);
std::string manifest_text(const SweepSpec& spec);

// Strict config application; unknown sections or keys throw.
void apply_config(ExperimentConfig& cfg, const ParsedConfig& file);
void apply_config(SweepSpec& spec, const ParsedConfig& file);

} // namespace vibsim

#endif
