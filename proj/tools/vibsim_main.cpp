#include <CLI11.hpp>

#include <cstdio>
#include <filesystem>
#include <iostream>
#include <optional>
#include <string>

#include "vibsim/csv.hpp"
#include "vibsim/experiments.hpp"

namespace {

using namespace vibsim;

FeedbackCase resolve_case(const std::optional<std::string>& cli_case,
                          const ParsedConfig* file) {
    if (cli_case)
        return feedback_case_from_string(*cli_case);
    if (file)
        if (const std::string* v = file->find("sweep", "case"))
            return feedback_case_from_string(*v);
    return FeedbackCase::Disp;
}

void print_cell(const CellResult& cell) {
    if (cell.failed) {
        std::cout << "cell f=" << format_double(cell.f_dist) << " Hz, i_u=" << cell.i_u
                  << ": FAILED (" << cell.error << ")\n";
        return;
    }
    std::cout << "cell f=" << format_double(cell.f_dist) << " Hz, i_u=" << cell.i_u
              << ", d_f=" << cell.d_f << ", R_u=" << format_double(cell.R_u)
              << ": y_ol=" << format_double(cell.metric.y_ol)
              << " m, y_cl=" << format_double(cell.metric.y_cl)
              << " m, attenuation=" << format_double(cell.metric.attenuation_db)
              << " dB, saturated=" << format_double(cell.saturation_fraction * 100.0)
              << "%\n";
}

int cmd_simulate(const std::optional<std::string>& config_path,
                 const std::optional<std::string>& cli_case, std::optional<int> iu,
                 std::optional<double> fdist, std::optional<int> df,
                 std::optional<double> ru, const std::string& out_dir, bool open_loop) {
    std::optional<ParsedConfig> file;
    if (config_path)
        file = parse_config_file(*config_path);

    const FeedbackCase fb = resolve_case(cli_case, file ? &*file : nullptr);
    ExperimentConfig cfg = case_preset(fb);
    if (file)
        apply_config(cfg, *file);
    if (iu)
        cfg.i_u = *iu;
    if (fdist)
        cfg.f_dist = *fdist;

    // (d_f, R_u) resolution: explicit flag, then config, then the bundled
    // per-case table for this (f_dist, i_u), then the case default.
    const bool df_from_config = file && file->has("controller", "d_f");
    const bool ru_from_config = file && file->has("controller", "R_u");
    const auto table = lookup_table_cell(fb, cfg.f_dist, cfg.i_u);
    if (df)
        cfg.d_f = *df;
    else if (!df_from_config && table)
        cfg.d_f = table->first;
    if (ru)
        cfg.R_u = *ru;
    else if (!ru_from_config && table)
        cfg.R_u = table->second;

    if (open_loop || cfg.open_loop) {
        cfg.open_loop = true;
        const SimRecord rec = run_simulation(build_sim_config(cfg));
        std::filesystem::create_directories(out_dir);
        const std::string tag =
            to_string(fb) + "_f" + format_double(cfg.f_dist) + "_ol";
        write_trajectory_csv(rec, out_dir + "/traj_" + tag + ".csv");
        write_spectrum_csv(rec, cfg.T_s, 0.5, out_dir + "/spectrum_" + tag + ".csv");
        const double amp = steady_state_amplitude(rec.y_disp, rec.t);
        std::cout << "open loop, f=" << format_double(cfg.f_dist)
                  << " Hz: steady-state displacement amplitude "
                  << format_double(amp) << " m\n";
        std::cout << "outputs written to " << out_dir << "\n";
        return 0;
    }

    SweepSpec spec;
    spec.base = cfg;
    spec.f_dist = {cfg.f_dist};
    spec.i_u = {cfg.i_u};
    spec.d_f = {{cfg.d_f}};
    spec.R_u = {{cfg.R_u}};
    spec.workers = 1;

    const SweepResult result = run_sweep(spec);
    emit_outputs(result, out_dir);
    print_cell(result.cells.front());
    std::cout << "outputs written to " << out_dir << "\n";
    return result.cells.front().failed ? 1 : 0;
}

int cmd_sweep(const std::optional<std::string>& config_path, const std::string& out_dir,
              std::optional<int> workers) {
    SweepSpec spec = sweep_preset(FeedbackCase::Disp);
    if (config_path)
        apply_config(spec, parse_config_file(*config_path));
    if (workers)
        spec.workers = *workers;

    const SweepResult result = run_sweep(spec);
    emit_outputs(result, out_dir);
    for (const CellResult& cell : result.cells)
        print_cell(cell);
    std::cout << "outputs written to " << out_dir << "\n";
    for (const CellResult& cell : result.cells)
        if (cell.failed)
            return 1;
    return 0;
}

int cmd_modal(const std::optional<std::string>& config_path) {
    ExperimentConfig cfg = case_preset(FeedbackCase::Disp);
    if (config_path)
        apply_config(cfg, parse_config_file(*config_path));
    const LumpedConstants lumped = derive_constants(cfg.beam);
    const SecondOrderModel model = assemble_second_order(lumped, cfg.beam);
    const StateSpace ss = build_state_space(model, cfg.i_u, cfg.i_d);
    const ModalSummary modes = modal_summary(ss);

    std::printf("%-6s %14s %14s\n", "mode", "freq [Hz]", "damping");
    double min_ratio = std::numeric_limits<double>::infinity();
    int idx = 1;
    for (const Mode& m : modes) {
        std::printf("%-6d %14.4f %14.6f\n", idx++, m.frequency_hz, m.damping_ratio);
        min_ratio = std::min(min_ratio, m.damping_ratio);
    }
    std::printf("minimum damping ratio: %.6f\n", min_ratio);
    return 0;
}

} // namespace

int main(int argc, char** argv) {
    CLI::App app{"cantilever-beam vibration suppression with retrospective cost "
                 "adaptive control"};
    app.require_subcommand(1);

    std::optional<std::string> config_path, case_name;
    std::optional<int> iu, df, workers;
    std::optional<double> fdist, ru;
    std::string out_dir = "out";
    bool open_loop = false;

    CLI::App* sim = app.add_subcommand("simulate", "run one open/closed-loop cell");
    sim->add_option("--config", config_path, "configuration file");
    sim->add_option("--case", case_name, "feedback case: disp, acc-lp or acc-est");
    sim->add_option("--iu", iu, "control input element index");
    sim->add_option("--fdist", fdist, "disturbance frequency [Hz]");
    sim->add_option("--df", df, "target-model delay d_f");
    sim->add_option("--ru", ru, "control weighting R_u");
    sim->add_option("--out", out_dir, "output directory (default: out)");
    sim->add_flag("--open-loop", open_loop, "run the open-loop case only");

    CLI::App* sweep = app.add_subcommand("sweep", "run a full (f_dist, i_u) table");
    sweep->add_option("--config", config_path, "configuration file");
    sweep->add_option("--out", out_dir, "output directory (default: out)");
    sweep->add_option("--workers", workers, "number of worker threads");

    CLI::App* modal = app.add_subcommand("modal", "print the beam modal summary");
    modal->add_option("--config", config_path, "configuration file");

    CLI::App* version = app.add_subcommand("version", "print the version");

    CLI11_PARSE(app, argc, argv);

    try {
        if (sim->parsed())
            return cmd_simulate(config_path, case_name, iu, fdist, df, ru, out_dir,
                                open_loop);
        if (sweep->parsed())
            return cmd_sweep(config_path, out_dir, workers);
        if (modal->parsed())
            return cmd_modal(config_path);
        if (version->parsed()) {
            std::cout << "vibsim " << vibsim::kVersion << "\n";
            return 0;
        }
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    }
    return 0;
}
