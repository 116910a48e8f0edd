#include "vibsim/experiments.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <complex>
#include <filesystem>
#include <numbers>
#include <sstream>
#include <stdexcept>
#include <thread>

#include "vibsim/csv.hpp"

namespace vibsim {

namespace {

constexpr double kMetricWindow = 0.5; // seconds of steady state used for metrics

// Tables of per-cell (d_f, R_u) over f_dist rows {20,40,60,80} Hz and
// i_u columns {10,12,14,16}.
constexpr double kTableFreqs[4] = {20.0, 40.0, 60.0, 80.0};
constexpr int kTableInputs[4] = {10, 12, 14, 16};

constexpr int kDispDf[4][4] = {{5, 5, 5, 5}, {9, 8, 7, 3}, {6, 5, 9, 3}, {9, 7, 7, 7}};
constexpr double kDispRu[4][4] = {{1, 1, 1, 1},
                                  {0.5, 0.4, 0.5, 0.4},
                                  {0.05, 0.1, 0.1, 0.05},
                                  {0.1, 0.05, 0.05, 0.05}};

constexpr int kAccLpDf[4][4] = {{3, 3, 3, 3}, {8, 7, 7, 8}, {9, 20, 20, 18}, {20, 19, 19, 19}};
constexpr double kAccLpRu[4][4] = {{40, 40, 30, 30},
                                   {40, 40, 100, 40},
                                   {60, 1, 50, 50},
                                   {40, 50, 100, 60}};

constexpr int kAccEstDf[4][4] = {{3, 8, 8, 8}, {8, 5, 6, 5}, {6, 5, 4, 9}, {9, 7, 8, 8}};
constexpr double kAccEstRu[4][4] = {{1, 1, 5, 1},
                                    {0.05, 0.5, 2, 0.75},
                                    {0.1, 1, 0.75, 0.05},
                                    {0.05, 0.1, 0.1, 0.1}};

void table_for(FeedbackCase c, const int (**df)[4], const double (**ru)[4]) {
    switch (c) {
    case FeedbackCase::Disp: *df = kDispDf; *ru = kDispRu; return;
    case FeedbackCase::AccLowPass: *df = kAccLpDf; *ru = kAccLpRu; return;
    case FeedbackCase::AccDispEst: *df = kAccEstDf; *ru = kAccEstRu; return;
    }
    throw std::logic_error("unknown feedback case");
}

} // namespace

std::string to_string(FeedbackCase c) {
    switch (c) {
    case FeedbackCase::Disp: return "disp";
    case FeedbackCase::AccLowPass: return "acc-lp";
    case FeedbackCase::AccDispEst: return "acc-est";
    }
    throw std::logic_error("unknown feedback case");
}

FeedbackCase feedback_case_from_string(const std::string& s) {
    if (s == "disp") return FeedbackCase::Disp;
    if (s == "acc-lp") return FeedbackCase::AccLowPass;
    if (s == "acc-est") return FeedbackCase::AccDispEst;
    throw std::invalid_argument("unknown feedback case '" + s +
                                "' (expected disp, acc-lp or acc-est)");
}

double steady_state_amplitude(const std::vector<double>& series,
                              const std::vector<double>& t, double window) {
    if (series.size() != t.size() || series.empty())
        throw std::invalid_argument("steady_state_amplitude: series/time size mismatch");
    if (!(window > 0.0))
        throw std::invalid_argument("steady_state_amplitude: window must be positive");
    const double t_from = t.back() - window;
    if (t_from < t.front() - 1e-12)
        throw std::invalid_argument("steady_state_amplitude: window exceeds series span");
    double amp = -1.0;
    for (std::size_t i = 0; i < series.size(); ++i)
        if (t[i] >= t_from - 1e-12)
            amp = std::max(amp, std::abs(series[i]));
    if (amp < 0.0)
        throw std::invalid_argument("steady_state_amplitude: empty window");
    return amp;
}

double attenuation_db(double y_ol, double y_cl) {
    if (y_cl < 0.0 || y_ol < 0.0)
        throw std::invalid_argument("attenuation_db: amplitudes must be nonnegative");
    if (y_cl == 0.0)
        return std::numeric_limits<double>::infinity();
    return 20.0 * std::log10(y_ol / y_cl);
}

Metric make_metric(double y_ol, double y_cl) {
    Metric m;
    m.y_ol = y_ol;
    m.y_cl = y_cl;
    m.y_cl_zero = (y_cl == 0.0);
    m.ratio = m.y_cl_zero ? std::numeric_limits<double>::infinity() : y_ol / y_cl;
    m.attenuation_db = attenuation_db(y_ol, y_cl);
    return m;
}

std::vector<SpectrumPoint> magnitude_spectrum(const std::vector<double>& series, double T_s) {
    const std::size_t n = series.size();
    if (n < 2)
        throw std::invalid_argument("magnitude_spectrum: need at least 2 samples");
    if (!(T_s > 0.0))
        throw std::invalid_argument("magnitude_spectrum: T_s must be positive");

    std::vector<double> windowed(n);
    double wsum = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
        const double w =
            0.5 * (1.0 - std::cos(2.0 * std::numbers::pi * static_cast<double>(i) /
                                  static_cast<double>(n - 1)));
        windowed[i] = series[i] * w;
        wsum += w;
    }

    const std::size_t bins = n / 2 + 1;
    std::vector<SpectrumPoint> out(bins);
    for (std::size_t k = 0; k < bins; ++k) {
        const double ang = -2.0 * std::numbers::pi * static_cast<double>(k) /
                           static_cast<double>(n);
        const std::complex<double> step = std::polar(1.0, ang);
        std::complex<double> phasor(1.0, 0.0);
        std::complex<double> acc(0.0, 0.0);
        for (std::size_t i = 0; i < n; ++i) {
            acc += windowed[i] * phasor;
            phasor *= step;
        }
        const bool edge = (k == 0) || (n % 2 == 0 && k == bins - 1);
        const double scale = (edge ? 1.0 : 2.0) / wsum;
        out[k].frequency_hz = static_cast<double>(k) / (static_cast<double>(n) * T_s);
        out[k].magnitude = scale * std::abs(acc);
    }
    return out;
}

ExperimentConfig case_preset(FeedbackCase c) {
    ExperimentConfig cfg; // beam, indices and timing carry the shared values
    cfg.fb_case = c;
    switch (c) {
    case FeedbackCase::Disp:
        cfg.filter_variant = FilterVariant::Gain;
        cfg.l_c = 20;
        cfg.p0 = 1.0;
        cfg.N = -1.0;
        cfg.K_g = 500.0;
        cfg.d_f = 5;
        cfg.R_u = 1.0;
        break;
    case FeedbackCase::AccLowPass:
        cfg.filter_variant = FilterVariant::LowPass;
        cfg.l_c = 20;
        cfg.p0 = 1.0;
        cfg.N = 1.0;
        cfg.K_g = 1.0;
        cfg.omega_lp = 2.0 * std::numbers::pi * 150.0;
        cfg.zeta_lp = 0.8;
        cfg.d_f = 3;
        cfg.R_u = 40.0;
        break;
    case FeedbackCase::AccDispEst:
        cfg.filter_variant = FilterVariant::DispEstimator;
        cfg.l_c = 25;
        cfg.p0 = 0.1;
        cfg.N = -1.0;
        cfg.K_g = 500.0;
        cfg.nu_hp = 20.0;
        cfg.d_f = 8;
        cfg.R_u = 1.0;
        break;
    }
    return cfg;
}

std::optional<std::pair<int, double>> lookup_table_cell(FeedbackCase c, double f_dist,
                                                        int i_u) {
    const int(*df)[4] = nullptr;
    const double(*ru)[4] = nullptr;
    table_for(c, &df, &ru);
    for (int r = 0; r < 4; ++r) {
        if (f_dist != kTableFreqs[r])
            continue;
        for (int col = 0; col < 4; ++col)
            if (i_u == kTableInputs[col])
                return std::make_pair(df[r][col], ru[r][col]);
    }
    return std::nullopt;
}

SimConfig build_sim_config(const ExperimentConfig& cfg) {
    cfg.beam.validate();
    const LumpedConstants lumped = derive_constants(cfg.beam);
    const SecondOrderModel model = assemble_second_order(lumped, cfg.beam);
    const StateSpace ss = build_state_space(model, cfg.i_u, cfg.i_d);
    const MeasurementKind kind = cfg.fb_case == FeedbackCase::Disp
                                     ? MeasurementKind::Displacement
                                     : MeasurementKind::Acceleration;

    SimConfig sim;
    sim.ss = ss;
    sim.om = output_map(model, ss, cfg.i_y, kind);
    sim.f_dist = cfg.f_dist;
    sim.T_sim = cfg.T_sim;
    sim.T_s = cfg.T_s;
    sim.t_end = cfg.t_end;
    sim.t_enable = cfg.t_enable;
    sim.mode = cfg.open_loop ? SimMode::OpenLoop : SimMode::ClosedLoop;

    const TargetModel target =
        build_target_model(cfg.N, cfg.d_f, cfg.resolved_f_f(), cfg.alpha_f, cfg.T_s);
    sim.controller = RcacConfig::siso(cfg.l_c, cfg.p0, cfg.R_u, cfg.u_max, target);
    sim.controller.u_min = cfg.u_min;

    FilterSpec filter;
    filter.variant = cfg.filter_variant;
    filter.K_g = cfg.K_g;
    filter.omega_lp = cfg.omega_lp;
    filter.zeta_lp = cfg.zeta_lp;
    filter.nu_hp = cfg.nu_hp;
    filter.T_s = cfg.T_s;
    filter.validate();
    sim.filter = filter;
    return sim;
}

void SweepSpec::validate() const {
    base.beam.validate();
    if (f_dist.empty() || i_u.empty())
        throw std::invalid_argument("SweepSpec: f_dist and i_u lists must be nonempty");
    if (d_f.size() != f_dist.size() || R_u.size() != f_dist.size())
        throw std::invalid_argument("SweepSpec: d_f and R_u need one row per f_dist");
    for (std::size_t r = 0; r < f_dist.size(); ++r)
        if (d_f[r].size() != i_u.size() || R_u[r].size() != i_u.size())
            throw std::invalid_argument("SweepSpec: table row " + std::to_string(r) +
                                        " does not match the i_u list");
    if (workers < 1)
        throw std::invalid_argument("SweepSpec: workers must be at least 1");
}

SweepSpec sweep_preset(FeedbackCase c) {
    SweepSpec spec;
    spec.base = case_preset(c);
    spec.f_dist.assign(std::begin(kTableFreqs), std::end(kTableFreqs));
    spec.i_u.assign(std::begin(kTableInputs), std::end(kTableInputs));
    const int(*df)[4] = nullptr;
    const double(*ru)[4] = nullptr;
    table_for(c, &df, &ru);
    spec.d_f.assign(4, std::vector<int>(4));
    spec.R_u.assign(4, std::vector<double>(4));
    for (int r = 0; r < 4; ++r)
        for (int col = 0; col < 4; ++col) {
            spec.d_f[static_cast<std::size_t>(r)][static_cast<std::size_t>(col)] = df[r][col];
            spec.R_u[static_cast<std::size_t>(r)][static_cast<std::size_t>(col)] = ru[r][col];
        }
    return spec;
}

const CellResult& SweepResult::cell(std::size_t row, std::size_t col) const {
    return cells.at(row * spec.i_u.size() + col);
}

SweepResult run_sweep(const SweepSpec& spec) {
    spec.validate();
    const std::size_t rows = spec.f_dist.size();
    const std::size_t cols = spec.i_u.size();
    const std::size_t n_cells = rows * cols;

    SweepResult result;
    result.spec = spec;
    result.cells.resize(n_cells);
    result.open_loop.resize(rows);
    result.closed_loop.resize(n_cells);

    std::vector<std::string> ol_errors(rows);
    std::vector<std::string> cl_errors(n_cells);

    // Jobs 0..rows-1 are the shared open-loop runs; the rest are cells.
    const std::size_t n_jobs = rows + n_cells;
    std::atomic<std::size_t> next{0};

    auto make_cell_config = [&](std::size_t r, std::size_t c) {
        ExperimentConfig cfg = spec.base;
        cfg.f_dist = spec.f_dist[r];
        cfg.i_u = spec.i_u[c];
        cfg.d_f = spec.d_f[r][c];
        cfg.R_u = spec.R_u[r][c];
        cfg.open_loop = false;
        return cfg;
    };

    auto worker = [&]() {
        while (true) {
            const std::size_t job = next.fetch_add(1);
            if (job >= n_jobs)
                return;
            try {
                if (job < rows) {
                    // The open-loop response does not depend on i_u; run it
                    // once per frequency with the first listed input index.
                    ExperimentConfig cfg = make_cell_config(job, 0);
                    cfg.open_loop = true;
                    result.open_loop[job] = run_simulation(build_sim_config(cfg));
                } else {
                    const std::size_t cell = job - rows;
                    ExperimentConfig cfg = make_cell_config(cell / cols, cell % cols);
                    result.closed_loop[cell] = run_simulation(build_sim_config(cfg));
                }
            } catch (const std::exception& e) {
                if (job < rows)
                    ol_errors[job] = e.what();
                else
                    cl_errors[job - rows] = e.what();
            }
        }
    };

    const int n_threads = std::max(1, std::min<int>(spec.workers,
                                                    static_cast<int>(n_jobs)));
    if (n_threads == 1) {
        worker();
    } else {
        std::vector<std::thread> pool;
        pool.reserve(static_cast<std::size_t>(n_threads));
        for (int i = 0; i < n_threads; ++i)
            pool.emplace_back(worker);
        for (auto& th : pool)
            th.join();
    }

    for (std::size_t r = 0; r < rows; ++r) {
        for (std::size_t c = 0; c < cols; ++c) {
            const std::size_t idx = r * cols + c;
            CellResult& cell = result.cells[idx];
            cell.f_dist = spec.f_dist[r];
            cell.i_u = spec.i_u[c];
            cell.d_f = spec.d_f[r][c];
            cell.R_u = spec.R_u[r][c];
            if (!ol_errors[r].empty()) {
                cell.failed = true;
                cell.error = "open-loop run failed: " + ol_errors[r];
                continue;
            }
            if (!cl_errors[idx].empty()) {
                cell.failed = true;
                cell.error = cl_errors[idx];
                continue;
            }
            const SimRecord& ol = result.open_loop[r];
            const SimRecord& cl = result.closed_loop[idx];
            const double y_ol = steady_state_amplitude(ol.y_disp, ol.t, kMetricWindow);
            const double y_cl = steady_state_amplitude(cl.y_disp, cl.t, kMetricWindow);
            cell.metric = make_metric(y_ol, y_cl);
            cell.saturation_fraction = cl.saturation_fraction;
        }
    }
    return result;
}

void write_results_csv(const SweepResult& result, const std::string& path) {
    CsvWriter csv(path);
    csv.header("case,f_dist,i_u,d_f,R_u,y_ol,y_cl,attenuation_db,saturation_fraction");
    const std::string case_name = to_string(result.spec.base.fb_case);
    const double nan = std::numeric_limits<double>::quiet_NaN();
    for (const CellResult& cell : result.cells) {
        csv.field(case_name);
        csv.field(cell.f_dist);
        csv.field(static_cast<long>(cell.i_u));
        csv.field(static_cast<long>(cell.d_f));
        csv.field(cell.R_u);
        if (cell.failed) {
            csv.field(nan);
            csv.field(nan);
            csv.field(nan);
            csv.field(nan);
        } else {
            csv.field(cell.metric.y_ol);
            csv.field(cell.metric.y_cl);
            csv.field(cell.metric.attenuation_db);
            csv.field(cell.saturation_fraction);
        }
        csv.end_row();
    }
}

void write_trajectory_csv(const SimRecord& rec, const std::string& path) {
    CsvWriter csv(path);
    csv.header("t,y_disp,y_acc,u,d,z");
    for (std::size_t i = 0; i < rec.ticks(); ++i) {
        csv.field(rec.t[i]);
        csv.field(rec.y_disp[i]);
        csv.field(rec.y_acc[i]);
        csv.field(rec.u[i]);
        csv.field(rec.d[i]);
        csv.field(rec.z[i]);
        csv.end_row();
    }
}

void write_spectrum_csv(const SimRecord& rec, double T_s, double window,
                        const std::string& path) {
    std::size_t from = 0;
    const double t_from = rec.t.back() - window;
    while (from < rec.t.size() && rec.t[from] < t_from - 1e-12)
        ++from;
    std::vector<double> disp(rec.y_disp.begin() + static_cast<std::ptrdiff_t>(from),
                             rec.y_disp.end());
    std::vector<double> acc(rec.y_acc.begin() + static_cast<std::ptrdiff_t>(from),
                            rec.y_acc.end());
    const auto disp_spec = magnitude_spectrum(disp, T_s);
    const auto acc_spec = magnitude_spectrum(acc, T_s);

    CsvWriter csv(path);
    csv.header("frequency_hz,y_disp_mag,y_acc_mag");
    for (std::size_t i = 0; i < disp_spec.size(); ++i) {
        csv.field(disp_spec[i].frequency_hz);
        csv.field(disp_spec[i].magnitude);
        csv.field(acc_spec[i].magnitude);
        csv.end_row();
    }
}

namespace {

std::string cell_tag(FeedbackCase c, double f_dist, int i_u) {
    return to_string(c) + "_f" + format_double(f_dist) + "_iu" + std::to_string(i_u);
}

void append_kv(std::ostringstream& out, const char* key, double v) {
    out << key << " = " << format_double(v) << "\n";
}

} // namespace

std::string manifest_text(const SweepSpec& spec) {
    const ExperimentConfig& b = spec.base;
    std::ostringstream out;
    out << "# resolved configuration (machine-written; readable by --config)\n";
    out << "[beam]\n";
    append_kv(out, "L", b.beam.L);
    append_kv(out, "b", b.beam.b);
    append_kv(out, "h", b.beam.h);
    append_kv(out, "m", b.beam.m);
    append_kv(out, "E", b.beam.E);
    append_kv(out, "alpha", b.beam.alpha);
    append_kv(out, "beta", b.beam.beta);
    out << "n_b = " << b.beam.n_b << "\n\n";

    out << "[controller]\n";
    out << "l_c = " << b.l_c << "\n";
    append_kv(out, "p0", b.p0);
    append_kv(out, "N", b.N);
    out << "d_f = " << b.d_f << "\n";
    append_kv(out, "R_u", b.R_u);
    append_kv(out, "alpha_f", b.alpha_f);
    append_kv(out, "f_f", b.f_f);
    append_kv(out, "u_min", b.u_min);
    append_kv(out, "u_max", b.u_max);
    out << "\n[filter]\n";
    out << "variant = ";
    switch (b.filter_variant) {
    case FilterVariant::Gain: out << "gain"; break;
    case FilterVariant::LowPass: out << "lowpass"; break;
    case FilterVariant::DispEstimator: out << "dispest"; break;
    }
    out << "\n";
    append_kv(out, "K_g", b.K_g);
    append_kv(out, "omega_lp", b.omega_lp);
    append_kv(out, "zeta_lp", b.zeta_lp);
    append_kv(out, "nu_hp", b.nu_hp);

    out << "\n[simulation]\n";
    out << "mode = " << (b.open_loop ? "open" : "closed") << "\n";
    append_kv(out, "f_dist", b.f_dist);
    append_kv(out, "T_sim", b.T_sim);
    append_kv(out, "T_s", b.T_s);
    append_kv(out, "t_end", b.t_end);
    append_kv(out, "t_enable", b.t_enable);
    out << "i_u = " << b.i_u << "\n";
    out << "i_d = " << b.i_d << "\n";
    out << "i_y = " << b.i_y << "\n";

    out << "\n[sweep]\n";
    out << "case = " << to_string(b.fb_case) << "\n";
    out << "f_dist =";
    for (double f : spec.f_dist)
        out << " " << format_double(f);
    out << "\ni_u =";
    for (int iu : spec.i_u)
        out << " " << iu;
    out << "\nd_f = ";
    for (std::size_t r = 0; r < spec.d_f.size(); ++r) {
        if (r)
            out << " / ";
        for (std::size_t c = 0; c < spec.d_f[r].size(); ++c)
            out << (c ? " " : "") << spec.d_f[r][c];
    }
    out << "\nR_u = ";
    for (std::size_t r = 0; r < spec.R_u.size(); ++r) {
        if (r)
            out << " / ";
        for (std::size_t c = 0; c < spec.R_u[r].size(); ++c)
            out << (c ? " " : "") << format_double(spec.R_u[r][c]);
    }
    out << "\nworkers = " << spec.workers << "\n";
    return out.str();
}

void emit_outputs(const SweepResult& result, const std::string& out_dir) {
    namespace fs = std::filesystem;
    std::error_code ec;
    fs::create_directories(out_dir, ec);
    if (ec)
        throw std::runtime_error("cannot create output directory " + out_dir + ": " +
                                 ec.message());
    const fs::path dir(out_dir);
    const FeedbackCase c = result.spec.base.fb_case;
    const double T_s = result.spec.base.T_s;

    write_results_csv(result, (dir / "results.csv").string());

    for (std::size_t r = 0; r < result.spec.f_dist.size(); ++r) {
        const SimRecord& ol = result.open_loop[r];
        if (ol.ticks() == 0)
            continue; // failed open-loop run, already marked in the table
        const std::string tag = to_string(c) + "_f" + format_double(result.spec.f_dist[r]);
        write_trajectory_csv(ol, (dir / ("traj_" + tag + "_ol.csv")).string());
        write_spectrum_csv(ol, T_s, kMetricWindow,
                           (dir / ("spectrum_" + tag + "_ol.csv")).string());
    }
    for (std::size_t i = 0; i < result.cells.size(); ++i) {
        const CellResult& cell = result.cells[i];
        const SimRecord& cl = result.closed_loop[i];
        if (cell.failed || cl.ticks() == 0)
            continue;
        const std::string tag = cell_tag(c, cell.f_dist, cell.i_u);
        write_trajectory_csv(cl, (dir / ("traj_" + tag + "_cl.csv")).string());
        write_spectrum_csv(cl, T_s, kMetricWindow,
                           (dir / ("spectrum_" + tag + "_cl.csv")).string());
    }

    std::ofstream manifest((dir / "manifest.ini").string(), std::ios::binary);
    if (!manifest)
        throw std::runtime_error("cannot write manifest in " + out_dir);
    manifest << manifest_text(result.spec);
}

namespace {

using KeyHandler = void (*)(ExperimentConfig&, const std::string&, const std::string&);

void apply_beam_key(ExperimentConfig& cfg, const std::string& key, const std::string& val) {
    const std::string ctx = "[beam] " + key;
    if (key == "L") cfg.beam.L = config_double(val, ctx);
    else if (key == "b") cfg.beam.b = config_double(val, ctx);
    else if (key == "h") cfg.beam.h = config_double(val, ctx);
    else if (key == "m") cfg.beam.m = config_double(val, ctx);
    else if (key == "E") cfg.beam.E = config_double(val, ctx);
    else if (key == "alpha") cfg.beam.alpha = config_double(val, ctx);
    else if (key == "beta") cfg.beam.beta = config_double(val, ctx);
    else if (key == "n_b") cfg.beam.n_b = config_int(val, ctx);
    else throw std::invalid_argument("unknown key '" + key + "' in section [beam]");
}

void apply_controller_key(ExperimentConfig& cfg, const std::string& key,
                          const std::string& val) {
    const std::string ctx = "[controller] " + key;
    if (key == "l_c") cfg.l_c = config_int(val, ctx);
    else if (key == "p0") cfg.p0 = config_double(val, ctx);
    else if (key == "N") cfg.N = config_double(val, ctx);
    else if (key == "d_f") cfg.d_f = config_int(val, ctx);
    else if (key == "R_u") cfg.R_u = config_double(val, ctx);
    else if (key == "alpha_f") cfg.alpha_f = config_double(val, ctx);
    else if (key == "f_f") cfg.f_f = config_double(val, ctx);
    else if (key == "u_min") cfg.u_min = config_double(val, ctx);
    else if (key == "u_max") cfg.u_max = config_double(val, ctx);
    else throw std::invalid_argument("unknown key '" + key + "' in section [controller]");
}

void apply_filter_key(ExperimentConfig& cfg, const std::string& key, const std::string& val) {
    const std::string ctx = "[filter] " + key;
    if (key == "variant") {
        if (val == "gain") cfg.filter_variant = FilterVariant::Gain;
        else if (val == "lowpass") cfg.filter_variant = FilterVariant::LowPass;
        else if (val == "dispest") cfg.filter_variant = FilterVariant::DispEstimator;
        else
            throw std::invalid_argument(ctx + ": expected gain, lowpass or dispest, got '" +
                                        val + "'");
    } else if (key == "K_g") cfg.K_g = config_double(val, ctx);
    else if (key == "omega_lp") cfg.omega_lp = config_double(val, ctx);
    else if (key == "zeta_lp") cfg.zeta_lp = config_double(val, ctx);
    else if (key == "nu_hp") cfg.nu_hp = config_double(val, ctx);
    else throw std::invalid_argument("unknown key '" + key + "' in section [filter]");
}

void apply_simulation_key(ExperimentConfig& cfg, const std::string& key,
                          const std::string& val) {
    const std::string ctx = "[simulation] " + key;
    if (key == "mode") {
        if (val == "open") cfg.open_loop = true;
        else if (val == "closed") cfg.open_loop = false;
        else throw std::invalid_argument(ctx + ": expected open or closed, got '" + val + "'");
    } else if (key == "f_dist") cfg.f_dist = config_double(val, ctx);
    else if (key == "T_sim") cfg.T_sim = config_double(val, ctx);
    else if (key == "T_s") cfg.T_s = config_double(val, ctx);
    else if (key == "t_end") cfg.t_end = config_double(val, ctx);
    else if (key == "t_enable") cfg.t_enable = config_double(val, ctx);
    else if (key == "i_u") cfg.i_u = config_int(val, ctx);
    else if (key == "i_d") cfg.i_d = config_int(val, ctx);
    else if (key == "i_y") cfg.i_y = config_int(val, ctx);
    else throw std::invalid_argument("unknown key '" + key + "' in section [simulation]");
}

void check_sweep_key(const std::string& key) {
    static const char* known[] = {"case", "f_dist", "i_u", "d_f", "R_u", "workers"};
    for (const char* k : known)
        if (key == k)
            return;
    throw std::invalid_argument("unknown key '" + key + "' in section [sweep]");
}

void apply_section(ExperimentConfig& cfg, const std::string& section,
                   const std::vector<std::pair<std::string, std::string>>& keys,
                   bool allow_sweep) {
    KeyHandler handler = nullptr;
    if (section == "beam") handler = apply_beam_key;
    else if (section == "controller") handler = apply_controller_key;
    else if (section == "filter") handler = apply_filter_key;
    else if (section == "simulation") handler = apply_simulation_key;
    else if (section == "sweep" && allow_sweep) {
        // [sweep] is consumed by the sweep path; still reject typos here.
        for (const auto& kv : keys)
            check_sweep_key(kv.first);
        return;
    } else {
        throw std::invalid_argument("unknown config section [" + section + "]");
    }
    for (const auto& kv : keys)
        handler(cfg, kv.first, kv.second);
}

} // namespace

void apply_config(ExperimentConfig& cfg, const ParsedConfig& file) {
    for (const auto& [section, keys] : file.sections)
        apply_section(cfg, section, keys, /*allow_sweep=*/true);
}

void apply_config(SweepSpec& spec, const ParsedConfig& file) {
    // "case" re-seeds the per-case presets and tables, so resolve it before
    // any other key can be overridden by it.
    if (const std::string* val = file.find("sweep", "case")) {
        const FeedbackCase c = feedback_case_from_string(*val);
        ExperimentConfig fresh = case_preset(c);
        fresh.beam = spec.base.beam;
        spec.base = fresh;
        SweepSpec table = sweep_preset(c);
        spec.f_dist = table.f_dist;
        spec.i_u = table.i_u;
        spec.d_f = table.d_f;
        spec.R_u = table.R_u;
    }
    for (const auto& [section, keys] : file.sections) {
        if (section != "sweep") {
            apply_section(spec.base, section, keys, /*allow_sweep=*/false);
            continue;
        }
        for (const auto& [key, val] : keys) {
            const std::string ctx = "[sweep] " + key;
            check_sweep_key(key);
            if (key == "case") {
                continue; // handled above
            } else if (key == "f_dist") {
                spec.f_dist = config_double_list(val, ctx);
            } else if (key == "i_u") {
                spec.i_u = config_int_list(val, ctx);
            } else if (key == "d_f") {
                spec.d_f = config_int_rows(val, ctx);
            } else if (key == "R_u") {
                spec.R_u = config_double_rows(val, ctx);
            } else if (key == "workers") {
                spec.workers = config_int(val, ctx);
            }
        }
    }
}

} // namespace vibsim
