#include <filesystem>
#include <fstream>
#include <iostream>
#include <sstream>
#include <string>

#include "CLI11.hpp"

#include "ugsim/firmware.hpp"
#include "ugsim/fit.hpp"
#include "ugsim/jig.hpp"
#include "ugsim/kv_config.hpp"
#include "ugsim/model_check.hpp"
#include "ugsim/scenario.hpp"

namespace fs = std::filesystem;

namespace {

constexpr int kExitOk = 0;
constexpr int kExitError = 1;
constexpr int kExitFailedGrasp = 2;

void write_file(const fs::path& path, const std::string& content) {
    fs::create_directories(path.parent_path().empty() ? "." : path.parent_path());
    std::ofstream f(path, std::ios::binary);
    if (!f) throw std::runtime_error("cannot write '" + path.string() + "'");
    f << content;
}

std::string read_file(const fs::path& path) {
    std::ifstream f(path, std::ios::binary);
    if (!f) throw std::runtime_error("cannot read '" + path.string() + "'");
    std::ostringstream ss;
    ss << f.rdbuf();
    return ss.str();
}

ugsim::KvConfig load_config(const std::string& config_path) {
    if (config_path.empty()) return ugsim::KvConfig::parse("");
    return ugsim::KvConfig::parse_file(config_path);
}

void reject_unknown_keys(const ugsim::KvConfig& cfg) {
    const auto unused = cfg.unused_keys();
    if (unused.empty()) return;
    std::string msg = "unknown config keys:";
    for (const std::string& k : unused) msg += " " + k;
    throw std::runtime_error(msg);
}

struct CommonOpts {
    std::string config_path;
    std::string out_dir = ".";
    std::uint64_t seed = 0;
    bool seed_set = false;
    double dt = 0.0;
    bool dt_set = false;
};

void add_common(CLI::App* cmd, CommonOpts& o, bool with_config = true) {
    if (with_config)
        cmd->add_option("--config", o.config_path, "scenario configuration file");
    cmd->add_option("--out", o.out_dir, "output directory")->capture_default_str();
    cmd->add_option("--seed", o.seed, "override the scenario seed")
        ->each([&o](const std::string&) { o.seed_set = true; });
    cmd->add_option("--dt", o.dt, "simulation timestep in seconds (default 0.001)")
        ->each([&o](const std::string&) { o.dt_set = true; });
}

void apply_overrides(ugsim::GraspScenario& g, const CommonOpts& o) {
    if (o.seed_set) g.seed = o.seed;
    if (o.dt_set) g.dt_s = o.dt;
}

int cmd_grasp(const CommonOpts& o) {
    const ugsim::KvConfig cfg = load_config(o.config_path);
    ugsim::Scenario sc = ugsim::load_scenario(cfg);
    reject_unknown_keys(cfg);
    apply_overrides(sc.grasp, o);
    sc.grasp.validate();

    const ugsim::GraspResult result = ugsim::run_grasp(sc.grasp);
    write_file(fs::path(o.out_dir) / "timeline.csv",
               ugsim::write_timeline_csv(result.timeline));
    write_file(fs::path(o.out_dir) / "outcome.txt", ugsim::to_string(result.outcome));
    std::cout << ugsim::to_string(result.outcome);
    return result.outcome.success ? kExitOk : kExitFailedGrasp;
}

int cmd_sweep(const CommonOpts& o) {
    const ugsim::KvConfig cfg = load_config(o.config_path);
    ugsim::SweepSpec spec = ugsim::load_sweep_spec(cfg);
    reject_unknown_keys(cfg);
    apply_overrides(spec.base.grasp, o);

    const auto rows = ugsim::run_sweep(spec);
    const std::string csv = ugsim::write_sweep_rows_csv(rows);
    write_file(fs::path(o.out_dir) / "sweep.csv", csv);
    std::cout << csv;
    return kExitOk;
}

int cmd_fit(const std::string& input, const std::string& model_flag) {
    const auto samples = ugsim::read_sweep_csv(read_file(input));
    const bool has_d = samples.front().diameter_mm.has_value();

    ugsim::SweepModel model = has_d ? ugsim::SweepModel::air : ugsim::SweepModel::lumped;
    if (model_flag == "air")
        model = ugsim::SweepModel::air;
    else if (model_flag == "lumped")
        model = ugsim::SweepModel::lumped;
    else if (!model_flag.empty())
        throw std::runtime_error("--model must be 'air' or 'lumped'");

    const ugsim::FitResult r = ugsim::fit_power_law(samples, model);
    std::cout << ugsim::to_string(r);
    return kExitOk;
}

int cmd_serial(const CommonOpts& o, const std::string& transcript_path, double duration,
               bool from_power_up) {
    const ugsim::KvConfig cfg = load_config(o.config_path);
    const ugsim::Scenario sc = ugsim::load_scenario(cfg);
    reject_unknown_keys(cfg);

    std::string transcript_text;
    if (!transcript_path.empty()) {
        transcript_text = read_file(transcript_path);
    } else {
        std::ostringstream ss; // interactive: stamped lines on stdin
        ss << std::cin.rdbuf();
        transcript_text = ss.str();
    }

    ugsim::SerialSessionConfig session;
    session.controller = sc.grasp.controller;
    session.pneumatics = sc.grasp.pneumatics;
    session.duration_s = duration;
    session.dt_s = o.dt_set ? o.dt : sc.grasp.dt_s;
    session.start_opened = !from_power_up;

    const auto transcript = ugsim::parse_transcript(transcript_text);
    const std::string log = ugsim::run_serial_session(transcript, session);
    write_file(fs::path(o.out_dir) / "session.log", log);
    std::cout << log;
    return kExitOk;
}

int cmd_automaton_trace(const CommonOpts& o) {
    const ugsim::KvConfig cfg = load_config(o.config_path);
    const ugsim::Scenario sc = ugsim::load_scenario(cfg);
    reject_unknown_keys(cfg);

    const ugsim::ModelCheckReport report = ugsim::run_model_check(
        sc.grasp.controller, sc.grasp.pneumatics, o.dt_set ? o.dt : sc.grasp.dt_s);
    std::cout << ugsim::transition_table() << report.to_string();
    return report.ok() ? kExitOk : kExitError;
}

} // namespace

int main(int argc, char** argv) {
    CLI::App app{"Universal jamming gripper simulator and identification toolkit"};
    app.require_subcommand(1);

    CommonOpts grasp_opts;
    CLI::App* grasp = app.add_subcommand("grasp", "run one grasp, write timeline and outcome");
    add_common(grasp, grasp_opts);

    CommonOpts sweep_opts;
    CLI::App* sweep = app.add_subcommand("sweep", "run an experiment sweep, write sweep.csv");
    add_common(sweep, sweep_opts);

    std::string fit_input;
    std::string fit_model;
    CLI::App* fit = app.add_subcommand("fit", "fit power-law constants from a sweep CSV");
    fit->add_option("--input", fit_input, "sweep CSV file")->required();
    fit->add_option("--model", fit_model, "air | lumped (default: from the CSV header)");

    CommonOpts serial_opts;
    std::string transcript_path;
    double serial_duration = 20.0;
    bool from_power_up = false;
    CLI::App* serial = app.add_subcommand("serial", "replay a command transcript, log telemetry");
    add_common(serial, serial_opts);
    serial->add_option("--transcript", transcript_path,
                       "stamped command file '<t_s> <line>' (default: stdin)");
    serial->add_option("--duration", serial_duration, "session length in seconds")
        ->capture_default_str();
    serial->add_flag("--from-power-up", from_power_up,
                     "boot through the startup cycle instead of starting opened");

    CommonOpts trace_opts;
    CLI::App* trace = app.add_subcommand(
        "automaton-trace", "print the transition table and a reachability report");
    add_common(trace, trace_opts);

    CLI11_PARSE(app, argc, argv);

    try {
        if (grasp->parsed()) return cmd_grasp(grasp_opts);
        if (sweep->parsed()) return cmd_sweep(sweep_opts);
        if (fit->parsed()) return cmd_fit(fit_input, fit_model);
        if (serial->parsed())
            return cmd_serial(serial_opts, transcript_path, serial_duration, from_power_up);
        if (trace->parsed()) return cmd_automaton_trace(trace_opts);
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kExitError;
    }
    return kExitError;
}
