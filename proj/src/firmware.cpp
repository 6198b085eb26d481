#include "ugsim/firmware.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <sstream>
#include <stdexcept>

#include "ugsim/text_format.hpp"

namespace ugsim {

std::string format_telemetry(const StateVector& q) {
    std::string s = "Q ";
    s += std::to_string(static_cast<long long>(std::llround(q.t_s * 1000.0)));
    s += ' ';
    s += to_string(q.state);
    s += ' ';
    s += format_fixed(q.pressure_kpa, 2);
    s += ' ';
    s += format_fixed(q.force_gf, 2);
    return s;
}

CommandParse parse_command_line(std::string line) {
    while (!line.empty() && (line.back() == '\r' || line.back() == ' ' || line.back() == '\t'))
        line.pop_back();
    if (line.empty()) return {};

    if (line == "OPEN") return {Command{CommandKind::open, 0.0}, ""};
    if (line == "CLOSE") return {Command{CommandKind::close, 0.0}, ""};

    static const std::string kSetFthr = "SET FTHR ";
    if (line.rfind(kSetFthr, 0) == 0) {
        const std::string arg = line.substr(kSetFthr.size());
        double value = 0.0;
        auto res = std::from_chars(arg.data(), arg.data() + arg.size(), value);
        if (res.ec != std::errc{} || res.ptr != arg.data() + arg.size() ||
            !std::isfinite(value) || !(value > 0.0))
            return {std::nullopt, "bad-argument"};
        return {Command{CommandKind::set_force_threshold, value}, ""};
    }
    return {std::nullopt, "unknown-command"};
}

Firmware::Firmware(ControllerConfig cfg, std::size_t queue_capacity)
    : cfg_(cfg),
      pressure_filter_(static_cast<std::size_t>(cfg.filter_taps)),
      force_filter_(static_cast<std::size_t>(cfg.filter_taps)),
      inbox_(queue_capacity),
      telemetry_(queue_capacity) {
    cfg_.validate();
}

std::string Firmware::receive_line(const std::string& line) {
    CommandParse p = parse_command_line(line);
    if (p.command) {
        inbox_.push(*p.command);
        return "OK";
    }
    if (!p.error.empty()) return "ERR " + p.error;
    return ""; // blank line
}

ActuatorOutputs Firmware::tick(double t_s, double raw_pressure_kpa,
                               double raw_force_gf, const ButtonInputs& buttons) {
    if (ticked_ && t_s < q_.t_s)
        throw std::logic_error("firmware tick: time must be non-decreasing");
    CommandVector u;
    u.button_open = buttons.open;
    u.button_close = buttons.close;
    while (auto cmd = inbox_.pop()) {
        if (cmd->kind == CommandKind::set_force_threshold)
            cfg_.force_threshold_gf = cmd->value_gf; // validated at parse time
        else
            u.user.push_back(cmd->kind);
    }

    q_.t_s = t_s;
    q_.pressure_kpa = pressure_filter_.push(raw_pressure_kpa);
    q_.force_gf = force_filter_.push(raw_force_gf);
    q_.state = auto_state_.state;

    const double dt = 1.0 / cfg_.sample_rate_hz;
    AutomatonStep step = step_automaton(auto_state_, q_, u, dt, cfg_);
    auto_state_ = step.next;
    q_.state = auto_state_.state; // telemetry reports the state entered this tick

    telemetry_.push(format_telemetry(q_));
    ticked_ = true;
    return step.outputs;
}

std::vector<std::string> Firmware::drain_telemetry() {
    std::vector<std::string> lines;
    if (telemetry_.dropped() > drops_reported_) {
        lines.push_back("DROP " + std::to_string(telemetry_.dropped()));
        drops_reported_ = telemetry_.dropped();
    }
    while (auto line = telemetry_.pop()) lines.push_back(std::move(*line));
    return lines;
}

void Firmware::start_opened() {
    if (ticked_)
        throw std::logic_error("start_opened: only valid before the first tick");
    auto_state_.state = GripperState::opened;
    auto_state_.startup_inflating = false;
    auto_state_.time_in_state_s = 0.0;
}

std::vector<TranscriptEntry> parse_transcript(const std::string& text) {
    std::vector<TranscriptEntry> entries;
    std::istringstream in(text);
    std::string line;
    int lineno = 0;
    while (std::getline(in, line)) {
        ++lineno;
        if (!line.empty() && line.back() == '\r') line.pop_back();
        const auto first = line.find_first_not_of(" \t");
        if (first == std::string::npos || line[first] == '#') continue;
        const auto sep = line.find(' ', first);
        if (sep == std::string::npos)
            throw std::runtime_error("transcript line " + std::to_string(lineno) +
                                     ": expected '<t_s> <command>'");
        const std::string stamp = line.substr(first, sep - first);
        double t = 0.0;
        auto res = std::from_chars(stamp.data(), stamp.data() + stamp.size(), t);
        if (res.ec != std::errc{} || res.ptr != stamp.data() + stamp.size() || !(t >= 0.0))
            throw std::runtime_error("transcript line " + std::to_string(lineno) +
                                     ": bad timestamp '" + stamp + "'");
        entries.push_back({t, line.substr(sep + 1)});
    }
    std::stable_sort(entries.begin(), entries.end(),
                     [](const TranscriptEntry& a, const TranscriptEntry& b) {
                         return a.t_s < b.t_s;
                     });
    return entries;
}

std::string run_serial_session(const std::vector<TranscriptEntry>& transcript,
                               const SerialSessionConfig& cfg) {
    cfg.controller.validate();
    cfg.pneumatics.validate();
    if (!(cfg.dt_s > 0.0) || !(cfg.dt_s <= 0.01))
        throw std::invalid_argument("serial session: dt must be in (0, 0.01] s");

    Firmware fw(cfg.controller);
    PneumaticState pneu;
    if (cfg.start_opened) {
        fw.start_opened();
        pneu.free_volume = 1.0;
        pneu.pressure_kpa = 0.0; // at rest, membrane relaxed to ambient
    } else {
        pneu.free_volume = 0.5; // genuinely unknown at power-up
        pneu.pressure_kpa = 0.0;
    }

    std::string log;
    const double sample_period = 1.0 / cfg.controller.sample_rate_hz;
    const long ticks = std::lround(cfg.duration_s / sample_period);
    std::size_t next_entry = 0;

    for (long i = 0; i < ticks; ++i) {
        const double t = static_cast<double>(i) * sample_period;
        while (next_entry < transcript.size() &&
               transcript[next_entry].t_s <= t + 1e-9) {
            const std::string reply = fw.receive_line(transcript[next_entry].line);
            if (!reply.empty()) {
                log += reply;
                log += '\n';
            }
            ++next_entry;
        }

        ActuatorOutputs out = fw.tick(t, pneu.pressure_kpa, 0.0);
        pneu.pump_in_on = out.pump_in_on;
        pneu.pump_out_on = out.pump_out_on;
        pneu.valve1_open = out.valve1_open;
        pneu.valve2_open = out.valve2_open;

        const int substeps = std::max(1, static_cast<int>(std::lround(sample_period / cfg.dt_s)));
        const double h = sample_period / substeps;
        for (int k = 0; k < substeps; ++k) {
            pneu = step_pressure(pneu, h, cfg.pneumatics);
            const double target =
                free_volume_target(out, fw.automaton_state().state, pneu.free_volume);
            pneu = step_free_volume(pneu, target, h, cfg.pneumatics);
        }

        for (const std::string& line : fw.drain_telemetry()) {
            log += line;
            log += '\n';
        }
    }
    return log;
}

} // namespace ugsim
