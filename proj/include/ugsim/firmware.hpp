#pragma once

#include <cstdint>
#include <deque>
#include <optional>
#include <string>
#include <vector>

#include "ugsim/automaton.hpp"
#include "ugsim/fir_filter.hpp"
#include "ugsim/pneumatics.hpp"

namespace ugsim {

// Bounded FIFO used for inter-task messaging. On overflow the oldest
// element is dropped and counted.
template <typename T>
class BoundedQueue {
public:
    explicit BoundedQueue(std::size_t capacity) : cap_(capacity) {}

    void push(T v) {
        if (q_.size() == cap_) {
            q_.pop_front();
            ++dropped_;
        }
        q_.push_back(std::move(v));
    }

    std::optional<T> pop() {
        if (q_.empty()) return std::nullopt;
        T v = std::move(q_.front());
        q_.pop_front();
        return v;
    }

    bool empty() const { return q_.empty(); }
    std::size_t size() const { return q_.size(); }
    std::uint64_t dropped() const { return dropped_; }

private:
    std::deque<T> q_;
    std::size_t cap_;
    std::uint64_t dropped_ = 0;
};

// --- Line-based serial protocol ---------------------------------------
//
// Telemetry (one line per tick):  Q <t_ms> <STATE> <P_kpa> <F_gf>
// with STATE in {UNDEF, STARTUP, OPENED, CLOSING, CLOSED, OPENING} and the
// pressure/force printed with two decimals.
//
// Commands: "OPEN", "CLOSE", "SET FTHR <gf>". Reply is "OK" or
// "ERR <reason>".

std::string format_telemetry(const StateVector& q);

struct CommandParse {
    std::optional<Command> command;
    std::string error; // reason when rejected; both empty for a blank line
};

CommandParse parse_command_line(std::string line);

struct ButtonInputs {
    bool open = false;
    bool close = false;
};

// Two-task firmware emulation with a deterministic interleaved schedule:
// the communication task feeds `receive_line`/`drain_telemetry`, the
// sensing/actuation task is `tick`. The tasks only exchange data through
// the bounded queues, so replaying the same inputs reproduces the outputs
// byte for byte.
class Firmware {
public:
    explicit Firmware(ControllerConfig cfg, std::size_t queue_capacity = 64);

    // Communication task, inbound. Returns the protocol reply; empty lines
    // are ignored and produce no reply.
    std::string receive_line(const std::string& line);

    // Sensing/actuation task: filter sensors, drain the command queue once
    // (FIFO), step the automaton, queue one telemetry record.
    ActuatorOutputs tick(double t_s, double raw_pressure_kpa, double raw_force_gf,
                         const ButtonInputs& buttons = {});

    // Communication task, outbound. If records were lost to queue overflow
    // since the last drain, a "DROP <total>" line precedes the telemetry.
    std::vector<std::string> drain_telemetry();

    const ControllerConfig& config() const { return cfg_; }
    const AutomatonState& automaton_state() const { return auto_state_; }
    const StateVector& state_vector() const { return q_; }
    std::uint64_t dropped_telemetry() const { return telemetry_.dropped(); }

    // Sessions that begin after a completed boot start directly in opened.
    void start_opened();

private:
    ControllerConfig cfg_;
    AutomatonState auto_state_;
    StateVector q_;
    FirFilter pressure_filter_;
    FirFilter force_filter_;
    BoundedQueue<Command> inbox_;
    BoundedQueue<std::string> telemetry_;
    std::uint64_t drops_reported_ = 0;
    bool ticked_ = false;
};

// --- Scripted serial sessions ------------------------------------------

struct TranscriptEntry {
    double t_s = 0.0;
    std::string line;
};

// Parses "<t_s> <raw line>" entries; '#' starts a comment. Throws
// std::runtime_error with the offending line number.
std::vector<TranscriptEntry> parse_transcript(const std::string& text);

struct SerialSessionConfig {
    ControllerConfig controller;
    PneumaticParams pneumatics;
    double duration_s = 20.0;
    double dt_s = 0.001;      // physics substep
    bool start_opened = true; // false boots from power-up
};

// Runs the firmware against the pneumatic model, feeding transcript lines
// at their stamped times, and returns the full session log (replies plus
// telemetry). Deterministic: identical inputs give identical bytes.
std::string run_serial_session(const std::vector<TranscriptEntry>& transcript,
                               const SerialSessionConfig& cfg);

} // namespace ugsim
