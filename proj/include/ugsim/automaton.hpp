#pragma once

#include <vector>

namespace ugsim {

// Discrete gripper states. After power-up the physical membrane state is
// unknown, so the machine boots through a startup cycle before reaching
// opened.
enum class GripperState { undefined, startup, opened, closing, closed, opening };

// Telemetry token, e.g. "OPENED".
const char* to_string(GripperState s);

// Filtered sensor snapshot the automaton acts on.
struct StateVector {
    double t_s = 0.0;
    GripperState state = GripperState::undefined;
    double pressure_kpa = 0.0;
    double force_gf = 0.0;
};

enum class CommandKind { open, close, set_force_threshold };

struct Command {
    CommandKind kind = CommandKind::open;
    double value_gf = 0.0; // payload of set_force_threshold
};

// Requests presented to one automaton step. Buttons take precedence over
// serial commands; serial commands keep their FIFO arrival order.
struct CommandVector {
    bool button_open = false;
    bool button_close = false;
    std::vector<CommandKind> user; // open/close only; config commands are
                                   // consumed upstream by the firmware
};

struct ActuatorOutputs {
    bool pump_in_on = false;
    bool pump_out_on = false;
    bool valve1_open = false; // inflation line
    bool valve2_open = false; // vacuum line
};

struct ControllerConfig {
    double p_min_kpa = -21.0;        // lower trigger point
    double p_max_kpa = 0.5;          // upper trigger point
    double force_threshold_gf = 250.0; // auto-close trigger
    double t_vacc_s = 8.0;           // closing timeout (sensor-failure safety)
    double t_infl_s = 10.0;          // opening timeout
    double sample_rate_hz = 100.0;
    int filter_taps = 5;

    void validate() const; // throws std::invalid_argument
};

struct AutomatonState {
    GripperState state = GripperState::undefined;
    bool startup_inflating = false; // startup runs evacuate-then-inflate
    double time_in_state_s = 0.0;   // since the last transition (or sub-phase flip)
};

struct AutomatonStep {
    AutomatonState next;
    ActuatorOutputs outputs;
    bool transitioned = false; // discrete state changed this step
};

// Pure transition function. Evaluates the guard edges for the current state
// first, then command-triggered edges (buttons before serial, FIFO). At most
// one discrete transition happens per step; the outputs correspond to the
// state after the step.
AutomatonStep step_automaton(const AutomatonState& a, const StateVector& q,
                             const CommandVector& u, double dt_s,
                             const ControllerConfig& cfg);

// Free-volume setpoint implied by the actuation: pumping out drives the
// membrane empty, pumping in drives it full. A sealed gripper keeps creeping
// toward the state the held pressure maintains (vacuum keeps compacting the
// filler, held inflation keeps the membrane full); in the remaining sealed
// states the current value is held.
double free_volume_target(const ActuatorOutputs& out, GripperState state,
                          double current);

} // namespace ugsim
