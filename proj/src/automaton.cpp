#include "ugsim/automaton.hpp"

#include <stdexcept>

namespace ugsim {

const char* to_string(GripperState s) {
    switch (s) {
    case GripperState::undefined: return "UNDEF";
    case GripperState::startup: return "STARTUP";
    case GripperState::opened: return "OPENED";
    case GripperState::closing: return "CLOSING";
    case GripperState::closed: return "CLOSED";
    case GripperState::opening: return "OPENING";
    }
    return "?";
}

void ControllerConfig::validate() const {
    if (!(p_min_kpa < p_max_kpa))
        throw std::invalid_argument("controller config: need p_min < p_max");
    if (!(t_vacc_s > 0.0) || !(t_infl_s > 0.0))
        throw std::invalid_argument("controller config: timeouts must be > 0");
    if (!(force_threshold_gf > 0.0))
        throw std::invalid_argument("controller config: force threshold must be > 0");
    if (!(sample_rate_hz > 0.0))
        throw std::invalid_argument("controller config: sample rate must be > 0");
    if (filter_taps < 1)
        throw std::invalid_argument("controller config: need at least one filter tap");
}

namespace {

ActuatorOutputs evacuate_outputs() {
    return ActuatorOutputs{false, true, false, true};
}

ActuatorOutputs inflate_outputs() {
    return ActuatorOutputs{true, false, true, false};
}

ActuatorOutputs sealed_outputs() { return ActuatorOutputs{}; }

// First open/close request this tick, buttons before serial commands.
enum class Request { none, open, close };

Request first_request(const CommandVector& u) {
    if (u.button_open) return Request::open;
    if (u.button_close) return Request::close;
    for (CommandKind k : u.user) {
        if (k == CommandKind::open) return Request::open;
        if (k == CommandKind::close) return Request::close;
    }
    return Request::none;
}

} // namespace

AutomatonStep step_automaton(const AutomatonState& a, const StateVector& q,
                             const CommandVector& u, double dt_s,
                             const ControllerConfig& cfg) {
    if (!(dt_s > 0.0))
        throw std::invalid_argument("step_automaton: dt must be > 0");

    AutomatonStep r;
    r.next = a;
    bool subphase_flipped = false;
    const double t = a.time_in_state_s;
    const Request req = first_request(u);

    switch (a.state) {
    case GripperState::undefined:
        // Power-up: membrane state unknown, run the boot cycle.
        r.next.state = GripperState::startup;
        r.next.startup_inflating = false;
        r.transitioned = true;
        break;

    case GripperState::startup:
        if (!a.startup_inflating) {
            if (q.pressure_kpa < cfg.p_min_kpa || t > cfg.t_vacc_s) {
                r.next.startup_inflating = true;
                subphase_flipped = true;
            }
        } else {
            if (q.pressure_kpa > cfg.p_max_kpa || t > cfg.t_infl_s) {
                r.next.state = GripperState::opened;
                r.transitioned = true;
            }
        }
        break;

    case GripperState::opened:
        if (q.force_gf > cfg.force_threshold_gf || req == Request::close) {
            r.next.state = GripperState::closing;
            r.transitioned = true;
        }
        break;

    case GripperState::closing:
        if (q.pressure_kpa < cfg.p_min_kpa || t > cfg.t_vacc_s) {
            r.next.state = GripperState::closed;
            r.transitioned = true;
        }
        break;

    case GripperState::closed:
        if (req == Request::open) {
            r.next.state = GripperState::opening;
            r.transitioned = true;
        }
        break;

    case GripperState::opening:
        if (q.pressure_kpa > cfg.p_max_kpa || t > cfg.t_infl_s) {
            r.next.state = GripperState::opened;
            r.transitioned = true;
        }
        break;
    }

    r.next.time_in_state_s =
        (r.transitioned || subphase_flipped) ? 0.0 : a.time_in_state_s + dt_s;

    switch (r.next.state) {
    case GripperState::undefined:
        r.outputs = sealed_outputs();
        break;
    case GripperState::startup:
        r.outputs = r.next.startup_inflating ? inflate_outputs() : evacuate_outputs();
        break;
    case GripperState::closing:
        r.outputs = evacuate_outputs();
        break;
    case GripperState::opening:
        r.outputs = inflate_outputs();
        break;
    case GripperState::opened:
    case GripperState::closed:
        r.outputs = sealed_outputs();
        break;
    }
    return r;
}

double free_volume_target(const ActuatorOutputs& out, GripperState state,
                          double current) {
    if (out.pump_out_on) return 0.0;
    if (out.pump_in_on) return 1.0;
    if (state == GripperState::closed) return 0.0;
    if (state == GripperState::opened) return 1.0;
    return current;
}

} // namespace ugsim
