#pragma once

#include <string>
#include <utility>
#include <vector>

#include "ugsim/automaton.hpp"
#include "ugsim/pneumatics.hpp"

namespace ugsim {

// Exhaustive small-step exploration of the gripper automaton over discretized
// pressure, force, dwell-time and command inputs, plus a closed-loop boot run
// against the pneumatic model. Checks:
//   - the antagonistic pumps are never driven together,
//   - sealed states (opened, closed) keep both pumps off,
//   - every observed state change is one of the six labeled edges,
//   - opened is reached from power-up within t_vacc + t_infl + 2 steps.
struct ModelCheckReport {
    std::size_t configurations = 0;
    bool pumps_never_both_on = true;
    bool sealed_states_pumps_off = true;
    bool only_labeled_edges = true;
    bool all_edges_observed = false;
    bool boot_within_bound = false;
    double boot_time_s = 0.0;
    double boot_bound_s = 0.0;
    std::vector<std::pair<GripperState, GripperState>> observed_edges;
    std::vector<std::string> violations; // empty when everything holds

    bool ok() const {
        return pumps_never_both_on && sealed_states_pumps_off && only_labeled_edges &&
               all_edges_observed && boot_within_bound;
    }

    std::string to_string() const;
};

ModelCheckReport run_model_check(const ControllerConfig& cfg,
                                 const PneumaticParams& pneumatics,
                                 double dt_s = 0.001);

// Human-readable table of the six labeled transitions.
std::string transition_table();

} // namespace ugsim
