#include "ugsim/model_check.hpp"

#include <algorithm>
#include <set>

#include "ugsim/text_format.hpp"

namespace ugsim {

namespace {

using Edge = std::pair<GripperState, GripperState>;

const std::set<Edge>& labeled_edges() {
    static const std::set<Edge> edges = {
        {GripperState::undefined, GripperState::startup}, // 1, power-up
        {GripperState::startup, GripperState::opened},    // 2, boot done
        {GripperState::opened, GripperState::closing},    // 4, force or command
        {GripperState::closing, GripperState::closed},    // 3, vacuum or timeout
        {GripperState::closed, GripperState::opening},    // 5, command
        {GripperState::opening, GripperState::opened},    // 6, pressure or timeout
    };
    return edges;
}

} // namespace

std::string transition_table() {
    std::string s;
    s += "edge 1: undefined -> startup   on power-up\n";
    s += "edge 2: startup   -> opened    when the boot cycle finishes (evacuate, then inflate past P_max)\n";
    s += "edge 3: closing   -> closed    when P < P_min or t > t_vacc\n";
    s += "edge 4: opened    -> closing   when F_m > F_thr or an open->close command arrives\n";
    s += "edge 5: closed    -> opening   on a close->open command\n";
    s += "edge 6: opening   -> opened    when P > P_max or t > t_infl\n";
    return s;
}

ModelCheckReport run_model_check(const ControllerConfig& cfg,
                                 const PneumaticParams& pneumatics, double dt_s) {
    cfg.validate();
    pneumatics.validate();

    ModelCheckReport rep;
    std::set<Edge> observed;

    // Input discretization. The grids bracket every guard threshold from
    // both sides.
    std::vector<double> pressures;
    for (double p = -28.0; p <= 2.01; p += 0.5) pressures.push_back(p);
    pressures.push_back(cfg.p_min_kpa - 0.01);
    pressures.push_back(cfg.p_min_kpa + 0.01);
    pressures.push_back(cfg.p_max_kpa - 0.01);
    pressures.push_back(cfg.p_max_kpa + 0.01);

    std::vector<double> forces;
    for (double f = 0.0; f <= 700.0; f += 50.0) forces.push_back(f);
    forces.push_back(cfg.force_threshold_gf - 0.5);
    forces.push_back(cfg.force_threshold_gf + 0.5);

    std::vector<double> dwell_times;
    const double t_longest = std::max(cfg.t_vacc_s, cfg.t_infl_s);
    for (double t = 0.0; t <= t_longest + 2.0; t += 0.5) dwell_times.push_back(t);
    dwell_times.push_back(cfg.t_vacc_s - dt_s);
    dwell_times.push_back(cfg.t_vacc_s + dt_s);
    dwell_times.push_back(cfg.t_infl_s - dt_s);
    dwell_times.push_back(cfg.t_infl_s + dt_s);

    struct CommandCase {
        bool button_open, button_close;
        std::vector<CommandKind> user;
    };
    const std::vector<CommandCase> command_cases = {
        {false, false, {}},
        {true, false, {}},
        {false, true, {}},
        {true, true, {}},
        {false, false, {CommandKind::open}},
        {false, false, {CommandKind::close}},
        {false, false, {CommandKind::close, CommandKind::open}},
        {true, false, {CommandKind::close}},
    };

    const GripperState states[] = {GripperState::undefined, GripperState::startup,
                                   GripperState::opened,    GripperState::closing,
                                   GripperState::closed,    GripperState::opening};

    auto check_outputs = [&](const AutomatonStep& step) {
        if (step.outputs.pump_in_on && step.outputs.pump_out_on) {
            rep.pumps_never_both_on = false;
            rep.violations.push_back("both pumps commanded in state " +
                                     std::string(to_string(step.next.state)));
        }
        if ((step.next.state == GripperState::opened ||
             step.next.state == GripperState::closed) &&
            (step.outputs.pump_in_on || step.outputs.pump_out_on)) {
            rep.sealed_states_pumps_off = false;
            rep.violations.push_back("pump running in sealed state " +
                                     std::string(to_string(step.next.state)));
        }
    };

    for (GripperState s : states) {
        for (int sub = 0; sub < (s == GripperState::startup ? 2 : 1); ++sub) {
            for (double p : pressures) {
                for (double f : forces) {
                    for (double t : dwell_times) {
                        for (const CommandCase& cc : command_cases) {
                            AutomatonState a;
                            a.state = s;
                            a.startup_inflating = sub == 1;
                            a.time_in_state_s = t;
                            StateVector q{0.0, s, p, f};
                            CommandVector u;
                            u.button_open = cc.button_open;
                            u.button_close = cc.button_close;
                            u.user = cc.user;

                            const AutomatonStep step = step_automaton(a, q, u, dt_s, cfg);
                            ++rep.configurations;
                            check_outputs(step);
                            if (step.transitioned) {
                                const Edge e{s, step.next.state};
                                observed.insert(e);
                                if (!labeled_edges().count(e)) {
                                    rep.only_labeled_edges = false;
                                    rep.violations.push_back(
                                        std::string("unlabeled edge ") + to_string(e.first) +
                                        " -> " + to_string(e.second));
                                }
                            }
                        }
                    }
                }
            }
        }
    }

    rep.observed_edges.assign(observed.begin(), observed.end());
    rep.all_edges_observed = observed.size() == labeled_edges().size() &&
                             std::includes(observed.begin(), observed.end(),
                                           labeled_edges().begin(), labeled_edges().end());
    if (!rep.all_edges_observed)
        rep.violations.push_back("not every labeled edge was exercised by the grids");

    // Closed-loop boot: from power-up against the pneumatic model, opened
    // must be reached within t_vacc + t_infl plus two steps.
    {
        AutomatonState a; // undefined
        PneumaticState pneu;
        pneu.free_volume = 0.5; // genuinely unknown after power-up
        pneu.pressure_kpa = 0.0;
        rep.boot_bound_s = cfg.t_vacc_s + cfg.t_infl_s + 2.0 * dt_s;
        const long max_ticks = static_cast<long>(rep.boot_bound_s / dt_s) + 2;
        bool reached = false;
        for (long i = 0; i <= max_ticks; ++i) {
            const double t = static_cast<double>(i) * dt_s;
            StateVector q{t, a.state, pneu.pressure_kpa, 0.0};
            const AutomatonStep step = step_automaton(a, q, {}, dt_s, cfg);
            check_outputs(step);
            a = step.next;
            pneu.pump_in_on = step.outputs.pump_in_on;
            pneu.pump_out_on = step.outputs.pump_out_on;
            pneu.valve1_open = step.outputs.valve1_open;
            pneu.valve2_open = step.outputs.valve2_open;
            pneu = step_pressure(pneu, dt_s, pneumatics);
            pneu = step_free_volume(
                pneu, free_volume_target(step.outputs, a.state, pneu.free_volume), dt_s,
                pneumatics);
            if (a.state == GripperState::opened) {
                rep.boot_time_s = t;
                reached = true;
                break;
            }
        }
        rep.boot_within_bound = reached && rep.boot_time_s <= rep.boot_bound_s;
        if (!rep.boot_within_bound)
            rep.violations.push_back("boot did not reach opened within " +
                                     format_general(rep.boot_bound_s) + " s");
    }

    return rep;
}

std::string ModelCheckReport::to_string() const {
    std::string s;
    s += "configurations_explored = " + std::to_string(configurations) + "\n";
    s += std::string("pumps_never_both_on = ") + (pumps_never_both_on ? "true" : "false") + "\n";
    s += std::string("sealed_states_pumps_off = ") +
         (sealed_states_pumps_off ? "true" : "false") + "\n";
    s += std::string("only_labeled_edges = ") + (only_labeled_edges ? "true" : "false") + "\n";
    s += std::string("all_edges_observed = ") + (all_edges_observed ? "true" : "false") + "\n";
    s += "boot_time_s = " + format_general(boot_time_s) + "\n";
    s += "boot_bound_s = " + format_general(boot_bound_s) + "\n";
    s += std::string("boot_within_bound = ") + (boot_within_bound ? "true" : "false") + "\n";
    s += "observed_edges =";
    for (const auto& [from, to] : observed_edges)
        s += std::string(" ") + ugsim::to_string(from) + "->" + ugsim::to_string(to);
    s += "\n";
    for (const std::string& v : violations) s += "violation: " + v + "\n";
    return s;
}

} // namespace ugsim
