#include "ugsim/scenario.hpp"

#include <future>
#include <stdexcept>

#include "ugsim/text_format.hpp"

namespace ugsim {

Scenario load_scenario(const KvConfig& cfg) {
    Scenario sc;
    GraspScenario& g = sc.grasp;

    g.peg.diameter_mm = cfg.get_double("scenario.peg_diameter_mm", g.peg.diameter_mm);
    g.activation_force_gf =
        cfg.get_double("scenario.activation_force_gf", g.activation_force_gf);
    g.fill_ratio = cfg.get_double("scenario.fill_ratio", g.fill_ratio);
    g.deadener_pct = cfg.get_double("scenario.deadener_pct", g.deadener_pct);
    g.success_threshold_gf =
        cfg.get_double("scenario.success_threshold_gf", g.success_threshold_gf);
    g.noise_gf = cfg.get_double("scenario.noise_gf", g.noise_gf);
    g.seed = cfg.get_u64("scenario.seed", g.seed);
    g.dt_s = cfg.get_double("scenario.dt_s", g.dt_s);
    g.fault_pull_away_at_s =
        cfg.get_double("scenario.fault_pull_away_at_s", g.fault_pull_away_at_s);
    sc.repetitions = cfg.get_int("scenario.repetitions", sc.repetitions);

    ControllerConfig& c = g.controller;
    c.p_min_kpa = cfg.get_double("controller.p_min_kpa", c.p_min_kpa);
    c.p_max_kpa = cfg.get_double("controller.p_max_kpa", c.p_max_kpa);
    c.force_threshold_gf = cfg.get_double("controller.f_thr_gf", c.force_threshold_gf);
    c.t_vacc_s = cfg.get_double("controller.t_vacc_s", c.t_vacc_s);
    c.t_infl_s = cfg.get_double("controller.t_infl_s", c.t_infl_s);
    c.sample_rate_hz = cfg.get_double("controller.sample_rate_hz", c.sample_rate_hz);
    c.filter_taps = cfg.get_int("controller.filter_taps", c.filter_taps);

    PneumaticParams& p = g.pneumatics;
    p.beta_time_constant_s =
        cfg.get_double("pneumatics.beta_time_constant_s", p.beta_time_constant_s);
    p.tau_evac_s = cfg.get_double("pneumatics.tau_evac_s", p.tau_evac_s);
    p.tau_infl_s = cfg.get_double("pneumatics.tau_infl_s", p.tau_infl_s);
    p.vacuum_floor_kpa = cfg.get_double("pneumatics.vacuum_floor_kpa", p.vacuum_floor_kpa);
    p.inflation_ceil_kpa =
        cfg.get_double("pneumatics.inflation_ceil_kpa", p.inflation_ceil_kpa);

    ContactParams& m = g.contact;
    m.air_coeff = cfg.get_double("contact.air_coeff", m.air_coeff);
    m.air_exp = cfg.get_double("contact.air_exp", m.air_exp);
    m.lumped_coeff = cfg.get_double("contact.lumped_coeff", m.lumped_coeff);
    m.lumped_exp = cfg.get_double("contact.lumped_exp", m.lumped_exp);
    m.free_length_max_m = cfg.get_double("contact.free_length_max_m", m.free_length_max_m);
    m.travel_limit_m = cfg.get_double("contact.travel_limit_m", m.travel_limit_m);

    JigParams& j = g.jig;
    g.tracker_gain_mm_s_per_gf =
        cfg.get_double("jig.kp_mm_s_per_gf", g.tracker_gain_mm_s_per_gf);
    j.v_max_m_s = cfg.get_double("jig.v_max_mm_s", j.v_max_m_s * 1e3) * 1e-3;
    j.retract_speed_m_s =
        cfg.get_double("jig.retract_speed_mm_s", j.retract_speed_m_s * 1e3) * 1e-3;
    j.contact_start_m = cfg.get_double("jig.contact_start_m", j.contact_start_m);
    j.travel_m = cfg.get_double("jig.travel_m", j.travel_m);
    j.retract_clearance_m = cfg.get_double("jig.retract_clearance_m", j.retract_clearance_m);
    j.attachment_stiffness_n_m =
        cfg.get_double("jig.attachment_stiffness_n_m", j.attachment_stiffness_n_m);
    g.approach_overpush_gf =
        cfg.get_double("jig.approach_overpush_gf", g.approach_overpush_gf);

    if (sc.repetitions < 1)
        throw std::runtime_error("scenario: repetitions must be >= 1");
    return sc;
}

void SweepSpec::validate() const {
    if (values.empty()) throw std::runtime_error("sweep: values must be non-empty");
    for (std::size_t i = 0; i + 1 < values.size(); ++i)
        if (!(values[i] < values[i + 1]))
            throw std::runtime_error("sweep: values must be strictly increasing");
    base.grasp.validate();
}

SweepSpec load_sweep_spec(const KvConfig& cfg) {
    SweepSpec spec;
    const std::string axis = cfg.get_string("sweep.axis", "");
    if (axis == "activation_force")
        spec.axis = SweepAxis::activation_force;
    else if (axis == "deadener")
        spec.axis = SweepAxis::deadener;
    else if (axis == "fill_ratio")
        spec.axis = SweepAxis::fill_ratio;
    else
        throw std::runtime_error(
            "sweep: axis must be one of activation_force, deadener, fill_ratio; got '" +
            axis + "'");
    spec.values = cfg.get_double_list("sweep.values");
    spec.base = load_scenario(cfg);
    return spec;
}

std::uint64_t derive_seed(std::uint64_t base, std::uint64_t value_index, std::uint64_t rep) {
    std::uint64_t z = base + 0x9E3779B97F4A7C15ull * (value_index + 1) + rep;
    z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ull;
    z = (z ^ (z >> 27)) * 0x94D049BB133111EBull;
    return z ^ (z >> 31);
}

namespace {

GraspScenario scenario_for(const SweepSpec& spec, std::size_t value_index, int rep) {
    GraspScenario g = spec.base.grasp;
    const double v = spec.values[value_index];
    switch (spec.axis) {
    case SweepAxis::activation_force: g.activation_force_gf = v; break;
    case SweepAxis::deadener: g.deadener_pct = v; break;
    case SweepAxis::fill_ratio: g.fill_ratio = v; break;
    }
    g.seed = derive_seed(spec.base.grasp.seed, value_index, static_cast<std::uint64_t>(rep));
    return g;
}

} // namespace

std::vector<SweepRow> run_sweep(const SweepSpec& spec) {
    spec.validate();

    // Validate every instance up front so errors surface before any work runs.
    for (std::size_t vi = 0; vi < spec.values.size(); ++vi)
        scenario_for(spec, vi, 1).validate();

    struct Job {
        double axis_value;
        int rep;
        std::future<GraspOutcome> outcome;
    };
    std::vector<Job> jobs;
    for (std::size_t vi = 0; vi < spec.values.size(); ++vi) {
        for (int rep = 1; rep <= spec.base.repetitions; ++rep) {
            GraspScenario g = scenario_for(spec, vi, rep);
            jobs.push_back(Job{spec.values[vi], rep,
                               std::async(std::launch::async, [g] {
                                   return run_grasp(g).outcome;
                               })});
        }
    }

    std::vector<SweepRow> rows;
    rows.reserve(jobs.size());
    for (Job& job : jobs) {
        const GraspOutcome o = job.outcome.get();
        rows.push_back(SweepRow{job.axis_value, job.rep, o.success, o.holding_force_n,
                                o.min_tracked_gf, o.t_end_s - o.t_start_s});
    }
    return rows;
}

std::string write_sweep_rows_csv(const std::vector<SweepRow>& rows) {
    std::string csv = "axis_value,rep,success,F_h_N,min_tracked_gf,T_SE_s\n";
    for (const SweepRow& r : rows) {
        csv += format_general(r.axis_value);
        csv += ',';
        csv += std::to_string(r.rep);
        csv += ',';
        csv += r.success ? '1' : '0';
        csv += ',';
        csv += format_general(r.holding_force_n);
        csv += ',';
        csv += format_general(r.min_tracked_gf);
        csv += ',';
        csv += format_general(r.t_se_s);
        csv += '\n';
    }
    return csv;
}

} // namespace ugsim
