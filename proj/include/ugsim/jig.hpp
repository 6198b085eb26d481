#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "ugsim/automaton.hpp"
#include "ugsim/contact_model.hpp"
#include "ugsim/pneumatics.hpp"

namespace ugsim {

// Belt-driven linear rail carrying the gripper toward a fixed test peg.
struct JigParams {
    double v_max_m_s = 0.100;         // rail velocity limit
    double travel_m = 0.300;
    double retract_speed_m_s = 0.020; // constant-velocity pull-off
    double contact_start_m = 0.050;   // sled travel until the inflated membrane touches
    double retract_clearance_m = 0.030;
    double attachment_stiffness_n_m = 2000.0; // pull ramp of the jammed grip

    void validate() const;
};

// Proportional force tracker driving the sled: e = target - measured,
// commanded feed = gain * e in mm/s, saturated at the rail limit.
struct ForceTracker {
    double target_gf = 350.0;
    double gain_mm_s_per_gf = 6.0;
    double last_error_gf = 0.0;
};

// One controller update; returns the commanded feed in m/s. Requires dt > 0.
double force_control_step(ForceTracker& tracker, double measured_gf, double dt_s,
                          double v_max_m_s);

// Holding-force surrogate calibrated against bench medians; a lookup, not
// physics. The saturation fraction is interpolated over activation force for
// the two calibrated fill ratios, cross-faded in between; the additive
// multiplier is interpolated over the deadener percentage.
struct HoldingAnchor {
    double at = 0.0;       // activation force (gf) or deadener (%)
    double value = 0.0;    // saturation fraction or multiplier
};

struct HoldingForceModel {
    double fill_ratio = 0.66;      // (0, 1]
    double deadener_pct = 0.0;     // [0, 15], calibration range of the additive
    double max_holding_force_n = 10.1;

    double low_fill = 0.66;
    double high_fill = 0.90;
    std::vector<HoldingAnchor> low_fill_curve = {{150.0, 0.82}, {250.0, 1.0}};
    std::vector<HoldingAnchor> high_fill_curve = {{150.0, 0.40}, {650.0, 0.99}};
    std::vector<HoldingAnchor> deadener_curve = {
        {0.0, 1.0}, {5.0, 12.8 / 10.1}, {10.0, 13.1 / 10.1}, {15.0, 15.4 / 10.1}};
};

// Predicted holding force in newtons. The peg diameter is validated but does
// not scale the prediction (single-peg calibration). Throws std::domain_error
// for deadener percentages beyond the calibrated range.
double predict_holding_force(const HoldingForceModel& m, double activation_gf,
                             double diameter_mm);

// Rigid-connection break rule: detaches when the measured pull force reaches
// the holding force or the membrane re-fluidizes past the jamming threshold.
bool attachment_update(bool attached, double pull_force_n, double holding_force_n,
                       double free_volume);

struct GraspScenario {
    Peg peg{40.0};
    double activation_force_gf = 350.0; // nominal tracked force
    double fill_ratio = 0.66;
    double deadener_pct = 0.0;
    double success_threshold_gf = 250.0;
    double noise_gf = 0.0;     // uniform +-amplitude on the force channel
    std::uint64_t seed = 1;
    double dt_s = 0.001;
    double tracker_gain_mm_s_per_gf = 6.0;
    double approach_overpush_gf = 2.0; // approach targets F_a plus this margin
    double fault_pull_away_at_s = -1.0; // >= 0 forces the sled away during
                                        // evacuation (contact-loss fixture)

    ContactParams contact;
    PneumaticParams pneumatics;
    ControllerConfig controller;
    JigParams jig;

    void validate() const; // throws std::invalid_argument
};

struct TimelineRow {
    double t_s = 0.0;
    GripperState state = GripperState::opened;
    double free_volume = 1.0;
    double pressure_kpa = 0.0;
    double gap_m = 0.0;      // signed; intrusion into the membrane when > 0
    double u_feed_mm_s = 0.0;
    double force_gf = 0.0;   // load-cell reading; negative while pulling
    bool attached = false;
};

struct GraspOutcome {
    bool success = false;
    bool contact_lost = false;
    double min_tracked_gf = 0.0;      // over the evacuation interval
    double holding_force_n = 0.0;
    double t_start_s = 0.0;           // evacuation start
    double t_end_s = 0.0;             // evacuation end (vacuum reached)
    double jam_settle_s = 0.0;        // membrane fully jammed, retraction begins
    double peak_retract_force_n = 0.0; // most negative reading (a pull)
    double peak_retract_time_s = 0.0;
    double retract_start_s = 0.0;
    double retract_end_s = 0.0;
};

struct GraspResult {
    GraspOutcome outcome;
    std::vector<TimelineRow> timeline;
};

// Runs the four-phase grasp (approach, evacuation with force tracking,
// constant-velocity retraction, release) against the contact and pneumatic
// models. Deterministic for a fixed scenario.
GraspResult run_grasp(const GraspScenario& sc);

// Timeline CSV with header t_s,state,beta,P_kpa,x_m,u_feed_mms,F_m_gf,attached.
std::string write_timeline_csv(const std::vector<TimelineRow>& rows);

// Outcome as a flat key = value block.
std::string to_string(const GraspOutcome& o);

} // namespace ugsim
