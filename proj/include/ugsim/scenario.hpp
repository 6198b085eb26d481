#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "ugsim/jig.hpp"
#include "ugsim/kv_config.hpp"

namespace ugsim {

// A configured experiment: one grasp setup plus how often to repeat it.
struct Scenario {
    GraspScenario grasp;
    int repetitions = 1;
};

// Builds a scenario from a parsed config, filling every unset key with its
// default. Unknown keys are an error so typos cannot silently change runs.
Scenario load_scenario(const KvConfig& cfg);

enum class SweepAxis { activation_force, deadener, fill_ratio };

struct SweepSpec {
    SweepAxis axis = SweepAxis::activation_force;
    std::vector<double> values; // non-empty, strictly increasing
    Scenario base;

    void validate() const;
};

// Requires a [sweep] section with `axis` and `values` on top of the scenario
// keys.
SweepSpec load_sweep_spec(const KvConfig& cfg);

struct SweepRow {
    double axis_value = 0.0;
    int rep = 1;
    bool success = false;
    double holding_force_n = 0.0;
    double min_tracked_gf = 0.0;
    double t_se_s = 0.0;
};

// Runs every (value, repetition) grasp as an independent simulation instance
// (in parallel) and gathers the rows in deterministic (value, rep) order.
std::vector<SweepRow> run_sweep(const SweepSpec& spec);

// CSV with header axis_value,rep,success,F_h_N,min_tracked_gf,T_SE_s.
std::string write_sweep_rows_csv(const std::vector<SweepRow>& rows);

// Per-instance sub-seed derivation (splitmix-style), stable across runs.
std::uint64_t derive_seed(std::uint64_t base, std::uint64_t value_index,
                          std::uint64_t rep);

} // namespace ugsim
