#pragma once

namespace ugsim {

// Membrane classification by free-volume ratio: closed (jammed) at <= 1%,
// opened (fluidized) at >= 99%, in transition otherwise.
enum class MembranePhase { closed, opened, in_transition };

struct PneumaticParams {
    double beta_time_constant_s = 2.8; // free-volume first-order lag
    // Pressure relaxation constants, calibrated so that evacuation from
    // ambient crosses -21 kPa after 4.3 s and inflation from -21 kPa
    // crosses +0.5 kPa after 6.7 s.
    double tau_evac_s = 3.1017943379112713;  // 4.3 / ln 4
    double tau_infl_s = 2.4541862871739518;  // 6.7 / ln(23/1.5)
    double vacuum_floor_kpa = -28.0;         // measured pump stall differential
    double inflation_ceil_kpa = 2.0;         // slightly above the P_max trigger

    void validate() const; // throws std::invalid_argument
};

struct PneumaticState {
    double free_volume = 1.0;   // beta, in [0, 1]; 1 = fluidized, 0 = jammed
    double pressure_kpa = 0.0;  // gauge, in [-28, +2]
    bool pump_in_on = false;
    bool pump_out_on = false;
    bool valve1_open = false;   // inflation line
    bool valve2_open = false;   // vacuum line
};

// Advances the free-volume ratio one step toward `target` (0 or 1) using
// the exact discrete solution of the first-order lag, then clamps to [0, 1].
// Requires 0 < dt <= 0.01 s (fixed-timestep contract).
PneumaticState step_free_volume(PneumaticState s, double target, double dt_s,
                                const PneumaticParams& p);

// Advances the internal pressure: first-order relaxation toward the pump
// stall pressure while a pump runs; held constant when sealed. Requires dt > 0.
PneumaticState step_pressure(PneumaticState s, double dt_s, const PneumaticParams& p);

MembranePhase classify_membrane(double free_volume);

const char* to_string(MembranePhase phase);

} // namespace ugsim
