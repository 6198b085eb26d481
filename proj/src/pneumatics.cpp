#include "ugsim/pneumatics.hpp"

#include <cmath>
#include <stdexcept>

namespace ugsim {

void PneumaticParams::validate() const {
    if (!(beta_time_constant_s > 0.0) || !(tau_evac_s > 0.0) || !(tau_infl_s > 0.0))
        throw std::invalid_argument("pneumatic params: time constants must be > 0");
    if (!(vacuum_floor_kpa < inflation_ceil_kpa))
        throw std::invalid_argument("pneumatic params: vacuum floor must lie below inflation ceiling");
}

namespace {
double clamp(double v, double lo, double hi) {
    return v < lo ? lo : (v > hi ? hi : v);
}
}

PneumaticState step_free_volume(PneumaticState s, double target, double dt_s,
                                const PneumaticParams& p) {
    if (!(dt_s > 0.0) || !(dt_s <= 0.01))
        throw std::invalid_argument("step_free_volume: dt must be in (0, 0.01] s");
    const double k = std::exp(-dt_s / p.beta_time_constant_s);
    s.free_volume = clamp(target + (s.free_volume - target) * k, 0.0, 1.0);
    return s;
}

PneumaticState step_pressure(PneumaticState s, double dt_s, const PneumaticParams& p) {
    if (!(dt_s > 0.0))
        throw std::invalid_argument("step_pressure: dt must be > 0");
    if (s.pump_in_on && s.pump_out_on)
        throw std::logic_error("step_pressure: antagonistic pumps may not run together");
    if (s.pump_out_on) {
        const double k = std::exp(-dt_s / p.tau_evac_s);
        s.pressure_kpa = p.vacuum_floor_kpa + (s.pressure_kpa - p.vacuum_floor_kpa) * k;
    } else if (s.pump_in_on) {
        const double k = std::exp(-dt_s / p.tau_infl_s);
        s.pressure_kpa = p.inflation_ceil_kpa + (s.pressure_kpa - p.inflation_ceil_kpa) * k;
    }
    // Sealed (pumps off, valves closed): pressure is held as-is.
    s.pressure_kpa = clamp(s.pressure_kpa, p.vacuum_floor_kpa, p.inflation_ceil_kpa);
    return s;
}

MembranePhase classify_membrane(double free_volume) {
    if (!(free_volume >= 0.0) || !(free_volume <= 1.0))
        throw std::invalid_argument("classify_membrane: free volume must be in [0, 1]");
    if (free_volume <= 0.01) return MembranePhase::closed;
    if (free_volume >= 0.99) return MembranePhase::opened;
    return MembranePhase::in_transition;
}

const char* to_string(MembranePhase phase) {
    switch (phase) {
    case MembranePhase::closed: return "closed";
    case MembranePhase::opened: return "opened";
    case MembranePhase::in_transition: return "in-transition";
    }
    return "?";
}

} // namespace ugsim
