#include "ugsim/contact_model.hpp"

#include <cmath>
#include <stdexcept>
#include <string>

namespace ugsim {

void ContactParams::validate() const {
    if (!(air_coeff > 0.0) || !(lumped_coeff > 0.0))
        throw std::invalid_argument("contact params: spring coefficients must be > 0");
    if (!(air_exp > 1.0) || !(lumped_exp > 1.0))
        throw std::invalid_argument("contact params: spring exponents must be > 1");
    if (!(free_length_max_m > 0.0) || !(free_length_max_m < travel_limit_m))
        throw std::invalid_argument("contact params: need 0 < free_length_max_m < travel_limit_m");
    if (!(disk_diameter_m > 0.0) || !(disk_mass_kg > 0.0))
        throw std::invalid_argument("contact params: disk geometry must be positive");
}

void Peg::validate() const {
    if (!(diameter_mm > 0.0) || !(diameter_mm <= 60.0))
        throw std::domain_error("peg diameter " + std::to_string(diameter_mm) +
                                " mm outside model validity range (0, 60]");
}

double ramp(double x) { return x < 0.0 ? 0.0 : x; }

double air_spring_force(double x_m, const Peg& peg, const ContactParams& p) {
    peg.validate();
    if (!(x_m >= 0.0))
        throw std::invalid_argument("air_spring_force: intrusion must be >= 0");
    if (x_m == 0.0) return 0.0;
    return p.air_coeff * peg.diameter_mm * std::pow(x_m, p.air_exp);
}

double lumped_spring_force(double x_m, const ContactParams& p) {
    if (!(x_m >= 0.0))
        throw std::invalid_argument("lumped_spring_force: intrusion must be >= 0");
    if (x_m == 0.0) return 0.0;
    return p.lumped_coeff * std::pow(x_m, p.lumped_exp);
}

double shrink(double free_volume, const ContactParams& p) {
    return p.free_length_max_m * free_volume;
}

namespace {
double clamp01(double v) { return v < 0.0 ? 0.0 : (v > 1.0 ? 1.0 : v); }
}

double contact_force(double x_m, double free_volume, const Peg& peg,
                     const ContactParams& p) {
    if (!(x_m >= 0.0) || !(x_m <= p.travel_limit_m))
        throw std::domain_error("contact_force: joint position " + std::to_string(x_m) +
                                " m outside [0, " + std::to_string(p.travel_limit_m) + "]");
    const double x_a = shrink(clamp01(free_volume), p);
    return air_spring_force(ramp(x_m), peg, p) +
           lumped_spring_force(ramp(x_m - x_a), p);
}

double contact_stiffness(double x_m, double free_volume, const Peg& peg,
                         const ContactParams& p) {
    peg.validate();
    const double x_a = shrink(clamp01(free_volume), p);
    double s = 0.0;
    if (x_m > 0.0)
        s += p.air_coeff * peg.diameter_mm * p.air_exp * std::pow(x_m, p.air_exp - 1.0);
    if (x_m - x_a > 0.0)
        s += p.lumped_coeff * p.lumped_exp * std::pow(x_m - x_a, p.lumped_exp - 1.0);
    return s;
}

} // namespace ugsim
