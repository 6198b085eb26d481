#pragma once

namespace ugsim {

// Contact model of the gripper membrane: two compression-only power-law
// springs plus a free length that shrinks linearly with the membrane's
// free-volume ratio.
//
// Units: intrusion x in meters, peg diameter D in millimeters, forces in
// newtons. The identified coefficients below assume exactly this mix; the
// regression tooling (fit.hpp) is unit-agnostic.
struct ContactParams {
    double air_coeff = 102.87;     // N / (mm * m^air_exp), inflated-membrane spring
    double air_exp = 1.88;         // dimensionless, > 1
    double lumped_coeff = 25119.75;// N / m^lumped_exp, jammed-assembly spring
    double lumped_exp = 1.29;      // dimensionless, > 1
    double free_length_max_m = 0.0408; // soft travel at full inflation
    double travel_limit_m = 0.060;     // membrane height, prismatic joint limit
    double disk_diameter_m = 0.080;
    double disk_mass_kg = 0.020;       // filler plus membrane

    // Throws std::invalid_argument on a non-physical parameter set.
    void validate() const;
};

// Cylindrical test payload. The air-spring fit is only valid for
// diameters in (0, 60] mm.
struct Peg {
    double diameter_mm = 40.0;

    void validate() const; // throws std::domain_error outside (0, 60]
};

// Compression-only clamp: 0 for x < 0, x otherwise.
double ramp(double x);

// Elastic force of the inflated membrane, air_coeff * D * x^air_exp.
// Requires x >= 0 and a valid peg.
double air_spring_force(double x_m, const Peg& peg, const ContactParams& p);

// Lumped elastic force of the jammed membrane/assembly, lumped_coeff * x^lumped_exp.
// Independent of peg diameter. Requires x >= 0.
double lumped_spring_force(double x_m, const ContactParams& p);

// Free length of the membrane at a given free-volume ratio (linear map).
double shrink(double free_volume, const ContactParams& p);

// Combined quasi-static contact force at joint position x and free-volume
// ratio. Throws std::domain_error if x is outside [0, travel_limit_m];
// free_volume is clamped to [0, 1] before use.
double contact_force(double x_m, double free_volume, const Peg& peg,
                     const ContactParams& p);

// d(contact_force)/dx at the current operating point (piecewise analytic).
double contact_stiffness(double x_m, double free_volume, const Peg& peg,
                         const ContactParams& p);

} // namespace ugsim
