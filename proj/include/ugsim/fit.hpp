#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "ugsim/contact_model.hpp"

namespace ugsim {

// Which spring the sweep data describes. The air model is linear in the
// peg diameter (F = c * D * x^e); the lumped model ignores the diameter.
enum class SweepModel { air, lumped };

struct SweepSample {
    double x_m = 0.0;
    std::optional<double> diameter_mm; // absent for lumped sweeps
    double force_n = 0.0;
};

struct FitResult {
    double coefficient = 0.0;
    double exponent = 0.0;
    double residual_rms_n = 0.0;   // linear domain, after refinement
    double init_coefficient = 0.0; // log-log least-squares stage
    double init_exponent = 0.0;
    double log_residual_rms = 0.0; // log domain, from the initializer
    int iterations = 0;
    std::size_t sample_count = 0;
};

// Fits F = c * x^e (lumped) or F = c * D * x^e (air) by closed-form
// log-log least squares followed by damped Gauss-Newton on the linear-domain
// residual. Throws std::invalid_argument naming the offending sample index
// for non-positive data, and on degenerate designs (fewer than three
// samples, or all x equal).
FitResult fit_power_law(const std::vector<SweepSample>& samples, SweepModel model);

struct SweepGrid {
    std::vector<double> x_values_m;
    std::vector<double> diameters_mm; // ignored for lumped sweeps
    double noise_rms_n = 0.0;         // Gaussian, seeded
    std::uint64_t seed = 0;
};

// Evaluates the forward contact-model springs on the grid, optionally adding
// Gaussian noise. Deterministic for a fixed seed.
std::vector<SweepSample> generate_sweep(const ContactParams& params, SweepModel model,
                                        const SweepGrid& grid);

// CSV header is "x_m,D_mm,F_N" when diameters are present, "x_m,F_N" otherwise.
std::string write_sweep_csv(const std::vector<SweepSample>& samples);

// Throws std::runtime_error naming the offending file line.
std::vector<SweepSample> read_sweep_csv(const std::string& text);

std::string to_string(const FitResult& r); // flat key = value block

} // namespace ugsim
