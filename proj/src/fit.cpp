#include "ugsim/fit.hpp"

#include <charconv>
#include <cmath>
#include <random>
#include <sstream>
#include <stdexcept>

#include "ugsim/text_format.hpp"

namespace ugsim {

namespace {

// Scales the model by D for air sweeps so both models reduce to F = c * x^e.
double scale_of(const SweepSample& s, SweepModel model, std::size_t index) {
    if (model == SweepModel::lumped) return 1.0;
    if (!s.diameter_mm)
        throw std::invalid_argument("fit: sample " + std::to_string(index) +
                                    " has no diameter but the air model needs one");
    if (!(*s.diameter_mm > 0.0))
        throw std::invalid_argument("fit: sample " + std::to_string(index) +
                                    " has a non-positive diameter");
    return *s.diameter_mm;
}

double sum_sq_residual(const std::vector<SweepSample>& samples, SweepModel model,
                       double c, double e) {
    double ssr = 0.0;
    for (std::size_t i = 0; i < samples.size(); ++i) {
        const double m = c * scale_of(samples[i], model, i) * std::pow(samples[i].x_m, e);
        const double r = samples[i].force_n - m;
        ssr += r * r;
    }
    return ssr;
}

} // namespace

FitResult fit_power_law(const std::vector<SweepSample>& samples, SweepModel model) {
    if (samples.size() < 3)
        throw std::invalid_argument("fit: need at least 3 samples, got " +
                                    std::to_string(samples.size()));

    for (std::size_t i = 0; i < samples.size(); ++i) {
        if (!(samples[i].x_m > 0.0))
            throw std::invalid_argument("fit: sample " + std::to_string(i) +
                                        " has non-positive x");
        if (!(samples[i].force_n > 0.0))
            throw std::invalid_argument("fit: sample " + std::to_string(i) +
                                        " has non-positive force");
        scale_of(samples[i], model, i);
    }

    // Closed-form initializer: least squares of log(F / scale) against log x.
    const std::size_t n = samples.size();
    double st = 0.0, sy = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
        st += std::log(samples[i].x_m);
        sy += std::log(samples[i].force_n / scale_of(samples[i], model, i));
    }
    const double mt = st / static_cast<double>(n);
    const double my = sy / static_cast<double>(n);
    double stt = 0.0, sty = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
        const double dt = std::log(samples[i].x_m) - mt;
        const double dy = std::log(samples[i].force_n / scale_of(samples[i], model, i)) - my;
        stt += dt * dt;
        sty += dt * dy;
    }
    if (!(stt > 0.0))
        throw std::invalid_argument("fit: rank-deficient design, all x values equal");

    FitResult r;
    r.sample_count = n;
    r.init_exponent = sty / stt;
    r.init_coefficient = std::exp(my - r.init_exponent * mt);
    {
        double ss = 0.0;
        for (std::size_t i = 0; i < n; ++i) {
            const double y = std::log(samples[i].force_n / scale_of(samples[i], model, i));
            const double d = y - (std::log(r.init_coefficient) +
                                  r.init_exponent * std::log(samples[i].x_m));
            ss += d * d;
        }
        r.log_residual_rms = std::sqrt(ss / static_cast<double>(n));
    }

    // Damped Gauss-Newton on the linear-domain residual. Steps are halved
    // until the sum of squares does not increase.
    double c = r.init_coefficient;
    double e = r.init_exponent;
    double ssr = sum_sq_residual(samples, model, c, e);
    int iter = 0;
    for (; iter < 50; ++iter) {
        double jtj00 = 0.0, jtj01 = 0.0, jtj11 = 0.0, jtr0 = 0.0, jtr1 = 0.0;
        for (std::size_t i = 0; i < n; ++i) {
            const double scale = scale_of(samples[i], model, i);
            const double xe = std::pow(samples[i].x_m, e);
            const double m = c * scale * xe;
            const double res = samples[i].force_n - m;
            const double j0 = scale * xe;              // d model / d c
            const double j1 = m * std::log(samples[i].x_m); // d model / d e
            jtj00 += j0 * j0;
            jtj01 += j0 * j1;
            jtj11 += j1 * j1;
            jtr0 += j0 * res;
            jtr1 += j1 * res;
        }
        const double det = jtj00 * jtj11 - jtj01 * jtj01;
        if (!(std::fabs(det) > 0.0)) break;
        double dc = (jtj11 * jtr0 - jtj01 * jtr1) / det;
        double de = (jtj00 * jtr1 - jtj01 * jtr0) / det;

        double step = 1.0;
        bool accepted = false;
        for (int h = 0; h < 40; ++h) {
            const double c_try = c + step * dc;
            const double e_try = e + step * de;
            if (c_try > 0.0) {
                const double ssr_try = sum_sq_residual(samples, model, c_try, e_try);
                if (ssr_try <= ssr) {
                    const double rel = std::hypot(step * dc, step * de) / std::hypot(c, e);
                    c = c_try;
                    e = e_try;
                    ssr = ssr_try;
                    accepted = true;
                    if (rel < 1e-10) iter = 1000; // converged
                    break;
                }
            }
            step *= 0.5;
        }
        if (!accepted) break; // no descent direction left
    }

    r.coefficient = c;
    r.exponent = e;
    r.iterations = iter >= 1000 ? iter - 1000 + 1 : iter;
    r.residual_rms_n = std::sqrt(ssr / static_cast<double>(n));
    return r;
}

std::vector<SweepSample> generate_sweep(const ContactParams& params, SweepModel model,
                                        const SweepGrid& grid) {
    params.validate();
    if (grid.x_values_m.empty())
        throw std::invalid_argument("generate_sweep: empty x grid");
    for (double x : grid.x_values_m)
        if (!(x > 0.0))
            throw std::invalid_argument("generate_sweep: x grid must be positive");

    std::vector<double> diameters = grid.diameters_mm;
    if (model == SweepModel::lumped)
        diameters = {0.0}; // single pass, diameter unused
    else if (diameters.empty())
        throw std::invalid_argument("generate_sweep: air sweep needs diameters");

    std::mt19937_64 rng(grid.seed);
    std::normal_distribution<double> noise(0.0, 1.0);

    std::vector<SweepSample> out;
    out.reserve(diameters.size() * grid.x_values_m.size());
    for (double d : diameters) {
        for (double x : grid.x_values_m) {
            SweepSample s;
            s.x_m = x;
            if (model == SweepModel::air) {
                s.diameter_mm = d;
                s.force_n = air_spring_force(x, Peg{d}, params);
            } else {
                s.force_n = lumped_spring_force(x, params);
            }
            if (grid.noise_rms_n > 0.0) s.force_n += grid.noise_rms_n * noise(rng);
            out.push_back(s);
        }
    }
    return out;
}

std::string write_sweep_csv(const std::vector<SweepSample>& samples) {
    bool with_d = !samples.empty() && samples.front().diameter_mm.has_value();
    std::string csv = with_d ? "x_m,D_mm,F_N\n" : "x_m,F_N\n";
    for (const SweepSample& s : samples) {
        csv += format_general(s.x_m);
        if (with_d) {
            csv += ',';
            csv += format_general(s.diameter_mm.value_or(0.0));
        }
        csv += ',';
        csv += format_general(s.force_n);
        csv += '\n';
    }
    return csv;
}

std::vector<SweepSample> read_sweep_csv(const std::string& text) {
    std::istringstream in(text);
    std::string line;
    int lineno = 0;

    auto fail = [&](const std::string& what) -> std::runtime_error {
        return std::runtime_error("sweep csv line " + std::to_string(lineno) + ": " + what);
    };
    auto parse_field = [&](const std::string& field) {
        double v = 0.0;
        auto res = std::from_chars(field.data(), field.data() + field.size(), v);
        if (res.ec != std::errc{} || res.ptr != field.data() + field.size())
            throw fail("bad number '" + field + "'");
        return v;
    };

    if (!std::getline(in, line)) throw std::runtime_error("sweep csv: empty input");
    ++lineno;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    bool with_d;
    if (line == "x_m,D_mm,F_N")
        with_d = true;
    else if (line == "x_m,F_N")
        with_d = false;
    else
        throw fail("unrecognized header '" + line + "'");

    std::vector<SweepSample> samples;
    while (std::getline(in, line)) {
        ++lineno;
        if (!line.empty() && line.back() == '\r') line.pop_back();
        if (line.empty()) continue;
        std::vector<std::string> fields;
        std::size_t start = 0;
        while (true) {
            const std::size_t comma = line.find(',', start);
            fields.push_back(line.substr(start, comma - start));
            if (comma == std::string::npos) break;
            start = comma + 1;
        }
        const std::size_t expected = with_d ? 3 : 2;
        if (fields.size() != expected)
            throw fail("expected " + std::to_string(expected) + " fields, got " +
                       std::to_string(fields.size()));
        SweepSample s;
        s.x_m = parse_field(fields[0]);
        if (with_d) s.diameter_mm = parse_field(fields[1]);
        s.force_n = parse_field(fields[with_d ? 2 : 1]);
        samples.push_back(s);
    }
    if (samples.empty()) throw std::runtime_error("sweep csv: no data rows");
    return samples;
}

std::string to_string(const FitResult& r) {
    std::string s;
    s += "coefficient = " + format_general(r.coefficient, 10) + "\n";
    s += "exponent = " + format_general(r.exponent, 10) + "\n";
    s += "residual_rms_n = " + format_general(r.residual_rms_n) + "\n";
    s += "init_coefficient = " + format_general(r.init_coefficient, 10) + "\n";
    s += "init_exponent = " + format_general(r.init_exponent, 10) + "\n";
    s += "log_residual_rms = " + format_general(r.log_residual_rms) + "\n";
    s += "iterations = " + std::to_string(r.iterations) + "\n";
    s += "sample_count = " + std::to_string(r.sample_count) + "\n";
    return s;
}

} // namespace ugsim
