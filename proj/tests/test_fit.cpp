#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <cmath>
#include <random>
#include <stdexcept>
#include <string>
#include <vector>

#include "ugsim/fit.hpp"

using namespace ugsim;

namespace {

// Independent oracle: closed-form log-log least squares implemented from
// scratch, never calling into the library.
struct LogLogFit {
    double coefficient;
    double exponent;
};

LogLogFit loglog_oracle(const std::vector<SweepSample>& samples, bool air) {
    double st = 0.0, sy = 0.0, stt = 0.0, sty = 0.0;
    const double n = static_cast<double>(samples.size());
    std::vector<double> ts, ys;
    for (const SweepSample& s : samples) {
        const double scale = air ? *s.diameter_mm : 1.0;
        ts.push_back(std::log(s.x_m));
        ys.push_back(std::log(s.force_n / scale));
    }
    for (double t : ts) st += t;
    for (double y : ys) sy += y;
    const double mt = st / n, my = sy / n;
    for (std::size_t i = 0; i < ts.size(); ++i) {
        stt += (ts[i] - mt) * (ts[i] - mt);
        sty += (ts[i] - mt) * (ys[i] - my);
    }
    const double b = sty / stt;
    return {std::exp(my - b * mt), b};
}

std::vector<double> linspace(double lo, double hi, int n) {
    std::vector<double> v;
    for (int i = 0; i < n; ++i)
        v.push_back(lo + (hi - lo) * static_cast<double>(i) / (n - 1));
    return v;
}

} // namespace

TEST_CASE("noiseless air sweep recovers the identified constants") {
    ContactParams p; // a1 = 102.87, a2 = 1.88
    SweepGrid grid;
    grid.x_values_m = linspace(0.001, 0.040, 20);
    grid.diameters_mm = {30.0, 40.0, 50.0};
    const auto samples = generate_sweep(p, SweepModel::air, grid);

    const LogLogFit oracle = loglog_oracle(samples, true);
    CHECK(oracle.coefficient == doctest::Approx(102.87).epsilon(1e-9));
    CHECK(oracle.exponent == doctest::Approx(1.88).epsilon(1e-9));

    const FitResult r = fit_power_law(samples, SweepModel::air);
    CHECK(r.coefficient == doctest::Approx(102.87).epsilon(1e-6));
    CHECK(r.exponent == doctest::Approx(1.88).epsilon(1e-6));
    CHECK(r.residual_rms_n < 1e-9);
    CHECK(r.sample_count == 60);
}

TEST_CASE("noiseless lumped sweep recovers the identified constants") {
    ContactParams p; // a3 = 25119.75, a4 = 1.29
    SweepGrid grid;
    grid.x_values_m = linspace(0.0005, 0.020, 25);
    const auto samples = generate_sweep(p, SweepModel::lumped, grid);

    const LogLogFit oracle = loglog_oracle(samples, false);
    CHECK(oracle.coefficient == doctest::Approx(25119.75).epsilon(1e-9));
    CHECK(oracle.exponent == doctest::Approx(1.29).epsilon(1e-9));

    const FitResult r = fit_power_law(samples, SweepModel::lumped);
    CHECK(r.coefficient == doctest::Approx(25119.75).epsilon(1e-6));
    CHECK(r.exponent == doctest::Approx(1.29).epsilon(1e-6));
}

TEST_CASE("degenerate designs are rejected") {
    std::vector<SweepSample> two = {{0.01, std::nullopt, 1.0}, {0.02, std::nullopt, 2.0}};
    CHECK_THROWS_AS(fit_power_law(two, SweepModel::lumped), std::invalid_argument);

    std::vector<SweepSample> same_x = {
        {0.01, std::nullopt, 1.0}, {0.01, std::nullopt, 1.1}, {0.01, std::nullopt, 0.9}};
    CHECK_THROWS_WITH_AS(fit_power_law(same_x, SweepModel::lumped),
                         doctest::Contains("rank-deficient"), std::invalid_argument);

    std::vector<SweepSample> bad = {
        {0.01, std::nullopt, 1.0}, {0.02, std::nullopt, -0.5}, {0.03, std::nullopt, 2.0}};
    CHECK_THROWS_WITH_AS(fit_power_law(bad, SweepModel::lumped),
                         doctest::Contains("sample 1"), std::invalid_argument);

    std::vector<SweepSample> no_d = {
        {0.01, std::nullopt, 1.0}, {0.02, std::nullopt, 1.5}, {0.03, std::nullopt, 2.0}};
    CHECK_THROWS_AS(fit_power_law(no_d, SweepModel::air), std::invalid_argument);
}

TEST_CASE("sweep generation is deterministic per seed") {
    ContactParams p;
    SweepGrid grid;
    grid.x_values_m = linspace(0.002, 0.02, 10);
    grid.noise_rms_n = 0.1;
    grid.seed = 42;

    const auto a = generate_sweep(p, SweepModel::lumped, grid);
    const auto b = generate_sweep(p, SweepModel::lumped, grid);
    REQUIRE(a.size() == b.size());
    for (std::size_t i = 0; i < a.size(); ++i) CHECK(a[i].force_n == b[i].force_n);

    grid.seed = 43;
    const auto c = generate_sweep(p, SweepModel::lumped, grid);
    bool any_differ = false;
    for (std::size_t i = 0; i < a.size(); ++i)
        if (a[i].force_n != c[i].force_n) any_differ = true;
    CHECK(any_differ);
}

TEST_CASE("single noiseless point matches the forward model") {
    ContactParams p;
    SweepGrid grid;
    grid.x_values_m = {0.005};
    const auto s = generate_sweep(p, SweepModel::lumped, grid);
    REQUIRE(s.size() == 1);
    CHECK(s[0].force_n == doctest::Approx(27.020079247730577).epsilon(1e-12));
}

TEST_CASE("configured noise level shows up in the sample residuals") {
    ContactParams p;
    SweepGrid grid;
    grid.x_values_m = linspace(0.005, 0.02, 1000);
    grid.noise_rms_n = 0.1;
    grid.seed = 7;
    const auto noisy = generate_sweep(p, SweepModel::lumped, grid);

    double ss = 0.0;
    for (const SweepSample& s : noisy) {
        const double truth = lumped_spring_force(s.x_m, p);
        ss += (s.force_n - truth) * (s.force_n - truth);
    }
    const double rms = std::sqrt(ss / static_cast<double>(noisy.size()));
    CHECK(rms == doctest::Approx(0.1).epsilon(0.2));
}

TEST_CASE("round trip over a wide parameter range") {
    std::mt19937_64 rng(99);
    std::uniform_real_distribution<double> ue(1.05, 3.0);
    std::uniform_real_distribution<double> uc(-3.0, 3.0); // six decades

    for (int trial = 0; trial < 25; ++trial) {
        ContactParams p;
        p.lumped_coeff = std::pow(10.0, uc(rng));
        p.lumped_exp = ue(rng);
        SweepGrid grid;
        grid.x_values_m = linspace(0.001, 0.05, 15);
        const auto samples = generate_sweep(p, SweepModel::lumped, grid);
        const FitResult r = fit_power_law(samples, SweepModel::lumped);
        CHECK(r.coefficient == doctest::Approx(p.lumped_coeff).epsilon(1e-6));
        CHECK(r.exponent == doctest::Approx(p.lumped_exp).epsilon(1e-6));

        // Same range for the diameter-linear model.
        p.air_coeff = std::pow(10.0, uc(rng));
        p.air_exp = ue(rng);
        grid.diameters_mm = {20.0, 45.0};
        const auto air_samples = generate_sweep(p, SweepModel::air, grid);
        const FitResult ra = fit_power_law(air_samples, SweepModel::air);
        CHECK(ra.coefficient == doctest::Approx(p.air_coeff).epsilon(1e-6));
        CHECK(ra.exponent == doctest::Approx(p.air_exp).epsilon(1e-6));
    }
}

TEST_CASE("scaling every force scales the coefficient and keeps the exponent") {
    ContactParams p;
    SweepGrid grid;
    grid.x_values_m = linspace(0.002, 0.03, 30);
    grid.noise_rms_n = 0.05;
    grid.seed = 5;
    auto samples = generate_sweep(p, SweepModel::lumped, grid);
    const FitResult base = fit_power_law(samples, SweepModel::lumped);

    const double lambda = 137.5;
    for (SweepSample& s : samples) s.force_n *= lambda;
    const FitResult scaled = fit_power_law(samples, SweepModel::lumped);

    CHECK(scaled.coefficient / base.coefficient == doctest::Approx(lambda).epsilon(1e-9));
    CHECK(scaled.exponent == doctest::Approx(base.exponent).epsilon(1e-9));
}

TEST_CASE("estimates tighten as the sample count grows") {
    ContactParams p;
    const int seeds = 32;
    double mean_err[3] = {0.0, 0.0, 0.0};
    const int counts[3] = {20, 200, 2000};

    for (int ci = 0; ci < 3; ++ci) {
        for (int seed = 0; seed < seeds; ++seed) {
            SweepGrid grid;
            grid.x_values_m = linspace(0.005, 0.02, counts[ci]);
            grid.noise_rms_n = 0.1;
            grid.seed = static_cast<std::uint64_t>(seed) + 1;
            const auto samples = generate_sweep(p, SweepModel::lumped, grid);
            const FitResult r = fit_power_law(samples, SweepModel::lumped);
            mean_err[ci] += std::fabs(r.exponent - p.lumped_exp) / p.lumped_exp;
        }
        mean_err[ci] /= seeds;
    }
    CHECK(mean_err[0] > mean_err[1]);
    CHECK(mean_err[1] > mean_err[2]);
}

TEST_CASE("refinement never worsens the initializer's linear-domain residual") {
    ContactParams p;
    SweepGrid grid;
    grid.x_values_m = linspace(0.005, 0.02, 200);
    grid.noise_rms_n = 0.2;
    grid.seed = 11;
    const auto samples = generate_sweep(p, SweepModel::lumped, grid);
    const FitResult r = fit_power_law(samples, SweepModel::lumped);

    double ss_init = 0.0, ss_final = 0.0;
    for (const SweepSample& s : samples) {
        const double m_init = r.init_coefficient * std::pow(s.x_m, r.init_exponent);
        const double m_final = r.coefficient * std::pow(s.x_m, r.exponent);
        ss_init += (s.force_n - m_init) * (s.force_n - m_init);
        ss_final += (s.force_n - m_final) * (s.force_n - m_final);
    }
    CHECK(ss_final <= ss_init + 1e-12);
}

TEST_CASE("sweep CSV round trip and error reporting") {
    ContactParams p;
    SweepGrid grid;
    grid.x_values_m = linspace(0.002, 0.02, 5);
    grid.diameters_mm = {30.0, 40.0};
    const auto samples = generate_sweep(p, SweepModel::air, grid);

    const std::string csv = write_sweep_csv(samples);
    CHECK(csv.rfind("x_m,D_mm,F_N\n", 0) == 0);
    const auto back = read_sweep_csv(csv);
    REQUIRE(back.size() == samples.size());
    for (std::size_t i = 0; i < back.size(); ++i) {
        CHECK(back[i].x_m == doctest::Approx(samples[i].x_m).epsilon(1e-5));
        CHECK(back[i].force_n == doctest::Approx(samples[i].force_n).epsilon(1e-5));
        CHECK(*back[i].diameter_mm == doctest::Approx(*samples[i].diameter_mm));
    }

    CHECK_THROWS_WITH_AS(read_sweep_csv("x_m,F_N\n0.01,1.0\nbroken row\n"),
                         doctest::Contains("line 3"), std::runtime_error);
    CHECK_THROWS_AS(read_sweep_csv(""), std::runtime_error);
    CHECK_THROWS_WITH_AS(read_sweep_csv("wrong,header\n"), doctest::Contains("header"),
                         std::runtime_error);
}
