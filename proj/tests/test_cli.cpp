#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>

#include "ugsim/fit.hpp"

namespace fs = std::filesystem;

namespace {

struct RunResult {
    int exit_code = -1;
    std::string output; // stdout and stderr combined
};

RunResult run_cli(const std::string& args) {
    const std::string cmd = std::string(UGSIM_CLI_PATH) + " " + args + " 2>&1";
    FILE* pipe = popen(cmd.c_str(), "r");
    REQUIRE(pipe != nullptr);
    RunResult r;
    char buf[4096];
    while (std::size_t n = std::fread(buf, 1, sizeof(buf), pipe)) r.output.append(buf, n);
    const int status = pclose(pipe);
    r.exit_code = WIFEXITED(status) ? WEXITSTATUS(status) : -1;
    return r;
}

fs::path temp_dir(const std::string& name) {
    const fs::path dir = fs::temp_directory_path() / ("ugsim_test_" + name);
    fs::remove_all(dir);
    fs::create_directories(dir);
    return dir;
}

void write_file(const fs::path& p, const std::string& content) {
    std::ofstream f(p, std::ios::binary);
    REQUIRE(f.good());
    f << content;
}

std::string read_file(const fs::path& p) {
    std::ifstream f(p, std::ios::binary);
    REQUIRE(f.good());
    std::ostringstream ss;
    ss << f.rdbuf();
    return ss.str();
}

// Extracts "key = value" from a flat outcome block.
std::string outcome_value(const std::string& text, const std::string& key) {
    std::istringstream in(text);
    std::string line;
    while (std::getline(in, line)) {
        if (line.rfind(key + " = ", 0) == 0) return line.substr(key.size() + 3);
    }
    return "";
}

} // namespace

TEST_CASE("grasp command: default scenario succeeds with the expected outcome") {
    const fs::path dir = temp_dir("grasp");
    write_file(dir / "scenario.cfg",
               "[scenario]\n"
               "peg_diameter_mm = 40\n"
               "activation_force_gf = 350\n"
               "fill_ratio = 0.66\n");

    const RunResult r = run_cli("grasp --config " + (dir / "scenario.cfg").string() +
                                " --out " + dir.string());
    CHECK(r.exit_code == 0);
    CHECK(fs::exists(dir / "timeline.csv"));
    CHECK(fs::exists(dir / "outcome.txt"));

    const std::string outcome = read_file(dir / "outcome.txt");
    CHECK(outcome_value(outcome, "success") == "true");
    CHECK(outcome_value(outcome, "holding_force_n") == "10.1");

    const std::string timeline = read_file(dir / "timeline.csv");
    CHECK(timeline.rfind("t_s,state,beta,P_kpa,x_m,u_feed_mms,F_m_gf,attached\n", 0) == 0);
}

TEST_CASE("grasp command: invalid scenario exits 1, forced contact loss exits 2") {
    const fs::path dir = temp_dir("grasp_err");

    write_file(dir / "bad.cfg", "[scenario]\nactivation_force_gf = 0\n");
    RunResult r = run_cli("grasp --config " + (dir / "bad.cfg").string() + " --out " +
                          dir.string());
    CHECK(r.exit_code == 1);

    write_file(dir / "fault.cfg",
               "[scenario]\nactivation_force_gf = 350\nfault_pull_away_at_s = 2.5\n");
    r = run_cli("grasp --config " + (dir / "fault.cfg").string() + " --out " + dir.string());
    CHECK(r.exit_code == 2);
}

TEST_CASE("config errors carry line numbers and unknown keys are rejected") {
    const fs::path dir = temp_dir("config_err");

    write_file(dir / "broken.cfg", "[scenario]\npeg_diameter_mm = 40\nnot a key value\n");
    RunResult r = run_cli("grasp --config " + (dir / "broken.cfg").string());
    CHECK(r.exit_code == 1);
    CHECK(r.output.find("line 3") != std::string::npos);

    write_file(dir / "typo.cfg", "[scenario]\npeg_diamter_mm = 40\n");
    r = run_cli("grasp --config " + (dir / "typo.cfg").string());
    CHECK(r.exit_code == 1);
    CHECK(r.output.find("peg_diamter_mm") != std::string::npos);
}

TEST_CASE("activation sweep reproduces saturation at the low fill ratio") {
    const fs::path dir = temp_dir("sweep_act");
    write_file(dir / "sweep.cfg",
               "[scenario]\n"
               "fill_ratio = 0.66\n"
               "[sweep]\n"
               "axis = activation_force\n"
               "values = 150, 250, 350, 450, 550, 650\n");

    const RunResult r = run_cli("sweep --config " + (dir / "sweep.cfg").string() +
                                " --out " + dir.string());
    CHECK(r.exit_code == 0);
    const std::string csv = read_file(dir / "sweep.csv");
    CHECK(csv.rfind("axis_value,rep,success,F_h_N,min_tracked_gf,T_SE_s\n", 0) == 0);

    std::istringstream in(csv);
    std::string line;
    std::getline(in, line); // header
    int rows = 0;
    while (std::getline(in, line)) {
        std::istringstream fields(line);
        std::string axis, rep, success, fh;
        std::getline(fields, axis, ',');
        std::getline(fields, rep, ',');
        std::getline(fields, success, ',');
        std::getline(fields, fh, ',');
        const double f_a = std::stod(axis);
        const double f_h = std::stod(fh);
        if (f_a >= 250.0) {
            CHECK(success == "1");
            CHECK(f_h == doctest::Approx(10.1).epsilon(1e-6));
        } else {
            CHECK(success == "0");
            CHECK(f_h < 10.1 - 0.3);
        }
        ++rows;
    }
    CHECK(rows == 6);

    // Byte-identical on repeated runs.
    const fs::path dir2 = temp_dir("sweep_act2");
    const RunResult r2 = run_cli("sweep --config " + (dir / "sweep.cfg").string() +
                                 " --out " + dir2.string());
    CHECK(r2.exit_code == 0);
    CHECK(read_file(dir2 / "sweep.csv") == csv);
}

TEST_CASE("deadener sweep reproduces the additive medians") {
    const fs::path dir = temp_dir("sweep_dead");
    write_file(dir / "sweep.cfg",
               "[scenario]\n"
               "activation_force_gf = 350\n"
               "[sweep]\n"
               "axis = deadener\n"
               "values = 0, 5, 10, 15\n");

    const RunResult r = run_cli("sweep --config " + (dir / "sweep.cfg").string() +
                                " --out " + dir.string());
    CHECK(r.exit_code == 0);

    std::istringstream in(read_file(dir / "sweep.csv"));
    std::string line;
    std::getline(in, line);
    const double expected[4] = {10.1, 12.8, 13.1, 15.4};
    int i = 0;
    while (std::getline(in, line) && i < 4) {
        std::istringstream fields(line);
        std::string axis, rep, success, fh;
        std::getline(fields, axis, ',');
        std::getline(fields, rep, ',');
        std::getline(fields, success, ',');
        std::getline(fields, fh, ',');
        CHECK(std::stod(fh) == doctest::Approx(expected[i]).epsilon(1e-4));
        ++i;
    }
    CHECK(i == 4);
}

TEST_CASE("fit command recovers constants from generated sweeps") {
    const fs::path dir = temp_dir("fit");

    ugsim::ContactParams params;
    ugsim::SweepGrid grid;
    for (int i = 0; i < 20; ++i) grid.x_values_m.push_back(0.001 + 0.002 * i);
    grid.diameters_mm = {30.0, 40.0, 50.0};
    write_file(dir / "air.csv",
               ugsim::write_sweep_csv(ugsim::generate_sweep(params, ugsim::SweepModel::air, grid)));

    RunResult r = run_cli("fit --input " + (dir / "air.csv").string());
    CHECK(r.exit_code == 0);
    CHECK(std::stod(outcome_value(r.output, "coefficient")) ==
          doctest::Approx(102.87).epsilon(1e-4));
    CHECK(std::stod(outcome_value(r.output, "exponent")) ==
          doctest::Approx(1.88).epsilon(1e-4));

    grid.diameters_mm.clear();
    write_file(dir / "lumped.csv",
               ugsim::write_sweep_csv(
                   ugsim::generate_sweep(params, ugsim::SweepModel::lumped, grid)));
    r = run_cli("fit --input " + (dir / "lumped.csv").string());
    CHECK(r.exit_code == 0);
    CHECK(std::stod(outcome_value(r.output, "coefficient")) ==
          doctest::Approx(25119.75).epsilon(1e-4));
    CHECK(std::stod(outcome_value(r.output, "exponent")) ==
          doctest::Approx(1.29).epsilon(1e-4));

    // Error paths: empty file, malformed row.
    write_file(dir / "empty.csv", "");
    r = run_cli("fit --input " + (dir / "empty.csv").string());
    CHECK(r.exit_code == 1);

    write_file(dir / "broken.csv", "x_m,F_N\n0.01,1.0\n0.02,oops\n");
    r = run_cli("fit --input " + (dir / "broken.csv").string());
    CHECK(r.exit_code == 1);
    CHECK(r.output.find("line 3") != std::string::npos);
}

TEST_CASE("serial command replays the golden transcript byte-identically") {
    const fs::path dir = temp_dir("serial");
    const fs::path transcript = fs::path(UGSIM_GOLDEN_DIR) / "serial_transcript.txt";
    const fs::path golden = fs::path(UGSIM_GOLDEN_DIR) / "serial_session.golden";

    const RunResult r1 = run_cli("serial --transcript " + transcript.string() +
                                 " --duration 16 --out " + dir.string());
    CHECK(r1.exit_code == 0);
    const std::string log1 = read_file(dir / "session.log");
    CHECK(log1 == read_file(golden));

    const fs::path dir2 = temp_dir("serial2");
    const RunResult r2 = run_cli("serial --transcript " + transcript.string() +
                                 " --duration 16 --out " + dir2.string());
    CHECK(r2.exit_code == 0);
    CHECK(read_file(dir2 / "session.log") == log1);
}

TEST_CASE("automaton-trace prints the table and a clean report") {
    const RunResult r = run_cli("automaton-trace");
    CHECK(r.exit_code == 0);
    CHECK(r.output.find("edge 1: undefined -> startup") != std::string::npos);
    CHECK(r.output.find("pumps_never_both_on = true") != std::string::npos);
    CHECK(r.output.find("boot_within_bound = true") != std::string::npos);
}
