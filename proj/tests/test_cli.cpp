#include <doctest.h>

#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <sstream>
#include <string>

#ifndef FBDIV_CLI_PATH
#error "FBDIV_CLI_PATH must point at the built binary"
#endif

namespace {

struct RunResult {
    int exit_code;
    std::string output; // stdout + stderr
};

RunResult run_cli(const std::string& args) {
    const std::string out_path = "cli_test_output.tmp";
    const std::string cmd =
        std::string(FBDIV_CLI_PATH) + " " + args + " > " + out_path + " 2>&1";
    const int status = std::system(cmd.c_str());
    std::ifstream in(out_path);
    std::stringstream ss;
    ss << in.rdbuf();
    std::remove(out_path.c_str());
    return {WEXITSTATUS(status), ss.str()};
}

std::string read_file(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    std::stringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

const std::string kFig1Args =
    "--k-bits 256 --u 200 --antennas 6 --nakagami-m 2 --mean-snr-db 12";

std::string value_of(const std::string& output, const std::string& key) {
    const auto pos = output.find(key);
    REQUIRE(pos != std::string::npos);
    const auto colon = output.find(':', pos);
    const auto eol = output.find('\n', colon);
    std::string v = output.substr(colon + 1, eol - colon - 1);
    const auto first = v.find_first_not_of(' ');
    return v.substr(first);
}

} // namespace

TEST_CASE("eval: SC on the reference configuration") {
    const auto r = run_cli("eval " + kFig1Args + " --scheme sc");
    CHECK(r.exit_code == 0);
    CHECK(r.output.find("n_6=80") != std::string::npos);
    CHECK(r.output.find("n_sc=80") != std::string::npos);
    CHECK(r.output.find("error_prob") != std::string::npos);
}

TEST_CASE("eval: infeasible budget exits 2 naming the constraint") {
    const auto r = run_cli(
        "eval --k-bits 256 --u 120 --antennas 6 --nakagami-m 2 --mean-snr-db 12 "
        "--scheme sc");
    CHECK(r.exit_code == 2);
    CHECK(r.output.find("u > (p+q)*M") != std::string::npos);
}

TEST_CASE("eval: ssc with infinite threshold equals sc") {
    const auto sc = run_cli("eval " + kFig1Args + " --scheme sc");
    const auto ssc = run_cli("eval " + kFig1Args + " --scheme ssc --strategy infinite");
    CHECK(sc.exit_code == 0);
    CHECK(ssc.exit_code == 0);
    CHECK(value_of(sc.output, "error_prob") == value_of(ssc.output, "error_prob"));
    CHECK(ssc.output.find("threshold     : inf") != std::string::npos);
}

TEST_CASE("parse errors exit 1") {
    CHECK(run_cli("eval --scheme sc").exit_code == 1); // missing required options
    CHECK(run_cli("eval " + kFig1Args + " --scheme bogus").exit_code == 1);
    CHECK(run_cli("eval " + kFig1Args + " --scheme ssc --strategy nope").exit_code == 1);
    CHECK(run_cli("frobnicate").exit_code == 1);
    CHECK(run_cli("").exit_code == 1);
}

TEST_CASE("validate: PASS on a consistent configuration") {
    const auto r = run_cli("validate " + kFig1Args +
                           " --scheme sc --mc-samples 1000000 --seed 1");
    CHECK(r.exit_code == 0);
    CHECK(r.output.find("PASS") != std::string::npos);
}

TEST_CASE("validate: deep fade agrees on certain failure") {
    const auto r = run_cli(
        "validate --k-bits 256 --u 200 --antennas 6 --nakagami-m 2 "
        "--mean-snr-db -20 --scheme sc --mc-samples 20000 --seed 1");
    CHECK(r.exit_code == 0);
    CHECK(r.output.find("PASS") != std::string::npos);
}

TEST_CASE("validate: corrupted analytic value fails with exit 4") {
    const auto r = run_cli("validate " + kFig1Args +
                           " --scheme sc --mc-samples 100000 --seed 1 "
                           "--analytic-override 0.5");
    CHECK(r.exit_code == 4);
    CHECK(r.output.find("FAIL") != std::string::npos);
}

TEST_CASE("preset: unwritable output path exits 3") {
    const auto r = run_cli("preset fig1 --from 12 --to 12 --out /nonexistent/x.csv");
    CHECK(r.exit_code == 3);
}

TEST_CASE("preset: single-point fig1 grid emits one row per curve") {
    const std::string path = "fig1_single.csv";
    const auto r = run_cli("preset fig1 --from 12 --to 12 --out " + path);
    CHECK(r.exit_code == 0);
    const std::string csv = read_file(path);
    std::remove(path.c_str());
    size_t rows = 0;
    for (char c : csv) rows += (c == '\n');
    CHECK(rows == 1 + 7); // header + seven curves
    CHECK(csv.find("ssc-fa-max") != std::string::npos);
    CHECK(csv.find("asymptotic-bound") != std::string::npos);
}

TEST_CASE("sweep: byte-identical CSV across runs") {
    const std::string args =
        " --axis mean-snr-db --from 10 --to 12 --step 2 "
        "--curves sc,ssc:naive,bound --mc-samples 20000 --seed 9 --out ";
    const auto r1 = run_cli("sweep" + args + "sweep_a.csv");
    const auto r2 = run_cli("sweep" + args + "sweep_b.csv");
    CHECK(r1.exit_code == 0);
    CHECK(r2.exit_code == 0);
    const std::string a = read_file("sweep_a.csv");
    const std::string b = read_file("sweep_b.csv");
    std::remove("sweep_a.csv");
    std::remove("sweep_b.csv");
    CHECK(!a.empty());
    CHECK(a == b);
}

TEST_CASE("optimize-threshold reports a threshold and error") {
    const auto r = run_cli("optimize-threshold " + kFig1Args);
    CHECK(r.exit_code == 0);
    CHECK(r.output.find("threshold") != std::string::npos);
    CHECK(r.output.find("error_prob") != std::string::npos);
}

TEST_CASE("optimize-antennas finds an interior optimum") {
    const auto r = run_cli(
        "optimize-antennas --k-bits 256 --u 200 --antennas 9 --nakagami-m 1 "
        "--mean-snr-db 12 --scheme sc");
    CHECK(r.exit_code == 0);
    const std::string best = value_of(r.output, "best_antennas");
    const int m_star = std::stoi(best);
    CHECK(m_star >= 2);
    CHECK(m_star < 9);
}

TEST_CASE("config file supplies required options") {
    const std::string path = "eval_config.tmp";
    {
        std::ofstream cfg(path);
        cfg << "# reference configuration\n"
               "k-bits=256\n"
               "u=200\n"
               "antennas=6\n"
               "nakagami-m=2\n"
               "mean-snr-db=12\n"
               "scheme=sc\n";
    }
    const auto r = run_cli("eval --config " + path);
    std::remove(path.c_str());
    CHECK(r.exit_code == 0);
    CHECK(r.output.find("n_sc=80") != std::string::npos);
}

TEST_CASE("config file rejects unknown keys") {
    const std::string path = "bad_config.tmp";
    {
        std::ofstream cfg(path);
        cfg << "k-bits=256\nantenas=6\n"; // typo
    }
    const auto r = run_cli("eval --config " + path + " --scheme sc");
    std::remove(path.c_str());
    CHECK(r.exit_code == 1);
    CHECK(r.output.find("unknown key") != std::string::npos);
}
