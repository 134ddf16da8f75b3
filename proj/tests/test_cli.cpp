#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <array>
#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <sstream>
#include <string>

#include "cli_lib.hpp"

#ifndef RINGEQ_CLI_PATH
#error "RINGEQ_CLI_PATH must point at the ringeq binary"
#endif

namespace {

struct RunResult {
    int exit_code;
    std::string output;
};

RunResult run_cli(const std::string& args) {
    std::string cmd = std::string(RINGEQ_CLI_PATH) + " " + args + " 2>&1";
    std::array<char, 4096> buffer{};
    std::string output;
    FILE* pipe = popen(cmd.c_str(), "r");
    REQUIRE(pipe != nullptr);
    while (fgets(buffer.data(), buffer.size(), pipe)) output += buffer.data();
    int status = pclose(pipe);
    return {WEXITSTATUS(status), output};
}

std::string slurp(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    std::stringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

}  // namespace

TEST_CASE("number formatting is shortest round-trip") {
    using ringeq::cli::format_double;
    CHECK(format_double(0.1) == "0.1");
    CHECK(format_double(1.0) == "1");
    CHECK(format_double(1.0 / 3.0) == "0.3333333333333333");
    double x = 0.12345678901234567;
    CHECK(std::stod(format_double(x)) == x);
}

TEST_CASE("rational parsing round trips") {
    using namespace ringeq;
    CHECK(parse_rational("1/2") == Rational(1, 2));
    CHECK(parse_rational("-3/9") == Rational(-1, 3));
    CHECK(parse_rational("7") == Rational(7));
    CHECK(parse_rational("0.25") == Rational(1, 4));
    CHECK(parse_rational("-0.2") == Rational(-1, 5));
    CHECK(format_rational(Rational(2, 6)) == "1/3");
    CHECK(format_rational(Rational(5)) == "5");
    CHECK_THROWS_AS(parse_rational("1/0"), std::invalid_argument);
    CHECK_THROWS_AS(parse_rational("abc"), std::invalid_argument);
}

TEST_CASE("count list parsing") {
    using ringeq::cli::parse_count_list;
    CHECK(parse_count_list("16:128:x2") ==
          std::vector<long long>{16, 32, 64, 128});
    CHECK(parse_count_list("4:10:+3") == std::vector<long long>{4, 7, 10});
    CHECK(parse_count_list("8,16,32") == std::vector<long long>{8, 16, 32});
    CHECK_THROWS(parse_count_list("16:128:x1"));
}

TEST_CASE("exit codes: verdicts and errors") {
    CHECK(run_cli("exists --L 1 --M 1/2 --F1 1 --F2 -1 --N 9").exit_code == 2);
    CHECK(run_cli("exists --L 1 --M 1/2 --F1 1 --F2 -1 --N 10").exit_code == 0);
    CHECK(run_cli("symmetric --L 1 --F 1/5 --N 7").exit_code == 2);
    CHECK(run_cli("exists --L 1 --M 1/2 --F1 1 --F2 -1").exit_code == 1);
    CHECK(run_cli("exists --L 1 --M 1/2 --F1 1 --F2 -1 --N 10 --bogus 3").exit_code ==
          1);
    // unknown keys in a config file are rejected with the key named
    {
        std::ofstream cfg("/tmp/ringeq_bad_cfg.json");
        cfg << R"({"L": "1", "M": "1/2", "F1": "1", "F2": "-1", "N": 10, "notakey": 1})";
    }
    auto bad = run_cli("exists --config /tmp/ringeq_bad_cfg.json");
    CHECK(bad.exit_code == 1);
    CHECK(bad.output.find("notakey") != std::string::npos);
}

TEST_CASE("config file merges with flag precedence") {
    {
        std::ofstream cfg("/tmp/ringeq_cfg.json");
        cfg << R"({"L": "1", "M": "1/2", "F1": "1", "F2": "-1", "N": 9})";
    }
    CHECK(run_cli("exists --config /tmp/ringeq_cfg.json").exit_code == 2);
    CHECK(run_cli("exists --config /tmp/ringeq_cfg.json --N 10").exit_code == 0);
}

TEST_CASE("golden CSV header and formatting") {
    auto r = run_cli(
        "segment --length 1 --count 4 --force 1/4 --a 2 --csv /tmp/ringeq_seg.csv");
    REQUIRE(r.exit_code == 0);
    // frozen bytes; the gap values obey the pair-force ladder with step 1/4
    const std::string expected =
        "# ringeq-csv v1 segment\n"
        "index,gap,deviation\n"
        "1,0.3379946536577172,0.013983960973151577\n"
        "2,0.3332690587536329,-0.00019282373910134432\n"
        "3,0.32873628758864987,-0.013791137234050344\n";
    CHECK(slurp("/tmp/ringeq_seg.csv") == expected);
}

TEST_CASE("repeated runs are bit-identical") {
    const std::string args =
        "relax --L 1 --M 1/2 --F1 1/5 --F2 -1/5 --N 8 --seed 11 --max-time 50 "
        "--out /tmp/ringeq_rep.json --csv /tmp/ringeq_rep.csv";
    auto a = run_cli(args);
    std::string json_a = slurp("/tmp/ringeq_rep.json");
    std::string csv_a = slurp("/tmp/ringeq_rep.csv");
    auto b = run_cli(args);
    REQUIRE(a.exit_code == b.exit_code);
    CHECK(json_a == slurp("/tmp/ringeq_rep.json"));
    CHECK(csv_a == slurp("/tmp/ringeq_rep.csv"));
    CHECK(!json_a.empty());
}

TEST_CASE("JSON report feeds back as an initial state") {
    auto first = run_cli(
        "symmetric --L 1 --F 1/5 --N 8 --out /tmp/ringeq_sym.json");
    REQUIRE(first.exit_code == 0);
    // newton from the constructed equilibrium converges without moving
    auto second = run_cli(
        "newton --L 1 --M 1/2 --F1 1/5 --F2 -1/5 --N 8 "
        "--init-file /tmp/ringeq_sym.json --out /tmp/ringeq_ref.json");
    REQUIRE(second.exit_code == 0);

    using ringeq::cli::json;
    json sym = json::parse(slurp("/tmp/ringeq_sym.json"));
    json ref = json::parse(slurp("/tmp/ringeq_ref.json"));
    auto xs = sym["result"]["positions"];
    auto ys = ref["result"]["configuration"]["positions"];
    REQUIRE(xs.size() == ys.size());
    for (std::size_t i = 0; i < xs.size(); ++i)
        CHECK(std::abs(xs[i].get<double>() - ys[i].get<double>()) < 1e-9);
}
