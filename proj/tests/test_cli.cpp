#include <catch2/catch_amalgamated.hpp>

#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <sstream>
#include <string>

#include <sys/wait.h>
#include <unistd.h>

namespace {

struct RunResult {
    int code = -1;
    std::string output;  // stdout and stderr, merged
};

std::string temp_path(const std::string& tag) {
    static int counter = 0;
    return "/tmp/fliess_cli_" + std::to_string(getpid()) + "_" + std::to_string(counter++) +
           "_" + tag;
}

std::string read_file(const std::string& path) {
    std::ifstream in(path);
    REQUIRE(in.good());
    std::ostringstream buf;
    buf << in.rdbuf();
    return buf.str();
}

void write_file(const std::string& path, const std::string& text) {
    std::ofstream out(path);
    REQUIRE(out.good());
    out << text;
}

RunResult run_cli(const std::string& args) {
    std::string capture = temp_path("out.txt");
    std::string cmd = std::string(FLIESS_CLI_PATH) + " " + args + " > " + capture + " 2>&1";
    int status = std::system(cmd.c_str());
    RunResult res;
    res.code = WIFEXITED(status) ? WEXITSTATUS(status) : -1;
    res.output = read_file(capture);
    std::remove(capture.c_str());
    return res;
}

std::string data_path(const std::string& name) {
    return std::string(FLIESS_SOURCE_DIR) + "/tests/data/" + name;
}

std::string golden(const std::string& name) {
    return read_file(std::string(FLIESS_SOURCE_DIR) + "/tests/golden/" + name);
}

bool contains(const std::string& text, const std::string& needle) {
    return text.find(needle) != std::string::npos;
}

}  // namespace

TEST_CASE("cli series matches the golden outputs") {
    RunResult a = run_cli("series " + data_path("linear_scalar.json") + " --degree 4");
    REQUIRE(a.code == 0);
    REQUIRE(a.output == golden("linear_scalar_series_d4.txt"));

    RunResult b = run_cli("series " + data_path("bilinear.json") + " --degree 6");
    REQUIRE(b.code == 0);
    REQUIRE(b.output == golden("bilinear_series_d6.txt"));

    RunResult c = run_cli("series " + data_path("constant_obs.json") + " --degree 3");
    REQUIRE(c.code == 0);
    REQUIRE(c.output == "alphabet 1 degree 3\ne : 5\n");
}

TEST_CASE("cli output is deterministic") {
    std::string args = "series " + data_path("bilinear.json") + " --degree 5";
    RunResult first = run_cli(args);
    RunResult second = run_cli(args);
    REQUIRE(first.code == 0);
    REQUIRE(first.output == second.output);
}

TEST_CASE("cli rank prints the certificate") {
    std::string series_file = temp_path("bilinear_series.txt");
    RunResult gen = run_cli("series " + data_path("bilinear.json") + " --degree 6 --out " +
                            series_file);
    REQUIRE(gen.code == 0);
    REQUIRE(gen.output.empty());

    RunResult rank = run_cli("rank " + series_file + " --lie-degree 3");
    REQUIRE(rank.code == 0);
    REQUIRE(rank.output ==
            "rank 2\n"
            "complement\n"
            "E2\n"
            "[E1, E2]\n"
            "L basis\n"
            "E1\n"
            "[E1, [E1, E2]]\n"
            "[[E1, E2], E2] + 2*E2\n");
    std::remove(series_file.c_str());
}

TEST_CASE("cli realize writes the golden dump and checks it") {
    std::string series_file = temp_path("series.txt");
    std::string dump_file = temp_path("realization.txt");
    REQUIRE(run_cli("series " + data_path("bilinear.json") + " --degree 6 --out " +
                    series_file)
                .code == 0);

    RunResult make = run_cli("realize " + series_file +
                             " --lie-degree 3 --order 3 --out " + dump_file);
    REQUIRE(make.code == 0);
    REQUIRE(read_file(dump_file) == golden("bilinear_realization_d3_t3.txt"));

    RunResult check = run_cli("realize " + series_file + " --check " + dump_file);
    REQUIRE(check.code == 0);
    REQUIRE(contains(check.output, "rank 2\n"));
    REQUIRE(contains(check.output, "checked_degree 3\n"));
    REQUIRE(contains(check.output, "verify ok\n"));
    REQUIRE(!contains(check.output, "mismatch"));

    // One corrupted observation coefficient must fail the check.
    std::string bad = read_file(dump_file);
    std::string::size_type at = bad.find("0 1 : 1");
    REQUIRE(at != std::string::npos);
    bad.replace(at, 7, "0 1 : 2");
    std::string bad_file = temp_path("realization_bad.txt");
    write_file(bad_file, bad);

    RunResult fail = run_cli("realize " + series_file + " --check " + bad_file);
    REQUIRE(fail.code == 2);
    REQUIRE(contains(fail.output, "mismatch 1 2 : 1 != 2\n"));
    REQUIRE(contains(fail.output, "verify failed\n"));

    std::remove(series_file.c_str());
    std::remove(dump_file.c_str());
    std::remove(bad_file.c_str());
}

TEST_CASE("cli realizes the constant series with zero states") {
    std::string series_file = temp_path("eps.txt");
    write_file(series_file, "alphabet 2 degree 4\ne : 1\n");

    RunResult rank = run_cli("rank " + series_file + " --lie-degree 2");
    REQUIRE(rank.code == 0);
    REQUIRE(contains(rank.output, "rank 0\n"));

    std::string dump_file = temp_path("eps_real.txt");
    RunResult make = run_cli("realize " + series_file +
                             " --lie-degree 2 --order 2 --out " + dump_file);
    REQUIRE(make.code == 0);
    std::string dump = read_file(dump_file);
    REQUIRE(contains(dump, "N 0\n"));
    REQUIRE(contains(dump, "f_hat\n0 : 1\n"));

    RunResult check = run_cli("realize " + series_file + " --check " + dump_file);
    REQUIRE(check.code == 0);
    REQUIRE(contains(check.output, "verify ok\n"));

    std::remove(series_file.c_str());
    std::remove(dump_file.c_str());
}

TEST_CASE("cli verify reports zero error for zero input") {
    std::string csv_file = temp_path("run.csv");
    RunResult res = run_cli("verify " + data_path("bilinear.json") +
                            " --controls zero,zero --degree 3 --t 0.5 --steps 50 --out " +
                            csv_file);
    REQUIRE(res.code == 0);
    REQUIRE(res.output ==
            "max_error 0\n"
            "error_at_t_end 0\n"
            "empirical_order inf\n");

    std::istringstream in(read_file(csv_file));
    std::string line;
    REQUIRE(std::getline(in, line));
    REQUIRE(line == "t,x1,x2,f,series,error");
    std::size_t rows = 0;
    while (std::getline(in, line)) ++rows;
    REQUIRE(rows == 51);
    std::remove(csv_file.c_str());
}

TEST_CASE("cli verify accuracy summary on the scalar chain") {
    std::string csv_file = temp_path("scalar.csv");
    RunResult res = run_cli("verify " + data_path("linear_scalar.json") +
                            " --controls one --degree 6 --t 0.1 --steps 500 --out " +
                            csv_file);
    REQUIRE(res.code == 0);
    double max_error = -1.0, order = -1.0;
    std::istringstream in(res.output);
    std::string key;
    while (in >> key) {
        if (key == "max_error") in >> max_error;
        if (key == "empirical_order") in >> order;
    }
    REQUIRE(max_error >= 0.0);
    REQUIRE(max_error <= 1e-8);
    REQUIRE(order >= 5.5);
    std::remove(csv_file.c_str());
}

TEST_CASE("cli tree operations") {
    RunResult mul = run_cli("tree mul o[1] o[2]");
    REQUIRE(mul.code == 0);
    REQUIRE(mul.output == "o[1,2] + o[2[1]]\n");

    RunResult comul = run_cli("tree comul o[1]");
    REQUIRE(comul.code == 0);
    REQUIRE(comul.output == "o (x) o[1] + o[1] (x) o\n");

    RunResult apply = run_cli("tree apply o " + data_path("quadratic.json"));
    REQUIRE(apply.code == 0);
    REQUIRE(apply.output == "x2^2 + x1\n");

    RunResult chain = run_cli("tree apply o[1[2],1] " + data_path("quadratic.json"));
    REQUIRE(chain.code == 0);
    REQUIRE(chain.output == "0\n");
}

TEST_CASE("cli exit codes") {
    std::string bad_json = temp_path("bad.json");
    write_file(bad_json, "not json");
    REQUIRE(run_cli("series " + bad_json + " --degree 2").code == 3);
    std::remove(bad_json.c_str());

    REQUIRE(run_cli("series " + data_path("missing.json") + " --degree 2").code == 3);

    std::string series_file = temp_path("series6.txt");
    REQUIRE(run_cli("series " + data_path("bilinear.json") + " --degree 6 --out " +
                    series_file)
                .code == 0);
    REQUIRE(run_cli("rank " + series_file + " --lie-degree 7").code == 4);
    REQUIRE(run_cli("realize " + series_file).code == 3);       // missing flags
    REQUIRE(run_cli("realize " + series_file + " --lie-degree 3").code == 3);
    std::remove(series_file.c_str());

    REQUIRE(run_cli("tree mul o[1").code == 3);
    REQUIRE(run_cli("tree frobnicate o").code == 3);
    REQUIRE(run_cli("").code == 3);  // a subcommand is required
    REQUIRE(run_cli("--help").code == 0);
    REQUIRE(run_cli("verify " + data_path("bilinear.json") +
                    " --controls one --degree 2 --t 1 --steps 10")
                .code == 3);  // channel count mismatch
}
