#include <catch2/catch_amalgamated.hpp>

#include <cmath>
#include <sstream>

#include "fliess/chen.hpp"
#include "fliess/system_io.hpp"

using namespace fliess;

namespace {

std::string data_path(const std::string& name) {
    return std::string(FLIESS_SOURCE_DIR) + "/tests/data/" + name;
}

Word W(std::vector<int> letters) { return Word(std::move(letters)); }

double factorial_d(int n) {
    double f = 1.0;
    for (int k = 2; k <= n; ++k) f *= k;
    return f;
}

}  // namespace

TEST_CASE("control channel parsing") {
    ControlSignals u = ControlSignals::parse("one, ramp", 2);
    REQUIRE(u.channels() == 2);
    REQUIRE(u.value(1, 3.7) == 1.0);
    REQUIRE(u.value(2, 3.7) == 3.7);
    REQUIRE(u.description(1) == "one");
    REQUIRE(u.description(2) == "ramp");

    REQUIRE(ControlSignals::parse("zero", 1).value(1, 2.0) == 0.0);
    REQUIRE(ControlSignals::parse("sin", 1).value(1, 0.5) == std::sin(0.5));
    REQUIRE(ControlSignals::parse("sin:1/2", 1).value(1, 0.5) == std::sin(0.25));

    ControlSignals poly = ControlSignals::parse("1 - 1/2*t^2", 1);
    REQUIRE(poly.value(1, 2.0) == -1.0);

    REQUIRE_THROWS_AS(ControlSignals::parse("one", 2), parse_error);
    REQUIRE_THROWS_AS(ControlSignals::parse("one, ,one", 3), parse_error);
    REQUIRE_THROWS_AS(ControlSignals::parse("bogus", 1), parse_error);
}

TEST_CASE("simulation of stock systems") {
    System scalar = system_from_file(data_path("linear_scalar.json"));
    ControlSignals one = ControlSignals::parse("one", 1);
    Trajectory traj = simulate(scalar, one, 1.0, 1000);
    REQUIRE(traj.times.size() == 1001);
    REQUIRE(traj.outputs[0] == 1.0);
    REQUIRE(std::abs(traj.outputs.back() - std::exp(1.0)) <= 1e-11);

    // Zero input freezes the state bit for bit.
    ControlSignals zero = ControlSignals::parse("zero", 1);
    Trajectory frozen = simulate(scalar, zero, 2.0, 100);
    REQUIRE(frozen.outputs.back() == 1.0);

    // The rotation stays on the unit circle and tracks cosine.
    System rot = system_from_file(data_path("rotation.json"));
    Trajectory circle = simulate(rot, one, 2.0, 2000);
    double x = circle.states.back()[0], y = circle.states.back()[1];
    REQUIRE(std::abs(x * x + y * y - 1.0) <= 1e-9);
    REQUIRE(std::abs(x - std::cos(2.0)) <= 1e-9);

    REQUIRE_THROWS_AS(simulate(scalar, ControlSignals::parse("one,one", 2), 1.0, 10),
                      context_error);
    REQUIRE_THROWS_AS(simulate(scalar, one, 1.0, 0), context_error);
}

TEST_CASE("integrator converges at fourth order") {
    System scalar = system_from_file(data_path("linear_scalar.json"));
    ControlSignals one = ControlSignals::parse("one", 1);
    double e_coarse =
        std::abs(simulate(scalar, one, 1.0, 50).outputs.back() - std::exp(1.0));
    double e_fine =
        std::abs(simulate(scalar, one, 1.0, 100).outputs.back() - std::exp(1.0));
    double ratio = e_coarse / e_fine;
    REQUIRE(ratio >= 12.0);
    REQUIRE(ratio <= 20.0);
}

TEST_CASE("iterated integrals of constant input are scaled powers") {
    ControlSignals one = ControlSignals::parse("one", 1);
    IteratedIntegralTable table = iterated_integrals(one, 6, 1.0, 1000);
    REQUIRE(table.times.size() == 1001);

    // The empty word column is identically one.
    for (double v : table.values.at(W({}))) REQUIRE(v == 1.0);

    for (int k = 1; k <= 6; ++k) {
        std::vector<int> letters((std::size_t)k, 1);
        double got = table.values.at(W(letters)).back();
        REQUIRE(std::abs(got - 1.0 / factorial_d(k)) <= 1e-12);
    }

    REQUIRE_THROWS_AS(iterated_integrals(one, 0, 1.0, 10), degree_error);
    REQUIRE_THROWS_AS(iterated_integrals(one, 2, 1.0, 0), context_error);
}

TEST_CASE("iterated integrals nest outermost-first") {
    ControlSignals u = ControlSignals::parse("one, ramp", 2);
    IteratedIntegralTable table = iterated_integrals(u, 3, 1.0, 400);

    // xi_(2) integrates the ramp once.
    REQUIRE(std::abs(table.values.at(W({2})).back() - 0.5) <= 1e-13);
    // xi_(1 2): the first letter is the outer integral, of 1 * s^2/2.
    REQUIRE(std::abs(table.values.at(W({1, 2})).back() - 1.0 / 6.0) <= 1e-13);
    // xi_(2 1): outer integral of s * s.
    REQUIRE(std::abs(table.values.at(W({2, 1})).back() - 1.0 / 3.0) <= 1e-13);
}

TEST_CASE("shuffle identity holds on the grid") {
    ControlSignals u = ControlSignals::parse("one, ramp", 2);
    IteratedIntegralTable table = iterated_integrals(u, 4, 1.0, 500);

    REQUIRE(verify_shuffle_identity(table, W({1}), W({2})) <= 1e-10);
    REQUIRE(verify_shuffle_identity(table, W({}), W({1, 2})) == 0.0);

    for (const Word& lam : words_up_to(2, 2))
        for (const Word& mu : words_up_to(2, 2))
            REQUIRE(verify_shuffle_identity(table, lam, mu) <= 1e-8);

    REQUIRE_THROWS_AS(verify_shuffle_identity(table, W({1, 1, 1}), W({2, 2})),
                      degree_error);
}

TEST_CASE("series evaluation against the integral table") {
    ControlSignals one = ControlSignals::parse("one", 1);
    IteratedIntegralTable table = iterated_integrals(one, 8, 1.0, 500);

    Series eps = Series::epsilon(1, 8);
    REQUIRE(series_output(eps, table, 0) == 1.0);
    REQUIRE(series_output(eps, table, 500) == 1.0);

    Series twice = Series::delta(1, 8, W({1})) * Rat(2);
    REQUIRE(std::abs(series_output(twice, table, 500) - 2.0) <= 1e-13);

    // Truncated exponential: close to e but with a visible tail.
    System scalar = system_from_file(data_path("linear_scalar.json"));
    Series p = generating_series(scalar, 8);
    double got = series_output(p, table, 500);
    REQUIRE(std::abs(got - std::exp(1.0)) <= 1e-5);
    REQUIRE(std::abs(got - std::exp(1.0)) >= 1e-7);

    REQUIRE_THROWS_AS(series_output(p, table, 501), context_error);
}

TEST_CASE("comparison run with zero input is exact") {
    System sys = system_from_file(data_path("bilinear.json"));
    ControlSignals zero = ControlSignals::parse("zero, zero", 2);
    CompareReport rep = compare_series_vs_simulation(sys, zero, 4, 0.5, 200);
    REQUIRE(rep.max_error == 0.0);
    REQUIRE(std::isinf(rep.empirical_order));
}

TEST_CASE("comparison error shrinks with the truncation degree") {
    System scalar = system_from_file(data_path("linear_scalar.json"));
    ControlSignals one = ControlSignals::parse("one", 1);
    CompareReport d2 = compare_series_vs_simulation(scalar, one, 2, 0.1, 200);
    CompareReport d4 = compare_series_vs_simulation(scalar, one, 4, 0.1, 200);
    CompareReport d6 = compare_series_vs_simulation(scalar, one, 6, 0.1, 200);
    REQUIRE(d2.max_error > d4.max_error);
    REQUIRE(d4.max_error > d6.max_error);

    REQUIRE(d4.max_error <= 1e-7);
    REQUIRE(d4.empirical_order >= 4.5);
    REQUIRE(d4.empirical_order <= 5.5);
}

TEST_CASE("comparison matches simulation to remainder accuracy") {
    System scalar = system_from_file(data_path("linear_scalar.json"));
    ControlSignals one = ControlSignals::parse("one", 1);
    CompareReport a = compare_series_vs_simulation(scalar, one, 6, 0.1, 1000);
    REQUIRE(a.max_error <= 1e-8);
    REQUIRE((a.empirical_order >= 5.5 || a.max_error <= 1e-12));

    System bilin = system_from_file(data_path("bilinear.json"));
    ControlSignals u = ControlSignals::parse("one, ramp", 2);
    CompareReport b = compare_series_vs_simulation(bilin, u, 6, 0.1, 1000);
    REQUIRE(b.max_error <= 1e-8);
    REQUIRE((b.empirical_order >= 5.5 || b.max_error <= 1e-12));
}

TEST_CASE("runaway trajectories raise a numeric error") {
    System sys = system_from_json(
        R"({"N":1,"M":1,"derivations":[["x1^2"]],"observation":"x1","x0":[10]})");
    ControlSignals one = ControlSignals::parse("one", 1);
    REQUIRE_THROWS_AS(simulate(sys, one, 10.0, 10), numeric_error);
}

TEST_CASE("comparison table serializes as CSV") {
    System rot = system_from_file(data_path("rotation.json"));
    ControlSignals one = ControlSignals::parse("one", 1);
    CompareReport rep = compare_series_vs_simulation(rot, one, 4, 0.5, 10);
    std::string csv = compare_csv(rot, rep);

    std::istringstream in(csv);
    std::string line;
    REQUIRE(std::getline(in, line));
    REQUIRE(line == "t,x,y,f,series,error");
    REQUIRE(std::getline(in, line));
    REQUIRE(line == "0,1,0,1,1,0");
    std::size_t rows = 1;
    while (std::getline(in, line)) ++rows;
    REQUIRE(rows == 11);
}
