#pragma once

#include <algorithm>
#include <cctype>
#include <cmath>
#include <cstddef>
#include <limits>
#include <map>
#include <string>
#include <vector>

#include "fliess/error.hpp"
#include "fliess/multipoly.hpp"
#include "fliess/rational.hpp"
#include "fliess/realize.hpp"
#include "fliess/series.hpp"
#include "fliess/system.hpp"
#include "fliess/word.hpp"

namespace fliess {

// Neumaier-compensated accumulator: the running error of the plain sum
// is carried separately so long accumulations stay within a few ulps.
struct KahanAcc {
    double sum = 0.0;
    double comp = 0.0;

    void add(double x) {
        double t = sum + x;
        if (std::abs(sum) >= std::abs(x))
            comp += (sum - t) + x;
        else
            comp += (x - t) + sum;
        sum = t;
    }

    double value() const { return sum + comp; }
};

// Input channels u_1..u_M as scalar functions of time.  Each channel is
// either a polynomial in t or a sinusoid with exact rational frequency;
// both stay finite on any interval.
class ControlSignals {
public:
    // Comma-separated channel specs.  Each spec is a preset name
    // ("zero", "one", "ramp", "sin", "sin:p/q") or a polynomial in t
    // such as "1 - 1/2*t^2".
    static ControlSignals parse(const std::string& spec, int M) {
        std::vector<std::string> parts;
        std::string cur;
        for (char c : spec) {
            if (c == ',') {
                parts.push_back(cur);
                cur.clear();
            } else {
                cur += c;
            }
        }
        parts.push_back(cur);
        if ((int)parts.size() != M)
            throw parse_error("controls list " + std::to_string(parts.size()) +
                              " channels, system has " + std::to_string(M));
        ControlSignals u;
        for (std::string part : parts) {
            while (!part.empty() && std::isspace((unsigned char)part.front()))
                part.erase(part.begin());
            while (!part.empty() && std::isspace((unsigned char)part.back()))
                part.pop_back();
            if (part.empty()) throw parse_error("empty control channel spec");
            Channel ch;
            ch.descr = part;
            if (part == "zero") {
                ch.poly = MultiPoly::zero(1);
            } else if (part == "one") {
                ch.poly = MultiPoly::constant(1, Rat(1));
            } else if (part == "ramp") {
                ch.poly = MultiPoly::variable(1, 1);
            } else if (part == "sin" || part.rfind("sin:", 0) == 0) {
                ch.is_sin = true;
                ch.freq = part == "sin" ? 1.0 : rat_double(rat_parse(part.substr(4)));
            } else {
                ch.poly = poly_parse(part, std::vector<std::string>{"t"});
            }
            u.channels_.push_back(std::move(ch));
        }
        return u;
    }

    int channels() const { return (int)channels_.size(); }

    double value(int i, double t) const {
        const Channel& ch = channels_[(std::size_t)i - 1];
        if (ch.is_sin) return std::sin(ch.freq * t);
        return ch.poly.eval_double({t});
    }

    const std::string& description(int i) const {
        return channels_[(std::size_t)i - 1].descr;
    }

private:
    struct Channel {
        MultiPoly poly{1};
        bool is_sin = false;
        double freq = 1.0;
        std::string descr;
    };

    std::vector<Channel> channels_;
};

namespace detail {

// Classical fourth-order Runge-Kutta over [0, t_end] in the given
// number of equal steps, returning every grid state.  The state is
// accumulated with per-component compensation so grid values stay
// within a few ulps of the exact arithmetic of the scheme.
template <class Deriv>
inline std::vector<std::vector<double>> rk4_path(std::vector<double> y, double t_end,
                                                 int steps, Deriv&& deriv,
                                                 const char* what) {
    if (steps < 1) throw context_error("need at least one integration step");
    std::size_t n = y.size();
    std::vector<double> comp(n, 0.0), folded = y;
    std::vector<double> k1(n), k2(n), k3(n), k4(n), stage(n);
    std::vector<std::vector<double>> path;
    path.reserve((std::size_t)steps + 1);
    path.push_back(folded);
    double h = t_end / steps;
    for (int s = 0; s < steps; ++s) {
        double t = h * s;
        deriv(t, folded, k1);
        for (std::size_t i = 0; i < n; ++i) stage[i] = folded[i] + 0.5 * h * k1[i];
        deriv(t + 0.5 * h, stage, k2);
        for (std::size_t i = 0; i < n; ++i) stage[i] = folded[i] + 0.5 * h * k2[i];
        deriv(t + 0.5 * h, stage, k3);
        for (std::size_t i = 0; i < n; ++i) stage[i] = folded[i] + h * k3[i];
        deriv(t + h, stage, k4);
        for (std::size_t i = 0; i < n; ++i) {
            double inc = (h / 6.0) * (k1[i] + 2.0 * (k2[i] + k3[i]) + k4[i]);
            double tot = y[i] + inc;
            if (std::abs(y[i]) >= std::abs(inc))
                comp[i] += (y[i] - tot) + inc;
            else
                comp[i] += (inc - tot) + y[i];
            y[i] = tot;
            folded[i] = y[i] + comp[i];
            if (!std::isfinite(folded[i]))
                throw numeric_error(std::string(what) + " became non-finite at t = " +
                                    double_str(t + h));
        }
        path.push_back(folded);
    }
    return path;
}

}  // namespace detail

struct Trajectory {
    std::vector<double> times;
    std::vector<std::vector<double>> states;  // one state per grid point
    std::vector<double> outputs;              // observation along the trajectory
};

inline Trajectory simulate(const System& sys, const ControlSignals& u, double t_end,
                           int steps) {
    sys.validate();
    if (u.channels() != sys.M)
        throw context_error("control channel count differs from system inputs");
    if (steps < 1) throw context_error("simulate needs steps >= 1");
    std::vector<double> y0;
    for (const Rat& c : sys.x0) y0.push_back(rat_double(c));
    auto deriv = [&](double t, const std::vector<double>& x, std::vector<double>& dx) {
        for (int mu = 0; mu < sys.N; ++mu) {
            KahanAcc acc;
            for (int i = 1; i <= sys.M; ++i)
                acc.add(u.value(i, t) *
                        sys.derivations[(std::size_t)i - 1].coeffs[(std::size_t)mu]
                            .eval_double(x));
            dx[(std::size_t)mu] = acc.value();
        }
    };
    Trajectory traj;
    traj.states = detail::rk4_path(y0, t_end, steps, deriv, "state");
    double h = t_end / steps;
    for (int k = 0; k <= steps; ++k) {
        traj.times.push_back(h * k);
        double f = sys.observation.eval_double(traj.states[(std::size_t)k]);
        if (!std::isfinite(f))
            throw numeric_error("observation became non-finite at t = " +
                                double_str(h * k));
        traj.outputs.push_back(f);
    }
    return traj;
}

// All iterated integrals for words up to the given length over one time
// grid.  The whole family is a single lower-triangular linear ODE
// system: the word w integrates u_{w_1} times the integral of its tail.
struct IteratedIntegralTable {
    int alphabet = 0;
    int depth = 0;
    std::vector<double> times;
    std::map<Word, std::vector<double>> values;
};

inline IteratedIntegralTable iterated_integrals(const ControlSignals& u, int D,
                                                double t_end, int steps) {
    if (D < 1) throw degree_error("iterated integrals need depth >= 1");
    if (steps < 1) throw context_error("iterated integrals need steps >= 1");
    int M = u.channels();
    std::vector<Word> words;
    std::map<Word, std::size_t> index;
    for (const Word& w : words_up_to(M, D))
        if (w.size() > 0) {
            index[w] = words.size();
            words.push_back(w);
        }
    std::vector<std::size_t> tail(words.size());
    constexpr std::size_t UNIT = (std::size_t)-1;
    for (std::size_t j = 0; j < words.size(); ++j) {
        Word t = words[j].drop_first();
        tail[j] = t.size() == 0 ? UNIT : index.at(t);
    }
    auto deriv = [&](double t, const std::vector<double>& y, std::vector<double>& dy) {
        for (std::size_t j = 0; j < words.size(); ++j)
            dy[j] = u.value(words[j].at(0), t) * (tail[j] == UNIT ? 1.0 : y[tail[j]]);
    };
    std::vector<double> y0(words.size(), 0.0);
    auto path = detail::rk4_path(y0, t_end, steps, deriv, "iterated integral");

    IteratedIntegralTable table;
    table.alphabet = M;
    table.depth = D;
    double h = t_end / steps;
    for (int k = 0; k <= steps; ++k) table.times.push_back(h * k);
    table.values[Word::empty()] = std::vector<double>((std::size_t)steps + 1, 1.0);
    for (std::size_t j = 0; j < words.size(); ++j) {
        std::vector<double> col((std::size_t)steps + 1);
        for (int k = 0; k <= steps; ++k) col[(std::size_t)k] = path[(std::size_t)k][j];
        table.values[words[j]] = std::move(col);
    }
    return table;
}

// Truncated series evaluated against the integral table at one grid
// point: sum of c_w xi_w(t) over words within both depths.
inline double series_output(const Series& p, const IteratedIntegralTable& table,
                            std::size_t t_index) {
    detail::check_same_alphabet(p.alphabet(), table.alphabet, "series output");
    if (t_index >= table.times.size())
        throw context_error("grid index out of range");
    int depth = std::min(p.trunc_degree(), table.depth);
    KahanAcc acc;
    for (const auto& [w, c] : p.coeffs())
        if ((int)w.size() <= depth)
            acc.add(rat_double(c) * table.values.at(w)[t_index]);
    return acc.value();
}

// Max grid deviation of xi_lam * xi_mu from the sum of xi over the
// shuffle of the two words.
inline double verify_shuffle_identity(const IteratedIntegralTable& table, const Word& lam,
                                      const Word& mu) {
    if ((int)(lam.size() + mu.size()) > table.depth)
        throw degree_error("shuffle identity needs depth " +
                           std::to_string(lam.size() + mu.size()) + ", table has " +
                           std::to_string(table.depth));
    NoncommPoly sh = shuffle_words(table.alphabet, lam, mu);
    const auto& a = table.values.at(lam);
    const auto& b = table.values.at(mu);
    double worst = 0.0;
    for (std::size_t k = 0; k < table.times.size(); ++k) {
        KahanAcc acc;
        for (const auto& [w, c] : sh.terms())
            acc.add(rat_double(c) * table.values.at(w)[k]);
        worst = std::max(worst, std::abs(a[k] * b[k] - acc.value()));
    }
    return worst;
}

struct CompareReport {
    Trajectory trajectory;
    std::vector<double> series_values;
    std::vector<double> errors;
    double max_error = 0.0;
    double error_at_t_end = 0.0;
    double empirical_order = 0.0;
};

namespace detail {

inline double end_error(const System& sys, const Series& p, const ControlSignals& u,
                        double t_end, int steps) {
    Trajectory traj = simulate(sys, u, t_end, steps);
    IteratedIntegralTable table =
        iterated_integrals(u, p.trunc_degree(), t_end, steps);
    std::size_t last = traj.times.size() - 1;
    return std::abs(traj.outputs[last] - series_output(p, table, last));
}

}  // namespace detail

// Runs the simulation and the truncated series side by side, then
// estimates the remainder's order as the slope of log error between the
// end times t_end/4 and t_end, keeping the step size fixed in the short
// run.  A remainder of order t^(D+1) shows up as a slope of about
// D + 1; a vanishing error reports as +inf rather than a meaningless
// slope.
inline CompareReport compare_series_vs_simulation(const System& sys,
                                                  const ControlSignals& u, int D,
                                                  double t_end, int steps) {
    Series p = generating_series(sys, D);
    CompareReport rep;
    rep.trajectory = simulate(sys, u, t_end, steps);
    IteratedIntegralTable table = iterated_integrals(u, D, t_end, steps);
    for (std::size_t k = 0; k < rep.trajectory.times.size(); ++k) {
        double s = series_output(p, table, k);
        rep.series_values.push_back(s);
        rep.errors.push_back(std::abs(rep.trajectory.outputs[k] - s));
        rep.max_error = std::max(rep.max_error, rep.errors.back());
    }
    rep.error_at_t_end = rep.errors.back();

    double e1 = rep.error_at_t_end;
    double e4 = detail::end_error(sys, p, u, t_end / 4.0, std::max(1, steps / 4));
    if (e1 <= 0.0 || e4 <= 0.0)
        rep.empirical_order = std::numeric_limits<double>::infinity();
    else
        rep.empirical_order = std::log(e1 / e4) / (2.0 * std::log(2.0));
    return rep;
}

// CSV dump of a comparison run: one row per grid point.
inline std::string compare_csv(const System& sys, const CompareReport& rep) {
    std::string out = "t";
    for (const std::string& v : sys.varnames) out += "," + v;
    out += ",f,series,error\n";
    for (std::size_t k = 0; k < rep.trajectory.times.size(); ++k) {
        out += double_str(rep.trajectory.times[k]);
        for (double x : rep.trajectory.states[k]) out += "," + double_str(x);
        out += "," + double_str(rep.trajectory.outputs[k]);
        out += "," + double_str(rep.series_values[k]);
        out += "," + double_str(rep.errors[k]);
        out += "\n";
    }
    return out;
}

}  // namespace fliess
