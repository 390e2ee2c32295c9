#include <fstream>
#include <functional>
#include <iostream>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "fliess/chen.hpp"
#include "fliess/realize.hpp"
#include "fliess/series.hpp"
#include "fliess/system_io.hpp"
#include "fliess/tree.hpp"

namespace {

std::string read_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw fliess::parse_error("cannot open '" + path + "'");
    std::ostringstream buf;
    buf << in.rdbuf();
    return buf.str();
}

// Empty path means stdout.
void write_output(const std::string& path, const std::string& text) {
    if (path.empty()) {
        std::cout << text;
        return;
    }
    std::ofstream out(path);
    if (!out) throw std::runtime_error("cannot write '" + path + "'");
    out << text;
    if (!out) throw std::runtime_error("write to '" + path + "' failed");
}

void print_mismatches(const fliess::VerifyReport& report) {
    for (const auto& [w, orig, regen] : report.mismatches)
        std::cout << "mismatch " << w.str() << " : " << fliess::rat_str(orig)
                  << " != " << fliess::rat_str(regen) << "\n";
}

int run_series(const std::string& system_path, int degree, const std::string& out) {
    fliess::System sys = fliess::system_from_file(system_path);
    fliess::Series p = fliess::generating_series(sys, degree);
    write_output(out, fliess::series_print(p));
    return 0;
}

int run_rank(const std::string& series_path, int lie_degree) {
    fliess::Series p = fliess::series_parse(read_file(series_path));
    fliess::RankCertificate cert = fliess::lie_rank(p, lie_degree);
    std::cout << "rank " << cert.rank << "\n";
    std::cout << "complement\n";
    for (const auto& e : cert.complement) std::cout << e.label << "\n";
    std::cout << "L basis\n";
    for (const auto& e : cert.l_basis) std::cout << e.label << "\n";
    for (const std::string& w : fliess::check_l_closure(cert))
        std::cout << "warning: " << w << "\n";
    return 0;
}

int run_realize(const std::string& series_path, int lie_degree, int order,
                const std::string& out, const std::string& check_path) {
    fliess::Series p = fliess::series_parse(read_file(series_path));
    if (!check_path.empty()) {
        fliess::Realization real = fliess::realization_parse(read_file(check_path));
        int dcheck = std::min(real.order, p.trunc_degree());
        fliess::VerifyReport report = fliess::verify_realization(p, real, dcheck);
        std::cout << "rank " << report.rank << "\n";
        std::cout << "checked_degree " << report.checked_degree << "\n";
        print_mismatches(report);
        std::cout << (report.ok ? "verify ok" : "verify failed") << "\n";
        return report.ok ? 0 : 2;
    }
    fliess::RankCertificate cert = fliess::lie_rank(p, lie_degree);
    fliess::Realization real = fliess::build_realization(p, cert, order);
    real.vector_fields = fliess::induced_vector_fields(real, p);
    write_output(out, fliess::realization_print(real));
    int dcheck = std::min(order, std::min(lie_degree, p.trunc_degree() - lie_degree));
    fliess::VerifyReport report = fliess::verify_realization(p, real, dcheck);
    if (!report.ok) {
        print_mismatches(report);
        std::cout << "verify failed\n";
        return 2;
    }
    return 0;
}

int run_verify(const std::string& system_path, const std::string& controls, int degree,
               double t_end, int steps, const std::string& out) {
    fliess::System sys = fliess::system_from_file(system_path);
    fliess::ControlSignals u = fliess::ControlSignals::parse(controls, sys.M);
    fliess::CompareReport rep =
        fliess::compare_series_vs_simulation(sys, u, degree, t_end, steps);
    write_output(out, fliess::compare_csv(sys, rep));
    std::cout << "max_error " << fliess::double_str(rep.max_error) << "\n";
    std::cout << "error_at_t_end " << fliess::double_str(rep.error_at_t_end) << "\n";
    std::cout << "empirical_order " << fliess::double_str(rep.empirical_order) << "\n";
    return 0;
}

int run_tree(const std::string& op, const std::vector<std::string>& rest) {
    if (op == "mul") {
        if (rest.size() != 2)
            throw fliess::parse_error("tree mul needs two tree literals");
        fliess::LabeledTree t1 = fliess::tree_parse(rest[0]);
        fliess::LabeledTree t2 = fliess::tree_parse(rest[1]);
        int M = std::max({1, t1.max_label(), t2.max_label()});
        std::cout << fliess::gl_product(M, t1, t2).str() << "\n";
        return 0;
    }
    if (op == "comul") {
        if (rest.size() != 1)
            throw fliess::parse_error("tree comul needs one tree literal");
        fliess::LabeledTree t = fliess::tree_parse(rest[0]);
        int M = std::max(1, t.max_label());
        std::cout << fliess::gl_coproduct(M, t).str() << "\n";
        return 0;
    }
    if (rest.size() != 2)
        throw fliess::parse_error("tree apply needs a tree literal and a system file");
    fliess::LabeledTree t = fliess::tree_parse(rest[0]);
    fliess::System sys = fliess::system_from_file(rest[1]);
    fliess::MultiPoly g = fliess::psi(sys, t, sys.observation);
    std::cout << g.str(sys.varnames) << "\n";
    return 0;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Generating series, Lie rank, realizations and numeric checks "
                 "for polynomial control systems"};
    app.require_subcommand(1);

    std::string sys_path, series_path, out_path, check_path, controls, tree_op;
    std::vector<std::string> tree_args;
    int degree = 0, lie_degree = 0, order = 0, steps = 0;
    double t_end = 0.0;

    auto* c_series = app.add_subcommand("series", "Generating series of a system");
    c_series->add_option("system", sys_path, "system JSON file")->required();
    c_series->add_option("--degree", degree, "truncation degree")->required();
    c_series->add_option("--out", out_path, "output file (stdout if omitted)");

    auto* c_rank = app.add_subcommand("rank", "Lie rank of a series");
    c_rank->add_option("series", series_path, "series text file")->required();
    c_rank->add_option("--lie-degree", lie_degree, "max bracket degree")->required();

    auto* c_realize = app.add_subcommand("realize", "State-space realization of a series");
    c_realize->add_option("series", series_path, "series text file")->required();
    c_realize->add_option("--lie-degree", lie_degree, "max bracket degree");
    c_realize->add_option("--order", order, "truncation order of the realized observation");
    c_realize->add_option("--out", out_path, "output file (stdout if omitted)");
    c_realize->add_option("--check", check_path,
                          "verify an existing realization dump against the series");

    auto* c_verify = app.add_subcommand("verify", "Series vs simulation comparison");
    c_verify->add_option("system", sys_path, "system JSON file")->required();
    c_verify->add_option("--controls", controls, "comma-separated channel specs")
        ->required();
    c_verify->add_option("--degree", degree, "series truncation degree")->required();
    c_verify->add_option("--t", t_end, "end time")->required();
    c_verify->add_option("--steps", steps, "integration steps")->required();
    c_verify->add_option("--out", out_path, "CSV output file (stdout if omitted)");

    auto* c_tree = app.add_subcommand("tree", "Tree algebra operations");
    c_tree->add_option("op", tree_op, "mul, comul or apply")
        ->required()
        ->check(CLI::IsMember({"mul", "comul", "apply"}));
    c_tree->add_option("args", tree_args, "tree literals, then a system file for apply");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        int code = app.exit(e);
        return e.get_name() == "CallForHelp" || e.get_name() == "CallForAllHelp" ? code : 3;
    }

    try {
        if (app.got_subcommand(c_series)) return run_series(sys_path, degree, out_path);
        if (app.got_subcommand(c_rank)) return run_rank(series_path, lie_degree);
        if (app.got_subcommand(c_realize)) {
            if (check_path.empty() &&
                (c_realize->count("--lie-degree") == 0 || c_realize->count("--order") == 0))
                throw fliess::parse_error(
                    "realize needs --lie-degree and --order (or --check)");
            return run_realize(series_path, lie_degree, order, out_path, check_path);
        }
        if (app.got_subcommand(c_verify))
            return run_verify(sys_path, controls, degree, t_end, steps, out_path);
        if (app.got_subcommand(c_tree)) return run_tree(tree_op, tree_args);
    } catch (const fliess::parse_error& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 3;
    } catch (const fliess::degree_error& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 4;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    }
    return 0;
}
