#include <fstream>
#include <iostream>
#include <optional>
#include <set>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "qtorus/report.hpp"
#include "qtorus/selftest.hpp"

namespace {

int exit_code_for(qtorus::ErrorKind kind) {
    using EK = qtorus::ErrorKind;
    switch (kind) {
        case EK::hypothesis_failed:
        case EK::missing_v_set:
            return 3;
        case EK::inexact_kdim:
            return 4;
        case EK::parse:
        case EK::not_antisymmetric:
        case EK::non_unit_diagonal:
        case EK::torsion_scalar:
        case EK::non_unit_rational:
        case EK::unknown_generator:
        case EK::overlapping_generators:
        case EK::length_mismatch:
            return 2;
        default:
            return 1;
    }
}

std::string read_file(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) qtorus::fail(qtorus::ErrorKind::parse, "cannot open file '" + path + "'");
    std::ostringstream buf;
    buf << in.rdbuf();
    return buf.str();
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"structural invariants of quantum torus algebras"};
    app.require_subcommand(1);

    std::string analyze_file, extend_file;
    bool analyze_json = false, extend_json = false;
    std::size_t analyze_bound = 2, extend_bound = 2;
    std::vector<std::size_t> vset_values;
    bool quick = false;
    unsigned threads = 1;

    CLI::App* cmd_analyze =
        app.add_subcommand("analyze", "report the invariants of a torus presentation");
    cmd_analyze->add_option("file", analyze_file, "presentation file")->required();
    cmd_analyze->add_flag("--json", analyze_json, "machine-readable output");
    cmd_analyze->add_option("--bound", analyze_bound,
                            "entry bound for the isotropic search (default 2)");

    CLI::App* cmd_extend = app.add_subcommand(
        "extend", "analyze the skew extension described by the [sigma] section");
    cmd_extend->add_option("file", extend_file, "presentation file with a [sigma] section")
        ->required();
    cmd_extend->add_flag("--json", extend_json, "machine-readable output");
    cmd_extend->add_option("--bound", extend_bound,
                           "entry bound for the isotropic search (default 2)");
    CLI::Option* vset_opt =
        cmd_extend
            ->add_option("--vset", vset_values,
                         "dimension set of the base torus, e.g. --vset 1,3 (overrides the "
                         "derived set)")
            ->delimiter(',');

    CLI::App* cmd_selftest =
        app.add_subcommand("selftest", "run the randomized certification suites");
    cmd_selftest->add_flag("--quick", quick, "reduced case counts");
    cmd_selftest->add_option("--threads", threads, "worker threads (output is identical)");

    try {
        app.parse(argc, argv);
    } catch (const CLI::CallForHelp& e) {
        return app.exit(e);
    } catch (const CLI::ParseError& e) {
        app.exit(e);  // prints the message; the code itself is normalized
        return 2;
    }

    try {
        if (cmd_analyze->parsed()) {
            const qtorus::ParsedInput input = qtorus::parse_presentation(read_file(analyze_file));
            const qtorus::InvariantReport rep = qtorus::analyze(input, analyze_bound);
            std::cout << (analyze_json ? qtorus::render_json(rep) : qtorus::render_text(rep));
        } else if (cmd_extend->parsed()) {
            const qtorus::ParsedInput input = qtorus::parse_presentation(read_file(extend_file));
            std::optional<std::set<std::size_t>> vset;
            if (vset_opt->count() > 0) vset.emplace(vset_values.begin(), vset_values.end());
            const qtorus::InvariantReport rep = qtorus::extend(input, extend_bound, vset);
            std::cout << (extend_json ? qtorus::render_json(rep) : qtorus::render_text(rep));
        } else {
            qtorus::selftest::Options opt;
            opt.quick = quick;
            opt.threads = threads;
            const auto results = qtorus::selftest::run_selftest(opt);
            std::cout << qtorus::selftest::render_results(results);
            if (!qtorus::selftest::all_passed(results)) return 5;
        }
    } catch (const qtorus::QtError& e) {
        std::cerr << e.what() << "\n";
        return exit_code_for(e.kind());
    } catch (const std::exception& e) {
        std::cerr << "internal error: " << e.what() << "\n";
        return 1;
    }
    return 0;
}
