#include <catch2/catch_amalgamated.hpp>

#include <sys/wait.h>

#include <chrono>
#include <cstdio>
#include <fstream>
#include <iostream>
#include <set>
#include <sstream>
#include <string>

#include "qtorus/report.hpp"
#include "qtorus/selftest.hpp"

// End-to-end exit gate: every behavior the artifact promises, one test per
// promise, each announcing its verdict on a single line.  The CLI runs as a
// subprocess exactly as a user would invoke it.

using namespace qtorus;

namespace {

bool announce(const std::string& name, bool ok) {
    std::cout << "[acceptance] " << name << ": " << (ok ? "PASS" : "FAIL") << std::endl;
    return ok;
}

std::string sample_path(const char* name) {
    return std::string(QTORUS_SAMPLES_DIR) + "/" + name;
}

std::string read_file(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    REQUIRE(in.good());
    std::ostringstream buf;
    buf << in.rdbuf();
    return buf.str();
}

struct CliResult {
    int exit_code = -1;
    std::string out;
};

CliResult run_cli(const std::string& args) {
    const std::string cmd = std::string("\"") + QTORUS_CLI_PATH + "\" " + args + " 2>/dev/null";
    CliResult res;
    FILE* pipe = popen(cmd.c_str(), "r");
    REQUIRE(pipe != nullptr);
    char chunk[4096];
    std::size_t got = 0;
    while ((got = fread(chunk, 1, sizeof chunk, pipe)) > 0) res.out.append(chunk, got);
    const int status = pclose(pipe);
    res.exit_code = WIFEXITED(status) ? WEXITSTATUS(status) : -1;
    return res;
}

template <typename Fn>
double timed(Fn&& fn) {
    const auto t0 = std::chrono::steady_clock::now();
    fn();
    return std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
}

}  // namespace

TEST_CASE("analyze reproduces the 4d sample invariants") {
    bool ok = true;
    auto req = [&](bool c) {
        CHECK(c);
        ok = ok && c;
    };

    InvariantReport rep;
    const double secs = timed([&] { rep = analyze(parse_presentation(read_file(sample_path("example_4d.qt")))); });
    req(rep.lambda_rank == 3);
    req(rep.center.rank() == 0);
    req(rep.kd.exact());
    req(rep.kd.lower == 3);
    req(rep.kd.witness.basis() == IntegerMatrix{{1, 0, 0, 0}, {0, 1, 0, 0}, {0, 0, 1, 0}});
    req(rep.dichotomy_status == "applies");
    req(rep.dichotomy.values == std::set<std::size_t>{1, 3});
    req(secs < 1.0);

    const CliResult cli = run_cli("analyze " + sample_path("example_4d.qt"));
    req(cli.exit_code == 0);
    req(cli.out.find("lambda_group_rank: 3") != std::string::npos);
    req(cli.out.find("center: rank 0") != std::string::npos);
    req(cli.out.find("krull_dimension: 3 (exact)") != std::string::npos);
    req(cli.out.find("{1, 3}") != std::string::npos);

    REQUIRE(announce("analyze-4d-sample", ok));
}

TEST_CASE("extend reproduces the 4d sample superset") {
    bool ok = true;
    auto req = [&](bool c) {
        CHECK(c);
        ok = ok && c;
    };

    InvariantReport rep;
    const double secs = timed([&] { rep = extend(parse_presentation(read_file(sample_path("example_4d.qt")))); });
    req(rep.extension.has_value());
    const auto& ext = *rep.extension;
    req(ext.hs == 4);
    req(ext.trivial_intersection);
    req(ext.qstar.n() == 5);
    // spot-check the appended column and row of the extended matrix
    req(render_scalar(ext.qstar.q(0, 4), ext.qstar.basis()) == "p1^-1");
    req(render_scalar(ext.qstar.q(4, 3), ext.qstar.basis()) == "p4");
    req(ext.superset.values == std::set<std::size_t>{2, 4});
    req(ext.forbidden == std::set<std::size_t>{1, 3, 5});
    req(secs < 1.0);

    const CliResult cli = run_cli("extend " + sample_path("example_4d.qt"));
    req(cli.exit_code == 0);
    req(cli.out.find("hs_rank: 4") != std::string::npos);
    req(cli.out.find("trivial_intersection: true") != std::string::npos);
    req(cli.out.find("superset of simple-module gk values: {2, 4}") != std::string::npos);
    req(cli.out.find("forbidden gk values in 1..5: {1, 3, 5}") != std::string::npos);

    REQUIRE(announce("extend-4d-sample", ok));
}

TEST_CASE("the cocycle identity holds on 1000 seeded triples") {
    const auto r = selftest::suite_cocycle_identity({false, 1});
    const bool ok = r.cases == 1000 && r.failures == 0;
    if (!ok) CHECK(r.first_failure.empty());
    REQUIRE(announce("cocycle-identity-1000", ok));
}

TEST_CASE("defining relations hold on 100 seeded presentations") {
    selftest::SuiteResult r;
    const double secs = timed([&] { r = selftest::suite_defining_relations({false, 1}); });
    const bool ok = r.cases == 100 && r.failures == 0 && secs < 10.0;
    if (r.failures != 0) CHECK(r.first_failure.empty());
    CHECK(secs < 10.0);
    REQUIRE(announce("defining-relations-100", ok));
}

TEST_CASE("normal forms certify on 500 seeded matrices") {
    selftest::SuiteResult r;
    const double secs = timed([&] { r = selftest::suite_normal_forms({false, 1}); });
    const bool ok = r.cases == 500 && r.failures == 0 && secs < 30.0;
    if (r.failures != 0) CHECK(r.first_failure.empty());
    CHECK(secs < 30.0);
    REQUIRE(announce("normal-forms-500", ok));
}

TEST_CASE("the single-form closed formula matches enumeration on 100 matrices") {
    selftest::SuiteResult r;
    const double secs = timed([&] { r = selftest::suite_isotropic_closed_form({false, 1}); });
    const bool ok = r.cases == 100 && r.failures == 0 && secs < 60.0;
    if (r.failures != 0) CHECK(r.first_failure.empty());
    CHECK(secs < 60.0);
    REQUIRE(announce("isotropic-closed-form-100", ok));
}

TEST_CASE("center conditions hold on 200 seeded presentations") {
    bool ok = true;
    auto req = [&](bool c) {
        CHECK(c);
        ok = ok && c;
    };

    selftest::SuiteResult r;
    const double secs = timed([&] { r = selftest::suite_center_conditions({false, 1}); });
    req(r.cases == 200);
    req(r.failures == 0);
    req(secs < 10.0);

    // at least 50 vectors strictly outside the center span, each violating
    // some pairing condition
    std::size_t outside = 0;
    for (std::size_t i = 0; i < 200 && outside < 50; ++i) {
        auto g = selftest::detail::case_rng(0x0FF5E7C0DEULL, i);
        const auto pres = selftest::detail::rnd_presentation(g, 4, 3);
        const auto forms = pairing(pres);
        const auto Z = center_lattice(pres);
        for (int attempt = 0; attempt < 4 && outside < 50; ++attempt) {
            const Monomial v = selftest::detail::rnd_monomial(g, pres.n(), -5, 5);
            if (member(v, Z)) continue;
            ++outside;
            bool violates = false;
            for (std::size_t e = 0; e < pres.n() && !violates; ++e) {
                Monomial ei(pres.n());
                ei[e] = 1;
                violates = !forms.lambda(v, ei).is_zero();
            }
            req(violates);
        }
    }
    req(outside >= 50);

    REQUIRE(announce("center-conditions-200", ok));
}

TEST_CASE("hypothesis failures are reported and exit distinctly") {
    bool ok = true;
    auto req = [&](bool c) {
        CHECK(c);
        ok = ok && c;
    };

    // the commutative torus: dichotomy hypothesis fails, analysis succeeds
    const auto rep = analyze(parse_presentation(read_file(sample_path("commutative_3d.qt"))));
    req(rep.dichotomy_status == "hypothesis_failed");
    req(rep.kd.exact());
    req(rep.kd.lower == 3);  // K.dim = n is the reported obstruction
    req(rep.dichotomy_detail.find("3") != std::string::npos);

    const CliResult analyzed = run_cli("analyze " + sample_path("commutative_3d.qt"));
    req(analyzed.exit_code == 0);  // reported, not fatal
    req(analyzed.out.find("hypothesis_failed") != std::string::npos);

    // an automorphism scalar equal to a multiparameter aborts the extension
    const CliResult extended = run_cli("extend " + sample_path("overlapping_sigma.qt"));
    req(extended.exit_code == 3);

    REQUIRE(announce("hypothesis-failure-paths", ok));
}

TEST_CASE("holonomic bounds follow the rank minus Krull dimension rule") {
    bool ok = true;
    auto req = [&](bool c) {
        CHECK(c);
        ok = ok && c;
    };

    const auto sample = analyze(parse_presentation(read_file(sample_path("example_4d.qt"))));
    req(sample.holonomic.has_value() && *sample.holonomic == 1);

    const auto comm = analyze(parse_presentation(read_file(sample_path("commutative_3d.qt"))));
    req(comm.holonomic.has_value() && *comm.holonomic == 0);

    const CliResult cli = run_cli("analyze " + sample_path("example_4d.qt"));
    req(cli.out.find("holonomic_bound: 1") != std::string::npos);

    REQUIRE(announce("holonomic-bounds", ok));
}

TEST_CASE("outputs are byte-identical across runs and thread counts") {
    bool ok = true;
    auto req = [&](bool c) {
        CHECK(c);
        ok = ok && c;
    };

    const std::string analyze_cmd = "analyze --json " + sample_path("example_4d.qt");
    const CliResult a1 = run_cli(analyze_cmd);
    const CliResult a2 = run_cli(analyze_cmd);
    req(a1.exit_code == 0);
    req(a1.out == a2.out);
    req(!a1.out.empty());

    const std::string extend_cmd = "extend --json " + sample_path("example_4d.qt");
    const CliResult e1 = run_cli(extend_cmd);
    const CliResult e2 = run_cli(extend_cmd);
    req(e1.exit_code == 0);
    req(e1.out == e2.out);

    const CliResult s1 = run_cli("selftest --quick --threads 1");
    const CliResult s2 = run_cli("selftest --quick --threads 1");
    const CliResult s4 = run_cli("selftest --quick --threads 4");
    req(s1.exit_code == 0);
    req(s1.out == s2.out);
    req(s1.out == s4.out);
    req(s1.out.find("selftest: PASS") != std::string::npos);

    REQUIRE(announce("deterministic-output", ok));
}
