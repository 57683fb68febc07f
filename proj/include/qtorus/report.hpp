#pragma once

#include <cstddef>
#include <map>
#include <optional>
#include <set>
#include <sstream>
#include <string>
#include <utility>
#include <vector>

#include <json.hpp>

#include "qtorus/algebra.hpp"
#include "qtorus/errors.hpp"
#include "qtorus/invariants.hpp"
#include "qtorus/lattice.hpp"
#include "qtorus/predict.hpp"
#include "qtorus/presentation_io.hpp"
#include "qtorus/scalars.hpp"

// Assembled invariant reports plus the two analysis pipelines.  Reports
// render to stable human-readable text and to a JSON document that parses
// back to an equal report; both carry the same numbers.
namespace qtorus {

struct ExtensionBlock {
    QTorusPresentation qstar;
    std::size_t hs = 0;
    bool trivial_intersection = false;
    std::set<std::size_t> vset;
    std::string vset_source;  // "flag" or "dichotomy"
    DimSet superset;
    std::set<std::size_t> forbidden;

    friend bool operator==(const ExtensionBlock& a, const ExtensionBlock& b) {
        return a.qstar == b.qstar && a.hs == b.hs &&
               a.trivial_intersection == b.trivial_intersection && a.vset == b.vset &&
               a.vset_source == b.vset_source && a.superset == b.superset &&
               a.forbidden == b.forbidden;
    }
};

struct InvariantReport {
    QTorusPresentation presentation;
    std::vector<std::string> assumptions;

    std::size_t lambda_rank = 0;
    Sublattice center;
    KdimEstimate kd;
    std::size_t gk = 0;
    std::optional<std::size_t> holonomic;  // absent when kd bounds stay open

    // "applies", "hypothesis_failed", or "inexact_kdim"
    std::string dichotomy_status;
    DimSet dichotomy;          // meaningful only when status = applies
    std::string dichotomy_detail;

    std::optional<ExtensionBlock> extension;

    friend bool operator==(const InvariantReport& a, const InvariantReport& b) {
        return a.presentation == b.presentation && a.assumptions == b.assumptions &&
               a.lambda_rank == b.lambda_rank && a.center == b.center && a.kd == b.kd &&
               a.gk == b.gk && a.holonomic == b.holonomic &&
               a.dichotomy_status == b.dichotomy_status && a.dichotomy == b.dichotomy &&
               a.dichotomy_detail == b.dichotomy_detail && a.extension == b.extension;
    }
};

// ---------------------------------------------------------------------------
// pipelines

inline InvariantReport analyze(const ParsedInput& input, std::size_t search_bound = 2) {
    const QTorusPresentation& pres = input.presentation;
    InvariantReport rep;
    rep.presentation = pres;
    rep.assumptions = input.assumptions;
    rep.lambda_rank = lambda_group_rank(pres);
    rep.center = center_lattice(pres);
    rep.kd = kdim(pres, search_bound);
    rep.gk = gk_algebra(pres);
    if (rep.kd.exact()) rep.holonomic = holonomic_bound(pres, rep.kd);

    if (!rep.kd.exact()) {
        rep.dichotomy_status = "inexact_kdim";
        rep.dichotomy_detail = "Krull dimension bounds stayed open (lower " +
                               std::to_string(rep.kd.lower) + ", upper " +
                               std::to_string(rep.kd.upper) + ")";
    } else {
        try {
            rep.dichotomy = dichotomy_set(pres, rep.kd);
            rep.dichotomy_status = "applies";
        } catch (const QtError& err) {
            if (err.kind() != ErrorKind::hypothesis_failed) throw;
            rep.dichotomy_status = "hypothesis_failed";
            rep.dichotomy_detail = err.message();
        }
    }
    return rep;
}

inline InvariantReport extend(const ParsedInput& input, std::size_t search_bound = 2,
                              const std::optional<std::set<std::size_t>>& vset_flag = {}) {
    if (!input.sigma)
        fail(ErrorKind::parse, "this command needs a [sigma] section describing the automorphism");
    const QTorusPresentation& pres = input.presentation;
    const ScalarAutomorphismSpec& sigma = *input.sigma;

    InvariantReport rep = analyze(input, search_bound);
    ExtensionBlock ext;
    ext.qstar = skew_extension(pres, sigma);
    ext.hs = hs_rank(sigma);
    ext.trivial_intersection = gh_trivial(pres, sigma);
    if (!ext.trivial_intersection)
        fail(ErrorKind::hypothesis_failed,
             "the multiparameter group and the automorphism scalar group intersect "
             "nontrivially; the superset bound does not apply");

    DimSet V;
    V.semantics = DimSetKind::dichotomy_candidates;
    if (vset_flag) {
        V.values.insert(vset_flag->begin(), vset_flag->end());
        ext.vset_source = "flag";
    } else if (rep.dichotomy_status == "applies") {
        V = rep.dichotomy;
        ext.vset_source = "dichotomy";
    } else if (rep.dichotomy_status == "inexact_kdim") {
        fail(ErrorKind::inexact_kdim,
             "cannot derive the base-torus dimension set: " + rep.dichotomy_detail +
                 "; pass --vset or raise --bound");
    } else {
        fail(ErrorKind::missing_v_set,
             "no dimension set available for the base torus (" + rep.dichotomy_detail +
                 "); pass --vset a,b,... to supply one");
    }
    ext.vset = V.values;
    ext.superset = extension_superset(pres, sigma, V);
    ext.forbidden = forbidden_dims(ext.superset, pres.n() + 1);
    rep.extension = std::move(ext);
    return rep;
}

// ---------------------------------------------------------------------------
// rendering

namespace detail {

inline std::string row_to_string(const std::vector<Int>& row) {
    std::string s = "[";
    for (std::size_t j = 0; j < row.size(); ++j) {
        if (j) s += " ";
        s += row[j].get_str();
    }
    return s + "]";
}

inline std::string set_to_string(const std::set<std::size_t>& values) {
    std::string s = "{";
    bool first = true;
    for (std::size_t v : values) {
        if (!first) s += ", ";
        s += std::to_string(v);
        first = false;
    }
    return s + "}";
}

inline std::vector<std::string> generator_names(const GeneratorBasis& basis) {
    std::vector<std::string> out;
    out.reserve(basis.size());
    for (std::size_t i = 0; i < basis.size(); ++i) out.push_back(basis.label(i));
    return out;
}

inline void render_matrix_text(std::ostream& os, const QTorusPresentation& pres,
                               const char* indent) {
    for (std::size_t i = 0; i < pres.n(); ++i) {
        os << indent << "[";
        for (std::size_t j = 0; j < pres.n(); ++j) {
            if (j) os << " ";
            os << render_scalar(pres.q(i, j), pres.basis());
        }
        os << "]\n";
    }
}

inline void render_lattice_text(std::ostream& os, const IntegerMatrix& basis) {
    if (basis.rows() == 0) {
        os << " {}";
    } else {
        for (std::size_t i = 0; i < basis.rows(); ++i) os << " " << row_to_string(basis.row(i));
    }
    os << "\n";
}

}  // namespace detail

inline std::string render_text(const InvariantReport& rep) {
    const QTorusPresentation& pres = rep.presentation;
    std::ostringstream os;
    os << "quantum torus invariant report\n";
    os << "presentation: n = " << pres.n() << ", mode = " << mode_name(pres.basis().mode())
       << ", m = " << pres.basis().size() << "\n";
    os << "scalar generators:";
    for (const auto& g : detail::generator_names(pres.basis())) os << " " << g;
    os << "\n";
    os << "q matrix:\n";
    detail::render_matrix_text(os, pres, "  ");
    for (const auto& a : rep.assumptions) os << "assumption: " << a << "\n";

    os << "lambda_group_rank: " << rep.lambda_rank << "\n";
    os << "center: rank " << rep.center.rank() << ", basis";
    detail::render_lattice_text(os, rep.center.basis());
    os << "krull_dimension: ";
    if (rep.kd.exact())
        os << rep.kd.lower << " (exact)\n";
    else
        os << "in [" << rep.kd.lower << ", " << rep.kd.upper << "] (bounds open)\n";
    os << "kdim_witness:";
    detail::render_lattice_text(os, rep.kd.witness.basis());
    os << "gk_algebra: " << rep.gk << "\n";
    if (rep.holonomic)
        os << "holonomic_bound: " << *rep.holonomic << "\n";
    else
        os << "holonomic_bound: unavailable (krull bounds open)\n";

    os << "simple-module dichotomy: ";
    if (rep.dichotomy_status == "applies")
        os << "applies; gk of any simple module lies in " << detail::set_to_string(rep.dichotomy.values)
           << "\n";
    else
        os << rep.dichotomy_status << " (" << rep.dichotomy_detail << ")\n";

    if (rep.extension) {
        const ExtensionBlock& ext = *rep.extension;
        os << "extension by scalar automorphism:\n";
        os << "qstar matrix (n_star = " << ext.qstar.n() << "):\n";
        detail::render_matrix_text(os, ext.qstar, "  ");
        os << "hs_rank: " << ext.hs << "\n";
        os << "trivial_intersection: " << (ext.trivial_intersection ? "true" : "false") << "\n";
        os << "base dimension set: " << detail::set_to_string(ext.vset) << " (source: "
           << ext.vset_source << ")\n";
        os << "superset of simple-module gk values: " << detail::set_to_string(ext.superset.values)
           << "\n";
        os << "forbidden gk values in 1.." << ext.qstar.n() << ": "
           << detail::set_to_string(ext.forbidden) << "\n";
    }
    return os.str();
}

namespace detail {

inline nlohmann::json matrix_to_json(const IntegerMatrix& M) {
    nlohmann::json rows = nlohmann::json::array();
    for (std::size_t i = 0; i < M.rows(); ++i) {
        nlohmann::json row = nlohmann::json::array();
        for (std::size_t j = 0; j < M.cols(); ++j) row.push_back(M(i, j).get_str());
        rows.push_back(std::move(row));
    }
    return rows;
}

inline IntegerMatrix matrix_from_json(const nlohmann::json& rows, std::size_t cols) {
    IntegerMatrix M(rows.size(), cols);
    for (std::size_t i = 0; i < rows.size(); ++i) {
        const auto& row = rows.at(i);
        if (row.size() != cols) fail(ErrorKind::parse, "matrix row of unexpected length");
        for (std::size_t j = 0; j < cols; ++j)
            M(i, j) = Int(row.at(j).get_ref<const std::string&>());
    }
    return M;
}

inline nlohmann::json presentation_to_json(const QTorusPresentation& pres) {
    nlohmann::json q = nlohmann::json::array();
    for (std::size_t i = 0; i < pres.n(); ++i) {
        nlohmann::json row = nlohmann::json::array();
        for (std::size_t j = 0; j < pres.n(); ++j)
            row.push_back(render_scalar(pres.q(i, j), pres.basis()));
        q.push_back(std::move(row));
    }
    return nlohmann::json{{"n", pres.n()},
                          {"mode", mode_name(pres.basis().mode())},
                          {"m", pres.basis().size()},
                          {"generators", generator_names(pres.basis())},
                          {"q", std::move(q)}};
}

inline QTorusPresentation presentation_from_json(const nlohmann::json& j) {
    const std::size_t n = j.at("n").get<std::size_t>();
    const std::string mode = j.at("mode").get<std::string>();
    GeneratorBasis basis;
    if (mode == "symbolic") {
        basis = GeneratorBasis::symbolic(j.at("generators").get<std::vector<std::string>>());
    } else if (mode == "rational") {
        std::vector<Int> primes;
        for (const auto& g : j.at("generators")) primes.emplace_back(g.get_ref<const std::string&>());
        basis = GeneratorBasis::rational(std::move(primes));
    } else {
        fail(ErrorKind::parse, "unknown mode '" + mode + "' in report");
    }
    std::map<std::pair<std::size_t, std::size_t>, ExponentVector> upper;
    const auto& q = j.at("q");
    if (q.size() != n) fail(ErrorKind::parse, "q matrix of unexpected size");
    for (std::size_t i = 0; i < n; ++i)
        for (std::size_t jj = i + 1; jj < n; ++jj)
            upper[{i, jj}] = parse_scalar(q.at(i).at(jj).get_ref<const std::string&>(), basis);
    QTorusPresentation pres = QTorusPresentation::from_upper(n, basis, upper);
    pres.validate();
    return pres;
}

inline nlohmann::json dim_set_to_json(const DimSet& s) {
    nlohmann::json hyp = nlohmann::json::array();
    for (const auto& h : s.hypotheses)
        hyp.push_back({{"name", h.name}, {"satisfied", h.satisfied}, {"detail", h.detail}});
    return nlohmann::json{{"semantics", dim_set_kind_name(s.semantics)},
                          {"values", s.values},
                          {"hypotheses", std::move(hyp)}};
}

inline DimSet dim_set_from_json(const nlohmann::json& j) {
    DimSet s;
    const std::string sem = j.at("semantics").get<std::string>();
    if (sem == "dichotomy_candidates")
        s.semantics = DimSetKind::dichotomy_candidates;
    else if (sem == "superset")
        s.semantics = DimSetKind::superset;
    else
        fail(ErrorKind::parse, "unknown dimension-set semantics '" + sem + "'");
    s.values = j.at("values").get<std::set<std::size_t>>();
    for (const auto& h : j.at("hypotheses"))
        s.hypotheses.push_back({h.at("name").get<std::string>(), h.at("satisfied").get<bool>(),
                                h.at("detail").get<std::string>()});
    return s;
}

}  // namespace detail

inline nlohmann::json to_json(const InvariantReport& rep) {
    nlohmann::json j;
    j["format"] = "qtorus-report";
    j["version"] = 1;
    j["presentation"] = detail::presentation_to_json(rep.presentation);
    j["assumptions"] = rep.assumptions;
    j["invariants"] = {
        {"lambda_group_rank", rep.lambda_rank},
        {"center", {{"rank", rep.center.rank()}, {"basis", detail::matrix_to_json(rep.center.basis())}}},
        {"krull_dimension",
         {{"lower", rep.kd.lower},
          {"upper", rep.kd.upper},
          {"exact", rep.kd.exact()},
          {"witness", detail::matrix_to_json(rep.kd.witness.basis())}}},
        {"gk_algebra", rep.gk},
        {"holonomic_bound", rep.holonomic ? nlohmann::json(*rep.holonomic) : nlohmann::json()},
    };
    j["dichotomy"] = {{"status", rep.dichotomy_status}, {"detail", rep.dichotomy_detail}};
    if (rep.dichotomy_status == "applies")
        j["dichotomy"]["set"] = detail::dim_set_to_json(rep.dichotomy);
    if (rep.extension) {
        const ExtensionBlock& ext = *rep.extension;
        j["extension"] = {{"n_star", ext.qstar.n()},
                          {"qstar", detail::presentation_to_json(ext.qstar)},
                          {"hs_rank", ext.hs},
                          {"trivial_intersection", ext.trivial_intersection},
                          {"vset", ext.vset},
                          {"vset_source", ext.vset_source},
                          {"superset", detail::dim_set_to_json(ext.superset)},
                          {"forbidden", ext.forbidden}};
    }
    return j;
}

inline std::string render_json(const InvariantReport& rep) { return to_json(rep).dump(2) + "\n"; }

inline InvariantReport report_from_json(const std::string& text) {
    nlohmann::json j;
    try {
        j = nlohmann::json::parse(text);
    } catch (const nlohmann::json::exception& e) {
        fail(ErrorKind::parse, std::string("report is not valid JSON: ") + e.what());
    }
    InvariantReport rep;
    try {
        rep.presentation = detail::presentation_from_json(j.at("presentation"));
        rep.assumptions = j.at("assumptions").get<std::vector<std::string>>();
        const auto& inv = j.at("invariants");
        rep.lambda_rank = inv.at("lambda_group_rank").get<std::size_t>();
        const std::size_t n = rep.presentation.n();
        rep.center = Sublattice::from_generators(
            detail::matrix_from_json(inv.at("center").at("basis"), n));
        const auto& kd = inv.at("krull_dimension");
        rep.kd.lower = kd.at("lower").get<std::size_t>();
        rep.kd.upper = kd.at("upper").get<std::size_t>();
        rep.kd.witness = Sublattice::from_generators(detail::matrix_from_json(kd.at("witness"), n));
        rep.gk = inv.at("gk_algebra").get<std::size_t>();
        if (!inv.at("holonomic_bound").is_null())
            rep.holonomic = inv.at("holonomic_bound").get<std::size_t>();
        rep.dichotomy_status = j.at("dichotomy").at("status").get<std::string>();
        rep.dichotomy_detail = j.at("dichotomy").at("detail").get<std::string>();
        if (rep.dichotomy_status == "applies")
            rep.dichotomy = detail::dim_set_from_json(j.at("dichotomy").at("set"));
        if (j.contains("extension")) {
            ExtensionBlock ext;
            ext.qstar = detail::presentation_from_json(j.at("extension").at("qstar"));
            ext.hs = j.at("extension").at("hs_rank").get<std::size_t>();
            ext.trivial_intersection = j.at("extension").at("trivial_intersection").get<bool>();
            ext.vset = j.at("extension").at("vset").get<std::set<std::size_t>>();
            ext.vset_source = j.at("extension").at("vset_source").get<std::string>();
            ext.superset = detail::dim_set_from_json(j.at("extension").at("superset"));
            ext.forbidden = j.at("extension").at("forbidden").get<std::set<std::size_t>>();
            rep.extension = std::move(ext);
        }
    } catch (const nlohmann::json::exception& e) {
        fail(ErrorKind::parse, std::string("report JSON is missing required fields: ") + e.what());
    }
    return rep;
}

}  // namespace qtorus
