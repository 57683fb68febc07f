#pragma once

#include <cstddef>
#include <set>
#include <string>
#include <vector>

#include "qtorus/algebra.hpp"
#include "qtorus/errors.hpp"
#include "qtorus/invariants.hpp"
#include "qtorus/lattice.hpp"
#include "qtorus/scalars.hpp"

// Predictions about the GK dimensions of simple modules, derived from the
// structural invariants.  Two operators:
//   * dichotomy_set: when K.dim = n - 1 every simple module has GK
//     dimension 1 or n - rank(center) - 1 (both values may coincide);
//   * extension_superset: for the skew extension by a scalar automorphism
//     with H intersecting the multiparameter group trivially, every simple
//     module's GK dimension lies in [rk(H), n] united with (V + 1).
// The second result is a superset claim only: membership of a value does
// not promise a simple module attaining it.
namespace qtorus {

enum class DimSetKind { dichotomy_candidates, superset };

inline const char* dim_set_kind_name(DimSetKind k) {
    return k == DimSetKind::dichotomy_candidates ? "dichotomy_candidates" : "superset";
}

struct HypothesisRecord {
    std::string name;
    bool satisfied = false;
    std::string detail;

    friend bool operator==(const HypothesisRecord& a, const HypothesisRecord& b) {
        return a.name == b.name && a.satisfied == b.satisfied && a.detail == b.detail;
    }
};

struct DimSet {
    std::set<std::size_t> values;
    DimSetKind semantics = DimSetKind::dichotomy_candidates;
    std::vector<HypothesisRecord> hypotheses;

    friend bool operator==(const DimSet& a, const DimSet& b) {
        return a.values == b.values && a.semantics == b.semantics && a.hypotheses == b.hypotheses;
    }
};

// Candidate GK dimensions of simple modules over the torus itself,
// available exactly when the Krull dimension equals n - 1.
inline DimSet dichotomy_set(const QTorusPresentation& pres, const KdimEstimate& kd) {
    const std::size_t n = pres.n();
    if (!kd.exact())
        fail(ErrorKind::inexact_kdim,
             "Krull dimension bounds did not close (lower " + std::to_string(kd.lower) +
                 ", upper " + std::to_string(kd.upper) + "); refusing to test the dichotomy hypothesis");
    if (kd.lower != n - 1)
        fail(ErrorKind::hypothesis_failed,
             "dichotomy requires Krull dimension n - 1 = " + std::to_string(n - 1) +
                 ", but it is " + std::to_string(kd.lower));
    const std::size_t zrank = center_lattice(pres).rank();
    // a rank-(n-1) center would force commutativity, contradicting K.dim = n-1
    if (n < 2 || zrank > n - 2)
        fail(ErrorKind::internal, "center rank " + std::to_string(zrank) +
                                      " is impossible alongside Krull dimension n - 1");
    DimSet out;
    out.semantics = DimSetKind::dichotomy_candidates;
    out.values.insert(1);
    out.values.insert(n - zrank - 1);
    out.hypotheses.push_back({"krull_dimension_is_n_minus_1", true,
                              "K.dim = " + std::to_string(kd.lower) + " = n - 1"});
    return out;
}

inline std::size_t hs_rank(const ScalarAutomorphismSpec& sigma) {
    std::vector<ExponentVector> gens;
    for (const auto& e : sigma.p)
        if (!e.is_zero()) gens.push_back(e);
    return subgroup_rank(gens);
}

// Do the multiparameter group and the automorphism group of scalars
// intersect trivially (inside the shared exponent space)?
inline bool gh_trivial(const QTorusPresentation& pres, const ScalarAutomorphismSpec& sigma) {
    sigma.validate(pres);
    const std::size_t m = pres.basis().size();
    std::vector<std::vector<Int>> g_rows, h_rows;
    for (const auto& e : multiparameter_generators(pres)) g_rows.push_back(e.entries());
    for (const auto& e : sigma.p)
        if (!e.is_zero()) h_rows.push_back(e.entries());
    return intersect_trivially(IntegerMatrix::from_rows(std::move(g_rows), m),
                               IntegerMatrix::from_rows(std::move(h_rows), m));
}

// Superset of attainable GK dimensions over the skew extension:
// [rk(H), n] united with (V + 1), where V is a valid candidate set for the
// base torus.  Requires the trivial-intersection hypothesis.
inline DimSet extension_superset(const QTorusPresentation& pres,
                                 const ScalarAutomorphismSpec& sigma, const DimSet& V) {
    const std::size_t n = pres.n();
    if (!gh_trivial(pres, sigma))
        fail(ErrorKind::hypothesis_failed,
             "the multiparameter group and the automorphism scalar group intersect "
             "nontrivially; the superset bound does not apply");
    DimSet out;
    out.semantics = DimSetKind::superset;
    for (std::size_t d = hs_rank(sigma); d <= n; ++d) out.values.insert(d);
    for (std::size_t v : V.values) out.values.insert(v + 1);
    out.hypotheses.push_back({"scalar_groups_intersect_trivially", true,
                              "multiparameter and automorphism subgroups of the scalar group "
                              "meet only in 1"});
    return out;
}

// GK dimensions in {1, ..., n_star} that no simple module can attain,
// given a superset of the attainable ones.
inline std::set<std::size_t> forbidden_dims(const DimSet& S, std::size_t n_star) {
    if (S.semantics != DimSetKind::superset)
        fail(ErrorKind::internal, "forbidden dimensions require a superset-semantics input");
    std::set<std::size_t> out;
    for (std::size_t d = 1; d <= n_star; ++d)
        if (!S.values.count(d)) out.insert(d);
    return out;
}

}  // namespace qtorus
