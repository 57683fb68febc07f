#include <catch2/catch_amalgamated.hpp>

#include <map>
#include <random>
#include <utility>
#include <vector>

#include "qtorus/invariants.hpp"
#include "qtorus/oracle.hpp"

using namespace qtorus;

namespace {

QTorusPresentation sample4d() {
    auto basis = GeneratorBasis::symbolic({"q1", "q2", "q3"});
    std::map<std::pair<std::size_t, std::size_t>, ExponentVector> upper;
    upper[{0, 3}] = ExponentVector::unit(3, 0);
    upper[{1, 3}] = ExponentVector::unit(3, 1);
    upper[{2, 3}] = ExponentVector::unit(3, 2);
    auto p = QTorusPresentation::from_upper(4, basis, upper);
    p.validate();
    return p;
}

// the 5-generator extension of sample4d by four fresh scalars
QTorusPresentation sample5d_star() {
    auto basis = GeneratorBasis::symbolic({"q1", "q2", "q3", "p1", "p2", "p3", "p4"});
    std::map<std::pair<std::size_t, std::size_t>, ExponentVector> upper;
    upper[{0, 3}] = ExponentVector::unit(7, 0);
    upper[{1, 3}] = ExponentVector::unit(7, 1);
    upper[{2, 3}] = ExponentVector::unit(7, 2);
    auto p = QTorusPresentation::from_upper(4, basis, upper);
    ScalarAutomorphismSpec sigma;
    for (std::size_t i = 0; i < 4; ++i) sigma.p.push_back(ExponentVector::unit(7, 3 + i));
    auto star = skew_extension(p, sigma);
    star.validate();
    return star;
}

QTorusPresentation commutative(std::size_t n) {
    auto p = QTorusPresentation::from_upper(n, GeneratorBasis::symbolic({}), {});
    p.validate();
    return p;
}

QTorusPresentation rank1_pair() {
    std::map<std::pair<std::size_t, std::size_t>, ExponentVector> upper;
    upper[{0, 1}] = ExponentVector::unit(1, 0);
    auto p = QTorusPresentation::from_upper(2, GeneratorBasis::symbolic({"g"}), upper);
    p.validate();
    return p;
}

std::mt19937_64& prng() {
    static std::mt19937_64 g(0x1BAD4ACEULL);
    return g;
}

long draw(long lo, long hi) {
    return lo + static_cast<long>(prng()() % static_cast<unsigned long long>(hi - lo + 1));
}

QTorusPresentation random_presentation(std::size_t max_n, std::size_t max_m) {
    const std::size_t n = 1 + static_cast<std::size_t>(draw(0, static_cast<long>(max_n) - 1));
    const std::size_t m = static_cast<std::size_t>(draw(0, static_cast<long>(max_m)));
    std::vector<std::string> labels;
    for (std::size_t k = 0; k < m; ++k) labels.push_back("g" + std::to_string(k + 1));
    std::map<std::pair<std::size_t, std::size_t>, ExponentVector> upper;
    for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = i + 1; j < n; ++j) {
            ExponentVector e = ExponentVector::zero(m);
            for (std::size_t k = 0; k < m; ++k) e[k] = draw(-3, 3);
            upper[{i, j}] = std::move(e);
        }
    auto p = QTorusPresentation::from_upper(n, GeneratorBasis::symbolic(labels), upper);
    p.validate();
    return p;
}

}  // namespace

TEST_CASE("lambda_group_rank counts independent multiparameters") {
    CHECK(lambda_group_rank(sample4d()) == 3);
    CHECK(lambda_group_rank(commutative(4)) == 0);
    CHECK(lambda_group_rank(sample5d_star()) == 7);
}

TEST_CASE("center_lattice is the joint kernel of the pairing") {
    SECTION("4d sample has trivial center") { CHECK(center_lattice(sample4d()).rank() == 0); }
    SECTION("commutative torus is its own center") {
        const auto Z = center_lattice(commutative(3));
        CHECK(Z.rank() == 3);
        CHECK(Z.basis() == IntegerMatrix::identity(3));
    }
    SECTION("one twisted pair in three generators") {
        std::map<std::pair<std::size_t, std::size_t>, ExponentVector> upper;
        upper[{0, 1}] = ExponentVector::unit(1, 0);
        auto p = QTorusPresentation::from_upper(3, GeneratorBasis::symbolic({"g"}), upper);
        const auto Z = center_lattice(p);
        CHECK(Z.rank() == 1);
        CHECK(Z.basis() == IntegerMatrix{{0, 0, 1}});
    }
}

TEST_CASE("kdim pins down the canonical examples exactly") {
    SECTION("4d sample") {
        const auto kd = kdim(sample4d());
        CHECK(kd.exact());
        CHECK(kd.lower == 3);
        CHECK(kd.witness.basis() ==
              IntegerMatrix{{1, 0, 0, 0}, {0, 1, 0, 0}, {0, 0, 1, 0}});
        CHECK(is_commutative_sublattice(kd.witness, sample4d()));
    }
    SECTION("commutative torus") {
        const auto kd = kdim(commutative(5));
        CHECK(kd.exact());
        CHECK(kd.lower == 5);
    }
    SECTION("single form closed formula") {
        const auto kd = kdim(rank1_pair());
        CHECK(kd.exact());
        CHECK(kd.lower == 1);
        CHECK(is_commutative_sublattice(kd.witness, rank1_pair()));
    }
}

TEST_CASE("gk_algebra is the generator count") {
    CHECK(gk_algebra(sample4d()) == 4);
    CHECK(gk_algebra(sample5d_star()) == 5);
    CHECK(gk_algebra(commutative(1)) == 1);
}

TEST_CASE("holonomic_bound subtracts the Krull dimension") {
    CHECK(holonomic_bound(sample4d(), kdim(sample4d())) == 1);
    CHECK(holonomic_bound(commutative(3), kdim(commutative(3))) == 0);
    CHECK(holonomic_bound(rank1_pair(), kdim(rank1_pair())) == 1);

    KdimEstimate open;
    open.lower = 1;
    open.upper = 2;
    try {
        holonomic_bound(sample4d(), open);
        FAIL("expected InexactKdim");
    } catch (const QtError& e) {
        CHECK(e.kind() == ErrorKind::inexact_kdim);
    }
}

TEST_CASE("center rows commute with every generator", "[property]") {
    for (int t = 0; t < 200; ++t) {
        const auto p = random_presentation(4, 3);
        const auto forms = pairing(p);
        const auto Z = center_lattice(p);
        for (std::size_t r = 0; r < Z.rank(); ++r)
            for (std::size_t i = 0; i < p.n(); ++i) {
                Monomial ei(p.n());
                ei[i] = 1;
                CHECK(forms.lambda(Z.basis().row(r), ei).is_zero());
            }
        // vectors outside the center span must violate some condition
        for (int s = 0; s < 4; ++s) {
            Monomial v(p.n());
            for (auto& x : v) x = draw(-3, 3);
            if (member(v, Z)) continue;
            bool violates = false;
            for (std::size_t i = 0; i < p.n() && !violates; ++i) {
                Monomial ei(p.n());
                ei[i] = 1;
                violates = !forms.lambda(v, ei).is_zero();
            }
            CHECK(violates);
        }
    }
}

TEST_CASE("kdim estimates are internally consistent", "[property]") {
    for (int t = 0; t < 60; ++t) {
        const auto p = random_presentation(4, 3);
        const auto kd = kdim(p);
        CHECK(kd.lower <= kd.upper);
        CHECK(kd.upper <= p.n());
        CHECK(kd.witness.rank() == kd.lower);
        CHECK(is_commutative_sublattice(kd.witness, p));
        CHECK(center_lattice(p).rank() <= kd.lower);
    }
}

TEST_CASE("kdim bounds are monotone in the search bound", "[property]") {
    for (int t = 0; t < 12; ++t) {
        const auto p = random_presentation(4, 2);
        const auto narrow = kdim(p, 1);
        const auto wide = kdim(p, 2);
        CHECK(narrow.lower <= wide.lower);
        CHECK(narrow.upper == wide.upper);
    }
}

TEST_CASE("single-form Krull dimension agrees with enumeration", "[property]") {
    for (int t = 0; t < 25; ++t) {
        const std::size_t n = 1 + static_cast<std::size_t>(draw(0, 4));
        IntegerMatrix C(n, n);
        for (std::size_t i = 0; i < n; ++i)
            for (std::size_t j = i + 1; j < n; ++j) {
                C(i, j) = draw(-3, 3);
                C(j, i) = -C(i, j);
            }
        if (C.is_zero()) continue;
        PairingForms forms{n, 1, {C}};
        const std::size_t expect = n - rank(C) / 2;
        CHECK(oracle::isotropic_rank_enum(forms, 2, expect) == expect);
    }
}
