#include <catch2/catch_amalgamated.hpp>

#include <random>

#include "qtorus/lattice.hpp"
#include "qtorus/oracle.hpp"

using namespace qtorus;

namespace {

long rnd(std::mt19937_64& g, long lo, long hi) {
    return lo + static_cast<long>(g() % static_cast<unsigned long long>(hi - lo + 1));
}

IntegerMatrix random_matrix(std::mt19937_64& g, std::size_t rows, std::size_t cols, long lo,
                            long hi) {
    IntegerMatrix M(rows, cols);
    for (std::size_t i = 0; i < rows; ++i)
        for (std::size_t j = 0; j < cols; ++j) M(i, j) = rnd(g, lo, hi);
    return M;
}

}  // namespace

TEST_CASE("hnf canonicalizes small examples") {
    SECTION("identity") {
        const auto h = hnf(IntegerMatrix::identity(2));
        CHECK(h.H == IntegerMatrix::identity(2));
        CHECK(h.rank == 2);
    }
    SECTION("index-two lattice") {
        const auto h = hnf(IntegerMatrix{{2, 0}, {1, 1}});
        CHECK(h.H == IntegerMatrix{{1, 1}, {0, 2}});
        CHECK(h.rank == 2);
        // the original rows are integer combinations of the new basis
        CHECK(oracle::membership_oracle({Int(2), Int(0)}, h.H));
        CHECK(oracle::membership_oracle({Int(1), Int(1)}, h.H));
    }
    SECTION("zero matrix") {
        const auto h = hnf(IntegerMatrix(3, 3));
        CHECK(h.H.is_zero());
        CHECK(h.rank == 0);
    }
}

TEST_CASE("snf reaches the invariant-factor diagonal") {
    SECTION("gcd and determinant pin the factors") {
        const auto s = snf(IntegerMatrix{{2, 4}, {6, 8}});
        CHECK(s.D == IntegerMatrix{{2, 0}, {0, 4}});
    }
    SECTION("identity") { CHECK(snf(IntegerMatrix::identity(3)).D == IntegerMatrix::identity(3)); }
    SECTION("unimodular input") {
        CHECK(snf(IntegerMatrix{{0, 1}, {-1, 0}}).D == IntegerMatrix::identity(2));
    }
}

TEST_CASE("rank counts independent rows") {
    CHECK(rank(IntegerMatrix::identity(3)) == 3);
    CHECK(rank(IntegerMatrix{{1, 0}, {0, 1}, {1, 1}}) == 2);
    CHECK(rank(IntegerMatrix(2, 2)) == 0);
}

TEST_CASE("kernel returns the saturated null lattice") {
    SECTION("nonsingular") { CHECK(kernel(IntegerMatrix{{0, 1}, {-1, 0}}).rank() == 0); }
    SECTION("zero map") {
        const auto K = kernel(IntegerMatrix(2, 2));
        CHECK(K.rank() == 2);
        CHECK(K.basis() == IntegerMatrix::identity(2));
    }
    SECTION("one relation") {
        const auto K = kernel(IntegerMatrix{{1, 1, 0}});
        CHECK(K.basis() == IntegerMatrix{{1, -1, 0}, {0, 0, 1}});
    }
}

TEST_CASE("intersect_trivially compares rank sums") {
    SECTION("disjoint coordinate blocks") {
        IntegerMatrix A(3, 7), B(4, 7);
        for (std::size_t i = 0; i < 3; ++i) A(i, i) = 1;
        for (std::size_t i = 0; i < 4; ++i) B(i, 3 + i) = 1;
        CHECK(intersect_trivially(A, B));
    }
    SECTION("equal lines") {
        const IntegerMatrix E{{1, 0}};
        CHECK_FALSE(intersect_trivially(E, E));
    }
    SECTION("shared multiple") {
        CHECK_FALSE(intersect_trivially(IntegerMatrix{{1, 0}}, IntegerMatrix{{2, 0}}));
    }
}

TEST_CASE("member solves against the echelon basis") {
    const auto L = Sublattice::from_generators(IntegerMatrix{{1, 1}, {0, 2}});
    CHECK(member({Int(0), Int(0)}, L));
    CHECK(member({Int(2), Int(0)}, L));
    CHECK_FALSE(member({Int(1), Int(0)}, L));
}

TEST_CASE("hnf is idempotent and kernel vectors annihilate", "[property]") {
    std::mt19937_64 g(0x7A771CE5ULL);
    for (int t = 0; t < 200; ++t) {
        const std::size_t rows = static_cast<std::size_t>(rnd(g, 1, 5));
        const std::size_t cols = static_cast<std::size_t>(rnd(g, 1, 5));
        const IntegerMatrix A = random_matrix(g, rows, cols, -9, 9);

        const auto h = hnf(A);
        CHECK(hnf(h.H).H == h.H);

        const Sublattice K = kernel(A);
        // integer combinations of kernel rows stay in the kernel
        std::vector<Int> comb(cols, Int(0));
        for (std::size_t r = 0; r < K.rank(); ++r) {
            const long c = rnd(g, -3, 3);
            for (std::size_t j = 0; j < cols; ++j) comb[j] += c * K.basis()(r, j);
        }
        for (const Int& x : A.mul_vec(comb)) CHECK(x == 0);

        // vectors outside the kernel span violate A v = 0 (saturation makes
        // the converse of the membership test valid)
        for (int s = 0; s < 3; ++s) {
            std::vector<Int> v(cols);
            for (std::size_t j = 0; j < cols; ++j) v[j] = rnd(g, -4, 4);
            if (member(v, K)) continue;
            bool nonzero = false;
            for (const Int& x : A.mul_vec(v)) nonzero = nonzero || x != 0;
            CHECK(nonzero);
        }
    }
}

TEST_CASE("saturation closes under rational multiples", "[property]") {
    std::mt19937_64 g(0x5A7ULL);
    for (int t = 0; t < 100; ++t) {
        const std::size_t dim = static_cast<std::size_t>(rnd(g, 1, 4));
        const std::size_t rows = static_cast<std::size_t>(rnd(g, 0, 3));
        IntegerMatrix gens = random_matrix(g, rows, dim, -4, 4);
        // scale a row to force a non-saturated input now and then
        if (rows > 0 && rnd(g, 0, 1) == 0)
            for (std::size_t j = 0; j < dim; ++j) gens(0, j) *= 2;
        const Sublattice L = Sublattice::from_generators(gens);
        const Sublattice S = saturate(L);
        CHECK(S.rank() == L.rank());
        // every generator of L lies in the saturation
        for (std::size_t r = 0; r < L.rank(); ++r) CHECK(member(L.basis().row(r), S));
        CHECK(saturate(S) == S);
    }
}
