#include <doctest.h>

#include <random>
#include <stdexcept>

#include "shapeldpc/gf2.hpp"

using namespace shapeldpc;

namespace {

// 3x9 parity-check matrix of the small running-example code; the trailing
// 3x3 block is the identity.
SparseBinMatrix small_h() {
    return SparseBinMatrix::from_rows(3, 9, {
        {0, 1, 2, 3, 4, 6},
        {0, 2, 4, 5, 7},
        {1, 3, 5, 8},
    });
}

// matching 6x9 systematic generator [I | G_p]
BinMatrix small_g() {
    BinMatrix g(6, 9);
    const std::uint8_t gp[6][3] = {
        {1, 1, 0}, {1, 0, 1}, {1, 1, 0}, {1, 0, 1}, {1, 1, 0}, {0, 1, 1},
    };
    for (std::size_t r = 0; r < 6; ++r) {
        g.set(r, r, true);
        for (std::size_t c = 0; c < 3; ++c)
            if (gp[r][c]) g.set(r, 6 + c, true);
    }
    return g;
}

SparseBinMatrix random_sparse(std::size_t rows, std::size_t cols, double density,
                              std::uint64_t seed) {
    std::mt19937_64 rng(seed);
    std::bernoulli_distribution coin(density);
    std::vector<std::vector<std::uint32_t>> radj(rows);
    for (std::size_t r = 0; r < rows; ++r)
        for (std::size_t c = 0; c < cols; ++c)
            if (coin(rng)) radj[r].push_back(static_cast<std::uint32_t>(c));
    return SparseBinMatrix::from_rows(rows, cols, std::move(radj));
}

} // namespace

TEST_CASE("rank of identity and zero matrices") {
    CHECK(rank(BinMatrix::identity(3)) == 3);
    CHECK(rank(BinMatrix(4, 6)) == 0);
}

TEST_CASE("rank of the small example parity-check matrix") {
    CHECK(rank(small_h()) == 3);
}

TEST_CASE("sparse adjacency views stay consistent") {
    auto h = small_h();
    CHECK(h.consistent());
    CHECK(h.nnz() == 15);
    CHECK(h.col_adj[0] == std::vector<std::uint32_t>{0, 1});
    CHECK(h.col_adj[6] == std::vector<std::uint32_t>{0});
    CHECK(h.get(0, 4));
    CHECK_FALSE(h.get(2, 0));

    auto r = random_sparse(17, 31, 0.23, 99);
    CHECK(r.consistent());
    CHECK(SparseBinMatrix::from_dense(r.to_dense()).row_adj == r.row_adj);
}

TEST_CASE("systematic form keeps column order when trailing block is invertible") {
    auto sf = systematic_form(small_h());
    REQUIRE(sf.perm.size() == 9);
    for (std::size_t j = 0; j < 9; ++j) CHECK(sf.perm[j] == j);
    CHECK(sf.g_sys == small_g());
    CHECK(sf.h_perm.to_dense() == small_h().to_dense());
}

TEST_CASE("systematic form falls back to lowest-index pivots") {
    // H = [I_3 | a] with a = (0,1,1)^T; the trailing 3 columns are singular,
    // so the pivot set must become {0,1,2} and column 3 moves to the front.
    auto h = SparseBinMatrix::from_rows(3, 4, {{0}, {1, 3}, {2, 3}});
    auto sf = systematic_form(h);
    CHECK(sf.perm == std::vector<std::uint32_t>{3, 0, 1, 2});
    BinMatrix want(1, 4);
    want.set(0, 0, true);
    want.set(0, 2, true);
    want.set(0, 3, true);
    CHECK(sf.g_sys == want);
}

TEST_CASE("redundant parity rows are dropped") {
    auto h = SparseBinMatrix::from_rows(4, 9, {
        {0, 1, 2, 3, 4, 6},
        {0, 2, 4, 5, 7},
        {1, 3, 5, 8},
        {0, 1, 2, 3, 4, 6}, // duplicate of row 0
    });
    auto sf = systematic_form(h);
    CHECK(sf.h_perm.rows == 3);
    CHECK(sf.g_sys.rows() == 6);
}

TEST_CASE("structural failures throw") {
    CHECK_THROWS(systematic_form(SparseBinMatrix::from_rows(2, 5, {{}, {}})));
    // square full-rank matrix leaves no systematic positions
    auto full = SparseBinMatrix::from_dense(BinMatrix::identity(4));
    CHECK_THROWS(systematic_form(full));
}

TEST_CASE("generator rows are orthogonal to permuted checks") {
    std::mt19937_64 seeds(2024);
    for (int trial = 0; trial < 20; ++trial) {
        auto h = random_sparse(6, 12, 0.4, seeds());
        if (rank(h) == 0) continue;
        SystematicForm sf;
        try {
            sf = systematic_form(h);
        } catch (const std::runtime_error&) {
            continue; // full column rank leaves nothing systematic
        }
        const std::size_t k = sf.g_sys.rows(), n = sf.g_sys.cols();
        CHECK(sf.h_perm.rows + k == n);
        // perm is a permutation of 0..n-1
        std::vector<std::uint8_t> seen(n, 0);
        for (auto p : sf.perm) {
            REQUIRE(p < n);
            CHECK(!seen[p]);
            seen[p] = 1;
        }
        for (std::size_t r = 0; r < k; ++r) {
            BitVec row(n, 0);
            for (std::size_t c = 0; c < n; ++c) row[c] = sf.g_sys.get(r, c);
            auto syn = mat_vec_mul_gf2(sf.h_perm, row);
            for (auto s : syn) CHECK(s == 0);
        }
    }
}

TEST_CASE("sparse matrix-vector product over GF(2)") {
    // G^T * u reproduces the running-example codeword
    auto gt = SparseBinMatrix::from_dense(small_g().transposed());
    BitVec u = {0, 0, 1, 0, 1, 0};
    BitVec want = {0, 0, 1, 0, 1, 0, 0, 0, 0};
    CHECK(mat_vec_mul_gf2(gt, u) == want);
    CHECK_THROWS(mat_vec_mul_gf2(gt, BitVec(5, 0)));
}

TEST_CASE("rank agrees between sparse and dense paths") {
    for (std::uint64_t s = 1; s <= 8; ++s) {
        auto m = random_sparse(10, 14, 0.3, s);
        CHECK(rank(m) == rank(m.to_dense()));
    }
}
