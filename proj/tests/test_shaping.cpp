#include <doctest.h>

#include <cmath>
#include <random>
#include <stdexcept>

#include "shapeldpc/shaping.hpp"

using namespace shapeldpc;

namespace {

SparseBinMatrix small_h() {
    return SparseBinMatrix::from_rows(3, 9, {
        {0, 1, 2, 3, 4, 6},
        {0, 2, 4, 5, 7},
        {1, 3, 5, 8},
    });
}

// Full-pass reference built on floating-point belief propagation: every round
// recomputes all check-to-variable messages with tanh arithmetic, rounds the
// decision metric to the nearest multiple of the bias, and applies the same
// decimation rule.  No incremental state.
ShapeResult shape_encode_float(const GeneratorGraph& g, std::span<const std::uint8_t> v) {
    const LdpcCode& code = *g.code;
    const std::size_t k = code.k_c, ell = g.spec.ell, m = g.n_parity;
    REQUIRE(v.size() == k - ell);
    const double bias = std::log(g.spec.target_p0 / (1.0 - g.spec.target_p0));

    BitVec u(k, 0);
    std::vector<char> undet(k, 0);
    {
        std::size_t vi = 0;
        for (std::size_t i = 0; i < k; ++i) {
            if (g.slot_to_shape[i] == GeneratorGraph::npos)
                u[i] = v[vi++] & 1u;
            else
                undet[i] = 1;
        }
    }

    ShapeResult res;
    for (std::size_t round = 0; round < ell; ++round) {
        std::vector<double> sum(k, 0.0);
        for (std::size_t j = 0; j < m; ++j) {
            for (auto target : g.cn_adj[j]) {
                if (!undet[target]) continue;
                double prod = std::tanh(bias / 2.0);
                for (auto other : g.cn_adj[j]) {
                    if (other == target) continue;
                    prod *= undet[other] ? 0.0 : (u[other] ? -1.0 : 1.0);
                }
                sum[target] += 2.0 * std::atanh(prod);
            }
        }
        std::vector<TildeEntry> entries;
        for (std::size_t t = 0; t < ell; ++t) {
            const auto slot = g.spec.positions[t];
            if (!undet[slot]) continue;
            const int off = g.spec.offsets[t] == OffsetMode::with_offset ? 1 : 0;
            double mf = off;
            if (bias != 0.0) {
                mf = sum[slot] / bias + off;
                REQUIRE(std::abs(mf - std::llround(mf)) < 1e-6);
            }
            entries.push_back({slot, static_cast<int>(std::llround(mf))});
        }
        std::size_t best = 0;
        for (std::size_t i = 1; i < entries.size(); ++i)
            if (std::abs(entries[i].multiple) > std::abs(entries[best].multiple)) best = i;
        const auto slot = entries[best].slot;
        const int mult = entries[best].multiple;
        std::uint8_t bit = 0;
        if (mult != 0 && bias != 0.0) bit = (mult * bias >= 0.0) ? 0 : 1;
        const int off =
            g.spec.offsets[g.slot_to_shape[slot]] == OffsetMode::with_offset ? 1 : 0;
        res.trace.push_back({slot, mult, bit, mult == off});
        u[slot] = bit;
        undet[slot] = 0;
    }
    res.codeword = encode_systematic(code, u);
    for (auto s : g.spec.positions) res.shaping_bits.push_back(u[s]);
    res.u = std::move(u);
    return res;
}

// Second reference: drives the public exact check-node update from scratch
// every round instead of keeping incremental per-check state.
ShapeResult shape_encode_naive(const GeneratorGraph& g, std::span<const std::uint8_t> v) {
    const LdpcCode& code = *g.code;
    const std::size_t k = code.k_c, ell = g.spec.ell, m = g.n_parity;
    REQUIRE(v.size() == k - ell);
    const double bias = std::log(g.spec.target_p0 / (1.0 - g.spec.target_p0));

    BitVec u(k, 0);
    std::vector<char> undet(k, 0);
    std::size_t vi = 0;
    for (std::size_t i = 0; i < k; ++i) {
        if (g.slot_to_shape[i] == GeneratorGraph::npos)
            u[i] = v[vi++] & 1u;
        else
            undet[i] = 1;
    }

    ShapeResult res;
    for (std::size_t round = 0; round < ell; ++round) {
        std::vector<int> msum(k, 0);
        for (std::size_t j = 0; j < m; ++j) {
            std::vector<ShapeMsg> in;
            for (auto i : g.cn_adj[j])
                in.push_back(undet[i] ? ShapeMsg::mult(0) : ShapeMsg::fixed(u[i]));
            auto out = cn_update_exact(in);
            for (std::size_t t = 0; t < g.cn_adj[j].size(); ++t) {
                const auto i = g.cn_adj[j][t];
                if (!undet[i]) continue;
                REQUIRE_FALSE(out.to_systematic[t].is_fixed);
                msum[i] += out.to_systematic[t].value;
            }
        }
        std::vector<TildeEntry> entries;
        for (std::size_t t = 0; t < ell; ++t) {
            const auto slot = g.spec.positions[t];
            if (!undet[slot]) continue;
            const int off = g.spec.offsets[t] == OffsetMode::with_offset ? 1 : 0;
            entries.push_back({slot, msum[slot] + off});
        }
        const std::size_t best = default_decimation(entries);
        const auto slot = entries[best].slot;
        const int mult = entries[best].multiple;
        std::uint8_t bit = 0;
        if (mult != 0 && bias != 0.0) bit = (mult * bias >= 0.0) ? 0 : 1;
        res.trace.push_back({slot, mult, bit, msum[slot] == 0});
        u[slot] = bit;
        undet[slot] = 0;
    }
    res.codeword = encode_systematic(code, u);
    for (auto s : g.spec.positions) res.shaping_bits.push_back(u[s]);
    res.u = std::move(u);
    return res;
}

void expect_same(const ShapeResult& a, const ShapeResult& b) {
    REQUIRE(a.trace.size() == b.trace.size());
    for (std::size_t i = 0; i < a.trace.size(); ++i) {
        CHECK(a.trace[i].slot == b.trace[i].slot);
        CHECK(a.trace[i].tilde == b.trace[i].tilde);
        CHECK(a.trace[i].bit == b.trace[i].bit);
        CHECK(a.trace[i].guess == b.trace[i].guess);
    }
    CHECK(a.codeword == b.codeword);
    CHECK(a.shaping_bits == b.shaping_bits);
}

LdpcCode random_code(std::size_t m, std::size_t n, std::uint64_t seed) {
    std::mt19937_64 rng(seed);
    std::bernoulli_distribution coin(0.3);
    while (true) {
        std::vector<std::vector<std::uint32_t>> radj(m);
        for (auto& row : radj)
            for (std::uint32_t c = 0; c < n; ++c)
                if (coin(rng)) row.push_back(c);
        try {
            return build_code(SparseBinMatrix::from_rows(m, n, radj));
        } catch (const std::exception&) {
            continue;
        }
    }
}

} // namespace

TEST_CASE("exact check-node update follows the message alphabet") {
    std::vector<ShapeMsg> in = {ShapeMsg::fixed(0), ShapeMsg::fixed(1), ShapeMsg::mult(0)};
    auto out = cn_update_exact(in);
    CHECK(out.to_parity == ShapeMsg::mult(0));
    CHECK(out.to_systematic[0] == ShapeMsg::mult(0));
    CHECK(out.to_systematic[1] == ShapeMsg::mult(0));
    CHECK(out.to_systematic[2] == ShapeMsg::mult(-1));  // one Fixed(1) flips the prior

    std::vector<ShapeMsg> fixed = {ShapeMsg::fixed(1), ShapeMsg::fixed(1), ShapeMsg::fixed(0)};
    auto of = cn_update_exact(fixed);
    CHECK(of.to_parity == ShapeMsg::fixed(0));
    CHECK(of.to_systematic[0] == ShapeMsg::mult(-1));
    CHECK(of.to_systematic[1] == ShapeMsg::mult(-1));
    CHECK(of.to_systematic[2] == ShapeMsg::mult(1));

    std::vector<ShapeMsg> two = {ShapeMsg::mult(0), ShapeMsg::mult(0)};
    auto ot = cn_update_exact(two);
    CHECK(ot.to_parity == ShapeMsg::mult(0));
    CHECK(ot.to_systematic[0] == ShapeMsg::mult(0));
    CHECK(ot.to_systematic[1] == ShapeMsg::mult(0));

    auto oe = cn_update_exact(std::span<const ShapeMsg>{});
    CHECK(oe.to_parity == ShapeMsg::fixed(0));

    std::vector<ShapeMsg> closed = {ShapeMsg::mult(2)};
    CHECK(cn_update_exact(closed).to_systematic[0] == ShapeMsg::mult(1));
    std::vector<ShapeMsg> open = {ShapeMsg::mult(2), ShapeMsg::mult(3)};
    CHECK_THROWS_AS(cn_update_exact(open), std::domain_error);
}

TEST_CASE("worked example: decision trace, bits and codeword") {
    auto code = build_code(small_h());
    ShapingSpec spec;
    spec.ell = 2;
    spec.positions = {4, 5};
    spec.offsets = {OffsetMode::with_offset, OffsetMode::with_offset};
    spec.target_p0 = 0.75;
    auto g = build_shaping_graph(code, spec);

    BitVec v = {0, 0, 1, 0};
    auto res = shape_encode(g, v);
    REQUIRE(res.trace.size() == 2);
    CHECK(res.trace[0].slot == 5);
    CHECK(res.trace[0].tilde == 2);
    CHECK(res.trace[0].bit == 0);
    CHECK_FALSE(res.trace[0].guess);
    CHECK(res.trace[1].slot == 4);
    CHECK(res.trace[1].tilde == -1);
    CHECK(res.trace[1].bit == 1);
    CHECK_FALSE(res.trace[1].guess);
    CHECK(res.shaping_bits == BitVec{1, 0});
    CHECK(res.codeword == BitVec{0, 0, 1, 0, 1, 0, 0, 0, 0});

    // the sequential result attains the exhaustive minimum here
    auto ex = min_weight_exhaustive(g, v);
    CHECK(ex.parity_weight == 0);
    CHECK(ex.codeword == res.codeword);
    CHECK(ex.shaping_bits == res.shaping_bits);
}

TEST_CASE("encoded words always satisfy the parity checks") {
    auto code = random_code(8, 20, 3);
    auto spec = make_shaping_spec(code, 4, 0.8);
    auto g = build_shaping_graph(code, spec);
    std::mt19937_64 rng(11);
    for (int rep = 0; rep < 20; ++rep) {
        BitVec v(code.k_c - 4);
        for (auto& b : v) b = static_cast<std::uint8_t>(rng() & 1);
        auto res = shape_encode(g, v);
        auto syn = mat_vec_mul_gf2(code.h, res.codeword);
        for (auto s : syn) CHECK(s == 0);
        CHECK(reencode_check(g, res.u));
        auto broken = res.u;
        broken[spec.positions[0]] ^= 1;
        CHECK_FALSE(reencode_check(g, broken));
    }
}

TEST_CASE("incremental encoder equals both full-pass references") {
    std::mt19937_64 seeds(505);
    for (double p0 : {0.6, 0.83, 0.3}) {
        for (int rep = 0; rep < 6; ++rep) {
            auto code = random_code(8, 18, seeds());
            const std::size_t ell = std::min<std::size_t>(5, code.k_c / 2);
            auto spec = make_shaping_spec(code, ell, p0);
            auto g = build_shaping_graph(code, spec);
            std::mt19937_64 rng(seeds());
            BitVec v(code.k_c - ell);
            for (auto& b : v) b = static_cast<std::uint8_t>(rng() & 1);
            auto fast = shape_encode(g, v);
            expect_same(fast, shape_encode_float(g, v));
            expect_same(fast, shape_encode_naive(g, v));
        }
    }
}

TEST_CASE("decimation hook sees shrinking sorted candidate lists") {
    auto code = random_code(6, 16, 77);
    auto spec = make_shaping_spec(code, 4, 0.7);
    auto g = build_shaping_graph(code, spec);
    BitVec v(code.k_c - 4, 0);
    std::size_t calls = 0;
    auto hook = [&](std::span<const TildeEntry> entries) {
        CHECK(entries.size() == 4 - calls);
        for (std::size_t i = 1; i < entries.size(); ++i)
            CHECK(entries[i - 1].slot < entries[i].slot);
        ++calls;
        return std::size_t{0};  // always the lowest slot
    };
    auto res = shape_encode(g, v, hook);
    CHECK(calls == 4);
    // lowest-slot order means the trace visits positions in spec order
    for (std::size_t t = 0; t < 4; ++t) CHECK(res.trace[t].slot == spec.positions[t]);
    auto syn = mat_vec_mul_gf2(code.h, res.codeword);
    for (auto s : syn) CHECK(s == 0);
}

TEST_CASE("default shaping placement prefers punctured systematic slots") {
    auto plain = build_code(small_h());
    auto spec = make_shaping_spec(plain, 2, 0.75);
    CHECK(spec.positions == std::vector<std::uint32_t>{4, 5});
    CHECK(spec.offsets[0] == OffsetMode::with_offset);
    CHECK(spec.offsets[1] == OffsetMode::with_offset);

    auto punct = build_code(small_h(), {1, 7});
    auto sp = make_shaping_spec(punct, 2, 0.75);
    CHECK(sp.positions == std::vector<std::uint32_t>{1, 5});
    CHECK(sp.offsets[0] == OffsetMode::zero_offset);
    CHECK(sp.offsets[1] == OffsetMode::with_offset);

    auto sp3 = make_shaping_spec(punct, 3, 0.75);
    CHECK(sp3.positions == std::vector<std::uint32_t>{1, 4, 5});
}

TEST_CASE("no shaping bits degenerates to plain systematic encoding") {
    auto code = build_code(small_h());
    auto g = build_shaping_graph(code, make_shaping_spec(code, 0, 0.75));
    BitVec v = {1, 0, 1, 1, 0, 1};
    auto res = shape_encode(g, v);
    CHECK(res.codeword == encode_systematic(code, v));
    CHECK(res.trace.empty());
    CHECK(res.shaping_bits.empty());
}

TEST_CASE("sequential result never beats the exhaustive minimum") {
    std::mt19937_64 seeds(31337);
    for (int rep = 0; rep < 10; ++rep) {
        auto code = random_code(7, 15, seeds());
        const std::size_t ell = std::min<std::size_t>(4, code.k_c / 2);
        auto g = build_shaping_graph(code, make_shaping_spec(code, ell, 0.8));
        std::mt19937_64 rng(seeds());
        BitVec v(code.k_c - ell);
        for (auto& b : v) b = static_cast<std::uint8_t>(rng() & 1);
        auto fast = shape_encode(g, v);
        auto ex = min_weight_exhaustive(g, v);
        std::size_t w = 0;
        for (std::size_t p = code.k_c; p < code.n_c; ++p) w += fast.codeword[code.perm[p]];
        CHECK(w >= ex.parity_weight);
    }
}

TEST_CASE("shaping biases the parity bits toward zero") {
    auto base = random_qc_base(4, 12, 16, 9);
    auto code = build_code(lift_base_matrix(base));
    const std::size_t ell = 12;
    auto g = build_shaping_graph(code, make_shaping_spec(code, ell, 0.83));
    std::mt19937_64 rng(123);
    std::size_t zeros = 0, total = 0;
    for (int rep = 0; rep < 30; ++rep) {
        BitVec v(code.k_c - ell);
        for (auto& b : v) b = static_cast<std::uint8_t>(rng() & 1);
        auto res = shape_encode(g, v);
        for (std::size_t p = code.k_c; p < code.n_c; ++p) {
            zeros += res.codeword[code.perm[p]] == 0;
            ++total;
        }
    }
    CHECK(static_cast<double>(zeros) / static_cast<double>(total) > 0.55);
}

TEST_CASE("spec validation") {
    auto code = build_code(small_h());
    ShapingSpec bad;
    bad.ell = 2;
    bad.positions = {5, 4};
    bad.offsets = {OffsetMode::with_offset, OffsetMode::with_offset};
    bad.target_p0 = 0.75;
    CHECK_THROWS(build_shaping_graph(code, bad));
    bad.positions = {4, 9};
    CHECK_THROWS(build_shaping_graph(code, bad));
    bad.positions = {4, 5};
    bad.target_p0 = 1.0;
    CHECK_THROWS(build_shaping_graph(code, bad));
    CHECK_THROWS(make_shaping_spec(code, 7, 0.75));
}
