#include "shapeldpc/shaping.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace shapeldpc {

namespace {

struct BoxAcc {
    int zero_count = 0;
    int ones = 0;        // parity of Fixed(1) factors
    int mult_count = 0;
    int mult_val = 0;
    int fixed_count = 0;

    void add(const ShapeMsg& m) {
        if (m.is_fixed) {
            ++fixed_count;
            ones ^= m.value & 1;
        } else if (m.value == 0) {
            ++zero_count;
        } else {
            ++mult_count;
            mult_val = m.value;
        }
    }
    void remove(const ShapeMsg& m) {
        if (m.is_fixed) {
            --fixed_count;
            ones ^= m.value & 1;
        } else if (m.value == 0) {
            --zero_count;
        } else {
            --mult_count;
        }
    }
    ShapeMsg result() const {
        if (mult_count > 1)
            throw std::domain_error("cn_update_exact: product of two finite multiples leaves the alphabet");
        if (zero_count > 0) return ShapeMsg::mult(0);
        if (mult_count == 0) return ShapeMsg::fixed(ones);
        return ShapeMsg::mult(ones ? -mult_val : mult_val);
    }
};

} // namespace

CnUpdateResult cn_update_exact(std::span<const ShapeMsg> incoming, ShapeMsg parity_prior) {
    BoxAcc all;
    for (const auto& m : incoming) all.add(m);

    CnUpdateResult out;
    out.to_parity = all.result();

    all.add(parity_prior);
    out.to_systematic.resize(incoming.size());
    for (std::size_t t = 0; t < incoming.size(); ++t) {
        BoxAcc acc = all;
        acc.remove(incoming[t]);
        out.to_systematic[t] = acc.result();
    }
    return out;
}

ShapingSpec make_shaping_spec(const LdpcCode& code, std::size_t ell, double target_p0) {
    if (ell > code.k_c) throw std::invalid_argument("shaping spec: ell exceeds k_c");
    ShapingSpec spec;
    spec.ell = ell;
    spec.target_p0 = target_p0;

    std::vector<std::uint32_t> punctured, plain;
    for (std::uint32_t i = 0; i < code.k_c; ++i) {
        if (code.is_punctured(code.perm[i]))
            punctured.push_back(i);
        else
            plain.push_back(i);
    }
    std::vector<std::uint32_t> chosen;
    for (std::uint32_t s : punctured) {
        if (chosen.size() == ell) break;
        chosen.push_back(s);
    }
    std::size_t need = ell - chosen.size();
    if (need > plain.size()) throw std::invalid_argument("shaping spec: not enough systematic slots");
    chosen.insert(chosen.end(), plain.end() - static_cast<std::ptrdiff_t>(need), plain.end());
    std::sort(chosen.begin(), chosen.end());

    spec.positions = std::move(chosen);
    spec.offsets.reserve(ell);
    for (auto s : spec.positions)
        spec.offsets.push_back(code.is_punctured(code.perm[s]) ? OffsetMode::zero_offset
                                                               : OffsetMode::with_offset);
    return spec;
}

GeneratorGraph build_shaping_graph(const LdpcCode& code, ShapingSpec spec) {
    const std::size_t k = code.k_c, m = code.n_c - code.k_c;
    if (spec.positions.size() != spec.ell || spec.offsets.size() != spec.ell)
        throw std::invalid_argument("shaping graph: spec field sizes disagree");
    if (!std::is_sorted(spec.positions.begin(), spec.positions.end()) ||
        std::adjacent_find(spec.positions.begin(), spec.positions.end()) != spec.positions.end())
        throw std::invalid_argument("shaping graph: positions must be sorted and unique");
    if (!spec.positions.empty() && spec.positions.back() >= k)
        throw std::invalid_argument("shaping graph: position outside systematic slots");
    if (spec.ell > 0 && !(spec.target_p0 > 0.0 && spec.target_p0 < 1.0))
        throw std::invalid_argument("shaping graph: target p0 must lie inside (0,1)");

    GeneratorGraph g;
    g.code = &code;
    g.spec = std::move(spec);
    g.n_parity = m;
    g.slot_to_shape.assign(k, GeneratorGraph::npos);
    for (std::uint32_t t = 0; t < g.spec.positions.size(); ++t)
        g.slot_to_shape[g.spec.positions[t]] = t;

    g.cn_adj.assign(m, {});
    g.cn_shape_adj.assign(m, {});
    g.shape_cns.assign(g.spec.ell, {});
    g.msg_mask = BinMatrix(m, k);
    for (std::size_t i = 0; i < k; ++i) {
        for (std::size_t j = 0; j < m; ++j) {
            if (!code.g_sys.get(i, k + j)) continue;
            g.cn_adj[j].push_back(static_cast<std::uint32_t>(i));
            const auto t = g.slot_to_shape[i];
            if (t == GeneratorGraph::npos) {
                g.msg_mask.set(j, i, true);
            } else {
                g.cn_shape_adj[j].push_back(static_cast<std::uint32_t>(i));
                g.shape_cns[t].push_back(static_cast<std::uint32_t>(j));
            }
        }
    }
    return g;
}

std::size_t default_decimation(std::span<const TildeEntry> entries) {
    std::size_t best = 0;
    for (std::size_t i = 1; i < entries.size(); ++i)
        if (std::abs(entries[i].multiple) > std::abs(entries[best].multiple)) best = i;
    return best;
}

namespace {

std::uint8_t decide_bit(int multiple, double bias) {
    // hard decision on tilde = multiple * L; exact zero maps to bit 0
    if (multiple == 0 || bias == 0.0) return 0;
    const double tilde = static_cast<double>(multiple) * bias;
    return tilde >= 0.0 ? 0 : 1;
}

} // namespace

ShapeResult shape_encode(const GeneratorGraph& g, std::span<const std::uint8_t> v,
                         const DecimationHook& pick) {
    const LdpcCode& code = *g.code;
    const std::size_t k = code.k_c, ell = g.spec.ell, m = g.n_parity;
    if (v.size() != k - ell) throw std::invalid_argument("shape_encode: wrong message length");
    const double bias = std::log(g.spec.target_p0 / (1.0 - g.spec.target_p0));

    BitVec u(k, 0);
    {
        std::size_t vi = 0;
        for (std::size_t i = 0; i < k; ++i)
            if (g.slot_to_shape[i] == GeneratorGraph::npos) u[i] = v[vi++] & 1u;
    }

    // pack u to evaluate each check's message-bit parity in one masked pass
    const std::size_t words = (k + 63) / 64;
    std::vector<std::uint64_t> uw(words, 0);
    for (std::size_t i = 0; i < k; ++i)
        if (u[i]) uw[i / 64] |= std::uint64_t(1) << (i % 64);

    std::vector<std::uint8_t> sign(m, 0);   // parity of fixed neighbors per check
    std::vector<std::uint32_t> undet(m, 0); // undetermined shaping neighbors per check
    for (std::size_t j = 0; j < m; ++j) {
        const std::uint64_t* row = g.msg_mask.row_words(j);
        std::uint64_t acc = 0;
        for (std::size_t w = 0; w < words; ++w) acc ^= row[w] & uw[w];
        sign[j] = static_cast<std::uint8_t>(__builtin_popcountll(acc) & 1);
        undet[j] = static_cast<std::uint32_t>(g.cn_shape_adj[j].size());
    }

    std::vector<int> msum(ell, 0);
    std::vector<std::uint8_t> determined(ell, 0);
    for (std::size_t j = 0; j < m; ++j)
        if (undet[j] == 1)
            msum[g.slot_to_shape[g.cn_shape_adj[j][0]]] += sign[j] ? -1 : 1;

    ShapeResult res;
    res.trace.reserve(ell);
    std::vector<TildeEntry> entries;
    entries.reserve(ell);
    for (std::size_t round = 0; round < ell; ++round) {
        entries.clear();
        for (std::size_t t = 0; t < ell; ++t) {
            if (determined[t]) continue;
            const int off = g.spec.offsets[t] == OffsetMode::with_offset ? 1 : 0;
            entries.push_back({g.spec.positions[t], msum[t] + off});
        }
        const std::size_t idx = pick(entries);
        if (idx >= entries.size()) throw std::runtime_error("shape_encode: decimation picked out of range");
        const std::uint32_t slot = entries[idx].slot;
        const std::uint32_t t = g.slot_to_shape[slot];
        const int mult = entries[idx].multiple;
        const std::uint8_t bit = decide_bit(mult, bias);

        res.trace.push_back({slot, mult, bit, msum[t] == 0});
        u[slot] = bit;
        determined[t] = 1;
        for (auto j : g.shape_cns[t]) {
            sign[j] ^= bit;
            if (--undet[j] == 1) {
                for (auto s2 : g.cn_shape_adj[j]) {
                    const auto t2 = g.slot_to_shape[s2];
                    if (!determined[t2]) {
                        msum[t2] += sign[j] ? -1 : 1;
                        break;
                    }
                }
            }
        }
    }

    res.codeword = encode_systematic(code, u);
    res.shaping_bits.reserve(ell);
    for (auto s : g.spec.positions) res.shaping_bits.push_back(u[s]);
    res.u = std::move(u);
    return res;
}

ShapeResult shape_encode(const GeneratorGraph& g, std::span<const std::uint8_t> v) {
    return shape_encode(g, v, default_decimation);
}

ExhaustiveResult min_weight_exhaustive(const GeneratorGraph& g, std::span<const std::uint8_t> v,
                                       std::size_t max_ell) {
    const LdpcCode& code = *g.code;
    const std::size_t k = code.k_c, ell = g.spec.ell;
    if (ell > max_ell) throw std::invalid_argument("min_weight_exhaustive: too many shaping bits");
    if (v.size() != k - ell) throw std::invalid_argument("min_weight_exhaustive: wrong message length");

    BitVec u(k, 0);
    std::size_t vi = 0;
    for (std::size_t i = 0; i < k; ++i)
        if (g.slot_to_shape[i] == GeneratorGraph::npos) u[i] = v[vi++] & 1u;

    ExhaustiveResult best;
    bool have = false;
    for (std::uint64_t a = 0; a < (std::uint64_t(1) << ell); ++a) {
        for (std::size_t t = 0; t < ell; ++t)
            u[g.spec.positions[t]] = (a >> (ell - 1 - t)) & 1u;
        auto c = encode_systematic(code, u);
        std::size_t w = 0;
        for (std::size_t p = k; p < code.n_c; ++p) w += c[code.perm[p]];
        if (!have || w < best.parity_weight) {
            have = true;
            best.parity_weight = w;
            best.codeword = std::move(c);
            best.shaping_bits.assign(ell, 0);
            for (std::size_t t = 0; t < ell; ++t)
                best.shaping_bits[t] = (a >> (ell - 1 - t)) & 1u;
        }
    }
    (void)have;
    return best;
}

bool reencode_check(const GeneratorGraph& g, std::span<const std::uint8_t> u_hat) {
    const std::size_t k = g.code->k_c;
    if (u_hat.size() != k) throw std::invalid_argument("reencode_check: wrong length");
    BitVec v;
    v.reserve(k - g.spec.ell);
    for (std::size_t i = 0; i < k; ++i)
        if (g.slot_to_shape[i] == GeneratorGraph::npos) v.push_back(u_hat[i] & 1u);
    auto res = shape_encode(g, v);
    for (std::size_t t = 0; t < g.spec.ell; ++t)
        if (res.shaping_bits[t] != (u_hat[g.spec.positions[t]] & 1u)) return false;
    return true;
}

} // namespace shapeldpc
