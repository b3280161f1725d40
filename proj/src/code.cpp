#include "shapeldpc/code.hpp"

#include <algorithm>
#include <istream>
#include <ostream>
#include <random>
#include <stdexcept>

namespace shapeldpc {

bool LdpcCode::is_punctured(std::uint32_t orig_pos) const {
    return std::binary_search(puncture.begin(), puncture.end(), orig_pos);
}

LdpcCode build_code(SparseBinMatrix h, std::vector<std::uint32_t> puncture) {
    LdpcCode code;
    auto sf = systematic_form(h);
    code.n_c = h.cols;
    code.k_c = code.n_c - sf.h_perm.rows;
    code.h = std::move(h);
    code.h_perm = std::move(sf.h_perm);
    code.g_sys = std::move(sf.g_sys);
    code.perm = std::move(sf.perm);
    code.inv_perm.resize(code.n_c);
    for (std::size_t j = 0; j < code.n_c; ++j) code.inv_perm[code.perm[j]] = static_cast<std::uint32_t>(j);

    std::sort(puncture.begin(), puncture.end());
    if (std::adjacent_find(puncture.begin(), puncture.end()) != puncture.end())
        throw std::invalid_argument("duplicate puncture position");
    if (!puncture.empty() && puncture.back() >= code.n_c)
        throw std::invalid_argument("puncture position out of range");
    if (puncture.size() >= code.n_c)
        throw std::invalid_argument("cannot puncture every position");
    code.puncture = std::move(puncture);
    return code;
}

BitVec encode_systematic(const LdpcCode& code, std::span<const std::uint8_t> u) {
    if (u.size() != code.k_c) throw std::invalid_argument("encode_systematic: wrong message length");
    const std::size_t k = code.k_c, n = code.n_c, m = n - k;
    const std::size_t wpr = code.g_sys.words_per_row();
    std::vector<std::uint64_t> acc(wpr, 0);
    for (std::size_t i = 0; i < k; ++i) {
        if (u[i] & 1u) {
            const std::uint64_t* row = code.g_sys.row_words(i);
            for (std::size_t w = 0; w < wpr; ++w) acc[w] ^= row[w];
        }
    }
    BitVec out(n, 0);
    for (std::size_t i = 0; i < k; ++i) out[code.perm[i]] = u[i] & 1u;
    for (std::size_t j = 0; j < m; ++j) {
        const std::size_t c = k + j;
        out[code.perm[c]] = (acc[c / 64] >> (c % 64)) & 1u;
    }
    return out;
}

BitVec extract_systematic(const LdpcCode& code, std::span<const std::uint8_t> codeword) {
    if (codeword.size() != code.n_c) throw std::invalid_argument("extract_systematic: wrong length");
    BitVec u(code.k_c);
    for (std::size_t i = 0; i < code.k_c; ++i) u[i] = codeword[code.perm[i]] & 1u;
    return u;
}

double overall_rate(const LdpcCode& code, std::size_t ell, double dm_rate) {
    if (ell > code.k_c) throw std::invalid_argument("overall_rate: ell exceeds k_c");
    return dm_rate * static_cast<double>(code.k_c - ell) / static_cast<double>(code.n_c);
}

SparseBinMatrix lift_base_matrix(const BaseMatrix& b) {
    if (b.lift == 0 || b.entries.size() != b.rows * b.cols)
        throw std::invalid_argument("lift_base_matrix: malformed base matrix");
    const std::size_t z = b.lift;
    std::vector<std::vector<std::uint32_t>> radj(b.rows * z);
    for (std::size_t br = 0; br < b.rows; ++br) {
        for (std::size_t bc = 0; bc < b.cols; ++bc) {
            const int e = b.at(br, bc);
            if (e < 0) continue;
            if (static_cast<std::size_t>(e) >= z)
                throw std::invalid_argument("lift_base_matrix: shift out of range");
            for (std::size_t i = 0; i < z; ++i) {
                const std::size_t col = bc * z + (i + static_cast<std::size_t>(e)) % z;
                radj[br * z + i].push_back(static_cast<std::uint32_t>(col));
            }
        }
    }
    return SparseBinMatrix::from_rows(b.rows * z, b.cols * z, std::move(radj));
}

BaseMatrix load_base_matrix(std::istream& in) {
    BaseMatrix b;
    if (!(in >> b.rows >> b.cols >> b.lift))
        throw std::runtime_error("base matrix: missing header");
    if (b.rows == 0 || b.cols == 0 || b.lift == 0)
        throw std::runtime_error("base matrix: zero dimension");
    b.entries.resize(b.rows * b.cols);
    for (auto& e : b.entries)
        if (!(in >> e)) throw std::runtime_error("base matrix: truncated entries");
    return b;
}

void save_base_matrix(std::ostream& out, const BaseMatrix& b) {
    out << b.rows << ' ' << b.cols << ' ' << b.lift << '\n';
    for (std::size_t r = 0; r < b.rows; ++r) {
        for (std::size_t c = 0; c < b.cols; ++c)
            out << b.at(r, c) << (c + 1 == b.cols ? '\n' : ' ');
    }
}

SparseBinMatrix load_alist(std::istream& in) {
    std::size_t n = 0, m = 0, dmax_c = 0, dmax_r = 0;
    if (!(in >> n >> m >> dmax_c >> dmax_r))
        throw std::runtime_error("alist: missing header");
    std::vector<std::size_t> cdeg(n), rdeg(m);
    for (auto& d : cdeg)
        if (!(in >> d)) throw std::runtime_error("alist: truncated column degrees");
    for (auto& d : rdeg)
        if (!(in >> d)) throw std::runtime_error("alist: truncated row degrees");

    // Adjacency entries are 1-based; padded files carry exactly dmax ints per
    // line with zero fill, unpadded files stop at the true degree.  Slurp all
    // remaining ints and decide which layout this is from the total count.
    std::vector<long long> toks;
    long long v;
    while (in >> v) toks.push_back(v);
    std::size_t nnz = 0;
    for (auto d : cdeg) nnz += d;
    std::size_t nnz_r = 0;
    for (auto d : rdeg) nnz_r += d;
    if (nnz != nnz_r) throw std::runtime_error("alist: degree sums differ");

    const bool padded = toks.size() == n * dmax_c + m * dmax_r;
    if (!padded && toks.size() != nnz + nnz_r)
        throw std::runtime_error("alist: unexpected entry count");

    std::size_t pos = 0;
    auto take = [&](std::size_t deg, std::size_t dmax, std::size_t limit) {
        std::vector<std::uint32_t> ids;
        const std::size_t span = padded ? dmax : deg;
        for (std::size_t i = 0; i < span; ++i) {
            if (pos >= toks.size()) throw std::runtime_error("alist: truncated adjacency");
            const long long t = toks[pos++];
            if (t == 0) continue;
            if (t < 1 || static_cast<std::size_t>(t) > limit)
                throw std::runtime_error("alist: index out of range");
            ids.push_back(static_cast<std::uint32_t>(t - 1));
        }
        if (ids.size() != deg) throw std::runtime_error("alist: degree mismatch");
        return ids;
    };

    std::vector<std::vector<std::uint32_t>> cadj(n), radj(m);
    for (std::size_t c = 0; c < n; ++c) cadj[c] = take(cdeg[c], dmax_c, m);
    for (std::size_t r = 0; r < m; ++r) radj[r] = take(rdeg[r], dmax_r, n);

    auto sp = SparseBinMatrix::from_rows(m, n, std::move(radj));
    // cross-check the column view
    for (std::size_t c = 0; c < n; ++c) {
        auto want = cadj[c];
        std::sort(want.begin(), want.end());
        if (want != sp.col_adj[c]) throw std::runtime_error("alist: views disagree");
    }
    return sp;
}

void save_alist(std::ostream& out, const SparseBinMatrix& m) {
    std::size_t dmax_c = 0, dmax_r = 0;
    for (const auto& a : m.col_adj) dmax_c = std::max(dmax_c, a.size());
    for (const auto& a : m.row_adj) dmax_r = std::max(dmax_r, a.size());
    out << m.cols << ' ' << m.rows << '\n' << dmax_c << ' ' << dmax_r << '\n';
    for (std::size_t c = 0; c < m.cols; ++c)
        out << m.col_adj[c].size() << (c + 1 == m.cols ? '\n' : ' ');
    for (std::size_t r = 0; r < m.rows; ++r)
        out << m.row_adj[r].size() << (r + 1 == m.rows ? '\n' : ' ');
    auto block = [&](const std::vector<std::vector<std::uint32_t>>& adj, std::size_t dmax) {
        for (const auto& ids : adj) {
            for (std::size_t i = 0; i < dmax; ++i) {
                const std::size_t v = i < ids.size() ? ids[i] + 1 : 0;
                out << v << (i + 1 == dmax ? '\n' : ' ');
            }
        }
    };
    block(m.col_adj, dmax_c);
    block(m.row_adj, dmax_r);
}

namespace {

// would placing shift s at (r1, col) close a length-4 cycle?
bool makes_4cycle(const BaseMatrix& b, std::size_t r1, std::size_t col, int s) {
    const long long z = static_cast<long long>(b.lift);
    for (std::size_t r2 = 0; r2 < b.rows; ++r2) {
        if (r2 == r1 || b.at(r2, col) < 0) continue;
        const long long d1 = ((s - b.at(r2, col)) % z + z) % z;
        for (std::size_t c2 = 0; c2 < b.cols; ++c2) {
            if (c2 == col || b.at(r1, c2) < 0 || b.at(r2, c2) < 0) continue;
            const long long d2 = ((b.at(r1, c2) - b.at(r2, c2)) % z + z) % z;
            if (d1 == d2) return true;
        }
    }
    return false;
}

} // namespace

BaseMatrix random_qc_base(std::size_t base_rows, std::size_t base_cols, std::size_t lift,
                          std::uint64_t seed) {
    if (base_cols <= base_rows) throw std::invalid_argument("random_qc_base: need info columns");
    if (base_rows < 2) throw std::invalid_argument("random_qc_base: need at least 2 rows");
    BaseMatrix b;
    b.rows = base_rows;
    b.cols = base_cols;
    b.lift = lift;
    b.entries.assign(base_rows * base_cols, -1);
    std::mt19937_64 rng(seed);

    const std::size_t k_b = base_cols - base_rows;
    // dual-diagonal parity part with one weight-3 anchor column
    const int anchor = static_cast<int>(rng() % lift);
    b.at(0, k_b) = anchor;
    b.at(base_rows / 2, k_b) = 0;
    b.at(base_rows - 1, k_b) = anchor;
    for (std::size_t j = 1; j < base_rows; ++j) {
        b.at(j - 1, k_b + j) = 0;
        b.at(j, k_b + j) = 0;
    }

    std::vector<std::size_t> row_load(base_rows, 0);
    for (std::size_t r = 0; r < base_rows; ++r)
        for (std::size_t c = k_b; c < base_cols; ++c)
            if (b.at(r, c) >= 0) ++row_load[r];

    std::vector<int> shift_order(static_cast<int>(lift));
    for (std::size_t i = 0; i < lift; ++i) shift_order[i] = static_cast<int>(i);

    for (std::size_t c = 0; c < k_b; ++c) {
        // spread a weight-3 column over the least-loaded rows
        std::vector<std::size_t> rows_by_load(base_rows);
        for (std::size_t i = 0; i < base_rows; ++i) rows_by_load[i] = i;
        std::shuffle(rows_by_load.begin(), rows_by_load.end(), rng);
        std::stable_sort(rows_by_load.begin(), rows_by_load.end(),
                         [&](std::size_t a, std::size_t bb) { return row_load[a] < row_load[bb]; });
        for (std::size_t t = 0; t < 3 && t < base_rows; ++t) {
            const std::size_t r = rows_by_load[t];
            std::shuffle(shift_order.begin(), shift_order.end(), rng);
            int chosen = shift_order[0];
            for (int s : shift_order) {
                if (!makes_4cycle(b, r, c, s)) {
                    chosen = s;
                    break;
                }
            }
            b.at(r, c) = chosen;
            ++row_load[r];
        }
    }
    return b;
}

} // namespace shapeldpc
