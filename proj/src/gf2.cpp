#include "shapeldpc/gf2.hpp"

#include <algorithm>
#include <stdexcept>
#include <utility>

namespace shapeldpc {

BinMatrix BinMatrix::identity(std::size_t n) {
    BinMatrix m(n, n);
    for (std::size_t i = 0; i < n; ++i) m.set(i, i, true);
    return m;
}

void BinMatrix::xor_row(std::size_t dst, std::size_t src) {
    std::uint64_t* d = words_.data() + dst * wpr_;
    const std::uint64_t* s = words_.data() + src * wpr_;
    for (std::size_t w = 0; w < wpr_; ++w) d[w] ^= s[w];
}

void BinMatrix::swap_rows(std::size_t a, std::size_t b) {
    if (a == b) return;
    std::uint64_t* pa = words_.data() + a * wpr_;
    std::uint64_t* pb = words_.data() + b * wpr_;
    for (std::size_t w = 0; w < wpr_; ++w) std::swap(pa[w], pb[w]);
}

bool BinMatrix::row_is_zero(std::size_t r) const {
    const std::uint64_t* p = words_.data() + r * wpr_;
    for (std::size_t w = 0; w < wpr_; ++w)
        if (p[w]) return false;
    return true;
}

BinMatrix BinMatrix::transposed() const {
    BinMatrix t(cols_, rows_);
    for (std::size_t r = 0; r < rows_; ++r) {
        const std::uint64_t* p = row_words(r);
        for (std::size_t w = 0; w < wpr_; ++w) {
            std::uint64_t bits = p[w];
            while (bits) {
                const int b = __builtin_ctzll(bits);
                bits &= bits - 1;
                t.set(w * 64 + b, r, true);
            }
        }
    }
    return t;
}

SparseBinMatrix SparseBinMatrix::from_rows(std::size_t rows, std::size_t cols,
                                           std::vector<std::vector<std::uint32_t>> radj) {
    if (radj.size() != rows) throw std::invalid_argument("row adjacency size mismatch");
    SparseBinMatrix m;
    m.rows = rows;
    m.cols = cols;
    m.row_adj = std::move(radj);
    m.col_adj.assign(cols, {});
    for (std::size_t r = 0; r < rows; ++r) {
        auto& cs = m.row_adj[r];
        std::sort(cs.begin(), cs.end());
        if (std::adjacent_find(cs.begin(), cs.end()) != cs.end())
            throw std::invalid_argument("duplicate entry in sparse row");
        for (auto c : cs) {
            if (c >= cols) throw std::invalid_argument("column index out of range");
            m.col_adj[c].push_back(static_cast<std::uint32_t>(r));
        }
    }
    return m;
}

SparseBinMatrix SparseBinMatrix::from_dense(const BinMatrix& d) {
    std::vector<std::vector<std::uint32_t>> radj(d.rows());
    for (std::size_t r = 0; r < d.rows(); ++r)
        for (std::size_t c = 0; c < d.cols(); ++c)
            if (d.get(r, c)) radj[r].push_back(static_cast<std::uint32_t>(c));
    return from_rows(d.rows(), d.cols(), std::move(radj));
}

BinMatrix SparseBinMatrix::to_dense() const {
    BinMatrix d(rows, cols);
    for (std::size_t r = 0; r < rows; ++r)
        for (auto c : row_adj[r]) d.set(r, c, true);
    return d;
}

bool SparseBinMatrix::get(std::size_t r, std::size_t c) const {
    const auto& cs = row_adj[r];
    return std::binary_search(cs.begin(), cs.end(), static_cast<std::uint32_t>(c));
}

std::size_t SparseBinMatrix::nnz() const {
    std::size_t n = 0;
    for (const auto& cs : row_adj) n += cs.size();
    return n;
}

bool SparseBinMatrix::consistent() const {
    if (row_adj.size() != rows || col_adj.size() != cols) return false;
    std::size_t n = 0;
    for (std::size_t r = 0; r < rows; ++r) {
        const auto& cs = row_adj[r];
        if (!std::is_sorted(cs.begin(), cs.end())) return false;
        for (auto c : cs) {
            if (c >= cols) return false;
            const auto& rs = col_adj[c];
            if (!std::binary_search(rs.begin(), rs.end(), static_cast<std::uint32_t>(r)))
                return false;
        }
        n += cs.size();
    }
    std::size_t n2 = 0;
    for (const auto& rs : col_adj) {
        if (!std::is_sorted(rs.begin(), rs.end())) return false;
        n2 += rs.size();
    }
    return n == n2;
}

namespace {

// Row echelon over a working copy; returns indices of the rows that were
// independent in the original row order (first-come wins).
std::vector<std::uint32_t> independent_rows(BinMatrix work) {
    const std::size_t rows = work.rows(), cols = work.cols();
    std::vector<std::uint32_t> orig(rows);
    for (std::size_t i = 0; i < rows; ++i) orig[i] = static_cast<std::uint32_t>(i);
    std::vector<std::uint32_t> kept;
    std::size_t top = 0;
    for (std::size_t c = 0; c < cols && top < rows; ++c) {
        std::size_t piv = top;
        while (piv < rows && !work.get(piv, c)) ++piv;
        if (piv == rows) continue;
        work.swap_rows(top, piv);
        std::swap(orig[top], orig[piv]);
        for (std::size_t r = top + 1; r < rows; ++r)
            if (work.get(r, c)) work.xor_row(r, top);
        kept.push_back(orig[top]);
        ++top;
    }
    std::sort(kept.begin(), kept.end());
    return kept;
}

// Invert a square matrix via Gauss-Jordan; throws if singular.
BinMatrix invert(BinMatrix a) {
    const std::size_t n = a.rows();
    if (a.cols() != n) throw std::invalid_argument("invert: not square");
    BinMatrix inv = BinMatrix::identity(n);
    for (std::size_t c = 0; c < n; ++c) {
        std::size_t piv = c;
        while (piv < n && !a.get(piv, c)) ++piv;
        if (piv == n) throw std::runtime_error("invert: singular matrix");
        a.swap_rows(c, piv);
        inv.swap_rows(c, piv);
        for (std::size_t r = 0; r < n; ++r) {
            if (r != c && a.get(r, c)) {
                a.xor_row(r, c);
                inv.xor_row(r, c);
            }
        }
    }
    return inv;
}

BinMatrix select_columns(const BinMatrix& m, const std::vector<std::uint32_t>& cols) {
    BinMatrix out(m.rows(), cols.size());
    for (std::size_t r = 0; r < m.rows(); ++r)
        for (std::size_t j = 0; j < cols.size(); ++j)
            if (m.get(r, cols[j])) out.set(r, j, true);
    return out;
}

} // namespace

std::size_t rank(const BinMatrix& m) {
    return independent_rows(m).size();
}

std::size_t rank(const SparseBinMatrix& m) {
    return rank(m.to_dense());
}

SystematicForm systematic_form(const SparseBinMatrix& h) {
    if (h.rows == 0 || h.cols == 0)
        throw std::invalid_argument("systematic_form: empty matrix");
    BinMatrix dense = h.to_dense();
    const auto kept_rows = independent_rows(dense);
    const std::size_t m = kept_rows.size();
    const std::size_t n = h.cols;
    if (m == 0) throw std::runtime_error("systematic_form: zero parity-check matrix");
    if (m >= n) throw std::runtime_error("systematic_form: no systematic positions left");
    const std::size_t k = n - m;

    BinMatrix d2(m, n);
    for (std::size_t i = 0; i < m; ++i) {
        const std::uint64_t* src = dense.row_words(kept_rows[i]);
        std::uint64_t* dst = d2.row_words(i);
        std::copy(src, src + dense.words_per_row(), dst);
    }

    // prefer the trailing block as pivots so already-systematic codes keep
    // their column order
    std::vector<std::uint32_t> pivots, info;
    std::vector<std::uint32_t> trailing(m);
    for (std::size_t j = 0; j < m; ++j) trailing[j] = static_cast<std::uint32_t>(k + j);
    if (rank(select_columns(d2, trailing)) == m) {
        pivots = trailing;
        info.resize(k);
        for (std::size_t j = 0; j < k; ++j) info[j] = static_cast<std::uint32_t>(j);
    } else {
        // lowest-index independent columns == independent rows of the transpose
        pivots = independent_rows(d2.transposed());
        std::vector<std::uint8_t> is_piv(n, 0);
        for (auto c : pivots) is_piv[c] = 1;
        for (std::size_t c = 0; c < n; ++c)
            if (!is_piv[c]) info.push_back(static_cast<std::uint32_t>(c));
    }

    BinMatrix b = select_columns(d2, pivots);
    BinMatrix a = select_columns(d2, info);
    BinMatrix binv = invert(std::move(b));

    // G_p = (B^{-1} A)^T, shape k x m; rows of B^{-1}A assembled word-wise
    BinMatrix ba(m, k);
    for (std::size_t r = 0; r < m; ++r) {
        std::uint64_t* dst = ba.row_words(r);
        const std::uint64_t* brow = binv.row_words(r);
        for (std::size_t w = 0; w < binv.words_per_row(); ++w) {
            std::uint64_t bits = brow[w];
            while (bits) {
                const int bit = __builtin_ctzll(bits);
                bits &= bits - 1;
                const std::uint64_t* src = a.row_words(w * 64 + bit);
                for (std::size_t q = 0; q < a.words_per_row(); ++q) dst[q] ^= src[q];
            }
        }
    }
    BinMatrix gp = ba.transposed();

    SystematicForm out;
    out.perm.reserve(n);
    out.perm.insert(out.perm.end(), info.begin(), info.end());
    out.perm.insert(out.perm.end(), pivots.begin(), pivots.end());

    out.g_sys = BinMatrix(k, n);
    for (std::size_t r = 0; r < k; ++r) {
        out.g_sys.set(r, r, true);
        for (std::size_t c = 0; c < m; ++c)
            if (gp.get(r, c)) out.g_sys.set(r, k + c, true);
    }

    std::vector<std::uint32_t> inv_perm(n);
    for (std::size_t j = 0; j < n; ++j) inv_perm[out.perm[j]] = static_cast<std::uint32_t>(j);
    std::vector<std::vector<std::uint32_t>> radj(m);
    for (std::size_t i = 0; i < m; ++i)
        for (auto c : h.row_adj[kept_rows[i]])
            radj[i].push_back(inv_perm[c]);
    out.h_perm = SparseBinMatrix::from_rows(m, n, std::move(radj));
    return out;
}

BitVec mat_vec_mul_gf2(const SparseBinMatrix& m, std::span<const std::uint8_t> v) {
    if (v.size() != m.cols) throw std::invalid_argument("mat_vec_mul_gf2: length mismatch");
    BitVec out(m.rows, 0);
    for (std::size_t r = 0; r < m.rows; ++r) {
        std::uint8_t acc = 0;
        for (auto c : m.row_adj[r]) acc ^= v[c] & 1u;
        out[r] = acc;
    }
    return out;
}

} // namespace shapeldpc
