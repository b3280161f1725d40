#pragma once

#include <cstddef>
#include <cstdint>
#include <span>
#include <vector>

namespace shapeldpc {

using BitVec = std::vector<std::uint8_t>;

// Dense binary matrix, rows packed into 64-bit words.
class BinMatrix {
public:
    BinMatrix() = default;
    BinMatrix(std::size_t rows, std::size_t cols)
        : rows_(rows), cols_(cols), wpr_((cols + 63) / 64), words_(rows * wpr_, 0) {}

    static BinMatrix identity(std::size_t n);

    std::size_t rows() const { return rows_; }
    std::size_t cols() const { return cols_; }
    std::size_t words_per_row() const { return wpr_; }

    bool get(std::size_t r, std::size_t c) const {
        return (words_[r * wpr_ + c / 64] >> (c % 64)) & 1u;
    }
    void set(std::size_t r, std::size_t c, bool v) {
        std::uint64_t& w = words_[r * wpr_ + c / 64];
        const std::uint64_t m = std::uint64_t(1) << (c % 64);
        if (v) w |= m; else w &= ~m;
    }

    const std::uint64_t* row_words(std::size_t r) const { return words_.data() + r * wpr_; }
    std::uint64_t* row_words(std::size_t r) { return words_.data() + r * wpr_; }

    void xor_row(std::size_t dst, std::size_t src);
    void swap_rows(std::size_t a, std::size_t b);
    bool row_is_zero(std::size_t r) const;

    BinMatrix transposed() const;

    bool operator==(const BinMatrix& o) const {
        return rows_ == o.rows_ && cols_ == o.cols_ && words_ == o.words_;
    }

private:
    std::size_t rows_ = 0, cols_ = 0, wpr_ = 0;
    std::vector<std::uint64_t> words_;
};

// Sparse binary matrix kept as sorted adjacency lists in both orientations.
struct SparseBinMatrix {
    std::size_t rows = 0;
    std::size_t cols = 0;
    std::vector<std::vector<std::uint32_t>> row_adj;
    std::vector<std::vector<std::uint32_t>> col_adj;

    static SparseBinMatrix from_rows(std::size_t rows, std::size_t cols,
                                     std::vector<std::vector<std::uint32_t>> radj);
    static SparseBinMatrix from_dense(const BinMatrix& d);

    BinMatrix to_dense() const;
    bool get(std::size_t r, std::size_t c) const;
    std::size_t nnz() const;
    // both adjacency views describe the same entry set, sorted ascending
    bool consistent() const;
};

std::size_t rank(const BinMatrix& m);
std::size_t rank(const SparseBinMatrix& m);

// Parity-check matrix brought to systematic generator form.
//
// perm maps permuted position -> original column.  g_sys is [I_k | G_p] over
// the permuted order, h_perm the permuted parity checks with redundant rows
// dropped, so h_perm * g_sys^T = 0.  Pivot columns are the trailing block when
// that block is invertible, otherwise the lowest-index independent column set.
struct SystematicForm {
    std::vector<std::uint32_t> perm;
    BinMatrix g_sys;
    SparseBinMatrix h_perm;
};

SystematicForm systematic_form(const SparseBinMatrix& h);

// m * v over GF(2); v in column space, result length rows.
BitVec mat_vec_mul_gf2(const SparseBinMatrix& m, std::span<const std::uint8_t> v);

} // namespace shapeldpc
