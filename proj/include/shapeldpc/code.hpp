#pragma once

#include <cstdint>
#include <iosfwd>
#include <span>
#include <vector>

#include "shapeldpc/gf2.hpp"

namespace shapeldpc {

// LDPC code defined by a parity-check matrix, with the derived systematic
// generator.  perm maps permuted position -> original column; the first k_c
// permuted positions are systematic.  puncture holds original codeword
// positions that are never transmitted, sorted ascending.
struct LdpcCode {
    std::size_t n_c = 0;
    std::size_t k_c = 0;
    SparseBinMatrix h;       // as given, original column order
    SparseBinMatrix h_perm;  // redundant rows dropped, permuted columns
    BinMatrix g_sys;         // k_c x n_c, [I | G_p] over permuted order
    std::vector<std::uint32_t> perm;
    std::vector<std::uint32_t> inv_perm;
    std::vector<std::uint32_t> puncture;

    bool is_punctured(std::uint32_t orig_pos) const;
};

LdpcCode build_code(SparseBinMatrix h, std::vector<std::uint32_t> puncture = {});

// u has k_c systematic bits (permuted slot order); result is the codeword in
// original column order, satisfying every parity check of h.
BitVec encode_systematic(const LdpcCode& code, std::span<const std::uint8_t> u);

// systematic bits of a codeword given in original column order
BitVec extract_systematic(const LdpcCode& code, std::span<const std::uint8_t> codeword);

// information rate per codeword bit: dm_rate * (k_c - ell) / n_c
double overall_rate(const LdpcCode& code, std::size_t ell, double dm_rate);

// Quasi-cyclic description: entries row-major, -1 for an empty block, e >= 0
// for the Z x Z identity cyclically right-shifted by e (block row i has its
// one in block column (i + e) mod Z).
struct BaseMatrix {
    std::size_t rows = 0;
    std::size_t cols = 0;
    std::size_t lift = 0;
    std::vector<int> entries;

    int at(std::size_t r, std::size_t c) const { return entries[r * cols + c]; }
    int& at(std::size_t r, std::size_t c) { return entries[r * cols + c]; }
};

SparseBinMatrix lift_base_matrix(const BaseMatrix& b);

BaseMatrix load_base_matrix(std::istream& in);
void save_base_matrix(std::ostream& out, const BaseMatrix& b);

SparseBinMatrix load_alist(std::istream& in);
void save_alist(std::ostream& out, const SparseBinMatrix& m);

// Random QC code with a dual-diagonal parity part and degree-3 information
// columns, shifts chosen to keep the lifted graph free of 4-cycles.
BaseMatrix random_qc_base(std::size_t base_rows, std::size_t base_cols, std::size_t lift,
                          std::uint64_t seed);

} // namespace shapeldpc
