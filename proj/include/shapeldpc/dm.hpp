#pragma once

#include <cstdint>
#include <gmpxx.h>
#include <span>
#include <stdexcept>
#include <string>

#include "shapeldpc/gf2.hpp"

namespace shapeldpc {

// fixed-composition output block: n_ones of the n_out bits are one
struct Composition {
    std::size_t n_out = 0;
    std::size_t n_ones = 0;
};

// nearest composition to a target zero-probability
Composition choose_composition(std::size_t n_out, double target_p0);

enum class DmStatus { ok, wrong_composition, out_of_codebook };

struct DmError : std::runtime_error {
    DmStatus kind;
    DmError(DmStatus k, const std::string& what) : std::runtime_error(what), kind(k) {}
};

// Invertible fixed-to-fixed matcher.  The codebook is the set of the
// lexicographically first 2^k_in constant-composition sequences; match maps a
// k_in-bit message (MSB first) to the sequence of that rank, dematch inverts.
class DmCodebook {
public:
    explicit DmCodebook(Composition comp);              // k_in = floor(log2 C(n,w))
    DmCodebook(Composition comp, std::size_t k_in);     // pinned message length

    Composition composition() const { return comp_; }
    std::size_t k_in() const { return k_in_; }
    std::size_t n_out() const { return comp_.n_out; }
    double rate() const;
    double output_p0() const;                           // zero fraction of every output

    BitVec match(std::span<const std::uint8_t> msg) const;
    BitVec dematch(std::span<const std::uint8_t> seq) const;
    DmStatus try_dematch(std::span<const std::uint8_t> seq, BitVec& msg) const;

private:
    Composition comp_;
    std::size_t k_in_ = 0;
    mpz_class capacity_;  // C(n_out, n_ones)
    mpz_class bound_;     // 2^k_in
};

} // namespace shapeldpc
