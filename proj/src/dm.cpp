#include "shapeldpc/dm.hpp"

#include <cmath>

namespace shapeldpc {

Composition choose_composition(std::size_t n_out, double target_p0) {
    if (n_out == 0) throw std::invalid_argument("choose_composition: empty output");
    if (!(target_p0 >= 0.0 && target_p0 <= 1.0))
        throw std::invalid_argument("choose_composition: p0 outside [0,1]");
    double ones = std::llround(static_cast<double>(n_out) * (1.0 - target_p0));
    if (ones < 0) ones = 0;
    if (ones > static_cast<double>(n_out)) ones = static_cast<double>(n_out);
    return {n_out, static_cast<std::size_t>(ones)};
}

namespace {

mpz_class binomial(std::size_t n, std::size_t k) {
    mpz_class c;
    mpz_bin_uiui(c.get_mpz_t(), static_cast<unsigned long>(n), static_cast<unsigned long>(k));
    return c;
}

} // namespace

DmCodebook::DmCodebook(Composition comp) : comp_(comp) {
    if (comp.n_ones > comp.n_out) throw std::invalid_argument("composition: too many ones");
    capacity_ = binomial(comp.n_out, comp.n_ones);
    // floor(log2 C): sizeinbase gives the bit count of C
    k_in_ = mpz_sizeinbase(capacity_.get_mpz_t(), 2) - 1;
    bound_ = 1;
    bound_ <<= k_in_;
}

DmCodebook::DmCodebook(Composition comp, std::size_t k_in) : DmCodebook(comp) {
    if (k_in > k_in_)
        throw std::invalid_argument("codebook: pinned message length exceeds capacity");
    k_in_ = k_in;
    bound_ = 1;
    bound_ <<= k_in_;
}

double DmCodebook::rate() const {
    return static_cast<double>(k_in_) / static_cast<double>(comp_.n_out);
}

double DmCodebook::output_p0() const {
    return 1.0 - static_cast<double>(comp_.n_ones) / static_cast<double>(comp_.n_out);
}

BitVec DmCodebook::match(std::span<const std::uint8_t> msg) const {
    if (msg.size() != k_in_) throw std::invalid_argument("match: wrong message length");
    mpz_class r = 0;
    for (auto b : msg) {
        r <<= 1;
        if (b & 1u) r += 1;
    }
    // walk the sequence left to right, keeping n = C(rem, ones) completions
    BitVec seq(comp_.n_out, 0);
    mpz_class n = capacity_, z0;
    std::size_t rem = comp_.n_out, ones = comp_.n_ones;
    for (std::size_t pos = 0; pos < comp_.n_out; ++pos, --rem) {
        // z0 = C(rem-1, ones) = n * (rem - ones) / rem
        mpz_mul_ui(z0.get_mpz_t(), n.get_mpz_t(), static_cast<unsigned long>(rem - ones));
        mpz_divexact_ui(z0.get_mpz_t(), z0.get_mpz_t(), static_cast<unsigned long>(rem));
        if (r < z0) {
            n = z0;
        } else {
            seq[pos] = 1;
            r -= z0;
            n -= z0;  // C(rem-1, ones-1)
            --ones;
        }
    }
    return seq;
}

DmStatus DmCodebook::try_dematch(std::span<const std::uint8_t> seq, BitVec& msg) const {
    if (seq.size() != comp_.n_out) return DmStatus::wrong_composition;
    std::size_t w = 0;
    for (auto b : seq) w += b & 1u;
    if (w != comp_.n_ones) return DmStatus::wrong_composition;

    mpz_class r = 0, n = capacity_, z0;
    std::size_t rem = comp_.n_out, ones = comp_.n_ones;
    for (std::size_t pos = 0; pos < comp_.n_out; ++pos, --rem) {
        mpz_mul_ui(z0.get_mpz_t(), n.get_mpz_t(), static_cast<unsigned long>(rem - ones));
        mpz_divexact_ui(z0.get_mpz_t(), z0.get_mpz_t(), static_cast<unsigned long>(rem));
        if (seq[pos] & 1u) {
            r += z0;
            n -= z0;
            --ones;
        } else {
            n = z0;
        }
    }
    if (r >= bound_) return DmStatus::out_of_codebook;

    msg.assign(k_in_, 0);
    for (std::size_t i = 0; i < k_in_; ++i)
        msg[k_in_ - 1 - i] = mpz_tstbit(r.get_mpz_t(), static_cast<mp_bitcnt_t>(i));
    return DmStatus::ok;
}

BitVec DmCodebook::dematch(std::span<const std::uint8_t> seq) const {
    BitVec msg;
    switch (try_dematch(seq, msg)) {
        case DmStatus::ok: return msg;
        case DmStatus::wrong_composition:
            throw DmError(DmStatus::wrong_composition, "dematch: sequence has the wrong composition");
        case DmStatus::out_of_codebook:
            throw DmError(DmStatus::out_of_codebook, "dematch: sequence rank is outside the codebook");
    }
    throw std::logic_error("unreachable");
}

} // namespace shapeldpc
