#pragma once

#include <cstdint>
#include <span>
#include <vector>

#include "shapeldpc/gf2.hpp"

namespace shapeldpc {

struct DecodeResult {
    BitVec hard_bits;
    std::size_t iterations = 0;
    bool converged = false;
};

bool syndrome_check(const SparseBinMatrix& h, std::span<const std::uint8_t> bits);

// Flooding sum-product decoder.  Convergence means the hard decision clears
// every parity check AND every posterior is nonzero; an all-zero input stays
// undecided no matter how many iterations run.  One instance owns its message
// memory, so distinct instances may decode in parallel.
class BpDecoder {
public:
    explicit BpDecoder(const SparseBinMatrix& h, double msg_clamp = 30.0);

    DecodeResult decode(std::span<const double> llr, std::size_t max_iter);
    const std::vector<double>& app() const { return app_; }

private:
    bool hard_and_check();

    std::size_t n_ = 0, m_ = 0, nedges_ = 0;
    double clamp_;
    std::vector<std::uint32_t> cn_start_, cn_vn_;    // edges grouped by check
    std::vector<std::uint32_t> vn_start_, vn_edge_;  // edge ids grouped by variable
    std::vector<double> v2c_, c2v_, app_, tanh_buf_;
    BitVec hard_;
};

// one-shot convenience wrapper
DecodeResult bp_decode(const SparseBinMatrix& h, std::span<const double> llr,
                       std::size_t max_iter);

} // namespace shapeldpc
