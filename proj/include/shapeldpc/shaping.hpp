#pragma once

#include <cstdint>
#include <functional>
#include <span>
#include <vector>

#include "shapeldpc/code.hpp"

namespace shapeldpc {

// Messages exchanged on the generator graph while deciding shaping bits.
// Every message is either Fixed(b), i.e. +/-infinity with hard bit b, or an
// exact integer multiple k of the bias L = log(p0 / (1 - p0)).
struct ShapeMsg {
    bool is_fixed = false;
    int value = 0;  // bit for Fixed, multiple of L otherwise

    static ShapeMsg fixed(int bit) { return {true, bit & 1}; }
    static ShapeMsg mult(int k) { return {false, k}; }
    bool operator==(const ShapeMsg&) const = default;
};

struct CnUpdateResult {
    std::vector<ShapeMsg> to_systematic;  // one per incoming message
    ShapeMsg to_parity;
};

// One exact check-node update.  incoming holds the messages from the adjacent
// systematic variable nodes; parity_prior is the message from the check's
// parity bit (the channel bias, multiple +1 by default).  The reachable
// message set keeps the result inside the alphabet; combinations that leave
// it (two distinct finite nonzero multiples) throw std::domain_error.
CnUpdateResult cn_update_exact(std::span<const ShapeMsg> incoming,
                               ShapeMsg parity_prior = ShapeMsg::mult(1));

enum class OffsetMode : std::uint8_t { with_offset, zero_offset };

// Which systematic slots hold shaping bits, and the decision offset used at
// each (punctured slots carry no channel bias, so they get no offset).
struct ShapingSpec {
    std::size_t ell = 0;
    std::vector<std::uint32_t> positions;  // systematic slot indices, ascending
    std::vector<OffsetMode> offsets;       // parallel to positions
    double target_p0 = 0.5;
};

// Default placement: punctured systematic slots first (low to high), the
// remainder fills the highest non-punctured systematic slots.
ShapingSpec make_shaping_spec(const LdpcCode& code, std::size_t ell, double target_p0);

// Tanner graph of the systematic generator: check node j joins parity bit j
// with the systematic slots appearing in column k_c + j of g_sys.
struct GeneratorGraph {
    const LdpcCode* code = nullptr;
    ShapingSpec spec;
    std::size_t n_parity = 0;
    std::vector<std::vector<std::uint32_t>> cn_adj;        // all systematic slots per check
    std::vector<std::vector<std::uint32_t>> cn_shape_adj;  // shaping slots per check
    std::vector<std::vector<std::uint32_t>> shape_cns;     // checks per shaping index
    std::vector<std::uint32_t> slot_to_shape;              // slot -> shaping index or npos
    BinMatrix msg_mask;                                    // n_parity x k_c, message slots only

    static constexpr std::uint32_t npos = 0xffffffffu;
};

GeneratorGraph build_shaping_graph(const LdpcCode& code, ShapingSpec spec);

struct DecisionRecord {
    std::uint32_t slot = 0;  // systematic slot that was fixed
    int tilde = 0;           // decision metric as a multiple of L, offset included
    std::uint8_t bit = 0;
    bool guess = false;      // every incoming message was zero
};

struct ShapeResult {
    BitVec codeword;      // original column order
    BitVec u;             // all systematic bits
    BitVec shaping_bits;  // values of the shaping slots, in spec position order
    std::vector<DecisionRecord> trace;
};

// candidates the decimation step may choose from, ascending slot order
struct TildeEntry {
    std::uint32_t slot = 0;
    int multiple = 0;
};

// returns the index into the candidate list to fix next
using DecimationHook = std::function<std::size_t(std::span<const TildeEntry>)>;

// largest |tilde| wins, ties go to the lowest slot
std::size_t default_decimation(std::span<const TildeEntry> entries);

// Sequentially fixes the shaping slots of u (message slots carry v), then
// encodes.  One graph pass per shaping bit; messages stay in the exact
// alphabet throughout.
ShapeResult shape_encode(const GeneratorGraph& g, std::span<const std::uint8_t> v);
ShapeResult shape_encode(const GeneratorGraph& g, std::span<const std::uint8_t> v,
                         const DecimationHook& pick);

// Exhaustive minimum-parity-weight reference; infeasible beyond max_ell.
struct ExhaustiveResult {
    BitVec shaping_bits;
    BitVec codeword;
    std::size_t parity_weight = 0;
};
ExhaustiveResult min_weight_exhaustive(const GeneratorGraph& g, std::span<const std::uint8_t> v,
                                       std::size_t max_ell = 20);

// Re-runs the encoder on the message part of a decoded systematic vector and
// checks that it reproduces the decoded shaping bits.
bool reencode_check(const GeneratorGraph& g, std::span<const std::uint8_t> u_hat);

} // namespace shapeldpc
