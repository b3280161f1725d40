#pragma once

#include <cstdint>
#include <random>
#include <span>
#include <vector>

#include "shapeldpc/gf2.hpp"

namespace shapeldpc {

// zero-probability priors used at the demapper, one per bit class
struct ClassPriors {
    double dm = 0.5;
    double shaping = 0.5;
    double parity = 0.5;
    double punctured = 0.5;
};

enum class BitClass : std::uint8_t { dm, shaping, parity };

struct ChannelConfig {
    double amplitude = 1.0;
    double sigma = 1.0;
    double p0 = 0.5;  // zero fraction of the transmitted bits
    ClassPriors priors;
};

// SNR in dB of on-off signalling: (1 - p0) A^2 / sigma^2
double snr_from_config(const ChannelConfig& cfg);
double sigma_for_snr(double snr_db, double amplitude, double p0);

// bit 1 -> amplitude, bit 0 -> 0; punctured positions are skipped
std::vector<double> map_ook(std::span<const std::uint8_t> bits,
                            const std::vector<std::uint32_t>& puncture, double amplitude);

// deterministic Box-Muller sampler (two uniforms per draw)
double gaussian(std::mt19937_64& rng);
void add_awgn(std::vector<double>& signal, double sigma, std::mt19937_64& rng);

// Per-position LLR log(P(bit=0|y)/P(bit=1|y)).  classes holds one entry per
// codeword position; punctured positions consume no channel output and carry
// only their prior.
std::vector<double> demap_llr(std::span<const double> y, const ChannelConfig& cfg,
                              std::span<const BitClass> classes,
                              const std::vector<std::uint32_t>& puncture);

} // namespace shapeldpc
