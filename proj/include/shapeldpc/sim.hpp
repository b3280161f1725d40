#pragma once

#include <cstdint>
#include <iosfwd>
#include <optional>
#include <random>
#include <span>
#include <string>
#include <vector>

#include "shapeldpc/bp.hpp"
#include "shapeldpc/channel.hpp"
#include "shapeldpc/code.hpp"
#include "shapeldpc/dm.hpp"
#include "shapeldpc/shaping.hpp"

namespace shapeldpc {

enum class DmMode { ccdm, bypass };
enum class PriorMode { empirical, uniform, fixed };

struct SimConfig {
    std::string code_file;   // alist, or
    std::string base_file;   // lifted base matrix
    std::vector<std::uint32_t> puncture;
    std::size_t ell = 0;
    double target_p0 = 0.5;
    std::vector<std::uint32_t> shaping_positions;  // optional explicit slots
    DmMode dm_mode = DmMode::ccdm;
    std::size_t dm_k = 0;  // 0 keeps the codebook maximum
    std::vector<double> snr_db;
    std::size_t max_frames = 10000;
    std::size_t max_frame_errors = 100;
    std::size_t bp_iters = 100;
    std::uint64_t seed = 1;
    PriorMode prior_mode = PriorMode::empirical;
    ClassPriors fixed_priors;
    std::size_t pilot_frames = 200;
    int workers = 0;  // 0 -> all available
};

SimConfig load_sim_config(std::istream& in);
SimConfig load_sim_config_file(const std::string& path);

struct SimRecord {
    double snr_db = 0.0;
    std::size_t frames = 0;
    std::size_t frame_errors = 0;
    std::size_t bit_errors = 0;
    double fer = 0.0;
    double ber = 0.0;
    double mean_iters = 0.0;
    double p0_dm = 0.0;
    double p0_shaping = 0.0;
    double p0_parity = 0.0;
    double seconds = 0.0;  // wall time, excluded from determinism guarantees
};

void write_csv(std::ostream& out, std::span<const SimRecord> records);

// everything derived once from a config
struct SimSystem {
    SimConfig cfg;
    LdpcCode code;
    GeneratorGraph graph;  // graph.code always points at this->code
    std::optional<DmCodebook> dm;
    std::vector<BitClass> classes;  // per original codeword position
    std::size_t k_msg = 0;          // information bits per frame

    SimSystem() = default;
    SimSystem(SimSystem&& o) noexcept
        : cfg(std::move(o.cfg)), code(std::move(o.code)), graph(std::move(o.graph)),
          dm(std::move(o.dm)), classes(std::move(o.classes)), k_msg(o.k_msg) {
        graph.code = &code;
    }
    SimSystem& operator=(SimSystem&& o) noexcept {
        cfg = std::move(o.cfg);
        code = std::move(o.code);
        graph = std::move(o.graph);
        graph.code = &code;
        dm = std::move(o.dm);
        classes = std::move(o.classes);
        k_msg = o.k_msg;
        return *this;
    }
    SimSystem(const SimSystem&) = delete;
    SimSystem& operator=(const SimSystem&) = delete;
};

SimSystem build_system(SimConfig cfg);

struct ZeroFractions {
    double dm = 0.5;
    double shaping = 0.5;
    double parity = 0.5;
    double punctured = 0.5;
    double transmitted = 0.5;
};

// zero fraction per class over a batch of codewords
ZeroFractions measure_zero_fractions(std::span<const BitVec> codewords,
                                     std::span<const BitClass> classes,
                                     const std::vector<std::uint32_t>& puncture);

// deterministic channel-free pilot run measuring the encoder's output bias
ZeroFractions pilot_fractions(const SimSystem& sys, std::size_t frames, std::uint64_t seed);

// per-frame stream: one generator per (seed, point, frame)
std::uint64_t mix_seed(std::uint64_t seed, std::uint64_t point, std::uint64_t frame);
inline std::mt19937_64 frame_rng(std::uint64_t seed, std::uint64_t point, std::uint64_t frame) {
    return std::mt19937_64(mix_seed(seed, point, frame));
}

struct FrameOutcome {
    bool frame_error = false;
    std::size_t bit_errors = 0;
    std::size_t iterations = 0;
    bool converged = false;
    std::size_t zeros_dm = 0;
    std::size_t zeros_shaping = 0;
    std::size_t zeros_parity = 0;
};

// One Monte Carlo frame, reproducible from (seed, point, frame) alone.
FrameOutcome run_frame(const SimSystem& sys, double sigma, const ClassPriors& priors,
                       std::uint64_t point, std::uint64_t frame, BpDecoder& dec);

// Batched frame loop; identical results for any worker count, and identical
// to run_campaign_serial.
std::vector<SimRecord> run_campaign(const SimConfig& cfg);
// straight-line single-thread reference kept for testing
std::vector<SimRecord> run_campaign_serial(const SimConfig& cfg);

bool same_results(std::span<const SimRecord> a, std::span<const SimRecord> b);

} // namespace shapeldpc
