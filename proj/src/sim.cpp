#include "shapeldpc/sim.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <ostream>
#include <sstream>
#include <stdexcept>

#ifdef _OPENMP
#include <omp.h>
#endif

namespace shapeldpc {

namespace {

constexpr std::size_t kBatch = 256;  // stop conditions checked at batch boundaries

std::uint64_t splitmix(std::uint64_t x) {
    x += 0x9e3779b97f4a7c15ull;
    x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ull;
    x = (x ^ (x >> 27)) * 0x94d049bb133111ebull;
    return x ^ (x >> 31);
}

} // namespace

std::uint64_t mix_seed(std::uint64_t seed, std::uint64_t point, std::uint64_t frame) {
    std::uint64_t x = splitmix(seed);
    x = splitmix(x ^ (0xd1342543de82ef95ull * (point + 1)));
    x = splitmix(x ^ (0xaf251af3b0f025b5ull * (frame + 1)));
    return x;
}

// ---- configuration -------------------------------------------------------

namespace {

std::string trim(const std::string& s) {
    const auto b = s.find_first_not_of(" \t\r\n");
    if (b == std::string::npos) return "";
    const auto e = s.find_last_not_of(" \t\r\n");
    return s.substr(b, e - b + 1);
}

std::vector<std::string> split_list(const std::string& s) {
    std::vector<std::string> out;
    std::string cur;
    for (char c : s) {
        if (c == ',' || c == ' ' || c == '\t') {
            if (!cur.empty()) out.push_back(cur);
            cur.clear();
        } else {
            cur.push_back(c);
        }
    }
    if (!cur.empty()) out.push_back(cur);
    return out;
}

double to_double(const std::string& key, const std::string& v) {
    std::size_t used = 0;
    double x = 0;
    try {
        x = std::stod(v, &used);
    } catch (const std::exception&) {
        throw std::runtime_error("config: bad number for " + key);
    }
    if (used != v.size()) throw std::runtime_error("config: trailing junk in " + key);
    return x;
}

std::uint64_t to_u64(const std::string& key, const std::string& v) {
    std::size_t used = 0;
    unsigned long long x = 0;
    try {
        x = std::stoull(v, &used);
    } catch (const std::exception&) {
        throw std::runtime_error("config: bad integer for " + key);
    }
    if (used != v.size()) throw std::runtime_error("config: trailing junk in " + key);
    return x;
}

} // namespace

SimConfig load_sim_config(std::istream& in) {
    SimConfig cfg;
    std::string line;
    while (std::getline(in, line)) {
        const auto hash = line.find('#');
        if (hash != std::string::npos) line.erase(hash);
        line = trim(line);
        if (line.empty()) continue;
        const auto eq = line.find('=');
        if (eq == std::string::npos) throw std::runtime_error("config: expected key = value: " + line);
        const std::string key = trim(line.substr(0, eq));
        const std::string val = trim(line.substr(eq + 1));
        if (key == "code") cfg.code_file = val;
        else if (key == "base") cfg.base_file = val;
        else if (key == "puncture") {
            for (const auto& t : split_list(val))
                cfg.puncture.push_back(static_cast<std::uint32_t>(to_u64(key, t)));
        } else if (key == "ell") cfg.ell = to_u64(key, val);
        else if (key == "target_p0") cfg.target_p0 = to_double(key, val);
        else if (key == "shaping_positions") {
            for (const auto& t : split_list(val))
                cfg.shaping_positions.push_back(static_cast<std::uint32_t>(to_u64(key, t)));
        } else if (key == "dm") {
            if (val == "ccdm") cfg.dm_mode = DmMode::ccdm;
            else if (val == "bypass") cfg.dm_mode = DmMode::bypass;
            else throw std::runtime_error("config: dm must be ccdm or bypass");
        } else if (key == "dm_k") cfg.dm_k = to_u64(key, val);
        else if (key == "snr_db") {
            for (const auto& t : split_list(val)) cfg.snr_db.push_back(to_double(key, t));
        } else if (key == "max_frames") cfg.max_frames = to_u64(key, val);
        else if (key == "max_frame_errors") cfg.max_frame_errors = to_u64(key, val);
        else if (key == "bp_iters") cfg.bp_iters = to_u64(key, val);
        else if (key == "seed") cfg.seed = to_u64(key, val);
        else if (key == "priors") {
            if (val == "empirical") cfg.prior_mode = PriorMode::empirical;
            else if (val == "uniform") cfg.prior_mode = PriorMode::uniform;
            else if (val == "fixed") cfg.prior_mode = PriorMode::fixed;
            else throw std::runtime_error("config: priors must be empirical, uniform or fixed");
        } else if (key == "prior_dm") cfg.fixed_priors.dm = to_double(key, val);
        else if (key == "prior_shaping") cfg.fixed_priors.shaping = to_double(key, val);
        else if (key == "prior_parity") cfg.fixed_priors.parity = to_double(key, val);
        else if (key == "prior_punctured") cfg.fixed_priors.punctured = to_double(key, val);
        else if (key == "pilot_frames") cfg.pilot_frames = to_u64(key, val);
        else if (key == "workers") cfg.workers = static_cast<int>(to_u64(key, val));
        else throw std::runtime_error("config: unknown key " + key);
    }
    return cfg;
}

SimConfig load_sim_config_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw std::runtime_error("config: cannot open " + path);
    return load_sim_config(in);
}

// ---- system assembly ------------------------------------------------------

SimSystem build_system(SimConfig cfg) {
    if (cfg.code_file.empty() == cfg.base_file.empty())
        throw std::invalid_argument("build_system: need exactly one of code/base");

    SparseBinMatrix h;
    if (!cfg.code_file.empty()) {
        std::ifstream in(cfg.code_file);
        if (!in) throw std::runtime_error("cannot open " + cfg.code_file);
        h = load_alist(in);
    } else {
        std::ifstream in(cfg.base_file);
        if (!in) throw std::runtime_error("cannot open " + cfg.base_file);
        h = lift_base_matrix(load_base_matrix(in));
    }

    SimSystem sys;
    sys.code = build_code(std::move(h), cfg.puncture);

    ShapingSpec spec;
    if (cfg.shaping_positions.empty()) {
        spec = make_shaping_spec(sys.code, cfg.ell, cfg.target_p0);
    } else {
        if (cfg.shaping_positions.size() != cfg.ell)
            throw std::invalid_argument("build_system: shaping_positions size differs from ell");
        spec.ell = cfg.ell;
        spec.positions = cfg.shaping_positions;
        std::sort(spec.positions.begin(), spec.positions.end());
        spec.target_p0 = cfg.target_p0;
        for (auto s : spec.positions)
            spec.offsets.push_back(sys.code.is_punctured(sys.code.perm[s])
                                       ? OffsetMode::zero_offset
                                       : OffsetMode::with_offset);
    }
    sys.graph = build_shaping_graph(sys.code, std::move(spec));

    if (cfg.dm_mode == DmMode::ccdm) {
        auto comp = choose_composition(sys.code.k_c - cfg.ell, cfg.target_p0);
        sys.dm = cfg.dm_k > 0 ? DmCodebook(comp, cfg.dm_k) : DmCodebook(comp);
        sys.k_msg = sys.dm->k_in();
    } else {
        sys.k_msg = sys.code.k_c - cfg.ell;
    }

    sys.classes.assign(sys.code.n_c, BitClass::parity);
    for (std::size_t slot = 0; slot < sys.code.k_c; ++slot) {
        const auto orig = sys.code.perm[slot];
        sys.classes[orig] = sys.graph.slot_to_shape[slot] == GeneratorGraph::npos
                                ? BitClass::dm
                                : BitClass::shaping;
    }
    sys.cfg = std::move(cfg);
    return sys;
}

// ---- empirical statistics --------------------------------------------------

ZeroFractions measure_zero_fractions(std::span<const BitVec> codewords,
                                     std::span<const BitClass> classes,
                                     const std::vector<std::uint32_t>& puncture) {
    std::size_t z_dm = 0, n_dm = 0, z_sh = 0, n_sh = 0, z_par = 0, n_par = 0;
    std::size_t z_pu = 0, n_pu = 0, z_tx = 0, n_tx = 0;
    for (const auto& c : codewords) {
        if (c.size() != classes.size())
            throw std::invalid_argument("measure_zero_fractions: length mismatch");
        std::size_t pi = 0;
        for (std::size_t i = 0; i < c.size(); ++i) {
            const bool zero = (c[i] & 1u) == 0;
            switch (classes[i]) {
                case BitClass::dm: ++n_dm; z_dm += zero; break;
                case BitClass::shaping: ++n_sh; z_sh += zero; break;
                case BitClass::parity: ++n_par; z_par += zero; break;
            }
            if (pi < puncture.size() && puncture[pi] == i) {
                ++pi;
                ++n_pu;
                z_pu += zero;
            } else {
                ++n_tx;
                z_tx += zero;
            }
        }
    }
    ZeroFractions f;
    if (n_dm) f.dm = static_cast<double>(z_dm) / static_cast<double>(n_dm);
    if (n_sh) f.shaping = static_cast<double>(z_sh) / static_cast<double>(n_sh);
    if (n_par) f.parity = static_cast<double>(z_par) / static_cast<double>(n_par);
    if (n_pu) f.punctured = static_cast<double>(z_pu) / static_cast<double>(n_pu);
    if (n_tx) f.transmitted = static_cast<double>(z_tx) / static_cast<double>(n_tx);
    return f;
}

namespace {

constexpr std::uint64_t kPilotPoint = 0xffffffffffffffffull;

BitVec random_message(std::mt19937_64& rng, std::size_t k) {
    BitVec msg(k);
    for (auto& b : msg) b = static_cast<std::uint8_t>(rng() & 1u);
    return msg;
}

BitVec frame_codeword(const SimSystem& sys, std::mt19937_64& rng, BitVec& msg) {
    msg = random_message(rng, sys.k_msg);
    if (sys.dm) {
        auto v = sys.dm->match(msg);
        return shape_encode(sys.graph, v).codeword;
    }
    return shape_encode(sys.graph, msg).codeword;
}

} // namespace

ZeroFractions pilot_fractions(const SimSystem& sys, std::size_t frames, std::uint64_t seed) {
    std::vector<BitVec> words;
    words.reserve(frames);
    for (std::size_t f = 0; f < frames; ++f) {
        auto rng = frame_rng(seed, kPilotPoint, f);
        BitVec msg;
        words.push_back(frame_codeword(sys, rng, msg));
    }
    return measure_zero_fractions(words, sys.classes, sys.code.puncture);
}

// ---- frame loop -------------------------------------------------------------

FrameOutcome run_frame(const SimSystem& sys, double sigma, const ClassPriors& priors,
                       std::uint64_t point, std::uint64_t frame, BpDecoder& dec) {
    auto rng = frame_rng(sys.cfg.seed, point, frame);

    BitVec msg;
    const BitVec c = frame_codeword(sys, rng, msg);

    FrameOutcome out;
    for (std::size_t i = 0; i < c.size(); ++i) {
        if (c[i]) continue;
        switch (sys.classes[i]) {
            case BitClass::dm: ++out.zeros_dm; break;
            case BitClass::shaping: ++out.zeros_shaping; break;
            case BitClass::parity: ++out.zeros_parity; break;
        }
    }

    ChannelConfig ch;
    ch.amplitude = 1.0;
    ch.sigma = sigma;
    ch.priors = priors;
    auto y = map_ook(c, sys.code.puncture, ch.amplitude);
    add_awgn(y, sigma, rng);
    const auto llr = demap_llr(y, ch, sys.classes, sys.code.puncture);

    const auto dr = dec.decode(llr, sys.cfg.bp_iters);
    out.iterations = dr.iterations;
    out.converged = dr.converged;

    const auto u_hat = extract_systematic(sys.code, dr.hard_bits);
    BitVec payload;
    payload.reserve(sys.code.k_c - sys.cfg.ell);
    for (std::size_t slot = 0; slot < sys.code.k_c; ++slot)
        if (sys.graph.slot_to_shape[slot] == GeneratorGraph::npos) payload.push_back(u_hat[slot]);

    if (sys.dm) {
        BitVec msg_hat;
        if (sys.dm->try_dematch(payload, msg_hat) != DmStatus::ok) {
            out.bit_errors = sys.k_msg;
        } else {
            for (std::size_t i = 0; i < sys.k_msg; ++i) out.bit_errors += msg_hat[i] != msg[i];
        }
    } else {
        for (std::size_t i = 0; i < sys.k_msg; ++i) out.bit_errors += payload[i] != msg[i];
    }
    out.frame_error = out.bit_errors > 0;
    return out;
}

// ---- campaigns ---------------------------------------------------------------

namespace {

struct PointAcc {
    std::size_t frames = 0, frame_errors = 0, bit_errors = 0, iter_sum = 0;
    std::size_t zeros_dm = 0, zeros_shaping = 0, zeros_parity = 0;

    void add(const FrameOutcome& o) {
        ++frames;
        frame_errors += o.frame_error;
        bit_errors += o.bit_errors;
        iter_sum += o.iterations;
        zeros_dm += o.zeros_dm;
        zeros_shaping += o.zeros_shaping;
        zeros_parity += o.zeros_parity;
    }
};

SimRecord finish_record(const SimSystem& sys, double snr, const PointAcc& acc, double secs) {
    std::size_t n_dm = 0, n_sh = 0, n_par = 0;
    for (auto cl : sys.classes) {
        if (cl == BitClass::dm) ++n_dm;
        else if (cl == BitClass::shaping) ++n_sh;
        else ++n_par;
    }
    SimRecord r;
    r.snr_db = snr;
    r.frames = acc.frames;
    r.frame_errors = acc.frame_errors;
    r.bit_errors = acc.bit_errors;
    if (acc.frames) {
        r.fer = static_cast<double>(acc.frame_errors) / static_cast<double>(acc.frames);
        r.mean_iters = static_cast<double>(acc.iter_sum) / static_cast<double>(acc.frames);
        const double denom = static_cast<double>(acc.frames) * static_cast<double>(sys.k_msg);
        r.ber = denom > 0 ? static_cast<double>(acc.bit_errors) / denom : 0.0;
        auto frac = [&](std::size_t z, std::size_t n) {
            return n ? static_cast<double>(z) / (static_cast<double>(n) * acc.frames) : 0.5;
        };
        r.p0_dm = frac(acc.zeros_dm, n_dm);
        r.p0_shaping = frac(acc.zeros_shaping, n_sh);
        r.p0_parity = frac(acc.zeros_parity, n_par);
    }
    r.seconds = secs;
    return r;
}

double clamp_prior(double p) { return std::min(1.0 - 1e-6, std::max(1e-6, p)); }

struct CampaignSetup {
    ClassPriors priors;
    double p0_tx = 0.5;
};

CampaignSetup prepare(const SimSystem& sys) {
    CampaignSetup s;
    ZeroFractions f;
    if (sys.cfg.pilot_frames > 0) f = pilot_fractions(sys, sys.cfg.pilot_frames, sys.cfg.seed);
    s.p0_tx = f.transmitted;
    switch (sys.cfg.prior_mode) {
        case PriorMode::uniform:
            s.priors = ClassPriors{};
            break;
        case PriorMode::fixed:
            s.priors = sys.cfg.fixed_priors;
            break;
        case PriorMode::empirical:
            s.priors.dm = clamp_prior(f.dm);
            s.priors.shaping = clamp_prior(f.shaping);
            s.priors.parity = clamp_prior(f.parity);
            s.priors.punctured = clamp_prior(f.punctured);
            break;
    }
    return s;
}

} // namespace

std::vector<SimRecord> run_campaign(const SimConfig& cfg) {
    SimSystem sys = build_system(cfg);
    const CampaignSetup setup = prepare(sys);

    int nw = sys.cfg.workers;
#ifdef _OPENMP
    if (nw <= 0) nw = omp_get_max_threads();
#else
    nw = 1;
#endif
    if (nw < 1) nw = 1;

    std::vector<BpDecoder> decs;
    decs.reserve(static_cast<std::size_t>(nw));
    for (int t = 0; t < nw; ++t) decs.emplace_back(sys.code.h);

    std::vector<SimRecord> records;
    std::vector<FrameOutcome> batch(kBatch);
    for (std::size_t pi = 0; pi < sys.cfg.snr_db.size(); ++pi) {
        const double snr = sys.cfg.snr_db[pi];
        const double sigma = sigma_for_snr(snr, 1.0, setup.p0_tx);
        const auto t0 = std::chrono::steady_clock::now();
        PointAcc acc;
        while (acc.frames < sys.cfg.max_frames && acc.frame_errors < sys.cfg.max_frame_errors) {
            const std::size_t count = std::min(kBatch, sys.cfg.max_frames - acc.frames);
            const std::size_t base = acc.frames;
#ifdef _OPENMP
#pragma omp parallel for schedule(static) num_threads(nw)
#endif
            for (long i = 0; i < static_cast<long>(count); ++i) {
                int tid = 0;
#ifdef _OPENMP
                tid = omp_get_thread_num();
#endif
                batch[static_cast<std::size_t>(i)] =
                    run_frame(sys, sigma, setup.priors, pi, base + static_cast<std::size_t>(i),
                              decs[static_cast<std::size_t>(tid)]);
            }
            for (std::size_t i = 0; i < count; ++i) acc.add(batch[i]);
        }
        const auto t1 = std::chrono::steady_clock::now();
        records.push_back(
            finish_record(sys, snr, acc, std::chrono::duration<double>(t1 - t0).count()));
    }
    return records;
}

std::vector<SimRecord> run_campaign_serial(const SimConfig& cfg) {
    SimSystem sys = build_system(cfg);
    const CampaignSetup setup = prepare(sys);
    BpDecoder dec(sys.code.h);

    std::vector<SimRecord> records;
    for (std::size_t pi = 0; pi < sys.cfg.snr_db.size(); ++pi) {
        const double snr = sys.cfg.snr_db[pi];
        const double sigma = sigma_for_snr(snr, 1.0, setup.p0_tx);
        const auto t0 = std::chrono::steady_clock::now();
        PointAcc acc;
        while (acc.frames < sys.cfg.max_frames && acc.frame_errors < sys.cfg.max_frame_errors) {
            const std::size_t count = std::min(kBatch, sys.cfg.max_frames - acc.frames);
            const std::size_t base = acc.frames;
            for (std::size_t i = 0; i < count; ++i)
                acc.add(run_frame(sys, sigma, setup.priors, pi, base + i, dec));
        }
        const auto t1 = std::chrono::steady_clock::now();
        records.push_back(
            finish_record(sys, snr, acc, std::chrono::duration<double>(t1 - t0).count()));
    }
    return records;
}

bool same_results(std::span<const SimRecord> a, std::span<const SimRecord> b) {
    if (a.size() != b.size()) return false;
    for (std::size_t i = 0; i < a.size(); ++i) {
        const auto& x = a[i];
        const auto& y = b[i];
        if (x.snr_db != y.snr_db || x.frames != y.frames || x.frame_errors != y.frame_errors ||
            x.bit_errors != y.bit_errors || x.fer != y.fer || x.ber != y.ber ||
            x.mean_iters != y.mean_iters || x.p0_dm != y.p0_dm || x.p0_shaping != y.p0_shaping ||
            x.p0_parity != y.p0_parity)
            return false;
    }
    return true;
}

void write_csv(std::ostream& out, std::span<const SimRecord> records) {
    out << "snr_db,frames,frame_errors,fer,ber,mean_iters,p0_dm,p0_shaping,p0_parity,seconds\n";
    char buf[320];
    for (const auto& r : records) {
        std::snprintf(buf, sizeof(buf), "%.6g,%zu,%zu,%.8g,%.8g,%.6g,%.6f,%.6f,%.6f,%.3f\n",
                      r.snr_db, r.frames, r.frame_errors, r.fer, r.ber, r.mean_iters, r.p0_dm,
                      r.p0_shaping, r.p0_parity, r.seconds);
        out << buf;
    }
}

} // namespace shapeldpc
