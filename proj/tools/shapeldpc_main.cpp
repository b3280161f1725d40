#include <CLI11.hpp>

#include <cctype>
#include <cstdio>
#include <fstream>
#include <iostream>
#include <map>
#include <sstream>

#include "shapeldpc/code.hpp"
#include "shapeldpc/dm.hpp"
#include "shapeldpc/info_rates.hpp"
#include "shapeldpc/sim.hpp"

using namespace shapeldpc;

namespace {

// one block of ASCII 0/1 per line, interior whitespace ignored
std::vector<BitVec> read_bit_lines(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw std::runtime_error("cannot open " + path);
    std::vector<BitVec> blocks;
    std::string line;
    while (std::getline(in, line)) {
        BitVec bits;
        for (char c : line) {
            if (c == '0' || c == '1') bits.push_back(c == '1');
            else if (!std::isspace(static_cast<unsigned char>(c)))
                throw std::runtime_error(path + ": unexpected character '" + c + "'");
        }
        if (!bits.empty()) blocks.push_back(std::move(bits));
    }
    return blocks;
}

void write_bit_line(std::ostream& out, const BitVec& bits) {
    for (auto b : bits) out.put(b ? '1' : '0');
    out.put('\n');
}

std::vector<double> read_llr_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw std::runtime_error("cannot open " + path);
    std::vector<double> vals;
    double x;
    while (in >> x) vals.push_back(x);
    if (!in.eof()) throw std::runtime_error(path + ": expected one decimal per line");
    return vals;
}

SparseBinMatrix load_parity(const std::string& path, bool as_base) {
    std::ifstream in(path);
    if (!in) throw std::runtime_error("cannot open " + path);
    if (as_base) return lift_base_matrix(load_base_matrix(in));
    return load_alist(in);
}

std::string weight_profile(const std::vector<std::vector<std::uint32_t>>& adj) {
    std::map<std::size_t, std::size_t> hist;
    for (const auto& row : adj) ++hist[row.size()];
    std::string s;
    for (auto [w, n] : hist) {
        if (!s.empty()) s += ' ';
        s += std::to_string(w) + "x" + std::to_string(n);
    }
    return s;
}

std::ofstream open_out(const std::string& path) {
    std::ofstream out(path);
    if (!out) throw std::runtime_error("cannot open " + path + " for writing");
    return out;
}

std::vector<InputClass> parse_classes(const std::string& s) {
    std::vector<InputClass> classes;
    std::stringstream ss(s);
    std::string item;
    while (std::getline(ss, item, ',')) {
        InputClass c;
        char tx = '1';
        if (std::sscanf(item.c_str(), "%lf:%lf:%c", &c.fraction, &c.q0, &tx) != 3)
            throw std::runtime_error("bad class '" + item + "', want fraction:p0:{0|1}");
        c.transmitted = tx != '0';
        classes.push_back(c);
    }
    if (classes.empty()) throw std::runtime_error("empty class list");
    return classes;
}

int cmd_codeinfo(const std::string& path, bool as_base,
                 const std::vector<std::uint32_t>& puncture) {
    auto code = build_code(load_parity(path, as_base), puncture);
    std::printf("n_c %zu\n", code.n_c);
    std::printf("k_c %zu\n", code.k_c);
    std::printf("rank %zu\n", code.n_c - code.k_c);
    std::printf("rows %zu\n", code.h.rows);
    std::printf("code_rate %.6f\n", double(code.k_c) / double(code.n_c));
    std::printf("punctured %zu\n", code.puncture.size());
    std::printf("row_weights %s\n", weight_profile(code.h.row_adj).c_str());
    std::printf("col_weights %s\n", weight_profile(code.h.col_adj).c_str());
    return 0;
}

DmCodebook make_codebook(std::size_t n, double p0, std::size_t k) {
    auto comp = choose_composition(n, p0);
    return k > 0 ? DmCodebook(comp, k) : DmCodebook(comp);
}

int cmd_dm(bool matching, std::size_t n, double p0, std::size_t k, const std::string& in_path,
           const std::string& out_path) {
    auto cb = make_codebook(n, p0, k);
    auto blocks = read_bit_lines(in_path);
    auto out = open_out(out_path);
    for (std::size_t i = 0; i < blocks.size(); ++i) {
        try {
            write_bit_line(out, matching ? cb.match(blocks[i]) : cb.dematch(blocks[i]));
        } catch (const DmError& e) {
            throw std::runtime_error("block " + std::to_string(i) + ": " + e.what());
        }
    }
    std::fprintf(stderr, "%zu blocks, k_in=%zu n_out=%zu ones=%zu\n", blocks.size(), cb.k_in(),
                 cb.n_out(), cb.composition().n_ones);
    return 0;
}

int cmd_encode(const std::string& cfg_path, const std::string& in_path,
               const std::string& out_path, const std::string& trace_path) {
    auto sys = build_system(load_sim_config_file(cfg_path));
    auto blocks = read_bit_lines(in_path);
    auto out = open_out(out_path);
    std::ofstream trace;
    if (!trace_path.empty()) trace = open_out(trace_path);
    for (std::size_t i = 0; i < blocks.size(); ++i) {
        if (blocks[i].size() != sys.k_msg)
            throw std::runtime_error("line " + std::to_string(i + 1) + ": expected " +
                                     std::to_string(sys.k_msg) + " message bits");
        auto res = sys.dm ? shape_encode(sys.graph, sys.dm->match(blocks[i]))
                          : shape_encode(sys.graph, blocks[i]);
        write_bit_line(out, res.codeword);
        if (trace.is_open()) {
            trace << "frame " << i << "\n";
            for (const auto& d : res.trace)
                trace << "  slot=" << d.slot << " tilde=" << d.tilde << "L bit=" << int(d.bit)
                      << (d.guess ? " guess" : "") << "\n";
        }
    }
    std::fprintf(stderr, "%zu frames encoded (n_c=%zu, k_msg=%zu)\n", blocks.size(),
                 sys.code.n_c, sys.k_msg);
    return 0;
}

int cmd_decode(const std::string& cfg_path, const std::string& in_path,
               const std::string& out_path) {
    auto sys = build_system(load_sim_config_file(cfg_path));
    auto llr = read_llr_file(in_path);
    if (llr.empty() || llr.size() % sys.code.n_c != 0)
        throw std::runtime_error("LLR count " + std::to_string(llr.size()) +
                                 " is not a multiple of n_c=" + std::to_string(sys.code.n_c));
    auto out = open_out(out_path);
    BpDecoder dec(sys.code.h);
    const std::size_t frames = llr.size() / sys.code.n_c;
    for (std::size_t f = 0; f < frames; ++f) {
        std::span<const double> frame_llr(llr.data() + f * sys.code.n_c, sys.code.n_c);
        auto dr = dec.decode(frame_llr, sys.cfg.bp_iters);
        auto u_hat = extract_systematic(sys.code, dr.hard_bits);
        BitVec payload;
        for (std::size_t slot = 0; slot < sys.code.k_c; ++slot)
            if (sys.graph.slot_to_shape[slot] == GeneratorGraph::npos)
                payload.push_back(u_hat[slot]);
        std::string status = "ok";
        if (sys.dm) {
            BitVec msg;
            auto st = sys.dm->try_dematch(payload, msg);
            if (st == DmStatus::ok) {
                write_bit_line(out, msg);
            } else {
                out << "DEMATCH_FAIL\n";
                status = st == DmStatus::wrong_composition ? "wrong_composition" : "out_of_codebook";
            }
        } else {
            write_bit_line(out, payload);
        }
        std::printf("frame %zu: converged=%d iters=%zu dematch=%s\n", f, int(dr.converged),
                    dr.iterations, status.c_str());
    }
    return 0;
}

int cmd_capacity(double rate, const std::string& dist, double fsys) {
    std::function<double(double)> rate_of_gamma;
    if (dist == "uniform") {
        rate_of_gamma = [](double g) { return mi_ook(0.5, g); };
    } else if (dist == "optimal") {
        rate_of_gamma = [](double g) { return capacity_ook(g).rate; };
    } else if (dist == "ts") {
        rate_of_gamma = [fsys](double g) { return ts_best_rate(fsys, g); };
    } else if (dist.rfind("classes=", 0) == 0) {
        auto classes = parse_classes(dist.substr(8));
        rate_of_gamma = [classes](double g) { return ts_rate(classes, g); };
    } else {
        throw std::runtime_error("unknown distribution '" + dist + "'");
    }
    std::printf("%.3f\n", snr_for_rate(rate_of_gamma, rate));
    return 0;
}

struct SimOverrides {
    std::vector<double> snr;
    std::uint64_t seed = 0;
    std::size_t max_frames = 0, max_frame_errors = 0, bp_iters = 0;
    int workers = -1;
    bool has_seed = false;
};

int cmd_simulate(const std::string& cfg_path, const SimOverrides& ov, const std::string& out_path,
                 bool serial) {
    auto cfg = load_sim_config_file(cfg_path);
    if (!ov.snr.empty()) cfg.snr_db = ov.snr;
    if (ov.has_seed) cfg.seed = ov.seed;
    if (ov.max_frames) cfg.max_frames = ov.max_frames;
    if (ov.max_frame_errors) cfg.max_frame_errors = ov.max_frame_errors;
    if (ov.bp_iters) cfg.bp_iters = ov.bp_iters;
    if (ov.workers >= 0) cfg.workers = ov.workers;
    if (cfg.snr_db.empty()) throw std::runtime_error("no snr points configured");

    auto records = serial ? run_campaign_serial(cfg) : run_campaign(cfg);
    if (out_path.empty()) {
        write_csv(std::cout, records);
    } else {
        auto out = open_out(out_path);
        write_csv(out, records);
    }
    return 0;
}

int cmd_gencode(std::size_t rows, std::size_t cols, std::size_t lift, std::uint64_t seed,
                const std::string& out_path, bool as_alist) {
    auto base = random_qc_base(rows, cols, lift, seed);
    auto out = open_out(out_path);
    if (as_alist) save_alist(out, lift_base_matrix(base));
    else save_base_matrix(out, base);
    std::fprintf(stderr, "wrote %s: n=%zu m=%zu\n", out_path.c_str(), cols * lift, rows * lift);
    return 0;
}

} // namespace

int main(int argc, char** argv) {
    CLI::App app{"LDPC probabilistic shaping toolkit for on-off keying"};
    app.require_subcommand(1);

    // codeinfo
    std::string ci_path;
    bool ci_base = false;
    std::vector<std::uint32_t> ci_punct;
    auto* ci = app.add_subcommand("codeinfo", "print code dimensions and weight profiles");
    ci->add_option("code", ci_path, "alist file (or base matrix with --base)")->required();
    ci->add_flag("--base", ci_base, "treat input as a base matrix to lift");
    ci->add_option("--puncture", ci_punct, "punctured column indices");

    // dm match / dematch
    std::size_t dm_n = 0, dm_k = 0;
    double dm_p0 = 0.5;
    std::string dm_in, dm_out;
    auto* dm = app.add_subcommand("dm", "constant-composition distribution matcher");
    dm->require_subcommand(1);
    auto add_dm_opts = [&](CLI::App* sub) {
        sub->add_option("--n", dm_n, "output block length")->required();
        sub->add_option("--p0", dm_p0, "target zero fraction")->required();
        sub->add_option("--k", dm_k, "message bits (default: codebook maximum)");
        sub->add_option("--in", dm_in, "input bit file, one block per line")->required();
        sub->add_option("--out", dm_out, "output bit file")->required();
    };
    auto* dm_match = dm->add_subcommand("match", "message blocks -> constant-composition blocks");
    add_dm_opts(dm_match);
    auto* dm_dematch = dm->add_subcommand("dematch", "constant-composition blocks -> messages");
    add_dm_opts(dm_dematch);

    // encode
    std::string enc_cfg, enc_in, enc_out, enc_trace;
    auto* enc = app.add_subcommand("encode", "message file -> shaped codeword file");
    enc->add_option("--config", enc_cfg, "system config file")->required();
    enc->add_option("--in", enc_in, "message bit file, one frame per line")->required();
    enc->add_option("--out", enc_out, "codeword file")->required();
    enc->add_option("--trace", enc_trace, "write the per-frame decision trace here");

    // decode
    std::string dec_cfg, dec_in, dec_out;
    auto* dec = app.add_subcommand("decode", "LLR file -> message file");
    dec->add_option("--config", dec_cfg, "system config file")->required();
    dec->add_option("--in", dec_in, "LLR file, one decimal per line, n_c per frame")->required();
    dec->add_option("--out", dec_out, "decoded message file")->required();

    // capacity
    double cap_rate = 0.0, cap_fsys = 0.75;
    std::string cap_dist = "uniform";
    auto* cap = app.add_subcommand("capacity", "SNR in dB where a rate curve crosses --rate");
    cap->add_option("--rate", cap_rate, "target rate in bits per codeword bit")->required();
    cap->add_option("--dist", cap_dist,
                    "uniform | optimal | ts | classes=frac:p0:tx,... (tx 0 = punctured)");
    cap->add_option("--fsys", cap_fsys, "shaped fraction for --dist ts");

    // simulate
    std::string sim_cfg, sim_out;
    SimOverrides ov;
    bool sim_serial = false;
    auto* sim = app.add_subcommand("simulate", "run a Monte Carlo campaign, write CSV");
    sim->add_option("--config", sim_cfg, "campaign config file")->required();
    sim->add_option("--snr", ov.snr, "override the snr_db list");
    auto* seed_opt = sim->add_option("--seed", ov.seed, "override the seed");
    sim->add_option("--max-frames", ov.max_frames, "override max_frames");
    sim->add_option("--max-frame-errors", ov.max_frame_errors, "override max_frame_errors");
    sim->add_option("--bp-iters", ov.bp_iters, "override bp_iters");
    sim->add_option("--workers", ov.workers, "override worker count (0 = all cores)");
    sim->add_option("--out", sim_out, "CSV path (default: stdout)");
    sim->add_flag("--serial", sim_serial, "use the single-threaded reference loop");

    // gencode
    std::size_t gc_rows = 0, gc_cols = 0, gc_lift = 0;
    std::uint64_t gc_seed = 1;
    std::string gc_out;
    bool gc_alist = false;
    auto* gc = app.add_subcommand("gencode", "generate a random 4-cycle-free QC-LDPC code");
    gc->add_option("--rows", gc_rows, "base matrix rows")->required();
    gc->add_option("--cols", gc_cols, "base matrix columns")->required();
    gc->add_option("--lift", gc_lift, "circulant size Z")->required();
    gc->add_option("--seed", gc_seed, "construction seed");
    gc->add_option("--out", gc_out, "output file")->required();
    gc->add_flag("--alist", gc_alist, "write the lifted alist instead of the base matrix");

    CLI11_PARSE(app, argc, argv);

    try {
        if (ci->parsed()) return cmd_codeinfo(ci_path, ci_base, ci_punct);
        if (dm->parsed()) return cmd_dm(dm_match->parsed(), dm_n, dm_p0, dm_k, dm_in, dm_out);
        if (enc->parsed()) return cmd_encode(enc_cfg, enc_in, enc_out, enc_trace);
        if (dec->parsed()) return cmd_decode(dec_cfg, dec_in, dec_out);
        if (cap->parsed()) return cmd_capacity(cap_rate, cap_dist, cap_fsys);
        if (sim->parsed()) {
            ov.has_seed = seed_opt->count() > 0;
            return cmd_simulate(sim_cfg, ov, sim_out, sim_serial);
        }
        if (gc->parsed()) return cmd_gencode(gc_rows, gc_cols, gc_lift, gc_seed, gc_out, gc_alist);
    } catch (const std::exception& e) {
        std::fprintf(stderr, "error: %s\n", e.what());
        return 1;
    }
    return 0;
}
