#include <CLI11.hpp>

#include <chrono>
#include <cstdio>
#include <fstream>

#include "shapeldpc/sim.hpp"

using namespace shapeldpc;

namespace {

double wall(const std::chrono::steady_clock::time_point& t0) {
    return std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
}

} // namespace

int main(int argc, char** argv) {
    CLI::App app{"frame-loop benchmark: single-thread reference vs parallel campaign"};
    std::string cfg_path;
    std::size_t frames = 512;
    double snr = 4.0;
    int workers = 0;
    app.add_option("--config", cfg_path, "campaign config (default: generated QC code)");
    app.add_option("--frames", frames, "frames per run");
    app.add_option("--snr", snr, "SNR point in dB");
    app.add_option("--workers", workers, "parallel worker count (0 = all cores)");
    CLI11_PARSE(app, argc, argv);

    try {
        SimConfig cfg;
        if (cfg_path.empty()) {
            {
                std::ofstream out("bench_base.txt");
                if (!out) throw std::runtime_error("cannot write bench_base.txt");
                save_base_matrix(out, random_qc_base(8, 32, 33, 5));
            }
            cfg.base_file = "bench_base.txt";
            cfg.ell = 10;
            cfg.target_p0 = 0.612;
            cfg.pilot_frames = 64;
        } else {
            cfg = load_sim_config_file(cfg_path);
        }
        cfg.snr_db = {snr};
        cfg.max_frames = frames;
        cfg.max_frame_errors = frames + 1;  // never stop early
        cfg.workers = workers;

        auto t0 = std::chrono::steady_clock::now();
        auto serial = run_campaign_serial(cfg);
        const double ts = wall(t0);

        t0 = std::chrono::steady_clock::now();
        auto parallel = run_campaign(cfg);
        const double tp = wall(t0);

        std::printf("frames            %zu\n", serial[0].frames);
        std::printf("serial            %8.3f s  (%7.1f frames/s)\n", ts, frames / ts);
        std::printf("parallel          %8.3f s  (%7.1f frames/s)\n", tp, frames / tp);
        std::printf("speedup           %8.2fx\n", ts / tp);
        std::printf("results identical %s\n", same_results(serial, parallel) ? "yes" : "NO");
        return same_results(serial, parallel) ? 0 : 1;
    } catch (const std::exception& e) {
        std::fprintf(stderr, "error: %s\n", e.what());
        return 1;
    }
}
