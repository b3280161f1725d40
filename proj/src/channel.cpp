#include "shapeldpc/channel.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace shapeldpc {

double snr_from_config(const ChannelConfig& cfg) {
    if (cfg.sigma <= 0.0) throw std::invalid_argument("snr_from_config: sigma must be positive");
    const double es = (1.0 - cfg.p0) * cfg.amplitude * cfg.amplitude;
    return 10.0 * std::log10(es / (cfg.sigma * cfg.sigma));
}

double sigma_for_snr(double snr_db, double amplitude, double p0) {
    const double gamma = std::pow(10.0, snr_db / 10.0);
    const double es = (1.0 - p0) * amplitude * amplitude;
    if (es <= 0.0) throw std::invalid_argument("sigma_for_snr: no signal energy");
    return std::sqrt(es / gamma);
}

std::vector<double> map_ook(std::span<const std::uint8_t> bits,
                            const std::vector<std::uint32_t>& puncture, double amplitude) {
    std::vector<double> x;
    x.reserve(bits.size() - puncture.size());
    std::size_t pi = 0;
    for (std::size_t i = 0; i < bits.size(); ++i) {
        if (pi < puncture.size() && puncture[pi] == i) {
            ++pi;
            continue;
        }
        x.push_back((bits[i] & 1u) ? amplitude : 0.0);
    }
    if (pi != puncture.size()) throw std::invalid_argument("map_ook: puncture position out of range");
    return x;
}

double gaussian(std::mt19937_64& rng) {
    // Box-Muller; u1 kept away from zero so the log stays finite
    const double u1 = (static_cast<double>(rng() >> 11) + 0.5) * 0x1.0p-53;
    const double u2 = static_cast<double>(rng() >> 11) * 0x1.0p-53;
    return std::sqrt(-2.0 * std::log(u1)) * std::cos(2.0 * M_PI * u2);
}

void add_awgn(std::vector<double>& signal, double sigma, std::mt19937_64& rng) {
    for (auto& y : signal) y += sigma * gaussian(rng);
}

namespace {

double prior_llr(double q0) {
    if (!(q0 > 0.0 && q0 < 1.0)) throw std::invalid_argument("prior probability outside (0,1)");
    return std::log(q0 / (1.0 - q0));
}

} // namespace

std::vector<double> demap_llr(std::span<const double> y, const ChannelConfig& cfg,
                              std::span<const BitClass> classes,
                              const std::vector<std::uint32_t>& puncture) {
    const std::size_t n = classes.size();
    if (y.size() + puncture.size() != n)
        throw std::invalid_argument("demap_llr: length mismatch");
    const double a = cfg.amplitude;
    const double inv2s2 = 1.0 / (2.0 * cfg.sigma * cfg.sigma);

    std::vector<double> llr(n);
    std::size_t pi = 0, yi = 0;
    for (std::size_t i = 0; i < n; ++i) {
        double q0 = 0.5;
        switch (classes[i]) {
            case BitClass::dm: q0 = cfg.priors.dm; break;
            case BitClass::shaping: q0 = cfg.priors.shaping; break;
            case BitClass::parity: q0 = cfg.priors.parity; break;
        }
        if (pi < puncture.size() && puncture[pi] == i) {
            ++pi;
            llr[i] = prior_llr(cfg.priors.punctured);
        } else {
            llr[i] = (a * a - 2.0 * a * y[yi++]) * inv2s2 + prior_llr(q0);
        }
    }
    return llr;
}

} // namespace shapeldpc
