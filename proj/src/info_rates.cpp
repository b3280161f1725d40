#include "shapeldpc/info_rates.hpp"

#include <array>
#include <cmath>
#include <stdexcept>

namespace shapeldpc {

double db_to_linear(double db) { return std::pow(10.0, db / 10.0); }

double linear_to_db(double lin) {
    if (lin <= 0.0) throw std::invalid_argument("linear_to_db: nonpositive value");
    return 10.0 * std::log10(lin);
}

double h2(double p) {
    if (p < 0.0 || p > 1.0) throw std::invalid_argument("h2: probability outside [0,1]");
    if (p == 0.0 || p == 1.0) return 0.0;
    return -p * std::log2(p) - (1.0 - p) * std::log2(1.0 - p);
}

double h2_inv(double y, H2Branch branch) {
    if (y < 0.0 || y > 1.0) throw std::invalid_argument("h2_inv: value outside [0,1]");
    double lo = 0.0, hi = 0.5;  // h2 increases on [0, 1/2]
    for (int it = 0; it < 100; ++it) {
        const double mid = 0.5 * (lo + hi);
        (h2(mid) < y ? lo : hi) = mid;
    }
    const double p = 0.5 * (lo + hi);
    return branch == H2Branch::lower ? p : 1.0 - p;
}

namespace {

constexpr int kGhNodes = 64;

struct GhTable {
    std::array<double, kGhNodes> x{};
    std::array<double, kGhNodes> w{};
};

// Nodes and weights of 64-point Gauss-Hermite quadrature (weight e^{-x^2}),
// found by Newton iteration on the orthonormal recurrence.
GhTable make_gh() {
    GhTable t;
    const int n = kGhNodes;
    const double pim4 = 0.7511255444649425;  // pi^{-1/4}
    double z = 0.0;
    for (int i = 0; i < (n + 1) / 2; ++i) {
        if (i == 0)
            z = std::sqrt(2.0 * n + 1.0) - 1.85575 * std::pow(2.0 * n + 1.0, -1.0 / 6.0);
        else if (i == 1)
            z -= 1.14 * std::pow(n, 0.426) / z;
        else if (i == 2)
            z = 1.86 * z - 0.86 * t.x[0];
        else if (i == 3)
            z = 1.91 * z - 0.91 * t.x[1];
        else
            z = 2.0 * z - t.x[i - 2];
        double pp = 0.0;
        for (int it = 0; it < 200; ++it) {
            double p1 = pim4, p2 = 0.0;
            for (int j = 1; j <= n; ++j) {
                const double p3 = p2;
                p2 = p1;
                p1 = z * std::sqrt(2.0 / j) * p2 - std::sqrt((j - 1.0) / j) * p3;
            }
            pp = std::sqrt(2.0 * n) * p2;
            const double dz = p1 / pp;
            z -= dz;
            if (std::abs(dz) < 1e-15) break;
        }
        t.x[i] = z;
        t.x[n - 1 - i] = -z;
        t.w[i] = 2.0 / (pp * pp);
        t.w[n - 1 - i] = t.w[i];
    }
    return t;
}

const GhTable& gh() {
    static const GhTable t = make_gh();
    return t;
}

// log(a + b e^z) for a,b >= 0, safe for any z
double log_mix(double a, double b, double z) {
    if (z > 0.0) return z + std::log(a * std::exp(-z) + b);
    return std::log(a + b * std::exp(z));
}

// mutual information with d2 = A^2 / sigma^2 given directly
double mi_ook_d2(double q0, double d2) {
    if (q0 <= 0.0 || q0 >= 1.0 || d2 <= 0.0) return 0.0;
    const double p1 = 1.0 - q0;
    const double d = std::sqrt(d2);
    const double sqrt2d = std::sqrt(2.0) * d;
    const auto& t = gh();
    double acc0 = 0.0, acc1 = 0.0;
    for (int i = 0; i < kGhNodes; ++i) {
        // y | bit 0 at y = sqrt(2) x: density ratio exponent
        acc0 += t.w[i] * log_mix(q0, p1, sqrt2d * t.x[i] - 0.5 * d2);
        // y | bit 1 at y = d + sqrt(2) x
        acc1 += t.w[i] * log_mix(p1, q0, -sqrt2d * t.x[i] - 0.5 * d2);
    }
    const double inv = 1.0 / (std::sqrt(M_PI) * std::log(2.0));
    return -(q0 * acc0 + p1 * acc1) * inv;
}

} // namespace

double mi_ook(double q0, double gamma_lin) {
    if (q0 < 0.0 || q0 > 1.0) throw std::invalid_argument("mi_ook: q0 outside [0,1]");
    if (gamma_lin < 0.0) throw std::invalid_argument("mi_ook: negative snr");
    if (q0 == 0.0 || q0 == 1.0 || gamma_lin == 0.0) return 0.0;
    return mi_ook_d2(q0, gamma_lin / (1.0 - q0));
}

namespace {

// golden-section maximum of f over [lo, hi]
std::pair<double, double> golden_max(const std::function<double(double)>& f, double lo,
                                     double hi, double tol) {
    const double gr = 0.6180339887498949;
    double a = lo, b = hi;
    double c = b - gr * (b - a), d = a + gr * (b - a);
    double fc = f(c), fd = f(d);
    while (b - a > tol) {
        if (fc > fd) {
            b = d;
            d = c;
            fd = fc;
            c = b - gr * (b - a);
            fc = f(c);
        } else {
            a = c;
            c = d;
            fc = fd;
            d = a + gr * (b - a);
            fd = f(d);
        }
    }
    const double xm = 0.5 * (a + b);
    return {xm, f(xm)};
}

} // namespace

CapacityPoint capacity_ook(double gamma_lin) {
    auto [q0, rate] = golden_max([&](double q) { return mi_ook(q, gamma_lin); }, 1e-9,
                                 1.0 - 1e-9, 1e-9);
    return {rate, q0};
}

double ts_rate(std::span<const InputClass> classes, double gamma_lin) {
    if (classes.empty()) throw std::invalid_argument("ts_rate: no classes");
    double total = 0.0, tx_frac = 0.0, tx_on = 0.0;
    for (const auto& c : classes) {
        if (c.fraction < 0.0 || c.q0 < 0.0 || c.q0 > 1.0)
            throw std::invalid_argument("ts_rate: bad class");
        total += c.fraction;
        if (c.transmitted) {
            tx_frac += c.fraction;
            tx_on += c.fraction * (1.0 - c.q0);
        }
    }
    if (std::abs(total - 1.0) > 1e-9)
        throw std::invalid_argument("ts_rate: fractions must sum to one");
    if (tx_frac <= 0.0 || tx_on <= 0.0) return 0.0;
    const double p1_avg = tx_on / tx_frac;
    const double d2 = gamma_lin / p1_avg;
    double rate = 0.0;
    for (const auto& c : classes)
        if (c.transmitted) rate += c.fraction * mi_ook_d2(c.q0, d2);
    return rate;
}

double ts_best_rate(double shaped_fraction, double gamma_lin) {
    if (shaped_fraction < 0.0 || shaped_fraction > 1.0)
        throw std::invalid_argument("ts_best_rate: fraction outside [0,1]");
    auto eval = [&](double q) {
        const InputClass cls[2] = {{shaped_fraction, q, true}, {1.0 - shaped_fraction, 0.5, true}};
        return ts_rate(cls, gamma_lin);
    };
    return golden_max(eval, 1e-6, 1.0 - 1e-6, 1e-9).second;
}

double snr_for_rate(const std::function<double(double)>& rate_of_gamma, double target_rate,
                    double lo_db, double hi_db) {
    double flo = rate_of_gamma(db_to_linear(lo_db));
    double fhi = rate_of_gamma(db_to_linear(hi_db));
    if (!(flo <= target_rate && target_rate <= fhi))
        throw std::invalid_argument("snr_for_rate: target rate not bracketed");
    double lo = lo_db, hi = hi_db;
    while (hi - lo > 0.002) {
        const double mid = 0.5 * (lo + hi);
        (rate_of_gamma(db_to_linear(mid)) < target_rate ? lo : hi) = mid;
    }
    return 0.5 * (lo + hi);
}

} // namespace shapeldpc
