#include <doctest.h>

#include <cmath>
#include <random>

#include "shapeldpc/channel.hpp"

using namespace shapeldpc;

TEST_CASE("snr accounts for the on fraction of the transmitted bits") {
    ChannelConfig cfg;
    cfg.amplitude = 1.0;
    cfg.sigma = 1.0;
    cfg.p0 = 0.5;
    CHECK(snr_from_config(cfg) == doctest::Approx(-3.0102999566));
    cfg.amplitude = 2.0;
    cfg.sigma = 0.5;
    cfg.p0 = 0.75;
    CHECK(snr_from_config(cfg) == doctest::Approx(6.0205999133));
    cfg.sigma = 0.0;
    CHECK_THROWS(snr_from_config(cfg));
}

TEST_CASE("sigma_for_snr inverts snr_from_config") {
    for (double snr : {-2.0, 0.0, 3.7, 8.1}) {
        for (double p0 : {0.5, 0.612, 0.83}) {
            ChannelConfig cfg;
            cfg.amplitude = 1.0;
            cfg.p0 = p0;
            cfg.sigma = sigma_for_snr(snr, 1.0, p0);
            CHECK(snr_from_config(cfg) == doctest::Approx(snr));
        }
    }
    CHECK_THROWS(sigma_for_snr(0.0, 1.0, 1.0));
}

TEST_CASE("on-off mapping skips punctured positions") {
    BitVec bits = {1, 0, 1, 1, 0};
    auto x = map_ook(bits, {}, 2.0);
    CHECK(x == std::vector<double>{2.0, 0.0, 2.0, 2.0, 0.0});
    auto xp = map_ook(bits, {1, 3}, 1.0);
    CHECK(xp == std::vector<double>{1.0, 1.0, 0.0});
    CHECK_THROWS(map_ook(bits, {7}, 1.0));
}

TEST_CASE("gaussian sampler is deterministic with sane moments") {
    std::mt19937_64 a(42), b(42);
    for (int i = 0; i < 5; ++i) CHECK(gaussian(a) == gaussian(b));

    std::mt19937_64 rng(7);
    const int n = 200000;
    double sum = 0, sum2 = 0;
    for (int i = 0; i < n; ++i) {
        const double z = gaussian(rng);
        sum += z;
        sum2 += z * z;
    }
    const double mean = sum / n;
    const double var = sum2 / n - mean * mean;
    CHECK(std::abs(mean) < 0.01);
    CHECK(std::abs(var - 1.0) < 0.02);

    std::vector<double> sig(4, 1.0);
    std::mt19937_64 r2(1);
    add_awgn(sig, 0.0, r2);
    CHECK(sig == std::vector<double>(4, 1.0));
}

TEST_CASE("llr demapping combines channel evidence and class priors") {
    ChannelConfig cfg;
    cfg.amplitude = 1.0;
    cfg.sigma = 0.5;
    cfg.priors.dm = 0.7;
    cfg.priors.parity = 0.8;
    cfg.priors.punctured = 0.55;
    std::vector<BitClass> classes = {BitClass::dm, BitClass::shaping, BitClass::parity,
                                     BitClass::parity};
    std::vector<double> y = {0.0, 1.0, 0.25};  // position 1 is punctured
    auto llr = demap_llr(y, cfg, classes, {1});
    REQUIRE(llr.size() == 4);
    CHECK(llr[0] == doctest::Approx(2.0 + std::log(0.7 / 0.3)));
    CHECK(llr[1] == doctest::Approx(std::log(0.55 / 0.45)));
    CHECK(llr[2] == doctest::Approx(-2.0 + std::log(0.8 / 0.2)));
    CHECK(llr[3] == doctest::Approx(1.0 + std::log(0.8 / 0.2)));
}

TEST_CASE("uniform priors leave the midpoint undecided") {
    ChannelConfig cfg;
    cfg.amplitude = 2.0;
    cfg.sigma = 0.7;
    std::vector<BitClass> classes(3, BitClass::dm);
    std::vector<double> y = {1.0, 0.0, 2.0};  // midpoint, off, on
    auto llr = demap_llr(y, cfg, classes, {});
    CHECK(llr[0] == doctest::Approx(0.0));
    CHECK(llr[1] > 0.0);
    CHECK(llr[2] < 0.0);
    CHECK(llr[1] == doctest::Approx(-llr[2]));
}

TEST_CASE("demapper validates shapes and priors") {
    ChannelConfig cfg;
    std::vector<BitClass> classes(3, BitClass::dm);
    std::vector<double> y = {0.0, 0.0};
    CHECK_THROWS(demap_llr(y, cfg, classes, {}));       // missing sample
    CHECK_THROWS(demap_llr(y, cfg, classes, {0, 1}));   // too many punctures
    cfg.priors.dm = 1.0;
    std::vector<double> y3 = {0.0, 0.0, 0.0};
    CHECK_THROWS(demap_llr(y3, cfg, classes, {}));
}

TEST_CASE("hard decisions at high snr recover the bits") {
    ChannelConfig cfg;
    cfg.amplitude = 1.0;
    cfg.sigma = 0.1;
    std::mt19937_64 rng(2718);
    BitVec bits(200);
    for (auto& b : bits) b = static_cast<std::uint8_t>(rng() & 1);
    auto x = map_ook(bits, {}, cfg.amplitude);
    add_awgn(x, cfg.sigma, rng);
    std::vector<BitClass> classes(bits.size(), BitClass::dm);
    auto llr = demap_llr(x, cfg, classes, {});
    for (std::size_t i = 0; i < bits.size(); ++i)
        CHECK((llr[i] < 0.0) == (bits[i] == 1));
}
