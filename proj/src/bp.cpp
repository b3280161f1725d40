#include "shapeldpc/bp.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace shapeldpc {

bool syndrome_check(const SparseBinMatrix& h, std::span<const std::uint8_t> bits) {
    if (bits.size() != h.cols) throw std::invalid_argument("syndrome_check: length mismatch");
    for (std::size_t r = 0; r < h.rows; ++r) {
        std::uint8_t acc = 0;
        for (auto c : h.row_adj[r]) acc ^= bits[c] & 1u;
        if (acc) return false;
    }
    return true;
}

BpDecoder::BpDecoder(const SparseBinMatrix& h, double msg_clamp)
    : n_(h.cols), m_(h.rows), clamp_(msg_clamp) {
    if (!h.consistent()) throw std::invalid_argument("BpDecoder: inconsistent matrix");
    nedges_ = h.nnz();
    cn_start_.resize(m_ + 1, 0);
    cn_vn_.resize(nedges_);
    std::size_t e = 0;
    for (std::size_t j = 0; j < m_; ++j) {
        cn_start_[j] = static_cast<std::uint32_t>(e);
        for (auto c : h.row_adj[j]) cn_vn_[e++] = c;
    }
    cn_start_[m_] = static_cast<std::uint32_t>(e);

    vn_start_.assign(n_ + 1, 0);
    for (std::size_t q = 0; q < nedges_; ++q) ++vn_start_[cn_vn_[q] + 1];
    for (std::size_t i = 0; i < n_; ++i) vn_start_[i + 1] += vn_start_[i];
    vn_edge_.resize(nedges_);
    std::vector<std::uint32_t> fill(n_, 0);
    for (std::size_t q = 0; q < nedges_; ++q) {
        const auto i = cn_vn_[q];
        vn_edge_[vn_start_[i] + fill[i]++] = static_cast<std::uint32_t>(q);
    }

    v2c_.resize(nedges_);
    c2v_.resize(nedges_);
    app_.resize(n_);
    hard_.resize(n_);
    std::size_t dmax = 0;
    for (std::size_t j = 0; j < m_; ++j)
        dmax = std::max<std::size_t>(dmax, cn_start_[j + 1] - cn_start_[j]);
    tanh_buf_.resize(2 * (dmax + 1));
}

bool BpDecoder::hard_and_check() {
    for (std::size_t i = 0; i < n_; ++i) hard_[i] = app_[i] < 0.0 ? 1 : 0;
    for (std::size_t j = 0; j < m_; ++j) {
        std::uint8_t acc = 0;
        for (std::uint32_t q = cn_start_[j]; q < cn_start_[j + 1]; ++q) acc ^= hard_[cn_vn_[q]];
        if (acc) return false;
    }
    for (std::size_t i = 0; i < n_; ++i)
        if (app_[i] == 0.0) return false;
    return true;
}

DecodeResult BpDecoder::decode(std::span<const double> llr, std::size_t max_iter) {
    if (llr.size() != n_) throw std::invalid_argument("decode: LLR length mismatch");
    const double cl = clamp_;
    auto clamp = [cl](double x) { return x < -cl ? -cl : (x > cl ? cl : x); };

    for (std::size_t i = 0; i < n_; ++i) app_[i] = clamp(llr[i]);
    const std::vector<double> prior(app_);
    for (std::size_t i = 0; i < n_; ++i)
        for (std::uint32_t t = vn_start_[i]; t < vn_start_[i + 1]; ++t) v2c_[vn_edge_[t]] = prior[i];

    if (hard_and_check()) return {hard_, 0, true};

    double* tb = tanh_buf_.data();
    for (std::size_t it = 1; it <= max_iter; ++it) {
        // check pass: leave-one-out tanh products by prefix/suffix sweep
        for (std::size_t j = 0; j < m_; ++j) {
            const std::uint32_t s = cn_start_[j], d = cn_start_[j + 1] - s;
            double* pre = tb;
            double* suf = tb + d + 1;
            pre[0] = 1.0;
            for (std::uint32_t q = 0; q < d; ++q)
                pre[q + 1] = pre[q] * std::tanh(0.5 * v2c_[s + q]);
            suf[d] = 1.0;
            for (std::uint32_t q = d; q > 0; --q)
                suf[q - 1] = suf[q] * std::tanh(0.5 * v2c_[s + q - 1]);
            for (std::uint32_t q = 0; q < d; ++q) {
                double p = pre[q] * suf[q + 1];
                if (p >= 1.0) p = 1.0 - 1e-15;
                if (p <= -1.0) p = -1.0 + 1e-15;
                c2v_[s + q] = clamp(2.0 * std::atanh(p));
            }
        }
        // variable pass
        for (std::size_t i = 0; i < n_; ++i) {
            double tot = prior[i];
            for (std::uint32_t t = vn_start_[i]; t < vn_start_[i + 1]; ++t) tot += c2v_[vn_edge_[t]];
            app_[i] = tot;
            for (std::uint32_t t = vn_start_[i]; t < vn_start_[i + 1]; ++t) {
                const auto e = vn_edge_[t];
                v2c_[e] = clamp(tot - c2v_[e]);
            }
        }
        if (hard_and_check()) return {hard_, it, true};
    }
    return {hard_, max_iter, false};
}

DecodeResult bp_decode(const SparseBinMatrix& h, std::span<const double> llr,
                       std::size_t max_iter) {
    BpDecoder dec(h);
    return dec.decode(llr, max_iter);
}

} // namespace shapeldpc
