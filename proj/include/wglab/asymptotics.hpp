#pragma once

#include <cmath>
#include <cstdint>
#include <limits>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include "wglab/gamma.hpp"
#include "wglab/summation.hpp"
#include "wglab/triple.hpp"

namespace wglab {

// Predicted interval sum: gamma_{k1} gamma_{k2} gamma_{k3} / Gamma(rho) * H * N^{rho-1}.
inline double main_term(std::int64_t N, std::int64_t H, const ExponentTriple& t) {
    if (N < 2 || H < 1)
        throw std::invalid_argument("main_term: need N >= 2, H >= 1");
    double per_h = t.gamma_product() / gamma_real(t.rho) *
                   std::pow(static_cast<double>(N), t.rho - 1.0);
    return per_h * static_cast<double>(H);
}

// The weighted interval sum carries e^{-n/N} ~ 1/e across a short interval.
inline double weighted_main_term(std::int64_t N, std::int64_t H, const ExponentTriple& t) {
    return main_term(N, H, t) / M_E;
}

struct PowerSumReport {
    double exact_sum = 0;
    double model = 0;
    double residual = 0;
    double scaled_residual = 0;
};

// Sum_{n=N+1}^{N+H} e^{-n/N} n^lambda versus the model H N^lambda / e.
// The residual scaled by N^{1-lambda}/H^2 stays bounded.
inline PowerSumReport mt_power_sum(std::int64_t N, std::int64_t H, double lambda) {
    if (N < 1 || H < 1 || H > N)
        throw std::invalid_argument("mt_power_sum: need 1 <= H <= N");
    if (N > std::numeric_limits<std::int64_t>::max() - H)
        throw std::invalid_argument("mt_power_sum: N + H overflows");
    neumaier_sum acc;
    double invN = 1.0 / static_cast<double>(N);
    for (std::int64_t n = N + 1; n <= N + H; ++n) {
        double x = static_cast<double>(n);
        acc.add(std::exp(-x * invN) * std::pow(x, lambda));
    }
    PowerSumReport r;
    r.exact_sum = acc.value();
    r.model = static_cast<double>(H) * std::pow(static_cast<double>(N), lambda) / M_E;
    r.residual = std::abs(r.exact_sum - r.model);
    r.scaled_residual = r.residual * std::pow(static_cast<double>(N), 1.0 - lambda) /
                        (static_cast<double>(H) * static_cast<double>(H));
    return r;
}

// A(N; c) = exp{c (log N / log log N)^{1/3}}, the sub-exponential error scale.
inline double a_scale(std::int64_t N, double c) {
    if (N < 3)
        throw std::invalid_argument("a_scale: need N >= 3 so log log N > 0");
    double L = std::log(static_cast<double>(N));
    return std::exp(c * std::cbrt(L / std::log(L)));
}

struct HWindows {
    double lower = 0;                 // N^{1 - 5/(6 k3) + eps}
    double upper = 0;                 // N^{1 - eps}
    bool empty_window = false;        // eps >= 5/(12 k3)
    double rh_scale = 0;              // N^{1 - 1/k3} L^6
    bool has_h = false;
    bool in_unconditional = false;    // lower < H < upper
    double rh_ratio = 0;              // H / rh_scale
    bool rh_exceeds_threshold = false;
};

// Validity windows for the interval length H. The conditional window is a
// growth condition, unverifiable at a single N, so only the ratio to the
// reference scale is reported against a caller threshold.
inline HWindows h_windows(std::int64_t N, const ExponentTriple& t, double epsilon,
                          std::optional<std::int64_t> H = std::nullopt,
                          double rh_threshold = 1.0) {
    if (!(epsilon > 0.0 && epsilon < 1.0 / 6.0))
        throw std::invalid_argument("h_windows: need 0 < epsilon < 1/6");
    if (N < 3)
        throw std::invalid_argument("h_windows: need N >= 3");
    HWindows w;
    double nd = static_cast<double>(N);
    double L = std::log(nd);
    double lo_exp = 1.0 - 5.0 / (6.0 * t.k3) + epsilon;
    double hi_exp = 1.0 - epsilon;
    w.lower = std::pow(nd, lo_exp);
    w.upper = std::pow(nd, hi_exp);
    w.empty_window = epsilon >= 5.0 / (12.0 * t.k3);
    w.rh_scale = std::pow(nd, 1.0 - 1.0 / t.k3) * std::pow(L, 6);
    if (H) {
        w.has_h = true;
        double hd = static_cast<double>(*H);
        w.in_unconditional = (w.lower < hd) && (hd < w.upper);
        w.rh_ratio = hd / w.rh_scale;
        w.rh_exceeds_threshold = w.rh_ratio > rh_threshold;
    }
    return w;
}

struct ErrorEnvelopes {
    double phi = 0;
    double psi = 0;
};

// Phi = H^2 N^{rho-2} + H^{1/2} N^{rho - 1/2 - 1/(2 k3)} L^3;
// Psi adds N^{rho - 1/(2 k2) - 1/(2 k3)} L^3. L is the natural log of N;
// a base-10 log here would silently corrupt every envelope.
inline ErrorEnvelopes error_envelopes(std::int64_t N, std::int64_t H, const ExponentTriple& t) {
    if (N < 3 || H < 1)
        throw std::invalid_argument("error_envelopes: need N >= 3, H >= 1");
    double nd = static_cast<double>(N);
    double hd = static_cast<double>(H);
    double L3 = std::pow(std::log(nd), 3);
    ErrorEnvelopes e;
    e.phi = hd * hd * std::pow(nd, t.rho - 2.0) +
            std::sqrt(hd) * std::pow(nd, t.rho - 0.5 - 1.0 / (2.0 * t.k3)) * L3;
    e.psi = e.phi + std::pow(nd, t.rho - 1.0 / (2.0 * t.k2) - 1.0 / (2.0 * t.k3)) * L3;
    return e;
}

// One scan row: measured sums against the predicted main term plus every
// diagnostic the trend analysis needs.
struct ErrorProfileRow {
    std::int64_t N = 0;
    std::int64_t H = 0;
    ExponentTriple triple;
    double sum_unweighted = 0;
    double sum_weighted = 0;
    double main_term = 0;
    double weighted_main_term = 0;
    double relative_error = 0;            // signed, (sum - main)/main
    double relative_error_weighted = 0;
    double a_scale_value = 0;             // A(N; -c), the predicted decay scale
    double a_ratio = 0;                   // |relative_error| / A(N; -c)
    double phi = 0;
    bool in_unconditional_window = false;
    bool in_rh_window = false;
    double rh_ratio = 0;
    unsigned worker_count = 1;
    std::int64_t wall_ms = 0;
};

struct ErrorProfile {
    std::vector<ErrorProfileRow> rows;
    double c = 1.0;
    double epsilon = 0.01;
    double theta = 0;
    std::size_t grid_points = 0;
    unsigned worker_count = 1;
};

} // namespace wglab
