#pragma once

#include <cmath>
#include <cstdint>
#include <limits>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include "wglab/asymptotics.hpp"
#include "wglab/mangoldt.hpp"
#include "wglab/parallel.hpp"
#include "wglab/summation.hpp"
#include "wglab/triple.hpp"

namespace wglab {

// R(n; k) = sum over ordered triples (m1, m2, m3) of prime powers with
// m1^{k1} + m2^{k2} + m3^{k3} = n of Lambda(m1) Lambda(m2) Lambda(m3).
// Ordered means (2,3,2) and (3,2,2) count separately.
inline double representation_count(std::int64_t n, const ExponentTriple& t,
                                   const MangoldtTable& table) {
    if (n <= 0) return 0.0;
    std::uint64_t need = integer_kth_root(static_cast<std::uint64_t>(n),
                                          static_cast<unsigned>(t.k1));
    if (table.limit < need)
        throw std::invalid_argument("representation_count: table.limit " +
                                    std::to_string(table.limit) + " < required " +
                                    std::to_string(need));
    auto pp1 = prime_power_points(table, static_cast<unsigned>(t.k1), n);
    auto pp2 = prime_power_points(table, static_cast<unsigned>(t.k2), n);
    neumaier_sum acc;
    for (const auto& a : pp1) {
        std::int64_t s1 = a.m_pow_k;
        if (s1 >= n) break;
        for (const auto& b : pp2) {
            std::int64_t rem = n - s1 - b.m_pow_k;
            if (rem < 2) break;   // m3 >= 2 needs m3^{k3} >= 4, but 2,3 die below anyway
            std::uint64_t m3 = integer_kth_root(static_cast<std::uint64_t>(rem),
                                                static_cast<unsigned>(t.k3));
            std::int64_t back = 1;
            for (int i = 0; i < t.k3; ++i) back *= static_cast<std::int64_t>(m3);
            if (back != rem) continue;
            double w3 = m3 <= table.limit ? table.values[m3] : 0.0;
            if (w3 > 0.0) acc.add(a.weight * b.weight * w3);
        }
    }
    return acc.value();
}

struct IntervalReport {
    std::int64_t N = 0;
    std::int64_t H = 0;
    ExponentTriple triple;
    double sum_unweighted = 0;
    double sum_weighted = 0;                     // with e^{-n/N} per n
    double main_term = 0;
    double weighted_main_term = 0;
    double relative_error_unweighted = 0;        // signed, (sum - main)/main
    double relative_error_weighted = 0;
    std::optional<std::vector<double>> per_n;    // per_n[j] = R(N+1+j) when kept
    unsigned worker_count = 1;
};

// One pass over the interval (N, N+H]: enumerate prime-power m1, then m2,
// then the m3 window that lands the sum inside the interval. The outer m1
// list is cut into fixed 64-point chunks; chunk results are merged in index
// order, so sums are bit-identical for every worker count.
inline IntervalReport interval_sums(std::int64_t N, std::int64_t H, const ExponentTriple& t,
                                    const MangoldtTable& table, bool keep_per_n = false,
                                    unsigned workers = 1) {
    if (N < 2 || H < 1)
        throw std::invalid_argument("interval_sums: need N >= 2, H >= 1");
    if (N > std::numeric_limits<std::int64_t>::max() - H)
        throw std::invalid_argument("interval_sums: N + H overflows");
    std::uint64_t need = integer_kth_root(static_cast<std::uint64_t>(N + H),
                                          static_cast<unsigned>(t.k1));
    if (table.limit < need)
        throw std::invalid_argument("interval_sums: table.limit " +
                                    std::to_string(table.limit) + " < required " +
                                    std::to_string(need));

    auto pp1 = prime_power_points(table, static_cast<unsigned>(t.k1), N + H);
    auto pp2 = prime_power_points(table, static_cast<unsigned>(t.k2), N + H);

    std::vector<double> decay(static_cast<std::size_t>(H) + 1, 0.0);
    double invN = 1.0 / static_cast<double>(N);
    for (std::int64_t j = 1; j <= H; ++j)
        decay[static_cast<std::size_t>(j)] = std::exp(-static_cast<double>(N + j) * invN);

    constexpr std::size_t chunk_len = 64;
    std::size_t chunk_count = (pp1.size() + chunk_len - 1) / chunk_len;

    struct ChunkPartial {
        double sum_u = 0;
        double sum_w = 0;
        std::vector<double> per_n;
    };
    std::vector<ChunkPartial> partials(chunk_count);

    for_each_chunk(chunk_count, workers, [&](std::size_t c) {
        ChunkPartial part;
        if (keep_per_n) part.per_n.assign(static_cast<std::size_t>(H), 0.0);
        neumaier_sum su, sw;
        std::size_t lo = c * chunk_len;
        std::size_t hi = std::min(lo + chunk_len, pp1.size());
        for (std::size_t i1 = lo; i1 < hi; ++i1) {
            std::int64_t s1 = pp1[i1].m_pow_k;
            double w1 = pp1[i1].weight;
            for (const auto& b : pp2) {
                std::int64_t s12 = s1 + b.m_pow_k;
                if (s12 >= N + H) break;
                double w12 = w1 * b.weight;
                std::int64_t rem_lo = N + 1 - s12;
                std::int64_t rem_hi = N + H - s12;
                std::uint64_t m3_lo = 2;
                if (rem_lo > 1) {
                    m3_lo = integer_kth_root(static_cast<std::uint64_t>(rem_lo - 1),
                                             static_cast<unsigned>(t.k3)) + 1;
                    if (m3_lo < 2) m3_lo = 2;
                }
                std::uint64_t m3_hi = integer_kth_root(static_cast<std::uint64_t>(rem_hi),
                                                       static_cast<unsigned>(t.k3));
                for (std::uint64_t m3 = m3_lo; m3 <= m3_hi; ++m3) {
                    double w3 = table.values[m3];
                    if (w3 <= 0.0) continue;
                    std::int64_t p3 = 1;
                    for (int i = 0; i < t.k3; ++i) p3 *= static_cast<std::int64_t>(m3);
                    std::int64_t n = s12 + p3;
                    double w = w12 * w3;
                    su.add(w);
                    sw.add(w * decay[static_cast<std::size_t>(n - N)]);
                    if (keep_per_n) part.per_n[static_cast<std::size_t>(n - N - 1)] += w;
                }
            }
        }
        part.sum_u = su.value();
        part.sum_w = sw.value();
        partials[c] = std::move(part);
    });

    IntervalReport rep;
    rep.N = N;
    rep.H = H;
    rep.triple = t;
    rep.worker_count = workers;
    neumaier_sum su, sw;
    if (keep_per_n) rep.per_n.emplace(static_cast<std::size_t>(H), 0.0);
    for (std::size_t c = 0; c < chunk_count; ++c) {
        su.add(partials[c].sum_u);
        sw.add(partials[c].sum_w);
        if (keep_per_n)
            for (std::size_t j = 0; j < static_cast<std::size_t>(H); ++j)
                (*rep.per_n)[j] += partials[c].per_n[j];
    }
    rep.sum_unweighted = su.value();
    rep.sum_weighted = sw.value();
    rep.main_term = main_term(N, H, t);
    rep.weighted_main_term = weighted_main_term(N, H, t);
    rep.relative_error_unweighted = (rep.sum_unweighted - rep.main_term) / rep.main_term;
    rep.relative_error_weighted =
        (rep.sum_weighted - rep.weighted_main_term) / rep.weighted_main_term;
    return rep;
}

} // namespace wglab
