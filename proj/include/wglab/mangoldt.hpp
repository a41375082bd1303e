#pragma once

#include <cmath>
#include <cstdint>
#include <limits>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#include "wglab/errors.hpp"

namespace wglab {

// Dense-plus-sparse von Mangoldt table: values[n] = log p when n = p^m,
// else 0. Counting loops need the dense random access, exponential sums
// iterate the sparse support only. Immutable after construction.
struct MangoldtTable {
    std::uint64_t limit = 0;
    std::vector<double> values;                              // index 0..limit
    std::vector<std::pair<std::uint64_t, double>> support;   // ascending n, weight > 0
};

inline constexpr std::uint64_t mangoldt_limit_cap = (std::uint64_t{1} << 32);

inline MangoldtTable build_mangoldt_table(std::uint64_t limit,
                                          std::uint64_t cap = mangoldt_limit_cap) {
    if (limit < 2)
        throw std::invalid_argument("build_mangoldt_table: limit must be >= 2");
    if (limit > cap)
        throw resource_limit_error("build_mangoldt_table: limit " + std::to_string(limit) +
                                   " exceeds cap " + std::to_string(cap));

    MangoldtTable t;
    t.limit = limit;
    t.values.assign(limit + 1, 0.0);

    std::vector<std::uint8_t> composite(limit + 1, 0);
    for (std::uint64_t p = 2; p * p <= limit; ++p) {
        if (composite[p]) continue;
        for (std::uint64_t q = p * p; q <= limit; q += p) composite[q] = 1;
    }
    for (std::uint64_t p = 2; p <= limit; ++p) {
        if (composite[p]) continue;
        double logp = std::log(static_cast<double>(p));
        for (std::uint64_t q = p; q <= limit; q *= p) {
            t.values[q] = logp;
            if (q > limit / p) break;   // q*p would overflow or exceed limit
        }
    }
    t.support.reserve(static_cast<std::size_t>(1.3 * limit / std::max(1.0, std::log(double(limit)))));
    for (std::uint64_t n = 2; n <= limit; ++n)
        if (t.values[n] > 0.0) t.support.emplace_back(n, t.values[n]);
    return t;
}

// floor(n^{1/k}), exact: the float guess is corrected in integer arithmetic
// so r^k <= n < (r+1)^k always holds.
inline std::uint64_t integer_kth_root(std::uint64_t n, unsigned k) {
    if (k == 0)
        throw std::invalid_argument("integer_kth_root: k must be positive");
    if (k == 1 || n < 2) return n;
    if (k >= 64) return 1;   // 2^64 > UINT64_MAX, so only 1 survives for n >= 1

    auto pow_leq = [](std::uint64_t b, unsigned e, std::uint64_t bound) {
        std::uint64_t acc = 1;
        for (unsigned i = 0; i < e; ++i) {
            if (b != 0 && acc > bound / b) return false;
            acc *= b;
        }
        return acc <= bound;
    };

    std::uint64_t r = static_cast<std::uint64_t>(
        std::pow(static_cast<double>(n), 1.0 / static_cast<double>(k)));
    if (r > 0) --r;   // start below, then walk up
    while (pow_leq(r + 1, k, n)) ++r;
    return r;
}

// Nonnegative double to int64 without the overflow UB of a bare cast;
// frequency caps past the representable range saturate, which downstream
// size checks then reject with a proper resource error.
inline std::int64_t saturating_int64(double x) {
    if (!(x > 0.0)) return 0;
    if (x >= 0x1p63) return std::numeric_limits<std::int64_t>::max();
    return static_cast<std::int64_t>(x);
}

struct PrimePowerPoint {
    std::int64_t m;
    std::int64_t m_pow_k;   // exact m^k
    double weight;          // Lambda(m)
};

// Support points m with Lambda(m) > 0 and m^k <= limit_kth, ascending.
inline std::vector<PrimePowerPoint> prime_power_points(const MangoldtTable& table,
                                                       unsigned k,
                                                       std::int64_t limit_kth) {
    if (k == 0)
        throw std::invalid_argument("prime_power_points: k must be positive");
    if (limit_kth < 0)
        throw std::invalid_argument("prime_power_points: limit_kth must be nonnegative");
    std::uint64_t root = integer_kth_root(static_cast<std::uint64_t>(limit_kth), k);
    if (table.limit < root)
        throw std::invalid_argument("prime_power_points: table.limit " +
                                    std::to_string(table.limit) + " < required " +
                                    std::to_string(root));
    std::vector<PrimePowerPoint> pts;
    for (const auto& [m, w] : table.support) {
        if (m > root) break;
        std::int64_t f = 1;
        for (unsigned i = 0; i < k; ++i) {
            if (f > limit_kth / static_cast<std::int64_t>(m))
                throw std::logic_error("prime_power_points: m^k overflow past pre-check");
            f *= static_cast<std::int64_t>(m);
        }
        pts.push_back({static_cast<std::int64_t>(m), f, w});
    }
    return pts;
}

// Independent Lambda via trial factorization; used to spot-check cached
// tables on load.
inline double mangoldt_by_factorization(std::uint64_t n) {
    if (n < 2) return 0.0;
    for (std::uint64_t p = 2; p * p <= n; ++p) {
        if (n % p == 0) {
            while (n % p == 0) n /= p;
            return n == 1 ? std::log(static_cast<double>(p)) : 0.0;
        }
    }
    return std::log(static_cast<double>(n));
}

} // namespace wglab
