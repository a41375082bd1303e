#pragma once

#include <cmath>
#include <cstdint>
#include <cstring>
#include <fstream>
#include <random>
#include <string>

#include "wglab/mangoldt.hpp"

namespace wglab {

// Binary cache: magic "WGMT", u32 version, u64 limit, u64 support count,
// then (u64 n, f64 weight) pairs. Native endianness; the cache is a local
// artifact, not an interchange format.
inline constexpr char mangoldt_cache_magic[4] = {'W', 'G', 'M', 'T'};
inline constexpr std::uint32_t mangoldt_cache_version = 1;

inline void save_mangoldt_table(const MangoldtTable& table, const std::string& path) {
    std::ofstream out(path, std::ios::binary | std::ios::trunc);
    if (!out)
        throw std::runtime_error("save_mangoldt_table: cannot open " + path);
    out.write(mangoldt_cache_magic, 4);
    std::uint32_t ver = mangoldt_cache_version;
    std::uint64_t limit = table.limit;
    std::uint64_t count = table.support.size();
    out.write(reinterpret_cast<const char*>(&ver), sizeof ver);
    out.write(reinterpret_cast<const char*>(&limit), sizeof limit);
    out.write(reinterpret_cast<const char*>(&count), sizeof count);
    for (const auto& [n, w] : table.support) {
        out.write(reinterpret_cast<const char*>(&n), sizeof n);
        out.write(reinterpret_cast<const char*>(&w), sizeof w);
    }
    if (!out)
        throw std::runtime_error("save_mangoldt_table: write failed on " + path);
}

// Loads and verifies: header sanity, strictly increasing support, and a
// random sample (about 1% of indices, clamped to [100, 10^4]) recomputed by
// trial factorization. Any mismatch throws.
inline MangoldtTable load_mangoldt_table(const std::string& path,
                                         std::uint64_t sample_seed = 0x5eedu) {
    std::ifstream in(path, std::ios::binary);
    if (!in)
        throw std::runtime_error("load_mangoldt_table: cannot open " + path);
    char magic[4];
    std::uint32_t ver = 0;
    std::uint64_t limit = 0, count = 0;
    in.read(magic, 4);
    in.read(reinterpret_cast<char*>(&ver), sizeof ver);
    in.read(reinterpret_cast<char*>(&limit), sizeof limit);
    in.read(reinterpret_cast<char*>(&count), sizeof count);
    if (!in || std::memcmp(magic, mangoldt_cache_magic, 4) != 0)
        throw std::runtime_error("load_mangoldt_table: bad magic in " + path);
    if (ver != mangoldt_cache_version)
        throw std::runtime_error("load_mangoldt_table: version " + std::to_string(ver) +
                                 " unsupported (want " +
                                 std::to_string(mangoldt_cache_version) + ")");
    if (limit < 2 || count > limit)
        throw std::runtime_error("load_mangoldt_table: implausible header in " + path);

    MangoldtTable t;
    t.limit = limit;
    t.values.assign(limit + 1, 0.0);
    t.support.reserve(count);
    std::uint64_t prev = 0;
    for (std::uint64_t i = 0; i < count; ++i) {
        std::uint64_t n = 0;
        double w = 0.0;
        in.read(reinterpret_cast<char*>(&n), sizeof n);
        in.read(reinterpret_cast<char*>(&w), sizeof w);
        if (!in)
            throw std::runtime_error("load_mangoldt_table: truncated file " + path);
        if (n <= prev || n > limit || !(w > 0.0))
            throw std::runtime_error("load_mangoldt_table: corrupt support entry in " + path);
        prev = n;
        t.values[n] = w;
        t.support.emplace_back(n, w);
    }

    std::uint64_t samples = std::max<std::uint64_t>(100, limit / 100);
    samples = std::min<std::uint64_t>(samples, 10000);
    std::mt19937_64 rng(sample_seed);
    std::uniform_int_distribution<std::uint64_t> dist(2, limit);
    for (std::uint64_t i = 0; i < samples; ++i) {
        std::uint64_t n = dist(rng);
        double want = mangoldt_by_factorization(n);
        if (std::abs(t.values[n] - want) > 1e-12)
            throw std::runtime_error("load_mangoldt_table: cache verification failed at n=" +
                                     std::to_string(n));
    }
    return t;
}

} // namespace wglab
