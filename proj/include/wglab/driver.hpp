#pragma once

#include <chrono>
#include <cmath>
#include <cstdint>
#include <ctime>
#include <fstream>
#include <iostream>
#include <sstream>
#include <stdexcept>
#include <string>
#include <vector>

#include "wglab/circle.hpp"
#include "wglab/counting.hpp"
#include "wglab/mangoldt.hpp"
#include "wglab/parallel.hpp"
#include "wglab/report.hpp"

namespace wglab {

enum class Command { count, interval, scan, identity, decompose, lemma };
enum class LemmaName { laplace, mt, tolev, lp, weighted_l2, parseval };
enum class OutputFormat { csv, json };

struct RunConfig {
    Command command = Command::count;
    LemmaName lemma = LemmaName::mt;
    std::int64_t N = 0;
    bool has_N = false;
    std::int64_t H = 0;
    bool has_H = false;
    int k1 = 2, k2 = 2, k3 = 2;
    double epsilon = 0.01;
    double B = 0;
    bool has_B = false;
    double c = 1.0;
    double eps_trunc = 1e-15;
    double tolerance = 1e-6;
    double lambda = 0.0;
    double mu = 1.0;
    double X = 0.5;
    double xi = 0;
    bool has_xi = false;
    double tau = 0;
    bool has_tau = false;
    double theta = 0;
    bool has_theta = false;
    std::vector<std::int64_t> grid;
    std::string out = "-";
    OutputFormat format = OutputFormat::csv;
    unsigned workers = 1;
    bool keep_per_n = false;
};

// "a,b,c" as explicit points, or "start:stop:factor" as a geometric ladder
// (factor may be fractional; each rung rounds to the nearest integer).
inline std::vector<std::int64_t> parse_grid(const std::string& text) {
    if (text.empty())
        throw std::invalid_argument("grid: empty specification");
    std::vector<std::int64_t> out;
    if (text.find(':') != std::string::npos) {
        std::istringstream in(text);
        std::string a, b, f;
        if (!std::getline(in, a, ':') || !std::getline(in, b, ':') || !std::getline(in, f))
            throw std::invalid_argument("grid: want start:stop:factor");
        double start = std::stod(a), stop = std::stod(b), factor = std::stod(f);
        if (!(start >= 2 && stop >= start && factor > 1.0))
            throw std::invalid_argument("grid: need 2 <= start <= stop and factor > 1");
        for (double x = start; x <= stop * (1.0 + 1e-12); x *= factor)
            out.push_back(static_cast<std::int64_t>(std::llround(x)));
        return out;
    }
    std::istringstream in(text);
    std::string piece;
    while (std::getline(in, piece, ',')) {
        if (piece.empty()) continue;
        out.push_back(std::stoll(piece));
    }
    if (out.empty())
        throw std::invalid_argument("grid: empty specification");
    return out;
}

// Default scan exponent: the midpoint of the proven H-window at eps = 0.01,
// so default scans stay inside the regime for any k3.
inline double default_theta(int k3) {
    double lo = 1.0 - 5.0 / (6.0 * k3) + 0.01;
    double hi = 1.0 - 0.01;
    return 0.5 * (lo + hi);
}

namespace detail {

inline std::string iso8601_now() {
    std::time_t t = std::time(nullptr);
    std::tm tm{};
    gmtime_r(&t, &tm);
    char buf[32];
    std::strftime(buf, sizeof buf, "%Y-%m-%dT%H:%M:%SZ", &tm);
    return buf;
}

class wall_clock {
public:
    wall_clock() : start_(std::chrono::steady_clock::now()) {}
    std::int64_t ms() const {
        return std::chrono::duration_cast<std::chrono::milliseconds>(
                   std::chrono::steady_clock::now() - start_)
            .count();
    }

private:
    std::chrono::steady_clock::time_point start_;
};

inline void require(bool ok, const std::string& condition) {
    if (!ok) throw std::invalid_argument("precondition violated: " + condition);
}

inline std::string triple_text(const RunConfig& cfg) {
    return std::to_string(cfg.k1) + "," + std::to_string(cfg.k2) + "," + std::to_string(cfg.k3);
}

inline void emit(const Report& rep, const RunConfig& cfg) {
    if (cfg.out == "-" || cfg.out.empty()) {
        if (cfg.format == OutputFormat::csv)
            write_csv(std::cout, rep);
        else
            write_json(std::cout, rep);
        return;
    }
    std::ofstream f(cfg.out, std::ios::trunc);
    if (!f)
        throw std::runtime_error("cannot open output file " + cfg.out);
    if (cfg.format == OutputFormat::csv)
        write_csv(f, rep);
    else
        write_json(f, rep);
    if (!f)
        throw std::runtime_error("write failed on " + cfg.out);
}

} // namespace detail

inline int run_count(const RunConfig& cfg) {
    detail::require(cfg.has_N && cfg.N >= 1, "count needs --N >= 1");
    auto t = ExponentTriple::make(cfg.k1, cfg.k2, cfg.k3);
    detail::wall_clock clock;
    auto table = build_mangoldt_table(
        std::max<std::uint64_t>(2, integer_kth_root(static_cast<std::uint64_t>(cfg.N),
                                                    static_cast<unsigned>(t.k1))));
    double r = representation_count(cfg.N, t, table);

    Report rep;
    rep.command = "count";
    rep.params = {{"N", std::to_string(cfg.N)}, {"k", detail::triple_text(cfg)}};
    rep.worker_count = cfg.workers;
    rep.generated_at = detail::iso8601_now();
    rep.table.columns = {"n", "k1", "k2", "k3", "r"};
    rep.wall_ms = clock.ms();
    rep.table.add_row({cfg.N, t.k1, t.k2, t.k3, r});
    detail::emit(rep, cfg);
    return 0;
}

inline int run_interval(const RunConfig& cfg) {
    detail::require(cfg.has_N && cfg.N >= 1, "interval needs --N >= 1");
    detail::require(cfg.has_H && cfg.H >= 1, "interval needs --H >= 1");
    auto t = ExponentTriple::make(cfg.k1, cfg.k2, cfg.k3);
    detail::wall_clock clock;
    auto table = build_mangoldt_table(std::max<std::uint64_t>(
        2, integer_kth_root(static_cast<std::uint64_t>(cfg.N) + static_cast<std::uint64_t>(cfg.H),
                            static_cast<unsigned>(t.k1))));
    auto r = interval_sums(cfg.N, cfg.H, t, table, cfg.keep_per_n, cfg.workers);

    Report rep;
    rep.command = "interval";
    rep.params = {{"N", std::to_string(cfg.N)},
                  {"H", std::to_string(cfg.H)},
                  {"k", detail::triple_text(cfg)},
                  {"per_n", cfg.keep_per_n ? "true" : "false"}};
    rep.worker_count = cfg.workers;
    rep.generated_at = detail::iso8601_now();
    rep.table.columns = {"N", "H", "k1", "k2", "k3", "sum_unweighted", "sum_weighted",
                         "main_term", "weighted_main_term", "rel_err", "rel_err_weighted",
                         "workers", "wall_ms"};
    rep.wall_ms = clock.ms();
    rep.table.add_row({r.N, r.H, t.k1, t.k2, t.k3, r.sum_unweighted, r.sum_weighted,
                       r.main_term, r.weighted_main_term, r.relative_error_unweighted,
                       r.relative_error_weighted, cfg.workers, rep.wall_ms});
    if (r.per_n) {
        ReportTable per;
        per.columns = {"n", "r"};
        for (std::size_t j = 0; j < r.per_n->size(); ++j)
            per.add_row({cfg.N + 1 + static_cast<std::int64_t>(j), (*r.per_n)[j]});
        rep.sections.emplace_back("per_n", std::move(per));
    }
    detail::emit(rep, cfg);
    return 0;
}

inline int run_scan(const RunConfig& cfg) {
    detail::require(!cfg.grid.empty(), "scan needs a nonempty --grid");
    auto t = ExponentTriple::make(cfg.k1, cfg.k2, cfg.k3);
    double theta = cfg.has_theta ? cfg.theta : default_theta(t.k3);
    detail::require(!(cfg.has_theta && cfg.has_H), "give either --H or --theta, not both");

    detail::wall_clock total_clock;
    ErrorProfile profile;
    profile.c = cfg.c;
    profile.epsilon = cfg.epsilon;
    profile.theta = cfg.has_H ? 0.0 : theta;
    profile.grid_points = cfg.grid.size();
    profile.worker_count = cfg.workers;

    std::vector<std::string> row_errors;

    std::uint64_t max_nh = 0;
    for (std::int64_t n : cfg.grid) {
        std::int64_t h = cfg.has_H
                             ? cfg.H
                             : std::max<std::int64_t>(
                                   1, saturating_int64(
                                          std::pow(static_cast<double>(n), theta)));
        max_nh = std::max(max_nh,
                          static_cast<std::uint64_t>(n) + static_cast<std::uint64_t>(h));
    }
    auto table = build_mangoldt_table(std::max<std::uint64_t>(
        2, integer_kth_root(max_nh, static_cast<unsigned>(t.k1))));

    for (std::int64_t n : cfg.grid) {
        detail::wall_clock row_clock;
        try {
            detail::require(n >= 3, "scan grid points need N >= 3");
            std::int64_t h = cfg.has_H
                                 ? cfg.H
                                 : std::max<std::int64_t>(
                                       1, saturating_int64(
                                              std::pow(static_cast<double>(n), theta)));
            auto sums = interval_sums(n, h, t, table, false, cfg.workers);
            auto windows = h_windows(n, t, cfg.epsilon, h, 1.0);
            ErrorProfileRow row;
            row.N = n;
            row.H = h;
            row.triple = t;
            row.sum_unweighted = sums.sum_unweighted;
            row.sum_weighted = sums.sum_weighted;
            row.main_term = sums.main_term;
            row.weighted_main_term = sums.weighted_main_term;
            row.relative_error = sums.relative_error_unweighted;
            row.relative_error_weighted = sums.relative_error_weighted;
            row.a_scale_value = a_scale(n, -cfg.c);
            row.a_ratio = std::abs(row.relative_error) / row.a_scale_value;
            row.phi = error_envelopes(n, h, t).phi;
            row.in_unconditional_window = windows.in_unconditional;
            row.in_rh_window = windows.rh_exceeds_threshold;
            row.rh_ratio = windows.rh_ratio;
            row.worker_count = cfg.workers;
            row.wall_ms = row_clock.ms();
            profile.rows.push_back(row);
        } catch (const std::exception& e) {
            row_errors.push_back("N=" + std::to_string(n) + " " + e.what());
        }
    }

    Report rep;
    rep.command = "scan";
    rep.params = {{"grid_points", std::to_string(cfg.grid.size())},
                  {"k", detail::triple_text(cfg)},
                  {"theta", cfg.has_H ? std::string("fixed_H=") + std::to_string(cfg.H)
                                      : format_double(theta)},
                  {"epsilon", format_double(cfg.epsilon)},
                  {"c", format_double(cfg.c)}};
    rep.worker_count = cfg.workers;
    rep.generated_at = detail::iso8601_now();
    rep.table.columns = {"N", "H", "k1", "k2", "k3", "sum_unweighted", "sum_weighted",
                         "main_term", "weighted_main_term", "rel_err", "rel_err_weighted",
                         "A_ratio", "phi", "in_uncond_window", "wall_ms"};
    for (const auto& row : profile.rows)
        rep.table.add_row({row.N, row.H, t.k1, t.k2, t.k3, row.sum_unweighted,
                           row.sum_weighted, row.main_term, row.weighted_main_term,
                           row.relative_error, row.relative_error_weighted, row.a_ratio,
                           row.phi, row.in_unconditional_window, row.wall_ms});
    rep.row_errors = row_errors;

    if (profile.rows.size() >= 2) {
        bool decreasing = true;
        for (std::size_t i = 1; i < profile.rows.size(); ++i)
            if (!(std::abs(profile.rows[i].relative_error) <
                  std::abs(profile.rows[i - 1].relative_error)))
                decreasing = false;
        rep.trend = {
            {"trend_rel_err_strictly_decreasing", decreasing ? "true" : "false"},
            {"trend_rel_err_first", format_double(std::abs(profile.rows.front().relative_error))},
            {"trend_rel_err_last", format_double(std::abs(profile.rows.back().relative_error))},
            {"trend_a_ratio_first", format_double(profile.rows.front().a_ratio)},
            {"trend_a_ratio_last", format_double(profile.rows.back().a_ratio)},
        };
    } else {
        rep.trend = {{"trend_rel_err_strictly_decreasing", "n/a"},
                     {"trend_rel_err_first", "n/a"},
                     {"trend_rel_err_last", "n/a"},
                     {"trend_a_ratio_first", "n/a"},
                     {"trend_a_ratio_last", "n/a"}};
    }
    rep.wall_ms = total_clock.ms();
    detail::emit(rep, cfg);
    return row_errors.empty() ? 0 : 1;
}

inline int run_identity(const RunConfig& cfg) {
    detail::require(cfg.has_N && cfg.N >= 2, "identity needs --N >= 2");
    detail::require(cfg.has_H && cfg.H >= 1, "identity needs --H >= 1");
    auto t = ExponentTriple::make(cfg.k1, cfg.k2, cfg.k3);
    detail::wall_clock clock;
    auto table = build_mangoldt_table(required_table_limit(cfg.N, cfg.H, t, cfg.eps_trunc));
    auto r = verify_basic_identity(cfg.N, cfg.H, t, table, cfg.eps_trunc, cfg.tolerance,
                                   cfg.workers);

    Report rep;
    rep.command = "identity";
    rep.params = {{"N", std::to_string(cfg.N)},
                  {"H", std::to_string(cfg.H)},
                  {"k", detail::triple_text(cfg)},
                  {"eps_trunc", format_double(cfg.eps_trunc)},
                  {"tolerance", format_double(cfg.tolerance)}};
    rep.worker_count = cfg.workers;
    rep.generated_at = detail::iso8601_now();
    rep.table.columns = {"N", "H", "k1", "k2", "k3", "lhs", "rhs", "diff", "tolerance",
                         "pass", "grid_m", "wall_ms"};
    rep.wall_ms = clock.ms();
    rep.table.add_row({r.N, r.H, t.k1, t.k2, t.k3, r.lhs, r.rhs, r.diff, r.tolerance,
                       r.pass, r.grid_m, rep.wall_ms});
    detail::emit(rep, cfg);
    return r.pass ? 0 : 1;
}

inline int run_decompose(const RunConfig& cfg) {
    detail::require(cfg.has_N && cfg.N >= 2, "decompose needs --N >= 2");
    detail::require(cfg.has_H && cfg.H >= 1, "decompose needs --H >= 1");
    auto t = ExponentTriple::make(cfg.k1, cfg.k2, cfg.k3);
    auto mode = cfg.has_B ? DecomposeMode::unconditional : DecomposeMode::conditional;
    detail::wall_clock clock;
    auto table = build_mangoldt_table(required_table_limit(cfg.N, cfg.H, t, cfg.eps_trunc));
    auto r = decompose_integral(cfg.N, cfg.H, t, mode, cfg.B, table, cfg.eps_trunc,
                                cfg.tolerance, cfg.workers);

    Report rep;
    rep.command = "decompose";
    rep.params = {{"N", std::to_string(cfg.N)},
                  {"H", std::to_string(cfg.H)},
                  {"k", detail::triple_text(cfg)},
                  {"mode", mode == DecomposeMode::unconditional ? "unconditional" : "conditional"},
                  {"B", cfg.has_B ? format_double(cfg.B) : "none"},
                  {"eps_trunc", format_double(cfg.eps_trunc)},
                  {"tolerance", format_double(cfg.tolerance)}};
    rep.worker_count = cfg.workers;
    rep.generated_at = detail::iso8601_now();
    rep.table.columns = {"N", "H", "k1", "k2", "k3", "mode", "B",
                         "i1_re", "i1_im", "i2_re", "i2_im", "i3_re", "i3_im",
                         "i4_re", "i4_im", "i5_re", "i5_im", "recombined",
                         "direct_weighted_sum", "discrepancy", "tolerance", "pass", "wall_ms"};
    rep.wall_ms = clock.ms();
    rep.table.add_row(
        {r.N, r.H, t.k1, t.k2, t.k3,
         mode == DecomposeMode::unconditional ? "unconditional" : "conditional", r.B,
         r.i1.real(), r.i1.imag(), r.i2.real(), r.i2.imag(), r.i3.real(), r.i3.imag(),
         r.i4.real(), r.i4.imag(), r.i5.real(), r.i5.imag(), r.recombined,
         r.direct_weighted_sum, r.discrepancy, r.tolerance, r.within_tolerance, rep.wall_ms});
    detail::emit(rep, cfg);
    return r.within_tolerance ? 0 : 1;
}

inline SmoothedSumSpec build_lemma_spec(const RunConfig& cfg) {
    std::int64_t f_cap =
        saturating_int64(static_cast<double>(cfg.N) * std::log(1.0 / cfg.eps_trunc));
    std::uint64_t need = integer_kth_root(static_cast<std::uint64_t>(f_cap),
                                          static_cast<unsigned>(cfg.k1));
    auto table = build_mangoldt_table(std::max<std::uint64_t>(2, need));
    return build_smoothed_sum_spec(table, cfg.N, cfg.k1, cfg.eps_trunc);
}

inline int run_lemma(const RunConfig& cfg) {
    detail::require(cfg.has_N && cfg.N >= 2, "lemma needs --N >= 2");
    detail::wall_clock clock;
    Report rep;
    rep.command = "lemma";
    rep.worker_count = cfg.workers;
    rep.generated_at = detail::iso8601_now();
    int status = 0;

    switch (cfg.lemma) {
    case LemmaName::laplace: {
        auto r = laplace_residual(cfg.N, cfg.N, cfg.mu, cfg.X, cfg.workers);
        rep.params = {{"lemma", "laplace"},
                      {"N", std::to_string(cfg.N)},
                      {"mu", format_double(cfg.mu)},
                      {"X", format_double(cfg.X)}};
        rep.table.columns = {"n", "N", "mu", "X", "integral", "main", "residual",
                             "scaled_residual", "evaluations", "wall_ms"};
        rep.wall_ms = clock.ms();
        rep.table.add_row({cfg.N, cfg.N, cfg.mu, cfg.X, r.integral, r.main, r.residual,
                           r.scaled_residual, r.evaluations, rep.wall_ms});
        break;
    }
    case LemmaName::mt: {
        detail::require(cfg.has_H && cfg.H >= 1, "lemma mt needs --H >= 1");
        auto r = mt_power_sum(cfg.N, cfg.H, cfg.lambda);
        rep.params = {{"lemma", "mt"},
                      {"N", std::to_string(cfg.N)},
                      {"H", std::to_string(cfg.H)},
                      {"lambda", format_double(cfg.lambda)}};
        rep.table.columns = {"N", "H", "lambda", "exact_sum", "model", "residual",
                             "scaled_residual", "wall_ms"};
        rep.wall_ms = clock.ms();
        rep.table.add_row({cfg.N, cfg.H, cfg.lambda, r.exact_sum, r.model, r.residual,
                           r.scaled_residual, rep.wall_ms});
        break;
    }
    case LemmaName::tolev: {
        detail::require(cfg.has_tau, "lemma tolev needs --tau");
        auto spec = build_lemma_spec(cfg);
        L2Request req{L2Integrand::smoothed_sum, L2Interval::symmetric, cfg.tau,
                      L2Weight::one, cfg.c};
        auto r = l2_profile(spec, req, cfg.workers);
        rep.params = {{"lemma", "tolev"},
                      {"N", std::to_string(cfg.N)},
                      {"k", std::to_string(cfg.k1)},
                      {"tau", format_double(cfg.tau)},
                      {"eps_trunc", format_double(cfg.eps_trunc)}};
        rep.table.columns = {"N", "k", "tau", "integral", "ratio_tolev", "evaluations",
                             "wall_ms"};
        rep.wall_ms = clock.ms();
        rep.table.add_row({cfg.N, cfg.k1, cfg.tau, r.integral_value, r.ratio_tolev,
                           r.evaluations, rep.wall_ms});
        break;
    }
    case LemmaName::lp: {
        detail::require(cfg.has_xi, "lemma lp needs --xi");
        auto spec = build_lemma_spec(cfg);
        L2Request req{L2Integrand::error_term, L2Interval::symmetric, cfg.xi,
                      L2Weight::one, cfg.c};
        auto r = l2_profile(spec, req, cfg.workers);
        rep.params = {{"lemma", "lp"},
                      {"N", std::to_string(cfg.N)},
                      {"k", std::to_string(cfg.k1)},
                      {"xi", format_double(cfg.xi)},
                      {"c", format_double(cfg.c)},
                      {"eps_trunc", format_double(cfg.eps_trunc)}};
        rep.table.columns = {"N", "k", "xi", "c", "integral", "ratio_unconditional",
                             "ratio_rh", "evaluations", "wall_ms"};
        rep.wall_ms = clock.ms();
        rep.table.add_row({cfg.N, cfg.k1, cfg.xi, cfg.c, r.integral_value,
                           r.ratio_unconditional, r.ratio_rh, r.evaluations, rep.wall_ms});
        break;
    }
    case LemmaName::weighted_l2: {
        detail::require(cfg.has_tau, "lemma weighted-l2 needs --tau");
        auto spec = build_lemma_spec(cfg);
        L2Request req{L2Integrand::smoothed_sum, L2Interval::complement, cfg.tau,
                      L2Weight::inverse_abs_alpha, cfg.c};
        auto r = l2_profile(spec, req, cfg.workers);
        rep.params = {{"lemma", "weighted-l2"},
                      {"N", std::to_string(cfg.N)},
                      {"k", std::to_string(cfg.k1)},
                      {"tau", format_double(cfg.tau)},
                      {"eps_trunc", format_double(cfg.eps_trunc)}};
        rep.table.columns = {"N", "k", "tau", "integral", "ratio_weighted", "evaluations",
                             "wall_ms"};
        rep.wall_ms = clock.ms();
        rep.table.add_row({cfg.N, cfg.k1, cfg.tau, r.integral_value, r.ratio_weighted,
                           r.evaluations, rep.wall_ms});
        break;
    }
    case LemmaName::parseval: {
        auto spec = build_lemma_spec(cfg);
        L2Request req{L2Integrand::smoothed_sum, L2Interval::symmetric, 0.5,
                      L2Weight::one, cfg.c};
        auto r = l2_profile(spec, req, cfg.workers);
        neumaier_sum direct;
        for (const auto& term : spec.terms) direct.add(term.weight * term.weight);
        double rel = std::abs(r.integral_value - direct.value()) /
                     std::max(direct.value(), 1e-300);
        bool pass = rel <= 1e-8;
        rep.params = {{"lemma", "parseval"},
                      {"N", std::to_string(cfg.N)},
                      {"k", std::to_string(cfg.k1)},
                      {"eps_trunc", format_double(cfg.eps_trunc)}};
        rep.table.columns = {"N", "k", "quadrature", "direct", "rel_diff", "pass", "wall_ms"};
        rep.wall_ms = clock.ms();
        rep.table.add_row({cfg.N, cfg.k1, r.integral_value, direct.value(), rel, pass,
                           rep.wall_ms});
        status = pass ? 0 : 1;
        break;
    }
    }
    detail::emit(rep, cfg);
    return status;
}

inline int run(const RunConfig& cfg) {
    switch (cfg.command) {
    case Command::count: return run_count(cfg);
    case Command::interval: return run_interval(cfg);
    case Command::scan: return run_scan(cfg);
    case Command::identity: return run_identity(cfg);
    case Command::decompose: return run_decompose(cfg);
    case Command::lemma: return run_lemma(cfg);
    }
    throw std::invalid_argument("unknown command");
}

} // namespace wglab
