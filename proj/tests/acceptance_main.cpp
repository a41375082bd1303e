#include <gtest/gtest.h>

#include <cmath>
#include <complex>
#include <cstdint>
#include <iomanip>
#include <iostream>
#include <sstream>
#include <string>
#include <vector>

#include "wglab/asymptotics.hpp"
#include "wglab/circle.hpp"
#include "wglab/counting.hpp"
#include "wglab/mangoldt.hpp"
#include "wglab/quadrature.hpp"
#include "wglab/smoothed.hpp"

using namespace wglab;

namespace {

constexpr unsigned kWorkers = 4;

void report(int criterion, bool pass, const std::string& detail) {
    std::cout << "[ACCEPT] criterion " << criterion << ": " << (pass ? "PASS" : "FAIL")
              << " - " << detail << std::endl;
    EXPECT_TRUE(pass) << "criterion " << criterion << ": " << detail;
}

std::string triple_text(const ExponentTriple& t) {
    std::ostringstream s;
    s << "(" << t.k1 << "," << t.k2 << "," << t.k3 << ")";
    return s.str();
}

std::uint64_t int_pow(std::uint64_t base, int exp) {
    std::uint64_t v = 1;
    for (int i = 0; i < exp; ++i) v *= base;
    return v;
}

struct ScanRow {
    std::int64_t N = 0;
    std::int64_t H = 0;
    double sum_unweighted = 0;
    double sum_weighted = 0;
    double main = 0;
    double rel_err = 0;
};

// (2,2,2), H = floor(N^0.7): shared by the trend and weight-removal criteria.
const std::vector<ScanRow>& theta_scan() {
    static const std::vector<ScanRow> rows = [] {
        std::vector<ScanRow> out;
        auto t = ExponentTriple::make(2, 2, 2);
        for (double exp10 : {4.0, 5.0, 6.0, 7.0}) {
            ScanRow row;
            row.N = static_cast<std::int64_t>(std::pow(10.0, exp10));
            row.H = static_cast<std::int64_t>(std::pow(static_cast<double>(row.N), 0.7));
            auto table = build_mangoldt_table(std::max<std::uint64_t>(
                2, integer_kth_root(static_cast<std::uint64_t>(row.N + row.H), 2)));
            auto r = interval_sums(row.N, row.H, t, table, false, kWorkers);
            row.sum_unweighted = r.sum_unweighted;
            row.sum_weighted = r.sum_weighted;
            row.main = main_term(row.N, row.H, t);
            row.rel_err = std::abs(row.sum_unweighted - row.main) / row.main;
            out.push_back(row);
        }
        return out;
    }();
    return rows;
}

} // namespace

TEST(acceptance, criterion_1_identity_and_per_n_recovery) {
    struct Case {
        std::int64_t N, H;
        int k1, k2, k3;
    };
    const Case cases[] = {
        {200, 10, 2, 2, 2}, {500, 20, 2, 2, 2}, {500, 20, 2, 2, 3}, {400, 15, 3, 3, 3}};
    bool ok = true;
    std::ostringstream detail;
    detail << std::scientific << std::setprecision(3);
    for (const auto& c : cases) {
        auto t = ExponentTriple::make(c.k1, c.k2, c.k3);
        auto table = build_mangoldt_table(required_table_limit(c.N, c.H, t));
        auto rep = verify_basic_identity(c.N, c.H, t, table, 1e-15, 1e-6, kWorkers);

        auto s1 = build_smoothed_sum_spec(table, c.N, t.k1);
        auto s2 = build_smoothed_sum_spec(table, c.N, t.k2);
        auto s3 = build_smoothed_sum_spec(table, c.N, t.k3);
        auto grid = QuadratureGrid::for_bandwidth(s1.max_frequency + s2.max_frequency +
                                                  s3.max_frequency);
        auto a = sample_smoothed_sum(s1, grid, kWorkers);
        auto b = sample_smoothed_sum(s2, grid, kWorkers);
        auto cc = sample_smoothed_sum(s3, grid, kWorkers);
        std::vector<std::complex<double>> product(a.size());
        for (std::size_t j = 0; j < a.size(); ++j) product[j] = a[j] * b[j] * cc[j];

        double per_n_max = 0;
        for (std::int64_t n = 1; n <= 600; ++n) {
            auto coeff = fourier_coefficient(product, grid, n);
            double recovered =
                std::exp(static_cast<double>(n) / static_cast<double>(c.N)) * coeff.real();
            double exact = representation_count(n, t, table);
            per_n_max = std::max(per_n_max, std::abs(recovered - exact));
        }

        bool case_ok = rep.pass && per_n_max <= 1e-8;
        ok = ok && case_ok;
        detail << "(" << c.N << "," << c.H << "," << triple_text(t) << ") diff=" << rep.diff
               << " per_n_max=" << per_n_max << "; ";
    }
    report(1, ok, detail.str());
}

TEST(acceptance, criterion_2_oracle_equivalence) {
    const std::int64_t n_max = 5000;
    auto table = build_mangoldt_table(
        integer_kth_root(static_cast<std::uint64_t>(n_max), 2) + 1);
    const int triples[4][3] = {{2, 2, 2}, {2, 2, 3}, {2, 3, 4}, {3, 3, 3}};
    double worst = 0;
    for (const auto& ks : triples) {
        auto t = ExponentTriple::make(ks[0], ks[1], ks[2]);
        std::vector<double> naive(static_cast<std::size_t>(n_max) + 1, 0.0);
        // all-m triple loop, no early breaks beyond the cube bounds
        for (std::uint64_t m1 = 2; int_pow(m1, t.k1) <= static_cast<std::uint64_t>(n_max); ++m1)
            for (std::uint64_t m2 = 2; int_pow(m2, t.k2) <= static_cast<std::uint64_t>(n_max); ++m2)
                for (std::uint64_t m3 = 2; int_pow(m3, t.k3) <= static_cast<std::uint64_t>(n_max); ++m3) {
                    std::uint64_t s = int_pow(m1, t.k1) + int_pow(m2, t.k2) + int_pow(m3, t.k3);
                    if (s <= static_cast<std::uint64_t>(n_max))
                        naive[static_cast<std::size_t>(s)] +=
                            table.values[m1] * table.values[m2] * table.values[m3];
                }
        for (std::int64_t n = 0; n <= n_max; ++n) {
            double dev = std::abs(naive[static_cast<std::size_t>(n)] -
                                  representation_count(n, t, table));
            worst = std::max(worst, dev);
        }
    }
    std::ostringstream detail;
    detail << std::scientific << std::setprecision(3) << "max |naive - counted| = " << worst
           << " over n <= " << n_max << ", 4 triples";
    report(2, worst <= 1e-12, detail.str());
}

TEST(acceptance, criterion_3_parseval) {
    struct Case {
        std::int64_t N;
        int k;
    };
    const Case cases[] = {{1000, 2}, {10000, 2}, {1000, 3}};
    bool ok = true;
    std::ostringstream detail;
    detail << std::scientific << std::setprecision(3);
    for (const auto& c : cases) {
        auto t = ExponentTriple::make(c.k, c.k, c.k);
        auto table = build_mangoldt_table(required_table_limit(c.N, 1, t));
        auto spec = build_smoothed_sum_spec(table, c.N, c.k);
        L2Request req{L2Integrand::smoothed_sum, L2Interval::symmetric, 0.5, L2Weight::one, 1.0};
        auto prof = l2_profile(spec, req, kWorkers);
        neumaier_sum direct;
        for (const auto& term : spec.terms) direct.add(term.weight * term.weight);
        double rel = std::abs(prof.integral_value - direct.value()) / direct.value();
        ok = ok && rel <= 1e-8;
        detail << "(N=" << c.N << ",k=" << c.k << ") rel=" << rel << "; ";
    }
    report(3, ok, detail.str());
}

TEST(acceptance, criterion_4_main_term_trend) {
    const auto& rows = theta_scan();
    bool decreasing = true;
    std::ostringstream detail;
    detail << std::scientific << std::setprecision(6);
    for (std::size_t i = 0; i < rows.size(); ++i) {
        if (i > 0 && !(rows[i].rel_err < rows[i - 1].rel_err)) decreasing = false;
        detail << "N=" << rows[i].N << " H=" << rows[i].H << " rel_err=" << rows[i].rel_err
               << "; ";
    }
    detail << "final=" << rows.back().rel_err;
    report(4, decreasing, detail.str());
}

TEST(acceptance, criterion_5_mt_scaled_residual) {
    double worst = 0;
    for (double lambda : {-0.5, 0.0, 0.5, 1.0})
        for (double Nd : {1e3, 1e4, 1e5, 1e6})
            for (double theta : {0.4, 0.7}) {
                auto N = static_cast<std::int64_t>(Nd);
                auto H = static_cast<std::int64_t>(std::pow(Nd, theta));
                worst = std::max(worst, mt_power_sum(N, H, lambda).scaled_residual);
            }
    std::ostringstream detail;
    detail << std::scientific << std::setprecision(3)
           << "max scaled_residual = " << worst
           << " over lambda in {-1/2,0,1/2,1}, N in {1e3..1e6}, H = N^{0.4,0.7}";
    report(5, worst <= 10.0, detail.str());
}

TEST(acceptance, criterion_6_laplace_scaled_residual) {
    double worst = 0;
    for (double nd : {1e2, 1e3, 1e4})
        for (double mu : {0.5, 1.0, 1.5})
            for (double X : {0.125, 0.25, 0.5}) {
                auto n = static_cast<std::int64_t>(nd);
                worst = std::max(worst, laplace_residual(n, n, mu, X, kWorkers).scaled_residual);
            }
    std::ostringstream detail;
    detail << std::scientific << std::setprecision(3) << "max scaled_residual = " << worst
           << " over n in {1e2,1e3,1e4}, mu in {1/2,1,3/2}, X in {1/8,1/4,1/2}";
    report(6, worst <= 1e3, detail.str());
}

TEST(acceptance, criterion_7_decomposition_closure) {
    const std::int64_t N = 500, H = 20;
    auto t = ExponentTriple::make(2, 2, 2);
    auto table = build_mangoldt_table(required_table_limit(N, H, t));
    const double tolerance = 1e-6;

    auto u2 = decompose_integral(N, H, t, DecomposeMode::unconditional, 2.0, table, 1e-15,
                                 tolerance, kWorkers);
    auto u8 = decompose_integral(N, H, t, DecomposeMode::unconditional, 8.0, table, 1e-15,
                                 tolerance, kWorkers);
    auto uh = decompose_integral(N, H, t, DecomposeMode::unconditional,
                                 static_cast<double>(H) / 2.0, table, 1e-15, tolerance,
                                 kWorkers);
    auto cond = decompose_integral(N, H, t, DecomposeMode::conditional, 1.0, table, 1e-15,
                                   tolerance, kWorkers);

    bool ok = true;
    std::ostringstream detail;
    detail << std::scientific << std::setprecision(3);
    for (const auto* r : {&u2, &u8, &uh, &cond}) {
        ok = ok && r->discrepancy <= 10.0 * tolerance;
        detail << (r->mode == DecomposeMode::unconditional
                       ? "B=" + std::to_string(r->B).substr(0, 4)
                       : std::string("cond"))
               << " disc=" << r->discrepancy << "; ";
    }
    double split_drift = std::max(std::abs(u2.recombined - u8.recombined),
                                  std::abs(u2.recombined - uh.recombined));
    ok = ok && split_drift <= 10.0 * tolerance;
    detail << "recombined drift across B splits = " << split_drift;
    report(7, ok, detail.str());
}

TEST(acceptance, criterion_8_weight_removal) {
    const auto& rows = theta_scan();
    bool ok = true;
    std::ostringstream detail;
    detail << std::scientific << std::setprecision(3);
    const double rho = 1.5;
    for (const auto& row : rows) {
        double lhs = std::abs(row.sum_weighted - row.sum_unweighted / std::exp(1.0));
        double bound = 5.0 * static_cast<double>(row.H) * static_cast<double>(row.H) *
                       std::pow(static_cast<double>(row.N), rho - 2.0) * (M_PI / 4.0);
        ok = ok && lhs <= bound;
        detail << "N=" << row.N << " |sw-su/e|=" << lhs << " bound=" << bound << "; ";
    }
    report(8, ok, detail.str());
}

TEST(acceptance, criterion_9_bound_conformance) {
    const double eps = std::numeric_limits<double>::epsilon();
    auto slack = [eps](double x) { return 8.0 * std::abs(x) * eps; };
    std::int64_t violations = 0;

    for (std::int64_t H : {5, 50, 500})
        for (int i = -2000; i <= 2000; ++i) {
            double alpha = i / 4000.0;
            double cap = alpha == 0.0
                             ? static_cast<double>(H)
                             : std::min(static_cast<double>(H), 1.0 / std::abs(alpha));
            if (std::abs(window_sum(alpha, H)) > cap + slack(cap)) ++violations;
        }

    for (std::int64_t N : {10, 1000, 100000})
        for (int i = -2000; i <= 2000; ++i) {
            double alpha = i / 4000.0;
            double cap = 2.0 * (alpha == 0.0
                                    ? static_cast<double>(N)
                                    : std::min(static_cast<double>(N), 1.0 / std::abs(alpha)));
            if (1.0 / std::abs(z_of(alpha, N)) > cap + slack(cap)) ++violations;
        }

    struct Case {
        std::int64_t N;
        int k;
    };
    for (const Case& c : {Case{10000, 2}, Case{1000, 3}}) {
        auto t = ExponentTriple::make(c.k, c.k, c.k);
        auto table = build_mangoldt_table(required_table_limit(c.N, 1, t));
        auto spec = build_smoothed_sum_spec(table, c.N, c.k);
        double cap = 10.0 * std::pow(static_cast<double>(c.N), 1.0 / c.k);
        for (int i = 0; i <= 1000; ++i) {
            double alpha = -0.5 + i / 1000.0;
            if (std::abs(error_term(spec, alpha)) > cap) ++violations;
        }
    }

    std::ostringstream detail;
    detail << violations << " violations across U, z, and error-term bound grids";
    report(9, violations == 0, detail.str());
}

TEST(acceptance, criterion_10_tolev_trend) {
    std::vector<double> ratios;
    std::ostringstream detail;
    detail << std::scientific << std::setprecision(4);
    for (double Nd : {1e3, 1e4, 1e5}) {
        auto N = static_cast<std::int64_t>(Nd);
        auto t = ExponentTriple::make(2, 2, 2);
        auto table = build_mangoldt_table(required_table_limit(N, 1, t));
        auto spec = build_smoothed_sum_spec(table, N, 2);
        double tau = 3.0 / std::sqrt(Nd);
        L2Request req{L2Integrand::smoothed_sum, L2Interval::symmetric, tau, L2Weight::one, 1.0};
        auto prof = l2_profile(spec, req, kWorkers);
        ratios.push_back(prof.ratio_tolev);
        detail << "N=" << N << " tau=" << tau << " ratio=" << prof.ratio_tolev << "; ";
    }
    bool ok = true;
    for (double r : ratios) ok = ok && std::isfinite(r);
    for (std::size_t i = 1; i < ratios.size(); ++i)
        ok = ok && ratios[i] <= 10.0 * ratios[0];
    report(10, ok, detail.str());
}
