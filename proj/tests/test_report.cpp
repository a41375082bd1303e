#include <gtest/gtest.h>

#include <sstream>
#include <string>

#include "wglab/driver.hpp"
#include "wglab/report.hpp"

using namespace wglab;

namespace {

Report sample_report() {
    Report r;
    r.command = "interval";
    r.params = {{"N", "10"}, {"H", "7"}, {"k", "2,2,2"}};
    r.worker_count = 2;
    r.wall_ms = 5;
    r.generated_at = "2024-06-01T12:00:00Z";
    r.table.columns = {"N", "H", "sum", "pass"};
    r.table.add_row({std::int64_t{10}, std::int64_t{7}, 1.9165194076434287, true});
    ReportTable per;
    per.columns = {"n", "r"};
    per.add_row({std::int64_t{11}, 0.0});
    per.add_row({std::int64_t{12}, 0.3330246519889294});
    r.sections.emplace_back("per_n", per);
    r.trend = {{"trend_points", "1"}};
    return r;
}

} // namespace

TEST(format_double, round_trips_and_is_stable) {
    EXPECT_EQ(format_double(0.5), "0.5");
    EXPECT_EQ(format_double(1.0), "1");
    EXPECT_EQ(format_double(1.9165194076434287), "1.9165194076434287");
    double v = 1.9165194076434287;
    EXPECT_EQ(std::stod(format_double(v)), v);
    EXPECT_EQ(format_double(-0.0001), "-0.0001");
}

TEST(csv_cell, per_type_rendering) {
    EXPECT_EQ(csv_cell(nlohmann::json("abc")), "abc");
    EXPECT_EQ(csv_cell(nlohmann::json(true)), "true");
    EXPECT_EQ(csv_cell(nlohmann::json(false)), "false");
    EXPECT_EQ(csv_cell(nlohmann::json(std::int64_t{42})), "42");
    EXPECT_EQ(csv_cell(nlohmann::json(0.25)), "0.25");
}

TEST(write_csv, golden_output) {
    std::ostringstream out;
    write_csv(out, sample_report());
    const std::string want =
        "# command=interval\n"
        "# version=0.1.0\n"
        "# N=10\n"
        "# H=7\n"
        "# k=2,2,2\n"
        "# workers=2\n"
        "# wall_ms=5\n"
        "# generated_at=2024-06-01T12:00:00Z\n"
        "N,H,sum,pass\n"
        "10,7,1.9165194076434287,true\n"
        "# section=per_n\n"
        "n,r\n"
        "11,0\n"
        "12,0.33302465198892939\n"
        "# trend_points=1\n";
    EXPECT_EQ(out.str(), want);
}

TEST(write_csv, deterministic_for_identical_reports) {
    std::ostringstream a, b;
    write_csv(a, sample_report());
    write_csv(b, sample_report());
    EXPECT_EQ(a.str(), b.str());
}

TEST(write_json, mirrors_the_table) {
    std::ostringstream out;
    write_json(out, sample_report());
    auto j = nlohmann::json::parse(out.str());
    EXPECT_EQ(j["meta"]["command"], "interval");
    EXPECT_EQ(j["meta"]["params"]["N"], "10");
    EXPECT_EQ(j["meta"]["workers"], 2);
    ASSERT_EQ(j["columns"].size(), 4u);
    ASSERT_EQ(j["rows"].size(), 1u);
    EXPECT_EQ(j["rows"][0]["N"], 10);
    EXPECT_DOUBLE_EQ(j["rows"][0]["sum"].get<double>(), 1.9165194076434287);
    EXPECT_EQ(j["rows"][0]["pass"], true);
    ASSERT_EQ(j["per_n"].size(), 2u);
    EXPECT_EQ(j["per_n"][1]["n"], 12);
    EXPECT_EQ(j["trend"]["trend_points"], "1");
}

TEST(parse_grid, comma_list_and_geometric_ladder) {
    auto pts = parse_grid("100,200,500");
    ASSERT_EQ(pts.size(), 3u);
    EXPECT_EQ(pts[0], 100);
    EXPECT_EQ(pts[2], 500);

    auto geo = parse_grid("1000:100000:10");
    ASSERT_EQ(geo.size(), 3u);
    EXPECT_EQ(geo[0], 1000);
    EXPECT_EQ(geo[1], 10000);
    EXPECT_EQ(geo[2], 100000);

    auto frac = parse_grid("100:1000:3.1622776601683795");
    ASSERT_EQ(frac.size(), 3u);
    EXPECT_EQ(frac[0], 100);
    EXPECT_EQ(frac[1], 316);
    EXPECT_EQ(frac[2], 1000);

    EXPECT_THROW(parse_grid(""), std::invalid_argument);
    EXPECT_THROW(parse_grid("10:5:2"), std::invalid_argument);
    EXPECT_THROW(parse_grid("10:100:1.0"), std::invalid_argument);
    EXPECT_THROW(parse_grid("10:100"), std::invalid_argument);
}

TEST(default_theta, midpoint_of_the_proven_window) {
    // midpoint of (1 - 5/(6 k3) + 0.01, 0.99)
    EXPECT_NEAR(default_theta(2), 0.5 * ((1.0 - 5.0 / 12.0 + 0.01) + 0.99), 1e-15);
    EXPECT_NEAR(default_theta(3), 0.5 * ((1.0 - 5.0 / 18.0 + 0.01) + 0.99), 1e-15);
    EXPECT_GT(default_theta(5), default_theta(2));
    EXPECT_LT(default_theta(2), 0.99);
}
