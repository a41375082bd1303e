#pragma once

#include <cstdint>
#include <cstdio>
#include <ostream>
#include <string>
#include <utility>
#include <vector>

#include <json.hpp>

#include "wglab/version.hpp"

namespace wglab {

// %.17g round-trips every double and is stable across runs, which the
// byte-for-byte reproducibility contract relies on.
inline std::string format_double(double v) {
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.17g", v);
    return buf;
}

inline std::string csv_cell(const nlohmann::json& v) {
    if (v.is_string()) return v.get<std::string>();
    if (v.is_boolean()) return v.get<bool>() ? "true" : "false";
    if (v.is_number_integer()) return std::to_string(v.get<std::int64_t>());
    if (v.is_number_float()) return format_double(v.get<double>());
    return v.dump();
}

struct ReportTable {
    std::vector<std::string> columns;
    std::vector<std::vector<nlohmann::json>> rows;

    void add_row(std::vector<nlohmann::json> cells) { rows.push_back(std::move(cells)); }
};

struct Report {
    std::string command;
    std::vector<std::pair<std::string, std::string>> params;   // echoed config, fixed order
    unsigned worker_count = 1;
    std::int64_t wall_ms = 0;
    std::string generated_at;                                  // ISO-8601 UTC
    ReportTable table;
    std::vector<std::pair<std::string, ReportTable>> sections; // e.g. per_n
    std::vector<std::pair<std::string, std::string>> trend;    // appended statistics
    std::vector<std::string> row_errors;                       // per-row failures (scan)
};

// Self-describing CSV: `# key=value` metadata comments, one column-header
// line, data rows, then optional named sections and trend comments.
inline void write_csv(std::ostream& out, const Report& r) {
    out << "# command=" << r.command << "\n";
    out << "# version=" << WGLAB_VERSION << "\n";
    for (const auto& [k, v] : r.params) out << "# " << k << "=" << v << "\n";
    out << "# workers=" << r.worker_count << "\n";
    out << "# wall_ms=" << r.wall_ms << "\n";
    out << "# generated_at=" << r.generated_at << "\n";
    for (std::size_t i = 0; i < r.table.columns.size(); ++i)
        out << (i ? "," : "") << r.table.columns[i];
    out << "\n";
    for (const auto& row : r.table.rows) {
        for (std::size_t i = 0; i < row.size(); ++i)
            out << (i ? "," : "") << csv_cell(row[i]);
        out << "\n";
    }
    for (const auto& [name, tab] : r.sections) {
        out << "# section=" << name << "\n";
        for (std::size_t i = 0; i < tab.columns.size(); ++i)
            out << (i ? "," : "") << tab.columns[i];
        out << "\n";
        for (const auto& row : tab.rows) {
            for (std::size_t i = 0; i < row.size(); ++i)
                out << (i ? "," : "") << csv_cell(row[i]);
            out << "\n";
        }
    }
    for (const auto& e : r.row_errors) out << "# row_error=" << e << "\n";
    for (const auto& [k, v] : r.trend) out << "# " << k << "=" << v << "\n";
}

// JSON mirror of the CSV: same columns, rows as objects keyed by column.
inline void write_json(std::ostream& out, const Report& r) {
    nlohmann::json j;
    j["meta"]["command"] = r.command;
    j["meta"]["version"] = WGLAB_VERSION;
    for (const auto& [k, v] : r.params) j["meta"]["params"][k] = v;
    j["meta"]["workers"] = r.worker_count;
    j["meta"]["wall_ms"] = r.wall_ms;
    j["meta"]["generated_at"] = r.generated_at;
    j["columns"] = r.table.columns;
    j["rows"] = nlohmann::json::array();
    for (const auto& row : r.table.rows) {
        nlohmann::json obj;
        for (std::size_t i = 0; i < row.size(); ++i) obj[r.table.columns[i]] = row[i];
        j["rows"].push_back(std::move(obj));
    }
    for (const auto& [name, tab] : r.sections) {
        nlohmann::json rows = nlohmann::json::array();
        for (const auto& row : tab.rows) {
            nlohmann::json obj;
            for (std::size_t i = 0; i < row.size(); ++i) obj[tab.columns[i]] = row[i];
            rows.push_back(std::move(obj));
        }
        j[name] = std::move(rows);
    }
    if (!r.row_errors.empty()) j["row_errors"] = r.row_errors;
    if (!r.trend.empty())
        for (const auto& [k, v] : r.trend) j["trend"][k] = v;
    out << j.dump(2) << "\n";
}

} // namespace wglab
