#include <algorithm>
#include <cstdio>
#include <exception>
#include <fstream>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>

#include "wglab/driver.hpp"
#include "wglab/errors.hpp"
#include "wglab/version.hpp"

namespace {

void add_common(CLI::App* sub, wglab::RunConfig& cfg, std::string& k_text,
                std::string& format_text, bool& workers_given, unsigned& workers_opt,
                std::string& config_path) {
    sub->add_option("--k", k_text, "exponent triple: one value or k1,k2,k3");
    sub->add_option("--out", cfg.out, "output path, - for stdout");
    sub->add_option("--format", format_text, "csv or json")
        ->check(CLI::IsMember({"csv", "json"}));
    sub->add_option("--workers", workers_opt, "worker thread count")
        ->check(CLI::PositiveNumber)
        ->each([&workers_given](const std::string&) { workers_given = true; });
    sub->add_option("--config", config_path, "key=value file; explicit flags win");
}

// key=value lines; blank lines and #-comments allowed. A key only applies when
// the matching flag was absent from the command line, and only to the active
// subcommand; valid keys for other subcommands are ignored so one file can
// serve several commands. Unknown keys are rejected.
void apply_config(const std::string& path, CLI::App* sub, wglab::RunConfig& cfg,
                  std::string& k_text, std::string& format_text, bool& workers_given,
                  unsigned& workers_opt, std::string& grid_text, std::string& lemma_text) {
    static const std::vector<std::string> known = {
        "N", "H", "k", "epsilon", "B", "c", "eps-trunc", "tolerance", "lambda",
        "mu", "X", "xi", "tau", "theta", "grid", "out", "format", "workers",
        "per-n", "name"};

    std::ifstream in(path);
    if (!in) throw std::invalid_argument("cannot open config file " + path);
    std::string line;
    int lineno = 0;
    while (std::getline(in, line)) {
        ++lineno;
        auto first = line.find_first_not_of(" \t\r");
        if (first == std::string::npos || line[first] == '#') continue;
        auto eq = line.find('=');
        if (eq == std::string::npos)
            throw std::invalid_argument("config line " + std::to_string(lineno) +
                                        ": want key=value");
        auto trim = [](std::string s) {
            auto b = s.find_first_not_of(" \t\r");
            auto e = s.find_last_not_of(" \t\r");
            return b == std::string::npos ? std::string() : s.substr(b, e - b + 1);
        };
        std::string key = trim(line.substr(0, eq));
        std::string value = trim(line.substr(eq + 1));
        if (std::find(known.begin(), known.end(), key) == known.end())
            throw std::invalid_argument("config line " + std::to_string(lineno) +
                                        ": unknown key " + key);
        if (key == "name") continue; // lemma name comes from the command line
        auto* opt = sub->get_option_no_throw("--" + key);
        if (opt == nullptr || opt->count() > 0) continue;
        if (key == "N") { cfg.N = std::stoll(value); cfg.has_N = true; }
        else if (key == "H") { cfg.H = std::stoll(value); cfg.has_H = true; }
        else if (key == "k") k_text = value;
        else if (key == "epsilon") cfg.epsilon = std::stod(value);
        else if (key == "B") { cfg.B = std::stod(value); cfg.has_B = true; }
        else if (key == "c") cfg.c = std::stod(value);
        else if (key == "eps-trunc") cfg.eps_trunc = std::stod(value);
        else if (key == "tolerance") cfg.tolerance = std::stod(value);
        else if (key == "lambda") cfg.lambda = std::stod(value);
        else if (key == "mu") cfg.mu = std::stod(value);
        else if (key == "X") cfg.X = std::stod(value);
        else if (key == "xi") { cfg.xi = std::stod(value); cfg.has_xi = true; }
        else if (key == "tau") { cfg.tau = std::stod(value); cfg.has_tau = true; }
        else if (key == "theta") { cfg.theta = std::stod(value); cfg.has_theta = true; }
        else if (key == "grid") grid_text = value;
        else if (key == "out") cfg.out = value;
        else if (key == "format") {
            if (value != "csv" && value != "json")
                throw std::invalid_argument("config: format must be csv or json");
            format_text = value;
        } else if (key == "workers") {
            workers_opt = static_cast<unsigned>(std::stoul(value));
            if (workers_opt == 0)
                throw std::invalid_argument("config: workers must be positive");
            workers_given = true;
        } else if (key == "per-n") {
            cfg.keep_per_n = (value == "true" || value == "1");
        }
    }
    (void)lemma_text;
}

void parse_k(const std::string& text, wglab::RunConfig& cfg) {
    if (text.empty()) return;
    std::vector<int> ks;
    std::istringstream in(text);
    std::string piece;
    while (std::getline(in, piece, ','))
        ks.push_back(std::stoi(piece));
    if (ks.size() == 1) {
        cfg.k1 = cfg.k2 = cfg.k3 = ks[0];
    } else if (ks.size() == 3) {
        cfg.k1 = ks[0];
        cfg.k2 = ks[1];
        cfg.k3 = ks[2];
    } else {
        throw std::invalid_argument("--k wants one value or three comma-separated values");
    }
}

int error_record(const char* type, const char* what, int code) {
    nlohmann::json rec = {{"error", {{"type", type}, {"what", what}}}};
    std::fprintf(stderr, "%s\n", rec.dump().c_str());
    return code;
}

} // namespace

int main(int argc, char** argv) {
    CLI::App app{"waring-goldbach ternary average laboratory"};
    app.set_version_flag("--version", WGLAB_VERSION);
    app.require_subcommand(1);

    wglab::RunConfig cfg;
    std::string k_text, format_text = "csv", grid_text, lemma_text, config_path;
    bool workers_given = false;
    unsigned workers_opt = 1;

    auto bind_N = [&cfg](CLI::App* sub, const char* help) {
        sub->add_option("--N", cfg.N, help)
            ->each([&cfg](const std::string&) { cfg.has_N = true; });
    };
    auto bind_H = [&cfg](CLI::App* sub) {
        sub->add_option("--H", cfg.H, "interval length")
            ->each([&cfg](const std::string&) { cfg.has_H = true; });
    };

    auto* count = app.add_subcommand("count", "representation count at a single point");
    bind_N(count, "target integer");
    add_common(count, cfg, k_text, format_text, workers_given, workers_opt, config_path);

    auto* interval = app.add_subcommand("interval", "summed counts over (N, N+H]");
    bind_N(interval, "interval base");
    bind_H(interval);
    interval->add_flag("--per-n", cfg.keep_per_n, "emit the per-n section");
    add_common(interval, cfg, k_text, format_text, workers_given, workers_opt, config_path);

    auto* scan = app.add_subcommand("scan", "error profile over a grid of N");
    scan->add_option("--grid", grid_text, "comma list or start:stop:factor");
    bind_H(scan);
    scan->add_option("--theta", cfg.theta, "H = N^theta when --H is absent")
        ->each([&cfg](const std::string&) { cfg.has_theta = true; });
    scan->add_option("--epsilon", cfg.epsilon, "window margin exponent");
    scan->add_option("--c", cfg.c, "scale constant for A(N;-c)");
    add_common(scan, cfg, k_text, format_text, workers_given, workers_opt, config_path);

    auto* identity = app.add_subcommand("identity", "check the transform identity");
    bind_N(identity, "interval base");
    bind_H(identity);
    identity->add_option("--eps-trunc", cfg.eps_trunc, "series truncation threshold");
    identity->add_option("--tolerance", cfg.tolerance, "pass threshold on |lhs-rhs|");
    add_common(identity, cfg, k_text, format_text, workers_given, workers_opt, config_path);

    auto* decompose = app.add_subcommand("decompose", "split the identity integral");
    bind_N(decompose, "interval base");
    bind_H(decompose);
    decompose->add_option("--B", cfg.B, "unconditional boundary; omit for conditional split")
        ->each([&cfg](const std::string&) { cfg.has_B = true; });
    decompose->add_option("--eps-trunc", cfg.eps_trunc, "series truncation threshold");
    decompose->add_option("--tolerance", cfg.tolerance, "pass threshold on discrepancy");
    add_common(decompose, cfg, k_text, format_text, workers_given, workers_opt, config_path);

    auto* lemma = app.add_subcommand("lemma", "measure a single lemma residual");
    lemma->add_option("name", lemma_text, "laplace|mt|tolev|lp|weighted-l2|parseval")
        ->required()
        ->check(CLI::IsMember({"laplace", "mt", "tolev", "lp", "weighted-l2", "parseval"}));
    bind_N(lemma, "scale parameter (laplace also uses it as n)");
    bind_H(lemma);
    lemma->add_option("--lambda", cfg.lambda, "power-sum exponent");
    lemma->add_option("--mu", cfg.mu, "laplace exponent");
    lemma->add_option("--X", cfg.X, "laplace half-width");
    lemma->add_option("--xi", cfg.xi, "lp interval radius")
        ->each([&cfg](const std::string&) { cfg.has_xi = true; });
    lemma->add_option("--tau", cfg.tau, "arc radius")
        ->each([&cfg](const std::string&) { cfg.has_tau = true; });
    lemma->add_option("--c", cfg.c, "scale constant for A(N;-c)");
    lemma->add_option("--eps-trunc", cfg.eps_trunc, "series truncation threshold");
    add_common(lemma, cfg, k_text, format_text, workers_given, workers_opt, config_path);

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        int cli_status = app.exit(e);
        return cli_status == 0 ? 0 : 2;
    }

    try {
        CLI::App* active = count->parsed() ? static_cast<CLI::App*>(count)
                           : interval->parsed() ? interval
                           : scan->parsed() ? scan
                           : identity->parsed() ? identity
                           : decompose->parsed() ? decompose
                                                 : lemma;
        if (!config_path.empty())
            apply_config(config_path, active, cfg, k_text, format_text, workers_given,
                         workers_opt, grid_text, lemma_text);

        parse_k(k_text, cfg);
        cfg.format = format_text == "json" ? wglab::OutputFormat::json
                                           : wglab::OutputFormat::csv;
        cfg.workers = workers_given ? workers_opt : wglab::default_worker_count();
        if (!grid_text.empty()) cfg.grid = wglab::parse_grid(grid_text);

        if (count->parsed()) cfg.command = wglab::Command::count;
        else if (interval->parsed()) cfg.command = wglab::Command::interval;
        else if (scan->parsed()) cfg.command = wglab::Command::scan;
        else if (identity->parsed()) cfg.command = wglab::Command::identity;
        else if (decompose->parsed()) cfg.command = wglab::Command::decompose;
        else cfg.command = wglab::Command::lemma;

        if (cfg.command == wglab::Command::lemma) {
            if (lemma_text == "laplace") cfg.lemma = wglab::LemmaName::laplace;
            else if (lemma_text == "mt") cfg.lemma = wglab::LemmaName::mt;
            else if (lemma_text == "tolev") cfg.lemma = wglab::LemmaName::tolev;
            else if (lemma_text == "lp") cfg.lemma = wglab::LemmaName::lp;
            else if (lemma_text == "weighted-l2") cfg.lemma = wglab::LemmaName::weighted_l2;
            else cfg.lemma = wglab::LemmaName::parseval;
        }

        return wglab::run(cfg);
    } catch (const std::invalid_argument& e) {
        return error_record("invalid_argument", e.what(), 2);
    } catch (const wglab::resource_limit_error& e) {
        return error_record("resource_limit", e.what(), 3);
    } catch (const wglab::numerical_failure& e) {
        return error_record("numerical_failure", e.what(), 3);
    } catch (const std::exception& e) {
        return error_record("runtime_error", e.what(), 4);
    }
}
