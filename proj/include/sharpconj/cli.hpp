#pragma once

#include <cstdint>
#include <optional>
#include <ostream>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>

#include "sharpconj/conjugate.hpp"
#include "sharpconj/constants.hpp"
#include "sharpconj/modulus.hpp"
#include "sharpconj/oracle.hpp"

namespace sharpconj::cli {

inline constexpr const char* kVersion = "0.1.0";

struct RunConfig {
    std::string subcommand;
    std::string modulus_dsl;
    int r = 0;
    double t = kPi;
    std::size_t n = 256;
    int restarts = 16;
    double rel_tol = 1e-9;
    std::string output_format = "plain";
    std::uint64_t seed = 42;

    int samples = 25;
    int terms = 16;
    std::string in_path;
    std::optional<double> x;
    std::string which = "m0_c";
    std::vector<double> t_grid;
};

namespace detail {

using sharpconj::detail::format_double;

struct NamedRow {
    std::string name;
    bool divergent = false;
    double value = 0.0;
    double abs_error = 0.0;
};

inline NamedRow row_from(std::string name, const ConstantResult& res) {
    if (res.divergent) return {std::move(name), true, 0.0, 0.0};
    return {std::move(name), false, res.value, res.abs_error};
}

inline nlohmann::ordered_json inputs_json(const RunConfig& cfg) {
    nlohmann::ordered_json j;
    j["subcommand"] = cfg.subcommand;
    if (!cfg.modulus_dsl.empty()) j["modulus"] = cfg.modulus_dsl;
    j["r"] = cfg.r;
    j["t"] = cfg.t;
    j["n"] = cfg.n;
    j["restarts"] = cfg.restarts;
    j["rel_tol"] = cfg.rel_tol;
    j["format"] = cfg.output_format;
    j["seed"] = cfg.seed;
    if (cfg.subcommand == "rho") j["samples"] = cfg.samples;
    if (cfg.subcommand == "series") j["terms"] = cfg.terms;
    if (cfg.subcommand == "conjugate") {
        j["in"] = cfg.in_path;
        if (cfg.x) j["x"] = *cfg.x;
    }
    if (cfg.subcommand == "verify") j["which"] = cfg.which;
    if (cfg.subcommand == "sweep") j["t_grid"] = cfg.t_grid;
    return j;
}

inline nlohmann::ordered_json meta_json(const RunConfig& cfg) {
    nlohmann::ordered_json j;
    j["version"] = kVersion;
    j["seed"] = cfg.seed;
    j["tolerances"] = {{"rel_tol", cfg.rel_tol}};
    return j;
}

inline void emit_named(const RunConfig& cfg, const std::vector<NamedRow>& rows,
                       std::ostream& out, nlohmann::ordered_json meta_extra = {}) {
    if (cfg.output_format == "json") {
        nlohmann::ordered_json j;
        j["inputs"] = inputs_json(cfg);
        auto& results = j["results"];
        results = nlohmann::ordered_json::object();
        for (const auto& row : rows) {
            if (row.divergent)
                results[row.name] = {{"value", "divergent"}, {"abs_error", nullptr}};
            else
                results[row.name] = {{"value", row.value}, {"abs_error", row.abs_error}};
        }
        j["meta"] = meta_json(cfg);
        for (auto& [key, value] : meta_extra.items()) j["meta"][key] = value;
        out << j.dump(2) << '\n';
        return;
    }
    if (cfg.output_format == "csv") {
        out << "name,value,abs_error\n";
        for (const auto& row : rows) {
            if (row.divergent)
                out << row.name << ",divergent,\n";
            else
                out << row.name << ',' << format_double(row.value) << ','
                    << format_double(row.abs_error) << '\n';
        }
        return;
    }
    for (const auto& row : rows) {
        if (row.divergent)
            out << row.name << " divergent\n";
        else
            out << row.name << ' ' << format_double(row.value) << ' '
                << format_double(row.abs_error) << '\n';
    }
}

inline int run_constants(const RunConfig& cfg, std::ostream& out) {
    const Modulus m = parse_modulus(cfg.modulus_dsl);
    std::vector<NamedRow> rows;
    rows.push_back(row_from("m0_c", m0_c(m, cfg.rel_tol)));
    rows.push_back(row_from("omega0_diff", omega0_diff(m, cfg.t, cfg.rel_tol)));
    rows.push_back(row_from("e0_sup", e0_sup(m, cfg.rel_tol)));
    if (cfg.r >= 1) rows.push_back(row_from("m_r_l", m_r_l(m, cfg.r, cfg.rel_tol)));
    if (cfg.r >= 2)
        rows.push_back(row_from("variation_sup", variation_sup(m, cfg.r, cfg.rel_tol)));
    bool divergent = false;
    for (const auto& row : rows) divergent = divergent || row.divergent;
    emit_named(cfg, rows, out);
    return divergent ? 2 : 0;
}

inline int run_rho(const RunConfig& cfg, std::ostream& out) {
    const RhoTable table = make_rho_table(cfg.t, cfg.samples, cfg.rel_tol);
    if (cfg.output_format == "csv" || cfg.output_format == "plain") {
        if (cfg.output_format == "csv") out << "x,rho,residual\n";
        const char sep = cfg.output_format == "csv" ? ',' : ' ';
        for (std::size_t i = 0; i < table.nodes.size(); ++i) {
            out << format_double(table.nodes[i].first) << sep
                << format_double(table.nodes[i].second) << sep
                << format_double(table.residuals[i]) << '\n';
        }
        return 0;
    }
    std::vector<NamedRow> rows;
    for (std::size_t i = 0; i < table.nodes.size(); ++i) {
        rows.push_back({"rho(x=" + format_double(table.nodes[i].first) + ")", false,
                        table.nodes[i].second, std::abs(table.residuals[i])});
    }
    emit_named(cfg, rows, out);
    return 0;
}

inline int run_series(const RunConfig& cfg, std::ostream& out) {
    const Modulus m = parse_modulus(cfg.modulus_dsl);
    if (cfg.r < 1) throw std::domain_error("series requires --r at least 1");
    if (cfg.terms < 1) throw std::domain_error("series requires --terms at least 1");

    std::vector<NamedRow> rows;
    double partial = 0.0, err = 0.0;
    std::vector<std::array<double, 3>> table;  // k, term, partial
    for (int i = 0; i < cfg.terms; ++i) {
        const long k = 2L * i + 1;
        const double b = b_coeff(m, k, cfg.rel_tol);
        const double sign = (std::size_t(i) * std::size_t(cfg.r + 1)) % 2 == 0 ? 1.0 : -1.0;
        const double term = 4.0 * sign * b / std::pow(double(k), cfg.r + 1);
        partial += term;
        err += std::abs(term) * cfg.rel_tol;
        table.push_back({double(k), term, partial});
        rows.push_back({"partial[" + std::to_string(k) + "]", false, partial, err});
    }

    if (cfg.output_format == "csv" || cfg.output_format == "plain") {
        if (cfg.output_format == "csv") out << "k,term,partial\n";
        const char sep = cfg.output_format == "csv" ? ',' : ' ';
        for (const auto& row : table) {
            out << long(row[0]) << sep << format_double(row[1]) << sep
                << format_double(row[2]) << '\n';
        }
        return 0;
    }
    emit_named(cfg, rows, out);
    return 0;
}

inline int run_conjugate(const RunConfig& cfg, std::ostream& out) {
    const GridFunction f = read_grid_csv(cfg.in_path);
    if (cfg.x) {
        const double v = conjugate_pv(f, *cfg.x, cfg.rel_tol);
        std::vector<NamedRow> rows{{"f_tilde(x=" + format_double(*cfg.x) + ")", false, v,
                                    cfg.rel_tol * std::abs(v) + 1e-15}};
        if (cfg.output_format == "csv") {
            out << "x,value\n" << format_double(*cfg.x) << ',' << format_double(v) << '\n';
            return 0;
        }
        if (cfg.output_format == "plain") {
            out << format_double(v) << '\n';
            return 0;
        }
        emit_named(cfg, rows, out);
        return 0;
    }

    const GridFunction g = conjugate_spectral(f);
    if (cfg.output_format == "csv" || cfg.output_format == "plain") {
        if (cfg.output_format == "csv") out << "value\n";
        for (std::size_t j = 0; j < g.n(); ++j) out << format_double(g[j]) << '\n';
        return 0;
    }
    std::vector<NamedRow> rows;
    for (std::size_t j = 0; j < g.n(); ++j)
        rows.push_back({"f_tilde[" + std::to_string(j) + "]", false, g[j], 0.0});
    emit_named(cfg, rows, out);
    return 0;
}

inline const char* method_name(OracleMethod m) {
    switch (m) {
        case OracleMethod::lp_tightening: return "lp_tightening";
        case OracleMethod::random_envelope: return "random_envelope";
        case OracleMethod::hybrid: return "hybrid";
    }
    return "hybrid";
}

inline int run_verify(const RunConfig& cfg, std::ostream& out) {
    const Modulus m = parse_modulus(cfg.modulus_dsl);
    WhichConstant which;
    if (cfg.which == "m0_c") {
        which = WhichConstant::m0_c();
    } else if (cfg.which == "omega0_diff") {
        which = WhichConstant::omega0_diff(cfg.t);
    } else if (cfg.which == "m_r_l") {
        if (cfg.r < 1) throw std::domain_error("verify --which m_r_l requires --r at least 1");
        which = WhichConstant::m_r_l(cfg.r);
    } else {
        throw std::invalid_argument("unknown --which value: " + cfg.which +
                                    " (expected m0_c, omega0_diff, or m_r_l)");
    }

    const OracleReport report = verify_constant(m, which, cfg.n, cfg.restarts, cfg.seed);

    std::vector<NamedRow> rows;
    if (report.target_divergent) {
        rows.push_back({"target", true, 0.0, 0.0});
        for (const auto& [grid, value] : report.growth_ladder)
            rows.push_back({"empirical_best[n=" + std::to_string(grid) + "]", false, value,
                            0.0});
    } else {
        rows.push_back({"target", false, report.target_constant, 0.0});
        rows.push_back({"empirical_best", false, report.empirical_best, 0.0});
        rows.push_back({"gap_relative", false, report.gap_relative, 0.0});
    }

    nlohmann::ordered_json extra;
    extra["method"] = method_name(report.method);
    extra["n_grid"] = report.n_grid;
    extra["restarts"] = cfg.restarts;
    if (cfg.output_format == "json") extra["achiever"] = report.achiever.values();
    emit_named(cfg, rows, out, extra);
    return report.target_divergent ? 2 : 0;
}

inline int run_sweep(const RunConfig& cfg, std::ostream& out) {
    const Modulus m = parse_modulus(cfg.modulus_dsl);
    std::vector<double> grid = cfg.t_grid;
    if (grid.empty()) {
        for (int i = 0; i <= 16; ++i) grid.push_back(kPi * double(i) / 16.0);
    }

    std::vector<NamedRow> rows;
    bool divergent = false;
    for (double t : grid) {
        auto row = row_from("omega0_diff(t=" + format_double(t) + ")",
                            omega0_diff(m, t, cfg.rel_tol));
        divergent = divergent || row.divergent;
        rows.push_back(std::move(row));
    }

    if (cfg.output_format == "csv" || cfg.output_format == "plain") {
        if (cfg.output_format == "csv") out << "t,value,abs_error\n";
        const char sep = cfg.output_format == "csv" ? ',' : ' ';
        for (std::size_t i = 0; i < grid.size(); ++i) {
            out << format_double(grid[i]) << sep;
            if (rows[i].divergent)
                out << "divergent" << sep << '\n';
            else
                out << format_double(rows[i].value) << sep
                    << format_double(rows[i].abs_error) << '\n';
        }
        return divergent ? 2 : 0;
    }
    emit_named(cfg, rows, out);
    return divergent ? 2 : 0;
}

}  // namespace detail

// Front end entry point; `args` excludes the program name. Returns the
// process exit code: 0 success, 1 invalid input, 2 divergent result.
inline int run(const std::vector<std::string>& args, std::ostream& out,
               std::ostream& err) {
    RunConfig cfg;
    CLI::App app{"sharp constants for trigonometrically conjugate function classes"};
    app.require_subcommand(1);

    const auto add_common = [&](CLI::App* sub) {
        sub->add_option("--rel-tol", cfg.rel_tol, "relative quadrature tolerance")
            ->check(CLI::PositiveNumber);
        sub->add_option("--format", cfg.output_format, "output format")
            ->check(CLI::IsMember({"json", "csv", "plain"}));
        sub->add_option("--seed", cfg.seed, "random seed");
    };

    CLI::App* constants = app.add_subcommand("constants", "compute the class constants");
    constants->add_option("--modulus", cfg.modulus_dsl, "modulus DSL, e.g. lip:1")->required();
    constants->add_option("--r", cfg.r, "derivative order for the L-metric constants");
    constants->add_option("--t", cfg.t, "shift for the difference constant");
    add_common(constants);

    CLI::App* rho_cmd = app.add_subcommand("rho", "tabulate the kernel pairing map");
    rho_cmd->add_option("--t", cfg.t, "interval parameter in (0, 2*pi)")->required();
    rho_cmd->add_option("--samples", cfg.samples, "number of interior samples")
        ->check(CLI::PositiveNumber);
    add_common(rho_cmd);

    CLI::App* series = app.add_subcommand("series", "partial sums of the L-metric series");
    series->add_option("--modulus", cfg.modulus_dsl, "modulus DSL")->required();
    series->add_option("--r", cfg.r, "derivative order")->required();
    series->add_option("--terms", cfg.terms, "number of partial sums");
    add_common(series);

    CLI::App* conj = app.add_subcommand("conjugate", "conjugate a sampled function");
    conj->add_option("--in", cfg.in_path, "grid file, one sample per line")->required();
    conj->add_option("--x", cfg.x, "evaluate at a single point via the kernel");
    add_common(conj);

    CLI::App* verify = app.add_subcommand("verify", "search for near-extremal functions");
    verify->add_option("--modulus", cfg.modulus_dsl, "modulus DSL")->required();
    verify->add_option("--which", cfg.which, "target constant")->required();
    verify->add_option("--n", cfg.n, "grid size");
    verify->add_option("--restarts", cfg.restarts, "random restarts");
    verify->add_option("--t", cfg.t, "shift for omega0_diff");
    verify->add_option("--r", cfg.r, "order for m_r_l");
    add_common(verify);

    CLI::App* sweep = app.add_subcommand("sweep", "difference constant over a shift grid");
    sweep->add_option("--modulus", cfg.modulus_dsl, "modulus DSL")->required();
    sweep->add_option("--t-grid", cfg.t_grid, "shift values")->expected(-1);
    add_common(sweep);

    try {
        std::vector<std::string> reversed(args.rbegin(), args.rend());
        app.parse(reversed);
    } catch (const CLI::CallForHelp&) {
        out << app.help();
        return 0;
    } catch (const CLI::ParseError& e) {
        err << "error: " << e.what() << '\n' << app.help();
        return 1;
    }

    try {
        if (app.got_subcommand(constants)) {
            cfg.subcommand = "constants";
            return detail::run_constants(cfg, out);
        }
        if (app.got_subcommand(rho_cmd)) {
            cfg.subcommand = "rho";
            return detail::run_rho(cfg, out);
        }
        if (app.got_subcommand(series)) {
            cfg.subcommand = "series";
            return detail::run_series(cfg, out);
        }
        if (app.got_subcommand(conj)) {
            cfg.subcommand = "conjugate";
            return detail::run_conjugate(cfg, out);
        }
        if (app.got_subcommand(verify)) {
            cfg.subcommand = "verify";
            return detail::run_verify(cfg, out);
        }
        cfg.subcommand = "sweep";
        return detail::run_sweep(cfg, out);
    } catch (const std::exception& e) {
        err << "error: " << e.what() << '\n';
        return 1;
    }
}

}  // namespace sharpconj::cli
