#pragma once

/*
 * File formats and run configuration.
 *
 * Config files are flat key=value text; list values use brackets
 * (x=[1, 2]). Unknown keys, malformed numbers, and duplicate keys fail with
 * a line-numbered diagnostic. serialize_config(parse_config(text)) is the
 * identity on parsed values because every real is printed with 17
 * significant digits.
 *
 * Weyl-series files carry one header line "d sheet order nu M" followed by
 * one series coefficient per line. CSV files are plain comma-separated with
 * one header row; read_csv accepts anything write_csv emits.
 */

#include <cstdio>
#include <fstream>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include "errors.hpp"
#include "flow.hpp"
#include "model.hpp"
#include "real.hpp"
#include "spectral.hpp"

namespace cf {

/* Shortest fixed-precision form that reproduces the double exactly. */
inline std::string fmt_real(Real v) {
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.17g", static_cast<double>(v));
    return buf;
}

struct RunConfig {
    Real nu = 1;
    Real beta_plus = 0;
    std::optional<Real> beta_minus; /* default: beta_plus + 1 */
    std::optional<Real> C;          /* default: (beta_- + beta_+)/(2 nu) * total mass */
    std::vector<Real> x;
    std::vector<Real> m;
    Real t0 = 0;
    Real t_end = 10;
    IntegratorConfig integ;
    int weyl_order = 0; /* 0 means automatic (2d) */
    std::string out_dir = ".";
    std::string format = "csv";

    ModelParams params() const { return ModelParams::make(nu, beta_plus, m, C, beta_minus); }
    PeakonState state() const { return PeakonState::make(t0, x, m); }
};

namespace detail {

inline std::string trimmed(const std::string& s) {
    const std::size_t a = s.find_first_not_of(" \t\r");
    if (a == std::string::npos) return "";
    const std::size_t b = s.find_last_not_of(" \t\r");
    return s.substr(a, b - a + 1);
}

inline Real parse_real(const std::string& tok, int line) {
    const std::string t = trimmed(tok);
    char* end = nullptr;
    const double v = std::strtod(t.c_str(), &end);
    if (t.empty() || end != t.c_str() + t.size())
        throw ConfigError("line " + std::to_string(line) + ": bad number '" + t + "'");
    return static_cast<Real>(v);
}

inline std::vector<Real> parse_list(const std::string& tok, int line) {
    const std::string t = trimmed(tok);
    if (t.size() < 2 || t.front() != '[' || t.back() != ']')
        throw ConfigError("line " + std::to_string(line) + ": expected a [..] list");
    std::vector<Real> out;
    std::string body = t.substr(1, t.size() - 2);
    std::stringstream ss(body);
    std::string item;
    while (std::getline(ss, item, ','))
        if (!trimmed(item).empty()) out.push_back(parse_real(item, line));
    if (out.empty()) throw ConfigError("line " + std::to_string(line) + ": empty list");
    return out;
}

}  // namespace detail

inline RunConfig parse_config(std::istream& in) {
    RunConfig cfg;
    std::vector<std::string> seen;
    std::string line;
    int lineno = 0;
    bool have_x = false, have_m = false;
    while (std::getline(in, line)) {
        ++lineno;
        const std::size_t hash = line.find('#');
        if (hash != std::string::npos) line.resize(hash);
        const std::string stripped = detail::trimmed(line);
        if (stripped.empty()) continue;
        const std::size_t eq = stripped.find('=');
        if (eq == std::string::npos)
            throw ConfigError("line " + std::to_string(lineno) + ": expected key=value");
        const std::string key = detail::trimmed(stripped.substr(0, eq));
        const std::string val = detail::trimmed(stripped.substr(eq + 1));
        for (const std::string& s : seen)
            if (s == key) throw ConfigError("line " + std::to_string(lineno) + ": duplicate key '" + key + "'");
        seen.push_back(key);

        if (key == "nu") cfg.nu = detail::parse_real(val, lineno);
        else if (key == "beta_plus") cfg.beta_plus = detail::parse_real(val, lineno);
        else if (key == "beta_minus") cfg.beta_minus = detail::parse_real(val, lineno);
        else if (key == "C") cfg.C = detail::parse_real(val, lineno);
        else if (key == "x") { cfg.x = detail::parse_list(val, lineno); have_x = true; }
        else if (key == "m") { cfg.m = detail::parse_list(val, lineno); have_m = true; }
        else if (key == "t0") cfg.t0 = detail::parse_real(val, lineno);
        else if (key == "t_end") cfg.t_end = detail::parse_real(val, lineno);
        else if (key == "rel_tol") cfg.integ.rel_tol = detail::parse_real(val, lineno);
        else if (key == "abs_tol") cfg.integ.abs_tol = detail::parse_real(val, lineno);
        else if (key == "max_step") cfg.integ.max_step = detail::parse_real(val, lineno);
        else if (key == "collision_gap") cfg.integ.collision_gap = detail::parse_real(val, lineno);
        else if (key == "mass_cap") cfg.integ.mass_cap = detail::parse_real(val, lineno);
        else if (key == "weyl_order") cfg.weyl_order = static_cast<int>(detail::parse_real(val, lineno));
        else if (key == "out") cfg.out_dir = val;
        else if (key == "format") {
            if (val != "csv" && val != "json")
                throw ConfigError("line " + std::to_string(lineno) + ": format must be csv or json");
            cfg.format = val;
        } else {
            throw ConfigError("line " + std::to_string(lineno) + ": unknown key '" + key + "'");
        }
    }
    if (!have_x || !have_m) throw ConfigError("config: keys x and m are required");
    if (cfg.x.size() != cfg.m.size())
        throw ConfigError("config: x and m must have the same length");
    return cfg;
}

inline RunConfig parse_config(const std::string& text) {
    std::istringstream in(text);
    return parse_config(in);
}

inline RunConfig load_config(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw ConfigError("cannot open config file: " + path);
    return parse_config(in);
}

inline std::string serialize_config(const RunConfig& cfg) {
    std::ostringstream out;
    auto list = [](const std::vector<Real>& v) {
        std::string s = "[";
        for (std::size_t i = 0; i < v.size(); ++i) s += (i ? ", " : "") + fmt_real(v[i]);
        return s + "]";
    };
    out << "nu=" << fmt_real(cfg.nu) << "\n";
    out << "beta_plus=" << fmt_real(cfg.beta_plus) << "\n";
    if (cfg.beta_minus) out << "beta_minus=" << fmt_real(*cfg.beta_minus) << "\n";
    if (cfg.C) out << "C=" << fmt_real(*cfg.C) << "\n";
    out << "x=" << list(cfg.x) << "\n";
    out << "m=" << list(cfg.m) << "\n";
    out << "t0=" << fmt_real(cfg.t0) << "\n";
    out << "t_end=" << fmt_real(cfg.t_end) << "\n";
    out << "rel_tol=" << fmt_real(cfg.integ.rel_tol) << "\n";
    out << "abs_tol=" << fmt_real(cfg.integ.abs_tol) << "\n";
    out << "max_step=" << fmt_real(cfg.integ.max_step) << "\n";
    out << "collision_gap=" << fmt_real(cfg.integ.collision_gap) << "\n";
    out << "mass_cap=" << fmt_real(cfg.integ.mass_cap) << "\n";
    if (cfg.weyl_order != 0) out << "weyl_order=" << cfg.weyl_order << "\n";
    out << "out=" << cfg.out_dir << "\n";
    out << "format=" << cfg.format << "\n";
    return out.str();
}

/* ---- CSV ---- */

struct CsvTable {
    std::vector<std::string> header;
    std::vector<std::vector<Real>> rows;
};

inline void write_csv(std::ostream& out, const std::vector<std::string>& header,
                      const std::vector<std::vector<Real>>& rows) {
    for (std::size_t i = 0; i < header.size(); ++i) out << (i ? "," : "") << header[i];
    out << "\n";
    for (const std::vector<Real>& row : rows) {
        for (std::size_t i = 0; i < row.size(); ++i) out << (i ? "," : "") << fmt_real(row[i]);
        out << "\n";
    }
}

inline void write_csv(const std::string& path, const std::vector<std::string>& header,
                      const std::vector<std::vector<Real>>& rows) {
    std::ofstream out(path);
    if (!out) throw ConfigError("cannot open for writing: " + path);
    write_csv(out, header, rows);
}

inline CsvTable read_csv(std::istream& in) {
    CsvTable t;
    std::string line;
    int lineno = 0;
    while (std::getline(in, line)) {
        ++lineno;
        if (detail::trimmed(line).empty()) continue;
        std::vector<std::string> cells;
        std::stringstream ss(line);
        std::string cell;
        while (std::getline(ss, cell, ',')) cells.push_back(detail::trimmed(cell));
        if (lineno == 1) {
            t.header = cells;
            continue;
        }
        std::vector<Real> row;
        row.reserve(cells.size());
        for (const std::string& c : cells) row.push_back(detail::parse_real(c, lineno));
        if (row.size() != t.header.size())
            throw ConfigError("csv line " + std::to_string(lineno) + ": wrong column count");
        t.rows.push_back(std::move(row));
    }
    return t;
}

inline CsvTable read_csv(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw ConfigError("cannot open csv file: " + path);
    return read_csv(in);
}

/* ---- Weyl-series files ---- */

struct WeylFile {
    int d = 0;
    Sheet sheet = Sheet::upper;
    int order = 0;
    Real nu = 1;
    Real M = 0;
    std::vector<Real> coeffs;

    WeylSeries series() const { return WeylSeries{PowerSeries(coeffs, order), sheet, order}; }
};

inline void write_weyl(std::ostream& out, const WeylSeries& W, int d, Real nu, Real M) {
    out << d << " " << (W.sheet == Sheet::upper ? "upper" : "lower") << " " << W.order << " "
        << fmt_real(nu) << " " << fmt_real(M) << "\n";
    for (Real c : W.series.coeffs()) out << fmt_real(c) << "\n";
}

inline void write_weyl(const std::string& path, const WeylSeries& W, int d, Real nu, Real M) {
    std::ofstream out(path);
    if (!out) throw ConfigError("cannot open for writing: " + path);
    write_weyl(out, W, d, nu, M);
}

inline WeylFile read_weyl(std::istream& in) {
    WeylFile f;
    std::string sheet_tok;
    if (!(in >> f.d >> sheet_tok >> f.order >> f.nu >> f.M))
        throw ConfigError("weyl file: bad header, expected 'd sheet order nu M'");
    if (sheet_tok == "upper") f.sheet = Sheet::upper;
    else if (sheet_tok == "lower") f.sheet = Sheet::lower;
    else throw ConfigError("weyl file: sheet must be 'upper' or 'lower'");
    if (f.d < 1 || f.order < 1) throw ConfigError("weyl file: d and order must be positive");
    Real c;
    while (in >> c) f.coeffs.push_back(c);
    if (static_cast<int>(f.coeffs.size()) < f.order)
        throw ConfigError("weyl file: insufficient coefficients (" +
                          std::to_string(f.coeffs.size()) + " of " + std::to_string(f.order) + ")");
    if (static_cast<int>(f.coeffs.size()) > f.order) f.coeffs.resize(static_cast<std::size_t>(f.order));
    if (f.order < 2 * f.d)
        throw ConfigError("weyl file: insufficient coefficients for d=" + std::to_string(f.d) +
                          " (need 2d)");
    return f;
}

inline WeylFile read_weyl(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw ConfigError("cannot open weyl file: " + path);
    return read_weyl(in);
}

}  // namespace cf
