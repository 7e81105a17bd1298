#pragma once

// Run configuration shared by all CLI commands.
//
// Values resolve in three layers: built-in defaults, then a `key = value`
// config file (--config PATH), then explicit command-line flags.  Every
// report embeds the fully resolved configuration for auditability.

#include <cctype>
#include <fstream>
#include <stdexcept>
#include <string>
#include <vector>

#include "jsonw.hpp"
#include "parse.hpp"
#include "weight.hpp"

namespace fock {

struct RunConfig {
    double r = 1.0;    // Gaussian weight rate
    long N = 32;       // truncation degree
    double tol = 1e-8; // residual tolerance for verification checks
    std::vector<cplx> grid;  // kernel-parameter grid (K and PK families)
    long pk_powers = 3;      // PK family uses z^j e_w for j = 0..pk_powers
    long radial_nodes = 40;  // quadrature radial node count
    long angles = 128;       // quadrature angular node count
    std::string format = "json";  // json | csv
    std::string out;              // output path; empty = stdout

    GaussWeight weight() const { return GaussWeight{r}; }
};

inline std::vector<cplx> default_grid() {
    return {cplx{0.0, 0.0}, cplx{0.5, 0.0}, cplx{-0.5, 0.0},
            cplx{0.0, 0.5}, cplx{0.0, -0.5}, cplx{0.7, 0.3}};
}

inline RunConfig default_config() {
    RunConfig c;
    c.grid = default_grid();
    return c;
}

inline void validate_config(const RunConfig& c) {
    if (!(c.r > 0.0)) throw std::invalid_argument("config: r must be positive");
    if (c.N < 1) throw std::invalid_argument("config: N must be >= 1");
    if (!(c.tol > 0.0)) throw std::invalid_argument("config: tol must be positive");
    if (c.grid.empty()) throw std::invalid_argument("config: grid must be nonempty");
    if (c.pk_powers < 0) throw std::invalid_argument("config: pk-powers must be >= 0");
    if (c.radial_nodes < 2) throw std::invalid_argument("config: radial-nodes must be >= 2");
    if (c.angles < 4) throw std::invalid_argument("config: angles must be >= 4");
    if (c.format != "json" && c.format != "csv")
        throw std::invalid_argument("config: format must be json or csv");
}

namespace detail {

inline std::string trim(const std::string& s) {
    std::size_t b = 0, e = s.size();
    while (b < e && std::isspace(static_cast<unsigned char>(s[b]))) ++b;
    while (e > b && std::isspace(static_cast<unsigned char>(s[e - 1]))) --e;
    return s.substr(b, e - b);
}

inline double to_double(const std::string& v, const std::string& key) {
    std::size_t used = 0;
    double x = 0.0;
    try {
        x = std::stod(v, &used);
    } catch (const std::exception&) {
        throw std::invalid_argument("config: bad numeric value for " + key + ": '" + v + "'");
    }
    if (used != v.size())
        throw std::invalid_argument("config: bad numeric value for " + key + ": '" + v + "'");
    return x;
}

inline long to_long(const std::string& v, const std::string& key) {
    std::size_t used = 0;
    long x = 0;
    try {
        x = std::stol(v, &used);
    } catch (const std::exception&) {
        throw std::invalid_argument("config: bad integer value for " + key + ": '" + v + "'");
    }
    if (used != v.size())
        throw std::invalid_argument("config: bad integer value for " + key + ": '" + v + "'");
    return x;
}

}  // namespace detail

// Applies one key/value pair (keys match the long flag names without "--").
inline void apply_config_value(RunConfig& c, const std::string& key, const std::string& value) {
    if (key == "r")
        c.r = detail::to_double(value, key);
    else if (key == "N")
        c.N = detail::to_long(value, key);
    else if (key == "tol")
        c.tol = detail::to_double(value, key);
    else if (key == "grid")
        c.grid = parse_complex_list(value);
    else if (key == "pk-powers")
        c.pk_powers = detail::to_long(value, key);
    else if (key == "radial-nodes")
        c.radial_nodes = detail::to_long(value, key);
    else if (key == "angles")
        c.angles = detail::to_long(value, key);
    else if (key == "format")
        c.format = value;
    else if (key == "out")
        c.out = value;
    else
        throw std::invalid_argument("config: unknown key '" + key + "'");
}

inline void load_config_file(RunConfig& c, const std::string& path) {
    std::ifstream f(path);
    if (!f) throw std::invalid_argument("config: cannot open file: " + path);
    std::string line;
    long lineno = 0;
    while (std::getline(f, line)) {
        ++lineno;
        const std::string t = detail::trim(line);
        if (t.empty() || t[0] == '#') continue;
        const std::size_t eq = t.find('=');
        if (eq == std::string::npos)
            throw std::invalid_argument(path + ":" + std::to_string(lineno) +
                                        ": expected 'key = value', got '" + t + "'");
        const std::string key = detail::trim(t.substr(0, eq));
        const std::string value = detail::trim(t.substr(eq + 1));
        if (key.empty())
            throw std::invalid_argument(path + ":" + std::to_string(lineno) + ": empty key");
        try {
            apply_config_value(c, key, value);
        } catch (const ParseError& e) {
            throw std::invalid_argument(path + ":" + std::to_string(lineno) + ": " + e.what());
        } catch (const std::invalid_argument& e) {
            throw std::invalid_argument(path + ":" + std::to_string(lineno) + ": " + e.what());
        }
    }
}

// Embeds the resolved configuration under the current object position.
inline void write_config_json(JsonWriter& w, const RunConfig& c) {
    w.begin_object();
    w.key("r").number(c.r);
    w.key("N").integer(c.N);
    w.key("tol").number(c.tol);
    w.key("grid").begin_array();
    for (const cplx& z : c.grid) w.complex_value(z);
    w.end_array();
    w.key("pk_powers").integer(c.pk_powers);
    w.key("radial_nodes").integer(c.radial_nodes);
    w.key("angles").integer(c.angles);
    w.key("format").string(c.format);
    w.key("out").string(c.out);
    w.end_object();
}

}  // namespace fock
