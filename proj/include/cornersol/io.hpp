#pragma once

#include <cctype>
#include <charconv>
#include <cstdint>
#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <numbers>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include "cornersol/errors.hpp"
#include "cornersol/geometry.hpp"

namespace cornersol {

/// Shortest round-trippable decimal text of a double (17 significant digits).
inline std::string format_double(double v) {
    char buf[64];
    std::snprintf(buf, sizeof(buf), "%.17g", v);
    return buf;
}

namespace io_detail {

inline std::string trim(const std::string& s) {
    std::size_t a = 0, b = s.size();
    while (a < b && std::isspace(static_cast<unsigned char>(s[a]))) ++a;
    while (b > a && std::isspace(static_cast<unsigned char>(s[b - 1]))) --b;
    return s.substr(a, b - a);
}

inline bool parse_int64(const std::string& s, std::int64_t& out) {
    const char* first = s.data();
    const char* last = s.data() + s.size();
    const auto res = std::from_chars(first, last, out);
    return res.ec == std::errc() && res.ptr == last;
}

inline bool parse_plain_double(const std::string& s, double& out) {
    if (s.empty()) return false;
    char* end = nullptr;
    out = std::strtod(s.c_str(), &end);
    return end == s.c_str() + s.size();
}

}  // namespace io_detail

/// Parse an angle written either as a decimal in radians or as an exact
/// rational multiple of pi: "pi", "3pi/2", "2*pi/3", "pi/4", "3*pi".
inline Angle parse_angle(const std::string& text) {
    const std::string s = io_detail::trim(text);
    const std::size_t pos = s.find("pi");
    if (pos == std::string::npos) {
        double v = 0.0;
        if (!io_detail::parse_plain_double(s, v))
            throw ValidationError("cannot parse angle: '" + text + "'");
        return Angle::radians(v);
    }
    std::string head = io_detail::trim(s.substr(0, pos));
    std::string tail = io_detail::trim(s.substr(pos + 2));
    if (!head.empty() && head.back() == '*') head = io_detail::trim(head.substr(0, head.size() - 1));
    std::int64_t num = 1;
    if (!head.empty()) {
        if (head == "-") {
            num = -1;
        } else if (!io_detail::parse_int64(head, num)) {
            throw ValidationError("cannot parse angle: '" + text + "'");
        }
    }
    std::int64_t den = 1;
    if (!tail.empty()) {
        if (tail.front() != '/') throw ValidationError("cannot parse angle: '" + text + "'");
        const std::string den_text = io_detail::trim(tail.substr(1));
        if (!io_detail::parse_int64(den_text, den) || den == 0)
            throw ValidationError("cannot parse angle: '" + text + "'");
    }
    return Angle::pi_times(num, den);
}

/// Canonical text of an angle; exact pi-rationals render as "<k>pi/<m>".
inline std::string format_angle(const Angle& a) {
    if (a.is_pi_rational()) {
        const Rational& f = *a.pi_fraction();
        std::string s;
        if (f.num == -1)
            s = "-pi";
        else if (f.num == 1)
            s = "pi";
        else
            s = std::to_string(f.num) + "pi";
        if (f.den != 1) s += "/" + std::to_string(f.den);
        return s;
    }
    return format_double(a.value());
}

/// Run configuration shared by the CLI subcommands; parsed from a simple
/// "key = value" document and serializable back to canonical form.
struct RunConfig {
    std::string problem = "laplace";  // laplace | stokes
    Angle omega = Angle::pi_times(3, 2);
    std::optional<double> lambda;
    std::optional<std::string> bc;  // dd | nn | dn
    std::optional<std::int64_t> k;
    std::optional<double> xi;
    double r0 = 0.25;
    double r1 = 0.75;
    std::string profile = "quintic";  // quintic | exp
    std::string out = ".";
    double tol = 1e-10;
};

inline void validate_config(const RunConfig& c) {
    if (c.problem != "laplace" && c.problem != "stokes")
        throw ValidationError("field 'problem' must be 'laplace' or 'stokes'");
    const double w = c.omega.value();
    if (!(w > 0.0) || w > 2.0 * std::numbers::pi + 1e-15)
        throw ValidationError("field 'omega' must lie in (0, 2*pi]");
    if (c.bc && *c.bc != "dd" && *c.bc != "nn" && *c.bc != "dn")
        throw ValidationError("field 'bc' must be one of dd, nn, dn");
    if (!(c.r0 > 0.0) || !(c.r1 > c.r0))
        throw ValidationError("fields 'r0', 'r1' must satisfy 0 < r0 < r1");
    if (c.profile != "quintic" && c.profile != "exp")
        throw ValidationError("field 'profile' must be 'quintic' or 'exp'");
    if (!(c.tol > 0.0)) throw ValidationError("field 'tol' must be positive");
    if (c.xi && !(*c.xi > 0.0)) throw ValidationError("field 'xi' must be positive");
}

/// Parse a "key = value" config document. Unknown keys are rejected;
/// malformed lines carry their position in the error.
inline RunConfig parse_config(const std::string& text) {
    RunConfig cfg;
    std::istringstream in(text);
    std::string line;
    int line_no = 0;
    while (std::getline(in, line)) {
        ++line_no;
        const std::size_t hash = line.find('#');
        if (hash != std::string::npos) line = line.substr(0, hash);
        if (io_detail::trim(line).empty()) continue;
        const std::size_t eq = line.find('=');
        if (eq == std::string::npos)
            throw ParseError("expected 'key = value'", line_no, static_cast<int>(line.size()) + 1);
        const std::string key = io_detail::trim(line.substr(0, eq));
        const std::string value = io_detail::trim(line.substr(eq + 1));
        if (key.empty()) throw ParseError("missing key", line_no, 1);
        if (value.empty())
            throw ParseError("missing value for '" + key + "'", line_no,
                             static_cast<int>(eq) + 2);

        const auto as_double = [&](const char* field) {
            double v = 0.0;
            if (!io_detail::parse_plain_double(value, v))
                throw ValidationError(std::string("field '") + field + "' expects a number");
            return v;
        };
        if (key == "problem")
            cfg.problem = value;
        else if (key == "omega")
            cfg.omega = parse_angle(value);
        else if (key == "lambda")
            cfg.lambda = as_double("lambda");
        else if (key == "bc")
            cfg.bc = value;
        else if (key == "k") {
            std::int64_t v = 0;
            if (!io_detail::parse_int64(value, v))
                throw ValidationError("field 'k' expects an integer");
            cfg.k = v;
        } else if (key == "xi")
            cfg.xi = as_double("xi");
        else if (key == "r0")
            cfg.r0 = as_double("r0");
        else if (key == "r1")
            cfg.r1 = as_double("r1");
        else if (key == "profile")
            cfg.profile = value;
        else if (key == "out")
            cfg.out = value;
        else if (key == "tol")
            cfg.tol = as_double("tol");
        else
            throw ValidationError("unknown config key '" + key + "'");
    }
    validate_config(cfg);
    return cfg;
}

/// Canonical serialization; parse(emit(c)) == c for valid configs.
inline std::string emit_config(const RunConfig& c) {
    std::ostringstream out;
    out << "problem = " << c.problem << "\n";
    out << "omega = " << format_angle(c.omega) << "\n";
    if (c.lambda) out << "lambda = " << format_double(*c.lambda) << "\n";
    if (c.bc) out << "bc = " << *c.bc << "\n";
    if (c.k) out << "k = " << *c.k << "\n";
    if (c.xi) out << "xi = " << format_double(*c.xi) << "\n";
    out << "r0 = " << format_double(c.r0) << "\n";
    out << "r1 = " << format_double(c.r1) << "\n";
    out << "profile = " << c.profile << "\n";
    out << "out = " << c.out << "\n";
    out << "tol = " << format_double(c.tol) << "\n";
    return out.str();
}

/// CSV with header, LF endings, 17-digit floats (pre-rendered by caller).
inline void emit_table(const std::string& path, const std::vector<std::string>& columns,
                       const std::vector<std::vector<std::string>>& rows) {
    std::ofstream out(path, std::ios::binary);  // binary: keep LF on every platform
    if (!out) throw ValidationError("cannot open '" + path + "' for writing");
    for (std::size_t i = 0; i < columns.size(); ++i) {
        if (i) out << ',';
        out << columns[i];
    }
    out << '\n';
    for (const auto& row : rows) {
        if (row.size() != columns.size())
            throw ValidationError("row arity does not match schema in '" + path + "'");
        for (std::size_t i = 0; i < row.size(); ++i) {
            if (i) out << ',';
            out << row[i];
        }
        out << '\n';
    }
    if (!out.good()) throw ValidationError("write failed for '" + path + "'");
}

struct Table {
    std::vector<std::string> columns;
    std::vector<std::vector<std::string>> rows;
};

inline Table parse_table(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw ValidationError("cannot open '" + path + "' for reading");
    Table t;
    std::string line;
    bool first = true;
    while (std::getline(in, line)) {
        if (!line.empty() && line.back() == '\r') line.pop_back();
        if (line.empty()) continue;
        std::vector<std::string> cells;
        std::size_t start = 0;
        while (true) {
            const std::size_t comma = line.find(',', start);
            if (comma == std::string::npos) {
                cells.push_back(line.substr(start));
                break;
            }
            cells.push_back(line.substr(start, comma - start));
            start = comma + 1;
        }
        if (first) {
            t.columns = std::move(cells);
            first = false;
        } else {
            t.rows.push_back(std::move(cells));
        }
    }
    return t;
}

}  // namespace cornersol
