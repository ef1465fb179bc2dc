#pragma once

// Text emission: 17-significant-digit numbers, CSV tables, and JSON
// printed with the same number format so every output is byte-stable.

#include <cmath>
#include <complex>
#include <cstdio>
#include <cstdlib>
#include <istream>
#include <ostream>
#include <sstream>
#include <string>
#include <vector>

#include "json.hpp"

#include "arithmetic.hpp"
#include "errors.hpp"

namespace motohashi {

using Json = nlohmann::ordered_json;

/// %.17g, lossless for binary64; non-finite values print as nan/inf.
inline std::string format_number(double v) {
    if (std::isnan(v)) return "nan";
    if (std::isinf(v)) return v > 0 ? "inf" : "-inf";
    if (v == 0.0) v = 0.0;  // print -0 as 0
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.17g", v);
    return buf;
}

inline double parse_number(const std::string& text) {
    if (text == "nan") return NAN;
    if (text == "inf") return INFINITY;
    if (text == "-inf") return -INFINITY;
    char* end = nullptr;
    const double v = std::strtod(text.c_str(), &end);
    if (text.empty() || end != text.c_str() + text.size()) fail(ErrorKind::parse, "not a number: '" + text + "'");
    return v;
}

namespace detail {

inline void write_json_string(std::ostream& out, const std::string& s) { out << Json(s).dump(); }

inline void write_json(std::ostream& out, const Json& j, int indent, int depth) {
    const std::string pad(static_cast<std::size_t>(indent * (depth + 1)), ' ');
    const std::string close_pad(static_cast<std::size_t>(indent * depth), ' ');
    const char* nl = indent > 0 ? "\n" : "";
    switch (j.type()) {
        case Json::value_t::object: {
            if (j.empty()) {
                out << "{}";
                return;
            }
            out << '{' << nl;
            bool first = true;
            for (auto it = j.begin(); it != j.end(); ++it) {
                if (!first) out << ',' << nl;
                first = false;
                out << pad;
                write_json_string(out, it.key());
                out << (indent > 0 ? ": " : ":");
                write_json(out, it.value(), indent, depth + 1);
            }
            out << nl << close_pad << '}';
            return;
        }
        case Json::value_t::array: {
            if (j.empty()) {
                out << "[]";
                return;
            }
            out << '[' << nl;
            for (std::size_t i = 0; i < j.size(); ++i) {
                if (i) out << ',' << nl;
                out << pad;
                write_json(out, j[i], indent, depth + 1);
            }
            out << nl << close_pad << ']';
            return;
        }
        case Json::value_t::number_float: {
            const double v = j.get<double>();
            if (std::isfinite(v)) out << format_number(v);
            else out << "null";
            return;
        }
        default: out << j.dump();
    }
}

}  // namespace detail

/// JSON text with floats at 17 significant digits (non-finite as null).
inline std::string dump_json(const Json& j, int indent = 2) {
    std::ostringstream out;
    detail::write_json(out, j, indent, 0);
    out << '\n';
    return out.str();
}

inline Json complex_json(Complex z) { return Json{{"re", z.real()}, {"im", z.imag()}}; }

/// Comma-separated table with a header row; cells are preformatted.
class CsvWriter {
public:
    CsvWriter(std::ostream& out, const std::vector<std::string>& header) : out_(out), width_(header.size()) { row(header); }

    void row(const std::vector<std::string>& cells) {
        require(cells.size() == width_, "CSV row width does not match the header");
        for (std::size_t i = 0; i < cells.size(); ++i) out_ << (i ? "," : "") << cells[i];
        out_ << '\n';
    }

private:
    std::ostream& out_;
    std::size_t width_;
};

struct CsvTable {
    std::vector<std::string> header;
    std::vector<std::vector<std::string>> rows;

    std::size_t column(const std::string& name) const {
        for (std::size_t i = 0; i < header.size(); ++i)
            if (header[i] == name) return i;
        fail(ErrorKind::parse, "CSV has no column '" + name + "'");
    }
};

inline std::vector<std::string> split_csv_line(const std::string& line) {
    std::vector<std::string> cells;
    std::string cell;
    std::istringstream in(line);
    while (std::getline(in, cell, ',')) cells.push_back(cell);
    if (!line.empty() && line.back() == ',') cells.emplace_back();
    return cells;
}

inline CsvTable read_csv(std::istream& in) {
    CsvTable t;
    std::string line;
    std::size_t lineno = 0;
    while (std::getline(in, line)) {
        ++lineno;
        if (!line.empty() && line.back() == '\r') line.pop_back();
        if (line.empty()) continue;
        auto cells = split_csv_line(line);
        if (t.header.empty()) {
            t.header = std::move(cells);
            continue;
        }
        if (cells.size() != t.header.size())
            fail(ErrorKind::parse, "CSV line " + std::to_string(lineno) + " has " + std::to_string(cells.size()) +
                                       " cells, header has " + std::to_string(t.header.size()));
        t.rows.push_back(std::move(cells));
    }
    if (t.header.empty()) fail(ErrorKind::parse, "CSV input has no header row");
    return t;
}

inline const std::vector<std::string> kCoeffsHeader = {"n", "re_c", "im_c", "re_sigma", "im_sigma", "weight"};

/// The coeffs table: c_n, Sigma(n) (empty at n = 1) and the smoothing
/// weight w(n) for the given x.
inline void write_coefficients_csv(std::ostream& out, const CoefficientTable& c, const CoefficientTable& sigma, double x) {
    CsvWriter csv(out, kCoeffsHeader);
    for (std::size_t n = 1; n <= c.nmax(); ++n) {
        const bool has_sigma = n >= 2 && n <= sigma.nmax();
        csv.row({std::to_string(n), format_number(c.values[n].real()), format_number(c.values[n].imag()),
                 has_sigma ? format_number(sigma.values[n].real()) : "", has_sigma ? format_number(sigma.values[n].imag()) : "",
                 format_number(selberg_weight(static_cast<double>(n), x))});
    }
}

/// Reads the c_n columns of a coeffs CSV back into a Z-coefficient table.
inline CoefficientTable read_coefficients_csv(std::istream& in, const SpectralParams& params) {
    const CsvTable t = read_csv(in);
    const std::size_t cn = t.column("n"), cre = t.column("re_c"), cim = t.column("im_c");
    CoefficientTable c;
    c.kind = CoefficientKind::z_series;
    c.params = params;
    c.first = 1;
    c.values.assign(t.rows.size() + 1, Complex{0.0, 0.0});
    for (std::size_t i = 0; i < t.rows.size(); ++i) {
        const auto& r = t.rows[i];
        if (r[cn] != std::to_string(i + 1)) fail(ErrorKind::parse, "coeffs CSV rows must be n = 1, 2, ... in order");
        c.values[i + 1] = {parse_number(r[cre]), parse_number(r[cim])};
    }
    return c;
}

}  // namespace motohashi
