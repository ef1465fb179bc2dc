#pragma once

#include <algorithm>
#include <charconv>
#include <cmath>
#include <cstddef>
#include <fstream>
#include <istream>
#include <sstream>
#include <string>
#include <vector>

#include "errors.hpp"

namespace motohashi {

/// One critical-line zero 1/2 + i*ordinate, 1-based rank in the table.
struct ZetaZero {
    double ordinate;
    std::size_t index;
};

/// Sorted, duplicate-free ordinates of zeta zeros on the critical line.
/// Immutable after construction.
class ZeroTable {
public:
    static constexpr double kDuplicateTolerance = 1e-9;

    ZeroTable() = default;

    /// Validates ascending order; values closer than 1e-9 collapse into one.
    explicit ZeroTable(std::vector<double> ordinates, std::string source = "computed")
        : source_(std::move(source)) {
        for (std::size_t i = 0; i < ordinates.size(); ++i) {
            const double g = ordinates[i];
            if (!std::isfinite(g) || g <= 0.0)
                fail(ErrorKind::precondition, "zero ordinate must be positive and finite");
            if (!ordinates_.empty()) {
                const double prev = ordinates_.back();
                if (std::abs(g - prev) < kDuplicateTolerance) continue;
                if (g < prev)
                    fail(ErrorKind::ordering, "zero ordinates not ascending at entry " + std::to_string(i + 1));
            }
            ordinates_.push_back(g);
        }
    }

    /// Reads the plain-text zeros format: one ordinate per line, '#' starts
    /// a comment line, blank lines ignored.
    static ZeroTable parse(std::istream& in, const std::string& source) {
        std::vector<double> values;
        std::string line;
        std::size_t line_no = 0;
        double prev = 0.0;
        while (std::getline(in, line)) {
            ++line_no;
            const auto first = line.find_first_not_of(" \t\r");
            if (first == std::string::npos || line[first] == '#') continue;
            const auto last = line.find_last_not_of(" \t\r");
            const std::string token = line.substr(first, last - first + 1);
            double value = 0.0;
            const auto [ptr, ec] = std::from_chars(token.data(), token.data() + token.size(), value);
            if (ec != std::errc{} || ptr != token.data() + token.size() || !(value > 0.0) || !std::isfinite(value))
                fail(ErrorKind::parse, source + ":" + std::to_string(line_no) + ": not a positive ordinate: '" + token + "'",
                     std::to_string(line_no));
            if (!values.empty() && value < prev - kDuplicateTolerance)
                fail(ErrorKind::ordering, source + ":" + std::to_string(line_no) + ": ordinates not ascending",
                     std::to_string(line_no));
            prev = value;
            values.push_back(value);
        }
        return ZeroTable(std::move(values), source);
    }

    static ZeroTable from_file(const std::string& path) {
        std::ifstream in(path);
        if (!in) fail(ErrorKind::io, "cannot open zeros file '" + path + "'");
        return parse(in, path);
    }

    std::size_t size() const noexcept { return ordinates_.size(); }
    bool empty() const noexcept { return ordinates_.empty(); }
    const std::string& source() const noexcept { return source_; }
    const std::vector<double>& ordinates() const noexcept { return ordinates_; }

    ZetaZero operator[](std::size_t i) const { return {ordinates_.at(i), i + 1}; }

    double max_ordinate() const noexcept { return ordinates_.empty() ? 0.0 : ordinates_.back(); }

    /// Distance from |t| to the nearest tabulated ordinate (infinity if empty).
    double distance_to_nearest(double t) const noexcept {
        if (ordinates_.empty()) return INFINITY;
        const double a = std::abs(t);
        const auto it = std::lower_bound(ordinates_.begin(), ordinates_.end(), a);
        double best = INFINITY;
        if (it != ordinates_.end()) best = *it - a;
        if (it != ordinates_.begin()) best = std::min(best, a - *std::prev(it));
        return best;
    }

    /// Ordinates gamma with gamma <= cap.
    std::vector<double> up_to(double cap) const {
        const auto end = std::upper_bound(ordinates_.begin(), ordinates_.end(), cap);
        return {ordinates_.begin(), end};
    }

private:
    std::vector<double> ordinates_;
    std::string source_ = "computed";
};

}  // namespace motohashi
