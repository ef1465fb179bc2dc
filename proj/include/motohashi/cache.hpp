#pragma once

// On-disk cache for coefficient tables and K singularity enumerations.
// Each entry is a text file named by the FNV-1a hash of its key; the first
// line repeats the format version, kind and full key, the payload is
// hexfloat so a hit is bit-identical to recomputation.

#include <cinttypes>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <optional>
#include <ostream>
#include <sstream>
#include <string>

#include "arithmetic.hpp"
#include "errors.hpp"
#include "k_structure.hpp"

namespace motohashi {

inline constexpr int kCacheVersion = 1;

inline std::uint64_t fnv1a(const std::string& text) {
    std::uint64_t h = 1469598103934665603ull;
    for (const unsigned char ch : text) {
        h ^= ch;
        h *= 1099511628211ull;
    }
    return h;
}

inline std::string hexfloat(double v) {
    char buf[40];
    std::snprintf(buf, sizeof buf, "%a", v);
    return buf;
}

inline std::string params_key(const SpectralParams& p) {
    return "t1=" + hexfloat(p.t1) + ",t2=" + hexfloat(p.t2) + ",z=" + hexfloat(p.z);
}

class Cache {
public:
    /// No directory: every lookup misses and nothing is written.
    explicit Cache(std::optional<std::filesystem::path> dir = std::nullopt, std::ostream* log = nullptr,
                   int version = kCacheVersion)
        : dir_(std::move(dir)), log_(log), version_(version) {}

    bool enabled() const noexcept { return dir_.has_value(); }
    const std::optional<std::filesystem::path>& dir() const noexcept { return dir_; }

    std::optional<CoefficientTable> load_table(const std::string& kind, const std::string& key) const {
        auto in = open_entry(kind, key);
        if (!in) return std::nullopt;
        CoefficientTable t;
        std::string tag, xs;
        std::size_t nmax = 0;
        int kind_code = 0;
        *in >> tag >> kind_code >> t.first >> nmax >> xs;
        if (!*in || tag != "table") return miss(kind, key);
        t.kind = static_cast<CoefficientKind>(kind_code);
        if (xs != "-") t.x = std::strtod(xs.c_str(), nullptr);
        double t1 = 0, t2 = 0, z = 0;
        if (!read_hex(*in, t1) || !read_hex(*in, t2) || !read_hex(*in, z)) return miss(kind, key);
        t.params = SpectralParams(t1, t2, z);
        t.values.assign(nmax + 1, Complex{0.0, 0.0});
        for (std::size_t n = 0; n <= nmax; ++n) {
            double re = 0, im = 0;
            if (!read_hex(*in, re) || !read_hex(*in, im)) return miss(kind, key);
            t.values[n] = {re, im};
        }
        hit(kind, key);
        return t;
    }

    void store_table(const std::string& kind, const std::string& key, const CoefficientTable& t) const {
        if (!enabled()) return;
        std::ostringstream out;
        out << "table " << static_cast<int>(t.kind) << ' ' << t.first << ' ' << t.nmax() << ' '
            << (t.x ? hexfloat(*t.x) : std::string("-")) << '\n'
            << hexfloat(t.params.t1) << ' ' << hexfloat(t.params.t2) << ' ' << hexfloat(t.params.z) << '\n';
        for (const auto& v : t.values) out << hexfloat(v.real()) << ' ' << hexfloat(v.imag()) << '\n';
        write_entry(kind, key, out.str());
    }

    std::optional<KSingularities> load_k_part(const std::string& key, const TruncationPolicy& policy) const {
        auto in = open_entry("k-singularities", key);
        if (!in) return std::nullopt;
        KSingularities k;
        k.k_max = policy.k_max;
        k.rect = policy.rect;
        std::string tag;
        std::size_t n = 0;
        *in >> tag >> n;
        if (!*in || tag != "points") return miss("k-singularities", key);
        for (std::size_t i = 0; i < n; ++i) {
            std::string cls;
            double re = 0, im = 0;
            int mult = 0;
            *in >> cls;
            if (!read_hex(*in, re) || !read_hex(*in, im) || !(*in >> mult)) return miss("k-singularities", key);
            const auto c = parse_singularity_class(cls);
            if (!c || (*c != SingularityClass::Snu && *c != SingularityClass::Sr)) return miss("k-singularities", key);
            const SingularityPoint p{{re, im}, *c, class_sign(*c), mult};
            (*c == SingularityClass::Snu ? k.poles : k.zeros).push_back(p);
        }
        hit("k-singularities", key);
        return k;
    }

    void store_k_part(const std::string& key, const KSingularities& k) const {
        if (!enabled()) return;
        std::ostringstream out;
        out << "points " << k.poles.size() + k.zeros.size() << '\n';
        for (const auto* list : {&k.poles, &k.zeros})
            for (const auto& p : *list)
                out << to_string(p.cls) << ' ' << hexfloat(p.location.real()) << ' ' << hexfloat(p.location.imag()) << ' '
                    << p.multiplicity << '\n';
        write_entry("k-singularities", key, out.str());
    }

    std::filesystem::path entry_path(const std::string& kind, const std::string& key) const {
        char name[64];
        std::snprintf(name, sizeof name, "%016" PRIx64 ".cache", fnv1a(kind + '|' + key));
        return *dir_ / (kind + "-" + name);
    }

private:
    static bool read_hex(std::istream& in, double& v) {
        std::string s;
        if (!(in >> s)) return false;
        char* end = nullptr;
        v = std::strtod(s.c_str(), &end);
        return end == s.c_str() + s.size();
    }

    std::string header(const std::string& kind, const std::string& key) const {
        return "motohashi-cache v" + std::to_string(version_) + ' ' + kind + ' ' + key;
    }

    std::optional<std::ifstream> open_entry(const std::string& kind, const std::string& key) const {
        if (!enabled()) return std::nullopt;
        std::ifstream in(entry_path(kind, key));
        if (!in) return std::nullopt;
        std::string first;
        std::getline(in, first);
        if (first != header(kind, key)) {
            // Version bump or hash collision: recompute.
            if (log_) *log_ << "cache: stale entry for " << kind << ", recomputing\n";
            return std::nullopt;
        }
        return in;
    }

    void write_entry(const std::string& kind, const std::string& key, const std::string& payload) const {
        std::error_code ec;
        std::filesystem::create_directories(*dir_, ec);
        const auto path = entry_path(kind, key);
        const auto tmp = path.string() + ".tmp";
        {
            std::ofstream out(tmp, std::ios::trunc);
            if (!out) fail(ErrorKind::io, "cannot write cache entry " + tmp);
            out << header(kind, key) << '\n' << payload;
        }
        std::filesystem::rename(tmp, path, ec);
        if (ec) fail(ErrorKind::io, "cannot move cache entry into place: " + ec.message());
    }

    void hit(const std::string& kind, const std::string& key) const {
        if (log_) *log_ << "cache: hit " << kind << ' ' << key << '\n';
    }

    std::nullopt_t miss(const std::string& kind, const std::string&) const {
        if (log_) *log_ << "cache: unreadable entry for " << kind << ", recomputing\n";
        return std::nullopt;
    }

    std::optional<std::filesystem::path> dir_;
    std::ostream* log_;
    int version_;
};

}  // namespace motohashi
