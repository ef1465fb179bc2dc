#pragma once

#include <functional>
#include <random>

#include "catch_amalgamated.hpp"

#include "motohashi/motohashi.hpp"

namespace support {

inline motohashi::ErrorKind kind_of(const std::function<void()>& fn) {
    try {
        fn();
    } catch (const motohashi::Error& e) {
        return e.kind();
    }
    FAIL("expected a motohashi::Error");
    return motohashi::ErrorKind::precondition;
}

inline const motohashi::ZeroTable& shipped_zeros() {
    static const auto table = motohashi::ZeroTable::from_file(MOTOHASHI_DEFAULT_ZEROS);
    return table;
}

inline double dist(motohashi::Complex a, motohashi::Complex b) { return std::abs(a - b); }

}  // namespace support
