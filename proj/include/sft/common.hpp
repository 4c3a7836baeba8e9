#pragma once

#include <cstdint>
#include <stdexcept>
#include <string>

#include <boost/multiprecision/cpp_int.hpp>

namespace sft {

using BigInt = boost::multiprecision::cpp_int;

// Thrown when an enumeration or size cap is hit. The CLI maps this to
// exit code 2; everything else that is a usage problem throws
// std::invalid_argument and maps to exit code 1.
struct CapExceeded : std::runtime_error {
    explicit CapExceeded(const std::string& what) : std::runtime_error(what) {}
};

// A sup/inf-style quantity explored only up to a cap. When at_cap is
// true the exact value is unknown but >= value (and value == cap).
struct CappedInt {
    std::int64_t value = 0;
    bool at_cap = false;

    std::string str() const {
        return (at_cap ? ">=" : "") + std::to_string(value);
    }
};

inline constexpr std::int64_t kDefaultEnumCap = 10'000'000;  // path / walk enumeration
inline constexpr int kOracleMaxEdges = 22;                   // exhaustive 2^|E| oracle
inline constexpr int kCharPolyMaxVertices = 64;              // exact char poly size cap
inline constexpr int kCheegerMaxVertices = 24;               // exhaustive subset search
inline constexpr double kPowerIterTol = 1e-10;
inline constexpr int kPowerIterCap = 100'000;

}  // namespace sft
