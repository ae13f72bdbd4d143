#pragma once

#include <complex>
#include <cstdint>
#include <string>

namespace eigensense {

enum class ValueCase { Real, Complex };
enum class Scenario { S0, S1 };

inline const char* to_string(ValueCase vc) {
    return vc == ValueCase::Real ? "real" : "complex";
}

inline const char* to_string(Scenario sc) {
    return sc == Scenario::S0 ? "S0" : "S1";
}

using cplx = std::complex<double>;

inline constexpr const char* kVersionTag = "eigensense-0.1.0";

}  // namespace eigensense
