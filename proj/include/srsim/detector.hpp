#pragma once

#include <string>

#include "srsim/composite.hpp"

namespace srsim {

/// Outcome of the two-step detection: nearest composite point, then the
/// label split into primary and secondary bits.
struct Decision {
    std::size_t index = 0;
    std::string s_bits;
    std::string c_bits;
};

/// Nearest-point ML decision over the scaled composite constellation.
/// Exact ties resolve to the lowest index.
Decision detect(cplx y, const CompositeConstellation& comp, double p_t);

}  // namespace srsim
