#pragma once

#include <complex>
#include <stdexcept>
#include <string>
#include <vector>

namespace srsim {

using cplx = std::complex<double>;

/// Gray-labeled constellation with unit average power.
struct Constellation {
    std::vector<cplx> points;
    std::vector<std::string> labels;  // one bit string per point
    unsigned order = 0;               // cardinality M

    unsigned bits_per_symbol() const;
};

class modulation_error : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// M-ary PSK, M a power of two. BPSK is {+1 -> "1", -1 -> "0"}; QPSK points
/// are (+-1 +- j)/sqrt(2) with labels {00,01,11,10} counter-clockwise from
/// the first quadrant. Higher orders start at angle 0 with reflected Gray
/// labels along the circle.
Constellation make_psk(unsigned order);

/// Gray-labeled QAM normalized to unit average power. Square orders
/// (4, 16, 64, ...) use a per-axis Gray grid; 8 is a rectangular 2x4 grid.
Constellation make_qam(unsigned order);

/// Look up a constellation by name: "bpsk", "qpsk", "8psk", "16psk",
/// "4qam", "8qam", "16qam".
Constellation make_by_name(const std::string& name);

/// Number of differing positions between two equal-length bit strings.
unsigned hamming(const std::string& a, const std::string& b);

}  // namespace srsim
