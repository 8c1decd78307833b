#include "srsim/constellation.hpp"

#include <cmath>
#include <numbers>

namespace srsim {

namespace {

bool power_of_two(unsigned m) { return m >= 2 && (m & (m - 1)) == 0; }

unsigned log2u(unsigned m) {
    unsigned b = 0;
    while ((1u << b) < m) ++b;
    return b;
}

std::string gray_label(unsigned index, unsigned nbits) {
    unsigned g = index ^ (index >> 1);
    std::string s(nbits, '0');
    for (unsigned b = 0; b < nbits; ++b)
        if (g & (1u << (nbits - 1 - b))) s[b] = '1';
    return s;
}

void normalize_power(std::vector<cplx>& pts) {
    double p = 0.0;
    for (const auto& x : pts) p += std::norm(x);
    p /= static_cast<double>(pts.size());
    const double scale = 1.0 / std::sqrt(p);
    for (auto& x : pts) x *= scale;
}

}  // namespace

unsigned Constellation::bits_per_symbol() const { return log2u(order); }

Constellation make_psk(unsigned order) {
    if (!power_of_two(order))
        throw modulation_error("PSK order must be a power of two >= 2, got " +
                               std::to_string(order));
    Constellation c;
    c.order = order;
    const unsigned nbits = log2u(order);
    if (order == 2) {
        c.points = {cplx(1.0, 0.0), cplx(-1.0, 0.0)};
        c.labels = {"1", "0"};
        return c;
    }
    if (order == 4) {
        const double r = 1.0 / std::sqrt(2.0);
        c.points = {cplx(r, r), cplx(-r, r), cplx(-r, -r), cplx(r, -r)};
        c.labels = {"00", "01", "11", "10"};
        return c;
    }
    for (unsigned k = 0; k < order; ++k) {
        const double ang = 2.0 * std::numbers::pi * k / order;
        c.points.emplace_back(std::cos(ang), std::sin(ang));
        c.labels.push_back(gray_label(k, nbits));
    }
    return c;
}

Constellation make_qam(unsigned order) {
    if (!power_of_two(order) || order < 4)
        throw modulation_error("QAM order must be a power of two >= 4, got " +
                               std::to_string(order));
    unsigned ni, nq;  // grid dimensions
    const unsigned nbits = log2u(order);
    const auto root = static_cast<unsigned>(std::lround(std::sqrt(double(order))));
    if (root * root == order) {
        ni = nq = root;
    } else if (order == 8) {
        ni = 4;  // rectangular 2x4
        nq = 2;
    } else {
        throw modulation_error("unsupported QAM order " + std::to_string(order) +
                               " (need a square order or 8)");
    }
    const unsigned ibits = log2u(ni), qbits = log2u(nq);
    Constellation c;
    c.order = order;
    for (unsigned i = 0; i < ni; ++i) {
        for (unsigned q = 0; q < nq; ++q) {
            const double re = 2.0 * i - (ni - 1.0);
            const double im = 2.0 * q - (nq - 1.0);
            c.points.emplace_back(re, im);
            c.labels.push_back(gray_label(i, ibits) + gray_label(q, qbits));
        }
    }
    (void)nbits;
    normalize_power(c.points);
    return c;
}

Constellation make_by_name(const std::string& name) {
    if (name == "bpsk") return make_psk(2);
    if (name == "qpsk") return make_psk(4);
    if (name == "8psk") return make_psk(8);
    if (name == "16psk") return make_psk(16);
    if (name == "4qam") return make_qam(4);
    if (name == "8qam") return make_qam(8);
    if (name == "16qam") return make_qam(16);
    throw modulation_error("unknown constellation name: " + name);
}

unsigned hamming(const std::string& a, const std::string& b) {
    if (a.size() != b.size())
        throw modulation_error("hamming: length mismatch (" + std::to_string(a.size()) +
                               " vs " + std::to_string(b.size()) + ")");
    unsigned d = 0;
    for (size_t i = 0; i < a.size(); ++i)
        if (a[i] != b[i]) ++d;
    return d;
}

}  // namespace srsim
