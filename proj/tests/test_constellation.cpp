#include <doctest.h>

#include <cmath>
#include <set>

#include "srsim/constellation.hpp"

using namespace srsim;

namespace {

double avg_power(const Constellation& c) {
    double p = 0.0;
    for (const auto& x : c.points) p += std::norm(x);
    return p / c.points.size();
}

double min_distance(const Constellation& c) {
    double d = 1e300;
    for (std::size_t m = 0; m < c.points.size(); ++m)
        for (std::size_t k = m + 1; k < c.points.size(); ++k)
            d = std::min(d, std::abs(c.points[m] - c.points[k]));
    return d;
}

}  // namespace

TEST_CASE("bpsk mapping") {
    const auto c = make_psk(2);
    REQUIRE(c.order == 2);
    CHECK(c.points[0] == cplx(1.0, 0.0));
    CHECK(c.points[1] == cplx(-1.0, 0.0));
    CHECK(c.labels[0] == "1");
    CHECK(c.labels[1] == "0");
    CHECK(c.bits_per_symbol() == 1);
}

TEST_CASE("qpsk mapping") {
    const auto c = make_psk(4);
    const double r = 1.0 / std::sqrt(2.0);
    REQUIRE(c.order == 4);
    CHECK(std::abs(c.points[0] - cplx(r, r)) < 1e-15);
    CHECK(std::abs(c.points[1] - cplx(-r, r)) < 1e-15);
    CHECK(std::abs(c.points[2] - cplx(-r, -r)) < 1e-15);
    CHECK(std::abs(c.points[3] - cplx(r, -r)) < 1e-15);
    CHECK(c.labels == std::vector<std::string>{"00", "01", "11", "10"});
    CHECK(c.bits_per_symbol() == 2);
}

TEST_CASE("psk gray adjacency and unit power") {
    for (unsigned order : {2u, 4u, 8u, 16u}) {
        const auto c = make_psk(order);
        CHECK(avg_power(c) == doctest::Approx(1.0).epsilon(1e-12));
        // Neighbouring points on the circle differ in exactly one bit.
        if (order >= 4) {
            for (unsigned k = 0; k < order; ++k)
                CHECK(hamming(c.labels[k], c.labels[(k + 1) % order]) == 1);
        }
        // All labels distinct.
        std::set<std::string> uniq(c.labels.begin(), c.labels.end());
        CHECK(uniq.size() == order);
    }
}

TEST_CASE("qam grid gray adjacency and normalization") {
    for (unsigned order : {4u, 8u, 16u}) {
        const auto c = make_qam(order);
        CHECK(avg_power(c) == doctest::Approx(1.0).epsilon(1e-12));
        std::set<std::string> uniq(c.labels.begin(), c.labels.end());
        CHECK(uniq.size() == order);
        // Nearest geometric neighbours differ in exactly one bit.
        const double dmin = min_distance(c);
        for (std::size_t m = 0; m < c.points.size(); ++m)
            for (std::size_t k = m + 1; k < c.points.size(); ++k)
                if (std::abs(c.points[m] - c.points[k]) < dmin * 1.0001)
                    CHECK(hamming(c.labels[m], c.labels[k]) == 1);
    }
}

TEST_CASE("16qam minimum distance") {
    const auto c = make_qam(16);
    CHECK(min_distance(c) == doctest::Approx(0.63245553203367587).epsilon(1e-12));
}

TEST_CASE("hamming distance") {
    CHECK(hamming("0000", "0000") == 0);
    CHECK(hamming("0101", "1010") == 4);
    CHECK(hamming("011", "010") == 1);
    CHECK_THROWS_AS((void)hamming("01", "010"), modulation_error);
}

TEST_CASE("constellation lookup by name") {
    CHECK(make_by_name("qpsk").order == 4);
    CHECK(make_by_name("16qam").order == 16);
    CHECK(make_by_name("8psk").order == 8);
    CHECK_THROWS_AS((void)make_by_name("64apsk"), modulation_error);
    CHECK_THROWS_AS((void)make_psk(3), modulation_error);
    CHECK_THROWS_AS((void)make_qam(32), modulation_error);
}
