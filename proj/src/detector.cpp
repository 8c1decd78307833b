#include "srsim/detector.hpp"

#include <cmath>
#include <limits>

namespace srsim {

Decision detect(cplx y, const CompositeConstellation& comp, double p_t) {
    if (comp.size() == 0)
        throw composite_error("detect: empty composite constellation");
    const double amp = std::sqrt(p_t);
    std::size_t best = 0;
    double best_metric = std::numeric_limits<double>::infinity();
    for (std::size_t m = 0; m < comp.size(); ++m) {
        const double metric = std::norm(y - amp * comp.points[m]);
        if (metric < best_metric) {  // strict: ties keep the lowest index
            best_metric = metric;
            best = m;
        }
    }
    Decision d;
    d.index = best;
    d.s_bits = comp.s_label(best);
    d.c_bits = comp.c_label(best);
    return d;
}

}  // namespace srsim
