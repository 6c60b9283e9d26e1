#include "irisim/detection.hpp"

#include <limits>

namespace irisim {

DetectionResult nearest(cplx y, std::span<const cplx> candidates) {
    DetectionResult best{0, std::numeric_limits<double>::infinity()};
    for (std::size_t i = 0; i < candidates.size(); ++i) {
        const double m = std::norm(y - candidates[i]);
        if (m < best.metric) best = {i, m};
    }
    return best;
}

DetectionResult detect_relay_awgn(cplx y, const LabeledConstellation& sum_const) {
    return nearest(y, sum_const.points());
}

DetectionResult detect_relay_fading(cplx y, const LabeledConstellation& faded_const) {
    return nearest(y, faded_const.points());
}

DetectionResult detect_destination(cplx y, const LabeledConstellation& relay_const, cplx h_rd) {
    DetectionResult best{0, std::numeric_limits<double>::infinity()};
    const auto pts = relay_const.points();
    for (std::size_t i = 0; i < pts.size(); ++i) {
        const double m = std::norm(y - h_rd * pts[i]);
        if (m < best.metric) best = {i, m};
    }
    return best;
}

DetectionResult detect_destination_mrc(cplx y1, cplx y2, cplx h1, cplx h2,
                                       const LabeledConstellation& relay_const) {
    DetectionResult best{0, std::numeric_limits<double>::infinity()};
    const auto pts = relay_const.points();
    for (std::size_t i = 0; i < pts.size(); ++i) {
        const double m = std::norm(y1 - h1 * pts[i]) + std::norm(y2 - h2 * pts[i]);
        if (m < best.metric) best = {i, m};
    }
    return best;
}

}  // namespace irisim
