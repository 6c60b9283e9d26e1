#pragma once

#include <cstddef>
#include <span>

#include "irisim/constellation.hpp"

namespace irisim {

/// Index of the winning candidate and its squared Euclidean residual.
struct DetectionResult {
    std::size_t index = 0;
    double metric = 0.0;
};

/// Exhaustive ML search; ties go to the lowest index.
DetectionResult nearest(cplx y, std::span<const cplx> candidates);

/// Relay detection of the component-wise sums under AWGN. The winning
/// index addresses a label of `sum_const` (SumAlphabet indices).
DetectionResult detect_relay_awgn(cplx y, const LabeledConstellation& sum_const);

/// Relay detection over (x, x_r) pair labels of a faded sum constellation.
DetectionResult detect_relay_fading(cplx y, const LabeledConstellation& faded_const);

/// Destination detection of the forwarded vector through h_rd.
DetectionResult detect_destination(cplx y, const LabeledConstellation& relay_const, cplx h_rd);

/// Joint ML over two observations of the same point: argmin
/// |y1 - h1 c|^2 + |y2 - h2 c|^2.
DetectionResult detect_destination_mrc(cplx y1, cplx y2, cplx h1, cplx h2,
                                       const LabeledConstellation& relay_const);

}  // namespace irisim
