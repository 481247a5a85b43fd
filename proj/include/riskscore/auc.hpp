#pragma once

#include <span>

namespace riskscore {

// P(S+ > S-) + 0.5 P(S+ = S-) over all positive-negative pairs, computed by
// rank sum with midranks for ties. Throws UndefinedAucError when the labels
// are single-class.
double auc(std::span<const double> scores, std::span<const int> labels);

}  // namespace riskscore
