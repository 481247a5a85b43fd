#include "riskscore/auc.hpp"

#include <algorithm>
#include <numeric>
#include <vector>

#include "riskscore/errors.hpp"

namespace riskscore {

double auc(std::span<const double> scores, std::span<const int> labels) {
    if (scores.size() != labels.size()) throw Error("score/label count mismatch");
    size_t n = scores.size();
    size_t positives = 0;
    for (int l : labels) positives += l != 0;
    size_t negatives = n - positives;
    if (positives == 0 || negatives == 0)
        throw UndefinedAucError("AUC needs at least one positive and one negative label");

    std::vector<int> order(n);
    std::iota(order.begin(), order.end(), 0);
    std::sort(order.begin(), order.end(),
              [&](int a, int b) { return scores[a] < scores[b]; });

    double positive_rank_sum = 0;
    size_t i = 0;
    while (i < n) {
        size_t j = i;
        while (j + 1 < n && scores[order[j + 1]] == scores[order[i]]) ++j;
        // 1-based midrank of the tie group [i, j]; exact in doubles since it
        // is an integer or half-integer.
        double midrank = (static_cast<double>(i) + static_cast<double>(j)) / 2.0 + 1.0;
        for (size_t k = i; k <= j; ++k)
            if (labels[order[k]]) positive_rank_sum += midrank;
        i = j + 1;
    }
    double np = static_cast<double>(positives);
    return (positive_rank_sum - np * (np + 1.0) / 2.0) /
           (np * static_cast<double>(negatives));
}

}  // namespace riskscore
