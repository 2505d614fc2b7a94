#include "rodctl/sampled_function.hpp"

#include <algorithm>
#include <map>

namespace rodctl {

namespace {

// Weights for the derivative at position `at` of a window of `width` samples.
const Vector& window_weights(Index at, Index width) {
    thread_local std::map<std::pair<Index, Index>, Vector> cache;
    auto it = cache.find({at, width});
    if (it != cache.end()) return it->second;
    std::vector<double> offsets(width);
    for (Index j = 0; j < width; ++j) offsets[j] = double(j - at);
    return cache.emplace(std::pair{at, width}, fd_weights(offsets, 1.0)).first->second;
}

}  // namespace

Vector piecewise_derivative(const Vector& values, double step, std::vector<Index> kinks, int accuracy) {
    const Index n = values.size();
    if (n < 2) throw InvalidArgument("piecewise_derivative: need at least two samples");
    kinks.push_back(0);
    kinks.push_back(n - 1);
    std::sort(kinks.begin(), kinks.end());
    kinks.erase(std::unique(kinks.begin(), kinks.end()), kinks.end());
    kinks.erase(std::remove_if(kinks.begin(), kinks.end(), [n](Index k) { return k < 0 || k >= n; }),
                kinks.end());

    Vector d = Vector::Zero(n);
    Vector hits = Vector::Zero(n);
    for (std::size_t piece = 0; piece + 1 < kinks.size(); ++piece) {
        const Index lo = kinks[piece];
        const Index len = kinks[piece + 1] - lo + 1;
        Index width = std::min<Index>(accuracy + 1, len);
        if (width > 2 && width % 2 == 0) --width;
        for (Index i = lo; i < lo + len; ++i) {
            const Index first = std::clamp<Index>(i - width / 2, lo, lo + len - width);
            const Vector& w = window_weights(i - first, width);
            d(i) += w.dot(values.segment(first, width)) / step;
            hits(i) += 1.0;
        }
    }
    return d.cwiseQuotient(hits);
}

}  // namespace rodctl
