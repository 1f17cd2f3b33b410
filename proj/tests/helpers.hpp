#pragma once

// Shared generators for randomized tests. Deterministic: everything draws
// from chaoscalc::Rng with fixed seeds inside each test case.

#include <vector>

#include "chaoscalc/rng.hpp"
#include "chaoscalc/tensor.hpp"

namespace testutil {

/// Random symmetric kernel: every sorted multi-index gets a coefficient
/// uniform in [-1, 1] with probability `density`, else zero.
inline chaoscalc::SymmetricKernel random_kernel(chaoscalc::Rng& rng, int order, int dim,
                                                double density = 1.0) {
    chaoscalc::SymmetricKernel k(order, dim);
    chaoscalc::MultiIndex idx(order, 0);
    // enumerate nondecreasing multi-indices
    for (;;) {
        if (density >= 1.0 || rng.next_unit() < density) {
            k.set(idx, 2.0 * rng.next_unit() - 1.0);
        }
        int pos = order - 1;
        while (pos >= 0 && idx[pos] == dim - 1) --pos;
        if (pos < 0) break;
        int v = idx[pos] + 1;
        for (int i = pos; i < order; ++i) idx[i] = v;
        if (order == 0) break;
    }
    return k;
}

/// Random raw tensor with `count` entries at arbitrary indices.
inline chaoscalc::RawTensor random_raw(chaoscalc::Rng& rng, int order, int dim, int count) {
    chaoscalc::RawTensor t(order, dim);
    for (int c = 0; c < count; ++c) {
        chaoscalc::MultiIndex idx(order);
        for (int i = 0; i < order; ++i)
            idx[i] = static_cast<int>(rng.next_u64() % static_cast<unsigned>(dim));
        t.add(idx, 2.0 * rng.next_unit() - 1.0);
    }
    return t;
}

}  // namespace testutil
