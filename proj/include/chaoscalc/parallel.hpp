#pragma once

#include <atomic>
#include <cstdint>
#include <cstdlib>
#include <thread>
#include <vector>

#include "chaoscalc/rng.hpp"

namespace chaoscalc {

/// Worker count: CHAOSCALC_THREADS if set and > 0, otherwise one worker per
/// hardware thread. The value only affects scheduling, never results.
inline unsigned worker_count() {
    if (const char* env = std::getenv("CHAOSCALC_THREADS")) {
        long v = std::strtol(env, nullptr, 10);
        if (v > 0) return static_cast<unsigned>(v);
    }
    unsigned hw = std::thread::hardware_concurrency();
    return hw == 0 ? 1 : hw;
}

/// Monte Carlo loops are split into this fixed number of blocks, one RNG
/// substream per block, merged in block order. Because the partition does not
/// depend on the worker count, output is byte-identical for any thread count.
inline constexpr std::uint64_t kMcBlocks = 64;

/// Runs `body(block_rng, samples_in_block, block_accumulator)` over the fixed
/// block partition of `total` samples and returns per-block accumulators in
/// block order. Acc must be default-constructible.
template <class Acc, class Body>
std::vector<Acc> mc_blocks(std::uint64_t total, const Rng& root, Body body) {
    std::uint64_t nblocks = total < kMcBlocks ? (total == 0 ? 1 : total) : kMcBlocks;
    std::vector<Acc> acc(nblocks);
    std::vector<std::uint64_t> counts(nblocks, total / nblocks);
    for (std::uint64_t b = 0; b < total % nblocks; ++b) counts[b] += 1;

    unsigned workers = worker_count();
    if (workers <= 1 || nblocks == 1) {
        for (std::uint64_t b = 0; b < nblocks; ++b) {
            Rng r = root.child(b);
            body(r, counts[b], acc[b]);
        }
        return acc;
    }
    std::atomic<std::uint64_t> next{0};
    auto run = [&]() {
        for (;;) {
            std::uint64_t b = next.fetch_add(1);
            if (b >= nblocks) break;
            Rng r = root.child(b);
            body(r, counts[b], acc[b]);
        }
    };
    std::vector<std::thread> pool;
    unsigned spawn = workers < nblocks ? workers : static_cast<unsigned>(nblocks);
    pool.reserve(spawn);
    for (unsigned w = 0; w < spawn; ++w) pool.emplace_back(run);
    for (auto& t : pool) t.join();
    return acc;
}

/// Neumaier compensated summation; deterministic given a fixed add order.
struct KahanSum {
    double sum = 0.0;
    double comp = 0.0;
    void add(double v) {
        double t = sum + v;
        if (std::abs(sum) >= std::abs(v)) {
            comp += (sum - t) + v;
        } else {
            comp += (v - t) + sum;
        }
        sum = t;
    }
    double value() const { return sum + comp; }
};

struct MeanVar {
    double mean = 0.0;
    double var = 0.0;  // population variance of the samples
    std::uint64_t n = 0;
    double stderr_of_mean() const { return n > 0 ? std::sqrt(var / static_cast<double>(n)) : 0.0; }
};

/// Mean/variance of `sample(rng)` over m draws, block-deterministic.
template <class F>
MeanVar mc_mean(std::uint64_t m, const Rng& root, F sample) {
    struct Acc {
        KahanSum s, s2;
        std::uint64_t n = 0;
    };
    auto blocks = mc_blocks<Acc>(m, root, [&sample](Rng& r, std::uint64_t cnt, Acc& a) {
        for (std::uint64_t i = 0; i < cnt; ++i) {
            double v = sample(r);
            a.s.add(v);
            a.s2.add(v * v);
            a.n += 1;
        }
    });
    KahanSum s, s2;
    std::uint64_t n = 0;
    for (const auto& a : blocks) {
        s.add(a.s.value());
        s2.add(a.s2.value());
        n += a.n;
    }
    MeanVar out;
    out.n = n;
    if (n == 0) return out;
    double dn = static_cast<double>(n);
    out.mean = s.value() / dn;
    double raw2 = s2.value() / dn;
    out.var = raw2 - out.mean * out.mean;
    if (out.var < 0.0) out.var = 0.0;
    return out;
}

}  // namespace chaoscalc
