#pragma once

// Counter-based random numbers and reproducible Wiener paths.
//
// Every normal variate is a pure function of a (seed, path, cell, node) key,
// so ensembles are reproducible, order-independent, and extendable: doubling
// n_paths leaves the first half bit-identical. Brownian increments come from
// a dyadic bridge inside each base cell; refining dt by powers of two keeps
// the path identical (coarse increments are exact sums of fine ones).

#include <cstdint>
#include <vector>

namespace sch {

/// SplitMix64-style avalanche; the core mixing primitive.
uint64_t mix64(uint64_t z);

/// Hash a key tuple into one 64-bit word.
uint64_t hash_key(uint64_t seed, uint64_t path, uint64_t cell, uint64_t node);

/// Standard normal variate keyed by (seed, path, cell, node); Box-Muller on
/// two mixed words.
double keyed_normal(uint64_t seed, uint64_t path, uint64_t cell, uint64_t node);

/// Wiener path on [0, t_end] sampled as n_steps equal increments.
///
/// n_steps is factored as m * 2^level with m odd. The path is built from m
/// independent base-cell increments W(c+1) - W(c), each refined by a dyadic
/// Brownian bridge down to the requested level. Two step counts with the same
/// odd factor m describe the *same* path at different resolutions.
class WienerPath {
public:
    WienerPath(uint64_t seed, uint64_t path_index, double t_end, int64_t n_steps);

    /// All n_steps increments, in order.
    std::vector<double> increments() const;

    int64_t n_steps() const { return n_steps_; }
    int64_t base_cells() const { return m_; }
    int level() const { return level_; }

private:
    uint64_t seed_;
    uint64_t path_;
    double t_end_;
    int64_t n_steps_;
    int64_t m_;
    int level_;
};

}  // namespace sch
