#include "sch/rng.hpp"

#include <cmath>
#include <stdexcept>

namespace sch {

namespace {
constexpr double kTwoPi = 6.283185307179586476925286766559;

// top 53 bits -> (0,1); never returns 0 or 1 exactly
double to_unit(uint64_t x) { return (static_cast<double>(x >> 11) + 0.5) * 0x1.0p-53; }
}  // namespace

uint64_t mix64(uint64_t z) {
    z += 0x9E3779B97F4A7C15ULL;
    z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
    z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
    return z ^ (z >> 31);
}

uint64_t hash_key(uint64_t seed, uint64_t path, uint64_t cell, uint64_t node) {
    uint64_t h = mix64(seed);
    h = mix64(h ^ path);
    h = mix64(h ^ cell);
    h = mix64(h ^ node);
    return h;
}

double keyed_normal(uint64_t seed, uint64_t path, uint64_t cell, uint64_t node) {
    const uint64_t h = hash_key(seed, path, cell, node);
    const double u1 = to_unit(mix64(h ^ 0xA511E9B3ULL));
    const double u2 = to_unit(mix64(h ^ 0xD1B54A35ULL));
    return std::sqrt(-2.0 * std::log(u1)) * std::cos(kTwoPi * u2);
}

WienerPath::WienerPath(uint64_t seed, uint64_t path_index, double t_end, int64_t n_steps)
    : seed_(seed), path_(path_index), t_end_(t_end), n_steps_(n_steps) {
    if (n_steps < 0) throw std::invalid_argument("WienerPath: n_steps must be >= 0");
    if (t_end < 0.0) throw std::invalid_argument("WienerPath: t_end must be >= 0");
    m_ = n_steps;
    level_ = 0;
    while (m_ > 0 && m_ % 2 == 0) {
        m_ /= 2;
        ++level_;
    }
}

namespace {

// Bisect an increment I over an interval of length L at bridge depth `depth`
// (depth 0 = the cell increment). Node numbering within a cell: the midpoint
// split at depth d, position p (0 <= p < 2^d) uses node id 2^d + p, which is
// unique across depths.
void bridge_fill(double* out, int64_t& pos, double I, double L, int depth, int target, uint64_t nodebase,
                 uint64_t seed, uint64_t path, uint64_t cell) {
    if (depth == target) {
        out[pos++] = I;
        return;
    }
    const double z = keyed_normal(seed, path, cell, nodebase);
    const double half = 0.5 * I;
    const double disp = 0.5 * std::sqrt(L) * z;
    bridge_fill(out, pos, half + disp, 0.5 * L, depth + 1, target, 2 * nodebase, seed, path, cell);
    bridge_fill(out, pos, half - disp, 0.5 * L, depth + 1, target, 2 * nodebase + 1, seed, path, cell);
}

}  // namespace

std::vector<double> WienerPath::increments() const {
    std::vector<double> out(static_cast<size_t>(n_steps_));
    if (n_steps_ == 0) return out;
    const double cell_dt = t_end_ / static_cast<double>(m_);
    int64_t pos = 0;
    for (int64_t c = 0; c < m_; ++c) {
        const double I = std::sqrt(cell_dt) * keyed_normal(seed_, path_, static_cast<uint64_t>(c), 0);
        bridge_fill(out.data(), pos, I, cell_dt, 0, level_, 1, seed_, path_, static_cast<uint64_t>(c));
    }
    return out;
}

}  // namespace sch
