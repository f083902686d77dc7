#ifndef DGS_L0_SKETCH_HPP
#define DGS_L0_SKETCH_HPP

#include <cstdint>
#include <optional>
#include <stdexcept>
#include <utility>
#include <vector>

#include <dgs/modmath.hpp>

namespace dgs {

struct SketchError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

struct SketchParams {
    uint64_t dimension = 1;   // coordinate-space size N
    double failure_prob = 0.01;
    uint64_t seed = 0;

    bool operator==(const SketchParams&) const = default;
};

// Linear, mergeable l0 sampler over a vector in {-1,0,1}^N.
//
// ceil(4*ln(1/delta)) independent instances; ceil(log2 N)+1 subsampling
// levels per instance; one-sparse recovery cell per level holding
// (count, weighted sum, fingerprint mod q) with q the smallest prime > N^3.
// Level membership of a coordinate comes from a pairwise-independent hash at
// rate 2^-level; all randomness is a pure function of (seed, instance, level).
class L0Sketch {
public:
    struct Cell {
        int64_t count = 0;
        int64_t wsum = 0;
        u128 fingerprint = 0;

        bool operator==(const Cell&) const = default;
    };

    explicit L0Sketch(SketchParams params);

    // applies X[index] += delta (0-based index, delta = +-1)
    void update(uint64_t index, int delta);

    void merge(const L0Sketch& other);

    // nullopt iff no instance decodes; otherwise a coordinate of the support
    // (wrong answers possible within the delta budget). Deterministic given
    // the cell contents.
    std::optional<uint64_t> query() const;

    const SketchParams& params() const { return params_; }
    uint32_t repetitions() const { return reps_; }
    uint32_t levels() const { return levels_; }
    u128 modulus() const { return q_; }

    bool cells_equal(const L0Sketch& other) const {
        return params_ == other.params_ && cells_ == other.cells_;
    }
    bool is_zero() const;

    // one word per field element/counter plus the parameter header
    uint64_t word_cost() const { return 8 + 3ULL * cells_.size(); }

    std::vector<uint64_t> serialize() const;

    static uint32_t repetitions_for(double delta);
    static uint32_t levels_for(uint64_t dimension);

private:
    const Cell& cell(uint32_t inst, uint32_t level) const {
        return cells_[(size_t)inst * levels_ + level];
    }
    Cell& cell(uint32_t inst, uint32_t level) {
        return cells_[(size_t)inst * levels_ + level];
    }
    u128 fingerprint_base(uint32_t inst) const;
    bool level_contains(uint32_t inst, uint32_t level, uint64_t index) const;

    SketchParams params_;
    uint32_t reps_ = 0;
    uint32_t levels_ = 0;
    u128 q_ = 0;
    std::vector<Cell> cells_;
};

// Edge-coordinate bijection: unordered pair {u,v} with 0 <= u < v < n maps to
// a 0-based coordinate in [0, C(n,2)), order-preserving lexicographically.
uint64_t edge_coordinate(uint64_t n, uint64_t u, uint64_t v);
std::pair<uint64_t, uint64_t> coordinate_edge(uint64_t n, uint64_t coord);
inline uint64_t edge_space(uint64_t n) { return n * (n - 1) / 2; }

// Incidence update for the signed vertex vector X_w: the coordinate of edge
// {u,v} carries +1 for the larger endpoint and -1 for the smaller one, so
// merging sketches over a vertex set cancels internal edges.
void update_vertex_sketch(L0Sketch& sketch, uint64_t n, uint64_t w,
                          uint64_t other, int delta);

std::optional<std::pair<uint64_t, uint64_t>> sample_edge(const L0Sketch& sketch,
                                                         uint64_t n);

} // namespace dgs

#endif // DGS_L0_SKETCH_HPP
