#include <dgs/l0_sketch.hpp>

#include <cmath>
#include <map>

#include <dgs/rng.hpp>

namespace dgs {

uint32_t L0Sketch::repetitions_for(double delta) {
    return (uint32_t)std::ceil(4.0 * std::log(1.0 / delta));
}

uint32_t L0Sketch::levels_for(uint64_t dimension) {
    uint32_t bits = 0;
    uint64_t v = 1;
    while (v < dimension) { v <<= 1; ++bits; }  // bits = ceil(log2 N)
    return bits + 1;
}

L0Sketch::L0Sketch(SketchParams params) : params_(params) {
    if (params_.dimension < 1) throw SketchError("sketch dimension must be >= 1");
    if (!(params_.failure_prob > 0.0 && params_.failure_prob < 1.0))
        throw SketchError("failure probability must lie in (0,1)");
    reps_ = repetitions_for(params_.failure_prob);
    levels_ = levels_for(params_.dimension);
    u128 n3 = (u128)params_.dimension * params_.dimension * params_.dimension;
    // banks hold many sketches of one dimension; cache the modulus
    static std::map<uint64_t, u128> prime_cache;
    auto it = prime_cache.find(params_.dimension);
    if (it == prime_cache.end())
        it = prime_cache.emplace(params_.dimension, next_prime_above(n3)).first;
    q_ = it->second;
    cells_.assign((size_t)reps_ * levels_, Cell{});
}

u128 L0Sketch::fingerprint_base(uint32_t inst) const {
    uint64_t s = mix_seeds(params_.seed, 0xf1c9ea11ULL, inst);
    // r in [2, q-1]
    u128 span = q_ - 2;
    u128 r = ((u128)splitmix64(s) << 64 | splitmix64(s ^ 0x9d2c5680ULL)) % span;
    return r + 2;
}

bool L0Sketch::level_contains(uint32_t inst, uint32_t level, uint64_t index) const {
    if (level == 0) return true;
    PairwiseHash h(mix_seeds(params_.seed, inst, level));
    return h(index) < (PairwiseHash::kPrime >> level);
}

void L0Sketch::update(uint64_t index, int delta) {
    if (index >= params_.dimension) throw SketchError("sketch index out of range");
    uint64_t w = index + 1;  // internal coordinates are 1-based
    for (uint32_t inst = 0; inst < reps_; ++inst) {
        u128 term = powmod(fingerprint_base(inst), w, q_);
        for (uint32_t level = 0; level < levels_; ++level) {
            if (!level_contains(inst, level, index)) continue;
            Cell& c = cell(inst, level);
            c.count += delta;
            c.wsum += delta * (int64_t)w;
            c.fingerprint = (delta > 0) ? (c.fingerprint + term) % q_
                                        : (c.fingerprint + q_ - term) % q_;
        }
    }
}

void L0Sketch::merge(const L0Sketch& other) {
    if (!(params_ == other.params_))
        throw SketchError("cannot merge sketches with mismatched parameters");
    for (size_t i = 0; i < cells_.size(); ++i) {
        cells_[i].count += other.cells_[i].count;
        cells_[i].wsum += other.cells_[i].wsum;
        cells_[i].fingerprint = (cells_[i].fingerprint + other.cells_[i].fingerprint) % q_;
    }
}

std::optional<uint64_t> L0Sketch::query() const {
    for (uint32_t inst = 0; inst < reps_; ++inst) {
        for (uint32_t level = levels_; level-- > 0;) {
            const Cell& c = cell(inst, level);
            if (c.count == 0) continue;
            if (c.wsum % c.count != 0) continue;
            int64_t w = c.wsum / c.count;
            if (w < 1 || (uint64_t)w > params_.dimension) continue;
            u128 cnt = c.count >= 0 ? (u128)c.count % q_
                                    : q_ - ((u128)(-c.count) % q_);
            u128 expect = mulmod(cnt, powmod(fingerprint_base(inst), (u128)w, q_), q_);
            if (expect != c.fingerprint) continue;
            return (uint64_t)w - 1;
        }
    }
    return std::nullopt;
}

bool L0Sketch::is_zero() const {
    for (const Cell& c : cells_)
        if (c.count != 0 || c.wsum != 0 || c.fingerprint != 0) return false;
    return true;
}

std::vector<uint64_t> L0Sketch::serialize() const {
    std::vector<uint64_t> out;
    out.reserve(8 + cells_.size() * 4);
    out.push_back(params_.dimension);
    // delta stored as numerator/denominator
    out.push_back((uint64_t)std::llround(params_.failure_prob * 1e18));
    out.push_back(1000000000000000000ULL);
    out.push_back(params_.seed);
    out.push_back(reps_);
    out.push_back(levels_);
    out.push_back((uint64_t)q_);
    out.push_back((uint64_t)(q_ >> 64));
    for (const Cell& c : cells_) {
        out.push_back((uint64_t)c.count);
        out.push_back((uint64_t)c.wsum);
        out.push_back((uint64_t)c.fingerprint);
        out.push_back((uint64_t)(c.fingerprint >> 64));
    }
    return out;
}

uint64_t edge_coordinate(uint64_t n, uint64_t u, uint64_t v) {
    if (u > v) std::swap(u, v);
    if (u == v || v >= n) throw SketchError("invalid edge endpoints");
    return u * (2 * n - u - 1) / 2 + (v - u - 1);
}

std::pair<uint64_t, uint64_t> coordinate_edge(uint64_t n, uint64_t coord) {
    if (coord >= edge_space(n)) throw SketchError("edge coordinate out of range");
    // row u holds n-1-u coordinates; solve with a guarded closed form
    double nf = (double)n;
    uint64_t u = (uint64_t)std::floor(nf - 0.5 - std::sqrt((nf - 0.5) * (nf - 0.5) - 2.0 * (double)coord));
    while (u + 1 < n && u * (2 * n - u - 1) / 2 + (n - 1 - u) <= coord) ++u;
    while (u > 0 && u * (2 * n - u - 1) / 2 > coord) --u;
    uint64_t v = coord - u * (2 * n - u - 1) / 2 + u + 1;
    return {u, v};
}

void update_vertex_sketch(L0Sketch& sketch, uint64_t n, uint64_t w,
                          uint64_t other, int delta) {
    uint64_t coord = edge_coordinate(n, w, other);
    int sign = (w > other) ? 1 : -1;
    sketch.update(coord, sign * delta);
}

std::optional<std::pair<uint64_t, uint64_t>> sample_edge(const L0Sketch& sketch,
                                                         uint64_t n) {
    auto c = sketch.query();
    if (!c) return std::nullopt;
    return coordinate_edge(n, *c);
}

} // namespace dgs
