#ifndef DGS_CONNECTIVITY_HPP
#define DGS_CONNECTIVITY_HPP

#include <cstdint>
#include <set>
#include <utility>
#include <vector>

#include <dgs/euler_tour.hpp>
#include <dgs/l0_sketch.hpp>
#include <dgs/mpc_engine.hpp>

namespace dgs {

struct ConnectivityError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

// single_update: one sketch per vertex at failure probability n^-3, reused
// across operations. batched: ceil(2*log2 n) independent constant-probability
// sketches per vertex, consumed one per repair round and replenished in
// generations rebuilt from the maintained edge set.
enum class SketchMode { single_update, batched };

struct ConnectivityConfig {
    int n = 2;
    SketchMode mode = SketchMode::batched;
    uint64_t seed = 0;
    int k_max = 0;  // max updates per batch; 0 picks ceil(n^phi / (8*log2(n)^3))
};

struct GraphUpdate {
    bool insert = true;
    int u = 0;
    int v = 0;
    int64_t w = 1;
};

// Dynamic spanning forest over a fixed vertex set [0, n). Every vertex keeps
// linear sketches of its signed edge-incidence vector; merging the sketches
// of a vertex set cancels internal edges and samples a cut edge, which
// repairs the forest after deletions. Component ids equal the minimum vertex
// id of the component. All bulk work is charged to the attached engine.
class Connectivity {
public:
    Connectivity(const ConnectivityConfig& cfg, MpcEngine& engine);

    void insert(int u, int v);
    void erase(int u, int v);

    void batch_insert(const std::vector<std::pair<int, int>>& batch);
    void batch_delete(const std::vector<std::pair<int, int>>& batch);
    // mixed batch: insertions are applied first, then deletions
    void apply_batch(const std::vector<GraphUpdate>& updates);

    int n() const { return cfg_.n; }
    int k_max() const { return k_max_; }
    bool has_edge(int u, int v) const;
    const std::set<std::pair<int, int>>& edges() const { return edges_; }
    const std::set<std::pair<int, int>>& forest_edges() const { return forest_edges_; }
    const EulerForest& forest() const { return forest_; }

    int component_of(int v) const;
    bool same_component(int u, int v) const { return component_of(u) == component_of(v); }
    const std::vector<int>& component_labels() const { return comp_; }
    int count_components();  // charges a sort-and-dedup pass

    uint32_t sketches_per_vertex() const { return t_; }
    uint64_t generation() const { return generation_; }
    uint64_t bank_word_cost() const;
    // recomputes every sketch of the current generation from the edge set and
    // compares cell-by-cell with the incrementally maintained bank
    bool bank_matches_rebuild() const;
    const L0Sketch& vertex_sketch(int v, uint32_t instance) const;

    // replacement queries that produced nothing usable (failure-budget events)
    uint64_t sampler_misses() const { return sampler_misses_; }

private:
    std::pair<int, int> check_edge(int u, int v) const;
    void apply_edge(int u, int v, int delta);  // sketches + edge set
    void rebuild_generation();
    uint32_t consume_sketches(uint32_t count);  // first index of a fresh run
    void relabel_tour(int tid);
    void charge_residents();
    L0Sketch merged_group_sketch(const std::vector<int>& vertices, uint32_t instance) const;
    // one repair round over fragment groups; returns realized forest edges
    std::vector<std::pair<int, int>> repair_rounds(
        const std::vector<int>& fragment_tours, uint32_t first_instance, uint32_t rounds);

    ConnectivityConfig cfg_;
    MpcEngine& engine_;
    int k_max_;
    uint32_t t_;
    double delta_;
    uint64_t generation_ = 0;
    uint32_t consumed_ = 0;
    std::vector<std::vector<L0Sketch>> bank_;  // [vertex][instance]
    EulerForest forest_;
    std::set<std::pair<int, int>> edges_;
    std::set<std::pair<int, int>> forest_edges_;
    std::vector<int> comp_;
    uint64_t sampler_misses_ = 0;
};

} // namespace dgs

#endif // DGS_CONNECTIVITY_HPP
