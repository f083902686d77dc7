#ifndef DGS_MSF_APPS_HPP
#define DGS_MSF_APPS_HPP

#include <cstdint>
#include <map>
#include <memory>
#include <set>
#include <utility>
#include <vector>

#include <dgs/connectivity.hpp>
#include <dgs/euler_tour.hpp>
#include <dgs/mpc_engine.hpp>

namespace dgs {

struct MsfError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

struct WeightedInsert {
    int u = 0;
    int v = 0;
    int64_t w = 1;

    bool operator==(const WeightedInsert&) const = default;
};

// Exact minimum spanning forest for insertion-only weighted streams.
// Deterministic: intra-component insertions evict the heaviest path edge when
// the new edge is strictly smaller under the total order (w, u, v), so the
// maintained forest is the unique optimum under that order at all times.
class ExactMsf {
public:
    ExactMsf(int n, MpcEngine& engine, int k_max = 0);

    void insert(int u, int v, int64_t w);
    void batch_insert(const std::vector<WeightedInsert>& batch);

    int n() const { return n_; }
    int k_max() const { return k_max_; }
    int64_t total_weight() const;
    // forest edges sorted by (w, u, v)
    std::vector<WeightedInsert> forest() const;
    bool same_component(int u, int v) const { return forest_.same_tour(u, v); }

private:
    std::pair<int, int> check_edge(int u, int v) const;
    // strict (w, u, v) order between a candidate and a forest edge
    bool improves(int64_t w, std::pair<int, int> e, std::pair<int, int> tree_edge) const;
    std::pair<int, int> heaviest_path_edge(int u, int v) const;
    void charge_residents();

    int n_;
    MpcEngine& engine_;
    int k_max_;
    EulerForest forest_;
    std::map<std::pair<int, int>, int64_t> weight_;
};

// (1+eps)-approximate MSF for dynamic weighted streams: one connectivity
// instance per weight level w_i = (1+eps)^i, i = 0..t with t = ceil(log_{1+eps} W).
// Level i sees exactly the edges of weight <= w_i. The weight estimate and the
// approximate forest are read off the level component maps.
struct ApproxMsfConfig {
    int n = 2;
    double eps = 0.1;
    int64_t W = 1;  // weights live in [1, W]
    uint64_t seed = 0;
    int k_max = 0;
    double phi = 0.5;
    Accounting accounting = Accounting::idealized;
};

class ApproxMsf {
public:
    explicit ApproxMsf(const ApproxMsfConfig& cfg);

    // weighted mixed batch; deletions look their weight up from stored state
    void apply_batch(const std::vector<GraphUpdate>& updates);

    double weight_estimate();
    std::vector<WeightedInsert> forest_approx() const;

    int levels() const { return t_ + 1; }
    double threshold(int level) const;
    const Connectivity& level(int i) const { return *levels_[i]; }
    const std::map<std::pair<int, int>, int64_t>& edge_weights() const { return weights_; }

    // levels run in lockstep: rounds join at a barrier (max), memory sums
    RoundStats take_batch_stats();
    uint64_t peak_total_memory() const;
    uint64_t total_memory_budget() const;
    uint64_t sampler_misses() const;

private:
    ApproxMsfConfig cfg_;
    int t_;
    std::vector<std::unique_ptr<MpcEngine>> engines_;
    std::vector<std::unique_ptr<Connectivity>> levels_;
    std::map<std::pair<int, int>, int64_t> weights_;
};

// Bipartiteness under dynamic updates via the double cover: each edge {u,v}
// of G becomes {u, v+n} and {v, u+n} in G2. G is bipartite iff every
// component of G lifts to two components, i.e. cc(G2) = 2*cc(G).
class DoubleCover {
public:
    DoubleCover(int n, uint64_t seed, double phi, Accounting accounting, int k_max = 0);

    void apply_batch(const std::vector<GraphUpdate>& updates);
    bool bipartite();

    const Connectivity& base() const { return *base_; }
    const Connectivity& cover() const { return *cover_; }
    RoundStats take_batch_stats();
    uint64_t peak_total_memory() const;
    uint64_t total_memory_budget() const;
    uint64_t sampler_misses() const { return base_->sampler_misses() + cover_->sampler_misses(); }

private:
    int n_;
    std::unique_ptr<MpcEngine> base_engine_, cover_engine_;
    std::unique_ptr<Connectivity> base_, cover_;
};

} // namespace dgs

#endif // DGS_MSF_APPS_HPP
