#ifndef DGS_MATCHING_HPP
#define DGS_MATCHING_HPP

#include <cstdint>
#include <map>
#include <memory>
#include <set>
#include <utility>
#include <vector>

#include <dgs/connectivity.hpp>
#include <dgs/l0_sketch.hpp>
#include <dgs/mpc_engine.hpp>
#include <dgs/rng.hpp>

namespace dgs {

struct MatchingError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

// Insertion-only greedy matching capped at ceil(2n/alpha). While below the
// cap the matching is maximal over everything offered, so its size is at
// least min(cap, max_matching/2).
class GreedyMatching {
public:
    GreedyMatching(int n, double alpha, MpcEngine& engine, int k_max = 0);

    void batch_insert(const std::vector<std::pair<int, int>>& batch);

    int n() const { return n_; }
    int cap() const { return cap_; }
    int k_max() const { return k_max_; }
    int size() const { return (int)matching_.size(); }
    const std::set<std::pair<int, int>>& matching() const { return matching_; }
    bool matched(int v) const { return matched_[v]; }

private:
    int n_;
    MpcEngine& engine_;
    int cap_;
    int k_max_;
    std::set<std::pair<int, int>> matching_;
    std::vector<char> matched_;
};

// Dynamic O(alpha)-approximate matching via active-pair sparsification.
// Per guess OPT' (powers of two up to n): vertices hash into sides L/R, then
// into beta = ceil(OPT'/alpha) groups per side; every L-group gets
// gamma = ceil(OPT'/alpha^2) R-groups assigned (with replacement). Each
// active group pair keeps one l0 sampler over its edges; the sampler outputs
// form the sparsifier H, on which a maximal matching is repaired after every
// batch. The answer is the largest matching over all guesses.
struct AklyConfig {
    int n = 2;
    double alpha = 4.0;
    uint64_t seed = 0;
    double kappa = 0.25;  // batch cap exponent: cap = max(1, k_max^(1-kappa))
    int k_max = 0;
};

class AklyMatcher {
public:
    AklyMatcher(const AklyConfig& cfg, MpcEngine& engine);

    void batch_update(const std::vector<GraphUpdate>& updates);

    int n() const { return cfg_.n; }
    int batch_cap() const { return batch_cap_; }
    int instances() const { return (int)instances_.size(); }
    std::vector<int> instance_sizes() const;
    int best_instance() const;
    const std::set<std::pair<int, int>>& query() const;  // best maintained matching
    int size() const { return (int)query().size(); }
    // sampler outputs that named a currently absent edge (delta-budget events)
    uint64_t sketch_failures() const { return sketch_failures_; }
    uint64_t allocated_sketches() const;

private:
    struct Instance {
        uint64_t guess;
        uint64_t beta, gamma;
        PairwiseHash side, group_l, group_r;
        std::set<std::pair<uint32_t, uint32_t>> active;            // (L_i, R_j)
        std::map<std::pair<uint32_t, uint32_t>, L0Sketch> sketches;  // lazy
        std::map<std::pair<uint32_t, uint32_t>, std::pair<int, int>> sparsifier;
        std::set<std::pair<int, int>> matching;
        std::vector<int> partner;
    };

    // the active pair an edge lands in, if any
    bool pair_of(const Instance& inst, int u, int v,
                 std::pair<uint32_t, uint32_t>* out) const;
    L0Sketch& sketch_for(Instance& inst, std::pair<uint32_t, uint32_t> key);
    void repair_matching(Instance& inst, const std::set<int>& touched);
    void charge_residents();

    AklyConfig cfg_;
    MpcEngine& engine_;
    int batch_cap_;
    std::vector<Instance> instances_;
    std::set<std::pair<int, int>> edges_;  // current graph, for output validation
    uint64_t sketch_failures_ = 0;
};

// Distinguishes max_matching >= k from max_matching <= k/2.
// insertion_only: greedy matching capped at k, verdict 2|M| >= k.
// dynamic: vertices hash into min(n, 4k) groups, one l0 sampler per group
// pair feeds a sparsifier, verdict from the matching on it.
class MatchingTester {
public:
    enum class Mode { insertion_only, dynamic };

    MatchingTester(int n, int k, Mode mode, uint64_t seed);

    void apply(const std::vector<GraphUpdate>& updates);
    bool verdict() const { return 2 * (int)matching_.size() >= k_; }
    int matching_size() const { return (int)matching_.size(); }
    int k() const { return k_; }
    uint64_t word_cost() const;

private:
    void repair_matching(const std::set<int>& touched);

    int n_;
    int k_;
    Mode mode_;
    uint32_t groups_ = 0;
    PairwiseHash group_hash_;
    std::map<std::pair<uint32_t, uint32_t>, L0Sketch> sketches_;  // lazy
    std::map<std::pair<uint32_t, uint32_t>, std::pair<int, int>> sparsifier_;
    std::set<std::pair<int, int>> matching_;
    std::vector<int> partner_;
    std::set<std::pair<int, int>> edges_;
    uint64_t seed_;
};

// Geometric ladder of testers k = 1, 2, 4, ... up to ceil(n/alpha^2 * log2 n);
// the estimate is the largest k whose tester answers yes.
class MatchSizeEstimator {
public:
    MatchSizeEstimator(int n, double alpha, MatchingTester::Mode mode, uint64_t seed,
                       MpcEngine& engine);

    void apply(const std::vector<GraphUpdate>& updates);
    int estimate() const;
    std::vector<std::pair<int, bool>> ladder() const;  // (k, verdict)

private:
    MpcEngine& engine_;
    std::vector<std::unique_ptr<MatchingTester>> testers_;
};

} // namespace dgs

#endif // DGS_MATCHING_HPP
