#include <dgs/msf_apps.hpp>

#include <algorithm>
#include <cmath>

#include <dgs/rng.hpp>

namespace dgs {

namespace {

std::pair<int, int> canon(int a, int b) {
    return a < b ? std::make_pair(a, b) : std::make_pair(b, a);
}

} // namespace

ExactMsf::ExactMsf(int n, MpcEngine& engine, int k_max)
    : n_(n), engine_(engine), forest_(n) {
    if (n < 2) throw MsfError("forest needs n >= 2");
    if ((uint64_t)n != engine_.config().n)
        throw MsfError("engine configured for a different n");
    if (k_max > 0) {
        k_max_ = k_max;
    } else {
        double lg = std::log2((double)n);
        k_max_ = std::max(1, (int)std::ceil(std::pow((double)n, engine_.config().phi) /
                                            (8.0 * lg * lg * lg)));
    }
    charge_residents();
}

std::pair<int, int> ExactMsf::check_edge(int u, int v) const {
    if (u < 0 || v < 0 || u >= n_ || v >= n_) throw MsfError("vertex out of range");
    if (u == v) throw MsfError("self-loops are not supported");
    return canon(u, v);
}

bool ExactMsf::improves(int64_t w, std::pair<int, int> e,
                        std::pair<int, int> tree_edge) const {
    int64_t tw = weight_.at(tree_edge);
    if (w != tw) return w < tw;
    return e < tree_edge;
}

std::pair<int, int> ExactMsf::heaviest_path_edge(int u, int v) const {
    auto path = forest_.identify_path(u, v);
    auto heaviest = canon(path[0].first, path[0].second);
    for (size_t i = 1; i < path.size(); ++i) {
        auto e = canon(path[i].first, path[i].second);
        if (!improves(weight_.at(e), e, heaviest)) heaviest = e;
    }
    return heaviest;
}

void ExactMsf::charge_residents() {
    engine_.set_resident("msf-forest", forest_.word_cost() + weight_.size());
}

void ExactMsf::insert(int u, int v, int64_t w) {
    auto e = check_edge(u, v);
    if (weight_.count(e)) throw MsfError("duplicate edge insert");
    engine_.broadcast(4);
    if (!forest_.same_tour(u, v)) {
        forest_.batch_join({e});
        weight_[e] = w;
    } else {
        auto heavy = heaviest_path_edge(u, v);
        engine_.tree_aggregate(1, 4);
        if (improves(w, e, heavy)) {
            forest_.split(heavy.first, heavy.second);
            weight_.erase(heavy);
            forest_.batch_join({e});
            weight_[e] = w;
            engine_.broadcast(4);
        }
    }
    charge_residents();
}

void ExactMsf::batch_insert(const std::vector<WeightedInsert>& batch) {
    if ((int)batch.size() > k_max_) throw MsfError("insert batch exceeds k_max");
    std::vector<std::pair<std::pair<int, int>, int64_t>> pending;
    std::set<std::pair<int, int>> seen;
    for (auto& [u, v, w] : batch) {
        auto e = check_edge(u, v);
        if (weight_.count(e) || !seen.insert(e).second)
            throw MsfError("duplicate edge insert");
        pending.push_back({e, w});
    }
    engine_.batch_intake(std::max<uint64_t>(batch.size(), 1), 4);

    int passes = 0;
    while (!pending.empty()) {
        if (++passes > 8) {
            // rare deep eviction chains: finish one edge at a time
            auto rest = pending;
            pending.clear();
            std::sort(rest.begin(), rest.end(),
                      [](auto& a, auto& b) { return std::tie(a.second, a.first) <
                                                    std::tie(b.second, b.first); });
            for (auto& [e, w] : rest) insert(e.first, e.second, w);
            break;
        }
        std::vector<std::pair<std::pair<int, int>, int64_t>> cross, intra;
        for (auto& p : pending)
            (forest_.same_tour(p.first.first, p.first.second) ? intra : cross).push_back(p);
        engine_.tree_aggregate(std::max<uint64_t>(pending.size(), 1), 4);

        if (!cross.empty()) {
            // one minimum-weight representative per component pair, then a
            // forest of those representatives joins in one shot
            std::map<std::pair<int, int>, std::pair<std::pair<int, int>, int64_t>> best;
            for (auto& [e, w] : cross) {
                auto key = canon(forest_.tour_of(e.first), forest_.tour_of(e.second));
                auto it = best.find(key);
                if (it == best.end() || std::tie(w, e) < std::tie(it->second.second,
                                                                  it->second.first))
                    best[key] = {e, w};
            }
            std::vector<std::pair<std::pair<int, int>, int64_t>> reps;
            for (auto& [key, rep] : best) reps.push_back(rep);
            std::sort(reps.begin(), reps.end(),
                      [](auto& a, auto& b) { return std::tie(a.second, a.first) <
                                                    std::tie(b.second, b.first); });
            std::set<std::pair<int, int>> taken;
            std::vector<std::pair<int, int>> joins;
            for (auto& [e, w] : reps) {
                if (forest_.same_tour(e.first, e.second)) continue;  // settled this pass
                joins.push_back(e);
                weight_[e] = w;
                taken.insert(e);
                forest_.batch_join({e});
            }
            engine_.broadcast(2ULL * joins.size() + 1);
            std::vector<std::pair<std::pair<int, int>, int64_t>> next;
            for (auto& p : cross)
                if (!taken.count(p.first)) next.push_back(p);
            next.insert(next.end(), intra.begin(), intra.end());
            pending = std::move(next);
            continue;
        }

        // all pending edges are intra-component: evict the per-edge heaviest
        // path edge where the candidate improves on it
        engine_.parallel_tree_aggregate(std::max<uint64_t>(intra.size(), 1), 4,
                                        std::max<uint64_t>(intra.size(), 1));
        std::set<std::pair<int, int>> evict;
        for (auto& [e, w] : intra) {
            auto heavy = heaviest_path_edge(e.first, e.second);
            if (improves(w, e, heavy)) evict.insert(heavy);
        }
        engine_.broadcast(2ULL * evict.size() + 1);
        if (evict.empty()) break;  // nothing improves: all candidates are non-tree
        std::vector<std::pair<int, int>> cuts(evict.begin(), evict.end());
        forest_.batch_split(cuts);
        for (auto& e : cuts) {
            pending.push_back({e, weight_.at(e)});
            weight_.erase(e);
        }
    }
    charge_residents();
}

int64_t ExactMsf::total_weight() const {
    int64_t sum = 0;
    for (auto& [e, w] : weight_) sum += w;
    return sum;
}

std::vector<WeightedInsert> ExactMsf::forest() const {
    std::vector<WeightedInsert> out;
    out.reserve(weight_.size());
    for (auto& [e, w] : weight_) out.push_back({e.first, e.second, w});
    std::sort(out.begin(), out.end(), [](const WeightedInsert& a, const WeightedInsert& b) {
        return std::tie(a.w, a.u, a.v) < std::tie(b.w, b.u, b.v);
    });
    return out;
}

ApproxMsf::ApproxMsf(const ApproxMsfConfig& cfg) : cfg_(cfg) {
    if (cfg_.W < 1) throw MsfError("weight bound W must be >= 1");
    if (!(cfg_.eps > 0.0)) throw MsfError("eps must be positive");
    t_ = cfg_.W == 1 ? 0
                     : (int)std::ceil(std::log((double)cfg_.W) / std::log1p(cfg_.eps));
    for (int i = 0; i <= t_; ++i) {
        engines_.push_back(std::make_unique<MpcEngine>(
            EngineConfig{(uint64_t)cfg_.n, cfg_.phi, cfg_.accounting, cfg_.seed}));
        ConnectivityConfig c{cfg_.n, SketchMode::batched,
                             mix_seeds(cfg_.seed, 0x15f1a9 + (uint64_t)i), cfg_.k_max};
        levels_.push_back(std::make_unique<Connectivity>(c, *engines_[i]));
    }
}

double ApproxMsf::threshold(int level) const {
    return std::pow(1.0 + cfg_.eps, (double)level);
}

void ApproxMsf::apply_batch(const std::vector<GraphUpdate>& updates) {
    std::vector<GraphUpdate> resolved;
    for (auto u : updates) {
        auto e = canon(u.u, u.v);
        if (u.insert) {
            if (u.w < 1 || u.w > cfg_.W) throw MsfError("weight outside [1, W]");
            if (!weights_.emplace(e, u.w).second) throw MsfError("duplicate edge insert");
        } else {
            auto it = weights_.find(e);
            if (it == weights_.end()) throw MsfError("deleting an absent edge");
            u.w = it->second;
            weights_.erase(it);
        }
        resolved.push_back(u);
    }
    for (int i = 0; i <= t_; ++i) {
        double thr = threshold(i);
        std::vector<GraphUpdate> part;
        for (auto& u : resolved)
            if ((double)u.w <= thr) part.push_back(u);
        if (!part.empty()) levels_[i]->apply_batch(part);
    }
}

double ApproxMsf::weight_estimate() {
    // n - cc(G)*(1+eps)^{t+1} + sum_{i=0..t} lambda_i * cc(G_i), with
    // lambda_i = (1+eps)^{i+1} - (1+eps)^i: the rounded-weight MSF total,
    // within a (1+eps) factor of the exact weight when every level's
    // component count is right
    double est = (double)cfg_.n;
    est -= (double)levels_[t_]->count_components() * threshold(t_ + 1);
    for (int i = 0; i <= t_; ++i) {
        double lambda = threshold(i + 1) - threshold(i);
        est += lambda * (double)levels_[i]->count_components();
    }
    return est;
}

std::vector<WeightedInsert> ApproxMsf::forest_approx() const {
    std::vector<WeightedInsert> out;
    std::set<std::pair<int, int>> taken;
    for (int i = 0; i <= t_; ++i) {
        const std::vector<int>* below =
            i == 0 ? nullptr : &levels_[i - 1]->component_labels();
        for (auto& e : levels_[i]->forest_edges()) {
            if (below && (*below)[e.first] == (*below)[e.second]) continue;
            if (!taken.insert(e).second) continue;
            auto it = weights_.find(e);
            out.push_back({e.first, e.second, it == weights_.end() ? 0 : it->second});
        }
    }
    return out;
}

RoundStats ApproxMsf::take_batch_stats() {
    RoundStats agg{};
    for (auto& eng : engines_) {
        RoundStats s = eng->take_batch_stats();
        agg.rounds = std::max(agg.rounds, s.rounds);  // levels run in lockstep
        agg.peak_machine_memory = std::max(agg.peak_machine_memory, s.peak_machine_memory);
        agg.total_communication += s.total_communication;
        agg.broadcasts += s.broadcasts;
    }
    return agg;
}

uint64_t ApproxMsf::peak_total_memory() const {
    uint64_t sum = 0;
    for (auto& eng : engines_) sum += eng->peak_total_memory();
    return sum;
}

uint64_t ApproxMsf::total_memory_budget() const {
    uint64_t sum = 0;
    for (auto& eng : engines_) sum += eng->total_memory_budget();
    return sum;
}

uint64_t ApproxMsf::sampler_misses() const {
    uint64_t sum = 0;
    for (auto& l : levels_) sum += l->sampler_misses();
    return sum;
}

DoubleCover::DoubleCover(int n, uint64_t seed, double phi, Accounting accounting,
                         int k_max)
    : n_(n) {
    base_engine_ = std::make_unique<MpcEngine>(
        EngineConfig{(uint64_t)n, phi, accounting, seed});
    cover_engine_ = std::make_unique<MpcEngine>(
        EngineConfig{(uint64_t)(2 * n), phi, accounting, seed});
    base_ = std::make_unique<Connectivity>(
        ConnectivityConfig{n, SketchMode::batched, mix_seeds(seed, 0xb1), k_max},
        *base_engine_);
    cover_ = std::make_unique<Connectivity>(
        ConnectivityConfig{2 * n, SketchMode::batched, mix_seeds(seed, 0xc2),
                           k_max > 0 ? 2 * k_max : 0},
        *cover_engine_);
}

void DoubleCover::apply_batch(const std::vector<GraphUpdate>& updates) {
    std::vector<GraphUpdate> lifted;
    lifted.reserve(2 * updates.size());
    for (auto& u : updates) {
        lifted.push_back({u.insert, u.u, u.v + n_, 1});
        lifted.push_back({u.insert, u.v, u.u + n_, 1});
    }
    base_->apply_batch(updates);
    cover_->apply_batch(lifted);
}

bool DoubleCover::bipartite() {
    return cover_->count_components() == 2 * base_->count_components();
}

RoundStats DoubleCover::take_batch_stats() {
    RoundStats a = base_engine_->take_batch_stats();
    RoundStats b = cover_engine_->take_batch_stats();
    RoundStats agg{};
    agg.rounds = std::max(a.rounds, b.rounds);
    agg.peak_machine_memory = std::max(a.peak_machine_memory, b.peak_machine_memory);
    agg.total_communication = a.total_communication + b.total_communication;
    agg.broadcasts = a.broadcasts + b.broadcasts;
    return agg;
}

uint64_t DoubleCover::peak_total_memory() const {
    return base_engine_->peak_total_memory() + cover_engine_->peak_total_memory();
}

uint64_t DoubleCover::total_memory_budget() const {
    return base_engine_->total_memory_budget() + cover_engine_->total_memory_budget();
}

} // namespace dgs
