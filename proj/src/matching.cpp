#include <dgs/matching.hpp>

#include <algorithm>
#include <cmath>

namespace dgs {

namespace {

std::pair<int, int> canon(int a, int b) {
    return a < b ? std::make_pair(a, b) : std::make_pair(b, a);
}

std::pair<int, int> check_edge(int n, int u, int v) {
    if (u < 0 || v < 0 || u >= n || v >= n) throw MatchingError("vertex out of range");
    if (u == v) throw MatchingError("self-loops are not supported");
    return canon(u, v);
}

int default_k_max(int n, double phi) {
    double lg = std::log2((double)std::max(n, 2));
    return std::max(1, (int)std::ceil(std::pow((double)n, phi) / (8.0 * lg * lg * lg)));
}

} // namespace

GreedyMatching::GreedyMatching(int n, double alpha, MpcEngine& engine, int k_max)
    : n_(n), engine_(engine), matched_(n, 0) {
    if (n < 2) throw MatchingError("matching needs n >= 2");
    if (!(alpha >= 1.0)) throw MatchingError("alpha must be >= 1");
    cap_ = (int)std::ceil(2.0 * n / alpha);
    k_max_ = k_max > 0 ? k_max : default_k_max(n, engine.config().phi);
}

void GreedyMatching::batch_insert(const std::vector<std::pair<int, int>>& batch) {
    if ((int)batch.size() > k_max_) throw MatchingError("insert batch exceeds k_max");
    engine_.batch_intake(std::max<uint64_t>(batch.size(), 1), 2);
    engine_.broadcast(2 * std::max<uint64_t>(batch.size(), 1));
    if ((int)matching_.size() >= cap_) return;
    for (auto& [a, b] : batch) {
        auto e = check_edge(n_, a, b);
        if ((int)matching_.size() >= cap_) break;
        if (matched_[e.first] || matched_[e.second]) continue;
        matching_.insert(e);
        matched_[e.first] = matched_[e.second] = 1;
    }
    engine_.map_over_partition(2 * std::max<uint64_t>(batch.size(), 1));
    engine_.set_resident("greedy-matching", 2ULL * matching_.size() + n_);
}

AklyMatcher::AklyMatcher(const AklyConfig& cfg, MpcEngine& engine)
    : cfg_(cfg), engine_(engine) {
    if (cfg_.n < 2) throw MatchingError("matching needs n >= 2");
    if (!(cfg_.alpha >= 1.0)) throw MatchingError("alpha must be >= 1");
    int k_max = cfg_.k_max > 0 ? cfg_.k_max : default_k_max(cfg_.n, engine.config().phi);
    batch_cap_ = std::max(1, (int)std::floor(std::pow((double)k_max, 1.0 - cfg_.kappa)));
    for (uint64_t guess = 1;; guess <<= 1) {
        Instance inst;
        inst.guess = std::min<uint64_t>(guess, (uint64_t)cfg_.n);
        inst.beta = std::max<uint64_t>(1, (uint64_t)std::ceil((double)inst.guess / cfg_.alpha));
        inst.gamma = std::max<uint64_t>(
            1, (uint64_t)std::ceil((double)inst.guess / (cfg_.alpha * cfg_.alpha)));
        uint64_t base = mix_seeds(cfg_.seed, 0xa17e, guess);
        inst.side = PairwiseHash(mix_seeds(base, 1));
        inst.group_l = PairwiseHash(mix_seeds(base, 2));
        inst.group_r = PairwiseHash(mix_seeds(base, 3));
        PairwiseHash assign(mix_seeds(base, 4));
        for (uint64_t i = 0; i < inst.beta; ++i)
            for (uint64_t j = 0; j < inst.gamma; ++j)
                inst.active.insert({(uint32_t)i,
                                    (uint32_t)assign.bucket(i * inst.gamma + j, inst.beta)});
        inst.partner.assign(cfg_.n, -1);
        instances_.push_back(std::move(inst));
        if (guess >= (uint64_t)cfg_.n) break;
    }
}

bool AklyMatcher::pair_of(const Instance& inst, int u, int v,
                          std::pair<uint32_t, uint32_t>* out) const {
    bool u_left = inst.side.bucket((uint64_t)u, 2) == 0;
    bool v_left = inst.side.bucket((uint64_t)v, 2) == 0;
    if (u_left == v_left) return false;  // both endpoints on one side: inactive
    int l = u_left ? u : v;
    int r = u_left ? v : u;
    std::pair<uint32_t, uint32_t> key{(uint32_t)inst.group_l.bucket((uint64_t)l, inst.beta),
                                      (uint32_t)inst.group_r.bucket((uint64_t)r, inst.beta)};
    if (!inst.active.count(key)) return false;
    *out = key;
    return true;
}

L0Sketch& AklyMatcher::sketch_for(Instance& inst, std::pair<uint32_t, uint32_t> key) {
    auto it = inst.sketches.find(key);
    if (it == inst.sketches.end()) {
        SketchParams p{edge_space((uint64_t)cfg_.n), 0.125,
                       mix_seeds(cfg_.seed, inst.guess,
                                 ((uint64_t)key.first << 32) | key.second)};
        it = inst.sketches.emplace(key, L0Sketch(p)).first;
    }
    return it->second;
}

void AklyMatcher::repair_matching(Instance& inst, const std::set<int>& touched) {
    // drop matches on touched vertices, then re-maximalize greedily over the
    // sparsifier; maximality gives the 2-approximation on H
    for (int v : touched) {
        int p = inst.partner[v];
        if (p < 0) continue;
        inst.matching.erase(canon(v, p));
        inst.partner[v] = inst.partner[p] = -1;
    }
    for (auto& [key, e] : inst.sparsifier) {
        if (inst.partner[e.first] >= 0 || inst.partner[e.second] >= 0) continue;
        inst.matching.insert(canon(e.first, e.second));
        inst.partner[e.first] = e.second;
        inst.partner[e.second] = e.first;
    }
}

void AklyMatcher::batch_update(const std::vector<GraphUpdate>& updates) {
    if ((int)updates.size() > batch_cap_) throw MatchingError("batch exceeds the cap");
    engine_.batch_intake(std::max<uint64_t>(updates.size(), 1), 3);
    engine_.broadcast(3 * std::max<uint64_t>(updates.size(), 1));
    for (auto& up : updates) {
        auto e = check_edge(cfg_.n, up.u, up.v);
        if (up.insert) {
            if (!edges_.insert(e).second) throw MatchingError("duplicate edge insert");
        } else if (!edges_.erase(e)) {
            throw MatchingError("deleting an absent edge");
        }
    }
    for (auto& inst : instances_) {
        std::set<std::pair<uint32_t, uint32_t>> touched_pairs;
        for (auto& up : updates) {
            std::pair<uint32_t, uint32_t> key;
            if (!pair_of(inst, up.u, up.v, &key)) continue;
            auto e = canon(up.u, up.v);
            sketch_for(inst, key).update(edge_coordinate((uint64_t)cfg_.n, e.first, e.second),
                                         up.insert ? +1 : -1);
            touched_pairs.insert(key);
        }
        if (touched_pairs.empty()) continue;
        std::set<int> touched_vertices;
        for (auto& key : touched_pairs) {
            auto old = inst.sparsifier.find(key);
            if (old != inst.sparsifier.end()) {
                touched_vertices.insert(old->second.first);
                touched_vertices.insert(old->second.second);
                inst.sparsifier.erase(old);
            }
            auto sample = sample_edge(inst.sketches.at(key), (uint64_t)cfg_.n);
            if (!sample) continue;
            auto e = canon((int)sample->first, (int)sample->second);
            if (!edges_.count(e)) {
                ++sketch_failures_;
                continue;
            }
            inst.sparsifier[key] = e;
            touched_vertices.insert(e.first);
            touched_vertices.insert(e.second);
        }
        repair_matching(inst, touched_vertices);
    }
    engine_.tree_aggregate(std::max<uint64_t>(updates.size(), 1), 3);
    engine_.map_over_partition(2 * std::max<uint64_t>(updates.size(), 1));
    charge_residents();
}

std::vector<int> AklyMatcher::instance_sizes() const {
    std::vector<int> out;
    for (auto& inst : instances_) out.push_back((int)inst.matching.size());
    return out;
}

int AklyMatcher::best_instance() const {
    int best = 0;
    for (int i = 1; i < (int)instances_.size(); ++i)
        if (instances_[i].matching.size() > instances_[best].matching.size()) best = i;
    return best;
}

const std::set<std::pair<int, int>>& AklyMatcher::query() const {
    return instances_[best_instance()].matching;
}

uint64_t AklyMatcher::allocated_sketches() const {
    uint64_t count = 0;
    for (auto& inst : instances_) count += inst.sketches.size();
    return count;
}

void AklyMatcher::charge_residents() {
    uint64_t words = 1 + 2ULL * edges_.size();
    for (auto& inst : instances_) {
        for (auto& [key, sk] : inst.sketches) words += sk.word_cost();
        words += 4ULL * inst.sparsifier.size() + 2ULL * inst.matching.size();
    }
    engine_.set_resident("active-pair-sketches", words);
}

MatchingTester::MatchingTester(int n, int k, Mode mode, uint64_t seed)
    : n_(n), k_(k), mode_(mode), seed_(seed) {
    if (n < 2 || k < 1) throw MatchingError("tester needs n >= 2 and k >= 1");
    if (mode_ == Mode::dynamic) {
        groups_ = (uint32_t)std::min<int64_t>(n, 4LL * k);
        group_hash_ = PairwiseHash(mix_seeds(seed, 0x7e57e5));
        partner_.assign(n, -1);
    } else {
        partner_.assign(n, -1);
    }
}

void MatchingTester::repair_matching(const std::set<int>& touched) {
    for (int v : touched) {
        int p = partner_[v];
        if (p < 0) continue;
        matching_.erase(canon(v, p));
        partner_[v] = partner_[p] = -1;
    }
    for (auto& [key, e] : sparsifier_) {
        if (partner_[e.first] >= 0 || partner_[e.second] >= 0) continue;
        matching_.insert(e);
        partner_[e.first] = e.second;
        partner_[e.second] = e.first;
    }
}

void MatchingTester::apply(const std::vector<GraphUpdate>& updates) {
    if (mode_ == Mode::insertion_only) {
        for (auto& up : updates) {
            if (!up.insert) throw MatchingError("insertion-only tester got a delete");
            auto e = check_edge(n_, up.u, up.v);
            if ((int)matching_.size() >= k_) return;  // cap reached, verdict fixed
            if (partner_[e.first] >= 0 || partner_[e.second] >= 0) continue;
            matching_.insert(e);
            partner_[e.first] = e.second;
            partner_[e.second] = e.first;
        }
        return;
    }
    std::set<std::pair<uint32_t, uint32_t>> touched_pairs;
    for (auto& up : updates) {
        auto e = check_edge(n_, up.u, up.v);
        if (up.insert) {
            if (!edges_.insert(e).second) throw MatchingError("duplicate edge insert");
        } else if (!edges_.erase(e)) {
            throw MatchingError("deleting an absent edge");
        }
        uint32_t a = (uint32_t)group_hash_.bucket((uint64_t)e.first, groups_);
        uint32_t b = (uint32_t)group_hash_.bucket((uint64_t)e.second, groups_);
        auto key = a < b ? std::make_pair(a, b) : std::make_pair(b, a);
        auto it = sketches_.find(key);
        if (it == sketches_.end()) {
            SketchParams p{edge_space((uint64_t)n_), 0.125,
                           mix_seeds(seed_, ((uint64_t)key.first << 32) | key.second)};
            it = sketches_.emplace(key, L0Sketch(p)).first;
        }
        it->second.update(edge_coordinate((uint64_t)n_, e.first, e.second),
                          up.insert ? +1 : -1);
        touched_pairs.insert(key);
    }
    std::set<int> touched_vertices;
    for (auto& key : touched_pairs) {
        auto old = sparsifier_.find(key);
        if (old != sparsifier_.end()) {
            touched_vertices.insert(old->second.first);
            touched_vertices.insert(old->second.second);
            sparsifier_.erase(old);
        }
        auto sample = sample_edge(sketches_.at(key), (uint64_t)n_);
        if (!sample) continue;
        auto e = canon((int)sample->first, (int)sample->second);
        if (!edges_.count(e)) continue;  // decode failure
        sparsifier_[key] = e;
        touched_vertices.insert(e.first);
        touched_vertices.insert(e.second);
    }
    repair_matching(touched_vertices);
}

uint64_t MatchingTester::word_cost() const {
    uint64_t words = (uint64_t)n_ + 2ULL * matching_.size();
    for (auto& [key, sk] : sketches_) words += sk.word_cost();
    return words;
}

MatchSizeEstimator::MatchSizeEstimator(int n, double alpha, MatchingTester::Mode mode,
                                       uint64_t seed, MpcEngine& engine)
    : engine_(engine) {
    if (!(alpha >= 1.0)) throw MatchingError("alpha must be >= 1");
    double lg = std::log2((double)std::max(n, 2));
    int64_t k_top = (int64_t)std::ceil((double)n / (alpha * alpha) * lg);
    k_top = std::max<int64_t>(k_top, 1);
    for (int64_t k = 1; ; k <<= 1) {
        testers_.push_back(std::make_unique<MatchingTester>(
            n, (int)std::min(k, k_top), mode, mix_seeds(seed, (uint64_t)k)));
        if (k >= k_top) break;
    }
}

void MatchSizeEstimator::apply(const std::vector<GraphUpdate>& updates) {
    engine_.batch_intake(std::max<uint64_t>(updates.size(), 1), 3);
    engine_.broadcast(3 * std::max<uint64_t>(updates.size(), 1));
    uint64_t words = 0;
    for (auto& t : testers_) {
        t->apply(updates);
        words += t->word_cost();
    }
    engine_.map_over_partition(2 * std::max<uint64_t>(updates.size(), 1));
    engine_.set_resident("tester-ladder", words);
}

int MatchSizeEstimator::estimate() const {
    int best = 0;
    for (auto& t : testers_)
        if (t->verdict()) best = std::max(best, t->k());
    return best;
}

std::vector<std::pair<int, bool>> MatchSizeEstimator::ladder() const {
    std::vector<std::pair<int, bool>> out;
    for (auto& t : testers_) out.push_back({t->k(), t->verdict()});
    return out;
}

} // namespace dgs
