#include <dgs/connectivity.hpp>

#include <algorithm>
#include <cmath>
#include <map>
#include <unordered_map>

#include <dgs/oracles.hpp>
#include <dgs/rng.hpp>

namespace dgs {

namespace {

std::pair<int, int> canon(int a, int b) {
    return a < b ? std::make_pair(a, b) : std::make_pair(b, a);
}

// repair rounds for a batch of d deletions: enough halving rounds for up to
// 2d fragments plus slack against failed replacement queries
uint32_t rounds_for_deletes(size_t d) {
    uint32_t b = 0;
    size_t reach = 1;
    while (reach < 2 * std::max<size_t>(d, 1)) { reach <<= 1; ++b; }
    return b + 3;
}

} // namespace

Connectivity::Connectivity(const ConnectivityConfig& cfg, MpcEngine& engine)
    : cfg_(cfg), engine_(engine), forest_(cfg.n) {
    if (cfg_.n < 2) throw ConnectivityError("connectivity needs n >= 2");
    if ((uint64_t)cfg_.n != engine_.config().n)
        throw ConnectivityError("engine configured for a different n");
    double lg = std::log2((double)cfg_.n);
    if (cfg_.mode == SketchMode::batched) {
        t_ = (uint32_t)std::ceil(2.0 * lg);
        delta_ = 0.25;
    } else {
        t_ = 1;
        delta_ = 1.0 / ((double)cfg_.n * cfg_.n * cfg_.n);
    }
    if (cfg_.k_max > 0) {
        k_max_ = cfg_.k_max;
    } else {
        double cube = lg * lg * lg;
        k_max_ = (int)std::ceil(std::pow((double)cfg_.n, engine_.config().phi) / (8.0 * cube));
        k_max_ = std::max(k_max_, 1);
    }
    comp_.resize(cfg_.n);
    for (int v = 0; v < cfg_.n; ++v) comp_[v] = v;
    rebuild_generation();
    charge_residents();
}

std::pair<int, int> Connectivity::check_edge(int u, int v) const {
    if (u < 0 || v < 0 || u >= cfg_.n || v >= cfg_.n)
        throw ConnectivityError("vertex out of range");
    if (u == v) throw ConnectivityError("self-loops are not supported");
    return canon(u, v);
}

bool Connectivity::has_edge(int u, int v) const {
    return edges_.count(check_edge(u, v)) > 0;
}

int Connectivity::component_of(int v) const {
    if (v < 0 || v >= cfg_.n) throw ConnectivityError("vertex out of range");
    return comp_[v];
}

void Connectivity::rebuild_generation() {
    uint64_t gen_seed = mix_seeds(cfg_.seed, generation_);
    bank_.assign(cfg_.n, {});
    SketchParams p{edge_space((uint64_t)cfg_.n), delta_, 0};
    for (int v = 0; v < cfg_.n; ++v) {
        bank_[v].reserve(t_);
        for (uint32_t i = 0; i < t_; ++i) {
            p.seed = mix_seeds(gen_seed, i);
            bank_[v].emplace_back(p);
        }
    }
    for (auto& [u, v] : edges_) {
        for (uint32_t i = 0; i < t_; ++i) {
            update_vertex_sketch(bank_[u][i], cfg_.n, u, v, +1);
            update_vertex_sketch(bank_[v][i], cfg_.n, v, u, +1);
        }
    }
    consumed_ = 0;
}

uint32_t Connectivity::consume_sketches(uint32_t count) {
    if (cfg_.mode == SketchMode::single_update) return 0;
    count = std::min(count, t_);
    if (consumed_ + count > t_) {
        ++generation_;
        rebuild_generation();
    }
    uint32_t first = consumed_;
    consumed_ += count;
    return first;
}

void Connectivity::apply_edge(int u, int v, int delta) {
    auto e = canon(u, v);
    if (delta > 0) edges_.insert(e);
    else edges_.erase(e);
    for (uint32_t i = 0; i < t_; ++i) {
        update_vertex_sketch(bank_[u][i], cfg_.n, u, v, delta);
        update_vertex_sketch(bank_[v][i], cfg_.n, v, u, delta);
    }
}

void Connectivity::relabel_tour(int tid) {
    auto vs = forest_.tour_vertices(tid);
    int label = vs.front();  // tour_vertices is sorted ascending
    for (int v : vs) comp_[v] = label;
}

void Connectivity::charge_residents() {
    engine_.set_resident("sketch-bank", bank_word_cost());
    engine_.set_resident("spanning-forest", forest_.word_cost());
    engine_.set_resident("edge-set", 1 + 2ULL * edges_.size());
    engine_.set_resident("component-map", (uint64_t)cfg_.n);
}

uint64_t Connectivity::bank_word_cost() const {
    uint64_t per = bank_.empty() || bank_[0].empty() ? 0 : bank_[0][0].word_cost();
    return per * (uint64_t)cfg_.n * t_;
}

const L0Sketch& Connectivity::vertex_sketch(int v, uint32_t instance) const {
    if (v < 0 || v >= cfg_.n || instance >= t_)
        throw ConnectivityError("sketch index out of range");
    return bank_[v][instance];
}

bool Connectivity::bank_matches_rebuild() const {
    uint64_t gen_seed = mix_seeds(cfg_.seed, generation_);
    SketchParams p{edge_space((uint64_t)cfg_.n), delta_, 0};
    for (uint32_t i = 0; i < t_; ++i) {
        p.seed = mix_seeds(gen_seed, i);
        for (int v = 0; v < cfg_.n; ++v) {
            L0Sketch fresh(p);
            for (auto& [a, b] : edges_) {
                if (a == v) update_vertex_sketch(fresh, cfg_.n, v, b, +1);
                else if (b == v) update_vertex_sketch(fresh, cfg_.n, v, a, +1);
            }
            if (!fresh.cells_equal(bank_[v][i])) return false;
        }
    }
    return true;
}

L0Sketch Connectivity::merged_group_sketch(const std::vector<int>& vertices,
                                           uint32_t instance) const {
    L0Sketch acc = bank_[vertices.front()][instance];
    for (size_t i = 1; i < vertices.size(); ++i) acc.merge(bank_[vertices[i]][instance]);
    return acc;
}

void Connectivity::insert(int u, int v) {
    auto e = check_edge(u, v);
    if (edges_.count(e)) throw ConnectivityError("duplicate edge insert");
    engine_.broadcast(3);
    engine_.map_over_partition(2);
    apply_edge(e.first, e.second, +1);
    if (comp_[u] != comp_[v]) {
        forest_.batch_join({{u, v}});
        forest_edges_.insert(e);
        relabel_tour(forest_.tour_of(u));
        engine_.map_over_partition(2);
    }
    charge_residents();
}

void Connectivity::erase(int u, int v) {
    auto e = check_edge(u, v);
    if (!edges_.count(e)) throw ConnectivityError("deleting an absent edge");
    engine_.broadcast(3);
    engine_.map_over_partition(2);
    apply_edge(e.first, e.second, -1);
    if (!forest_edges_.count(e)) {
        charge_residents();
        return;
    }
    forest_edges_.erase(e);
    auto [tu, tv] = forest_.split(e.first, e.second);
    uint32_t first = consume_sketches(1);
    auto joined = repair_rounds({tu, tv}, first, 1);
    if (joined.empty()) {
        relabel_tour(forest_.tour_of(u));
        relabel_tour(forest_.tour_of(v));
    }
    engine_.map_over_partition(2);
    charge_residents();
}

std::vector<std::pair<int, int>> Connectivity::repair_rounds(
    const std::vector<int>& fragment_tours, uint32_t first_instance, uint32_t rounds) {
    // union-find over fragment groups; a group's sketch is the merge of the
    // member vertices' sketches and therefore samples a cut edge of the group
    std::vector<int> frag_ids(fragment_tours);
    std::sort(frag_ids.begin(), frag_ids.end());
    frag_ids.erase(std::unique(frag_ids.begin(), frag_ids.end()), frag_ids.end());
    int p = (int)frag_ids.size();
    oracle::UnionFind groups(std::max(p, 1));
    std::unordered_map<int, int> frag_of;  // vertex -> fragment index
    std::vector<std::vector<int>> members(p);
    for (int i = 0; i < p; ++i) {
        members[i] = forest_.tour_vertices(frag_ids[i]);
        for (int v : members[i]) frag_of[v] = i;
    }
    // a sketch wider than one machine is streamed in capacity-sized pieces
    uint64_t chunk = bank_.empty() || bank_[0].empty() ? 1 : bank_[0][0].word_cost();
    chunk = std::min(chunk, engine_.machine_capacity());
    std::vector<std::pair<int, int>> realized;
    for (uint32_t r = 0; r < rounds; ++r) {
        // the full schedule is charged even after all groups settle, so the
        // round count depends only on the batch size
        uint64_t total_vertices = 0;
        for (auto& m : members) total_vertices += m.size();
        engine_.parallel_tree_aggregate(std::max<uint64_t>(total_vertices, 1), chunk,
                                        std::max<uint64_t>(total_vertices, 1));
        engine_.broadcast(2ULL * std::max(p, 1) + 1);
        if (p == 0) continue;
        uint32_t inst = cfg_.mode == SketchMode::single_update
                            ? 0
                            : std::min(first_instance + r, t_ - 1);
        // one replacement candidate per current group, from the group leaders
        std::map<int, std::pair<int, int>> candidate;
        for (int i = 0; i < p; ++i) {
            if (groups.find(i) != i) continue;
            std::vector<int> vs;
            for (int j = 0; j < p; ++j)
                if (groups.find(j) == i)
                    vs.insert(vs.end(), members[j].begin(), members[j].end());
            auto sample = sample_edge(merged_group_sketch(vs, inst), (uint64_t)cfg_.n);
            if (!sample) { ++sampler_misses_; continue; }
            auto [a, b] = *sample;
            auto fa = frag_of.find((int)a);
            auto fb = frag_of.find((int)b);
            if (!edges_.count(canon((int)a, (int)b)) || fa == frag_of.end() ||
                fb == frag_of.end() || groups.find(fa->second) == groups.find(fb->second)) {
                ++sampler_misses_;  // decode error or stale cut edge
                continue;
            }
            candidate[i] = {(int)a, (int)b};
        }
        for (auto& [g, e] : candidate) {
            auto [a, b] = e;
            if (groups.find(frag_of[a]) == groups.find(frag_of[b])) continue;
            groups.unite(frag_of[a], frag_of[b]);
            realized.push_back(canon(a, b));
        }
    }
    if (!realized.empty()) {
        forest_.batch_join(realized);
        for (auto& e : realized) forest_edges_.insert(e);
    }
    return realized;
}

void Connectivity::batch_insert(const std::vector<std::pair<int, int>>& batch) {
    if ((int)batch.size() > k_max_) throw ConnectivityError("insert batch exceeds k_max");
    std::set<std::pair<int, int>> seen;
    for (auto& [u, v] : batch) {
        auto e = check_edge(u, v);
        if (edges_.count(e) || !seen.insert(e).second)
            throw ConnectivityError("duplicate edge insert");
    }
    engine_.batch_intake(std::max<uint64_t>(batch.size(), 1), 3);
    engine_.map_over_partition(2 * std::max<uint64_t>(batch.size(), 1));
    for (auto& e : seen) apply_edge(e.first, e.second, +1);

    // auxiliary graph on affected components: one edge per component pair
    std::map<std::pair<int, int>, std::pair<int, int>> aux;
    for (auto& [u, v] : seen) {
        if (comp_[u] == comp_[v]) continue;
        auto key = canon(comp_[u], comp_[v]);
        auto it = aux.find(key);
        if (it == aux.end() || canon(u, v) < it->second) aux[key] = canon(u, v);
    }
    engine_.tree_aggregate(std::max<uint64_t>(batch.size(), 1), 3);

    oracle::UnionFind uf(cfg_.n);
    std::vector<std::pair<int, int>> forest_new;
    for (auto& [key, e] : aux)
        if (uf.unite(key.first, key.second)) forest_new.push_back(e);
    engine_.broadcast(2ULL * forest_new.size() + 1);

    if (!forest_new.empty()) {
        forest_.batch_join(forest_new);
        std::set<int> touched;
        for (auto& e : forest_new) {
            forest_edges_.insert(e);
            touched.insert(forest_.tour_of(e.first));
        }
        for (int tid : touched) relabel_tour(tid);
    }
    engine_.map_over_partition(2 * std::max<uint64_t>(batch.size(), 1));
    charge_residents();
}

void Connectivity::batch_delete(const std::vector<std::pair<int, int>>& batch) {
    if ((int)batch.size() > k_max_) throw ConnectivityError("delete batch exceeds k_max");
    std::set<std::pair<int, int>> seen;
    for (auto& [u, v] : batch) {
        auto e = check_edge(u, v);
        if (!edges_.count(e) || !seen.insert(e).second)
            throw ConnectivityError("deleting an absent edge");
    }
    engine_.batch_intake(std::max<uint64_t>(batch.size(), 1), 3);
    engine_.map_over_partition(2 * std::max<uint64_t>(batch.size(), 1));
    // replenishment pass over the bank, charged whether or not a fresh
    // generation is materialized this batch
    engine_.map_over_partition(1);
    for (auto& e : seen) apply_edge(e.first, e.second, -1);

    std::vector<std::pair<int, int>> tree_deletes;
    for (auto& e : seen) {
        if (forest_edges_.erase(e)) tree_deletes.push_back(e);
    }
    std::vector<int> fragments;
    std::vector<int> affected;  // vertices of all fragments, for relabeling
    if (!tree_deletes.empty()) {
        fragments = forest_.batch_split(tree_deletes);
        for (int tid : fragments) {
            auto vs = forest_.tour_vertices(tid);
            affected.insert(affected.end(), vs.begin(), vs.end());
        }
    }
    engine_.broadcast(4ULL * tree_deletes.size() + 1);

    uint32_t rounds = rounds_for_deletes(seen.size());
    uint32_t first = consume_sketches(rounds);
    repair_rounds(fragments, first, rounds);

    // relabel every surviving fragment group to its minimum vertex id; the
    // fragment ids may be stale after the joins, so resolve through members
    std::set<int> final_tours;
    for (int v : affected) final_tours.insert(forest_.tour_of(v));
    for (int tid : final_tours) relabel_tour(tid);
    engine_.map_over_partition(2 * std::max<uint64_t>(batch.size(), 1));
    charge_residents();
}

void Connectivity::apply_batch(const std::vector<GraphUpdate>& updates) {
    std::vector<std::pair<int, int>> ins, del;
    for (auto& u : updates) (u.insert ? ins : del).emplace_back(u.u, u.v);
    if (!ins.empty()) batch_insert(ins);
    if (!del.empty()) batch_delete(del);
}

int Connectivity::count_components() {
    engine_.bulk_sort((uint64_t)cfg_.n, 1);
    std::set<int> ids(comp_.begin(), comp_.end());
    return (int)ids.size();
}

} // namespace dgs
