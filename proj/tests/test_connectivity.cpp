#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <set>

#include <dgs/connectivity.hpp>
#include <dgs/oracles.hpp>
#include <dgs/rng.hpp>

using namespace dgs;

namespace {

MpcEngine make_engine(int n, Accounting mode = Accounting::idealized) {
    return MpcEngine({(uint64_t)n, 0.5, mode, 0});
}

bool labels_match(const Connectivity& c,
                  const std::vector<std::pair<int, int>>& edges) {
    auto want = oracle::component_labels(c.n(), edges);
    return c.component_labels() == want;
}

bool forest_is_spanning(const Connectivity& c) {
    // forest edges are real edges, acyclic, and connect exactly the oracle
    // components of the current graph
    std::vector<std::pair<int, int>> all(c.edges().begin(), c.edges().end());
    std::vector<std::pair<int, int>> fe(c.forest_edges().begin(), c.forest_edges().end());
    oracle::UnionFind uf(c.n());
    for (auto& [u, v] : fe) {
        if (!c.edges().count({u, v})) return false;
        if (!uf.unite(u, v)) return false;  // cycle
    }
    return oracle::component_labels(c.n(), fe) == oracle::component_labels(c.n(), all);
}

} // namespace

TEST_CASE("fresh graph: every vertex is its own component") {
    auto eng = make_engine(7);
    Connectivity c({7, SketchMode::single_update, 1}, eng);
    CHECK(c.count_components() == 7);
    for (int v = 0; v < 7; ++v) CHECK(c.component_of(v) == v);
    CHECK(c.forest_edges().empty());
}

TEST_CASE("single inserts follow the minimum-id rule") {
    auto eng = make_engine(8);
    Connectivity c({8, SketchMode::single_update, 2}, eng);
    c.insert(1, 2);
    CHECK(c.forest_edges() == std::set<std::pair<int, int>>{{1, 2}});
    CHECK(c.component_of(1) == 1);
    CHECK(c.component_of(2) == 1);
    c.insert(2, 3);
    c.insert(1, 3);  // closes a cycle: F and C unchanged
    CHECK(c.forest_edges().size() == 2);
    CHECK(c.component_of(3) == 1);
    CHECK(c.count_components() == 6);
    CHECK_THROWS_AS(c.insert(1, 2), ConnectivityError);
    CHECK_THROWS_AS(c.insert(4, 4), ConnectivityError);
    CHECK(forest_is_spanning(c));
}

TEST_CASE("tree-edge delete finds the replacement in a triangle") {
    auto eng = make_engine(8);
    Connectivity c({8, SketchMode::single_update, 3}, eng);
    c.insert(1, 2);
    c.insert(2, 3);
    c.insert(1, 3);
    c.erase(1, 2);
    CHECK(c.same_component(1, 2));
    CHECK(c.count_components() == 6);
    CHECK(forest_is_spanning(c));
    CHECK(labels_match(c, {{2, 3}, {1, 3}}));
}

TEST_CASE("tree-edge delete without replacement splits the component") {
    auto eng = make_engine(8);
    Connectivity c({8, SketchMode::single_update, 4}, eng);
    c.insert(1, 2);
    c.insert(2, 3);
    c.erase(2, 3);
    CHECK(!c.same_component(2, 3));
    CHECK(c.component_of(3) == 3);
    CHECK(c.component_of(1) == 1);
    CHECK(c.component_of(2) == 1);
    CHECK_THROWS_AS(c.erase(2, 3), ConnectivityError);
}

TEST_CASE("non-tree delete changes nothing structural") {
    auto eng = make_engine(8);
    Connectivity c({8, SketchMode::single_update, 5}, eng);
    c.insert(0, 1);
    c.insert(1, 2);
    c.insert(0, 2);
    auto f = c.forest_edges();
    auto labels = c.component_labels();
    c.erase(0, 2);  // {0,2} is the cycle-closing edge
    CHECK(c.forest_edges() == f);
    CHECK(c.component_labels() == labels);
}

TEST_CASE("batch insert merges singletons into one component") {
    auto eng = make_engine(8);
    Connectivity c({8, SketchMode::batched, 6, 8}, eng);
    c.batch_insert({{0, 1}, {1, 2}, {2, 3}, {3, 4}});
    CHECK(c.forest_edges().size() == 4);
    for (int v = 0; v <= 4; ++v) CHECK(c.component_of(v) == 0);
    CHECK(c.count_components() == 4);
    CHECK(forest_is_spanning(c));

    // intra-component batch leaves the forest alone
    auto f = c.forest_edges();
    c.batch_insert({{0, 2}, {1, 4}});
    CHECK(c.forest_edges() == f);
    CHECK_THROWS_AS(c.batch_insert({{0, 2}}), ConnectivityError);
}

TEST_CASE("batch delete of a whole triangle leaves singletons") {
    auto eng = make_engine(8);
    Connectivity c({8, SketchMode::batched, 7, 8}, eng);
    c.batch_insert({{1, 2}, {2, 3}, {1, 3}});
    c.batch_delete({{1, 2}, {2, 3}, {1, 3}});
    CHECK(c.count_components() == 8);
    for (int v = 0; v < 8; ++v) CHECK(c.component_of(v) == v);
    CHECK(c.forest_edges().empty());
    CHECK(c.edges().empty());
}

TEST_CASE("batch delete repairs through sketch samples") {
    int good = 0;
    for (uint64_t seed = 0; seed < 20; ++seed) {
        auto eng = make_engine(16);
        Connectivity c({16, SketchMode::batched, 100 + seed, 16}, eng);
        // dense-ish random graph
        SplitMix rng(seed * 7 + 1);
        std::set<std::pair<int, int>> es;
        while (es.size() < 30) {
            int u = (int)rng.below(16), v = (int)rng.below(16);
            if (u != v) es.insert({std::min(u, v), std::max(u, v)});
        }
        for (auto& [u, v] : es) c.insert(u, v);
        // delete a few spanning-forest edges in one batch
        std::vector<std::pair<int, int>> del;
        for (auto& e : c.forest_edges()) {
            del.push_back(e);
            if (del.size() == 3) break;
        }
        for (auto& e : del) es.erase(e);
        c.batch_delete(del);
        std::vector<std::pair<int, int>> rest(es.begin(), es.end());
        if (c.component_labels() == oracle::component_labels(16, rest) &&
            forest_is_spanning(c))
            ++good;
    }
    CHECK(good >= 18);
}

TEST_CASE("mixed batches track the oracle across a run") {
    int perfect = 0;
    for (uint64_t seed = 0; seed < 10; ++seed) {
        auto eng = make_engine(32);
        Connectivity c({32, SketchMode::batched, 500 + seed, 8}, eng);
        SplitMix rng(seed + 42);
        std::set<std::pair<int, int>> es;
        bool ok = true;
        for (int batch = 0; batch < 12; ++batch) {
            std::vector<GraphUpdate> ups;
            std::set<std::pair<int, int>> pending_ins, pending_del;
            for (int i = 0; i < 8; ++i) {
                bool ins = es.size() < 10 || rng.below(2) == 0;
                if (ins) {
                    int u = (int)rng.below(32), v = (int)rng.below(32);
                    if (u == v) continue;
                    auto e = std::make_pair(std::min(u, v), std::max(u, v));
                    if (es.count(e) || pending_del.count(e) || !pending_ins.insert(e).second)
                        continue;
                    es.insert(e);
                    ups.push_back({true, e.first, e.second, 1});
                } else {
                    std::vector<std::pair<int, int>> avail(es.begin(), es.end());
                    for (auto& p : pending_ins)
                        avail.erase(std::remove(avail.begin(), avail.end(), p), avail.end());
                    if (avail.empty()) continue;
                    auto e = avail[rng.below(avail.size())];
                    es.erase(e);
                    pending_del.insert(e);
                    ups.push_back({false, e.first, e.second, 1});
                }
            }
            c.apply_batch(ups);
            std::vector<std::pair<int, int>> rest(es.begin(), es.end());
            if (c.component_labels() != oracle::component_labels(32, rest)) ok = false;
        }
        if (ok && forest_is_spanning(c)) ++perfect;
        CHECK(c.bank_matches_rebuild());
    }
    CHECK(perfect >= 9);
}

TEST_CASE("incremental bank equals a from-scratch rebuild") {
    auto eng = make_engine(16);
    Connectivity c({16, SketchMode::batched, 11, 16}, eng);
    c.batch_insert({{0, 1}, {1, 2}, {3, 4}, {5, 6}, {0, 6}});
    c.batch_delete({{1, 2}, {0, 6}});
    c.insert(2, 9);
    c.erase(0, 1);
    CHECK(c.bank_matches_rebuild());
}

TEST_CASE("memory is charged to the engine") {
    auto eng = make_engine(32);
    Connectivity c({32, SketchMode::batched, 12, 8}, eng);
    CHECK(eng.resident_total() > 0);
    CHECK(eng.peak_total_memory() >= c.bank_word_cost());
    CHECK(eng.peak_total_memory() <= eng.total_memory_budget());
}

TEST_CASE("batch size cap is enforced and defaults are sane") {
    auto eng = make_engine(256);
    Connectivity c({256, SketchMode::batched, 13}, eng);
    CHECK(c.k_max() >= 1);
    std::vector<std::pair<int, int>> big;
    for (int i = 0; i < c.k_max() + 1; ++i) big.push_back({0, i + 1});
    CHECK_THROWS_AS(c.batch_insert(big), ConnectivityError);
}

TEST_CASE("deterministic given the seed") {
    auto run = [] {
        auto eng = make_engine(16);
        Connectivity c({16, SketchMode::batched, 77, 8}, eng);
        c.batch_insert({{0, 1}, {1, 2}, {2, 3}, {4, 5}});
        c.batch_delete({{1, 2}});
        return std::make_pair(c.component_labels(),
                              std::vector<std::pair<int, int>>(c.forest_edges().begin(),
                                                               c.forest_edges().end()));
    };
    CHECK(run() == run());
}
