#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <set>

#include <dgs/matching.hpp>
#include <dgs/oracles.hpp>

using namespace dgs;

namespace {

MpcEngine make_engine(int n) {
    return MpcEngine({(uint64_t)n, 0.5, Accounting::idealized, 0});
}

bool valid_matching(int n, const std::set<std::pair<int, int>>& m,
                    const std::set<std::pair<int, int>>& graph_edges) {
    std::vector<char> used(n, 0);
    for (auto& [u, v] : m) {
        if (!graph_edges.count({u, v})) return false;
        if (used[u] || used[v]) return false;
        used[u] = used[v] = 1;
    }
    return true;
}

} // namespace

TEST_CASE("greedy adds fresh edges and honors conflicts") {
    auto eng = make_engine(16);
    GreedyMatching gm(16, 2.0, eng, 16);
    gm.batch_insert({{0, 1}});
    CHECK(gm.size() == 1);
    // a fan of edges sharing vertex 4: exactly one lands
    gm.batch_insert({{4, 5}, {4, 6}, {4, 7}, {4, 8}});
    CHECK(gm.size() == 2);
    CHECK(gm.matched(4));
    CHECK(gm.cap() == 16);
}

TEST_CASE("greedy respects the cap") {
    auto eng = make_engine(16);
    GreedyMatching gm(16, 8.0, eng, 16);  // cap = ceil(32/8) = 4
    CHECK(gm.cap() == 4);
    std::vector<std::pair<int, int>> batch;
    for (int i = 0; i < 8; ++i) batch.push_back({2 * i, 2 * i + 1});
    gm.batch_insert(batch);
    CHECK(gm.size() == 4);
}

TEST_CASE("greedy reaches min(cap, max_matching/2) on random streams") {
    SplitMix rng(12);
    for (int trial = 0; trial < 20; ++trial) {
        auto eng = make_engine(16);
        GreedyMatching gm(16, 4.0, eng, 64);  // cap = 8
        std::set<std::pair<int, int>> es;
        std::vector<std::pair<int, int>> stream;
        while (stream.size() < 30) {
            int u = (int)rng.below(16), v = (int)rng.below(16);
            if (u == v) continue;
            auto e = std::make_pair(std::min(u, v), std::max(u, v));
            if (!es.insert(e).second) continue;
            stream.push_back(e);
        }
        gm.batch_insert(stream);
        int nu = oracle::max_matching_exact(16, stream);
        CHECK(gm.size() >= std::min(gm.cap(), (nu + 1) / 2));
        CHECK(valid_matching(16, gm.matching(), es));
    }
}

TEST_CASE("akly: empty graph gives an empty matching") {
    auto eng = make_engine(32);
    AklyMatcher akly({32, 4.0, 9, 0.25, 64}, eng);
    CHECK(akly.size() == 0);
    CHECK(akly.query().empty());
}

TEST_CASE("akly: inserting then deleting the only edge clears the answer") {
    auto eng = make_engine(32);
    AklyMatcher akly({32, 2.0, 10, 0.25, 64}, eng);
    akly.batch_update({{true, 3, 17, 1}});
    akly.batch_update({{false, 3, 17, 1}});
    CHECK(akly.size() == 0);
}

TEST_CASE("akly finds matches in a planted perfect matching") {
    int hits = 0;
    for (uint64_t seed = 0; seed < 10; ++seed) {
        auto eng = make_engine(64);
        AklyMatcher akly({64, 2.0, 100 + seed, 0.25, 64}, eng);
        std::vector<GraphUpdate> ups;
        for (int i = 0; i < 32; ++i) {
            ups.push_back({true, 2 * i, 2 * i + 1, 1});
            if ((int)ups.size() == akly.batch_cap()) {
                akly.batch_update(ups);
                ups.clear();
            }
        }
        if (!ups.empty()) akly.batch_update(ups);
        if (akly.size() >= 1) ++hits;
    }
    CHECK(hits >= 9);
}

TEST_CASE("akly answers are valid matchings of current edges under churn") {
    SplitMix rng(44);
    auto eng = make_engine(64);
    AklyMatcher akly({64, 4.0, 77, 0.25, 64}, eng);
    std::set<std::pair<int, int>> es;
    for (int b = 0; b < 15; ++b) {
        std::vector<GraphUpdate> ups;
        std::set<std::pair<int, int>> touched;
        for (int i = 0; i < 10; ++i) {
            if (!es.empty() && rng.below(3) == 0) {
                auto it = es.begin();
                std::advance(it, rng.below(es.size()));
                if (!touched.insert(*it).second) continue;
                ups.push_back({false, it->first, it->second, 1});
                es.erase(it);
            } else {
                int u = (int)rng.below(64), v = (int)rng.below(64);
                if (u == v) continue;
                auto e = std::make_pair(std::min(u, v), std::max(u, v));
                if (es.count(e) || !touched.insert(e).second) continue;
                es.insert(e);
                ups.push_back({true, e.first, e.second, 1});
            }
        }
        if (ups.empty()) continue;
        akly.batch_update(ups);
        CHECK(valid_matching(64, akly.query(), es));
    }
    CHECK(akly.allocated_sketches() > 0);
}

TEST_CASE("tester says yes on planted size-k matchings, both modes") {
    for (auto mode : {MatchingTester::Mode::insertion_only, MatchingTester::Mode::dynamic}) {
        int yes = 0;
        for (uint64_t seed = 0; seed < 10; ++seed) {
            MatchingTester t(32, 8, mode, 300 + seed);
            std::vector<GraphUpdate> ups;
            for (int i = 0; i < 8; ++i) ups.push_back({true, 2 * i, 2 * i + 1, 1});
            t.apply(ups);
            if (t.verdict()) ++yes;
        }
        CHECK(yes >= 8);
    }
}

TEST_CASE("tester says no on empty and tiny graphs") {
    for (auto mode : {MatchingTester::Mode::insertion_only, MatchingTester::Mode::dynamic}) {
        MatchingTester t(32, 8, mode, 5);
        CHECK(!t.verdict());
        // star union: max matching is 2, far below k/2 = 4
        std::vector<GraphUpdate> ups;
        for (int leaf = 2; leaf < 10; ++leaf) ups.push_back({true, 0, leaf, 1});
        for (int leaf = 12; leaf < 20; ++leaf) ups.push_back({true, 11, leaf, 1});
        t.apply(ups);
        CHECK(!t.verdict());
    }
}

TEST_CASE("tester monotonicity over the ladder, insertion-only") {
    SplitMix rng(31);
    std::vector<GraphUpdate> ups;
    std::set<std::pair<int, int>> es;
    while (ups.size() < 40) {
        int u = (int)rng.below(24), v = (int)rng.below(24);
        if (u == v) continue;
        auto e = std::make_pair(std::min(u, v), std::max(u, v));
        if (!es.insert(e).second) continue;
        ups.push_back({true, e.first, e.second, 1});
    }
    bool seen_true_after_false = false;
    bool prev = true;
    for (int k = 1; k <= 16; k <<= 1) {
        MatchingTester t(24, k, MatchingTester::Mode::insertion_only, 9);
        t.apply(ups);
        if (!prev && t.verdict()) seen_true_after_false = true;
        prev = t.verdict();
    }
    CHECK(!seen_true_after_false);
}

TEST_CASE("size estimate is 0 when empty and tracks a planted matching") {
    auto eng = make_engine(64);
    MatchSizeEstimator est(64, 2.0, MatchingTester::Mode::insertion_only, 8, eng);
    CHECK(est.estimate() == 0);
    std::vector<GraphUpdate> ups;
    for (int i = 0; i < 24; ++i) ups.push_back({true, 2 * i, 2 * i + 1, 1});
    est.apply(ups);
    int e = est.estimate();
    CHECK(e >= 8);   // nu = 24; greedy keeps everything, ladder is powers of two
    CHECK(e <= 64);
}

TEST_CASE("dynamic size estimate shrinks when the matching is deleted") {
    auto eng = make_engine(64);
    MatchSizeEstimator est(64, 2.0, MatchingTester::Mode::dynamic, 13, eng);
    std::vector<GraphUpdate> ins, del;
    for (int i = 0; i < 24; ++i) {
        ins.push_back({true, 2 * i, 2 * i + 1, 1});
        if (i >= 4) del.push_back({false, 2 * i, 2 * i + 1, 1});
    }
    est.apply(ins);
    int before = est.estimate();
    est.apply(del);
    int after = est.estimate();
    CHECK(after <= before);
    CHECK(after <= 8);  // nu is 4 now
}

TEST_CASE("batch caps are enforced") {
    auto eng = make_engine(32);
    AklyMatcher akly({32, 4.0, 1, 0.25, 4}, eng);
    CHECK(akly.batch_cap() >= 1);
    std::vector<GraphUpdate> big;
    for (int i = 0; i < akly.batch_cap() + 1; ++i) big.push_back({true, 0, i + 1, 1});
    CHECK_THROWS_AS(akly.batch_update(big), MatchingError);
    auto eng2 = make_engine(16);
    GreedyMatching gm(16, 2.0, eng2, 2);
    CHECK_THROWS_AS(gm.batch_insert({{0, 1}, {2, 3}, {4, 5}}), MatchingError);
}
