#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <dgs/harness.hpp>
#include <dgs/oracles.hpp>

using namespace dgs;

TEST_CASE("workload serialize/parse round trip is byte identical") {
    for (const char* kind : {"erdos-renyi-mixed", "path-splitter", "component-churn",
                             "matching-planted", "weight-laddered"}) {
        auto wf = generate(kind, {16, 6, 6, 3});
        auto text = wf.serialize();
        CHECK(WorkloadFile::parse(text).serialize() == text);
    }
}

TEST_CASE("generate is deterministic in the seed") {
    auto a = generate("erdos-renyi-mixed", {8, 5, 4, 1});
    auto b = generate("erdos-renyi-mixed", {8, 5, 4, 1});
    auto c = generate("erdos-renyi-mixed", {8, 5, 4, 2});
    CHECK(a.serialize() == b.serialize());
    CHECK(a.serialize() != c.serialize());
}

TEST_CASE("parser rejects malformed workloads") {
    CHECK_THROWS_AS(WorkloadFile::parse("mode connectivity\nBATCH\n+ 0 1\n"), HarnessError);
    CHECK_THROWS_AS(WorkloadFile::parse("n 4\nmode connectivity\nBATCH\n- 0 1\n"),
                    HarnessError);  // delete of a dead edge
    CHECK_THROWS_AS(WorkloadFile::parse("n 4\nmode connectivity\nBATCH\n+ 0 9\n"),
                    HarnessError);
    CHECK_THROWS_AS(
        WorkloadFile::parse("n 4\nmode connectivity\nBATCH\n+ 0 1\nBATCH\n+ 1 0\n"),
        HarnessError);  // duplicate live edge
}

TEST_CASE("path-splitter deletes always target a current tree edge") {
    auto wf = generate("path-splitter", {16, 9, 6, 7});
    std::set<std::pair<int, int>> live;
    int deletes = 0;
    for (auto& batch : wf.batches) {
        for (auto& op : batch) {
            if (op.kind != '+') continue;
            live.insert({op.u, op.v});
        }
        for (auto& op : batch) {
            if (op.kind != '-') continue;
            ++deletes;
            CHECK(live.erase({op.u, op.v}) == 1);
        }
        // forest invariant: every live edge is a tree edge
        oracle::UnionFind uf(wf.n);
        for (auto& e : live) CHECK(uf.unite(e.first, e.second));
    }
    CHECK(deletes > 0);
}

TEST_CASE("matching-planted embeds the advertised maximum matching") {
    auto wf = generate("matching-planted", {12, 8, 4, 5});
    std::set<std::pair<int, int>> live;
    std::set<std::pair<int, int>> planted;  // both endpoints previously unseen
    std::set<int> seen;
    for (auto& batch : wf.batches) {
        for (auto& op : batch) {
            if (op.kind == '+') {
                live.insert({op.u, op.v});
                if (!seen.count(op.u) && !seen.count(op.v)) planted.insert({op.u, op.v});
                seen.insert(op.u);
                seen.insert(op.v);
            } else if (op.kind == '-') {
                live.erase({op.u, op.v});
            }
        }
        std::vector<std::pair<int, int>> edges(live.begin(), live.end());
        if (!edges.empty())
            CHECK(oracle::max_matching_exact(wf.n, edges) == (int)planted.size());
    }
    CHECK(planted.size() >= 2);
}

TEST_CASE("empty workload gives an empty passing report") {
    auto wf = WorkloadFile::parse("n 4\nmode connectivity\n");
    auto report = run(wf, {});
    CHECK(report.batches.empty());
    CHECK(report.query_count == 0);
    CHECK(report.passed);
    CHECK(report.error.empty());
    CHECK(report.json_lines().find("\"summary\":true") != std::string::npos);
}

TEST_CASE("connectivity sample run passes every oracle check") {
    auto wf = generate("erdos-renyi-mixed", {32, 10, 8, 11});
    auto report = run(wf, {});
    CHECK(report.passed);
    CHECK(report.query_count == 10);
    CHECK(report.failure_count == 0);
    CHECK(report.max_rounds > 0);
    CHECK(report.peak_memory > 0);
}

TEST_CASE("replay determinism: identical config gives identical reports") {
    auto wf = generate("component-churn", {24, 8, 6, 13});
    RunConfig cfg;
    cfg.seed = 21;
    auto a = run(wf, cfg);
    auto b = run(wf, cfg);
    CHECK(a.json_lines() == b.json_lines());
}

TEST_CASE("forced per-batch cap violation aborts with a structured error") {
    // n=16, phi=0.5 -> s=4; one batch of 100 updates blows the intake cap
    WorkloadFile wf;
    wf.n = 16;
    wf.mode = WorkloadMode::connectivity;
    std::vector<WorkloadOp> batch;
    for (int u = 0; u < 15 && (int)batch.size() < 100; ++u)
        for (int v = u + 1; v < 16 && (int)batch.size() < 100; ++v)
            batch.push_back({'+', u, v, 1});
    wf.batches.push_back(batch);
    auto report = run(wf, {});
    CHECK(!report.passed);
    CHECK(report.error.find("batch 0") != std::string::npos);
    CHECK(!report.error.empty());
}

TEST_CASE("every mode runs its natural workload end to end") {
    struct Case {
        const char* kind;
        WorkloadMode mode;
    };
    for (auto c : {Case{"weight-laddered", WorkloadMode::msf_approx},
                   Case{"matching-planted", WorkloadMode::match_akly},
                   Case{"erdos-renyi-mixed", WorkloadMode::bipartite},
                   Case{"matching-planted", WorkloadMode::match_size}}) {
        auto wf = generate(c.kind, {24, 6, 6, 17});
        wf.mode = c.mode;
        RunConfig cfg;
        cfg.seed = 5;
        auto report = run(wf, cfg);
        INFO(c.kind, " as ", mode_name(c.mode), ": ", report.error);
        CHECK(report.error.empty());
        CHECK(report.passed);
    }
}

TEST_CASE("insertion-only modes run on insert-only workloads") {
    WorkloadFile wf;
    wf.n = 16;
    std::vector<WorkloadOp> batch;
    for (int i = 0; i < 8; ++i) batch.push_back({'+', 2 * i, 2 * i + 1, 1});
    batch.push_back({'Q', 0, 0, 1});
    wf.batches.push_back(batch);
    for (auto mode : {WorkloadMode::msf_exact, WorkloadMode::match_greedy}) {
        wf.mode = mode;
        auto report = run(wf, {});
        INFO(mode_name(mode), ": ", report.error);
        CHECK(report.passed);
        CHECK(report.failure_count == 0);
    }
}
