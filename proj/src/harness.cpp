#include <dgs/harness.hpp>

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <set>
#include <sstream>

#include <json.hpp>

#include <dgs/connectivity.hpp>
#include <dgs/matching.hpp>
#include <dgs/msf_apps.hpp>
#include <dgs/oracles.hpp>
#include <dgs/rng.hpp>

namespace dgs {

namespace {

const char* kModeNames[] = {"connectivity", "msf-exact",  "msf-approx", "bipartite",
                            "match-greedy", "match-akly", "match-size"};

std::string fmt_double(double x) {
    char buf[64];
    std::snprintf(buf, sizeof(buf), "%g", x);
    return buf;
}

std::pair<int, int> canon(int u, int v) {
    return u < v ? std::make_pair(u, v) : std::make_pair(v, u);
}

} // namespace

std::string mode_name(WorkloadMode mode) { return kModeNames[(int)mode]; }

WorkloadMode mode_from_name(const std::string& name) {
    for (int i = 0; i < 7; ++i)
        if (name == kModeNames[i]) return (WorkloadMode)i;
    throw HarnessError("unknown mode: " + name);
}

std::string WorkloadFile::serialize() const {
    std::ostringstream out;
    out << "n " << n << "\n";
    out << "mode " << mode_name(mode) << "\n";
    if (mode == WorkloadMode::msf_approx) {
        out << "W " << W << "\n";
        out << "eps " << fmt_double(eps) << "\n";
    }
    if (mode == WorkloadMode::match_greedy || mode == WorkloadMode::match_akly ||
        mode == WorkloadMode::match_size) {
        out << "alpha " << fmt_double(alpha) << "\n";
        out << "kappa " << fmt_double(kappa) << "\n";
    }
    for (const auto& batch : batches) {
        out << "BATCH\n";
        for (const auto& op : batch) {
            if (op.kind == 'Q') {
                out << "Q\n";
            } else if (op.kind == '+') {
                out << "+ " << op.u << " " << op.v;
                if (op.w != 1) out << " " << op.w;
                out << "\n";
            } else {
                out << "- " << op.u << " " << op.v << "\n";
            }
        }
    }
    return out.str();
}

WorkloadFile WorkloadFile::parse(const std::string& text) {
    WorkloadFile wf;
    wf.batches.clear();
    std::istringstream in(text);
    std::string line;
    bool in_body = false;
    bool have_n = false, have_mode = false;
    int lineno = 0;
    std::set<std::pair<int, int>> live;
    auto fail = [&](const std::string& msg) {
        throw HarnessError("workload line " + std::to_string(lineno) + ": " + msg);
    };
    // inserts apply before deletes within a batch
    auto settle_batch = [&](const std::vector<WorkloadOp>& batch) {
        for (const auto& op : batch) {
            if (op.kind != '+') continue;
            if (!live.insert(canon(op.u, op.v)).second) fail("duplicate insert of a live edge");
        }
        for (const auto& op : batch) {
            if (op.kind != '-') continue;
            if (!live.erase(canon(op.u, op.v))) fail("delete of an edge that is not live");
        }
    };
    while (std::getline(in, line)) {
        ++lineno;
        while (!line.empty() && (line.back() == '\r' || line.back() == ' ')) line.pop_back();
        if (line.empty() || line[0] == '#') continue;
        std::istringstream ls(line);
        std::string tok;
        ls >> tok;
        if (tok == "BATCH") {
            if (!have_n || !have_mode) fail("BATCH before n/mode header");
            if (in_body) settle_batch(wf.batches.back());
            in_body = true;
            wf.batches.emplace_back();
            continue;
        }
        if (!in_body) {
            if (tok == "n") {
                if (!(ls >> wf.n) || wf.n < 2) fail("bad n");
                have_n = true;
            } else if (tok == "mode") {
                std::string m;
                if (!(ls >> m)) fail("bad mode");
                wf.mode = mode_from_name(m);
                have_mode = true;
            } else if (tok == "W") {
                if (!(ls >> wf.W) || wf.W < 1) fail("bad W");
            } else if (tok == "eps") {
                if (!(ls >> wf.eps) || !(wf.eps > 0)) fail("bad eps");
            } else if (tok == "alpha") {
                if (!(ls >> wf.alpha) || !(wf.alpha >= 1)) fail("bad alpha");
            } else if (tok == "kappa") {
                if (!(ls >> wf.kappa) || !(wf.kappa > 0 && wf.kappa < 1)) fail("bad kappa");
            } else {
                fail("unknown header field: " + tok);
            }
            continue;
        }
        WorkloadOp op;
        if (tok == "Q") {
            op.kind = 'Q';
        } else if (tok == "+" || tok == "-") {
            op.kind = tok[0];
            if (!(ls >> op.u >> op.v)) fail("update line needs two endpoints");
            if (op.u < 0 || op.v < 0 || op.u >= wf.n || op.v >= wf.n || op.u == op.v)
                fail("bad endpoints");
            int64_t w;
            if (ls >> w) {
                if (op.kind == '-') fail("delete lines carry no weight");
                if (w < 1) fail("weights must be >= 1");
                op.w = w;
            }
        } else {
            fail("unknown line: " + tok);
        }
        wf.batches.back().push_back(op);
    }
    if (!have_n || !have_mode) throw HarnessError("workload missing n/mode header");
    if (in_body) settle_batch(wf.batches.back());
    return wf;
}

WorkloadFile WorkloadFile::load(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw HarnessError("cannot open workload: " + path);
    std::ostringstream buf;
    buf << in.rdbuf();
    return parse(buf.str());
}

void WorkloadFile::save(const std::string& path) const {
    std::ofstream out(path);
    if (!out) throw HarnessError("cannot write workload: " + path);
    out << serialize();
}

int WorkloadFile::max_batch_updates() const {
    int best = 0;
    for (const auto& batch : batches) {
        int count = 0;
        for (const auto& op : batch)
            if (op.kind != 'Q') ++count;
        best = std::max(best, count);
    }
    return best;
}

namespace {

struct EdgePicker {
    // keeps a sorted mirror of a live-edge set for indexed random choice
    std::set<std::pair<int, int>> live;

    std::pair<int, int> random(SplitMix& rng) const {
        auto it = live.begin();
        std::advance(it, (size_t)rng.below(live.size()));
        return *it;
    }
};

void gen_erdos_renyi_mixed(WorkloadFile& wf, const GenParams& p, SplitMix& rng) {
    wf.mode = WorkloadMode::connectivity;
    EdgePicker ep;
    for (int b = 0; b < p.batches; ++b) {
        std::vector<WorkloadOp> batch;
        std::set<std::pair<int, int>> touched;
        std::vector<std::pair<int, int>> dels;
        for (int i = 0; i < p.batch_size; ++i) {
            if (!ep.live.empty() && rng.below(10) < 3) {
                auto e = ep.random(rng);
                if (!touched.insert(e).second) continue;
                dels.push_back(e);
                ep.live.erase(e);
                batch.push_back({'-', e.first, e.second, 1});
            } else {
                int u = (int)rng.below((uint64_t)p.n), v = (int)rng.below((uint64_t)p.n);
                if (u == v) continue;
                auto e = canon(u, v);
                if (ep.live.count(e) || !touched.insert(e).second) continue;
                ep.live.insert(e);
                batch.push_back({'+', e.first, e.second, 1});
            }
        }
        batch.push_back({'Q', 0, 0, 1});
        wf.batches.push_back(std::move(batch));
    }
}

// graph is a forest at every batch boundary: delete batches remove live
// (hence tree) edges, reconnect batches only link distinct components
void gen_forest_churn(WorkloadFile& wf, const GenParams& p, SplitMix& rng, int components) {
    wf.mode = WorkloadMode::connectivity;
    EdgePicker ep;
    std::vector<WorkloadOp> first;
    int block = (p.n + components - 1) / components;
    for (int v = 1; v < p.n; ++v) {
        if (v % block == 0) continue;  // component boundary
        first.push_back({'+', v - 1, v, 1});
        ep.live.insert({v - 1, v});
    }
    first.push_back({'Q', 0, 0, 1});
    wf.batches.push_back(std::move(first));
    for (int b = 1; b < p.batches; ++b) {
        std::vector<WorkloadOp> batch;
        if (b % 2 == 1) {
            int want = std::max(1, p.batch_size / 2);
            for (int i = 0; i < want && !ep.live.empty(); ++i) {
                auto e = ep.random(rng);
                ep.live.erase(e);
                batch.push_back({'-', e.first, e.second, 1});
            }
        } else {
            oracle::UnionFind uf(p.n);
            for (auto& e : ep.live) uf.unite(e.first, e.second);
            for (int i = 0; i < p.batch_size; ++i) {
                int u = (int)rng.below((uint64_t)p.n), v = (int)rng.below((uint64_t)p.n);
                if (u == v || uf.find(u) == uf.find(v)) continue;
                uf.unite(u, v);
                auto e = canon(u, v);
                ep.live.insert(e);
                batch.push_back({'+', e.first, e.second, 1});
            }
        }
        batch.push_back({'Q', 0, 0, 1});
        wf.batches.push_back(std::move(batch));
    }
}

// plants a perfect matching on shuffled pairs; noise edges attach planted
// vertices to two reserved hubs. Each pair is owned by one hub, so no
// augmenting path h1-x-partner(x)-h2 can form and nu(G) always equals the
// number of planted edges inserted so far
void gen_matching_planted(WorkloadFile& wf, const GenParams& p, SplitMix& rng) {
    wf.mode = WorkloadMode::match_akly;
    if (p.n < 6) throw HarnessError("matching-planted needs n >= 6");
    std::vector<int> order(p.n);
    for (int i = 0; i < p.n; ++i) order[i] = i;
    for (int i = p.n - 1; i > 0; --i) std::swap(order[i], order[(int)rng.below(i + 1)]);
    int h1 = order[0], h2 = order[1];
    std::vector<std::pair<int, int>> planted;
    for (int i = 2; i + 1 < p.n; i += 2) planted.push_back(canon(order[i], order[i + 1]));
    size_t next = 0;
    EdgePicker noise;
    // (hub, leaf) choices for already-inserted pairs; pair j belongs to hub j%2
    std::vector<std::pair<int, int>> safe_noise;
    for (int b = 0; b < p.batches; ++b) {
        std::vector<WorkloadOp> batch;
        std::set<std::pair<int, int>> touched;
        for (int i = 0; i < p.batch_size; ++i) {
            uint64_t roll = rng.below(10);
            if (roll < 5 && next < planted.size()) {
                auto e = planted[next];
                int hub = (next % 2 == 0) ? h1 : h2;
                ++next;
                safe_noise.push_back({hub, e.first});
                safe_noise.push_back({hub, e.second});
                touched.insert(e);
                batch.push_back({'+', e.first, e.second, 1});
            } else if (roll < 8 && !safe_noise.empty()) {
                auto [hub, leaf] = safe_noise[(size_t)rng.below(safe_noise.size())];
                auto e = canon(hub, leaf);
                if (noise.live.count(e) || !touched.insert(e).second) continue;
                noise.live.insert(e);
                batch.push_back({'+', e.first, e.second, 1});
            } else if (!noise.live.empty()) {
                auto e = noise.random(rng);
                if (!touched.insert(e).second) continue;
                noise.live.erase(e);
                batch.push_back({'-', e.first, e.second, 1});
            }
        }
        batch.push_back({'Q', 0, 0, 1});
        wf.batches.push_back(std::move(batch));
    }
}

// weight-1 backbone path is never deleted; heavier edges on a power-of-two
// weight ladder churn on top of it
void gen_weight_laddered(WorkloadFile& wf, const GenParams& p, SplitMix& rng) {
    wf.mode = WorkloadMode::msf_approx;
    wf.W = 128;
    wf.eps = 0.1;
    std::vector<WorkloadOp> first;
    std::set<std::pair<int, int>> backbone;
    for (int v = 1; v < p.n; ++v) {
        first.push_back({'+', v - 1, v, 1});
        backbone.insert({v - 1, v});
    }
    first.push_back({'Q', 0, 0, 1});
    wf.batches.push_back(std::move(first));
    EdgePicker heavy;
    for (int b = 1; b < p.batches; ++b) {
        std::vector<WorkloadOp> batch;
        std::set<std::pair<int, int>> touched;
        for (int i = 0; i < p.batch_size; ++i) {
            if (!heavy.live.empty() && rng.below(10) < 3) {
                auto e = heavy.random(rng);
                if (!touched.insert(e).second) continue;
                heavy.live.erase(e);
                batch.push_back({'-', e.first, e.second, 1});
            } else {
                int u = (int)rng.below((uint64_t)p.n), v = (int)rng.below((uint64_t)p.n);
                if (u == v) continue;
                auto e = canon(u, v);
                if (backbone.count(e) || heavy.live.count(e) || !touched.insert(e).second)
                    continue;
                heavy.live.insert(e);
                int64_t w = 1LL << (1 + rng.below(7));  // 2..128
                batch.push_back({'+', e.first, e.second, w});
            }
        }
        batch.push_back({'Q', 0, 0, 1});
        wf.batches.push_back(std::move(batch));
    }
}

} // namespace

WorkloadFile generate(const std::string& kind, const GenParams& p) {
    if (p.n < 2 || p.batches < 1 || p.batch_size < 1)
        throw HarnessError("generate: invalid params");
    WorkloadFile wf;
    wf.n = p.n;
    uint64_t tag = 1469598103934665603ULL;  // FNV-1a, stable across platforms
    for (char c : kind) tag = (tag ^ (uint64_t)(unsigned char)c) * 1099511628211ULL;
    SplitMix rng(mix_seeds(p.seed, tag));
    if (kind == "erdos-renyi-mixed") {
        gen_erdos_renyi_mixed(wf, p, rng);
    } else if (kind == "path-splitter") {
        gen_forest_churn(wf, p, rng, 1);
    } else if (kind == "component-churn") {
        gen_forest_churn(wf, p, rng, std::max(2, p.n / 8));
    } else if (kind == "matching-planted") {
        gen_matching_planted(wf, p, rng);
    } else if (kind == "weight-laddered") {
        gen_weight_laddered(wf, p, rng);
    } else {
        throw HarnessError("unknown workload kind: " + kind);
    }
    // round-trip through the parser so invariants are enforced at birth
    return WorkloadFile::parse(wf.serialize());
}

namespace {

// per-mode execution state behind one interface: apply a settled batch,
// answer a query verdict against the oracles, surface engine stats
struct ModeRunner {
    virtual ~ModeRunner() = default;
    virtual void apply(const std::vector<GraphUpdate>& ups) = 0;
    // returns pass/fail; may append a measured ratio
    virtual bool check(const std::map<std::pair<int, int>, int64_t>& truth,
                       std::vector<double>& ratios) = 0;
    virtual RoundStats take_stats() = 0;
    virtual uint64_t peak_memory() const = 0;
    virtual bool deterministic() const { return false; }
};

std::vector<std::pair<int, int>> truth_edges(
    const std::map<std::pair<int, int>, int64_t>& truth) {
    std::vector<std::pair<int, int>> out;
    out.reserve(truth.size());
    for (auto& [e, w] : truth) out.push_back(e);
    return out;
}

struct ConnectivityRunner : ModeRunner {
    MpcEngine engine;
    Connectivity conn;

    ConnectivityRunner(const WorkloadFile& wf, const RunConfig& cfg)
        : engine({(uint64_t)wf.n, cfg.phi, cfg.accounting, cfg.seed}),
          conn({wf.n, SketchMode::batched, cfg.seed,
                std::max(1, wf.max_batch_updates())},
               engine) {}

    void apply(const std::vector<GraphUpdate>& ups) override { conn.apply_batch(ups); }

    bool check(const std::map<std::pair<int, int>, int64_t>& truth,
               std::vector<double>&) override {
        auto labels = oracle::component_labels(conn.n(), truth_edges(truth));
        if (conn.component_labels() != labels) return false;
        oracle::UnionFind uf(conn.n());
        for (auto& e : conn.forest_edges()) {
            if (!truth.count(e)) return false;       // phantom forest edge
            if (!uf.unite(e.first, e.second)) return false;  // cycle
        }
        int cc = oracle::component_count(conn.n(), truth_edges(truth));
        return (int)conn.forest_edges().size() == conn.n() - cc;  // spanning
    }

    RoundStats take_stats() override { return engine.take_batch_stats(); }
    uint64_t peak_memory() const override { return engine.peak_total_memory(); }
};

struct ExactMsfRunner : ModeRunner {
    MpcEngine engine;
    ExactMsf msf;

    ExactMsfRunner(const WorkloadFile& wf, const RunConfig& cfg)
        : engine({(uint64_t)wf.n, cfg.phi, cfg.accounting, cfg.seed}),
          msf(wf.n, engine, std::max(1, wf.max_batch_updates())) {}

    void apply(const std::vector<GraphUpdate>& ups) override {
        std::vector<WeightedInsert> batch;
        for (auto& up : ups) {
            if (!up.insert) throw HarnessError("msf-exact workloads are insertion-only");
            batch.push_back({up.u, up.v, up.w});
        }
        msf.batch_insert(batch);
    }

    bool check(const std::map<std::pair<int, int>, int64_t>& truth,
               std::vector<double>&) override {
        std::vector<oracle::WeightedEdge> edges;
        for (auto& [e, w] : truth) edges.push_back({w, e.first, e.second});
        auto want = oracle::kruskal_msf(msf.n(), edges);
        auto got = msf.forest();
        if (got.size() != want.size()) return false;
        for (size_t i = 0; i < got.size(); ++i)
            if (got[i].w != want[i].w || got[i].u != want[i].u || got[i].v != want[i].v)
                return false;
        return true;
    }

    RoundStats take_stats() override { return engine.take_batch_stats(); }
    uint64_t peak_memory() const override { return engine.peak_total_memory(); }
    bool deterministic() const override { return true; }
};

struct ApproxMsfRunner : ModeRunner {
    ApproxMsf msf;
    double eps;

    ApproxMsfRunner(const WorkloadFile& wf, const RunConfig& cfg, double eps_in)
        : msf({wf.n, eps_in, wf.W, cfg.seed, std::max(1, wf.max_batch_updates()), cfg.phi,
               cfg.accounting}),
          eps(eps_in) {}

    void apply(const std::vector<GraphUpdate>& ups) override { msf.apply_batch(ups); }

    bool check(const std::map<std::pair<int, int>, int64_t>& truth,
               std::vector<double>& ratios) override {
        std::vector<oracle::WeightedEdge> edges;
        for (auto& [e, w] : truth) edges.push_back({w, e.first, e.second});
        int64_t exact = 0;
        for (auto& e : oracle::kruskal_msf(msf.level(0).n(), edges)) exact += e.w;
        double estimate = msf.weight_estimate();
        if (exact == 0) return std::abs(estimate) <= eps * msf.level(0).n() + 1e-9;
        double ratio = estimate / (double)exact;
        ratios.push_back(ratio);
        return ratio >= 1.0 - 1e-9 && ratio <= 1.0 + eps + 1e-9;
    }

    RoundStats take_stats() override { return msf.take_batch_stats(); }
    uint64_t peak_memory() const override { return msf.peak_total_memory(); }
};

struct BipartiteRunner : ModeRunner {
    DoubleCover cover;
    int n;

    BipartiteRunner(const WorkloadFile& wf, const RunConfig& cfg)
        : cover(wf.n, cfg.seed, cfg.phi, cfg.accounting, std::max(1, wf.max_batch_updates())),
          n(wf.n) {}

    void apply(const std::vector<GraphUpdate>& ups) override { cover.apply_batch(ups); }

    bool check(const std::map<std::pair<int, int>, int64_t>& truth,
               std::vector<double>&) override {
        return cover.bipartite() == oracle::is_bipartite(n, truth_edges(truth));
    }

    RoundStats take_stats() override { return cover.take_batch_stats(); }
    uint64_t peak_memory() const override { return cover.peak_total_memory(); }
};

bool valid_matching_of(const std::set<std::pair<int, int>>& m, int n,
                       const std::map<std::pair<int, int>, int64_t>& truth) {
    std::vector<char> used(n, 0);
    for (auto& [u, v] : m) {
        if (!truth.count(canon(u, v))) return false;
        if (used[u] || used[v]) return false;
        used[u] = used[v] = 1;
    }
    return true;
}

struct GreedyRunner : ModeRunner {
    MpcEngine engine;
    GreedyMatching gm;

    GreedyRunner(const WorkloadFile& wf, const RunConfig& cfg, double alpha)
        : engine({(uint64_t)wf.n, cfg.phi, cfg.accounting, cfg.seed}),
          gm(wf.n, alpha, engine, std::max(1, wf.max_batch_updates())) {}

    void apply(const std::vector<GraphUpdate>& ups) override {
        std::vector<std::pair<int, int>> batch;
        for (auto& up : ups) {
            if (!up.insert) throw HarnessError("match-greedy workloads are insertion-only");
            batch.push_back({up.u, up.v});
        }
        gm.batch_insert(batch);
    }

    bool check(const std::map<std::pair<int, int>, int64_t>& truth,
               std::vector<double>&) override {
        if (!valid_matching_of(gm.matching(), gm.n(), truth)) return false;
        // maximal_matching <= nu, so this floor never over-demands
        int lb = oracle::maximal_matching(gm.n(), truth_edges(truth));
        return gm.size() >= std::min(gm.cap(), lb / 2);
    }

    RoundStats take_stats() override { return engine.take_batch_stats(); }
    uint64_t peak_memory() const override { return engine.peak_total_memory(); }
    bool deterministic() const override { return true; }
};

struct AklyRunner : ModeRunner {
    MpcEngine engine;
    AklyMatcher akly;

    static int k_max_for(const WorkloadFile& wf, double kappa) {
        // invert cap = floor(k_max^(1-kappa)) so workload batches fit
        int need = std::max(1, wf.max_batch_updates());
        return (int)std::ceil(std::pow((double)need, 1.0 / (1.0 - kappa))) + 1;
    }

    AklyRunner(const WorkloadFile& wf, const RunConfig& cfg, double alpha, double kappa)
        : engine({(uint64_t)wf.n, cfg.phi, cfg.accounting, cfg.seed}),
          akly({wf.n, alpha, cfg.seed, kappa, k_max_for(wf, kappa)}, engine) {}

    void apply(const std::vector<GraphUpdate>& ups) override { akly.batch_update(ups); }

    bool check(const std::map<std::pair<int, int>, int64_t>& truth,
               std::vector<double>& ratios) override {
        if (!valid_matching_of(akly.query(), akly.n(), truth)) return false;
        int lb = oracle::maximal_matching(akly.n(), truth_edges(truth));
        if (lb > 0) ratios.push_back((double)lb / std::max(1, akly.size()));
        return true;  // the ratio is recorded, not asserted a priori
    }

    RoundStats take_stats() override { return engine.take_batch_stats(); }
    uint64_t peak_memory() const override { return engine.peak_total_memory(); }
};

struct SizeRunner : ModeRunner {
    MpcEngine engine;
    MatchSizeEstimator est;
    int n;

    static MatchingTester::Mode pick_mode(const WorkloadFile& wf) {
        for (auto& batch : wf.batches)
            for (auto& op : batch)
                if (op.kind == '-') return MatchingTester::Mode::dynamic;
        return MatchingTester::Mode::insertion_only;
    }

    SizeRunner(const WorkloadFile& wf, const RunConfig& cfg, double alpha)
        : engine({(uint64_t)wf.n, cfg.phi, cfg.accounting, cfg.seed}),
          est(wf.n, alpha, pick_mode(wf), cfg.seed, engine),
          n(wf.n) {}

    void apply(const std::vector<GraphUpdate>& ups) override { est.apply(ups); }

    bool check(const std::map<std::pair<int, int>, int64_t>& truth,
               std::vector<double>& ratios) override {
        int lb = oracle::maximal_matching(n, truth_edges(truth));
        int estimate = est.estimate();
        if (lb > 0) ratios.push_back((double)estimate / (double)lb);
        // tester yes needs a size-k/2 matching, and nu <= 2 * maximal
        return estimate <= 4 * std::max(lb, 1);
    }

    RoundStats take_stats() override { return engine.take_batch_stats(); }
    uint64_t peak_memory() const override { return engine.peak_total_memory(); }
};

std::unique_ptr<ModeRunner> make_runner(const WorkloadFile& wf, const RunConfig& cfg) {
    double eps = cfg.epsilon.value_or(wf.eps);
    double alpha = cfg.alpha.value_or(wf.alpha);
    double kappa = cfg.kappa.value_or(wf.kappa);
    switch (wf.mode) {
        case WorkloadMode::connectivity: return std::make_unique<ConnectivityRunner>(wf, cfg);
        case WorkloadMode::msf_exact: return std::make_unique<ExactMsfRunner>(wf, cfg);
        case WorkloadMode::msf_approx: return std::make_unique<ApproxMsfRunner>(wf, cfg, eps);
        case WorkloadMode::bipartite: return std::make_unique<BipartiteRunner>(wf, cfg);
        case WorkloadMode::match_greedy: return std::make_unique<GreedyRunner>(wf, cfg, alpha);
        case WorkloadMode::match_akly:
            return std::make_unique<AklyRunner>(wf, cfg, alpha, kappa);
        case WorkloadMode::match_size: return std::make_unique<SizeRunner>(wf, cfg, alpha);
    }
    throw HarnessError("unreachable mode");
}

} // namespace

RunReport run(const WorkloadFile& wf, const RunConfig& cfg) {
    RunReport report;
    report.mode = mode_name(wf.mode);
    report.n = wf.n;
    std::map<std::pair<int, int>, int64_t> truth;
    std::unique_ptr<ModeRunner> runner;
    bool deterministic = false;
    try {
        runner = make_runner(wf, cfg);
        deterministic = runner->deterministic();
        for (int b = 0; b < (int)wf.batches.size(); ++b) {
            BatchRecord rec;
            rec.batch_index = b;
            std::vector<GraphUpdate> ups;
            int queries = 0;
            for (auto& op : wf.batches[b]) {
                if (op.kind == 'Q') {
                    ++queries;
                } else {
                    ups.push_back({op.kind == '+', op.u, op.v, op.w});
                }
            }
            if (!ups.empty()) runner->apply(ups);
            for (auto& up : ups) {
                auto e = canon(up.u, up.v);
                if (up.insert) {
                    truth[e] = up.w;
                } else {
                    truth.erase(e);
                }
            }
            rec.queries = queries;
            if (cfg.oracle) {
                for (int q = 0; q < queries; ++q)
                    if (!runner->check(truth, report.ratios)) ++rec.failures;
            }
            rec.stats = runner->take_stats();
            rec.peak_total_memory = runner->peak_memory();
            report.max_rounds = std::max(report.max_rounds, rec.stats.rounds);
            report.total_communication += rec.stats.total_communication;
            report.peak_memory = std::max(report.peak_memory, rec.peak_total_memory);
            report.query_count += rec.queries;
            report.failure_count += rec.failures;
            report.batches.push_back(rec);
        }
    } catch (const std::exception& ex) {
        report.error = "batch " + std::to_string((int)report.batches.size()) + ": " + ex.what();
        report.passed = false;
        return report;
    }
    report.failure_budget =
        cfg.failure_budget >= 0
            ? cfg.failure_budget
            : (deterministic ? 0 : std::max(1, report.query_count / 100));
    report.passed = report.failure_count <= report.failure_budget;
    return report;
}

std::string RunReport::json_lines() const {
    std::ostringstream out;
    for (const auto& rec : batches) {
        nlohmann::json j{{"batch_index", rec.batch_index},
                         {"rounds", rec.stats.rounds},
                         {"peak_machine_memory", rec.stats.peak_machine_memory},
                         {"total_communication", rec.stats.total_communication},
                         {"broadcasts", rec.stats.broadcasts},
                         {"peak_total_memory", rec.peak_total_memory},
                         {"queries", rec.queries},
                         {"failures", rec.failures}};
        out << j.dump() << "\n";
    }
    nlohmann::json summary{{"summary", true},
                           {"mode", mode},
                           {"n", n},
                           {"batches", batches.size()},
                           {"max_rounds", max_rounds},
                           {"peak_memory", peak_memory},
                           {"total_communication", total_communication},
                           {"queries", query_count},
                           {"failures", failure_count},
                           {"failure_budget", failure_budget},
                           {"passed", passed}};
    if (!ratios.empty()) {
        double lo = ratios[0], hi = ratios[0];
        for (double r : ratios) {
            lo = std::min(lo, r);
            hi = std::max(hi, r);
        }
        summary["min_ratio"] = lo;
        summary["max_ratio"] = hi;
    }
    if (!error.empty()) summary["error"] = error;
    out << summary.dump() << "\n";
    return out.str();
}

std::string RunReport::human_summary() const {
    std::ostringstream out;
    out << "mode " << mode << ", n=" << n << ", " << batches.size() << " batches\n";
    if (!error.empty()) {
        out << "ABORTED at " << error << "\n";
        return out.str();
    }
    out << "rounds (max/batch): " << max_rounds << ", total communication: "
        << total_communication << " words, peak memory: " << peak_memory << " words\n";
    out << "queries: " << query_count << ", oracle failures: " << failure_count << " (budget "
        << failure_budget << ")\n";
    if (!ratios.empty()) {
        double lo = ratios[0], hi = ratios[0];
        for (double r : ratios) {
            lo = std::min(lo, r);
            hi = std::max(hi, r);
        }
        out << "measured ratios in [" << fmt_double(lo) << ", " << fmt_double(hi) << "]\n";
    }
    out << (passed ? "PASSED" : "FAILED") << "\n";
    return out.str();
}

} // namespace dgs
