#ifndef DGS_HARNESS_HPP
#define DGS_HARNESS_HPP

#include <cstdint>
#include <map>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include <dgs/mpc_engine.hpp>

namespace dgs {

struct HarnessError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

enum class WorkloadMode {
    connectivity,
    msf_exact,
    msf_approx,
    bipartite,
    match_greedy,
    match_akly,
    match_size,
};

std::string mode_name(WorkloadMode mode);
WorkloadMode mode_from_name(const std::string& name);

// one line of a workload body: '+' insert, '-' delete, 'Q' query
struct WorkloadOp {
    char kind = '+';
    int u = 0;
    int v = 0;
    int64_t w = 1;
};

// Line-oriented text format. Header lines `n N`, `mode M` and optional
// `W`, `eps`, `alpha`, `kappa`; batches separated by `BATCH` lines; body
// lines `+ u v [w]`, `- u v`, `Q`. Lines starting with '#' are comments.
// Within a batch all inserts apply before all deletes (module semantics);
// parsing validates that every delete references a live edge under that rule.
struct WorkloadFile {
    int n = 2;
    WorkloadMode mode = WorkloadMode::connectivity;
    int64_t W = 1;
    double eps = 0.1;
    double alpha = 4.0;
    double kappa = 0.25;
    std::vector<std::vector<WorkloadOp>> batches;

    std::string serialize() const;
    static WorkloadFile parse(const std::string& text);
    static WorkloadFile load(const std::string& path);
    void save(const std::string& path) const;

    int max_batch_updates() const;  // largest count of +/- lines in one batch
};

struct GenParams {
    int n = 16;
    int batches = 10;
    int batch_size = 8;
    uint64_t seed = 0;
};

// kinds: erdos-renyi-mixed, path-splitter, component-churn, matching-planted,
// weight-laddered; deterministic in (kind, params)
WorkloadFile generate(const std::string& kind, const GenParams& params);

struct RunConfig {
    double phi = 0.5;
    Accounting accounting = Accounting::idealized;
    uint64_t seed = 0;
    std::optional<double> epsilon;  // override the workload header
    std::optional<double> alpha;
    std::optional<double> kappa;
    bool oracle = true;
    int failure_budget = -1;  // -1: 0 for deterministic modes, else max(1, queries/100)
};

struct BatchRecord {
    int batch_index = 0;
    RoundStats stats;
    uint64_t peak_total_memory = 0;
    int queries = 0;
    int failures = 0;
};

struct RunReport {
    std::string mode;
    int n = 0;
    std::vector<BatchRecord> batches;
    uint64_t max_rounds = 0;
    uint64_t peak_memory = 0;
    uint64_t total_communication = 0;
    int query_count = 0;
    int failure_count = 0;
    int failure_budget = 0;
    std::vector<double> ratios;  // per-query measured approximation ratios
    bool passed = true;
    std::string error;  // structured abort: offending primitive and batch index

    std::string json_lines() const;
    std::string human_summary() const;
};

// Executes every batch through the module selected by the workload mode,
// verifying each Q against the oracle suite. The harness maintains the true
// edge set itself. Accounting violations are captured in report.error.
RunReport run(const WorkloadFile& workload, const RunConfig& config);

} // namespace dgs

#endif // DGS_HARNESS_HPP
