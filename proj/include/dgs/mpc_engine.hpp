#ifndef DGS_MPC_ENGINE_HPP
#define DGS_MPC_ENGINE_HPP

#include <cmath>
#include <cstdint>
#include <map>
#include <stdexcept>
#include <string>

namespace dgs {

enum class Accounting { idealized, strict };

struct AccountingError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

struct EngineConfig {
    uint64_t n = 2;          // vertex count of the maintained graph
    double phi = 0.5;        // local memory exponent, s = ceil(n^phi)
    Accounting mode = Accounting::idealized;
    uint64_t seed = 0;
    double total_mem_constant = 64.0;  // budget = const * n * log2(n)^3 words
};

struct RoundStats {
    uint64_t rounds = 0;
    uint64_t peak_machine_memory = 0;
    uint64_t total_communication = 0;
    uint64_t broadcasts = 0;
};

// Cost-accounting simulator of the sublinear-memory MPC model. Algorithms run
// in-process and report their bulk primitives here; the engine charges rounds,
// communication and memory, and enforces hard caps.
//
// Round arithmetic (broadcast-tree depth, machine count) uses the literal
// s = ceil(n^phi) word budget. Capacity enforcement allows the polylog slack
// hidden in the model's Õ(n^phi) local memory: a payload may occupy up to
// s * ceil(log2(n)^3) words before it is rejected. Without the slack no
// sketch would fit on any machine at desk scale.
class MpcEngine {
public:
    explicit MpcEngine(EngineConfig config);

    const EngineConfig& config() const { return config_; }
    uint64_t local_memory() const { return s_; }
    uint64_t machine_capacity() const { return capacity_; }
    uint64_t machines() const { return machines_; }
    uint64_t total_memory_budget() const { return budget_; }

    // one round idealized; broadcast-tree depth ceil(log_s machines) strict
    void broadcast(uint64_t payload_words);

    void bulk_sort(uint64_t records, uint64_t record_words);

    // fold of `count` values of `chunk_words` each; depth ceil(log_{s/chunk} count)
    void tree_aggregate(uint64_t count, uint64_t chunk_words);

    // several independent aggregations running in the same rounds; charged as
    // the deepest one, communication as the sum
    void parallel_tree_aggregate(uint64_t max_count, uint64_t chunk_words,
                                 uint64_t total_values);

    // machine-local computation step; messages delivered at the next barrier
    void map_over_partition(uint64_t emitted_words);

    void batch_intake(uint64_t updates, uint64_t record_words);

    // resident-memory ledger: components report what they hold, keyed by tag
    void set_resident(const std::string& tag, uint64_t words);
    uint64_t resident_total() const;
    uint64_t peak_total_memory() const { return peak_total_; }

    const RoundStats& stats() const { return stats_; }
    RoundStats take_batch_stats();  // returns stats since the last take, resets

    uint64_t aggregate_depth(uint64_t count, uint64_t chunk_words) const;
    uint64_t broadcast_depth() const;

    // smallest d with base^d >= count, at least 1
    static uint64_t tree_depth(uint64_t base, uint64_t count);

private:
    void charge_rounds(uint64_t r) { stats_.rounds += r; }
    void note_machine_load(uint64_t words);

    EngineConfig config_;
    uint64_t s_ = 2;
    uint64_t capacity_ = 2;
    uint64_t machines_ = 1;
    uint64_t budget_ = 0;
    RoundStats stats_;
    std::map<std::string, uint64_t> resident_;
    uint64_t peak_total_ = 0;
};

} // namespace dgs

#endif // DGS_MPC_ENGINE_HPP
