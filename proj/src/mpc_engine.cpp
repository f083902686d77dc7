#include <dgs/mpc_engine.hpp>

#include <algorithm>

namespace dgs {

namespace {

uint64_t log2_cubed(uint64_t n) {
    double l = std::log2((double)std::max<uint64_t>(n, 2));
    return (uint64_t)std::ceil(l * l * l);
}

} // namespace

MpcEngine::MpcEngine(EngineConfig config) : config_(config) {
    if (config_.n < 2) throw AccountingError("engine needs n >= 2");
    if (!(config_.phi > 0.0 && config_.phi < 1.0))
        throw AccountingError("phi must lie in (0,1)");
    s_ = std::max<uint64_t>(2, (uint64_t)std::ceil(std::pow((double)config_.n, config_.phi)));
    capacity_ = s_ * log2_cubed(config_.n);
    budget_ = (uint64_t)std::ceil(config_.total_mem_constant * (double)config_.n *
                                  (double)log2_cubed(config_.n));
    machines_ = std::max<uint64_t>(1, (budget_ + s_ - 1) / s_);
}

uint64_t MpcEngine::tree_depth(uint64_t base, uint64_t count) {
    base = std::max<uint64_t>(base, 2);
    uint64_t depth = 0;
    uint64_t reach = 1;
    while (reach < count) {
        reach *= base;
        ++depth;
    }
    return std::max<uint64_t>(depth, 1);
}

uint64_t MpcEngine::broadcast_depth() const { return tree_depth(s_, machines_); }

uint64_t MpcEngine::aggregate_depth(uint64_t count, uint64_t chunk_words) const {
    return tree_depth(s_ / std::max<uint64_t>(chunk_words, 1), count);
}

void MpcEngine::note_machine_load(uint64_t words) {
    if (words > capacity_)
        throw AccountingError("machine memory cap exceeded: " + std::to_string(words) +
                              " words > capacity " + std::to_string(capacity_));
    stats_.peak_machine_memory = std::max(stats_.peak_machine_memory, words);
}

void MpcEngine::broadcast(uint64_t payload_words) {
    note_machine_load(payload_words);
    charge_rounds(config_.mode == Accounting::idealized ? 1 : broadcast_depth());
    stats_.total_communication += payload_words * machines_;
    stats_.broadcasts += 1;
}

void MpcEngine::bulk_sort(uint64_t records, uint64_t record_words) {
    uint64_t words = records * record_words;
    if (words > budget_)
        throw AccountingError("bulk_sort input exceeds the total memory budget");
    note_machine_load(std::min(words, capacity_));
    charge_rounds(config_.mode == Accounting::idealized ? 1 : 2);
    stats_.total_communication += words;
}

void MpcEngine::tree_aggregate(uint64_t count, uint64_t chunk_words) {
    if (chunk_words > capacity_)
        throw AccountingError("tree_aggregate chunk exceeds machine capacity");
    note_machine_load(chunk_words);
    charge_rounds(config_.mode == Accounting::idealized ? 1
                                                        : aggregate_depth(count, chunk_words));
    stats_.total_communication += count * chunk_words;
}

void MpcEngine::parallel_tree_aggregate(uint64_t max_count, uint64_t chunk_words,
                                        uint64_t total_values) {
    if (chunk_words > capacity_)
        throw AccountingError("tree_aggregate chunk exceeds machine capacity");
    note_machine_load(chunk_words);
    charge_rounds(config_.mode == Accounting::idealized
                      ? 1
                      : aggregate_depth(std::max<uint64_t>(max_count, 1), chunk_words));
    stats_.total_communication += total_values * chunk_words;
}

void MpcEngine::map_over_partition(uint64_t emitted_words) {
    note_machine_load(std::min(emitted_words, capacity_));
    charge_rounds(1);
    stats_.total_communication += emitted_words;
}

void MpcEngine::batch_intake(uint64_t updates, uint64_t record_words) {
    if (updates * record_words > capacity_)
        throw AccountingError("update batch exceeds the per-batch cap");
    bulk_sort(updates, record_words);
}

void MpcEngine::set_resident(const std::string& tag, uint64_t words) {
    resident_[tag] = words;
    uint64_t total = resident_total();
    if (total > budget_)
        throw AccountingError("total memory budget exceeded: " + std::to_string(total) +
                              " words > budget " + std::to_string(budget_));
    peak_total_ = std::max(peak_total_, total);
}

uint64_t MpcEngine::resident_total() const {
    uint64_t total = 0;
    for (const auto& [tag, words] : resident_) total += words;
    return total;
}

RoundStats MpcEngine::take_batch_stats() {
    RoundStats out = stats_;
    stats_ = RoundStats{};
    return out;
}

} // namespace dgs
