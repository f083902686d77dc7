#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <dgs/mpc_engine.hpp>

using namespace dgs;

TEST_CASE("local memory and machine counts follow the exponent") {
    MpcEngine e({4096, 0.5, Accounting::idealized, 0});
    CHECK(e.local_memory() == 64);
    MpcEngine f({1000, 0.5, Accounting::idealized, 0});
    CHECK(f.local_memory() == 32);  // ceil(sqrt(1000)) = 32
    CHECK(e.machines() == (e.total_memory_budget() + 63) / 64);
}

TEST_CASE("tree depth arithmetic") {
    CHECK(MpcEngine::tree_depth(64, 100) == 2);
    CHECK(MpcEngine::tree_depth(64, 64) == 1);
    CHECK(MpcEngine::tree_depth(64, 65) == 2);
    CHECK(MpcEngine::tree_depth(2, 1) == 1);
    CHECK(MpcEngine::tree_depth(2, 1024) == 10);
}

TEST_CASE("idealized accounting charges one round per primitive") {
    MpcEngine e({256, 0.5, Accounting::idealized, 0});
    e.broadcast(10);
    e.bulk_sort(100, 3);
    e.tree_aggregate(50, 4);
    e.map_over_partition(10);
    e.batch_intake(8, 3);
    CHECK(e.stats().rounds == 5);
    CHECK(e.stats().broadcasts == 1);
}

TEST_CASE("strict accounting charges tree depths and dominates idealized") {
    EngineConfig cfg{256, 0.5, Accounting::strict, 0};
    MpcEngine strict(cfg);
    cfg.mode = Accounting::idealized;
    MpcEngine ideal(cfg);
    for (MpcEngine* e : {&strict, &ideal}) {
        e->broadcast(10);
        e->bulk_sort(100, 3);
        e->tree_aggregate(50, 4);
    }
    CHECK(strict.stats().rounds >= ideal.stats().rounds);
    MpcEngine s2({256, 0.5, Accounting::strict, 0});
    s2.bulk_sort(10, 2);
    CHECK(s2.stats().rounds == 2);
    s2.broadcast(1);
    CHECK(s2.stats().rounds == 2 + s2.broadcast_depth());
}

TEST_CASE("strict rounds grow as phi shrinks") {
    uint64_t prev = 0;
    for (double phi : {0.7, 0.5, 0.3}) {
        MpcEngine e({4096, phi, Accounting::strict, 0});
        e.broadcast(8);
        CHECK(e.stats().rounds > prev);
        prev = e.stats().rounds;
    }
}

TEST_CASE("capacity and budget caps are enforced") {
    MpcEngine e({64, 0.5, Accounting::idealized, 0});
    CHECK_THROWS_AS(e.broadcast(e.machine_capacity() + 1), AccountingError);
    CHECK_THROWS_AS(e.tree_aggregate(4, e.machine_capacity() + 1), AccountingError);
    CHECK_THROWS_AS(e.bulk_sort(e.total_memory_budget(), 2), AccountingError);
    CHECK_THROWS_AS(e.set_resident("bank", e.total_memory_budget() + 1), AccountingError);
    e.set_resident("bank", 100);
    e.set_resident("forest", 50);
    CHECK(e.resident_total() == 150);
    e.set_resident("bank", 10);
    CHECK(e.resident_total() == 60);
    CHECK(e.peak_total_memory() == 150);
}

TEST_CASE("batch stats reset between takes and runs are deterministic") {
    auto run = [] {
        MpcEngine e({512, 0.5, Accounting::strict, 0});
        e.broadcast(16);
        e.bulk_sort(64, 2);
        return e.take_batch_stats();
    };
    RoundStats a = run(), b = run();
    CHECK(a.rounds == b.rounds);
    CHECK(a.total_communication == b.total_communication);
    MpcEngine e({512, 0.5, Accounting::strict, 0});
    e.broadcast(16);
    e.take_batch_stats();
    CHECK(e.stats().rounds == 0);
    CHECK(e.stats().total_communication == 0);
}

TEST_CASE("configuration validation") {
    CHECK_THROWS_AS(MpcEngine({1, 0.5, Accounting::idealized, 0}), AccountingError);
    CHECK_THROWS_AS(MpcEngine({64, 0.0, Accounting::idealized, 0}), AccountingError);
    CHECK_THROWS_AS(MpcEngine({64, 1.0, Accounting::idealized, 0}), AccountingError);
}
