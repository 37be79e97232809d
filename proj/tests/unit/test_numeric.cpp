#include "attnboost/numeric.hpp"

#include <doctest.h>

#include <atomic>
#include <cstdlib>
#include <numeric>
#include <stdexcept>

using namespace attnboost;

TEST_SUITE("numeric") {

TEST_CASE("generator streams are reproducible") {
    Rng a(42);
    Rng b(42);
    for (int i = 0; i < 100; ++i) CHECK(a.next() == b.next());
    // First output of the standard 64-bit Mersenne Twister seeded with 5489.
    Rng reference(5489);
    CHECK(reference.next() == 14514284786278117030ULL);

    Rng k1({42, 1});
    Rng k2({42, 2});
    CHECK(k1.next() != k2.next());
}

TEST_CASE("uniform, below and normal stay in range") {
    Rng r(1);
    double sum = 0.0;
    double sq = 0.0;
    for (int i = 0; i < 20000; ++i) {
        const double u = r.uniform();
        CHECK(u >= 0.0);
        CHECK(u < 1.0);
        CHECK(r.below(7) < 7);
        const double z = r.normal();
        sum += z;
        sq += z * z;
    }
    CHECK(std::abs(sum / 20000) < 0.05);
    CHECK(std::abs(sq / 20000 - 1.0) < 0.05);
}

TEST_CASE("shuffle is a seeded permutation") {
    std::vector<int> a(50);
    std::iota(a.begin(), a.end(), 0);
    std::vector<int> b = a;
    Rng r1(3);
    Rng r2(3);
    r1.shuffle(std::span<int>(a));
    r2.shuffle(std::span<int>(b));
    CHECK(a == b);
    std::vector<int> sorted = a;
    std::sort(sorted.begin(), sorted.end());
    for (int i = 0; i < 50; ++i) CHECK(sorted[static_cast<std::size_t>(i)] == i);
}

TEST_CASE("FNV-1a reference values") {
    CHECK(fnv1a("") == 0xcbf29ce484222325ULL);
    CHECK(fnv1a("a") == 0xaf63dc4c8601ec8cULL);
    CHECK(fnv1a("foobar") == 0x85944171f73967e8ULL);
}

TEST_CASE("parallel_for covers every index once and rethrows") {
    for (const char* threads : {"1", "3", "8"}) {
        setenv("ATTNBOOST_THREADS", threads, 1);
        std::vector<std::atomic<int>> hits(1001);
        parallel_for(hits.size(), [&](std::size_t b, std::size_t e) {
            for (std::size_t i = b; i < e; ++i) hits[i]++;
        });
        for (const auto& h : hits) CHECK(h.load() == 1);
        CHECK_THROWS_AS(parallel_for(10, [](std::size_t, std::size_t) { throw std::runtime_error("x"); }),
                        std::runtime_error);
    }
    setenv("ATTNBOOST_THREADS", "2", 1);
    CHECK(thread_budget() == 2);
    unsetenv("ATTNBOOST_THREADS");
    CHECK(thread_budget() >= 1);
}

}
