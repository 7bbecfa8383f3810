#include <cmath>
#include <vector>

#include "doctest.h"
#include "lab/rng.hpp"

using lab::Philox;

TEST_CASE("philox draws are reproducible and seek-stable") {
    Philox a(42, 7);
    Philox b(42, 7);
    for (int i = 0; i < 100; ++i) CHECK(a.next_u64() == b.next_u64());

    // Sequential draws equal seek-then-draw at the same index.
    Philox seq(1, 2);
    std::vector<std::uint64_t> vals(64);
    for (auto& v : vals) v = seq.next_u64();
    for (int i = 63; i >= 0; --i) {
        Philox jump(1, 2);
        jump.seek(static_cast<std::uint64_t>(i));
        CHECK(jump.next_u64() == vals[i]);
    }
}

TEST_CASE("distinct keys and streams decorrelate") {
    Philox a(42, 7);
    Philox b(43, 7);
    Philox c(42, 8);
    int same_ab = 0, same_ac = 0;
    for (int i = 0; i < 1000; ++i) {
        const auto x = a.next_u64();
        if (x == b.next_u64()) ++same_ab;
        if (x == c.next_u64()) ++same_ac;
    }
    CHECK(same_ab == 0);
    CHECK(same_ac == 0);
}

TEST_CASE("uniform and gaussian moments") {
    Philox rng(2024, 0);
    const int n = 200000;
    double su = 0.0, su2 = 0.0;
    for (int i = 0; i < n; ++i) {
        const double u = rng.next_uniform();
        CHECK(u >= 0.0);
        CHECK(u < 1.0);
        su += u;
        su2 += u * u;
    }
    CHECK(std::fabs(su / n - 0.5) < 0.005);
    CHECK(std::fabs(su2 / n - 1.0 / 3.0) < 0.005);

    double sg = 0.0, sg2 = 0.0, sg4 = 0.0;
    for (int i = 0; i < n; ++i) {
        const double g = rng.next_gaussian();
        sg += g;
        sg2 += g * g;
        sg4 += g * g * g * g;
    }
    CHECK(std::fabs(sg / n) < 0.01);
    CHECK(std::fabs(sg2 / n - 1.0) < 0.02);
    CHECK(std::fabs(sg4 / n - 3.0) < 0.15);
}

TEST_CASE("gaussian pair components are uncorrelated") {
    Philox rng(9, 1);
    const int n = 100000;
    double sxy = 0.0;
    for (int i = 0; i < n; ++i) {
        const auto g = rng.next_gaussian_pair();
        sxy += g[0] * g[1];
    }
    CHECK(std::fabs(sxy / n) < 0.02);
}
