#include <doctest.h>

#include <cmath>
#include <vector>

#include "censim/rng.hpp"

using namespace censim;

TEST_CASE("same seed reproduces the same stream") {
    RngStream a(42), b(42);
    for (int i = 0; i < 100; ++i) CHECK(a.next_u64() == b.next_u64());
}

TEST_CASE("substreams with different salts diverge") {
    RngStream a = RngStream::substream(1, 2, 3);
    RngStream b = RngStream::substream(1, 2, 4);
    bool differ = false;
    for (int i = 0; i < 10; ++i)
        if (a.next_u64() != b.next_u64()) differ = true;
    CHECK(differ);
}

TEST_CASE("uniform stays in range") {
    RngStream rng(5);
    for (int i = 0; i < 1000; ++i) {
        double u = rng.uniform();
        CHECK(u >= 0.0);
        CHECK(u < 1.0);
        double v = rng.uniform(3.0, 7.0);
        CHECK(v >= 3.0);
        CHECK(v < 7.0);
    }
}

TEST_CASE("normal sample moments match parameters") {
    RngStream rng(9);
    const int n = 20000;
    double sum = 0.0, sum2 = 0.0;
    for (int i = 0; i < n; ++i) {
        double x = rng.normal(10.0, 2.0);
        sum += x;
        sum2 += x * x;
    }
    double mean = sum / n;
    double var = sum2 / n - mean * mean;
    CHECK(mean == doctest::Approx(10.0).epsilon(0.01));
    CHECK(std::sqrt(var) == doctest::Approx(2.0).epsilon(0.05));
}

TEST_CASE("truncated normal respects its bounds") {
    RngStream rng(11);
    for (int i = 0; i < 5000; ++i) {
        double x = rng.truncated_normal(0.0, 5.0, -1.0, 1.0);
        CHECK(x >= -1.0);
        CHECK(x <= 1.0);
    }
}

TEST_CASE("exponential is positive with the requested mean") {
    RngStream rng(13);
    const int n = 20000;
    double sum = 0.0;
    for (int i = 0; i < n; ++i) {
        double x = rng.exponential(0.25);
        CHECK(x >= 0.0);
        sum += x;
    }
    CHECK(sum / n == doctest::Approx(0.25).epsilon(0.05));
}

TEST_CASE("categorical follows the weight vector") {
    RngStream rng(17);
    std::vector<double> w{1.0, 3.0};
    int counts[2] = {0, 0};
    const int n = 20000;
    for (int i = 0; i < n; ++i) {
        std::size_t k = rng.categorical(w);
        REQUIRE(k < 2);
        counts[k]++;
    }
    CHECK(static_cast<double>(counts[1]) / n == doctest::Approx(0.75).epsilon(0.03));
}

TEST_CASE("mix64 separates nearby inputs") {
    CHECK(mix64(1) != mix64(2));
    CHECK(mix64(0xdeadbeef) == mix64(0xdeadbeef));
}
