#include <doctest.h>

#include "gauge_dehaze/filters.hpp"
#include "gauge_dehaze/rng.hpp"
#include "oracles.hpp"

using namespace gdh;

TEST_CASE("radius 0 is the identity") {
    ScalarMap m = oracle::random_map(9, 6, 42);
    CHECK(min_filter(m, 0).data == m.data);
    CHECK(max_filter(m, 0).data == m.data);
}

TEST_CASE("constant maps are invariant") {
    ScalarMap m(12, 8, 0.7);
    CHECK(min_filter(m, 3).data == m.data);
    CHECK(max_filter(m, 3).data == m.data);
    ScalarMap bm = box_mean(m, 3);
    for (double v : bm.data) CHECK(v == doctest::Approx(0.7).epsilon(1e-12));
}

TEST_CASE("single extremum spreads over the window") {
    ScalarMap m(5, 5, 0.5);
    m.at(2, 2) = 0.0;
    ScalarMap mn = min_filter(m, 1);
    for (int y = 0; y < 5; ++y)
        for (int x = 0; x < 5; ++x) {
            bool near = std::abs(x - 2) <= 1 && std::abs(y - 2) <= 1;
            CHECK(mn.at(x, y) == (near ? 0.0 : 0.5));
        }

    ScalarMap z(5, 5, 0.0);
    z.at(2, 2) = 1.0;
    ScalarMap mx = max_filter(z, 1);
    for (int y = 0; y < 5; ++y)
        for (int x = 0; x < 5; ++x) {
            bool near = std::abs(x - 2) <= 1 && std::abs(y - 2) <= 1;
            CHECK(mx.at(x, y) == (near ? 1.0 : 0.0));
        }
}

TEST_CASE("min/max filters match the brute-force oracle exactly") {
    Rng rng(2024);
    for (int trial = 0; trial < 120; ++trial) {
        int w = rng.uniform_int(1, 16);
        int h = rng.uniform_int(1, 16);
        int radius = rng.uniform_int(0, 5);
        ScalarMap m = oracle::random_map(w, h, 1000 + trial);
        CHECK(min_filter(m, radius).data == oracle::window_min(m, radius).data);
        CHECK(max_filter(m, radius).data == oracle::window_max(m, radius).data);
    }
}

TEST_CASE("enlarging the radius is monotone") {
    ScalarMap m = oracle::random_map(16, 16, 5);
    ScalarMap prev_min = m, prev_max = m;
    for (int radius : {1, 2, 4, 8}) {
        ScalarMap mn = min_filter(m, radius);
        ScalarMap mx = max_filter(m, radius);
        for (size_t i = 0; i < m.size(); ++i) {
            CHECK(mn.data[i] <= prev_min.data[i]);
            CHECK(mx.data[i] >= prev_max.data[i]);
        }
        prev_min = mn;
        prev_max = mx;
    }
}

TEST_CASE("box_mean matches the windowed mean oracle") {
    Rng rng(77);
    for (int trial = 0; trial < 20; ++trial) {
        int w = rng.uniform_int(1, 16);
        int h = rng.uniform_int(1, 16);
        int radius = rng.uniform_int(1, 5);
        ScalarMap m = oracle::random_map(w, h, 3000 + trial);
        ScalarMap got = box_mean(m, radius);
        ScalarMap want = oracle::window_mean(m, radius);
        for (size_t i = 0; i < m.size(); ++i)
            CHECK(got.data[i] == doctest::Approx(want.data[i]).epsilon(1e-12));
    }
}

TEST_CASE("guided filter degenerate closed forms") {
    ImageBuffer guide = oracle::random_image(12, 10, 9);
    ScalarMap input = oracle::random_map(12, 10, 10);

    SUBCASE("constant input returns the constant") {
        ScalarMap c(12, 10, 0.42);
        ScalarMap out = guided_filter(guide, c, 3, 1e-3);
        for (double v : out.data) CHECK(v == doctest::Approx(0.42).epsilon(1e-12));
    }

    SUBCASE("flat guide degenerates to the box mean") {
        ImageBuffer flat(12, 10, 0.5, 0.5, 0.5);
        ScalarMap out = guided_filter(flat, input, 2, 1e-3);
        ScalarMap want = oracle::window_mean(input, 2);
        for (size_t i = 0; i < out.size(); ++i)
            CHECK(out.data[i] == doctest::Approx(want.data[i]).epsilon(1e-9));
    }

    SUBCASE("huge eps degenerates to the box mean") {
        ScalarMap out = guided_filter(guide, input, 2, 1e12);
        ScalarMap want = oracle::window_mean(input, 2);
        for (size_t i = 0; i < out.size(); ++i)
            CHECK(std::abs(out.data[i] - want.data[i]) < 1e-9);
    }
}

TEST_CASE("guided filter is shift equivariant") {
    ImageBuffer guide = oracle::random_image(16, 12, 21);
    ScalarMap input = oracle::random_map(16, 12, 22);
    double shift = 0.25;

    ScalarMap shifted = input;
    for (double& v : shifted.data) v += shift;

    ScalarMap a = guided_filter(guide, input, 4, 1e-3);
    ScalarMap b = guided_filter(guide, shifted, 4, 1e-3);
    for (size_t i = 0; i < a.size(); ++i) CHECK(std::abs(b.data[i] - a.data[i] - shift) < 1e-6);
}

TEST_CASE("filter argument validation") {
    ScalarMap m(4, 4, 0.5);
    ImageBuffer img(5, 4, 0.5);
    CHECK_THROWS_AS(min_filter(m, -1), std::invalid_argument);
    CHECK_THROWS_AS(guided_filter(img, m, 2, 1e-3), std::invalid_argument);  // size mismatch
    ImageBuffer ok(4, 4, 0.5);
    CHECK_THROWS_AS(guided_filter(ok, m, 2, 0.0), std::invalid_argument);
}
