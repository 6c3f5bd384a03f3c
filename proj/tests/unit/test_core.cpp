#include <doctest.h>

#include <algorithm>
#include <numeric>

#include "chaosbreak/image.hpp"
#include "chaosbreak/permutation.hpp"
#include "chaosbreak/rng.hpp"
#include "worked_example.hpp"

using namespace chaosbreak;

TEST_CASE("byte image invariants") {
    ByteImage img(3, 2, {1, 2, 3, 4, 5, 6});
    CHECK(img.size() == 6);
    CHECK(img.at(1, 2) == 6);
    CHECK(img.pixel(1) == 1);
    CHECK(img.pixel(6) == 6);
    CHECK_THROWS_AS(ByteImage(3, 2, {1, 2, 3}), DimensionError);
    CHECK_THROWS_AS(ByteImage(0, 2, {}), DimensionError);
}

TEST_CASE("identity permutation leaves images unchanged") {
    Rng rng(1);
    const ByteImage img = random_image(rng, 4, 4);
    CHECK(Permutation::identity(16).apply(img) == img);
}

TEST_CASE("applying the inverse pre-permutation to 1..9 reproduces its map") {
    ByteImage positions(9, 1, {1, 2, 3, 4, 5, 6, 7, 8, 9});
    const ByteImage out = worked::pre_inverse().apply(positions);
    CHECK(out.data() == std::vector<std::uint8_t>{4, 5, 2, 9, 8, 7, 6, 3, 1});
}

TEST_CASE("apply then inverse apply round-trips") {
    Rng rng(2);
    for (int trial = 0; trial < 50; ++trial) {
        const Permutation p = random_permutation(rng, 16);
        const ByteImage img = random_image(rng, 4, 4);
        CHECK(p.inverted().apply(p.apply(img)) == img);
    }
}

TEST_CASE("invert is an involution") {
    CHECK(Permutation::identity(5).inverted() == Permutation::identity(5));
    CHECK(worked::mid_inverse().inverted() == worked::mid_forward());
    Rng rng(3);
    for (int trial = 0; trial < 100; ++trial) {
        const Permutation p = random_permutation(rng, 256);
        CHECK(p.inverted().inverted() == p);
    }
}

TEST_CASE("composition semantics and unit laws") {
    const Permutation id = Permutation::identity(9);
    const Permutation a = worked::mid_inverse();
    const Permutation b = worked::post_inverse();
    CHECK(compose(a, id) == a);
    CHECK(compose(id, a) == a);
    // evaluating the mid- then post-inverse maps at position 1
    CHECK(compose(a, b).at(1) == 5);

    Rng rng(4);
    const ByteImage img = random_image(rng, 3, 3);
    CHECK(compose(a, b).apply(img) == a.apply(b.apply(img)));
}

TEST_CASE("composition is associative") {
    Rng rng(5);
    for (int trial = 0; trial < 30; ++trial) {
        const Permutation a = random_permutation(rng, 64);
        const Permutation b = random_permutation(rng, 64);
        const Permutation c = random_permutation(rng, 64);
        CHECK(compose(compose(a, b), c) == compose(a, compose(b, c)));
    }
}

TEST_CASE("permutation application preserves the byte multiset") {
    Rng rng(6);
    for (int trial = 0; trial < 20; ++trial) {
        const Permutation p = random_permutation(rng, 64);
        const ByteImage img = random_image(rng, 8, 8);
        auto before = img.data();
        auto after = p.apply(img).data();
        std::sort(before.begin(), before.end());
        std::sort(after.begin(), after.end());
        CHECK(before == after);
    }
}

TEST_CASE("malformed permutations are rejected") {
    CHECK_THROWS_AS(Permutation({1, 1, 3}), DimensionError);
    CHECK_THROWS_AS(Permutation({0, 1, 2}), DimensionError);
    CHECK_THROWS_AS(Permutation({1, 2, 4}), DimensionError);
    Rng rng(7);
    CHECK_THROWS_AS(Permutation::identity(8).apply(random_image(rng, 3, 3)), DimensionError);
}

TEST_CASE("from_pairs builds the documented direction") {
    const std::vector<std::pair<std::uint32_t, std::uint32_t>> pairs{
        {1, 4}, {2, 5}, {3, 2}, {4, 9}, {5, 8}, {6, 7}, {7, 6}, {8, 3}, {9, 1}};
    CHECK(Permutation::from_pairs(9, pairs) == worked::pre_inverse());
}

TEST_CASE("rng streams are deterministic and split cleanly") {
    Rng a(42), b(42);
    for (int i = 0; i < 100; ++i) CHECK(a.next_u64() == b.next_u64());
    Rng parent(42);
    Rng c1 = parent.split(1), c2 = parent.split(2);
    CHECK(c1.next_u64() != c2.next_u64());
}
