#include "doctest.h"

#include "whtrim/constraints.hpp"

#include "test_util.hpp"

using namespace whtrim;

TEST_CASE("word round-trips through strings") {
    CHECK(to_string(word_from_string("0110100")) == "0110100");
    CHECK(word_from_string("").size() == 0);
    CHECK_THROWS_AS(word_from_string("01x"), InvalidArgument);
}

TEST_CASE("constraint construction validates its bounds") {
    CHECK_NOTHROW(any_miss(2, 5));
    CHECK_NOTHROW(any_hit(3, 5));
    CHECK_THROWS_AS(any_miss(0, 5), InvalidArgument);   // nothing may be missed
    CHECK_THROWS_AS(any_miss(5, 5), InvalidArgument);   // everything may be missed
    CHECK_THROWS_AS(any_miss(7, 5), InvalidArgument);
    CHECK_THROWS_AS(any_hit(0, 5), InvalidArgument);
    CHECK_THROWS_AS(any_hit(5, 5), InvalidArgument);
    CHECK_THROWS_AS(any_miss(1, 1), InvalidArgument);
}

TEST_CASE("satisfies on hand-checked traces") {
    auto c = any_miss(2, 5);
    CHECK(satisfies(word_from_string("1111111"), c));
    CHECK_FALSE(satisfies(word_from_string("0110100"), c));  // window 10100 has 3 misses
    CHECK(satisfies(word_from_string("00"), c));
    // 000 already pins 3 misses into any window that covers it.
    CHECK_FALSE(satisfies(word_from_string("000"), c));
    CHECK(satisfies(Word{}, c));
    // Window 01100 pins 3 misses even though the whole trace averages fine.
    CHECK_FALSE(satisfies(word_from_string("0110011001"), c));
    CHECK(satisfies(word_from_string("0110110110"), c));
    CHECK_FALSE(satisfies(word_from_string("0110110100"), c));
}

TEST_CASE("anyhit counts hits per window") {
    auto c = any_hit(3, 5);
    CHECK(satisfies(word_from_string("1111111"), c));
    CHECK_FALSE(satisfies(word_from_string("000"), c));
    CHECK(satisfies(word_from_string("110110110"), c));
}

TEST_CASE("dual swaps the family and preserves the language") {
    auto c = any_miss(2, 5);
    auto d = dual(c);
    CHECK(d.kind == ConstraintKind::AnyHit);
    CHECK(d.bound == 3);
    CHECK(d.k == 5);
    CHECK(d == c);          // semantic equality
    CHECK(dual(d) == c);    // involution
    CHECK(dual(dual(c)).kind == ConstraintKind::AnyMiss);

    auto h = any_hit(8, 10);
    auto hd = dual(h);
    CHECK(hd.kind == ConstraintKind::AnyMiss);
    CHECK(hd.bound == 2);
    CHECK(hd.k == 10);
    CHECK(hd == h);
}

TEST_CASE("dual agrees with the original on random traces") {
    whtrim_test::Rng rng(2024);
    const int grid[][2] = {{1, 3}, {2, 5}, {3, 5}, {2, 8}, {4, 9}};
    for (auto [m, k] : grid) {
        auto c = any_miss(m, k);
        auto d = dual(c);
        for (int t = 0; t < 200; ++t) {
            Word w;
            auto len = rng.below(24);
            for (std::uint64_t i = 0; i < len; ++i)
                w.bits.push_back(static_cast<std::uint8_t>(rng.below(2)));
            CHECK(satisfies(w, c) == satisfies(w, d));
        }
    }
}

TEST_CASE("enumerate_language matches hand counts for two misses in five") {
    auto lang = enumerate_language(any_miss(2, 5), 3);
    REQUIRE(lang.size() == 4);
    CHECK(lang[0].size() == 1);  // the empty word
    REQUIRE(lang[1].size() == 2);
    CHECK(to_string(lang[1][0]) == "0");
    CHECK(to_string(lang[1][1]) == "1");
    CHECK(lang[2].size() == 4);  // every two-symbol word keeps a legal future
    CHECK(lang[3].size() == 7);  // all but 000
    for (const auto& w : lang[3]) CHECK(to_string(w) != "000");
}

TEST_CASE("enumerated languages are prefix-closed and at most double per step") {
    for (auto [m, k] : {std::pair{1, 4}, std::pair{2, 5}, std::pair{3, 7}}) {
        auto c = any_miss(m, k);
        auto lang = enumerate_language(c, 10);
        for (std::size_t len = 1; len < lang.size(); ++len) {
            CHECK(lang[len].size() <= 2 * lang[len - 1].size());
            for (const auto& w : lang[len]) {
                Word prefix(std::vector<std::uint8_t>(w.bits.begin(), w.bits.end() - 1));
                CHECK(satisfies(prefix, c));
            }
        }
    }
}

TEST_CASE("enumerate_language rejects oversized requests") {
    CHECK_THROWS_AS(enumerate_language(any_miss(2, 5), 25), LimitExceeded);
    CHECK_THROWS_AS(enumerate_language(any_miss(2, 5), -1), InvalidArgument);
}
