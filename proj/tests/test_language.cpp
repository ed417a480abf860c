#include "doctest.h"

#include <cmath>
#include <string>

#include "whtrim/automata.hpp"
#include "whtrim/constraints.hpp"
#include "whtrim/errors.hpp"
#include "whtrim/language.hpp"

using namespace whtrim;

TEST_CASE("exact counts match the brute-force oracle") {
    Automaton a25 = build_minimal(2, 5);
    CHECK(count_words(a25, 0) == BigInt(1));
    CHECK(count_words(a25, 1) == BigInt(2));
    CHECK(count_words(a25, 3) == BigInt(7));

    for (auto [m, k] : {std::pair<int, int>{1, 3}, {2, 5}, {3, 6}}) {
        auto lang = enumerate_language(any_miss(m, k), 12);
        Automaton a = build_minimal(m, k);
        Automaton h = build_isomorphic(m, k);
        for (int len = 0; len <= 12; ++len) {
            INFO("m=", m, " k=", k, " len=", len);
            CHECK(count_words(a, len) == BigInt(lang[static_cast<std::size_t>(len)].size()));
            CHECK(count_words(h, len) == BigInt(lang[static_cast<std::size_t>(len)].size()));
        }
    }

    CHECK_THROWS_AS(count_words(a25, -1), InvalidArgument);
}

TEST_CASE("compressed acceptors count at least as many words") {
    Automaton a = build_minimal(2, 5);
    Automaton t = build_compressed(2, 5, 3);
    // Strictly more at length 7: the over-approximation admits extra words.
    CHECK(count_words(t, 7) >= count_words(a, 7) + 1);
    for (int len = 0; len <= 14; ++len) CHECK(count_words(t, len) >= count_words(a, len));

    for (auto [m, k, c] : {std::tuple<int, int, int>{2, 7, 2}, {3, 8, 3}, {2, 9, 4}}) {
        Automaton ex = build_minimal(m, k);
        Automaton tr = build_compressed(m, k, c);
        for (int len = 0; len <= 14; ++len) {
            INFO("m=", m, " k=", k, " c=", c, " len=", len);
            CHECK(count_words(tr, len) >= count_words(ex, len));
        }
    }
}

TEST_CASE("growth estimate matches independently computed constants") {
    // Frozen high-precision reference values for the dominant eigenpair of
    // the combined transition matrix, computed with an independent
    // arbitrary-precision eigensolver.
    GrowthEstimate g36 = growth(build_minimal(2, 36));
    CHECK(g36.lambda == doctest::Approx(1.1509294191604074).epsilon(1e-9));
    CHECK(g36.a == doctest::Approx(7.052704882849246).epsilon(1e-7));
    CHECK(g36.source == "anymiss:2:36");

    GrowthEstimate g37 = growth(build_isomorphic(2, 37));
    CHECK(g37.lambda == doctest::Approx(1.147812338510838).epsilon(1e-9));
    CHECK(g37.a == doctest::Approx(7.240425309601088).epsilon(1e-7));

    GrowthEstimate gt = growth(build_compressed(2, 5, 3));
    CHECK(gt.source == "trim:2:5:3");
    CHECK(gt.lambda > growth(build_minimal(2, 5)).lambda);  // coarser = faster growth
}

TEST_CASE("growth rate stays in the binary-alphabet band") {
    for (auto [m, k] : {std::pair<int, int>{1, 4}, {2, 6}, {3, 7}, {2, 12}}) {
        GrowthEstimate g = growth(build_minimal(m, k));
        INFO("m=", m, " k=", k);
        CHECK(g.lambda > 1.0);
        CHECK(g.lambda <= 2.0);
        CHECK(g.a > 0.0);
    }
}

TEST_CASE("counts converge to the growth model") {
    for (const Automaton& a : {build_minimal(2, 8), build_compressed(2, 8, 4)}) {
        GrowthEstimate g = growth(a);

        double c200 = static_cast<double>(count_words(a, 200));
        double c201 = static_cast<double>(count_words(a, 201));
        CHECK(std::abs(c201 / c200 - g.lambda) <= 1e-3);

        double c400 = static_cast<double>(count_words(a, 400));
        double predicted = g.a * std::pow(g.lambda, 400);
        CHECK(std::abs(c400 / predicted - 1.0) <= 0.01);
    }
}

TEST_CASE("simulation holds between exact and compressed acceptors") {
    SimulationReport r = check_simulation(build_isomorphic(2, 5), build_compressed(2, 5, 3));
    CHECK(r.holds);
    CHECK_FALSE(r.witness.has_value());
    CHECK(r.relation_size >= 7);

    // Spacing 1 compresses nothing; the identity pairs are all in the
    // closure.
    SimulationReport id = check_simulation(build_isomorphic(2, 6), build_compressed(2, 6, 1));
    CHECK(id.holds);
    CHECK(id.relation_size >= build_isomorphic(2, 6).size());
}

TEST_CASE("simulation holds across the full small grid") {
    for (int m = 2; m <= 4; ++m) {
        for (int k = m + 1; k <= 12; ++k) {
            Automaton h = build_isomorphic(m, k);
            for (int c = 1; c <= k - m; ++c) {
                INFO("m=", m, " k=", k, " c=", c);
                SimulationReport r = check_simulation(h, build_compressed(m, k, c));
                CHECK(r.holds);
            }
        }
    }
}

TEST_CASE("simulation fails in the reverse direction with a witness") {
    SimulationReport r = check_simulation(build_compressed(2, 5, 3), build_isomorphic(2, 5));
    CHECK_FALSE(r.holds);
    REQUIRE(r.witness.has_value());
    // The broken obligation is a miss-move the exact acceptor cannot match
    // while keeping the ordering.
    CHECK(r.witness->symbol == 0);
}

TEST_CASE("simulation input validation") {
    CHECK_THROWS_AS(check_simulation(build_isomorphic(2, 5), build_compressed(2, 6, 2)),
                    ParameterMismatch);
    CHECK_THROWS_AS(check_simulation(build_minimal(2, 5), build_compressed(2, 5, 2)),
                    InvalidArgument);
}

TEST_CASE("bounded inclusion through the synchronized product") {
    Automaton a = build_minimal(2, 5);
    Automaton t = build_compressed(2, 5, 3);

    CHECK(check_inclusion_bounded(a, t, 12));
    CHECK(check_inclusion_bounded(a, a, 12));
    // The gap between the two languages opens exactly at length 7.
    CHECK(check_inclusion_bounded(t, a, 6));
    CHECK_FALSE(check_inclusion_bounded(t, a, 7));

    // The witness word of the gap: accepted compressed, rejected exact.
    Word w = word_from_string("0110100");
    CHECK(t.accepts(w));
    CHECK_FALSE(a.accepts(w));

    CHECK_THROWS_AS(check_inclusion_bounded(a, t, 21), LimitExceeded);
    CHECK_THROWS_AS(check_inclusion_bounded(a, t, -1), InvalidArgument);
}

TEST_CASE("bounded inclusion agrees with word-by-word checking") {
    for (auto [m, k, c] : {std::tuple<int, int, int>{2, 5, 3}, {3, 7, 2}}) {
        Automaton a = build_minimal(m, k);
        Automaton t = build_compressed(m, k, c);
        auto lang = enumerate_language(any_miss(m, k), 9);

        // Forward direction: every exact word runs through the compressed
        // acceptor.
        bool all_in = true;
        for (const auto& bucket : lang)
            for (const Word& w : bucket)
                if (!t.accepts(w)) all_in = false;
        CHECK(all_in);
        CHECK(check_inclusion_bounded(a, t, 9) == all_in);

        // Reverse direction: the product check agrees with brute force over
        // all compressed-accepted words.
        bool reverse = true;
        for (std::uint32_t code = 0; code < (1u << 9); ++code) {
            Word w;
            for (int b = 8; b >= 0; --b)
                w.bits.push_back(static_cast<std::uint8_t>((code >> b) & 1u));
            for (std::size_t len = 0; len <= 9; ++len) {
                Word prefix;
                prefix.bits.assign(w.bits.begin(), w.bits.begin() + static_cast<long>(len));
                if (t.accepts(prefix) && !a.accepts(prefix)) reverse = false;
            }
        }
        CHECK(check_inclusion_bounded(t, a, 9) == reverse);
    }
}
