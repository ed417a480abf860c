#include "doctest.h"

#include <algorithm>
#include <map>
#include <set>
#include <string>
#include <vector>

#include "whtrim/automata.hpp"
#include "whtrim/constraints.hpp"
#include "whtrim/errors.hpp"

using namespace whtrim;

namespace {

// Index lookup by printable label, so graph assertions can be written in the
// same star/tuple notation used throughout the docs.
std::map<std::string, std::size_t> label_index(const Automaton& a) {
    std::map<std::string, std::size_t> out;
    for (std::size_t i = 0; i < a.size(); ++i) out.emplace(label_string(a, i), i);
    REQUIRE(out.size() == a.size());
    return out;
}

// One edge in by-label notation: src --symbol--> dst, or dst == "" for "no
// transition defined".
struct Edge {
    std::string src;
    int symbol;
    std::string dst;  // empty string = edge must be absent
};

void check_graph(const Automaton& a, const std::vector<Edge>& edges) {
    auto idx = label_index(a);
    std::size_t defined = 0;
    for (const auto& e : edges) {
        INFO("edge ", e.src, " -", e.symbol, "-> ", e.dst);
        REQUIRE(idx.count(e.src) == 1);
        std::int64_t got = a.next[idx[e.src]][static_cast<std::size_t>(e.symbol)];
        if (e.dst.empty()) {
            CHECK(got == -1);
        } else {
            REQUIRE(idx.count(e.dst) == 1);
            CHECK(got == static_cast<std::int64_t>(idx[e.dst]));
            ++defined;
        }
    }
    // The edge list must be exhaustive: every defined transition is listed.
    std::size_t total = 0;
    for (std::size_t i = 0; i < a.size(); ++i)
        for (int s = 0; s < 2; ++s)
            if (a.next[i][static_cast<std::size_t>(s)] >= 0) ++total;
    CHECK(total == defined);
}

}  // namespace

TEST_CASE("g_index walks miss positions from newest to oldest") {
    // 100111010 (oldest first): newest-first scan hits misses at 1, 3, 7, 8.
    Word v = word_from_string("100111010");
    CHECK(g_index(v, 1) == 1);
    CHECK(g_index(v, 2) == 3);
    CHECK(g_index(v, 3) == 7);
    CHECK(g_index(v, 4) == 8);
    CHECK(g_index(v, 5) == std::nullopt);

    CHECK(g_index(word_from_string("1111"), 1) == std::nullopt);
    CHECK(g_index(word_from_string("0"), 1) == 1);
    CHECK(g_index(Word{}, 1) == std::nullopt);
}

TEST_CASE("node_map sends star labels to the documented tuples") {
    auto tup = [](const StarLabel& s, int m, int k) { return node_map(s, m, k).u; };

    CHECK((tup(StarLabel{2, {1, 1, 1}}, 2, 5) == std::vector<int>{0, 0}));
    CHECK((tup(StarLabel{0, {1, 1, 1, 0, 0}}, 2, 5) == std::vector<int>{3, 3}));
    CHECK((tup(StarLabel{1, {1, 1, 0, 1}}, 2, 5) == std::vector<int>{2, 0}));
}

TEST_CASE("node_map is a bijection onto the tuple node set") {
    for (auto [m, k] : {std::pair<int, int>{2, 5}, {3, 7}, {2, 8}}) {
        Automaton a = build_minimal(m, k);
        Automaton h = build_isomorphic(m, k);
        std::set<std::vector<int>> image;
        for (const auto& s : a.star_labels) image.insert(node_map(s, m, k).u);
        std::set<std::vector<int>> nodes;
        for (const auto& t : h.tuple_labels) nodes.insert(t.u);
        CHECK(image == nodes);
    }
}

TEST_CASE("minimal acceptor for at most 2 misses in any 5 has the documented graph") {
    Automaton a = build_minimal(2, 5);
    REQUIRE(a.size() == 10);
    REQUIRE(a.kind == AutomatonKind::Minimal);
    CHECK(a.initial == 0);
    CHECK(label_string(a, 0) == "**111");

    // Node order: initial first, then the rest in descending order of their
    // tuple images, so the index structure lines up with the tuple builders.
    std::vector<std::string> want = {"**111", "11100", "11010", "10110", "*1110",
                                     "11001", "10101", "*1101", "10011", "*1011"};
    std::vector<std::string> got;
    for (std::size_t i = 0; i < a.size(); ++i) got.push_back(label_string(a, i));
    CHECK(got == want);

    // Same index structure as the tuple form: identical transition table.
    CHECK(a.next == build_isomorphic(2, 5).next);
    CHECK(transitions_csv(a) == transitions_csv(build_isomorphic(2, 5)));

    check_graph(a, {
                       {"**111", 1, "**111"}, {"**111", 0, "*1110"},
                       {"*1110", 1, "*1101"}, {"*1110", 0, "11100"},
                       {"*1101", 1, "*1011"}, {"*1101", 0, "11010"},
                       {"*1011", 1, "**111"}, {"*1011", 0, "10110"},
                       {"11100", 1, "11001"}, {"11100", 0, ""},
                       {"11001", 1, "10011"}, {"11001", 0, ""},
                       {"10011", 1, "**111"}, {"10011", 0, ""},
                       {"11010", 1, "10101"}, {"11010", 0, ""},
                       {"10101", 1, "*1011"}, {"10101", 0, ""},
                       {"10110", 1, "*1101"}, {"10110", 0, ""},
                   });
}

TEST_CASE("tuple automaton for at most 2 misses in any 5 has the documented graph") {
    Automaton h = build_isomorphic(2, 5);
    REQUIRE(h.size() == 10);
    REQUIRE(h.kind == AutomatonKind::Isomorphic);
    CHECK(h.initial == 0);

    std::vector<std::string> want = {"0,0", "3,3", "3,2", "3,1", "3,0",
                                     "2,2", "2,1", "2,0", "1,1", "1,0"};
    std::vector<std::string> got;
    for (std::size_t i = 0; i < h.size(); ++i) got.push_back(label_string(h, i));
    CHECK(got == want);

    check_graph(h, {
                       {"0,0", 1, "0,0"}, {"0,0", 0, "3,0"},
                       {"3,0", 1, "2,0"}, {"3,0", 0, "3,3"},
                       {"2,0", 1, "1,0"}, {"2,0", 0, "3,2"},
                       {"1,0", 1, "0,0"}, {"1,0", 0, "3,1"},
                       {"3,3", 1, "2,2"}, {"3,3", 0, ""},
                       {"3,2", 1, "2,1"}, {"3,2", 0, ""},
                       {"3,1", 1, "2,0"}, {"3,1", 0, ""},
                       {"2,2", 1, "1,1"}, {"2,2", 0, ""},
                       {"2,1", 1, "1,0"}, {"2,1", 0, ""},
                       {"1,1", 1, "0,0"}, {"1,1", 0, ""},
                   });
}

TEST_CASE("compressed automaton with window 5, budget 2, spacing 3") {
    Automaton t = build_compressed(2, 5, 3);
    REQUIRE(t.kind == AutomatonKind::Compressed);
    REQUIRE(t.size() == 7);
    CHECK(t.c == 3);

    check_graph(t, {
                       {"0,0", 1, "0,0"}, {"0,0", 0, "3,0"},
                       {"3,0", 1, "2,0"}, {"3,0", 0, "3,3"},
                       {"2,0", 1, "1,0"}, {"2,0", 0, "2,2"},
                       {"1,0", 1, "0,0"}, {"1,0", 0, "1,1"},
                       {"3,3", 1, "2,2"}, {"3,3", 0, ""},
                       {"2,2", 1, "1,1"}, {"2,2", 0, ""},
                       {"1,1", 1, "0,0"}, {"1,1", 0, ""},
                   });
}

TEST_CASE("acceptor sizes match the closed-form state count") {
    CHECK(build_minimal(2, 5).size() == 10);
    CHECK(build_minimal(3, 5).size() == 10);
    CHECK(build_minimal(1, 4).size() == 4);
    CHECK(build_minimal(2, 12).size() == 66);
    CHECK(state_count(2, 50, 45) == BigInt(100));
    CHECK(state_count(2, 300, 260) == BigInt(635));
    CHECK(state_count(2, 300, 298) == BigInt(597));
    CHECK(state_count(2, 5, 3) == BigInt(7));

    // Spacing 1 keeps every node: the count collapses to the binomial.
    for (unsigned m = 1; m <= 5; ++m)
        for (unsigned k = m + 1; k <= 14; ++k)
            CHECK(state_count(m, k, 1) == binomial(k, m));
}

TEST_CASE("built sizes agree with the closed-form count on a small grid") {
    for (unsigned m = 2; m <= 4; ++m) {
        for (unsigned k = m + 1; k <= 10; ++k) {
            for (unsigned c = 1; c <= k - m; ++c) {
                Automaton t = build_compressed(m, k, c);
                INFO("m=", m, " k=", k, " c=", c);
                CHECK(BigInt(t.size()) == state_count(m, k, c));
            }
        }
    }
}

TEST_CASE("spacing 1 reproduces the tuple automaton exactly") {
    for (auto [m, k] : {std::pair<unsigned, unsigned>{2, 5}, {3, 7}, {2, 9}}) {
        Automaton h = build_isomorphic(m, k);
        Automaton t = build_compressed(m, k, 1);
        REQUIRE(h.size() == t.size());
        CHECK(h.tuple_labels == t.tuple_labels);
        CHECK(h.next == t.next);
        CHECK(h.initial == t.initial);
    }
}

TEST_CASE("budget 1 compression keeps the full graph for any spacing") {
    for (unsigned c : {1u, 2u, 5u}) {
        Automaton h = build_isomorphic(1, 6);
        Automaton t = build_compressed(1, 6, c);
        REQUIRE(t.kind == AutomatonKind::Compressed);
        CHECK(t.c == c);
        CHECK(h.tuple_labels == t.tuple_labels);
        CHECK(h.next == t.next);
    }
}

TEST_CASE("compressed size shrinks as spacing grows") {
    BigInt prev = state_count(2, 12, 1);
    for (unsigned c = 2; c <= 10; ++c) {
        BigInt cur = state_count(2, 12, c);
        CHECK(cur <= prev);
        prev = cur;
    }
}

TEST_CASE("state budget aborts construction with the required size attached") {
    CHECK_THROWS_AS(build_minimal(3, 100, 1000), StateBudgetExceeded);
    try {
        build_minimal(3, 100, 1000);
    } catch (const StateBudgetExceeded& e) {
        CHECK(e.required == 161700ull);
    }
    CHECK_THROWS_AS(build_isomorphic(3, 100, 1000), StateBudgetExceeded);
    CHECK_THROWS_AS(build_compressed(2, 300, 260, 100), StateBudgetExceeded);
    // A budget that exactly fits does not throw.
    CHECK(build_minimal(2, 5, 10).size() == 10);
}

TEST_CASE("structure check relates the two exact acceptors") {
    CHECK(check_isomorphism(build_minimal(2, 5), build_isomorphic(2, 5)));
    CHECK(check_isomorphism(build_minimal(3, 7), build_isomorphic(3, 7)));
    CHECK(check_isomorphism(build_minimal(1, 4), build_isomorphic(1, 4)));

    CHECK_FALSE(check_isomorphism(build_minimal(2, 5), build_isomorphic(2, 6)));

    // Tampering with one edge must be caught.
    Automaton h = build_isomorphic(2, 5);
    Automaton a = build_minimal(2, 5);
    std::swap(h.next[5][1], h.next[8][1]);
    CHECK_FALSE(check_isomorphism(a, h));
}

TEST_CASE("word runs agree with the brute-force language on a small grid") {
    for (auto [m, k] : {std::pair<unsigned, unsigned>{1, 3}, {2, 5}, {3, 6}}) {
        WeaklyHardConstraint con = any_miss(m, k);
        Automaton a = build_minimal(m, k);
        Automaton h = build_isomorphic(m, k);
        auto lang = enumerate_language(con, 9);
        std::size_t n = 0;
        for (std::uint64_t code = 0; code < (1u << 9); ++code) {
            Word w;
            for (int b = 8; b >= 0; --b) w.bits.push_back((code >> b) & 1u);
            bool in_lang = std::binary_search(lang[9].begin(), lang[9].end(), w);
            CHECK(a.accepts(w) == in_lang);
            CHECK(h.accepts(w) == in_lang);
            ++n;
        }
        CHECK(n == 512);
    }
}

TEST_CASE("compressed acceptor over-approximates: a specific miss pattern shows the gap") {
    Word w = word_from_string("0110100");
    CHECK_FALSE(build_minimal(2, 5).accepts(w));
    CHECK_FALSE(build_isomorphic(2, 5).accepts(w));
    CHECK(build_compressed(2, 5, 3).accepts(w));
}

TEST_CASE("transition matrices split by symbol and recombine") {
    Automaton h = build_isomorphic(2, 5);
    Adjacency adj = adjacency(h);
    REQUIRE(adj.pi0.dim == 10);
    REQUIRE(adj.pi1.dim == 10);
    REQUIRE(adj.pi.dim == 10);

    // Every node advances on a hit; only nodes with a spent budget entry
    // advance on a miss.
    CHECK(adj.pi1.nnz() == 10);
    CHECK(adj.pi0.nnz() == 4);
    CHECK(adj.pi.nnz() == 14);

    // The initial node keeps a hit self-loop.
    bool found = false;
    for (const auto& e : adj.pi1.entries)
        if (e.first == h.initial && e.second == h.initial) found = true;
    CHECK(found);

    // Row sums of the combined matrix: four rows carry both symbols.
    std::vector<int> row_sum(10, 0);
    for (const auto& e : adj.pi.entries) row_sum[e.first] += 1;
    CHECK(std::count(row_sum.begin(), row_sum.end(), 2) == 4);
    CHECK(std::count(row_sum.begin(), row_sum.end(), 1) == 6);

    // Per-symbol matrices have at most one entry per row (runs compose as
    // partial maps).
    for (const SparseMatrix* s : {&adj.pi0, &adj.pi1}) {
        std::set<std::uint32_t> rows;
        for (const auto& e : s->entries) CHECK(rows.insert(e.first).second);
    }

    // Combined matrix is the disjoint union of the two parts.
    std::set<std::pair<std::uint32_t, std::uint32_t>> all;
    for (const auto& e : adj.pi0.entries) all.insert(e);
    for (const auto& e : adj.pi1.entries) all.insert(e);
    std::set<std::pair<std::uint32_t, std::uint32_t>> comb(adj.pi.entries.begin(),
                                                           adj.pi.entries.end());
    CHECK(all == comb);

    // Deterministic output: building twice gives identical entry lists.
    Adjacency again = adjacency(build_isomorphic(2, 5));
    CHECK(adj.pi0.entries == again.pi0.entries);
    CHECK(adj.pi1.entries == again.pi1.entries);
    CHECK(adj.pi.entries == again.pi.entries);
}

TEST_CASE("exports carry labels and edges in the documented shapes") {
    Automaton h = build_isomorphic(2, 5);

    std::string dot = to_dot(h);
    CHECK(dot.find("digraph") != std::string::npos);
    CHECK(dot.find("n0 [label=\"0,0\", peripheries=2];") != std::string::npos);
    CHECK(dot.find("n0 -> n0 [label=1];") != std::string::npos);
    CHECK(dot.find("n0 -> n4 [label=0];") != std::string::npos);

    std::string csv = transitions_csv(h);
    CHECK(csv.rfind("src,symbol,dst\n0,0,4\n0,1,0\n", 0) == 0);
    // One line per defined transition plus the header.
    CHECK(std::count(csv.begin(), csv.end(), '\n') == 15);

    std::string labels = labels_csv(h);
    CHECK(labels.rfind("index,label\n0,\"0,0\"\n1,\"3,3\"\n", 0) == 0);
    CHECK(std::count(labels.begin(), labels.end(), '\n') == 11);

    std::string adot = to_dot(build_minimal(2, 5));
    CHECK(adot.find("n0 [label=\"**111\", peripheries=2];") != std::string::npos);
}

TEST_CASE("parameter validation rejects degenerate windows") {
    CHECK_THROWS_AS(build_minimal(0, 5), InvalidArgument);
    CHECK_THROWS_AS(build_minimal(5, 5), InvalidArgument);
    CHECK_THROWS_AS(build_isomorphic(6, 5), InvalidArgument);
    CHECK_THROWS_AS(build_compressed(2, 5, 0), InvalidArgument);
    CHECK_THROWS_AS(state_count(0, 5, 1), InvalidArgument);
    CHECK_THROWS_AS(state_count(2, 5, 0), InvalidArgument);
}
