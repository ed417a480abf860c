#ifndef WHTRIM_AUTOMATA_HPP
#define WHTRIM_AUTOMATA_HPP

#include <array>
#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "whtrim/bigint.hpp"
#include "whtrim/constraints.hpp"
#include "whtrim/errors.hpp"
#include "whtrim/linalg.hpp"

namespace whtrim {

// Cap on automaton sizes; overridable per call (the CLI maps the
// WHTRIM_STATE_BUDGET environment variable onto it).
inline constexpr unsigned long long kDefaultStateBudget = 5'000'000ull;

// Node label of the minimal acceptor: star_count stale positions followed
// by the concrete tail of the last k symbols, oldest first. The tail starts
// with a hit, and reading stars as misses the full k-length string carries
// exactly m misses.
struct StarLabel {
    int star_count = 0;
    std::vector<std::uint8_t> suffix;

    bool operator==(const StarLabel& o) const = default;
};

// Node label of the tuple-form acceptors: u non-increasing, each entry in
// [0, k-m]. Entry i is the number of hits still owed before the (i+1)-th
// tracked miss leaves the window.
struct TupleLabel {
    std::vector<int> u;

    bool operator==(const TupleLabel& o) const = default;
};

enum class AutomatonKind { Minimal, Isomorphic, Compressed };

// A deterministic acceptor over {0 = miss, 1 = hit}. All states accept;
// a word is in the language iff every step stays defined. Exactly one of
// star_labels / tuple_labels is populated, depending on kind.
struct Automaton {
    AutomatonKind kind = AutomatonKind::Minimal;
    int m = 0, k = 0;
    int c = 0;  // compression step; 0 unless kind == Compressed
    std::size_t initial = 0;
    std::vector<StarLabel> star_labels;
    std::vector<TupleLabel> tuple_labels;
    // next[i][symbol]; -1 when the transition is absent.
    std::vector<std::array<std::int64_t, 2>> next;

    std::size_t size() const { return next.size(); }
    bool accepts(const Word& w) const;
    // State reached after reading w from the initial state, if every step
    // stays defined.
    std::optional<std::size_t> run(const Word& w) const;
};

// Position (1 = most recent symbol) at which the i-th miss, counted from
// the most recent end, sits in `v`; empty when v has fewer than i misses.
std::optional<int> g_index(const Word& v, int i);

// Tuple equivalent of a star label: u_i = k - m + i - g(v, i) with stars
// read as misses. Bijective on the minimal acceptor's node set.
TupleLabel node_map(const StarLabel& label, int m, int k);

// Minimal acceptor of AnyMiss(m, k) over star labels. Nodes are indexed
// with the initial label first, then the remaining labels in descending
// order of their star-as-miss bit strings.
Automaton build_minimal(int m, int k,
                        unsigned long long state_budget = kDefaultStateBudget);

// The same acceptor over tuple labels. Nodes are indexed with <0,...,0>
// first, then the remaining tuples in descending lexicographic order.
Automaton build_isomorphic(int m, int k,
                           unsigned long long state_budget = kDefaultStateBudget);

// Compressed acceptor: keeps only tuples with (u_1 - u_2) divisible by c or
// u_m = 0, and redirects miss-edges to the nearest kept tuple from above.
// Accepts a superset of the exact language. For m = 1 the node set cannot
// shrink, so the tuple acceptor is returned unchanged (with c recorded).
Automaton build_compressed(int m, int k, int c,
                           unsigned long long state_budget = kDefaultStateBudget);

// Number of states of build_compressed(m, k, c), in closed form.
BigInt state_count(int m, int k, int c);

// True iff `tuples` is the image of `stars` under node_map as a relabeling
// that matches initial states and transitions exactly both ways.
bool check_isomorphism(const Automaton& stars, const Automaton& tuples);

// 0/1 transition matrices: pi0 (miss edges), pi1 (hit edges) and their
// union pi, each dim = automaton size, entry (src, dst).
struct Adjacency {
    SparseMatrix pi0, pi1, pi;
};
Adjacency adjacency(const Automaton& a);

// Human-readable node label: "2,0" for tuples, "**111" for star labels.
std::string label_string(const Automaton& a, std::size_t i);

// Graphviz rendering with one node per state (initial double-circled) and
// edge attribute label=0|1.
std::string to_dot(const Automaton& a);

// Transition list as CSV: header src,symbol,dst; rows sorted by src then
// symbol. The label sidecar maps index,label (labels quoted).
std::string transitions_csv(const Automaton& a);
std::string labels_csv(const Automaton& a);

}  // namespace whtrim

#endif
