#include "whtrim/automata.hpp"

#include <algorithm>
#include <limits>
#include <unordered_map>

namespace whtrim {

namespace {

void validate_window(int m, int k) {
    if (m < 1 || m >= k)
        throw InvalidArgument("need 1 <= m < k (m=" + std::to_string(m) +
                              ", k=" + std::to_string(k) + ")");
}

void check_budget(const BigInt& states, unsigned long long budget,
                  const std::string& what) {
    if (states > budget) {
        unsigned long long clamped =
            states > std::numeric_limits<unsigned long long>::max()
                ? std::numeric_limits<unsigned long long>::max()
                : states.convert_to<unsigned long long>();
        throw StateBudgetExceeded(what + " needs " + states.str() +
                                      " states, budget is " + std::to_string(budget),
                                  clamped);
    }
}

// Key used to index minimal-acceptor labels: the k-length bit string with
// stars read as misses. Distinct labels have distinct keys because the
// concrete tail always starts with a hit.
std::string star_key(const StarLabel& l, int k) {
    std::string s(static_cast<std::size_t>(k), '0');
    for (std::size_t i = 0; i < l.suffix.size(); ++i)
        s[static_cast<std::size_t>(l.star_count) + i] = l.suffix[i] ? '1' : '0';
    return s;
}

// Re-canonicalize a slid window: absorb leading positions into stars while
// the first concrete bit is a miss (labels must start with a hit) or while
// the string carries fewer than m misses (a leading hit that no future
// window can see any more).
StarLabel canonical_label(int stars, std::vector<std::uint8_t> bits, int m) {
    int zeros = static_cast<int>(std::count(bits.begin(), bits.end(), 0));
    std::size_t i = 0;
    while (i < bits.size()) {
        if (bits[i] == 0) {
            ++stars;
            --zeros;
            ++i;
        } else if (stars + zeros < m) {
            ++stars;
            ++i;
        } else {
            break;
        }
    }
    return StarLabel{stars, std::vector<std::uint8_t>(bits.begin() + static_cast<std::ptrdiff_t>(i),
                                                      bits.end())};
}

// Successor label after reading `sym`, or nothing when the completed window
// would hold m+1 misses (only possible when no position is stale yet).
std::optional<StarLabel> star_successor(const StarLabel& l, int sym, int m) {
    int stars = l.star_count;
    std::vector<std::uint8_t> bits = l.suffix;
    if (sym == 0 && stars == 0) return std::nullopt;
    if (stars > 0)
        --stars;
    else
        bits.erase(bits.begin());
    bits.push_back(static_cast<std::uint8_t>(sym));
    return canonical_label(stars, std::move(bits), m);
}

struct TupleHash {
    std::size_t operator()(const std::vector<int>& u) const {
        std::size_t h = 1469598103934665603ull;
        for (int v : u) {
            h ^= static_cast<std::size_t>(v) + 0x9e3779b97f4a7c15ull + (h << 6) + (h >> 2);
        }
        return h;
    }
};

// All non-increasing tuples over [0, bound]^m in descending lexicographic
// order, optionally filtered. <0,...,0> is then moved to the front so the
// initial node always gets index 0.
template <typename Keep>
std::vector<TupleLabel> enumerate_tuples(int m, int bound, Keep keep) {
    std::vector<TupleLabel> out;
    std::vector<int> u(static_cast<std::size_t>(m));
    auto rec = [&](auto&& self, int pos, int maxv) -> void {
        if (pos == m) {
            if (keep(u)) out.push_back(TupleLabel{u});
            return;
        }
        for (int v = maxv; v >= 0; --v) {
            u[static_cast<std::size_t>(pos)] = v;
            self(self, pos + 1, v);
        }
    };
    rec(rec, 0, bound);
    if (!out.empty()) {
        // descending order puts the all-zero initial tuple last
        std::rotate(out.begin(), out.end() - 1, out.end());
    }
    return out;
}

Automaton assemble_tuple_automaton(AutomatonKind kind, int m, int k, int c,
                                   std::vector<TupleLabel> labels) {
    const int bound = k - m;
    Automaton a;
    a.kind = kind;
    a.m = m;
    a.k = k;
    a.c = c;
    a.initial = 0;
    a.tuple_labels = std::move(labels);
    a.next.assign(a.tuple_labels.size(), {-1, -1});

    std::unordered_map<std::vector<int>, std::size_t, TupleHash> index;
    index.reserve(a.tuple_labels.size() * 2);
    for (std::size_t i = 0; i < a.tuple_labels.size(); ++i)
        index.emplace(a.tuple_labels[i].u, i);

    std::vector<int> t(static_cast<std::size_t>(m));
    for (std::size_t i = 0; i < a.tuple_labels.size(); ++i) {
        const auto& u = a.tuple_labels[i].u;
        // hit: every owed count comes one step closer, floored at zero
        for (int j = 0; j < m; ++j)
            t[static_cast<std::size_t>(j)] = std::max(u[static_cast<std::size_t>(j)] - 1, 0);
        a.next[i][1] = static_cast<std::int64_t>(index.at(t));
        // miss: only when the oldest tracked miss has left the window
        if (u[static_cast<std::size_t>(m - 1)] == 0) {
            int fresh;
            if (kind == AutomatonKind::Compressed && m >= 2) {
                // snap the fresh debt to the nearest kept tuple from above
                fresh = (u[static_cast<std::size_t>(m - 2)] == 0)
                            ? bound
                            : bound - (bound - u[0]) % c;
            } else {
                fresh = bound;
            }
            t[0] = fresh;
            for (int j = 1; j < m; ++j)
                t[static_cast<std::size_t>(j)] = u[static_cast<std::size_t>(j - 1)];
            a.next[i][0] = static_cast<std::int64_t>(index.at(t));
        }
    }
    return a;
}

}  // namespace

std::optional<int> g_index(const Word& v, int i) {
    if (i < 1) throw InvalidArgument("g_index wants i >= 1");
    const std::size_t n = v.size();
    int seen = 0;
    for (std::size_t p = 1; p <= n; ++p) {
        if (v.bits[n - p] == 0 && ++seen == i) return static_cast<int>(p);
    }
    return std::nullopt;
}

TupleLabel node_map(const StarLabel& label, int m, int k) {
    validate_window(m, k);
    const int len = label.star_count + static_cast<int>(label.suffix.size());
    if (len != k || label.star_count < 0)
        throw InvalidArgument("star label does not span a k-length window");
    Word full;
    full.bits.assign(static_cast<std::size_t>(label.star_count), 0);
    full.bits.insert(full.bits.end(), label.suffix.begin(), label.suffix.end());
    TupleLabel t;
    t.u.reserve(static_cast<std::size_t>(m));
    for (int i = 1; i <= m; ++i) {
        auto g = g_index(full, i);
        if (!g)
            throw InvalidArgument("star label carries fewer than m misses");
        t.u.push_back(k - m + i - *g);
    }
    return t;
}

Automaton build_minimal(int m, int k, unsigned long long state_budget) {
    validate_window(m, k);
    const BigInt total = binomial(static_cast<unsigned>(k), static_cast<unsigned>(m));
    check_budget(total, state_budget, "minimal acceptor");

    // Every label: p stars, then a tail of k-p bits starting with a hit and
    // holding exactly m-p misses.
    std::vector<StarLabel> labels;
    labels.reserve(total.convert_to<std::size_t>());
    for (int p = 0; p <= m; ++p) {
        const int len = k - p;
        const int zeros = m - p;
        std::vector<std::uint8_t> tail(static_cast<std::size_t>(len), 1);
        // choose the miss positions among tail indices 1..len-1
        std::vector<int> pos(static_cast<std::size_t>(zeros));
        for (int i = 0; i < zeros; ++i) pos[static_cast<std::size_t>(i)] = 1 + i;
        while (true) {
            std::fill(tail.begin(), tail.end(), std::uint8_t{1});
            for (int p_i : pos) tail[static_cast<std::size_t>(p_i)] = 0;
            labels.push_back(StarLabel{p, tail});
            if (zeros == 0) break;
            // next combination in lexicographic order
            int j = zeros - 1;
            while (j >= 0 && pos[static_cast<std::size_t>(j)] == len - zeros + j) --j;
            if (j < 0) break;
            ++pos[static_cast<std::size_t>(j)];
            for (int i = j + 1; i < zeros; ++i)
                pos[static_cast<std::size_t>(i)] = pos[static_cast<std::size_t>(i - 1)] + 1;
        }
    }

    // Order nodes by their tuple image, descending, so the index structure
    // coincides with the tuple-form acceptors and every builder emits the
    // same transition CSV for the same graph.  Tuple images are computed once
    // per label; recomputing them inside the comparator dominates build time
    // on six-figure state counts.
    {
        std::vector<std::pair<std::vector<int>, std::size_t>> keyed;
        keyed.reserve(labels.size());
        for (std::size_t i = 0; i < labels.size(); ++i)
            keyed.emplace_back(node_map(labels[i], m, k).u, i);
        std::sort(keyed.begin(), keyed.end(),
                  [](const auto& a, const auto& b) { return a.first > b.first; });
        std::vector<StarLabel> ordered;
        ordered.reserve(labels.size());
        for (auto& [u, i] : keyed) ordered.push_back(std::move(labels[i]));
        labels = std::move(ordered);
    }
    // descending order leaves the initial label (all stars first) last
    std::rotate(labels.begin(), labels.end() - 1, labels.end());

    Automaton a;
    a.kind = AutomatonKind::Minimal;
    a.m = m;
    a.k = k;
    a.c = 0;
    a.initial = 0;
    a.star_labels = std::move(labels);
    a.next.assign(a.star_labels.size(), {-1, -1});

    std::unordered_map<std::string, std::size_t> index;
    index.reserve(a.star_labels.size() * 2);
    for (std::size_t i = 0; i < a.star_labels.size(); ++i)
        index.emplace(star_key(a.star_labels[i], k), i);

    for (std::size_t i = 0; i < a.star_labels.size(); ++i) {
        for (int sym = 0; sym < 2; ++sym) {
            auto succ = star_successor(a.star_labels[i], sym, m);
            if (succ)
                a.next[i][static_cast<std::size_t>(sym)] =
                    static_cast<std::int64_t>(index.at(star_key(*succ, k)));
        }
    }
    return a;
}

Automaton build_isomorphic(int m, int k, unsigned long long state_budget) {
    validate_window(m, k);
    const BigInt total = binomial(static_cast<unsigned>(k), static_cast<unsigned>(m));
    check_budget(total, state_budget, "tuple acceptor");
    auto labels = enumerate_tuples(m, k - m, [](const std::vector<int>&) { return true; });
    return assemble_tuple_automaton(AutomatonKind::Isomorphic, m, k, 0, std::move(labels));
}

Automaton build_compressed(int m, int k, int c, unsigned long long state_budget) {
    validate_window(m, k);
    if (c < 1) throw InvalidArgument("compression step c must be >= 1");
    if (m == 1) {
        // a single tracked miss leaves nothing to thin out
        Automaton a = build_isomorphic(m, k, state_budget);
        a.kind = AutomatonKind::Compressed;
        a.c = c;
        return a;
    }
    check_budget(state_count(m, k, c), state_budget, "compressed acceptor");
    auto labels = enumerate_tuples(m, k - m, [c, m](const std::vector<int>& u) {
        return (u[0] - u[1]) % c == 0 || u[static_cast<std::size_t>(m - 1)] == 0;
    });
    return assemble_tuple_automaton(AutomatonKind::Compressed, m, k, c, std::move(labels));
}

BigInt state_count(int m, int k, int c) {
    validate_window(m, k);
    if (c < 1) throw InvalidArgument("compression step c must be >= 1");
    const unsigned bound = static_cast<unsigned>(k - m);
    const BigInt critical = binomial(static_cast<unsigned>(k - 1), static_cast<unsigned>(m - 1));
    if (m == 1) return critical + bound;

    // prefix sums of ceil(j/c) for j = 1..bound
    std::vector<BigInt> s(bound + 1);
    for (unsigned j = 1; j <= bound; ++j)
        s[j] = s[j - 1] + (j + static_cast<unsigned>(c) - 1) / static_cast<unsigned>(c);
    if (m == 2) return critical + s[bound];

    BigInt acc = critical;
    for (unsigned i = 0; i + 1 <= bound; ++i)
        acc += binomial(static_cast<unsigned>(m - 3) + i, i) * s[bound - i];
    return acc;
}

bool check_isomorphism(const Automaton& stars, const Automaton& tuples) {
    if (stars.kind != AutomatonKind::Minimal || tuples.kind != AutomatonKind::Isomorphic)
        return false;
    if (stars.m != tuples.m || stars.k != tuples.k) return false;
    if (stars.size() != tuples.size()) return false;

    std::unordered_map<std::vector<int>, std::size_t, TupleHash> index;
    index.reserve(tuples.size() * 2);
    for (std::size_t i = 0; i < tuples.size(); ++i)
        index.emplace(tuples.tuple_labels[i].u, i);

    std::vector<std::size_t> image(stars.size());
    std::vector<bool> hit(tuples.size(), false);
    for (std::size_t i = 0; i < stars.size(); ++i) {
        auto t = node_map(stars.star_labels[i], stars.m, stars.k);
        auto it = index.find(t.u);
        if (it == index.end() || hit[it->second]) return false;
        hit[it->second] = true;
        image[i] = it->second;
    }
    if (image[stars.initial] != tuples.initial) return false;
    for (std::size_t i = 0; i < stars.size(); ++i) {
        for (int sym = 0; sym < 2; ++sym) {
            auto s = stars.next[i][static_cast<std::size_t>(sym)];
            auto t = tuples.next[image[i]][static_cast<std::size_t>(sym)];
            if ((s < 0) != (t < 0)) return false;
            if (s >= 0 && static_cast<std::int64_t>(image[static_cast<std::size_t>(s)]) != t)
                return false;
        }
    }
    return true;
}

bool Automaton::accepts(const Word& w) const { return run(w).has_value(); }

std::optional<std::size_t> Automaton::run(const Word& w) const {
    std::size_t state = initial;
    for (auto b : w.bits) {
        auto nxt = next[state][b];
        if (nxt < 0) return std::nullopt;
        state = static_cast<std::size_t>(nxt);
    }
    return state;
}

Adjacency adjacency(const Automaton& a) {
    Adjacency adj;
    adj.pi0.dim = adj.pi1.dim = adj.pi.dim = a.size();
    for (std::size_t i = 0; i < a.size(); ++i) {
        for (int sym = 0; sym < 2; ++sym) {
            auto d = a.next[i][static_cast<std::size_t>(sym)];
            if (d < 0) continue;
            auto& target = sym == 0 ? adj.pi0 : adj.pi1;
            target.entries.emplace_back(static_cast<std::uint32_t>(i),
                                        static_cast<std::uint32_t>(d));
            adj.pi.entries.emplace_back(static_cast<std::uint32_t>(i),
                                        static_cast<std::uint32_t>(d));
        }
    }
    std::sort(adj.pi.entries.begin(), adj.pi.entries.end());
    return adj;
}

std::string label_string(const Automaton& a, std::size_t i) {
    if (a.kind == AutomatonKind::Minimal) {
        const auto& l = a.star_labels[i];
        std::string s(static_cast<std::size_t>(l.star_count), '*');
        for (auto b : l.suffix) s.push_back(b ? '1' : '0');
        return s;
    }
    const auto& u = a.tuple_labels[i].u;
    std::string s;
    for (std::size_t j = 0; j < u.size(); ++j) {
        if (j) s.push_back(',');
        s += std::to_string(u[j]);
    }
    return s;
}

std::string to_dot(const Automaton& a) {
    std::string out = "digraph automaton {\n  rankdir=LR;\n";
    for (std::size_t i = 0; i < a.size(); ++i) {
        out += "  n" + std::to_string(i) + " [label=\"" + label_string(a, i) + "\"";
        if (i == a.initial) out += ", peripheries=2";
        out += "];\n";
    }
    for (std::size_t i = 0; i < a.size(); ++i) {
        for (int sym = 0; sym < 2; ++sym) {
            auto d = a.next[i][static_cast<std::size_t>(sym)];
            if (d < 0) continue;
            out += "  n" + std::to_string(i) + " -> n" + std::to_string(d) +
                   " [label=" + std::to_string(sym) + "];\n";
        }
    }
    out += "}\n";
    return out;
}

std::string transitions_csv(const Automaton& a) {
    std::string out = "src,symbol,dst\n";
    for (std::size_t i = 0; i < a.size(); ++i) {
        for (int sym = 0; sym < 2; ++sym) {
            auto d = a.next[i][static_cast<std::size_t>(sym)];
            if (d < 0) continue;
            out += std::to_string(i) + "," + std::to_string(sym) + "," +
                   std::to_string(d) + "\n";
        }
    }
    return out;
}

std::string labels_csv(const Automaton& a) {
    std::string out = "index,label\n";
    for (std::size_t i = 0; i < a.size(); ++i)
        out += std::to_string(i) + ",\"" + label_string(a, i) + "\"\n";
    return out;
}

}  // namespace whtrim
