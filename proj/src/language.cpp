#include "whtrim/language.hpp"

#include <deque>
#include <unordered_set>
#include <vector>

#include "whtrim/linalg.hpp"

namespace whtrim {

namespace {

// Componentwise u >= v on equal-length tuples.
bool dominates(const TupleLabel& u, const TupleLabel& v) {
    if (u.u.size() != v.u.size()) return false;
    for (std::size_t i = 0; i < u.u.size(); ++i)
        if (u.u[i] < v.u[i]) return false;
    return true;
}

}  // namespace

std::string automaton_id(const Automaton& a) {
    if (a.kind == AutomatonKind::Compressed)
        return "trim:" + std::to_string(a.m) + ":" + std::to_string(a.k) + ":" +
               std::to_string(a.c);
    return "anymiss:" + std::to_string(a.m) + ":" + std::to_string(a.k);
}

BigInt count_words(const Automaton& a, int length) {
    if (length < 0) throw InvalidArgument("count_words wants a non-negative length");
    const std::size_t n = a.size();
    std::vector<BigInt> v(n), w(n);
    v[a.initial] = 1;
    for (int step = 0; step < length; ++step) {
        for (auto& x : w) x = 0;
        for (std::size_t i = 0; i < n; ++i) {
            if (v[i] == 0) continue;
            for (int sym = 0; sym < 2; ++sym) {
                std::int64_t j = a.next[i][static_cast<std::size_t>(sym)];
                if (j >= 0) w[static_cast<std::size_t>(j)] += v[i];
            }
        }
        std::swap(v, w);
    }
    BigInt total = 0;
    for (const auto& x : v) total += x;
    return total;
}

GrowthEstimate growth(const Automaton& a) {
    Adjacency adj = adjacency(a);
    PerronPair p = perron_pair(adj.pi);

    double overlap = 0.0;  // y^T x
    double left_mass = 0.0;
    for (std::size_t i = 0; i < p.x.size(); ++i) {
        overlap += p.y[i] * p.x[i];
        left_mass += p.x[i];
    }
    GrowthEstimate g;
    g.a = p.y[a.initial] * left_mass / overlap;
    g.lambda = p.lambda;
    g.source = automaton_id(a);
    return g;
}

SimulationReport check_simulation(const Automaton& h, const Automaton& t) {
    if (h.tuple_labels.empty() || t.tuple_labels.empty())
        throw InvalidArgument("check_simulation wants tuple-labeled acceptors");
    if (h.m != t.m || h.k != t.k)
        throw ParameterMismatch("check_simulation wants acceptors with equal window parameters");

    const std::size_t tn = t.size();
    auto key = [tn](std::size_t p, std::size_t q) { return p * tn + q; };

    SimulationReport report;
    std::unordered_set<std::size_t> seen;
    std::deque<std::pair<std::size_t, std::size_t>> queue;

    auto fail = [&](std::size_t p, std::size_t q, int sym) {
        report.holds = false;
        report.witness = SimulationWitness{p, q, sym};
        report.relation_size = seen.size();
        return report;
    };

    // The initial pair must already be ordered.
    if (!dominates(h.tuple_labels[h.initial], t.tuple_labels[t.initial]))
        return fail(h.initial, t.initial, -1);
    seen.insert(key(h.initial, t.initial));
    queue.emplace_back(h.initial, t.initial);

    while (!queue.empty()) {
        auto [p, q] = queue.front();
        queue.pop_front();
        for (int sym = 0; sym < 2; ++sym) {
            std::int64_t ps = h.next[p][static_cast<std::size_t>(sym)];
            if (ps < 0) continue;  // nothing to match
            std::int64_t qs = t.next[q][static_cast<std::size_t>(sym)];
            if (qs < 0) return fail(p, q, sym);
            auto pn = static_cast<std::size_t>(ps);
            auto qn = static_cast<std::size_t>(qs);
            // The matched successors must stay ordered.
            if (!dominates(h.tuple_labels[pn], t.tuple_labels[qn])) return fail(p, q, sym);
            if (seen.insert(key(pn, qn)).second) queue.emplace_back(pn, qn);
        }
    }

    report.holds = true;
    report.relation_size = seen.size();
    return report;
}

bool check_inclusion_bounded(const Automaton& a, const Automaton& t, int max_len) {
    if (max_len < 0) throw InvalidArgument("check_inclusion_bounded wants a non-negative bound");
    if (max_len > 20)
        throw LimitExceeded("check_inclusion_bounded bound capped at 20, got " +
                            std::to_string(max_len));

    const std::size_t tn = t.size();
    auto key = [tn](std::size_t p, std::size_t q) { return p * tn + q; };

    // Breadth-first product walk; a pair reached first at depth d covers all
    // later arrivals, because later arrivals have less length budget left.
    std::unordered_set<std::size_t> seen;
    std::vector<std::pair<std::size_t, std::size_t>> level{{a.initial, t.initial}};
    seen.insert(key(a.initial, t.initial));

    for (int depth = 0; depth < max_len && !level.empty(); ++depth) {
        std::vector<std::pair<std::size_t, std::size_t>> next_level;
        for (auto [p, q] : level) {
            for (int sym = 0; sym < 2; ++sym) {
                std::int64_t ps = a.next[p][static_cast<std::size_t>(sym)];
                if (ps < 0) continue;
                std::int64_t qs = t.next[q][static_cast<std::size_t>(sym)];
                if (qs < 0) return false;  // word accepted by a, rejected by t
                auto pn = static_cast<std::size_t>(ps);
                auto qn = static_cast<std::size_t>(qs);
                if (seen.insert(key(pn, qn)).second) next_level.emplace_back(pn, qn);
            }
        }
        level = std::move(next_level);
    }
    return true;
}

}  // namespace whtrim
