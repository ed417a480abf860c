#include "whtrim/jsr.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <limits>
#include <utility>
#include <vector>

namespace whtrim {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

// The per-symbol transition matrices of a deterministic acceptor carry at
// most one entry per row, so word products act as partial maps on states:
// map[i] is the state reached from i, or -1 when the path dies.
using StateMap = std::vector<std::int32_t>;

StateMap row_map(const SparseMatrix& s) {
    StateMap map(s.dim, -1);
    for (const auto& e : s.entries) {
        if (map[e.first] != -1)
            throw InvalidArgument("lift wants a deterministic acceptor (one entry per row)");
        map[e.first] = static_cast<std::int32_t>(e.second);
    }
    return map;
}

// Product of two partial maps, first `a` then `b`.
StateMap compose(const StateMap& a, const StateMap& b) {
    StateMap out(a.size(), -1);
    for (std::size_t i = 0; i < a.size(); ++i)
        if (a[i] >= 0) out[i] = b[static_cast<std::size_t>(a[i])];
    return out;
}

std::size_t map_nnz(const StateMap& m) {
    std::size_t n = 0;
    for (auto v : m)
        if (v >= 0) ++n;
    return n;
}

// Spectral radius of a partial-map matrix is 1 when the map has a cycle
// (powers keep a 1 on the diagonal forever) and 0 otherwise (nilpotent).
bool map_has_cycle(const StateMap& m) {
    // 0 = unvisited, 1 = on the current walk, 2 = known cycle-free.
    std::vector<std::uint8_t> state(m.size(), 0);
    std::vector<std::size_t> path;
    for (std::size_t start = 0; start < m.size(); ++start) {
        if (state[start] != 0) continue;
        std::size_t v = start;
        path.clear();
        while (true) {
            if (state[v] == 1) return true;  // rejoined the current walk
            if (state[v] == 2) break;
            state[v] = 1;
            path.push_back(v);
            if (m[v] < 0) break;
            v = static_cast<std::size_t>(m[v]);
        }
        for (std::size_t u : path) state[u] = 2;
    }
    return false;
}

// Operator 2-norm of a partial-map matrix: its Gram matrix is diagonal
// (each row has a single 1), so the norm is the square root of the largest
// column multiplicity. Exact.
double map_norm2(const StateMap& m) {
    std::vector<std::uint32_t> mult(m.size(), 0);
    std::uint32_t best = 0;
    for (auto v : m)
        if (v >= 0) best = std::max(best, ++mult[static_cast<std::size_t>(v)]);
    return std::sqrt(static_cast<double>(best));
}

// Deterministic 2-norm through the dense eigensolver: largest eigenvalue
// of the Gram matrix. Used for the small dynamics factors, where it is
// cheap and has no iteration-convergence edge cases.
double norm2_qr(const Matrix& m) {
    if (m.rows == 0) return 0.0;
    double top = 0.0;
    for (const auto& lam : eigenvalues(multiply(transpose(m), m)))
        top = std::max(top, lam.real());
    return std::sqrt(std::max(0.0, top));
}

// 2-norm for materialized lifted products: power iteration on the Gram
// operator without forming it (two mat-vec passes per step), with the
// eigensolver as fallback when the iteration stalls.
double norm2_explicit(const Matrix& m) {
    const std::size_t n = m.rows;
    if (n == 0) return 0.0;
    if (n <= 80) return norm2_qr(m);

    std::vector<double> x(n), y(m.rows), z(n);
    for (std::size_t i = 0; i < n; ++i) x[i] = 1.0 + 1e-3 * static_cast<double>(i % 97);
    double xn = 0.0;
    for (double v : x) xn += v * v;
    xn = std::sqrt(xn);
    for (double& v : x) v /= xn;

    double lambda = 0.0;
    int stable = 0;
    for (int it = 0; it < 20000; ++it) {
        // y = A x, z = A^T y
        for (std::size_t i = 0; i < n; ++i) {
            double s = 0.0;
            for (std::size_t j = 0; j < n; ++j) s += m(i, j) * x[j];
            y[i] = s;
        }
        double est = 0.0;
        for (double v : y) est += v * v;
        for (std::size_t j = 0; j < n; ++j) {
            double s = 0.0;
            for (std::size_t i = 0; i < n; ++i) s += m(i, j) * y[i];
            z[j] = s;
        }
        double zn = 0.0;
        for (double v : z) zn += v * v;
        zn = std::sqrt(zn);
        if (zn == 0.0) return 0.0;
        for (std::size_t j = 0; j < n; ++j) x[j] = z[j] / zn;

        if (std::abs(est - lambda) <= 1e-13 * std::max(est, 1e-300)) {
            if (++stable >= 3) return std::sqrt(est);
        } else {
            stable = 0;
        }
        lambda = est;
    }
    if (n <= 2000) return norm2_qr(m);
    throw NoConvergence("norm iteration stalled on a lifted product of dimension " +
                        std::to_string(n));
}

bool is_zero(const Matrix& m) {
    for (double v : m.a)
        if (v != 0.0) return false;
    return true;
}

// One frontier word. Factored mode composes the transition-structure map
// and the small dynamics product; Explicit mode carries the full lifted
// product in `phi`.
struct Candidate {
    StateMap map;
    Matrix phi;
    double b = kInf;  // best norm-chain bound over all split points
    int len = 0;
};

}  // namespace

std::string to_string(Representation r) {
    return r == Representation::Factored ? "factored" : "explicit";
}

std::string to_string(Verdict v) {
    switch (v) {
        case Verdict::CertifiedStable:
            return "CertifiedStable";
        case Verdict::LowerBoundAtLeastOne:
            return "LowerBoundAtLeastOne";
        default:
            return "Inconclusive";
    }
}

void validate(const ClosedLoopPair& pair) {
    const std::size_t n = pair.phi_hit.rows;
    if (n == 0 || pair.phi_hit.cols != n)
        throw InvalidArgument("closed-loop pair '" + pair.name + "': phi_hit must be square");
    if (pair.phi_miss.rows != n || pair.phi_miss.cols != n)
        throw InvalidArgument("closed-loop pair '" + pair.name +
                              "': phi_miss must match phi_hit's dimension");
    if (n > 64)
        throw InvalidArgument("closed-loop pair '" + pair.name + "': dimension " +
                              std::to_string(n) + " exceeds the cap of 64");
}

LiftedSystem lift(const ClosedLoopPair& pair, const Automaton& a,
                  Representation representation) {
    validate(pair);
    Adjacency adj = adjacency(a);

    LiftedSystem sys;
    sys.pi_miss = std::move(adj.pi0);
    sys.pi_hit = std::move(adj.pi1);
    sys.phi_miss = pair.phi_miss;
    sys.phi_hit = pair.phi_hit;
    sys.representation = representation;
    sys.states = a.size();
    sys.nx = pair.dim();

    if (representation == Representation::Explicit) {
        if (sys.lifted_dim() > 20000)
            throw SizeBudgetExceeded("explicit lift of dimension " +
                                     std::to_string(sys.lifted_dim()) +
                                     " exceeds the cap of 20000");
        sys.explicit_miss = kronecker(sys.pi_miss, sys.phi_miss);
        sys.explicit_hit = kronecker(sys.pi_hit, sys.phi_hit);
    }
    return sys;
}

BigInt lift_entry_cost(const LiftedSystem& sys) {
    const BigInt nx2 = BigInt(sys.nx) * BigInt(sys.nx);
    if (sys.representation == Representation::Explicit) {
        BigInt d(sys.lifted_dim());
        return 2 * d * d;
    }
    return BigInt(sys.pi_miss.nnz()) + BigInt(sys.pi_hit.nnz()) + 2 * nx2;
}

BigInt product_entry_cost(const LiftedSystem& sys, std::size_t pi_nnz) {
    if (sys.representation == Representation::Explicit) {
        BigInt d(sys.lifted_dim());
        return d * d;
    }
    return BigInt(pi_nnz) + BigInt(sys.nx) * BigInt(sys.nx);
}

JsrResult gripenberg(const LiftedSystem& sys, const GripenbergOptions& options) {
    if (!(options.delta > 0.0)) throw InvalidArgument("gripenberg wants delta > 0");
    if (options.max_iterations < 0)
        throw InvalidArgument("gripenberg wants a non-negative iteration cap");
    const bool factored = sys.representation == Representation::Factored;
    const auto start_time = std::chrono::steady_clock::now();
    auto seconds = [&start_time] {
        return std::chrono::duration<double>(std::chrono::steady_clock::now() - start_time)
            .count();
    };

    // Per-symbol generator data (index 0 = miss, 1 = hit).
    StateMap gen_map[2];
    const Matrix* gen_phi[2] = {&sys.phi_miss, &sys.phi_hit};
    const Matrix* gen_explicit[2] = {&sys.explicit_miss, &sys.explicit_hit};
    double step_norm[2];
    if (factored) {
        gen_map[0] = row_map(sys.pi_miss);
        gen_map[1] = row_map(sys.pi_hit);
        step_norm[0] = map_norm2(gen_map[0]) * norm2_qr(sys.phi_miss);
        step_norm[1] = map_norm2(gen_map[1]) * norm2_qr(sys.phi_hit);
    } else {
        step_norm[0] = norm2_explicit(sys.explicit_miss);
        step_norm[1] = norm2_explicit(sys.explicit_hit);
    }

    JsrResult result;
    result.delta = options.delta;
    result.representation = sys.representation;
    result.lower = std::max(0.0, options.initial_lower);
    result.upper = kInf;
    result.stored_entries = lift_entry_cost(sys);
    result.history.push_back(
        {0, result.lower, result.upper, result.stored_entries, 1, seconds()});

    auto finish = [&](Verdict v) {
        result.verdict = v;
        return result;
    };
    auto verdict_from_bounds = [&] {
        if (result.upper < 1.0) return Verdict::CertifiedStable;
        if (result.lower >= 1.0) return Verdict::LowerBoundAtLeastOne;
        return Verdict::Inconclusive;
    };

    // A seed already past 1 settles the question before any product is
    // formed (strictly past: an exact 1 still deserves refinement).
    if (result.lower > 1.0) return finish(Verdict::LowerBoundAtLeastOne);

    // Frontier starts as the empty word: identity structure, identity
    // dynamics, no norm chain yet.
    std::vector<Candidate> frontier(1);
    if (factored) {
        frontier[0].map.resize(sys.states);
        for (std::size_t i = 0; i < sys.states; ++i)
            frontier[0].map[i] = static_cast<std::int32_t>(i);
        frontier[0].phi = Matrix::identity(sys.nx);
    } else {
        frontier[0].phi = Matrix::identity(sys.lifted_dim());
    }

    struct Scored {
        Candidate cand;
        double root_b = 0.0;  // b^(1/len)
        bool dead = false;    // transition-structure product is zero
        std::size_t pi_nnz = 0;
    };

    while (result.iterations < options.max_iterations && !frontier.empty()) {
        const int iter = ++result.iterations;

        // Score every child of the frontier first (the lower bound moves
        // during scoring and the retention test below uses its final
        // value). Children are generated miss-first in frontier order, so
        // the fold is deterministic.
        std::vector<Scored> scored;
        scored.reserve(frontier.size() * 2);
        for (const Candidate& parent : frontier) {
            for (int sym = 0; sym < 2; ++sym) {
                Scored s;
                s.cand.len = parent.len + 1;
                double rho = 0.0, norm = 0.0;
                if (factored) {
                    s.cand.map = compose(parent.map, gen_map[sym]);
                    s.pi_nnz = map_nnz(s.cand.map);
                    s.dead = s.pi_nnz == 0;
                    if (!s.dead) {
                        s.cand.phi = multiply(parent.phi, *gen_phi[sym]);
                        rho = map_has_cycle(s.cand.map)
                                  ? spectral_radius(s.cand.phi)
                                  : 0.0;
                        norm = map_norm2(s.cand.map) * norm2_qr(s.cand.phi);
                    }
                } else {
                    s.cand.phi = multiply(parent.phi, *gen_explicit[sym]);
                    s.dead = is_zero(s.cand.phi);
                    if (!s.dead) {
                        rho = spectral_radius(s.cand.phi);
                        norm = norm2_explicit(s.cand.phi);
                    }
                }
                if (!s.dead) {
                    double chain =
                        std::isinf(parent.b) ? norm : parent.b * step_norm[sym];
                    s.cand.b = std::min(chain, norm);
                    s.root_b = std::pow(s.cand.b, 1.0 / s.cand.len);
                    result.lower = std::max(
                        result.lower, std::pow(rho, 1.0 / s.cand.len));
                }
                scored.push_back(std::move(s));
            }
        }

        // Retention: keep words that could still push the bound above
        // lower + delta; everything else is covered by that slack.
        std::vector<Candidate> next;
        double stage_upper = result.lower + options.delta;
        for (Scored& s : scored) {
            if (s.dead || s.root_b <= result.lower + options.delta) continue;
            stage_upper = std::max(stage_upper, s.root_b);
            result.stored_entries += product_entry_cost(sys, s.pi_nnz);
            next.push_back(std::move(s.cand));
        }
        frontier = std::move(next);
        result.upper = std::min(result.upper, stage_upper);
        result.history.push_back({iter, result.lower, result.upper,
                                  result.stored_entries, frontier.size(),
                                  seconds()});

        if (result.upper < 1.0) return finish(Verdict::CertifiedStable);
        if (result.lower > 1.0) return finish(Verdict::LowerBoundAtLeastOne);
        if (result.stored_entries > options.entry_budget)
            return finish(Verdict::Inconclusive);
    }

    // Exhausted frontier: every remaining word was within delta of the
    // lower bound, so the interval closes to that slack. An iteration cap
    // leaves the last upper bound standing.
    if (frontier.empty()) result.upper = std::min(result.upper, result.lower + options.delta);
    return finish(verdict_from_bounds());
}

JsrResult verify_stability(const ClosedLoopPair& pair, const Automaton& a,
                           const VerifyOptions& options) {
    validate(pair);
    LiftedSystem sys = lift(pair, a, options.representation);
    GripenbergOptions g;
    g.delta = options.delta;
    g.max_iterations = options.max_iterations;
    g.entry_budget = options.entry_budget;
    // The all-hits trace is always admissible, so the hit-mode spectral
    // radius is a sound starting lower bound.
    g.initial_lower = spectral_radius(pair.phi_hit);
    return gripenberg(sys, g);
}

JsrResult verify_stability(const ClosedLoopPair& pair, const WeaklyHardConstraint& c,
                           const VerifyOptions& options) {
    Automaton a = build_isomorphic(c.miss_budget(), c.k, options.state_budget);
    return verify_stability(pair, a, options);
}

}  // namespace whtrim
