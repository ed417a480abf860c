#ifndef WHTRIM_LANGUAGE_HPP
#define WHTRIM_LANGUAGE_HPP

#include <cstdint>
#include <optional>
#include <string>

#include "whtrim/automata.hpp"
#include "whtrim/bigint.hpp"
#include "whtrim/errors.hpp"

namespace whtrim {

// Asymptotic model of the accepted-word counts: for large lengths the number
// of words of length l approaches a * lambda^l.
struct GrowthEstimate {
    double a = 0.0;       // prefactor
    double lambda = 0.0;  // growth rate, in (1, 2] for these acceptors
    std::string source;   // constraint identifier, e.g. "anymiss:2:5"
};

// Outcome of a simulation check between two tuple-labeled acceptors. When
// the relation fails, `witness` pins the first broken obligation.
struct SimulationWitness {
    std::size_t simulated_state = 0;   // node in the finer acceptor
    std::size_t simulating_state = 0;  // node in the coarser acceptor
    // Symbol whose move cannot be matched, or -1 when the pair itself fails
    // the componentwise ordering.
    int symbol = -1;

    bool operator==(const SimulationWitness& o) const = default;
};

struct SimulationReport {
    bool holds = false;
    std::optional<SimulationWitness> witness;
    // Number of state pairs confirmed in the synchronized closure.
    std::size_t relation_size = 0;
};

// Short identity string for an acceptor, matching the CLI constraint
// syntax: "anymiss:m:k" for the exact acceptors, "trim:m:k:c" when
// compressed.
std::string automaton_id(const Automaton& a);

// Exact number of accepted words of the given length. Integer vector
// pushed through the transition relation; never floating point, so counts
// beyond 64 bits stay exact.
BigInt count_words(const Automaton& a, int length);

// Growth-rate estimate from the dominant eigenpair of the combined
// transition matrix: lambda is the dominant eigenvalue, and the prefactor
// puts together the initial-state weight, the left eigenvector mass and
// the eigenvector overlap (invariant under rescaling of either vector).
// Propagates NoConvergence from the eigenpair iteration.
GrowthEstimate growth(const Automaton& a);

// Checks that the coarser acceptor `t` simulates the finer one `h` via the
// componentwise ordering on tuple labels: along every synchronized run, the
// pair stays ordered and every move of `h` is matched by `t`. Both inputs
// must be tuple-labeled with equal window parameters (ParameterMismatch
// otherwise).
SimulationReport check_simulation(const Automaton& h, const Automaton& t);

// True iff every word of length <= max_len accepted by `a` is accepted by
// `t`. Walks the synchronized product breadth-first instead of enumerating
// words, so the cost is bounded by (states_a * states_t * max_len).
// max_len > 20 throws LimitExceeded.
bool check_inclusion_bounded(const Automaton& a, const Automaton& t, int max_len);

}  // namespace whtrim

#endif
