#ifndef WHTRIM_CONSTRAINTS_HPP
#define WHTRIM_CONSTRAINTS_HPP

#include <cstdint>
#include <string>
#include <vector>

#include "whtrim/errors.hpp"

namespace whtrim {

// A binary execution trace. bits[0] is the oldest symbol, bits.back() the
// most recent one; 1 = deadline hit, 0 = deadline miss.
struct Word {
    std::vector<std::uint8_t> bits;

    Word() = default;
    explicit Word(std::vector<std::uint8_t> b) : bits(std::move(b)) {}

    std::size_t size() const { return bits.size(); }

    bool operator==(const Word& o) const { return bits == o.bits; }
    bool operator<(const Word& o) const { return bits < o.bits; }
};

// Parses a string like "0110100" (oldest symbol first) into a Word.
Word word_from_string(const std::string& s);
std::string to_string(const Word& w);

enum class ConstraintKind { AnyMiss, AnyHit };

// A window constraint over traces: AnyMiss(m, k) allows at most m misses in
// any k consecutive activations; AnyHit(h, k) demands at least h hits in any
// k consecutive activations. The two families are interchangeable:
// AnyHit(h, k) describes exactly the traces of AnyMiss(k - h, k).
struct WeaklyHardConstraint {
    ConstraintKind kind = ConstraintKind::AnyMiss;
    int bound = 0;  // m for AnyMiss, h for AnyHit
    int k = 0;      // window length

    WeaklyHardConstraint() = default;
    // Validates 1 <= bound < k (AnyMiss) resp. 1 <= k - bound < k (AnyHit).
    WeaklyHardConstraint(ConstraintKind kind, int bound, int k);

    // Misses tolerated per window, regardless of kind.
    int miss_budget() const {
        return kind == ConstraintKind::AnyMiss ? bound : k - bound;
    }

    // Semantic equality: equal miss budget and window length.
    bool operator==(const WeaklyHardConstraint& o) const {
        return k == o.k && miss_budget() == o.miss_budget();
    }
};

WeaklyHardConstraint any_miss(int m, int k);
WeaklyHardConstraint any_hit(int h, int k);

// The same constraint expressed in the other family.
WeaklyHardConstraint dual(const WeaklyHardConstraint& c);

// True iff `w` can be extended to an infinite trace respecting `c`; i.e.
// every window of at most k consecutive symbols of `w` contains at most
// miss_budget() zeros. Trailing windows are truncated at the word's end
// (future activations are not held against the word), so the language is
// prefix-closed: every prefix of a satisfying word satisfies as well.
bool satisfies(const Word& w, const WeaklyHardConstraint& c);

// All satisfying words grouped by length: result[len] holds every word of
// that length, in lexicographic order, for len = 0..max_len. Brute force
// over all 2^len candidates by design (this is the reference oracle).
// max_len > 24 throws LimitExceeded.
std::vector<std::vector<Word>> enumerate_language(const WeaklyHardConstraint& c,
                                                  int max_len);

}  // namespace whtrim

#endif
