#include "whtrim/constraints.hpp"

#include <algorithm>

namespace whtrim {

Word word_from_string(const std::string& s) {
    Word w;
    w.bits.reserve(s.size());
    for (char ch : s) {
        if (ch == '0')
            w.bits.push_back(0);
        else if (ch == '1')
            w.bits.push_back(1);
        else
            throw InvalidArgument("word string must contain only 0/1, got: " + s);
    }
    return w;
}

std::string to_string(const Word& w) {
    std::string s;
    s.reserve(w.size());
    for (auto b : w.bits) s.push_back(b ? '1' : '0');
    return s;
}

WeaklyHardConstraint::WeaklyHardConstraint(ConstraintKind kind_, int bound_, int k_)
    : kind(kind_), bound(bound_), k(k_) {
    if (k < 2) throw InvalidArgument("window length k must be at least 2");
    int m = miss_budget();
    if (m < 1 || m >= k)
        throw InvalidArgument("miss budget must satisfy 1 <= m < k (m=" +
                              std::to_string(m) + ", k=" + std::to_string(k) + ")");
}

WeaklyHardConstraint any_miss(int m, int k) {
    return WeaklyHardConstraint(ConstraintKind::AnyMiss, m, k);
}

WeaklyHardConstraint any_hit(int h, int k) {
    return WeaklyHardConstraint(ConstraintKind::AnyHit, h, k);
}

WeaklyHardConstraint dual(const WeaklyHardConstraint& c) {
    if (c.kind == ConstraintKind::AnyMiss) return any_hit(c.k - c.bound, c.k);
    return any_miss(c.k - c.bound, c.k);
}

bool satisfies(const Word& w, const WeaklyHardConstraint& c) {
    const int m = c.miss_budget();
    const std::size_t n = w.size();
    const std::size_t k = static_cast<std::size_t>(c.k);
    // Sliding count of zeros over windows [i, min(i+k, n)).
    std::size_t zeros = 0;
    std::size_t right = 0;
    for (std::size_t i = 0; i < n; ++i) {
        while (right < n && right < i + k) {
            zeros += (w.bits[right] == 0);
            ++right;
        }
        if (zeros > static_cast<std::size_t>(m)) return false;
        zeros -= (w.bits[i] == 0);
    }
    return true;
}

std::vector<std::vector<Word>> enumerate_language(const WeaklyHardConstraint& c,
                                                  int max_len) {
    if (max_len < 0) throw InvalidArgument("max_len must be non-negative");
    if (max_len > 24)
        throw LimitExceeded("enumerate_language supports max_len <= 24, got " +
                            std::to_string(max_len));
    std::vector<std::vector<Word>> out(static_cast<std::size_t>(max_len) + 1);
    out[0].push_back(Word{});
    for (int len = 1; len <= max_len; ++len) {
        auto& bucket = out[static_cast<std::size_t>(len)];
        Word w;
        w.bits.assign(static_cast<std::size_t>(len), 0);
        const std::uint64_t total = 1ull << len;
        for (std::uint64_t code = 0; code < total; ++code) {
            for (int i = 0; i < len; ++i)
                w.bits[static_cast<std::size_t>(i)] =
                    static_cast<std::uint8_t>((code >> (len - 1 - i)) & 1u);
            if (satisfies(w, c)) bucket.push_back(w);
        }
    }
    return out;
}

}  // namespace whtrim
