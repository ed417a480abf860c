#ifndef WHTRIM_BIGINT_HPP
#define WHTRIM_BIGINT_HPP

#include <boost/multiprecision/cpp_int.hpp>

namespace whtrim {

// Exact integer arithmetic for state counts and word counts, which overflow
// 64 bits for long words (counts grow like lambda^len).
using BigInt = boost::multiprecision::cpp_int;

// n choose r, exact.
inline BigInt binomial(unsigned n, unsigned r) {
    if (r > n) return 0;
    if (r > n - r) r = n - r;
    BigInt acc = 1;
    for (unsigned i = 1; i <= r; ++i) {
        acc *= n - r + i;
        acc /= i;
    }
    return acc;
}

}  // namespace whtrim

#endif
