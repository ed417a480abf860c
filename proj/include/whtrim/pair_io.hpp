#ifndef WHTRIM_PAIR_IO_HPP
#define WHTRIM_PAIR_IO_HPP

#include <cstdint>
#include <string>

#include "whtrim/jsr.hpp"

namespace whtrim {

// Closed-loop pair file format (JSON):
//   {"name": str, "dim": int, "phi_hit": [[...]], "phi_miss": [[...]]}
// with both matrices given row-major as dim arrays of dim numbers.

// Parses the JSON text of a pair; `origin` names the source in error
// messages. Malformed input throws InvalidArgument with a field-level
// diagnostic.
ClosedLoopPair parse_pair(const std::string& text, const std::string& origin = "<memory>");

// Reads a pair file (InvalidArgument when the file cannot be read).
ClosedLoopPair load_pair(const std::string& path);

// Serialization of the same format; output is deterministic (fixed key
// order, shortest round-trip number rendering, trailing newline).
std::string pair_to_json(const ClosedLoopPair& pair);
void save_pair(const ClosedLoopPair& pair, const std::string& path);

// What phi_miss does to the held-input coordinate on a deadline miss:
// Hold keeps the previous control signal, Zero drops it.
enum class MissStrategy { Hold, Zero };

// Deterministic synthetic benchmark pair: a random discrete-time plant
// with one held-input coordinate, closed with a random static feedback
// row, scaled so that sr(phi_hit) equals target_sr exactly (up to
// rounding). phi_miss advances the same plant with the input either held
// or zeroed. Same arguments => identical pair, bit for bit.
// Requires 1 <= dim <= 10 and 0 < target_sr < 1.1.
ClosedLoopPair generate_pair(std::uint64_t seed, std::size_t dim, double target_sr,
                             MissStrategy strategy);

}  // namespace whtrim

#endif
