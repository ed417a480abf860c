#include "whtrim/pair_io.hpp"

#include <fstream>
#include <sstream>

#include <json.hpp>

#include "whtrim/linalg.hpp"

namespace whtrim {

namespace {

using nlohmann::json;

Matrix parse_matrix(const json& j, const std::string& field, std::size_t dim,
                    const std::string& origin) {
    auto fail = [&](const std::string& what) {
        throw InvalidArgument(origin + ": " + field + " " + what);
    };
    if (!j.is_array() || j.size() != dim)
        fail("must be an array of " + std::to_string(dim) + " rows");
    Matrix m(dim, dim);
    for (std::size_t r = 0; r < dim; ++r) {
        const json& row = j[r];
        if (!row.is_array() || row.size() != dim)
            fail("row " + std::to_string(r) + " has " +
                 std::to_string(row.is_array() ? row.size() : 0) + " entries, want " +
                 std::to_string(dim));
        for (std::size_t c = 0; c < dim; ++c) {
            if (!row[c].is_number())
                fail("row " + std::to_string(r) + " entry " + std::to_string(c) +
                     " is not a number");
            m(r, c) = row[c].get<double>();
        }
    }
    return m;
}

// splitmix64: tiny, well-distributed, and fully reproducible across
// platforms — exactly what a deterministic generator needs.
std::uint64_t next_u64(std::uint64_t& state) {
    state += 0x9E3779B97F4A7C15ull;
    std::uint64_t z = state;
    z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ull;
    z = (z ^ (z >> 27)) * 0x94D049BB133111EBull;
    return z ^ (z >> 31);
}

double signed_unit(std::uint64_t& state) {
    // [0,1) with full 53-bit resolution, then stretched to [-1,1).
    double u = static_cast<double>(next_u64(state) >> 11) * 0x1.0p-53;
    return 2.0 * u - 1.0;
}

}  // namespace

ClosedLoopPair parse_pair(const std::string& text, const std::string& origin) {
    json j;
    try {
        j = json::parse(text);
    } catch (const json::parse_error& e) {
        throw InvalidArgument(origin + ": " + e.what());
    }
    if (!j.is_object()) throw InvalidArgument(origin + ": top level must be an object");

    for (const char* field : {"name", "dim", "phi_hit", "phi_miss"})
        if (!j.contains(field))
            throw InvalidArgument(origin + ": missing field '" + std::string(field) + "'");

    if (!j["name"].is_string()) throw InvalidArgument(origin + ": name must be a string");
    if (!j["dim"].is_number_integer())
        throw InvalidArgument(origin + ": dim must be an integer");
    const std::int64_t dim = j["dim"].get<std::int64_t>();
    if (dim < 1 || dim > 64)
        throw InvalidArgument(origin + ": dim " + std::to_string(dim) +
                              " out of range [1, 64]");

    ClosedLoopPair pair;
    pair.name = j["name"].get<std::string>();
    pair.phi_hit = parse_matrix(j["phi_hit"], "phi_hit", static_cast<std::size_t>(dim), origin);
    pair.phi_miss =
        parse_matrix(j["phi_miss"], "phi_miss", static_cast<std::size_t>(dim), origin);
    validate(pair);
    return pair;
}

ClosedLoopPair load_pair(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw InvalidArgument("cannot read pair file '" + path + "'");
    std::ostringstream buf;
    buf << in.rdbuf();
    return parse_pair(buf.str(), path);
}

std::string pair_to_json(const ClosedLoopPair& pair) {
    const std::size_t n = pair.dim();
    auto rows = [n](const Matrix& m) {
        json out = json::array();
        for (std::size_t r = 0; r < n; ++r) {
            json row = json::array();
            for (std::size_t c = 0; c < n; ++c) row.push_back(m(r, c));
            out.push_back(row);
        }
        return out;
    };
    // nlohmann::json keeps object keys sorted, so the rendering is stable.
    json j;
    j["name"] = pair.name;
    j["dim"] = n;
    j["phi_hit"] = rows(pair.phi_hit);
    j["phi_miss"] = rows(pair.phi_miss);
    return j.dump(2) + "\n";
}

void save_pair(const ClosedLoopPair& pair, const std::string& path) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw InvalidArgument("cannot write pair file '" + path + "'");
    out << pair_to_json(pair);
    if (!out) throw InvalidArgument("failed writing pair file '" + path + "'");
}

ClosedLoopPair generate_pair(std::uint64_t seed, std::size_t dim, double target_sr,
                             MissStrategy strategy) {
    if (dim < 1 || dim > 10)
        throw InvalidArgument("generate_pair wants 1 <= dim <= 10, got " +
                              std::to_string(dim));
    if (!(target_sr > 0.0) || !(target_sr < 1.1))
        throw InvalidArgument("generate_pair wants 0 < target_sr < 1.1");

    ClosedLoopPair pair;
    pair.name = "synthetic-s" + std::to_string(seed) + "-d" + std::to_string(dim) +
                (strategy == MissStrategy::Hold ? "-hold" : "-zero");

    if (dim == 1) {
        pair.phi_hit = Matrix(1, 1);
        pair.phi_hit(0, 0) = target_sr;
        pair.phi_miss = Matrix(1, 1);
        pair.phi_miss(0, 0) = strategy == MissStrategy::Hold ? 1.0 : 0.0;
        return pair;
    }

    // Layout: coordinates 0..dim-2 are the plant state, the last one holds
    // the control input. Hit: the plant advances and the controller writes
    // a fresh input from the plant state. Miss: the plant advances on the
    // stale input, which is then held or zeroed.
    const std::size_t p = dim - 1;
    std::uint64_t state = seed;
    Matrix closed(dim, dim);
    for (std::size_t r = 0; r < p; ++r)  // plant block [A | B]
        for (std::size_t c = 0; c < dim; ++c) closed(r, c) = signed_unit(state);
    for (std::size_t c = 0; c < p; ++c)  // feedback row [K | 0]
        closed(p, c) = signed_unit(state);

    double raw = spectral_radius(closed);
    if (raw < 1e-9)
        throw InvalidArgument("generate_pair drew a degenerate closed loop; pick another seed");
    const double alpha = target_sr / raw;

    pair.phi_hit = scale(closed, alpha);
    pair.phi_miss = Matrix(dim, dim);
    for (std::size_t r = 0; r < p; ++r)
        for (std::size_t c = 0; c < dim; ++c)
            pair.phi_miss(r, c) = alpha * closed(r, c);
    pair.phi_miss(p, p) = strategy == MissStrategy::Hold ? 1.0 : 0.0;
    return pair;
}

}  // namespace whtrim
