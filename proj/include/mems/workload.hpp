#pragma once

/// @file workload.hpp
/// @brief Seeded synthetic relations, object grids and query regions.
///
/// Every generator is a pure function of its arguments and seed; results do
/// not depend on the standard library's distribution implementations.

#include "mems/relational.hpp"
#include "mems/spatial.hpp"

#include <random>
#include <string_view>

namespace mems {

/// Uniform integer in [0, n), n > 0, by rejection on 64-bit draws.
uint64_t uniform_below(std::mt19937_64& rng, uint64_t n);

/// One step of the splitmix64 finalizer, used as a stateless hash.
uint64_t mix64(uint64_t x);

constexpr uint64_t kMiB = 1024 * 1024;

/// Tuples of a relation of `bytes` bytes with k attributes of attr_bytes.
uint32_t tuples_for_size(uint64_t bytes, uint32_t k, uint32_t attr_bytes);

enum class Qualifying { uniform, clustered };
std::string_view to_string(Qualifying q);
Qualifying parse_qualifying(std::string_view s);

/// ceil(selectivity * n), robust to the representation error of selectivity.
uint32_t qualifying_count(double selectivity, uint32_t n);

/// Exactly qualifying_count(selectivity, n) distinct tuple ids, ascending.
/// `uniform` draws them at random; `clustered` takes the first ones.
std::vector<uint32_t> gen_qualifying(uint32_t n, double selectivity, Qualifying mode,
                                     uint64_t seed);

struct Relation {
    RelationSchema schema;
    uint64_t seed = 0;
    uint32_t predicate_attr = 1;
    uint64_t bound = uint64_t(1) << 63;
    std::vector<uint32_t> qualifying;  ///< ascending; attr_pred > bound exactly for these
    std::vector<bool> is_qualifying;   ///< indexed by v - 1

    /// Numeric value of a_{v,w}: first 8 bytes of its stored form.
    uint64_t value(uint32_t v, uint32_t w) const;
    /// Stored bytes of a_{v,w}, attr_bits / 8 long, little-endian value first.
    std::vector<std::byte> bytes(uint32_t v, uint32_t w) const;
};

/// Fails when the relation does not fit the device under the parallel
/// layout (the tightest of the layouts).
Relation gen_relation(uint32_t n, uint32_t k, uint32_t attr_bytes, uint64_t seed,
                      double selectivity, Qualifying mode = Qualifying::uniform,
                      const DeviceParams& p = DeviceParams{});

struct SpatialData {
    SpatialSpace space;
    uint64_t seed = 0;
    std::vector<std::byte> object(uint32_t x, uint32_t y) const;
};

/// count objects on a square grid; count must be a perfect square.
SpatialData gen_spatial(uint64_t count, uint32_t obj_bytes, uint64_t seed,
                        const DeviceParams& p = DeviceParams{});

/// qx = round(sqrt(fraction * W * H * aspect)), qy = round(fraction * W * H / qx);
/// the origin is uniform over placements inside the space.
QueryRegion gen_query_region(const SpatialSpace& s, double size_fraction, double aspect,
                             std::mt19937_64& rng);
QueryRegion query_shape(const SpatialSpace& s, double size_fraction, double aspect);

}  // namespace mems
