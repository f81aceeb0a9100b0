#pragma once

#include <cstdint>
#include <span>
#include <utility>
#include <vector>
#include <dpaas/common/bytes.hpp>
#include <dpaas/common/codec.hpp>
#include <dpaas/common/random.hpp>

namespace dpaas::keyvault {
    // One piece of a t-of-n byte-wise Shamir split. y holds one field element per secret byte.
    struct shard {
        digest secret_id {};
        uint8_t x = 0;
        bytes y;
        uint8_t threshold = 0;
        uint8_t total = 0;

        bool operator==(const shard &) const = default;

        [[nodiscard]] json to_json() const;
        static shard from_json(const json &j);
    };

    // Shard j (1-based) carries the evaluations at x = j. secret_id is a fresh random
    // commitment so it identifies the split without leaking the secret.
    std::vector<shard> shard_distribute(byte_view secret, unsigned total, unsigned threshold,
        random_source &rng = default_random());

    // Reconstructs from the first `threshold` shards and checks every extra one against
    // the interpolant.
    bytes shard_combine(std::span<const shard> shards);

    // Lagrange interpolation of one byte position, evaluated at `at`.
    uint8_t interpolate(std::span<const std::pair<uint8_t, uint8_t>> points, uint8_t at = 0);
}
