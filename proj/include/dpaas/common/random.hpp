#pragma once

#include <cstdint>
#include <random>
#include <span>

namespace dpaas {
    // Injectable randomness so shard splits and salts can be reproduced in tests.
    class random_source {
    public:
        virtual ~random_source() = default;
        virtual void fill(std::span<uint8_t> out) = 0;
    };

    class system_random final : public random_source {
    public:
        void fill(std::span<uint8_t> out) override;
    };

    // Deterministic generator for tests and benchmark workloads. Not for key material in production.
    class seeded_random final : public random_source {
    public:
        explicit seeded_random(uint64_t seed): _engine { seed } {}
        void fill(std::span<uint8_t> out) override;
    private:
        std::mt19937_64 _engine;
    };

    random_source &default_random();
}
