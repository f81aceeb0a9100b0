#pragma once

#include <cstdint>
#include <string_view>
#include <dpaas/common/crypto.hpp>
#include <dpaas/common/random.hpp>

namespace dpaas::keyvault {
    enum class key_state { created, stored_hot, stored_cold, deleted };

    std::string_view to_string(key_state s) noexcept;

    using key_id = digest;

    // Ed25519 signing identity. Everything public is a pure function of the seed.
    class key_pair {
    public:
        static key_pair from_seed(const seed_bytes &seed);
        static key_pair from_entropy(byte_view entropy);

        [[nodiscard]] const seed_bytes &seed() const noexcept { return _seed; }
        [[nodiscard]] const verifying_key &public_key() const noexcept { return _vk; }
        [[nodiscard]] const key_id &id() const noexcept { return _id; }
        [[nodiscard]] key_state state() const noexcept { return _state; }
        void set_state(key_state s) noexcept { _state = s; }

        [[nodiscard]] signature sign(byte_view message) const;
        [[nodiscard]] signature sign(std::string_view message) const { return sign(as_bytes(message)); }
    private:
        key_pair() = default;

        seed_bytes _seed;
        signing_key_bytes _sk;
        verifying_key _vk {};
        key_id _id {};
        key_state _state = key_state::created;
    };

    key_pair generate_keypair(random_source &rng);

    key_id key_id_of(const verifying_key &vk);

    // digest(master_seed || "sub" || index as 8-byte big-endian)
    seed_bytes derive_sub_seed(const seed_bytes &master_seed, uint64_t index);

    class master_key {
    public:
        explicit master_key(const seed_bytes &seed, uint64_t next_index = 0): _key { key_pair::from_seed(seed) }, _next_index { next_index } {}

        [[nodiscard]] const key_pair &key() const noexcept { return _key; }
        [[nodiscard]] uint64_t next_index() const noexcept { return _next_index; }

        [[nodiscard]] key_pair derive(uint64_t index) const;
        // Derives at the next unused index and advances the counter.
        key_pair derive_next();
    private:
        key_pair _key;
        uint64_t _next_index;
    };
}
