#pragma once

#include <array>
#include <string>
#include <string_view>
#include <dpaas/common/bytes.hpp>

namespace dpaas {
    // Platform-wide primitives: SHA-256 for every digest, Ed25519 for every signature.
    inline constexpr std::string_view hash_algorithm_id = "sha256";
    inline constexpr std::string_view signature_algorithm_id = "Ed25519";

    using verifying_key = std::array<uint8_t, 32>;
    using seed_bytes = secret_array<32>;
    // Expanded Ed25519 signing key (seed || verifying key).
    using signing_key_bytes = secret_array<64>;

    void ensure_crypto_init();

    digest sha256(byte_view data);
    inline digest sha256(std::string_view data) { return sha256(as_bytes(data)); }

    // Signature envelope: the algorithm id travels with the signature bytes.
    struct signature {
        std::string algorithm { signature_algorithm_id };
        std::array<uint8_t, 64> value {};

        bool operator==(const signature &) const = default;

        // "<algorithm>:<base64url>"
        [[nodiscard]] std::string to_string() const;
        static signature from_string(std::string_view text);
    };

    verifying_key derive_verifying_key(const seed_bytes &seed);
    signature sign_message(const seed_bytes &seed, byte_view message);
    signing_key_bytes expand_signing_key(const seed_bytes &seed);
    signature sign_message(const signing_key_bytes &sk, byte_view message);
    [[nodiscard]] bool verify_signature(const verifying_key &vk, byte_view message, const signature &sig) noexcept;
}
