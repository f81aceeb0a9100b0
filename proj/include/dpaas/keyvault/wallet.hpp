#pragma once

#include <cstdint>
#include <string>
#include <string_view>
#include <dpaas/common/random.hpp>
#include <dpaas/keyvault/keys.hpp>

namespace dpaas::keyvault {
    // Passphrase stretching parameters, carried inside each record.
    struct kdf_params {
        std::string algorithm { "argon2id13" };
        uint64_t opslimit = 2;
        uint64_t memlimit = 64ULL << 20;

        static kdf_params interactive() { return {}; }
        // Smallest parameters libsodium accepts; for tests and throwaway wallets.
        static kdf_params minimal();
    };

    // Hot-wallet envelope. Serialized as a versioned JSON text document with base64 fields.
    struct keystore_record {
        uint32_t version = 1;
        kdf_params kdf;
        bytes salt;
        bytes nonce;
        bytes ciphertext;
        bytes mac;
        key_id id {};

        [[nodiscard]] std::string to_text() const;
        static keystore_record from_text(std::string_view text);
    };

    keystore_record store_hot(const key_pair &key, std::string_view passphrase,
        const kdf_params &params = kdf_params::interactive(), random_source &rng = default_random());
    key_pair load_hot(const keystore_record &record, std::string_view passphrase);

    // Printable cold-storage form: "<hex-seed>-<hex-checksum>", checksum = first 4 bytes of digest(seed).
    struct cold_export {
        std::string payload;
        std::string checksum;

        [[nodiscard]] std::string to_string() const { return payload + "-" + checksum; }
        // Case-insensitive; the result is normalized to lowercase.
        static cold_export parse(std::string_view line);
    };

    cold_export export_cold(const key_pair &key);
    key_pair import_cold(const cold_export &exp);
}
