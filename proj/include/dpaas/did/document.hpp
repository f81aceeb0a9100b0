#pragma once

#include <cstdint>
#include <map>
#include <optional>
#include <string>
#include <vector>
#include <dpaas/common/codec.hpp>
#include <dpaas/did/did.hpp>

namespace dpaas::did {
    struct public_key_entry {
        std::string id;
        verifying_key key {};
        std::string purpose;

        bool operator==(const public_key_entry &) const = default;
    };

    struct authentication_entry {
        std::string type;
        std::string public_key;   // id of an entry in public_keys

        bool operator==(const authentication_entry &) const = default;
    };

    struct service_endpoint {
        std::string type;
        std::string uri;

        bool operator==(const service_endpoint &) const = default;
    };

    // DID document. Wire form is JSON with the W3C field names
    // (id, publicKey, authentication, service, socialBinding, delegates, updated).
    struct document {
        identifier id;
        std::vector<public_key_entry> public_keys;
        std::vector<authentication_entry> authentication;
        std::vector<service_endpoint> services;
        std::map<std::string, std::string> social_bindings;
        std::vector<identifier> delegates;
        uint64_t updated_at = 0;

        bool operator==(const document &) const = default;

        [[nodiscard]] json to_json() const;
        // Throws error(malformed_ddo) on any structural problem.
        static document from_json(const json &j);
        // Throws error(malformed_ddo) when an invariant does not hold.
        void validate() const;
        // Canonical text used for signing and digests.
        [[nodiscard]] std::string canonical() const { return canonical_json(to_json()); }
    };

    inline constexpr std::string_view key_type = "Ed25519VerificationKey2018";

    // One owner key, referenced by one authentication entry.
    document minimal_document(const identifier &id, const verifying_key &owner);
}
