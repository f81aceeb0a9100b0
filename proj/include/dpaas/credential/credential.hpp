#pragma once

#include <map>
#include <string>
#include <dpaas/common/codec.hpp>
#include <dpaas/did/did.hpp>

namespace dpaas::credential {
    using claim_map = std::map<std::string, std::string>;

    // Issuer-signed claim set about a holder. The id is the digest of the canonical body
    // (every field except id and signature), so any change to content changes the id.
    struct credential {
        digest id {};
        did::identifier issuer;
        did::identifier holder;
        claim_map claims;
        int64_t issued_at = 0;   // logical seconds
        std::string schema;
        signature sig;

        [[nodiscard]] json body() const;
        [[nodiscard]] std::string canonical_body() const { return canonical_json(body()); }
        [[nodiscard]] digest compute_id() const { return sha256(canonical_body()); }

        // W3C verifiable-credential layout.
        [[nodiscard]] json to_json() const;
        static credential from_json(const json &j);
    };

    std::string format_timestamp(int64_t seconds);
    int64_t parse_timestamp(std::string_view iso8601);
}
