#pragma once

#include <string>
#include <dpaas/common/codec.hpp>
#include <dpaas/keyvault/keys.hpp>

namespace dpaas::credential {
    inline constexpr std::string_view token_algorithm = "EdDSA";

    struct token_claims {
        digest jti {};        // credential id
        int64_t iat = 0;
        int64_t nbf = 0;
        int64_t exp = 0;
        bool one_off = false;
        // Random per-grant value so two grants with equal claims get distinct token ids.
        std::string nonce;
    };

    // Compact JWT: base64url(header) "." base64url(payload) "." base64url(signature).
    // The signature covers the first two segments exactly as transmitted.
    class access_token {
    public:
        static access_token issue(const token_claims &claims, const keyvault::key_pair &signer);
        // Throws error(bad_token) on anything that is not a well-formed token.
        static access_token parse(std::string_view compact);

        [[nodiscard]] const token_claims &claims() const noexcept { return _claims; }
        [[nodiscard]] const std::string &algorithm() const noexcept { return _alg; }
        [[nodiscard]] std::string compact() const;
        [[nodiscard]] digest id() const { return sha256(compact()); }
        [[nodiscard]] bool verify(const verifying_key &key) const noexcept;
        [[nodiscard]] json to_json() const;
    private:
        token_claims _claims;
        std::string _alg;
        std::string _header_segment;
        std::string _payload_segment;
        bytes _signature;
    };
}
