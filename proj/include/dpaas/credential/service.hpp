#pragma once

#include <array>
#include <mutex>
#include <vector>
#include <dpaas/credential/credential.hpp>
#include <dpaas/credential/issuers.hpp>
#include <dpaas/credential/token.hpp>
#include <dpaas/offchain/identity_facts.hpp>

namespace dpaas::credential {
    enum class record_status { valid, cancelled };
    enum class access_state { unused, consumed };

    struct credential_record {
        credential cred;
        digest token_id {};      // delivery token
        record_status status = record_status::valid;

        [[nodiscard]] json to_json() const;
        static credential_record from_json(const json &j);
    };

    struct token_record {
        digest token_id {};
        digest credential_id {};
        bool one_off = false;
        access_state state = access_state::unused;

        [[nodiscard]] json to_json() const;
        static token_record from_json(const json &j);
    };

    struct issued_credential {
        credential cred;
        access_token token;
    };

    // Checks run in this order and stop at the first failure.
    inline constexpr std::array<std::string_view, 7> verification_checks {
        "token_signature", "integrity", "window", "access_flag", "status", "issuer_trusted", "issuer_signature",
    };

    struct verification_report {
        bool passed = false;
        errc failure = errc::ok;
        std::string detail;
        size_t checks_passed = 0;   // prefix of verification_checks that passed

        [[nodiscard]] json to_json() const;
    };

    // Credential Repository plus the issuance, access-grant, verification and cancellation
    // flows. Times are logical platform seconds.
    class credential_service {
    public:
        static constexpr int64_t default_delivery_window = 365LL * 24 * 3600;

        credential_service(offchain::repository_set &repos, const did::service &dids, const issuer_registry &issuers,
            const offchain::identity_fact_store &facts, keyvault::key_pair platform_key,
            std::function<int64_t()> clock_seconds, int64_t delivery_window = default_delivery_window);

        static bytes grant_message(const digest &credential_id, int64_t nbf, int64_t exp, bool one_off);
        static bytes cancel_message(const digest &credential_id);

        issued_credential generate_selective_credential(const did::identifier &issuer, const did::identifier &holder,
            const std::vector<std::string> &required_attributes, const keyvault::key_pair &issuer_key,
            std::string schema = {});

        access_token grant_time_constrained(const digest &credential_id, int64_t nbf, int64_t exp, const signature &holder_signature);
        access_token grant_one_off(const digest &credential_id, int64_t exp, const signature &holder_signature);

        verification_report verify(const credential &cred, std::string_view token_text, int64_t at);
        verification_report verify(const credential &cred, std::string_view token_text) { return verify(cred, token_text, _clock()); }

        void cancel(const digest &credential_id, const signature &issuer_signature);

        [[nodiscard]] std::optional<credential_record> record(const digest &credential_id) const;
        [[nodiscard]] std::optional<token_record> token(const digest &token_id) const;
        [[nodiscard]] int64_t now() const { return _clock(); }
        [[nodiscard]] verifying_key platform_key() const { return _platform_key.public_key(); }
    private:
        access_token grant(const digest &credential_id, int64_t nbf, int64_t exp, bool one_off, const signature &holder_signature);
        access_token issue_token(const digest &credential_id, int64_t nbf, int64_t exp, bool one_off);
        std::mutex &token_lock(const digest &token_id) { return _token_locks[token_id[0] % _token_locks.size()]; }

        offchain::repository &_repo;
        const did::service &_dids;
        const issuer_registry &_issuers;
        const offchain::identity_fact_store &_facts;
        keyvault::key_pair _platform_key;
        std::function<int64_t()> _clock;
        int64_t _delivery_window;
        std::array<std::mutex, 64> _token_locks;
    };
}
