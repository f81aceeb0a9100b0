#pragma once

#include <functional>
#include <mutex>
#include <optional>
#include <dpaas/did/service.hpp>
#include <dpaas/offchain/repository.hpp>

namespace dpaas::credential {
    enum class issuer_status { active, removed };

    std::string_view to_string(issuer_status s) noexcept;
    issuer_status issuer_status_from_string(std::string_view s);

    struct issuer_record {
        did::identifier issuer;
        issuer_status status = issuer_status::active;
        address approved_by {};
        int64_t since = 0;       // logical seconds of the last status change
        uint64_t version = 0;    // bumped on every update; bound into the super signature

        [[nodiscard]] json to_json() const;
        static issuer_record from_json(const json &j);
    };

    // Issuer Repository. Only the super account (platform owner) approves or changes issuers.
    class issuer_registry {
    public:
        issuer_registry(offchain::repository_set &repos, const did::service &dids, verifying_key super_key,
            std::function<int64_t()> clock_seconds);

        static bytes signup_message(const did::identifier &issuer);
        static bytes update_message(const did::identifier &issuer, issuer_status status, uint64_t version);

        issuer_record signup(const did::identifier &issuer, const signature &super_signature);
        issuer_record update(const did::identifier &issuer, issuer_status status, const signature &super_signature);

        [[nodiscard]] std::optional<issuer_record> find(const did::identifier &issuer) const;
        // Approved, not removed, and the DID itself still active.
        [[nodiscard]] bool is_active(const did::identifier &issuer) const;
        [[nodiscard]] const verifying_key &super_key() const noexcept { return _super_key; }
    private:
        offchain::repository &_repo;
        const did::service &_dids;
        verifying_key _super_key;
        std::function<int64_t()> _clock;
        std::mutex _mutex;
    };
}
