#pragma once

#include <memory>
#include <dpaas/credential/service.hpp>
#include <dpaas/gateway/config.hpp>
#include <dpaas/keyvault/vault.hpp>
#include <dpaas/offchain/anchoring.hpp>

namespace dpaas::gateway {
    // One process hosting the ledger, key vault, repositories and every service built on
    // them. With a storage directory all state survives restarts:
    //   chain.journal, repos/, keys/, platform.json (platform keys)
    class platform {
    public:
        explicit platform(platform_config cfg = {});

        platform(const platform &) = delete;
        platform &operator=(const platform &) = delete;

        [[nodiscard]] const platform_config &config() const noexcept { return _cfg; }
        [[nodiscard]] ledger::ledger &chain() noexcept { return *_chain; }
        [[nodiscard]] keyvault::vault &vault() noexcept { return *_vault; }
        [[nodiscard]] offchain::repository_set &repos() noexcept { return *_repos; }
        [[nodiscard]] did::service &dids() noexcept { return *_dids; }
        [[nodiscard]] credential::issuer_registry &issuers() noexcept { return *_issuers; }
        [[nodiscard]] offchain::identity_fact_store &facts() noexcept { return *_facts; }
        [[nodiscard]] credential::credential_service &credentials() noexcept { return *_credentials; }
        [[nodiscard]] offchain::anchor_service &anchors() noexcept { return *_anchors; }

        [[nodiscard]] const keyvault::key_pair &super_key() const noexcept { return *_super; }
        [[nodiscard]] const keyvault::key_pair &anchor_key() const noexcept { return *_anchor; }
        // Logical platform time in seconds, the clock of tokens and credentials.
        [[nodiscard]] int64_t now_seconds() const { return _chain->now_ms() / 1000; }
    private:
        void load_platform_keys();

        platform_config _cfg;
        std::optional<keyvault::key_pair> _super;
        std::optional<keyvault::key_pair> _anchor;
        std::unique_ptr<ledger::ledger> _chain;
        std::unique_ptr<keyvault::vault> _vault;
        std::unique_ptr<offchain::repository_set> _repos;
        std::unique_ptr<did::service> _dids;
        std::unique_ptr<credential::issuer_registry> _issuers;
        std::unique_ptr<offchain::identity_fact_store> _facts;
        std::unique_ptr<credential::credential_service> _credentials;
        std::unique_ptr<offchain::anchor_service> _anchors;
    };
}
