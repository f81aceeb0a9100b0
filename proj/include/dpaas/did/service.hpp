#pragma once

#include <optional>
#include <vector>
#include <dpaas/did/document.hpp>
#include <dpaas/keyvault/keys.hpp>
#include <dpaas/ledger/ledger.hpp>

namespace dpaas::did {
    struct pending_registration {
        identifier id;
        ledger::tx_id tx {};
    };

    struct dual_resolution {
        uint64_t height = 0;
        document first;
        document second;
    };

    enum class vote_outcome { pending, executed };

    struct proposal_outcome {
        digest proposal_id {};
        vote_outcome outcome = vote_outcome::pending;
    };

    // Client for the DID Registry contract. Mutations are signed transactions that take
    // effect when a block includes them; confirm() drives block production until then.
    // Owner signatures cover the entry version at submission, so one owner's mutations
    // should be confirmed one at a time.
    class service {
    public:
        explicit service(ledger::ledger &chain): _chain { chain } {}

        // Registers the DID of `owner`'s account, creating the account when missing.
        // Without a document the minimal one (owner key + authentication) is used.
        pending_registration register_did(const keyvault::key_pair &owner, std::optional<document> ddo = {});
        // One sub-key per identity at fresh derivation indices, each with its own account.
        std::vector<pending_registration> register_multiple(keyvault::master_key &master, size_t count,
            const document &ddo_template = {});
        std::vector<pending_registration> register_keys(std::span<const keyvault::key_pair> keys, const document &ddo_template = {});

        [[nodiscard]] ledger::registry_entry entry(const identifier &id) const;
        [[nodiscard]] document resolve(const identifier &id) const;
        [[nodiscard]] dual_resolution dual_resolve(const identifier &a, const identifier &b) const;
        [[nodiscard]] std::optional<ledger::key_update_proposal> proposal(const digest &id) const;
        // Owner key in force at logical time `at_ms`.
        [[nodiscard]] verifying_key key_of_record(const identifier &id, int64_t at_ms) const;

        ledger::tx_id update(const identifier &id, const document &new_ddo, const keyvault::key_pair &owner);
        ledger::tx_id bind_social_media(const identifier &id, std::string_view platform, std::string_view profile_uri,
            const keyvault::key_pair &owner);
        ledger::tx_id add_delegates(const identifier &id, const std::vector<identifier> &delegates, const keyvault::key_pair &owner);
        ledger::tx_id propose_key_update(const identifier &id, const verifying_key &new_key, const identifier &delegate,
            const keyvault::key_pair &delegate_key);
        ledger::tx_id vote_key_update(const digest &proposal_id, const identifier &delegate, const keyvault::key_pair &delegate_key);
        ledger::tx_id revoke(const identifier &id, const keyvault::key_pair &owner);

        // Produces blocks until `tx` is included; throws the contract error if it failed.
        ledger::receipt confirm(const ledger::tx_id &tx);
        static proposal_outcome outcome_of(const ledger::receipt &r);

        [[nodiscard]] ledger::ledger &chain() noexcept { return _chain; }
    private:
        uint64_t current_version(const identifier &id) const;
        ledger::tx_id submit(const keyvault::key_pair &signer, std::string op, json args);

        ledger::ledger &_chain;
    };
}
