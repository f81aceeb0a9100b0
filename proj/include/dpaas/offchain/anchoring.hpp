#pragma once

#include <map>
#include <mutex>
#include <optional>
#include <string>
#include <vector>
#include <dpaas/keyvault/keys.hpp>
#include <dpaas/ledger/ledger.hpp>
#include <dpaas/offchain/repository.hpp>

namespace dpaas::offchain {
    struct anchor_record {
        std::string repository_id;
        uint64_t epoch = 0;
        digest root {};
        uint64_t anchored_at = 0;

        [[nodiscard]] json to_json() const;
    };

    struct pending_anchor {
        std::string repository_id;
        uint64_t epoch = 0;
        digest root {};
        ledger::tx_id tx {};
    };

    struct integrity_report {
        std::string repository_id;
        uint64_t epoch = 0;
        bool match = false;
        digest expected {};   // anchored
        digest actual {};     // recomputed now

        [[nodiscard]] json to_json() const;
    };

    // Anchoring to Blockchain: commits repository Merkle roots to the Anchoring Registry
    // under the platform anchoring key, one epoch per commitment.
    class anchor_service {
    public:
        anchor_service(repository_set &repos, ledger::ledger &chain, keyvault::key_pair authority);

        pending_anchor submit_anchor(const std::string &repository_id);
        // Submits and drives block production until the anchor is committed.
        anchor_record anchor(const std::string &repository_id);

        [[nodiscard]] std::optional<anchor_record> find(const std::string &repository_id, uint64_t epoch) const;
        [[nodiscard]] uint64_t epochs(const std::string &repository_id) const;
        [[nodiscard]] integrity_report verify_integrity(const std::string &repository_id, uint64_t epoch) const;

        // Every `period` blocks, anchor `repository_ids` (all open repositories when empty)
        // in the block being produced.
        void schedule(uint64_t period, std::vector<std::string> repository_ids = {});
    private:
        repository_set &_repos;
        ledger::ledger &_chain;
        keyvault::key_pair _authority;
        mutable std::mutex _mutex;
        std::map<std::string, std::vector<std::pair<ledger::tx_id, uint64_t>>> _in_flight;
    };
}
