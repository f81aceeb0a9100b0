#pragma once

#include <deque>
#include <filesystem>
#include <fstream>
#include <functional>
#include <map>
#include <mutex>
#include <optional>
#include <set>
#include <shared_mutex>
#include <span>
#include <vector>
#include <dpaas/keyvault/keys.hpp>
#include <dpaas/ledger/config.hpp>
#include <dpaas/ledger/contracts.hpp>
#include <dpaas/ledger/types.hpp>

namespace dpaas::ledger {
    // Deterministic single-producer chain. Submissions may come from any thread and are
    // linearized into one FIFO pool; produce_block() is the only writer of committed state
    // and advances the logical clock by exactly one block interval.
    class ledger {
    public:
        explicit ledger(chain_config cfg = {}, std::optional<std::filesystem::path> journal = {});

        ledger(const ledger &) = delete;
        ledger &operator=(const ledger &) = delete;

        account create_account(const verifying_key &key);
        account create_account(const keyvault::key_pair &kp) { return create_account(kp.public_key()); }
        // create_account() unless the account already exists
        account ensure_account(const verifying_key &key);
        [[nodiscard]] std::optional<account> find_account(const address &addr) const;

        // Nonce the next submission from `addr` must carry, counting pending transactions.
        [[nodiscard]] uint64_t next_nonce(const address &addr) const;

        tx_id submit_transaction(const transaction &tx);
        // Assigns the nonce, charges the configured gas, signs with `signer`, and submits,
        // all under one lock so concurrent callers sharing an account do not collide.
        tx_id submit_call(const keyvault::key_pair &signer, std::string_view target, const contract_call &call);

        block produce_block();

        [[nodiscard]] bytes query_contract(std::string_view target, byte_view query) const;
        // Answers every query against the same committed state; returns that state's height.
        std::pair<uint64_t, std::vector<bytes>> query_snapshot(std::string_view target, std::span<const bytes> queries) const;

        template <typename F>
        auto read_state(F &&f) const
        {
            std::shared_lock lock { _mutex };
            return f(_state, _blocks.back());
        }

        [[nodiscard]] std::optional<receipt> find_receipt(const tx_id &id) const;
        [[nodiscard]] bool is_pending(const tx_id &id) const;
        [[nodiscard]] uint64_t height() const;
        [[nodiscard]] int64_t now_ms() const;
        [[nodiscard]] block block_at(uint64_t height) const;
        [[nodiscard]] size_t pending_count() const;
        [[nodiscard]] digest state_digest() const;
        [[nodiscard]] const chain_config &config() const noexcept { return _cfg; }

        // Called before block `height` is assembled; transactions submitted from the hook
        // are eligible for that block.
        void add_pre_block_hook(std::function<void(uint64_t height)> hook);
    private:
        tx_id submit_locked(const transaction &tx, const contract_call &call);
        contract_call validate_locked(const transaction &tx) const;
        void journal(uint8_t kind, byte_view payload);
        void replay(const std::filesystem::path &path);

        chain_config _cfg;
        mutable std::shared_mutex _mutex;
        std::mutex _producer_mutex;
        std::mutex _hook_mutex;
        std::map<address, account> _accounts;
        std::map<address, uint64_t> _pending_nonce;
        std::deque<std::pair<transaction, tx_id>> _pool;
        std::set<tx_id> _pending_ids;
        std::map<tx_id, receipt> _receipts;
        std::vector<block> _blocks;
        contract_state _state { _cfg };
        std::vector<std::function<void(uint64_t)>> _pre_block_hooks;
        std::optional<std::ofstream> _journal;
        bool _replaying = false;
    };
}
