#pragma once

#include <map>
#include <optional>
#include <set>
#include <utility>
#include <vector>
#include <dpaas/did/document.hpp>
#include <dpaas/ledger/config.hpp>
#include <dpaas/ledger/types.hpp>

namespace dpaas::ledger {
    enum class did_status { active, revoked };

    struct key_record {
        verifying_key key {};
        int64_t since_ms = 0;
        uint64_t since_height = 0;
    };

    struct registry_entry {
        did::identifier id;
        std::optional<did::document> ddo;   // absent once revoked
        verifying_key owner_key {};
        did_status status = did_status::active;
        uint64_t registered_at = 0;
        uint64_t version = 0;
        std::vector<did::identifier> delegates;
        std::vector<key_record> key_history;

        [[nodiscard]] bool active() const noexcept { return status == did_status::active; }
        // Owner key in force at logical time `time_ms`.
        [[nodiscard]] verifying_key key_at(int64_t time_ms) const;

        [[nodiscard]] json to_json() const;
        static registry_entry from_json(const json &j);
    };

    enum class proposal_status { open, executed, closed };

    struct key_update_proposal {
        digest id {};
        did::identifier target;
        verifying_key new_key {};
        std::set<did::identifier> votes;
        uint64_t created_at = 0;
        proposal_status status = proposal_status::open;

        [[nodiscard]] json to_json() const;
        static key_update_proposal from_json(const json &j);
    };

    struct anchor_entry {
        std::string repository_id;
        uint64_t epoch = 0;
        digest root {};
        uint64_t anchored_at = 0;

        [[nodiscard]] json to_json() const;
        static anchor_entry from_json(const json &j);
    };

    struct exec_context {
        uint64_t height = 0;
        int64_t timestamp_ms = 0;
        dpaas::address sender {};
        verifying_key sender_key {};
    };

    struct exec_result {
        errc status = errc::ok;
        std::string detail;
        json output;
    };

    // Read request against committed contract state.
    bytes make_query(std::string_view op, const json &args);

    struct query_result {
        bool found = false;
        json value;
    };
    query_result parse_query_result(byte_view encoded);

    // State of the two hosted contracts: the DID Registry and the Anchoring Registry.
    // A call either applies completely or leaves the state untouched.
    class contract_state {
    public:
        explicit contract_state(const chain_config &cfg): _cfg { &cfg } {}

        exec_result execute(std::string_view target, const contract_call &call, const exec_context &ctx);
        [[nodiscard]] bytes query(std::string_view target, byte_view encoded) const;
        [[nodiscard]] digest state_digest() const;

        [[nodiscard]] const registry_entry *entry(const did::identifier &id) const;
        [[nodiscard]] const key_update_proposal *proposal(const digest &id) const;
        [[nodiscard]] const anchor_entry *anchor(const std::string &repository_id, uint64_t epoch) const;
        [[nodiscard]] uint64_t anchor_count(const std::string &repository_id) const;
        [[nodiscard]] size_t registry_size() const noexcept { return _registry.size(); }
    private:
        exec_result register_did(const json &args, const exec_context &ctx);
        exec_result update(const json &args, const exec_context &ctx);
        exec_result bind_social(const json &args, const exec_context &ctx);
        exec_result set_delegates(const json &args, const exec_context &ctx);
        exec_result propose(const json &args, const exec_context &ctx);
        exec_result vote(const json &args, const exec_context &ctx);
        exec_result revoke(const json &args, const exec_context &ctx);
        exec_result write_anchor(const json &args, const exec_context &ctx);

        registry_entry &active_entry(const std::string &did_text);
        bool is_active_delegate(const registry_entry &e, const did::identifier &delegate) const;
        json tally(key_update_proposal &p, const exec_context &ctx);
        void replace_owner_key(registry_entry &e, const verifying_key &new_key, const exec_context &ctx);
        void close_open_proposals(const did::identifier &id);
        void touch_entry(const registry_entry &e);
        void touch_proposal(const key_update_proposal &p);

        const chain_config *_cfg;
        std::map<did::identifier, registry_entry> _registry;
        std::map<did::identifier, digest> _entry_digests;
        std::map<digest, key_update_proposal> _proposals;
        std::map<digest, digest> _proposal_digests;
        std::map<std::pair<did::identifier, verifying_key>, digest> _open_proposals;
        std::map<std::pair<std::string, uint64_t>, anchor_entry> _anchors;
        std::map<std::string, uint64_t> _anchor_counts;
    };
}
