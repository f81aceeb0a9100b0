#pragma once

#include <filesystem>
#include <map>
#include <memory>
#include <mutex>
#include <optional>
#include <shared_mutex>
#include <span>
#include <vector>
#include <dpaas/keyvault/shamir.hpp>
#include <dpaas/keyvault/wallet.hpp>

namespace dpaas::keyvault {
    struct key_info {
        key_id id {};
        verifying_key public_key {};
        key_state state = key_state::created;
        bool master = false;
        uint64_t next_index = 0;

        [[nodiscard]] json to_json() const;
    };

    // Guarded key store implementing the key lifecycle. Operations on distinct keys run
    // concurrently, operations on one key are serialized, and deletion is terminal: the
    // seed is wiped and a tombstone remains so later use reports DeletedKey.
    class vault {
    public:
        vault() = default;
        // Persists every key as a file under `dir`; existing files are loaded.
        explicit vault(std::filesystem::path dir);

        key_info generate(random_source &rng = default_random());
        key_info generate_from_entropy(byte_view entropy);
        key_info create_master(random_source &rng = default_random());
        key_info create_master_from_entropy(byte_view entropy);
        key_info import(const key_pair &kp);

        key_pair derive_sub_key(const key_id &master, uint64_t index);
        key_pair derive_next_sub_key(const key_id &master);

        [[nodiscard]] key_pair get(const key_id &id) const;
        [[nodiscard]] key_info info(const key_id &id) const;
        [[nodiscard]] std::vector<key_info> list() const;
        [[nodiscard]] signature sign(const key_id &id, byte_view message) const;

        keystore_record store_hot(const key_id &id, std::string_view passphrase,
            const kdf_params &params = kdf_params::interactive(), random_source &rng = default_random());
        key_info load_hot(const keystore_record &record, std::string_view passphrase);
        cold_export export_cold(const key_id &id);
        key_info import_cold(const cold_export &exp);

        std::vector<shard> shard_key(const key_id &id, unsigned total, unsigned threshold, random_source &rng = default_random());
        key_info recover(std::span<const shard> shards);

        void delete_key(const key_id &id);
    private:
        struct entry {
            mutable std::mutex mutex;
            std::optional<key_pair> key;
            key_info info;
        };

        std::shared_ptr<entry> find(const key_id &id) const;
        key_info insert(const key_pair &kp, bool master);
        void persist(const entry &e) const;
        void load_dir();

        mutable std::shared_mutex _mutex;
        std::map<key_id, std::shared_ptr<entry>> _keys;
        std::optional<std::filesystem::path> _dir;
    };
}
