#pragma once

#include <filesystem>
#include <functional>
#include <map>
#include <memory>
#include <optional>
#include <shared_mutex>
#include <string>
#include <vector>
#include <dpaas/offchain/store.hpp>

namespace dpaas::offchain {
    inline constexpr std::string_view credentials_repository = "credentials";
    inline constexpr std::string_view issuers_repository = "issuers";

    // Ordered key/value repository with a Merkle digest over its records. Readers run
    // concurrently; writers are serialized; digest() sees one consistent snapshot.
    class repository {
    public:
        repository(std::string id, std::unique_ptr<record_store> store);

        [[nodiscard]] const std::string &id() const noexcept { return _id; }

        void put(const std::string &key, json value);
        [[nodiscard]] std::optional<json> get(const std::string &key) const;
        [[nodiscard]] size_t size() const;
        void for_each(const std::function<void(const std::string &, const json &)> &fn) const;

        // Read-modify-write of one record under the writer lock. `fn` receives the current
        // value (if any) and returns the replacement, or nothing to leave it unchanged.
        std::optional<json> update(const std::string &key, const std::function<std::optional<json>(const std::optional<json> &)> &fn);

        // Merkle root over leaf digests of the canonical records, sorted by key.
        [[nodiscard]] digest root() const;
    private:
        struct slot {
            json value;
            digest leaf {};
        };

        void put_locked(const std::string &key, json value);

        std::string _id;
        std::unique_ptr<record_store> _store;
        mutable std::shared_mutex _mutex;
        std::map<std::string, slot> _records;
    };

    // All repositories of one platform, backed by log files under a directory or by memory.
    class repository_set {
    public:
        explicit repository_set(std::optional<std::filesystem::path> dir = {});

        repository &open(const std::string &id);
        [[nodiscard]] repository &at(const std::string &id) const;
        [[nodiscard]] bool contains(const std::string &id) const;
        [[nodiscard]] std::vector<std::string> ids() const;
        [[nodiscard]] digest repository_digest(const std::string &id) const { return at(id).root(); }
    private:
        std::optional<std::filesystem::path> _dir;
        mutable std::shared_mutex _mutex;
        std::map<std::string, std::unique_ptr<repository>> _repos;
    };
}
