#include <algorithm>
#include <mutex>
#include <dpaas/common/crypto.hpp>
#include <dpaas/offchain/merkle.hpp>
#include <dpaas/offchain/repository.hpp>

namespace dpaas::offchain {
    repository::repository(std::string id, std::unique_ptr<record_store> store): _id { std::move(id) }, _store { std::move(store) }
    {
        for (auto &[key, value]: _store->load()) {
            auto &s = _records[key];
            s.leaf = sha256(canonical_record(key, value));
            s.value = std::move(value);
        }
    }

    void repository::put_locked(const std::string &key, json value)
    {
        _store->append(key, value);
        auto &s = _records[key];
        s.leaf = sha256(canonical_record(key, value));
        s.value = std::move(value);
    }

    void repository::put(const std::string &key, json value)
    {
        std::unique_lock lock { _mutex };
        put_locked(key, std::move(value));
    }

    std::optional<json> repository::get(const std::string &key) const
    {
        std::shared_lock lock { _mutex };
        const auto it = _records.find(key);
        if (it == _records.end())
            return {};
        return it->second.value;
    }

    size_t repository::size() const
    {
        std::shared_lock lock { _mutex };
        return _records.size();
    }

    void repository::for_each(const std::function<void(const std::string &, const json &)> &fn) const
    {
        std::shared_lock lock { _mutex };
        for (const auto &[k, s]: _records)
            fn(k, s.value);
    }

    std::optional<json> repository::update(const std::string &key, const std::function<std::optional<json>(const std::optional<json> &)> &fn)
    {
        std::unique_lock lock { _mutex };
        std::optional<json> current;
        if (const auto it = _records.find(key); it != _records.end())
            current = it->second.value;
        auto next = fn(current);
        if (next)
            put_locked(key, *next);
        return next;
    }

    digest repository::root() const
    {
        std::vector<digest> leaves;
        {
            std::shared_lock lock { _mutex };
            leaves.reserve(_records.size());
            for (const auto &[k, s]: _records)
                leaves.push_back(s.leaf);
        }
        return merkle_root(leaves);
    }

    namespace {
        // Repository ids contain ':'; file names use '+' instead.
        std::string file_name_of(std::string id)
        {
            std::replace(id.begin(), id.end(), ':', '+');
            return id + ".log";
        }

        std::string id_of(std::string file_stem)
        {
            std::replace(file_stem.begin(), file_stem.end(), '+', ':');
            return file_stem;
        }
    }

    repository_set::repository_set(std::optional<std::filesystem::path> dir): _dir { std::move(dir) }
    {
        if (!_dir)
            return;
        std::filesystem::create_directories(*_dir);
        for (const auto &de: std::filesystem::directory_iterator { *_dir })
            if (de.path().extension() == ".log")
                open(id_of(de.path().stem().string()));
    }

    repository &repository_set::open(const std::string &id)
    {
        if (id.empty() || id.find('+') != std::string::npos || id.find('/') != std::string::npos)
            throw error(errc::unknown_repository, "invalid repository id '" + id + "'");
        std::unique_lock lock { _mutex };
        if (const auto it = _repos.find(id); it != _repos.end())
            return *it->second;
        std::unique_ptr<record_store> store;
        if (_dir)
            store = std::make_unique<log_file_store>(*_dir / file_name_of(id));
        else
            store = std::make_unique<memory_store>();
        auto [it, _] = _repos.emplace(id, std::make_unique<repository>(id, std::move(store)));
        return *it->second;
    }

    repository &repository_set::at(const std::string &id) const
    {
        std::shared_lock lock { _mutex };
        const auto it = _repos.find(id);
        if (it == _repos.end())
            throw error(errc::unknown_repository, id);
        return *it->second;
    }

    bool repository_set::contains(const std::string &id) const
    {
        std::shared_lock lock { _mutex };
        return _repos.contains(id);
    }

    std::vector<std::string> repository_set::ids() const
    {
        std::shared_lock lock { _mutex };
        std::vector<std::string> out;
        for (const auto &[id, _]: _repos)
            out.push_back(id);
        return out;
    }
}
