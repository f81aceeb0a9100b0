#include <fstream>
#include <sstream>
#include <dpaas/keyvault/vault.hpp>

namespace dpaas::keyvault {
    json key_info::to_json() const
    {
        json j {
            { "key_id", to_hex(id) },
            { "verifying_key", to_hex(public_key) },
            { "state", to_string(state) },
            { "master", master },
        };
        if (master)
            j["next_index"] = next_index;
        return j;
    }

    namespace {
        key_state state_from_string(const std::string &s)
        {
            if (s == "created") return key_state::created;
            if (s == "stored_hot") return key_state::stored_hot;
            if (s == "stored_cold") return key_state::stored_cold;
            if (s == "deleted") return key_state::deleted;
            throw error(errc::bad_encoding, "unknown key state " + s);
        }
    }

    vault::vault(std::filesystem::path dir): _dir { std::move(dir) }
    {
        std::filesystem::create_directories(*_dir);
        load_dir();
    }

    void vault::load_dir()
    {
        for (const auto &de: std::filesystem::directory_iterator { *_dir }) {
            if (de.path().extension() != ".key")
                continue;
            std::ifstream in { de.path() };
            std::stringstream ss;
            ss << in.rdbuf();
            const auto j = json::parse(ss.str());
            auto e = std::make_shared<entry>();
            e->info.id = fixed_from_hex<32>(j.at("key_id").get<std::string>());
            e->info.public_key = fixed_from_hex<32>(j.at("verifying_key").get<std::string>());
            e->info.state = state_from_string(j.at("state").get<std::string>());
            e->info.master = j.at("master").get<bool>();
            e->info.next_index = j.value("next_index", uint64_t { 0 });
            if (e->info.state != key_state::deleted) {
                auto kp = keyvault::import_cold(cold_export::parse(j.at("seed").get<std::string>()));
                kp.set_state(e->info.state);
                e->key.emplace(std::move(kp));
            }
            _keys.emplace(e->info.id, std::move(e));
        }
    }

    void vault::persist(const entry &e) const
    {
        if (!_dir)
            return;
        auto j = e.info.to_json();
        j["next_index"] = e.info.next_index;
        if (e.key)
            j["seed"] = keyvault::export_cold(*e.key).to_string();
        const auto path = *_dir / (to_hex(e.info.id) + ".key");
        const auto tmp = path.string() + ".tmp";
        {
            std::ofstream out { tmp, std::ios::trunc };
            out << j.dump(2) << "\n";
            if (!out)
                throw error(errc::io_error, "cannot write " + tmp);
        }
        std::filesystem::permissions(tmp, std::filesystem::perms::owner_read | std::filesystem::perms::owner_write);
        std::filesystem::rename(tmp, path);
    }

    std::shared_ptr<vault::entry> vault::find(const key_id &id) const
    {
        std::shared_lock lock { _mutex };
        const auto it = _keys.find(id);
        if (it == _keys.end())
            throw error(errc::unknown_key, to_hex(id));
        return it->second;
    }

    key_info vault::insert(const key_pair &kp, bool master)
    {
        std::unique_lock lock { _mutex };
        if (const auto it = _keys.find(kp.id()); it != _keys.end()) {
            std::lock_guard elock { it->second->mutex };
            if (it->second->info.state == key_state::deleted)
                throw error(errc::deleted_key, to_hex(kp.id()));
            it->second->info.state = key_state::created;
            it->second->key->set_state(key_state::created);
            it->second->info.master = it->second->info.master || master;
            persist(*it->second);
            return it->second->info;
        }
        auto e = std::make_shared<entry>();
        e->key.emplace(kp);
        e->key->set_state(key_state::created);
        e->info = key_info { kp.id(), kp.public_key(), key_state::created, master, 0 };
        persist(*e);
        auto info = e->info;
        _keys.emplace(kp.id(), std::move(e));
        return info;
    }

    key_info vault::generate(random_source &rng)
    {
        return insert(generate_keypair(rng), false);
    }

    key_info vault::generate_from_entropy(byte_view entropy)
    {
        return insert(key_pair::from_entropy(entropy), false);
    }

    key_info vault::create_master(random_source &rng)
    {
        return insert(generate_keypair(rng), true);
    }

    key_info vault::create_master_from_entropy(byte_view entropy)
    {
        return insert(key_pair::from_entropy(entropy), true);
    }

    key_info vault::import(const key_pair &kp)
    {
        return insert(kp, false);
    }

    key_pair vault::derive_sub_key(const key_id &master, uint64_t index)
    {
        auto e = find(master);
        std::optional<key_pair> sub;
        {
            std::lock_guard lock { e->mutex };
            if (e->info.state == key_state::deleted)
                throw error(errc::deleted_key, to_hex(master));
            sub.emplace(master_key { e->key->seed() }.derive(index));
            if (index >= e->info.next_index) {
                e->info.next_index = index + 1;
                persist(*e);
            }
        }
        insert(*sub, false);
        return *sub;
    }

    key_pair vault::derive_next_sub_key(const key_id &master)
    {
        auto e = find(master);
        std::optional<key_pair> sub;
        {
            std::lock_guard lock { e->mutex };
            if (e->info.state == key_state::deleted)
                throw error(errc::deleted_key, to_hex(master));
            master_key mk { e->key->seed(), e->info.next_index };
            sub.emplace(mk.derive_next());
            e->info.next_index = mk.next_index();
            persist(*e);
        }
        insert(*sub, false);
        return *sub;
    }

    key_pair vault::get(const key_id &id) const
    {
        auto e = find(id);
        std::lock_guard lock { e->mutex };
        if (e->info.state == key_state::deleted)
            throw error(errc::deleted_key, to_hex(id));
        return *e->key;
    }

    key_info vault::info(const key_id &id) const
    {
        auto e = find(id);
        std::lock_guard lock { e->mutex };
        return e->info;
    }

    std::vector<key_info> vault::list() const
    {
        std::shared_lock lock { _mutex };
        std::vector<key_info> out;
        out.reserve(_keys.size());
        for (const auto &[id, e]: _keys) {
            std::lock_guard elock { e->mutex };
            out.push_back(e->info);
        }
        return out;
    }

    signature vault::sign(const key_id &id, byte_view message) const
    {
        auto e = find(id);
        std::lock_guard lock { e->mutex };
        if (e->info.state == key_state::deleted)
            throw error(errc::deleted_key, to_hex(id));
        return e->key->sign(message);
    }

    keystore_record vault::store_hot(const key_id &id, std::string_view passphrase, const kdf_params &params, random_source &rng)
    {
        auto e = find(id);
        std::lock_guard lock { e->mutex };
        if (e->info.state == key_state::deleted)
            throw error(errc::deleted_key, to_hex(id));
        auto rec = keyvault::store_hot(*e->key, passphrase, params, rng);
        e->info.state = key_state::stored_hot;
        e->key->set_state(key_state::stored_hot);
        persist(*e);
        return rec;
    }

    key_info vault::load_hot(const keystore_record &record, std::string_view passphrase)
    {
        return insert(keyvault::load_hot(record, passphrase), false);
    }

    cold_export vault::export_cold(const key_id &id)
    {
        auto e = find(id);
        std::lock_guard lock { e->mutex };
        if (e->info.state == key_state::deleted)
            throw error(errc::deleted_key, to_hex(id));
        auto exp = keyvault::export_cold(*e->key);
        e->info.state = key_state::stored_cold;
        e->key->set_state(key_state::stored_cold);
        persist(*e);
        return exp;
    }

    key_info vault::import_cold(const cold_export &exp)
    {
        return insert(keyvault::import_cold(exp), false);
    }

    std::vector<shard> vault::shard_key(const key_id &id, unsigned total, unsigned threshold, random_source &rng)
    {
        auto e = find(id);
        std::lock_guard lock { e->mutex };
        if (e->info.state == key_state::deleted)
            throw error(errc::deleted_key, to_hex(id));
        return shard_distribute(e->key->seed().view(), total, threshold, rng);
    }

    key_info vault::recover(std::span<const shard> shards)
    {
        auto secret = shard_combine(shards);
        if (secret.size() != seed_bytes::size()) {
            secure_wipe(secret);
            throw error(errc::bad_encoding, "recovered secret is not a 32-byte seed");
        }
        auto kp = key_pair::from_seed(seed_bytes { secret });
        secure_wipe(secret);
        return insert(kp, false);
    }

    void vault::delete_key(const key_id &id)
    {
        auto e = find(id);
        std::lock_guard lock { e->mutex };
        if (e->info.state == key_state::deleted)
            throw error(errc::unknown_key, to_hex(id) + " already deleted");
        e->key.reset();
        e->info.state = key_state::deleted;
        persist(*e);
    }
}
