#include <fstream>
#include <sstream>
#include <dpaas/gateway/platform.hpp>

namespace dpaas::gateway {
    namespace {
        keyvault::key_pair key_from(const std::optional<std::string> &cold)
        {
            if (!cold)
                return keyvault::generate_keypair(default_random());
            return keyvault::import_cold(keyvault::cold_export::parse(*cold));
        }
    }

    platform::platform(platform_config cfg): _cfg { std::move(cfg) }
    {
        std::optional<std::filesystem::path> journal, repo_dir, key_dir;
        if (_cfg.storage) {
            std::filesystem::create_directories(*_cfg.storage);
            journal = *_cfg.storage / "chain.journal";
            repo_dir = *_cfg.storage / "repos";
            key_dir = *_cfg.storage / "keys";
        }
        load_platform_keys();

        auto chain_cfg = _cfg.chain;
        chain_cfg.anchor_authority = address_of(_anchor->public_key());
        _chain = std::make_unique<ledger::ledger>(chain_cfg, journal);
        _vault = key_dir ? std::make_unique<keyvault::vault>(*key_dir) : std::make_unique<keyvault::vault>();
        _repos = std::make_unique<offchain::repository_set>(repo_dir);
        _dids = std::make_unique<did::service>(*_chain);

        auto clock = [this] { return now_seconds(); };
        _issuers = std::make_unique<credential::issuer_registry>(*_repos, *_dids, _super->public_key(), clock);
        _facts = std::make_unique<offchain::identity_fact_store>(*_repos, *_dids,
            [this](const did::identifier &id) { return _issuers->is_active(id); });
        _credentials = std::make_unique<credential::credential_service>(*_repos, *_dids, *_issuers, *_facts, *_super, clock,
            _cfg.delivery_window_s);
        _anchors = std::make_unique<offchain::anchor_service>(*_repos, *_chain, *_anchor);

        // Operators act through the vault, so the platform keys live there too.
        for (const auto *kp: { &*_super, &*_anchor }) {
            try {
                (void)_vault->info(kp->id());
            } catch (const error &ex) {
                if (ex.code() != errc::unknown_key)
                    throw;
                _vault->import(*kp);
            }
        }
        if (_cfg.anchoring_period > 0)
            _anchors->schedule(_cfg.anchoring_period, _cfg.anchored_repositories);
    }

    void platform::load_platform_keys()
    {
        if (!_cfg.storage) {
            _super.emplace(key_from(_cfg.super_key));
            _anchor.emplace(key_from(_cfg.anchor_key));
            return;
        }
        const auto path = *_cfg.storage / "platform.json";
        json stored = json::object();
        if (std::ifstream in { path }; in) {
            std::stringstream ss;
            ss << in.rdbuf();
            try {
                stored = json::parse(ss.str());
            } catch (const json::exception &ex) {
                throw error(errc::bad_config, path.string() + ": " + ex.what());
            }
        }
        // Configured keys win; otherwise reuse the stored ones; otherwise generate.
        auto pick = [&](const std::optional<std::string> &configured, const char *name) {
            if (configured)
                return *configured;
            if (stored.contains(name))
                return stored.at(name).get<std::string>();
            return keyvault::export_cold(keyvault::generate_keypair(default_random())).to_string();
        };
        const auto super_text = pick(_cfg.super_key, "super");
        const auto anchor_text = pick(_cfg.anchor_key, "anchor");
        _super.emplace(key_from(super_text));
        _anchor.emplace(key_from(anchor_text));
        const json out { { "super", super_text }, { "anchor", anchor_text } };
        if (out != stored) {
            std::ofstream f { path, std::ios::trunc };
            f << out.dump(2) << '\n';
            if (!f)
                throw error(errc::io_error, "cannot write " + path.string());
            std::filesystem::permissions(path, std::filesystem::perms::owner_read | std::filesystem::perms::owner_write);
        }
    }
}
