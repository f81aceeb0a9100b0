#pragma once

#include <filesystem>
#include <optional>
#include <string>
#include <vector>
#include <dpaas/ledger/config.hpp>

namespace dpaas::gateway {
    // Platform configuration file (JSON):
    //   { "chain": { "block_interval_ms", "block_gas_limit", "genesis_time_ms", "gas": { "<target>.<op>": n } },
    //     "platform_keys": { "super": "<cold export>", "anchor": "<cold export>" },
    //     "anchoring": { "period": n, "repositories": [...] },
    //     "storage": "<dir>", "bind": "<host>:<port>", "delivery_window_s": n }
    // DPAAS_STORAGE and DPAAS_BIND override the storage directory and bind address.
    struct platform_config {
        ledger::chain_config chain;
        std::optional<std::string> super_key;    // cold export; generated when absent
        std::optional<std::string> anchor_key;
        uint64_t anchoring_period = 10;          // blocks; 0 disables scheduled anchoring
        std::vector<std::string> anchored_repositories;   // empty: every repository
        std::optional<std::filesystem::path> storage;
        std::string bind_host { "127.0.0.1" };
        uint16_t bind_port = 8080;
        int64_t delivery_window_s = 365LL * 24 * 3600;

        void apply_env();
        void set_bind(std::string_view host_port);

        static platform_config parse(std::string_view json_text);
        static platform_config load(const std::filesystem::path &path);
    };
}
