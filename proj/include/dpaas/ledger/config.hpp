#pragma once

#include <cstdint>
#include <filesystem>
#include <map>
#include <optional>
#include <string>
#include <dpaas/common/bytes.hpp>
#include <dpaas/did/did.hpp>

namespace dpaas::ledger {
    // Gas charged per contract call type, keyed "<target>.<op>".
    using gas_table = std::map<std::string, uint64_t>;

    gas_table default_gas_table();

    // Genesis parameters. Text form is one key=value per line; '#' starts a comment.
    struct chain_config {
        int64_t block_interval_ms = 5000;
        uint64_t block_gas_limit = 80'000'000;
        int64_t genesis_time_ms = 0;
        std::string hash_algorithm { "sha256" };
        gas_table gas = default_gas_table();
        // Only this account may write anchors; unset means any account.
        std::optional<address> anchor_authority;

        [[nodiscard]] uint64_t gas_for(std::string_view target, std::string_view op) const;
        [[nodiscard]] std::string to_text() const;
        [[nodiscard]] digest hash() const;
        void validate() const;

        static chain_config parse(std::string_view text);
        static chain_config load(const std::filesystem::path &path);
    };
}
