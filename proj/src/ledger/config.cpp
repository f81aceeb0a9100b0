#include <charconv>
#include <fstream>
#include <sstream>
#include <dpaas/common/crypto.hpp>
#include <dpaas/ledger/config.hpp>

namespace dpaas::ledger {
    gas_table default_gas_table()
    {
        return {
            // 80M / 228k = 350 registrations per 5 s block, i.e. 70 per second.
            { "did-registry.register", 228'000 },
            { "did-registry.update", 90'000 },
            { "did-registry.bind_social", 60'000 },
            { "did-registry.set_delegates", 80'000 },
            { "did-registry.propose", 100'000 },
            { "did-registry.vote", 60'000 },
            { "did-registry.revoke", 50'000 },
            { "anchoring-registry.anchor", 45'000 },
        };
    }

    uint64_t chain_config::gas_for(std::string_view target, std::string_view op) const
    {
        std::string key { target };
        key += '.';
        key += op;
        const auto it = gas.find(key);
        if (it == gas.end())
            throw error(errc::malformed_call, "no gas cost configured for " + key);
        return it->second;
    }

    std::string chain_config::to_text() const
    {
        std::ostringstream out;
        out << "block_interval_ms=" << block_interval_ms << "\n"
            << "block_gas_limit=" << block_gas_limit << "\n"
            << "genesis_time_ms=" << genesis_time_ms << "\n"
            << "hash_algorithm=" << hash_algorithm << "\n";
        for (const auto &[k, v]: gas)
            out << "gas." << k << "=" << v << "\n";
        if (anchor_authority)
            out << "anchor_authority=" << to_hex(*anchor_authority) << "\n";
        return out.str();
    }

    digest chain_config::hash() const
    {
        return sha256(to_text());
    }

    void chain_config::validate() const
    {
        if (block_interval_ms <= 0)
            throw error(errc::bad_config, "block_interval_ms must be positive");
        if (block_gas_limit == 0)
            throw error(errc::bad_config, "block_gas_limit must be positive");
        if (hash_algorithm != hash_algorithm_id)
            throw error(errc::bad_config, "unsupported hash algorithm " + hash_algorithm);
        for (const auto &[k, v]: gas) {
            if (v == 0)
                throw error(errc::bad_config, "gas cost for " + k + " must be positive");
            if (v > block_gas_limit)
                throw error(errc::bad_config, "gas cost for " + k + " exceeds the block gas limit");
        }
    }

    namespace {
        template <typename T>
        T parse_int(std::string_view key, std::string_view v)
        {
            T out {};
            const auto [ptr, ec] = std::from_chars(v.data(), v.data() + v.size(), out);
            if (ec != std::errc {} || ptr != v.data() + v.size())
                throw error(errc::bad_config, "bad integer for " + std::string { key } + ": " + std::string { v });
            return out;
        }

        std::string_view trim(std::string_view s)
        {
            while (!s.empty() && (s.front() == ' ' || s.front() == '\t'))
                s.remove_prefix(1);
            while (!s.empty() && (s.back() == ' ' || s.back() == '\t' || s.back() == '\r'))
                s.remove_suffix(1);
            return s;
        }
    }

    chain_config chain_config::parse(std::string_view text)
    {
        chain_config cfg;
        std::istringstream in { std::string { text } };
        std::string line;
        size_t lineno = 0;
        while (std::getline(in, line)) {
            ++lineno;
            std::string_view l = line;
            if (const auto hash = l.find('#'); hash != std::string_view::npos)
                l = l.substr(0, hash);
            l = trim(l);
            if (l.empty())
                continue;
            const auto eq = l.find('=');
            if (eq == std::string_view::npos)
                throw error(errc::bad_config, "line " + std::to_string(lineno) + ": expected key=value");
            const auto key = trim(l.substr(0, eq));
            const auto value = trim(l.substr(eq + 1));
            if (key == "block_interval_ms")
                cfg.block_interval_ms = parse_int<int64_t>(key, value);
            else if (key == "block_gas_limit")
                cfg.block_gas_limit = parse_int<uint64_t>(key, value);
            else if (key == "genesis_time_ms")
                cfg.genesis_time_ms = parse_int<int64_t>(key, value);
            else if (key == "hash_algorithm")
                cfg.hash_algorithm = std::string { value };
            else if (key.starts_with("gas."))
                cfg.gas[std::string { key.substr(4) }] = parse_int<uint64_t>(key, value);
            else if (key == "anchor_authority") {
                try {
                    cfg.anchor_authority = fixed_from_hex<20>(value);
                } catch (const error &) {
                    throw error(errc::bad_config, "anchor_authority must be a 20-byte hex address");
                }
            } else
                throw error(errc::bad_config, "unknown key " + std::string { key });
        }
        cfg.validate();
        return cfg;
    }

    chain_config chain_config::load(const std::filesystem::path &path)
    {
        std::ifstream in { path };
        if (!in)
            throw error(errc::bad_config, "cannot read " + path.string());
        std::stringstream ss;
        ss << in.rdbuf();
        return parse(ss.str());
    }
}
