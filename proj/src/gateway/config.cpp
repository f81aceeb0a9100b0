#include <charconv>
#include <cstdlib>
#include <fstream>
#include <sstream>
#include <dpaas/common/codec.hpp>
#include <dpaas/gateway/config.hpp>

namespace dpaas::gateway {
    void platform_config::set_bind(std::string_view host_port)
    {
        const auto colon = host_port.rfind(':');
        if (colon == std::string_view::npos)
            throw error(errc::bad_config, "bind address must be host:port: " + std::string { host_port });
        const auto port_text = host_port.substr(colon + 1);
        unsigned port = 0;
        const auto [end, ec] = std::from_chars(port_text.data(), port_text.data() + port_text.size(), port);
        if (ec != std::errc {} || end != port_text.data() + port_text.size() || port > 65535)
            throw error(errc::bad_config, "bad port in bind address: " + std::string { host_port });
        bind_host = std::string { host_port.substr(0, colon) };
        bind_port = static_cast<uint16_t>(port);
    }

    void platform_config::apply_env()
    {
        if (const char *s = std::getenv("DPAAS_STORAGE"); s && *s)
            storage = s;
        if (const char *b = std::getenv("DPAAS_BIND"); b && *b)
            set_bind(b);
    }

    platform_config platform_config::parse(std::string_view json_text)
    {
        platform_config cfg;
        try {
            const auto j = json::parse(json_text);
            if (!j.is_object())
                throw error(errc::bad_config, "config must be a JSON object");
            if (const auto c = j.find("chain"); c != j.end()) {
                auto &chain = cfg.chain;
                chain.block_interval_ms = c->value("block_interval_ms", chain.block_interval_ms);
                chain.block_gas_limit = c->value("block_gas_limit", chain.block_gas_limit);
                chain.genesis_time_ms = c->value("genesis_time_ms", chain.genesis_time_ms);
                if (const auto g = c->find("gas"); g != c->end()) {
                    for (const auto &[k, v]: g->items()) {
                        if (!chain.gas.contains(k))
                            throw error(errc::bad_config, "unknown gas entry: " + k);
                        chain.gas[k] = v.get<uint64_t>();
                    }
                }
            }
            if (const auto k = j.find("platform_keys"); k != j.end()) {
                if (k->contains("super"))
                    cfg.super_key = k->at("super").get<std::string>();
                if (k->contains("anchor"))
                    cfg.anchor_key = k->at("anchor").get<std::string>();
            }
            if (const auto a = j.find("anchoring"); a != j.end()) {
                cfg.anchoring_period = a->value("period", cfg.anchoring_period);
                cfg.anchored_repositories = a->value("repositories", cfg.anchored_repositories);
            }
            if (j.contains("storage"))
                cfg.storage = j.at("storage").get<std::string>();
            if (j.contains("bind"))
                cfg.set_bind(j.at("bind").get<std::string>());
            cfg.delivery_window_s = j.value("delivery_window_s", cfg.delivery_window_s);
        } catch (const json::exception &ex) {
            throw error(errc::bad_config, ex.what());
        }
        cfg.chain.validate();
        if (cfg.delivery_window_s <= 0)
            throw error(errc::bad_config, "delivery_window_s must be positive");
        return cfg;
    }

    platform_config platform_config::load(const std::filesystem::path &path)
    {
        std::ifstream in { path };
        if (!in)
            throw error(errc::bad_config, "cannot read " + path.string());
        std::stringstream ss;
        ss << in.rdbuf();
        return parse(ss.str());
    }
}
