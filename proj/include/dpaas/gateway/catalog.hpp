#pragma once

#include <functional>
#include <map>
#include <string>
#include <vector>
#include <dpaas/gateway/platform.hpp>

namespace dpaas::gateway {
    enum class endpoint_kind { regular, design_pattern };

    struct catalog_entry {
        std::string name;
        std::string method;
        std::string path;          // "/v1/<area>/<name>", "{param}" segments bind path parameters
        endpoint_kind kind = endpoint_kind::regular;
        std::string module;
        std::string operation;

        [[nodiscard]] json to_json() const;
    };

    struct request {
        std::string method;
        std::string path;
        json body = json::object();
    };

    struct response {
        int status = 200;
        json body;
    };

    int http_status(errc code) noexcept;
    json error_body(const error &ex);

    // Routes requests to module operations. The HTTP server and the in-process CLI both
    // go through here, so every transport sees the same results.
    class dispatcher {
    public:
        explicit dispatcher(platform &p);

        response handle(const request &req);
        [[nodiscard]] const std::vector<catalog_entry> &catalog() const noexcept { return _entries; }
        [[nodiscard]] json catalog_json() const;
    private:
        using params = std::map<std::string, std::string>;
        using handler = std::function<json(const params &, const json &)>;

        void add(catalog_entry e, handler h);
        void add_key_routes();
        void add_did_routes();
        void add_credential_routes();
        void add_repository_routes();
        void add_chain_routes();

        json tx_result(const ledger::tx_id &tx, const json &body);

        platform &_p;
        std::vector<catalog_entry> _entries;
        std::vector<handler> _handlers;
    };
}
