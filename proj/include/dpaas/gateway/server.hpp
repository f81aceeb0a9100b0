#pragma once

#include <memory>
#include <string>
#include <dpaas/gateway/catalog.hpp>

namespace dpaas::gateway {
    // HTTP front end for a dispatcher. Bodies are JSON both ways; errors carry
    // {code, message, detail} with a status derived from the code.
    class http_server {
    public:
        http_server(dispatcher &d, std::string host, uint16_t port);
        ~http_server();

        http_server(const http_server &) = delete;
        http_server &operator=(const http_server &) = delete;

        // Binds (port 0 picks a free port) and serves on a background thread.
        // Throws error(bind_failure) when the address is unavailable.
        void start();
        void stop();
        // Blocks until stop() is called from another thread.
        void wait();
        [[nodiscard]] uint16_t port() const noexcept { return _port; }
        [[nodiscard]] const std::string &host() const noexcept { return _host; }
    private:
        struct impl;
        std::unique_ptr<impl> _impl;
        std::string _host;
        uint16_t _port;
    };

    // Sends one request to a running server at `base_url` ("http://host:port").
    response remote_call(const std::string &base_url, const request &req);
}
