#include <thread>
#include <httplib.h>
#include <dpaas/gateway/server.hpp>

namespace dpaas::gateway {
    struct http_server::impl {
        dispatcher &d;
        httplib::Server srv;
        std::thread worker;

        explicit impl(dispatcher &disp): d { disp } {}

        void serve(const httplib::Request &hreq, httplib::Response &hres)
        {
            response res;
            request req { hreq.method, hreq.path };
            try {
                if (!hreq.body.empty())
                    req.body = json::parse(hreq.body);
                res = d.handle(req);
            } catch (const json::exception &ex) {
                res = { 400, error_body(error { errc::bad_request, std::string { "body is not JSON: " } + ex.what() }) };
            }
            hres.status = res.status;
            hres.set_content(res.body.dump(), "application/json");
        }
    };

    http_server::http_server(dispatcher &d, std::string host, uint16_t port):
        _impl { std::make_unique<impl>(d) }, _host { std::move(host) }, _port { port }
    {
        auto h = [this](const httplib::Request &req, httplib::Response &res) { _impl->serve(req, res); };
        // httplib's default adds SO_REUSEPORT, which would let a second server share a busy port.
        _impl->srv.set_socket_options([](socket_t sock) {
            int yes = 1;
            ::setsockopt(sock, SOL_SOCKET, SO_REUSEADDR, &yes, sizeof(yes));
        });
        _impl->srv.Get(".*", h);
        _impl->srv.Post(".*", h);
        _impl->srv.Put(".*", h);
        _impl->srv.Delete(".*", h);
    }

    http_server::~http_server()
    {
        stop();
    }

    void http_server::start()
    {
        if (_port == 0) {
            const int p = _impl->srv.bind_to_any_port(_host);
            if (p <= 0)
                throw error(errc::bind_failure, "cannot bind " + _host);
            _port = static_cast<uint16_t>(p);
        } else if (!_impl->srv.bind_to_port(_host, _port)) {
            throw error(errc::bind_failure, "cannot bind " + _host + ":" + std::to_string(_port));
        }
        _impl->worker = std::thread { [this] { _impl->srv.listen_after_bind(); } };
        _impl->srv.wait_until_ready();
    }

    void http_server::stop()
    {
        if (!_impl)
            return;
        _impl->srv.stop();
        if (_impl->worker.joinable())
            _impl->worker.join();
    }

    void http_server::wait()
    {
        if (_impl->worker.joinable())
            _impl->worker.join();
    }

    response remote_call(const std::string &base_url, const request &req)
    {
        httplib::Client cli { base_url };
        cli.set_read_timeout(600, 0);
        httplib::Result r;
        if (req.method == "GET")
            r = cli.Get(req.path);
        else if (req.method == "POST")
            r = cli.Post(req.path, req.body.dump(), "application/json");
        else if (req.method == "PUT")
            r = cli.Put(req.path, req.body.dump(), "application/json");
        else if (req.method == "DELETE")
            r = cli.Delete(req.path);
        else
            throw error(errc::bad_request, "unsupported method " + req.method);
        if (!r)
            throw error(errc::io_error, "request to " + base_url + " failed: " + httplib::to_string(r.error()));
        try {
            return { r->status, json::parse(r->body) };
        } catch (const json::exception &ex) {
            throw error(errc::io_error, std::string { "server returned non-JSON body: " } + ex.what());
        }
    }
}
