#include <dpaas/gateway/bench.hpp>
#include <dpaas/gateway/catalog.hpp>

namespace dpaas::gateway {
    namespace {
        std::vector<std::string> split_path(std::string_view path)
        {
            std::vector<std::string> out;
            size_t pos = 0;
            while (pos < path.size()) {
                const auto next = path.find('/', pos);
                const auto end = next == std::string_view::npos ? path.size() : next;
                if (end > pos)
                    out.emplace_back(path.substr(pos, end - pos));
                pos = end + 1;
            }
            return out;
        }

        bool match(const std::string &pattern, const std::string &path, std::map<std::string, std::string> &params)
        {
            const auto want = split_path(pattern);
            const auto got = split_path(path);
            if (want.size() != got.size())
                return false;
            std::map<std::string, std::string> bound;
            for (size_t i = 0; i < want.size(); ++i) {
                if (want[i].starts_with('{') && want[i].ends_with('}'))
                    bound[want[i].substr(1, want[i].size() - 2)] = got[i];
                else if (want[i] != got[i])
                    return false;
            }
            params = std::move(bound);
            return true;
        }

        const json &field(const json &body, const char *name)
        {
            if (!body.is_object() || !body.contains(name))
                throw error(errc::bad_request, std::string { "missing field " } + name);
            return body.at(name);
        }

        template <typename T>
        T get(const json &body, const char *name)
        {
            try {
                return field(body, name).get<T>();
            } catch (const json::exception &) {
                throw error(errc::bad_request, std::string { "wrong type for field " } + name);
            }
        }

        template <typename T>
        T get_or(const json &body, const char *name, T fallback)
        {
            if (!body.is_object() || !body.contains(name))
                return fallback;
            return get<T>(body, name);
        }

        did::identifier did_field(const json &body, const char *name)
        {
            return did::identifier::parse(get<std::string>(body, name));
        }

        digest digest_of(std::string_view hex, const char *what)
        {
            try {
                return fixed_from_hex<32>(hex);
            } catch (const error &) {
                throw error(errc::bad_request, std::string { what } + " must be 64 hex characters");
            }
        }

        keyvault::key_id key_field(const json &body, const char *name)
        {
            return digest_of(get<std::string>(body, name), name);
        }

        json receipt_result(const ledger::receipt &r)
        {
            return json { { "tx", to_hex(r.id) }, { "receipt", r.to_json() } };
        }

        const char *outcome_name(did::vote_outcome o)
        {
            return o == did::vote_outcome::executed ? "executed" : "pending";
        }

        bool reserved_repository(std::string_view id)
        {
            return id == offchain::credentials_repository || id == offchain::issuers_repository || id.starts_with("issuer:");
        }
    }

    json catalog_entry::to_json() const
    {
        return json {
            { "name", name },
            { "method", method },
            { "path", path },
            { "kind", kind == endpoint_kind::design_pattern ? "design_pattern" : "regular" },
            { "module", module },
            { "operation", operation },
        };
    }

    int http_status(errc code) noexcept
    {
        switch (code) {
        case errc::not_found: case errc::unknown_account: case errc::unknown_key: case errc::unknown_did:
        case errc::unknown_issuer: case errc::unknown_credential: case errc::unknown_repository:
        case errc::unknown_anchor: case errc::unknown_proposal: case errc::unknown_contract:
        case errc::unknown_operation:
            return 404;
        case errc::bad_signature: case errc::not_owner: case errc::not_delegate: case errc::not_super:
        case errc::not_issuer: case errc::not_holder: case errc::untrusted_issuer: case errc::wrong_passphrase:
        case errc::not_anchor_authority:
            return 403;
        case errc::already_registered: case errc::duplicate_account: case errc::already_issuer:
        case errc::anchor_exists: case errc::already_voted: case errc::proposal_closed: case errc::revoked:
        case errc::deleted_key: case errc::cancelled: case errc::consumed_token:
            return 409;
        case errc::io_error: case errc::corrupt_log:
            return 500;
        default:
            return 400;
        }
    }

    json error_body(const error &ex)
    {
        return json { { "code", to_string(ex.code()) }, { "message", ex.what() }, { "detail", ex.detail() } };
    }

    dispatcher::dispatcher(platform &p): _p { p }
    {
        add_key_routes();
        add_did_routes();
        add_credential_routes();
        add_repository_routes();
        add_chain_routes();
    }

    void dispatcher::add(catalog_entry e, handler h)
    {
        _entries.push_back(std::move(e));
        _handlers.push_back(std::move(h));
    }

    json dispatcher::catalog_json() const
    {
        json entries = json::array();
        size_t patterns = 0;
        for (const auto &e: _entries) {
            entries.push_back(e.to_json());
            patterns += e.kind == endpoint_kind::design_pattern;
        }
        return json { { "design_patterns", patterns }, { "endpoints", std::move(entries) } };
    }

    response dispatcher::handle(const request &req)
    {
        bool path_known = false;
        for (size_t i = 0; i < _entries.size(); ++i) {
            params ps;
            if (!match(_entries[i].path, req.path, ps))
                continue;
            path_known = true;
            if (_entries[i].method != req.method)
                continue;
            try {
                return { 200, _handlers[i](ps, req.body.is_null() ? json::object() : req.body) };
            } catch (const error &ex) {
                return { http_status(ex.code()), error_body(ex) };
            } catch (const json::exception &ex) {
                return { 400, error_body(error { errc::bad_request, ex.what() }) };
            } catch (const std::exception &ex) {
                return { 500, error_body(error { errc::io_error, ex.what() }) };
            }
        }
        const auto detail = path_known
            ? "method " + req.method + " not supported on " + req.path
            : "no endpoint " + req.method + " " + req.path + "; GET /v1/catalog lists the available endpoints";
        return { path_known ? 405 : 404, error_body(error { errc::not_found, detail }) };
    }

    json dispatcher::tx_result(const ledger::tx_id &tx, const json &body)
    {
        if (!get_or<bool>(body, "wait", true))
            return json { { "tx", to_hex(tx) }, { "status", "pending" } };
        return receipt_result(_p.dids().confirm(tx));
    }

    void dispatcher::add_key_routes()
    {
        auto &v = _p.vault();
        const auto pattern = endpoint_kind::design_pattern;
        const auto regular = endpoint_kind::regular;

        add({ "master-sub-key-generation", "POST", "/v1/key/master-sub-key-generation", pattern, "keyvault", "derive_sub_key" },
            [&v](const params &, const json &b) {
                if (!b.contains("master_key_id"))
                    return json { { "master", v.create_master().to_json() } };
                const auto master = key_field(b, "master_key_id");
                const auto sub = b.contains("index") ? v.derive_sub_key(master, get<uint64_t>(b, "index"))
                                                     : v.derive_next_sub_key(master);
                return json { { "master", v.info(master).to_json() }, { "sub", v.info(sub.id()).to_json() } };
            });
        add({ "shard-distribution", "POST", "/v1/key/shard-distribution", pattern, "keyvault", "shard_distribute" },
            [&v](const params &, const json &b) {
                const auto shards = v.shard_key(key_field(b, "key_id"), get<unsigned>(b, "total"), get<unsigned>(b, "threshold"));
                json out = json::array();
                for (const auto &s: shards)
                    out.push_back(s.to_json());
                return json { { "shards", std::move(out) } };
            });
        add({ "shard-combination", "POST", "/v1/key/shard-combination", pattern, "keyvault", "shard_combine" },
            [&v](const params &, const json &b) {
                std::vector<keyvault::shard> shards;
                for (const auto &s: field(b, "shards"))
                    shards.push_back(keyvault::shard::from_json(s));
                return json { { "key", v.recover(shards).to_json() } };
            });
        add({ "hot-cold-wallet-storage", "POST", "/v1/key/hot-cold-wallet-storage", pattern, "keyvault", "store_hot/export_cold" },
            [&v](const params &, const json &b) {
                const auto action = get<std::string>(b, "action");
                if (action == "store-hot") {
                    const auto kdf = get_or<std::string>(b, "kdf", "interactive") == "minimal"
                        ? keyvault::kdf_params::minimal() : keyvault::kdf_params::interactive();
                    const auto rec = v.store_hot(key_field(b, "key_id"), get<std::string>(b, "passphrase"), kdf);
                    return json { { "keystore", rec.to_text() } };
                }
                if (action == "load-hot") {
                    const auto rec = keyvault::keystore_record::from_text(get<std::string>(b, "keystore"));
                    return json { { "key", v.load_hot(rec, get<std::string>(b, "passphrase")).to_json() } };
                }
                if (action == "export-cold")
                    return json { { "export", v.export_cold(key_field(b, "key_id")).to_string() } };
                if (action == "import-cold") {
                    const auto exp = keyvault::cold_export::parse(get<std::string>(b, "export"));
                    return json { { "key", v.import_cold(exp).to_json() } };
                }
                throw error(errc::bad_request, "action must be store-hot, load-hot, export-cold or import-cold");
            });
        add({ "key-deletion", "POST", "/v1/key/key-deletion", pattern, "keyvault", "delete_key" },
            [&v](const params &, const json &b) {
                const auto id = key_field(b, "key_id");
                v.delete_key(id);
                return json { { "key", v.info(id).to_json() } };
            });

        add({ "key-generate", "POST", "/v1/key/generate", regular, "keyvault", "generate_keypair" },
            [&v](const params &, const json &b) {
                return (get_or<bool>(b, "master", false) ? v.create_master() : v.generate()).to_json();
            });
        add({ "key-list", "GET", "/v1/key", regular, "keyvault", "list" },
            [&v](const params &, const json &) {
                json out = json::array();
                for (const auto &k: v.list())
                    out.push_back(k.to_json());
                return json { { "keys", std::move(out) } };
            });
        add({ "key-info", "GET", "/v1/key/{id}", regular, "keyvault", "info" },
            [&v](const params &ps, const json &) { return v.info(digest_of(ps.at("id"), "key id")).to_json(); });
    }

    void dispatcher::add_did_routes()
    {
        auto &dids = _p.dids();
        auto &v = _p.vault();
        const auto pattern = endpoint_kind::design_pattern;

        add({ "registration", "POST", "/v1/did/registration", pattern, "did", "register" },
            [this, &dids, &v](const params &, const json &b) {
                std::optional<did::document> ddo;
                if (b.contains("ddo"))
                    ddo = did::document::from_json(b.at("ddo"));
                const auto reg = dids.register_did(v.get(key_field(b, "key_id")), ddo);
                auto out = tx_result(reg.tx, b);
                out["did"] = reg.id.str();
                return out;
            });
        add({ "multiple-registration", "POST", "/v1/did/multiple-registration", pattern, "did", "register_multiple" },
            [this, &dids, &v](const params &, const json &b) {
                const auto master = key_field(b, "master_key_id");
                const auto count = get<size_t>(b, "count");
                if (count == 0)
                    throw error(errc::bad_request, "count must be positive");
                did::document tmpl;
                if (b.contains("template"))
                    tmpl = did::document::from_json(b.at("template"));
                std::vector<keyvault::key_pair> keys;
                for (size_t i = 0; i < count; ++i)
                    keys.push_back(v.derive_next_sub_key(master));
                const auto regs = dids.register_keys(keys, tmpl);
                json out = json::array();
                for (size_t i = 0; i < regs.size(); ++i) {
                    auto r = tx_result(regs[i].tx, b);
                    r["did"] = regs[i].id.str();
                    r["key_id"] = to_hex(keys[i].id());
                    out.push_back(std::move(r));
                }
                return json { { "registrations", std::move(out) } };
            });
        add({ "bound-with-social-media", "POST", "/v1/did/bound-with-social-media", pattern, "did", "bind_social" },
            [this, &dids, &v](const params &, const json &b) {
                return tx_result(dids.bind_social_media(did_field(b, "did"), get<std::string>(b, "platform"),
                    get<std::string>(b, "uri"), v.get(key_field(b, "key_id"))), b);
            });
        add({ "resolution", "GET", "/v1/did/resolution/{did}", pattern, "did", "resolve" },
            [&dids](const params &ps, const json &) {
                return dids.resolve(did::identifier::parse(ps.at("did"))).to_json();
            });
        add({ "dual-resolution", "POST", "/v1/did/dual-resolution", pattern, "did", "dual_resolve" },
            [&dids](const params &, const json &b) {
                const auto r = dids.dual_resolve(did_field(b, "first"), did_field(b, "second"));
                return json { { "height", r.height }, { "first", r.first.to_json() }, { "second", r.second.to_json() } };
            });
        add({ "update", "POST", "/v1/did/update", pattern, "did", "update" },
            [this, &dids, &v](const params &, const json &b) {
                return tx_result(dids.update(did_field(b, "did"), did::document::from_json(field(b, "ddo")),
                    v.get(key_field(b, "key_id"))), b);
            });
        add({ "update-by-delegates", "POST", "/v1/did/update-by-delegates", pattern, "did", "propose/vote" },
            [this, &dids, &v](const params &, const json &b) {
                const auto action = get<std::string>(b, "action");
                const auto delegate = did_field(b, "delegate");
                const auto key = v.get(key_field(b, "key_id"));
                ledger::tx_id tx {};
                if (action == "propose") {
                    const auto new_key = fixed_from_hex<32>(get<std::string>(b, "new_key"));
                    tx = dids.propose_key_update(did_field(b, "did"), new_key, delegate, key);
                } else if (action == "vote") {
                    tx = dids.vote_key_update(digest_of(get<std::string>(b, "proposal_id"), "proposal_id"), delegate, key);
                } else {
                    throw error(errc::bad_request, "action must be propose or vote");
                }
                auto out = tx_result(tx, b);
                if (out.contains("receipt")) {
                    const auto o = did::service::outcome_of(*_p.chain().find_receipt(tx));
                    out["proposal_id"] = to_hex(o.proposal_id);
                    out["outcome"] = outcome_name(o.outcome);
                }
                return out;
            });
        add({ "revocation", "POST", "/v1/did/revocation", pattern, "did", "revoke" },
            [this, &dids, &v](const params &, const json &b) {
                return tx_result(dids.revoke(did_field(b, "did"), v.get(key_field(b, "key_id"))), b);
            });

        add({ "did-delegates", "POST", "/v1/did/delegates", endpoint_kind::regular, "did", "set_delegates" },
            [this, &dids, &v](const params &, const json &b) {
                std::vector<did::identifier> delegates;
                for (const auto &d: field(b, "delegates"))
                    delegates.push_back(did::identifier::parse(d.get<std::string>()));
                return tx_result(dids.add_delegates(did_field(b, "did"), delegates, v.get(key_field(b, "key_id"))), b);
            });
        add({ "did-entry", "GET", "/v1/did/entry/{did}", endpoint_kind::regular, "did", "entry" },
            [&dids](const params &ps, const json &) { return dids.entry(did::identifier::parse(ps.at("did"))).to_json(); });
    }

    void dispatcher::add_credential_routes()
    {
        auto &creds = _p.credentials();
        auto &issuers = _p.issuers();
        auto &v = _p.vault();
        const auto pattern = endpoint_kind::design_pattern;
        using credential::credential_service;

        add({ "issuer-signup", "POST", "/v1/credential/issuer-signup", pattern, "credential", "issuer_signup" },
            [&issuers, &v](const params &, const json &b) {
                const auto issuer = did_field(b, "issuer");
                const auto sig = v.sign(key_field(b, "approver_key_id"), credential::issuer_registry::signup_message(issuer));
                return issuers.signup(issuer, sig).to_json();
            });
        add({ "issuer-update", "POST", "/v1/credential/issuer-update", pattern, "credential", "issuer_update" },
            [&issuers, &v](const params &, const json &b) {
                const auto issuer = did_field(b, "issuer");
                const auto status = credential::issuer_status_from_string(get<std::string>(b, "status"));
                const auto cur = issuers.find(issuer);
                const auto msg = credential::issuer_registry::update_message(issuer, status, cur ? cur->version : 0);
                return issuers.update(issuer, status, v.sign(key_field(b, "approver_key_id"), msg)).to_json();
            });
        add({ "selective-content-generation", "POST", "/v1/credential/selective-content-generation", pattern, "credential",
                "generate_selective_credential" },
            [&creds, &v](const params &, const json &b) {
                const auto issued = creds.generate_selective_credential(did_field(b, "issuer"), did_field(b, "holder"),
                    get<std::vector<std::string>>(b, "attributes"), v.get(key_field(b, "key_id")),
                    get_or<std::string>(b, "schema", ""));
                return json { { "credential", issued.cred.to_json() }, { "token", issued.token.to_json() } };
            });
        add({ "time-constrained-access", "POST", "/v1/credential/time-constrained-access", pattern, "credential",
                "grant_time_constrained" },
            [&creds, &v](const params &, const json &b) {
                const auto id = digest_of(get<std::string>(b, "credential_id"), "credential_id");
                const auto nbf = get<int64_t>(b, "nbf");
                const auto exp = get<int64_t>(b, "exp");
                const auto sig = v.sign(key_field(b, "key_id"), credential_service::grant_message(id, nbf, exp, false));
                return creds.grant_time_constrained(id, nbf, exp, sig).to_json();
            });
        add({ "one-off-access", "POST", "/v1/credential/one-off-access", pattern, "credential", "grant_one_off" },
            [&creds, &v](const params &, const json &b) {
                const auto id = digest_of(get<std::string>(b, "credential_id"), "credential_id");
                const auto exp = get<int64_t>(b, "exp");
                const auto sig = v.sign(key_field(b, "key_id"), credential_service::grant_message(id, creds.now(), exp, true));
                return creds.grant_one_off(id, exp, sig).to_json();
            });
        add({ "verification", "POST", "/v1/credential/verification", pattern, "credential", "verify" },
            [&creds](const params &, const json &b) {
                const auto cred = credential::credential::from_json(field(b, "credential"));
                const auto token = get<std::string>(b, "token");
                const auto at = get_or<int64_t>(b, "at", creds.now());
                return creds.verify(cred, token, at).to_json();
            });
        add({ "cancellation", "POST", "/v1/credential/cancellation", pattern, "credential", "cancel" },
            [&creds, &v](const params &, const json &b) {
                const auto id = digest_of(get<std::string>(b, "credential_id"), "credential_id");
                const auto rec = creds.record(id);
                if (!rec)
                    throw error(errc::unknown_credential, to_hex(id));
                creds.cancel(id, v.sign(key_field(b, "key_id"), credential_service::cancel_message(id)));
                return json { { "credential_id", to_hex(id) }, { "status", "cancelled" } };
            });

        auto &facts = _p.facts();
        add({ "credential-attributes", "POST", "/v1/credential/attributes", endpoint_kind::regular, "offchain", "put_attributes" },
            [&facts, &v](const params &, const json &b) {
                const auto issuer = did_field(b, "issuer");
                const auto holder = did_field(b, "holder");
                const auto attrs = get<offchain::attribute_map>(b, "attributes");
                const auto sig = v.sign(key_field(b, "key_id"), offchain::identity_fact_store::put_message(issuer, holder, attrs));
                facts.put_attributes(issuer, holder, attrs, sig);
                return json { { "issuer", issuer.str() }, { "holder", holder.str() }, { "attributes", facts.attributes(issuer, holder) } };
            });
        add({ "credential-record", "GET", "/v1/credential/record/{id}", endpoint_kind::regular, "credential", "record" },
            [&creds](const params &ps, const json &) {
                const auto rec = creds.record(digest_of(ps.at("id"), "credential id"));
                if (!rec)
                    throw error(errc::unknown_credential, ps.at("id"));
                return rec->to_json();
            });
        add({ "issuer-record", "GET", "/v1/credential/issuer/{did}", endpoint_kind::regular, "credential", "issuer" },
            [&issuers](const params &ps, const json &) {
                const auto id = did::identifier::parse(ps.at("did"));
                const auto rec = issuers.find(id);
                if (!rec)
                    throw error(errc::unknown_issuer, id.str());
                return rec->to_json();
            });
    }

    void dispatcher::add_repository_routes()
    {
        auto &anchors = _p.anchors();
        auto &repos = _p.repos();

        add({ "anchoring-to-blockchain", "POST", "/v1/repository/anchoring-to-blockchain", endpoint_kind::design_pattern,
                "offchain", "anchor" },
            [&anchors](const params &, const json &b) {
                const auto id = get<std::string>(b, "repository_id");
                if (get_or<bool>(b, "wait", true))
                    return anchors.anchor(id).to_json();
                const auto p = anchors.submit_anchor(id);
                return json { { "repository_id", p.repository_id }, { "epoch", p.epoch }, { "root", to_hex(p.root) },
                    { "tx", to_hex(p.tx) }, { "status", "pending" } };
            });
        add({ "repository-put", "POST", "/v1/repository/put", endpoint_kind::regular, "offchain", "put" },
            [&repos](const params &, const json &b) {
                const auto id = get<std::string>(b, "repository_id");
                if (reserved_repository(id))
                    throw error(errc::bad_request, id + " is written only through its service endpoints");
                auto &repo = repos.open(id);
                repo.put(get<std::string>(b, "key"), field(b, "value"));
                return json { { "repository_id", id }, { "size", repo.size() }, { "root", to_hex(repo.root()) } };
            });
        add({ "repository-digest", "GET", "/v1/repository/digest/{id}", endpoint_kind::regular, "offchain", "repository_digest" },
            [&repos](const params &ps, const json &) {
                const auto &repo = repos.at(ps.at("id"));
                return json { { "repository_id", repo.id() }, { "size", repo.size() }, { "root", to_hex(repo.root()) } };
            });
        add({ "repository-integrity", "POST", "/v1/repository/integrity", endpoint_kind::regular, "offchain", "verify_integrity" },
            [&anchors](const params &, const json &b) {
                return anchors.verify_integrity(get<std::string>(b, "repository_id"), get<uint64_t>(b, "epoch")).to_json();
            });
        add({ "repository-anchors", "GET", "/v1/repository/anchors/{id}", endpoint_kind::regular, "offchain", "epochs" },
            [&anchors](const params &ps, const json &) {
                json out = json::array();
                const auto n = anchors.epochs(ps.at("id"));
                for (uint64_t e = 0; e < n; ++e)
                    if (const auto a = anchors.find(ps.at("id"), e))
                        out.push_back(a->to_json());
                return json { { "repository_id", ps.at("id") }, { "anchors", std::move(out) } };
            });
    }

    void dispatcher::add_chain_routes()
    {
        auto &chain = _p.chain();
        const auto regular = endpoint_kind::regular;

        add({ "chain-status", "GET", "/v1/chain/status", regular, "ledger", "status" },
            [this, &chain](const params &, const json &) {
                return json {
                    { "height", chain.height() },
                    { "now_ms", chain.now_ms() },
                    { "pending", chain.pending_count() },
                    { "state_digest", to_hex(chain.state_digest()) },
                    { "config_digest", to_hex(chain.config().hash()) },
                    { "super_key_id", to_hex(_p.super_key().id()) },
                    { "anchor_key_id", to_hex(_p.anchor_key().id()) },
                };
            });
        add({ "chain-produce-block", "POST", "/v1/chain/produce-block", regular, "ledger", "produce_block" },
            [&chain](const params &, const json &b) {
                const auto count = get_or<uint64_t>(b, "count", 1);
                json blocks = json::array();
                for (uint64_t i = 0; i < count; ++i)
                    blocks.push_back(chain.produce_block().summary());
                return json { { "blocks", std::move(blocks) } };
            });
        add({ "chain-receipt", "GET", "/v1/chain/receipt/{tx}", regular, "ledger", "find_receipt" },
            [&chain](const params &ps, const json &) {
                const auto id = digest_of(ps.at("tx"), "tx id");
                if (const auto r = chain.find_receipt(id))
                    return r->to_json();
                if (chain.is_pending(id))
                    return json { { "tx", ps.at("tx") }, { "status", "pending" } };
                throw error(errc::not_found, "no transaction " + ps.at("tx"));
            });
        add({ "chain-block", "GET", "/v1/chain/block/{height}", regular, "ledger", "block_at" },
            [&chain](const params &ps, const json &) {
                uint64_t h = 0;
                try {
                    h = std::stoull(ps.at("height"));
                } catch (const std::exception &) {
                    throw error(errc::bad_request, "height must be a number");
                }
                return chain.block_at(h).summary();
            });
        add({ "catalog", "GET", "/v1/catalog", regular, "gateway", "catalog" },
            [this](const params &, const json &) { return catalog_json(); });
        add({ "bench", "POST", "/v1/bench", regular, "gateway", "bench" },
            [this](const params &, const json &b) {
                std::vector<std::string> ops;
                if (b.contains("operations"))
                    ops = get<std::vector<std::string>>(b, "operations");
                else
                    ops.push_back(get<std::string>(b, "operation"));
                auto cfg = _p.config();
                cfg.storage.reset();
                const auto reports = run_bench(cfg, ops, get_or<size_t>(b, "batch_size", 20), get_or<double>(b, "duration", 60.0),
                    get_or<uint64_t>(b, "seed", 1));
                json out = json::array();
                for (const auto &r: reports)
                    out.push_back(r.to_json());
                return json { { "reports", std::move(out) } };
            });
    }
}
