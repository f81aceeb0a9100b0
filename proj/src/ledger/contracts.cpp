#include <dpaas/did/messages.hpp>
#include <dpaas/ledger/contracts.hpp>

namespace dpaas::ledger {
    namespace {
        std::string_view to_string(did_status s)
        {
            return s == did_status::active ? "active" : "revoked";
        }

        std::string_view to_string(proposal_status s)
        {
            switch (s) {
                case proposal_status::open: return "open";
                case proposal_status::executed: return "executed";
                case proposal_status::closed: return "closed";
            }
            return "unknown";
        }

        proposal_status proposal_status_from(const std::string &s)
        {
            if (s == "open") return proposal_status::open;
            if (s == "executed") return proposal_status::executed;
            if (s == "closed") return proposal_status::closed;
            throw error(errc::bad_encoding, "unknown proposal status " + s);
        }

        std::string arg_string(const json &args, const char *name)
        {
            const auto it = args.find(name);
            if (it == args.end() || !it->is_string())
                throw error(errc::malformed_call, std::string { "missing string argument " } + name);
            return it->get<std::string>();
        }

        did::identifier arg_did(const json &args, const char *name)
        {
            const auto text = arg_string(args, name);
            if (!did::identifier::valid(text))
                throw error(errc::malformed_call, "bad DID in " + std::string { name } + ": " + text);
            return did::identifier::parse(text);
        }

        signature arg_signature(const json &args)
        {
            try {
                return signature::from_string(arg_string(args, "signature"));
            } catch (const error &ex) {
                throw error(errc::malformed_call, ex.what());
            }
        }

        template <size_t N>
        std::array<uint8_t, N> arg_fixed_hex(const json &args, const char *name)
        {
            try {
                return fixed_from_hex<N>(arg_string(args, name));
            } catch (const error &ex) {
                throw error(errc::malformed_call, std::string { name } + ": " + ex.what());
            }
        }

        digest proposal_id_of(const did::identifier &id, const verifying_key &new_key, uint64_t height)
        {
            encoder enc;
            enc.str(id.str()).blob(new_key).u64(height);
            return sha256(enc.data());
        }
    }

    verifying_key registry_entry::key_at(int64_t time_ms) const
    {
        verifying_key k = key_history.empty() ? owner_key : key_history.front().key;
        for (const auto &r: key_history)
            if (r.since_ms <= time_ms)
                k = r.key;
        return k;
    }

    json registry_entry::to_json() const
    {
        json dels = json::array();
        for (const auto &d: delegates)
            dels.push_back(d.str());
        json history = json::array();
        for (const auto &r: key_history)
            history.push_back({ { "key", to_hex(r.key) }, { "since_ms", r.since_ms }, { "since_height", r.since_height } });
        return json {
            { "did", id.str() },
            { "ddo", ddo ? ddo->to_json() : json {} },
            { "owner_key", to_hex(owner_key) },
            { "status", to_string(status) },
            { "registered_at", registered_at },
            { "version", version },
            { "delegates", std::move(dels) },
            { "key_history", std::move(history) },
        };
    }

    registry_entry registry_entry::from_json(const json &j)
    {
        registry_entry e;
        e.id = did::identifier::parse(j.at("did").get<std::string>());
        if (!j.at("ddo").is_null())
            e.ddo = did::document::from_json(j.at("ddo"));
        e.owner_key = fixed_from_hex<32>(j.at("owner_key").get<std::string>());
        e.status = j.at("status").get<std::string>() == "active" ? did_status::active : did_status::revoked;
        e.registered_at = j.at("registered_at").get<uint64_t>();
        e.version = j.at("version").get<uint64_t>();
        for (const auto &d: j.at("delegates"))
            e.delegates.push_back(did::identifier::parse(d.get<std::string>()));
        for (const auto &r: j.at("key_history"))
            e.key_history.push_back({ fixed_from_hex<32>(r.at("key").get<std::string>()),
                r.at("since_ms").get<int64_t>(), r.at("since_height").get<uint64_t>() });
        return e;
    }

    json key_update_proposal::to_json() const
    {
        json v = json::array();
        for (const auto &d: votes)
            v.push_back(d.str());
        return json {
            { "proposal_id", to_hex(id) },
            { "did", target.str() },
            { "new_key", to_hex(new_key) },
            { "votes", std::move(v) },
            { "created_at", created_at },
            { "status", to_string(status) },
        };
    }

    key_update_proposal key_update_proposal::from_json(const json &j)
    {
        key_update_proposal p;
        p.id = fixed_from_hex<32>(j.at("proposal_id").get<std::string>());
        p.target = did::identifier::parse(j.at("did").get<std::string>());
        p.new_key = fixed_from_hex<32>(j.at("new_key").get<std::string>());
        for (const auto &d: j.at("votes"))
            p.votes.insert(did::identifier::parse(d.get<std::string>()));
        p.created_at = j.at("created_at").get<uint64_t>();
        p.status = proposal_status_from(j.at("status").get<std::string>());
        return p;
    }

    json anchor_entry::to_json() const
    {
        return json {
            { "repository_id", repository_id },
            { "epoch", epoch },
            { "digest", to_hex(root) },
            { "anchored_at", anchored_at },
        };
    }

    anchor_entry anchor_entry::from_json(const json &j)
    {
        return { j.at("repository_id").get<std::string>(), j.at("epoch").get<uint64_t>(),
            fixed_from_hex<32>(j.at("digest").get<std::string>()), j.at("anchored_at").get<uint64_t>() };
    }

    bytes make_query(std::string_view op, const json &args)
    {
        encoder enc;
        enc.str(op).str(canonical_json(args));
        return enc.take();
    }

    query_result parse_query_result(byte_view encoded)
    {
        decoder dec { encoded, errc::malformed_query };
        query_result r;
        r.found = dec.str() == "ok";
        r.value = json::parse(dec.str());
        dec.expect_done();
        return r;
    }

    exec_result contract_state::execute(std::string_view target, const contract_call &call, const exec_context &ctx)
    {
        try {
            if (!call.args.is_object())
                throw error(errc::malformed_call, "arguments must be an object");
            if (target == did_registry) {
                if (call.op == "register") return register_did(call.args, ctx);
                if (call.op == "update") return update(call.args, ctx);
                if (call.op == "bind_social") return bind_social(call.args, ctx);
                if (call.op == "set_delegates") return set_delegates(call.args, ctx);
                if (call.op == "propose") return propose(call.args, ctx);
                if (call.op == "vote") return vote(call.args, ctx);
                if (call.op == "revoke") return revoke(call.args, ctx);
                throw error(errc::malformed_call, "unknown registry operation " + call.op);
            }
            if (target == anchoring_registry) {
                if (call.op == "anchor") return write_anchor(call.args, ctx);
                throw error(errc::malformed_call, "unknown anchoring operation " + call.op);
            }
            throw error(errc::unknown_contract, std::string { target });
        } catch (const error &ex) {
            return { ex.code(), ex.detail(), {} };
        } catch (const json::exception &ex) {
            return { errc::malformed_call, ex.what(), {} };
        }
    }

    registry_entry &contract_state::active_entry(const std::string &did_text)
    {
        if (!did::identifier::valid(did_text))
            throw error(errc::malformed_call, "bad DID " + did_text);
        const auto it = _registry.find(did::identifier::parse(did_text));
        if (it == _registry.end())
            throw error(errc::not_found, did_text);
        if (!it->second.active())
            throw error(errc::revoked, did_text);
        return it->second;
    }

    void contract_state::touch_entry(const registry_entry &e)
    {
        _entry_digests[e.id] = sha256(canonical_json(e.to_json()));
    }

    void contract_state::touch_proposal(const key_update_proposal &p)
    {
        _proposal_digests[p.id] = sha256(canonical_json(p.to_json()));
    }

    exec_result contract_state::register_did(const json &args, const exec_context &ctx)
    {
        if (!args.contains("ddo"))
            throw error(errc::malformed_ddo, "missing ddo");
        const did::identifier id { ctx.sender };
        if (_registry.contains(id))
            throw error(errc::already_registered, id.str());
        auto ddo = did::document::from_json(args.at("ddo"));
        if (ddo.id != id)
            throw error(errc::malformed_ddo, "ddo.id " + ddo.id.str() + " does not match the sender's DID " + id.str());
        if (!ddo.delegates.empty())
            throw error(errc::malformed_ddo, "delegates are preregistered through set_delegates");
        registry_entry e;
        e.id = id;
        e.status = did_status::active;
        e.registered_at = ctx.height;
        ddo.updated_at = ctx.height;
        e.ddo = std::move(ddo);
        e.version = 0;
        e.owner_key = ctx.sender_key;
        e.key_history.push_back({ e.owner_key, ctx.timestamp_ms, ctx.height });
        touch_entry(e);
        _registry.emplace(id, std::move(e));
        return { errc::ok, {}, json { { "did", id.str() } } };
    }
}

namespace dpaas::ledger {
    exec_result contract_state::update(const json &args, const exec_context &ctx)
    {
        auto &e = active_entry(arg_string(args, "did"));
        if (!args.contains("ddo"))
            throw error(errc::malformed_ddo, "missing ddo");
        auto ddo = did::document::from_json(args.at("ddo"));
        if (ddo.id != e.id)
            throw error(errc::malformed_ddo, "ddo.id does not match the DID being updated");
        const auto sig = arg_signature(args);
        if (!verify_signature(e.owner_key, did::messages::update(e.id, e.version, ddo), sig))
            throw error(errc::not_owner, e.id.str());
        // Delegates change only through set_delegates, where their status is checked.
        ddo.delegates = e.delegates;
        ddo.updated_at = ctx.height;
        e.ddo = std::move(ddo);
        ++e.version;
        touch_entry(e);
        return { errc::ok, {}, json { { "did", e.id.str() }, { "version", e.version } } };
    }

    exec_result contract_state::bind_social(const json &args, const exec_context &ctx)
    {
        auto &e = active_entry(arg_string(args, "did"));
        const auto platform = arg_string(args, "platform");
        const auto uri = arg_string(args, "profile_uri");
        if (platform.empty() || uri.empty())
            throw error(errc::malformed_ddo, "social binding needs a platform and a profile URI");
        const auto sig = arg_signature(args);
        if (!verify_signature(e.owner_key, did::messages::bind_social(e.id, e.version, platform, uri), sig))
            throw error(errc::not_owner, e.id.str());
        e.ddo->social_bindings[platform] = uri;
        e.ddo->updated_at = ctx.height;
        ++e.version;
        touch_entry(e);
        return { errc::ok, {}, json { { "did", e.id.str() }, { "version", e.version } } };
    }

    bool contract_state::is_active_delegate(const registry_entry &e, const did::identifier &delegate) const
    {
        if (std::find(e.delegates.begin(), e.delegates.end(), delegate) == e.delegates.end())
            return false;
        const auto it = _registry.find(delegate);
        return it != _registry.end() && it->second.active();
    }

    exec_result contract_state::set_delegates(const json &args, const exec_context &ctx)
    {
        auto &e = active_entry(arg_string(args, "did"));
        const auto it = args.find("delegates");
        if (it == args.end() || !it->is_array())
            throw error(errc::malformed_call, "delegates must be an array");
        std::vector<did::identifier> delegates;
        for (const auto &d: *it) {
            if (!d.is_string() || !did::identifier::valid(d.get<std::string>()))
                throw error(errc::malformed_call, "bad delegate DID");
            delegates.push_back(did::identifier::parse(d.get<std::string>()));
        }
        const auto sig = arg_signature(args);
        if (!verify_signature(e.owner_key, did::messages::set_delegates(e.id, e.version, delegates), sig))
            throw error(errc::not_owner, e.id.str());
        std::set<did::identifier> seen;
        for (const auto &d: delegates) {
            if (d == e.id)
                throw error(errc::malformed_ddo, "a DID cannot delegate to itself");
            if (!seen.insert(d).second)
                throw error(errc::malformed_ddo, "duplicate delegate " + d.str());
            const auto dit = _registry.find(d);
            if (dit == _registry.end() || !dit->second.active())
                throw error(errc::unknown_delegate, d.str());
        }
        close_open_proposals(e.id);
        e.delegates = delegates;
        e.ddo->delegates = std::move(delegates);
        e.ddo->updated_at = ctx.height;
        ++e.version;
        touch_entry(e);
        return { errc::ok, {}, json { { "did", e.id.str() }, { "version", e.version } } };
    }

    void contract_state::replace_owner_key(registry_entry &e, const verifying_key &new_key, const exec_context &ctx)
    {
        const auto old_key = e.owner_key;
        e.owner_key = new_key;
        e.key_history.push_back({ new_key, ctx.timestamp_ms, ctx.height });
        for (auto &k: e.ddo->public_keys)
            if (k.key == old_key)
                k.key = new_key;
        e.ddo->updated_at = ctx.height;
        ++e.version;
        touch_entry(e);
    }

    void contract_state::close_open_proposals(const did::identifier &id)
    {
        for (auto it = _open_proposals.lower_bound({ id, verifying_key {} }); it != _open_proposals.end() && it->first.first == id;) {
            auto &p = _proposals.at(it->second);
            p.status = proposal_status::closed;
            touch_proposal(p);
            it = _open_proposals.erase(it);
        }
    }

    json contract_state::tally(key_update_proposal &p, const exec_context &ctx)
    {
        auto &e = _registry.at(p.target);
        // strict majority of the preregistered delegates
        if (p.votes.size() * 2 > e.delegates.size()) {
            _open_proposals.erase({ p.target, p.new_key });
            p.status = proposal_status::executed;
            touch_proposal(p);
            close_open_proposals(p.target);
            replace_owner_key(e, p.new_key, ctx);
        } else {
            touch_proposal(p);
        }
        return json {
            { "proposal_id", to_hex(p.id) },
            { "outcome", p.status == proposal_status::executed ? "executed" : "pending" },
            { "votes", p.votes.size() },
            { "delegates", e.delegates.size() },
        };
    }

    exec_result contract_state::propose(const json &args, const exec_context &ctx)
    {
        auto &e = active_entry(arg_string(args, "did"));
        const auto new_key = arg_fixed_hex<32>(args, "new_key");
        const auto delegate = arg_did(args, "delegate");
        const auto sig = arg_signature(args);
        if (!is_active_delegate(e, delegate))
            throw error(errc::not_delegate, delegate.str());
        if (!verify_signature(_registry.at(delegate).owner_key, did::messages::propose(e.id, new_key, delegate), sig))
            throw error(errc::not_delegate, "signature does not verify under " + delegate.str());
        if (new_key == e.owner_key)
            throw error(errc::malformed_call, "proposed key is already the owner key");
        if (const auto it = _open_proposals.find({ e.id, new_key }); it != _open_proposals.end()) {
            const auto &p = _proposals.at(it->second);
            return { errc::ok, {}, json { { "proposal_id", to_hex(p.id) }, { "outcome", "pending" },
                { "votes", p.votes.size() }, { "delegates", e.delegates.size() }, { "existing", true } } };
        }
        key_update_proposal p;
        p.id = proposal_id_of(e.id, new_key, ctx.height);
        p.target = e.id;
        p.new_key = new_key;
        p.votes.insert(delegate);
        p.created_at = ctx.height;
        auto [it, inserted] = _proposals.emplace(p.id, std::move(p));
        if (!inserted)
            throw error(errc::malformed_call, "proposal already exists at this height");
        _open_proposals.emplace(std::make_pair(it->second.target, it->second.new_key), it->first);
        return { errc::ok, {}, tally(it->second, ctx) };
    }

    exec_result contract_state::vote(const json &args, const exec_context &ctx)
    {
        const auto proposal_id = arg_fixed_hex<32>(args, "proposal_id");
        const auto delegate = arg_did(args, "delegate");
        const auto sig = arg_signature(args);
        const auto it = _proposals.find(proposal_id);
        if (it == _proposals.end())
            throw error(errc::unknown_proposal, to_hex(proposal_id));
        auto &p = it->second;
        if (p.status != proposal_status::open)
            throw error(errc::proposal_closed, to_hex(proposal_id));
        const auto &e = _registry.at(p.target);
        if (!is_active_delegate(e, delegate))
            throw error(errc::not_delegate, delegate.str());
        if (!verify_signature(_registry.at(delegate).owner_key, did::messages::vote(p.id, delegate), sig))
            throw error(errc::not_delegate, "signature does not verify under " + delegate.str());
        if (p.votes.contains(delegate))
            throw error(errc::already_voted, delegate.str());
        p.votes.insert(delegate);
        return { errc::ok, {}, tally(p, ctx) };
    }

    exec_result contract_state::revoke(const json &args, const exec_context &)
    {
        auto &e = active_entry(arg_string(args, "did"));
        const auto sig = arg_signature(args);
        if (!verify_signature(e.owner_key, did::messages::revoke(e.id, e.version), sig))
            throw error(errc::not_owner, e.id.str());
        close_open_proposals(e.id);
        e.ddo.reset();
        e.status = did_status::revoked;
        ++e.version;
        touch_entry(e);
        return { errc::ok, {}, json { { "did", e.id.str() }, { "status", "revoked" } } };
    }

    exec_result contract_state::write_anchor(const json &args, const exec_context &ctx)
    {
        if (_cfg->anchor_authority && *_cfg->anchor_authority != ctx.sender)
            throw error(errc::not_anchor_authority, to_hex(ctx.sender));
        const auto repo = arg_string(args, "repository_id");
        if (repo.empty())
            throw error(errc::malformed_call, "empty repository id");
        const auto root = arg_fixed_hex<32>(args, "digest");
        const auto eit = args.find("epoch");
        if (eit == args.end() || !eit->is_number_unsigned())
            throw error(errc::malformed_call, "epoch must be a non-negative integer");
        const auto epoch = eit->get<uint64_t>();
        const auto count = anchor_count(repo);
        if (epoch < count)
            throw error(errc::anchor_exists, repo + "@" + std::to_string(epoch));
        if (epoch > count)
            throw error(errc::epoch_gap, repo + ": next epoch is " + std::to_string(count));
        anchor_entry a { repo, epoch, root, ctx.height };
        auto out = a.to_json();
        _anchors.emplace(std::make_pair(repo, epoch), std::move(a));
        _anchor_counts[repo] = count + 1;
        return { errc::ok, {}, std::move(out) };
    }

    const registry_entry *contract_state::entry(const did::identifier &id) const
    {
        const auto it = _registry.find(id);
        return it == _registry.end() ? nullptr : &it->second;
    }

    const key_update_proposal *contract_state::proposal(const digest &id) const
    {
        const auto it = _proposals.find(id);
        return it == _proposals.end() ? nullptr : &it->second;
    }

    const anchor_entry *contract_state::anchor(const std::string &repository_id, uint64_t epoch) const
    {
        const auto it = _anchors.find({ repository_id, epoch });
        return it == _anchors.end() ? nullptr : &it->second;
    }

    uint64_t contract_state::anchor_count(const std::string &repository_id) const
    {
        const auto it = _anchor_counts.find(repository_id);
        return it == _anchor_counts.end() ? 0 : it->second;
    }

    bytes contract_state::query(std::string_view target, byte_view encoded) const
    {
        std::string op;
        json args;
        try {
            decoder dec { encoded, errc::malformed_query };
            op = dec.str();
            args = json::parse(dec.str());
            dec.expect_done();
        } catch (const json::exception &ex) {
            throw error(errc::malformed_query, ex.what());
        }
        const auto respond = [](bool found, const json &value) {
            encoder enc;
            enc.str(found ? "ok" : "not_found").str(canonical_json(value));
            return enc.take();
        };
        try {
            if (target == did_registry) {
                if (op == "resolve") {
                    const auto text = args.at("did").get<std::string>();
                    if (!did::identifier::valid(text))
                        throw error(errc::malformed_query, "bad DID " + text);
                    const auto *e = entry(did::identifier::parse(text));
                    return e ? respond(true, e->to_json()) : respond(false, json { { "did", text } });
                }
                if (op == "proposal") {
                    const auto id = fixed_from_hex<32>(args.at("proposal_id").get<std::string>());
                    const auto *p = proposal(id);
                    return p ? respond(true, p->to_json()) : respond(false, args);
                }
                if (op == "count")
                    return respond(true, json { { "count", _registry.size() } });
                throw error(errc::malformed_query, "unknown registry query " + op);
            }
            if (target == anchoring_registry) {
                const auto repo = args.at("repository_id").get<std::string>();
                if (op == "anchor") {
                    const auto *a = anchor(repo, args.at("epoch").get<uint64_t>());
                    return a ? respond(true, a->to_json()) : respond(false, args);
                }
                if (op == "epochs")
                    return respond(true, json { { "repository_id", repo }, { "count", anchor_count(repo) } });
                throw error(errc::malformed_query, "unknown anchoring query " + op);
            }
        } catch (const json::exception &ex) {
            throw error(errc::malformed_query, ex.what());
        } catch (const error &ex) {
            if (ex.code() == errc::malformed_query)
                throw;
            throw error(errc::malformed_query, ex.what());
        }
        throw error(errc::unknown_contract, std::string { target });
    }

    digest contract_state::state_digest() const
    {
        encoder enc;
        enc.str(did_registry).u64(_entry_digests.size());
        for (const auto &[id, d]: _entry_digests)
            enc.str(id.str()).raw(d);
        enc.u64(_proposal_digests.size());
        for (const auto &[id, d]: _proposal_digests)
            enc.raw(id).raw(d);
        enc.str(anchoring_registry).u64(_anchors.size());
        for (const auto &[key, a]: _anchors)
            enc.str(a.repository_id).u64(a.epoch).raw(a.root).u64(a.anchored_at);
        return sha256(enc.data());
    }
}
