#include <dpaas/did/messages.hpp>
#include <dpaas/did/service.hpp>

namespace dpaas::did {
    ledger::tx_id service::submit(const keyvault::key_pair &signer, std::string op, json args)
    {
        _chain.ensure_account(signer.public_key());
        return _chain.submit_call(signer, ledger::did_registry, ledger::contract_call { std::move(op), std::move(args) });
    }

    pending_registration service::register_did(const keyvault::key_pair &owner, std::optional<document> ddo)
    {
        const identifier id { address_of(owner.public_key()) };
        if (!ddo)
            ddo = minimal_document(id, owner.public_key());
        ddo->validate();
        const auto tx = submit(owner, "register", json { { "ddo", ddo->to_json() } });
        return { id, tx };
    }

    namespace {
        document from_template(const document &tmpl, const identifier &id, const verifying_key &owner)
        {
            auto d = minimal_document(id, owner);
            d.services = tmpl.services;
            d.social_bindings = tmpl.social_bindings;
            return d;
        }
    }

    std::vector<pending_registration> service::register_keys(std::span<const keyvault::key_pair> keys, const document &ddo_template)
    {
        std::vector<pending_registration> out;
        for (const auto &k: keys) {
            const identifier id { address_of(k.public_key()) };
            out.push_back(register_did(k, from_template(ddo_template, id, k.public_key())));
        }
        return out;
    }

    std::vector<pending_registration> service::register_multiple(keyvault::master_key &master, size_t count, const document &ddo_template)
    {
        if (count == 0)
            throw error(errc::bad_request, "count must be at least 1");
        std::vector<keyvault::key_pair> keys;
        for (size_t i = 0; i < count; ++i)
            keys.push_back(master.derive_next());
        return register_keys(keys, ddo_template);
    }

    ledger::registry_entry service::entry(const identifier &id) const
    {
        const auto r = ledger::parse_query_result(_chain.query_contract(ledger::did_registry, ledger::make_query("resolve", { { "did", id.str() } })));
        if (!r.found)
            throw error(errc::not_found, id.str());
        return ledger::registry_entry::from_json(r.value);
    }

    document service::resolve(const identifier &id) const
    {
        auto e = entry(id);
        if (!e.active())
            throw error(errc::revoked, id.str());
        return std::move(*e.ddo);
    }

    dual_resolution service::dual_resolve(const identifier &a, const identifier &b) const
    {
        const std::vector<bytes> queries {
            ledger::make_query("resolve", { { "did", a.str() } }),
            ledger::make_query("resolve", { { "did", b.str() } }),
        };
        const auto [height, results] = _chain.query_snapshot(ledger::did_registry, queries);
        std::vector<document> docs;
        for (size_t i = 0; i < 2; ++i) {
            const auto &id = i == 0 ? a : b;
            const auto r = ledger::parse_query_result(results[i]);
            if (!r.found)
                throw error(errc::not_found, id.str());
            auto e = ledger::registry_entry::from_json(r.value);
            if (!e.active())
                throw error(errc::revoked, id.str());
            docs.push_back(std::move(*e.ddo));
        }
        return { height, std::move(docs[0]), std::move(docs[1]) };
    }

    std::optional<ledger::key_update_proposal> service::proposal(const digest &id) const
    {
        const auto r = ledger::parse_query_result(_chain.query_contract(ledger::did_registry, ledger::make_query("proposal", { { "proposal_id", to_hex(id) } })));
        if (!r.found)
            return {};
        return ledger::key_update_proposal::from_json(r.value);
    }

    verifying_key service::key_of_record(const identifier &id, int64_t at_ms) const
    {
        return entry(id).key_at(at_ms);
    }

    uint64_t service::current_version(const identifier &id) const
    {
        const auto e = entry(id);
        if (!e.active())
            throw error(errc::revoked, id.str());
        return e.version;
    }

    ledger::tx_id service::update(const identifier &id, const document &new_ddo, const keyvault::key_pair &owner)
    {
        const auto version = current_version(id);
        const auto sig = owner.sign(messages::update(id, version, new_ddo));
        return submit(owner, "update", { { "did", id.str() }, { "ddo", new_ddo.to_json() }, { "signature", sig.to_string() } });
    }

    ledger::tx_id service::bind_social_media(const identifier &id, std::string_view platform, std::string_view profile_uri,
        const keyvault::key_pair &owner)
    {
        const auto version = current_version(id);
        const auto sig = owner.sign(messages::bind_social(id, version, platform, profile_uri));
        return submit(owner, "bind_social", { { "did", id.str() }, { "platform", platform }, { "profile_uri", profile_uri },
            { "signature", sig.to_string() } });
    }

    ledger::tx_id service::add_delegates(const identifier &id, const std::vector<identifier> &delegates, const keyvault::key_pair &owner)
    {
        const auto version = current_version(id);
        const auto sig = owner.sign(messages::set_delegates(id, version, delegates));
        json dels = json::array();
        for (const auto &d: delegates)
            dels.push_back(d.str());
        return submit(owner, "set_delegates", { { "did", id.str() }, { "delegates", dels }, { "signature", sig.to_string() } });
    }

    ledger::tx_id service::propose_key_update(const identifier &id, const verifying_key &new_key, const identifier &delegate,
        const keyvault::key_pair &delegate_key)
    {
        const auto sig = delegate_key.sign(messages::propose(id, new_key, delegate));
        return submit(delegate_key, "propose", { { "did", id.str() }, { "new_key", to_hex(new_key) }, { "delegate", delegate.str() },
            { "signature", sig.to_string() } });
    }

    ledger::tx_id service::vote_key_update(const digest &proposal_id, const identifier &delegate, const keyvault::key_pair &delegate_key)
    {
        const auto sig = delegate_key.sign(messages::vote(proposal_id, delegate));
        return submit(delegate_key, "vote", { { "proposal_id", to_hex(proposal_id) }, { "delegate", delegate.str() },
            { "signature", sig.to_string() } });
    }

    ledger::tx_id service::revoke(const identifier &id, const keyvault::key_pair &owner)
    {
        const auto version = current_version(id);
        const auto sig = owner.sign(messages::revoke(id, version));
        return submit(owner, "revoke", { { "did", id.str() }, { "signature", sig.to_string() } });
    }

    ledger::receipt service::confirm(const ledger::tx_id &tx)
    {
        for (;;) {
            if (auto r = _chain.find_receipt(tx)) {
                if (!r->ok())
                    throw error(r->status, r->detail);
                return *r;
            }
            if (!_chain.is_pending(tx))
                throw error(errc::not_found, "transaction " + to_hex(tx) + " is unknown");
            _chain.produce_block();
        }
    }

    proposal_outcome service::outcome_of(const ledger::receipt &r)
    {
        return { fixed_from_hex<32>(r.output.at("proposal_id").get<std::string>()),
            r.output.at("outcome").get<std::string>() == "executed" ? vote_outcome::executed : vote_outcome::pending };
    }
}
