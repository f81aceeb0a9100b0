#include <dpaas/credential/issuers.hpp>

namespace dpaas::credential {
    std::string_view to_string(issuer_status s) noexcept
    {
        return s == issuer_status::active ? "active" : "removed";
    }

    issuer_status issuer_status_from_string(std::string_view s)
    {
        if (s == "active")
            return issuer_status::active;
        if (s == "removed")
            return issuer_status::removed;
        throw error(errc::bad_request, "issuer status must be active or removed: " + std::string { s });
    }

    json issuer_record::to_json() const
    {
        return json {
            { "issuer", issuer.str() },
            { "status", to_string(status) },
            { "approved_by", to_hex(approved_by) },
            { "since", since },
            { "version", version },
        };
    }

    issuer_record issuer_record::from_json(const json &j)
    {
        issuer_record r;
        r.issuer = did::identifier::parse(j.at("issuer").get<std::string>());
        r.status = issuer_status_from_string(j.at("status").get<std::string>());
        r.approved_by = fixed_from_hex<20>(j.at("approved_by").get<std::string>());
        r.since = j.at("since").get<int64_t>();
        r.version = j.at("version").get<uint64_t>();
        return r;
    }

    issuer_registry::issuer_registry(offchain::repository_set &repos, const did::service &dids, verifying_key super_key,
            std::function<int64_t()> clock_seconds):
        _repo { repos.open(std::string { offchain::issuers_repository }) },
        _dids { dids }, _super_key { super_key }, _clock { std::move(clock_seconds) }
    {
    }

    bytes issuer_registry::signup_message(const did::identifier &issuer)
    {
        return signing_message("issuer.signup", json { { "issuer", issuer.str() } });
    }

    bytes issuer_registry::update_message(const did::identifier &issuer, issuer_status status, uint64_t version)
    {
        return signing_message("issuer.update", json {
            { "issuer", issuer.str() }, { "status", to_string(status) }, { "version", version } });
    }

    issuer_record issuer_registry::signup(const did::identifier &issuer, const signature &super_signature)
    {
        if (!verify_signature(_super_key, signup_message(issuer), super_signature))
            throw error(errc::not_super, "signup must be approved by the super account");
        std::scoped_lock lock { _mutex };
        try {
            if (!_dids.entry(issuer).active())
                throw error(errc::unknown_did, issuer.str() + " is revoked");
        } catch (const error &ex) {
            if (ex.code() == errc::not_found)
                throw error(errc::unknown_did, issuer.str() + " is not registered");
            throw;
        }
        if (_repo.get(issuer.str()))
            throw error(errc::already_issuer, issuer.str());
        issuer_record r { issuer, issuer_status::active, address_of(_super_key), _clock(), 0 };
        _repo.put(issuer.str(), r.to_json());
        return r;
    }

    issuer_record issuer_registry::update(const did::identifier &issuer, issuer_status status, const signature &super_signature)
    {
        std::scoped_lock lock { _mutex };
        const auto cur = find(issuer);
        // The signature binds the record version, so the check needs the record first;
        // an unknown issuer is still reported as NotSuper when the signer is not the super key.
        const auto version = cur ? cur->version : 0;
        if (!verify_signature(_super_key, update_message(issuer, status, version), super_signature))
            throw error(errc::not_super, "issuer update must be signed by the super account");
        if (!cur)
            throw error(errc::unknown_issuer, issuer.str());
        auto r = *cur;
        r.status = status;
        r.since = _clock();
        r.version = version + 1;
        _repo.put(issuer.str(), r.to_json());
        return r;
    }

    std::optional<issuer_record> issuer_registry::find(const did::identifier &issuer) const
    {
        const auto v = _repo.get(issuer.str());
        if (!v)
            return {};
        return issuer_record::from_json(*v);
    }

    bool issuer_registry::is_active(const did::identifier &issuer) const
    {
        const auto r = find(issuer);
        if (!r || r->status != issuer_status::active)
            return false;
        try {
            return _dids.entry(issuer).active();
        } catch (const error &) {
            return false;
        }
    }
}
