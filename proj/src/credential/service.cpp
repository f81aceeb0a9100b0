#include <dpaas/credential/service.hpp>
#include <dpaas/common/random.hpp>

namespace dpaas::credential {
    namespace {
        std::string credential_key(const digest &id) { return "credential:" + to_hex(id); }
        std::string token_key(const digest &id) { return "token:" + to_hex(id); }

        verification_report fail(size_t passed, errc code, std::string detail)
        {
            return { false, code, std::move(detail), passed };
        }
    }

    json credential_record::to_json() const
    {
        return json {
            { "credential", cred.to_json() },
            { "token_id", to_hex(token_id) },
            { "status", status == record_status::valid ? "valid" : "cancelled" },
        };
    }

    credential_record credential_record::from_json(const json &j)
    {
        credential_record r;
        r.cred = credential::from_json(j.at("credential"));
        r.token_id = fixed_from_hex<32>(j.at("token_id").get<std::string>());
        r.status = j.at("status") == "valid" ? record_status::valid : record_status::cancelled;
        return r;
    }

    json token_record::to_json() const
    {
        json j {
            { "token_id", to_hex(token_id) },
            { "credential_id", to_hex(credential_id) },
            { "one_off", one_off },
        };
        if (one_off)
            j["access_state"] = state == access_state::unused ? "unused" : "consumed";
        return j;
    }

    token_record token_record::from_json(const json &j)
    {
        token_record r;
        r.token_id = fixed_from_hex<32>(j.at("token_id").get<std::string>());
        r.credential_id = fixed_from_hex<32>(j.at("credential_id").get<std::string>());
        r.one_off = j.at("one_off").get<bool>();
        if (r.one_off)
            r.state = j.at("access_state") == "unused" ? access_state::unused : access_state::consumed;
        return r;
    }

    json verification_report::to_json() const
    {
        json checks = json::array();
        for (size_t i = 0; i < verification_checks.size(); ++i) {
            std::string_view result = "skipped";
            if (i < checks_passed)
                result = "pass";
            else if (i == checks_passed && !passed)
                result = "fail";
            checks.push_back({ { "check", verification_checks[i] }, { "result", result } });
        }
        json j { { "passed", passed }, { "checks", std::move(checks) } };
        if (!passed) {
            j["failure"] = to_string(failure);
            j["detail"] = detail;
        }
        return j;
    }

    credential_service::credential_service(offchain::repository_set &repos, const did::service &dids,
            const issuer_registry &issuers, const offchain::identity_fact_store &facts, keyvault::key_pair platform_key,
            std::function<int64_t()> clock_seconds, int64_t delivery_window):
        _repo { repos.open(std::string { offchain::credentials_repository }) },
        _dids { dids }, _issuers { issuers }, _facts { facts }, _platform_key { std::move(platform_key) },
        _clock { std::move(clock_seconds) }, _delivery_window { delivery_window }
    {
    }

    bytes credential_service::grant_message(const digest &credential_id, int64_t nbf, int64_t exp, bool one_off)
    {
        return signing_message("credential.grant", json {
            { "credential_id", to_hex(credential_id) }, { "nbf", nbf }, { "exp", exp }, { "one_off", one_off } });
    }

    bytes credential_service::cancel_message(const digest &credential_id)
    {
        return signing_message("credential.cancel", json { { "credential_id", to_hex(credential_id) } });
    }

    access_token credential_service::issue_token(const digest &credential_id, int64_t nbf, int64_t exp, bool one_off)
    {
        std::array<uint8_t, 16> nonce {};
        default_random().fill(nonce);
        auto t = access_token::issue({ credential_id, _clock(), nbf, exp, one_off, to_hex(nonce) }, _platform_key);
        token_record tr { t.id(), credential_id, one_off, access_state::unused };
        _repo.put(token_key(tr.token_id), tr.to_json());
        return t;
    }

    issued_credential credential_service::generate_selective_credential(const did::identifier &issuer,
        const did::identifier &holder, const std::vector<std::string> &required_attributes,
        const keyvault::key_pair &issuer_key, std::string schema)
    {
        if (!_issuers.is_active(issuer))
            throw error(errc::untrusted_issuer, issuer.str());
        if (required_attributes.empty())
            throw error(errc::empty_selection, "at least one attribute must be requested");
        if (issuer_key.public_key() != _dids.entry(issuer).owner_key)
            throw error(errc::not_issuer, "signing key is not the owner key of " + issuer.str());
        const auto held = _facts.attributes(issuer, holder);
        credential c;
        c.issuer = issuer;
        c.holder = holder;
        c.schema = std::move(schema);
        for (const auto &name: required_attributes) {
            const auto it = held.find(name);
            if (it == held.end())
                throw error(errc::missing_attribute, name);
            c.claims[name] = it->second;
        }
        c.issued_at = _clock();
        c.id = c.compute_id();
        c.sig = issuer_key.sign(as_bytes(c.canonical_body()));
        auto t = issue_token(c.id, c.issued_at, c.issued_at + _delivery_window, false);
        _repo.put(credential_key(c.id), credential_record { c, t.id(), record_status::valid }.to_json());
        return { std::move(c), std::move(t) };
    }

    access_token credential_service::grant(const digest &credential_id, int64_t nbf, int64_t exp, bool one_off,
        const signature &holder_signature)
    {
        const auto rec = record(credential_id);
        if (!rec)
            throw error(errc::unknown_credential, to_hex(credential_id));
        if (rec->status == record_status::cancelled)
            throw error(errc::cancelled, to_hex(credential_id));
        if (nbf > exp)
            throw error(errc::bad_window, "nbf " + std::to_string(nbf) + " is after exp " + std::to_string(exp));
        verifying_key holder_key {};
        try {
            holder_key = _dids.entry(rec->cred.holder).owner_key;
        } catch (const error &) {
            throw error(errc::not_holder, "holder DID cannot be resolved");
        }
        if (!verify_signature(holder_key, grant_message(credential_id, nbf, exp, one_off), holder_signature))
            throw error(errc::not_holder, "grant must be signed by " + rec->cred.holder.str());
        return issue_token(credential_id, nbf, exp, one_off);
    }

    access_token credential_service::grant_time_constrained(const digest &credential_id, int64_t nbf, int64_t exp,
        const signature &holder_signature)
    {
        return grant(credential_id, nbf, exp, false, holder_signature);
    }

    access_token credential_service::grant_one_off(const digest &credential_id, int64_t exp, const signature &holder_signature)
    {
        // The signed request fixes nbf at the grant time, so the holder signs with nbf = now.
        return grant(credential_id, _clock(), exp, true, holder_signature);
    }

    verification_report credential_service::verify(const credential &cred, std::string_view token_text, int64_t at)
    {
        access_token t;
        try {
            t = access_token::parse(token_text);
        } catch (const error &ex) {
            return fail(0, errc::bad_token, ex.detail());
        }
        if (!t.verify(_platform_key.public_key()))
            return fail(0, errc::bad_token, "token signature does not verify");

        const auto id = cred.compute_id();
        if (id != t.claims().jti)
            return fail(1, errc::integrity_mismatch, "credential body does not match token jti");

        if (at < t.claims().nbf)
            return fail(2, errc::not_yet_valid, "token valid from " + std::to_string(t.claims().nbf));
        if (at > t.claims().exp)
            return fail(2, errc::expired, "token expired at " + std::to_string(t.claims().exp));

        // The lock spans the remaining checks so the flag flips only when the whole
        // verification passes, and at most once.
        const auto token_id = t.id();
        std::unique_lock<std::mutex> lock;
        if (t.claims().one_off) {
            lock = std::unique_lock { token_lock(token_id) };
            const auto tr = token(token_id);
            if (!tr || !tr->one_off || tr->credential_id != id)
                return fail(3, errc::bad_token, "one-off token is not on record");
            if (tr->state == access_state::consumed)
                return fail(3, errc::consumed_token, "one-off token already used");
        }

        const auto rec = record(id);
        if (!rec)
            return fail(4, errc::unknown_credential, to_hex(id));
        if (rec->status == record_status::cancelled)
            return fail(4, errc::cancelled, "credential was cancelled by its issuer");

        if (!_issuers.is_active(cred.issuer))
            return fail(5, errc::untrusted_issuer, cred.issuer.str());

        verifying_key issuer_key {};
        try {
            issuer_key = _dids.key_of_record(cred.issuer, cred.issued_at * 1000);
        } catch (const error &ex) {
            return fail(6, errc::bad_issuer_signature, ex.detail());
        }
        if (!verify_signature(issuer_key, as_bytes(cred.canonical_body()), cred.sig))
            return fail(6, errc::bad_issuer_signature, "issuer signature does not verify");

        if (t.claims().one_off) {
            auto tr = *token(token_id);
            tr.state = access_state::consumed;
            _repo.put(token_key(token_id), tr.to_json());
        }
        return { true, errc::ok, {}, verification_checks.size() };
    }

    void credential_service::cancel(const digest &credential_id, const signature &issuer_signature)
    {
        const auto rec = record(credential_id);
        if (!rec)
            throw error(errc::unknown_credential, to_hex(credential_id));
        verifying_key issuer_key {};
        try {
            issuer_key = _dids.entry(rec->cred.issuer).owner_key;
        } catch (const error &) {
            throw error(errc::not_issuer, "issuer DID cannot be resolved");
        }
        if (!verify_signature(issuer_key, cancel_message(credential_id), issuer_signature))
            throw error(errc::not_issuer, "cancellation must be signed by " + rec->cred.issuer.str());
        _repo.update(credential_key(credential_id), [](const std::optional<json> &cur) -> std::optional<json> {
            auto j = *cur;
            if (j.at("status") == "cancelled")
                return {};
            j["status"] = "cancelled";
            return j;
        });
    }

    std::optional<credential_record> credential_service::record(const digest &credential_id) const
    {
        const auto v = _repo.get(credential_key(credential_id));
        if (!v)
            return {};
        return credential_record::from_json(*v);
    }

    std::optional<token_record> credential_service::token(const digest &token_id) const
    {
        const auto v = _repo.get(token_key(token_id));
        if (!v)
            return {};
        return token_record::from_json(*v);
    }
}
