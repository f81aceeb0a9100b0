#include <dpaas/offchain/identity_facts.hpp>

namespace dpaas::offchain {
    identity_fact_store::identity_fact_store(repository_set &repos, const did::service &dids, issuer_check is_active_issuer)
        : _repos { repos }, _dids { dids }, _is_active_issuer { std::move(is_active_issuer) }
    {
    }

    std::string identity_fact_store::repository_id(const did::identifier &issuer)
    {
        return "issuer:" + issuer.str();
    }

    bytes identity_fact_store::put_message(const did::identifier &issuer, const did::identifier &holder, const attribute_map &attributes)
    {
        return signing_message("facts.put", { { "issuer", issuer.str() }, { "holder", holder.str() }, { "attributes", attributes } });
    }

    void identity_fact_store::put_attributes(const did::identifier &issuer, const did::identifier &holder, const attribute_map &attributes,
        const signature &issuer_signature)
    {
        if (!_is_active_issuer(issuer))
            throw error(errc::untrusted_issuer, issuer.str());
        if (attributes.empty())
            throw error(errc::malformed_record, "no attributes given");
        for (const auto &[name, _]: attributes)
            if (name.empty() || name == "id")
                throw error(errc::malformed_record, "invalid attribute name '" + name + "'");
        verifying_key key;
        try {
            key = _dids.entry(issuer).owner_key;
        } catch (const error &ex) {
            if (ex.code() != errc::not_found)
                throw;
            throw error(errc::untrusted_issuer, issuer.str());
        }
        if (!verify_signature(key, put_message(issuer, holder, attributes), issuer_signature))
            throw error(errc::bad_signature, "attribute write not signed by " + issuer.str());
        _repos.open(repository_id(issuer)).update(holder.str(), [&](const std::optional<json> &current) -> std::optional<json> {
            json merged = current ? *current : json::object();
            for (const auto &[name, value]: attributes)
                merged[name] = value;
            return merged;
        });
    }

    attribute_map identity_fact_store::attributes(const did::identifier &issuer, const did::identifier &holder) const
    {
        if (!_repos.contains(repository_id(issuer)))
            return {};
        const auto v = _repos.at(repository_id(issuer)).get(holder.str());
        if (!v)
            return {};
        return v->get<attribute_map>();
    }
}
