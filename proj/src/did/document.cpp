#include <set>
#include <dpaas/did/document.hpp>

namespace dpaas::did {
    json document::to_json() const
    {
        json keys = json::array();
        for (const auto &k: public_keys)
            keys.push_back({ { "id", k.id }, { "type", key_type }, { "publicKeyHex", to_hex(k.key) }, { "purpose", k.purpose } });
        json auth = json::array();
        for (const auto &a: authentication)
            auth.push_back({ { "type", a.type }, { "publicKey", a.public_key } });
        json svc = json::array();
        for (const auto &s: services)
            svc.push_back({ { "type", s.type }, { "serviceEndpoint", s.uri } });
        json dels = json::array();
        for (const auto &d: delegates)
            dels.push_back(d.str());
        return json {
            { "id", id.str() },
            { "publicKey", std::move(keys) },
            { "authentication", std::move(auth) },
            { "service", std::move(svc) },
            { "socialBinding", social_bindings },
            { "delegates", std::move(dels) },
            { "updated", updated_at },
        };
    }

    document document::from_json(const json &j)
    {
        try {
            document d;
            d.id = identifier::parse(j.at("id").get<std::string>());
            for (const auto &k: j.value("publicKey", json::array())) {
                const auto type = k.value("type", std::string { key_type });
                if (type != key_type)
                    throw error(errc::malformed_ddo, "unsupported key type " + type);
                d.public_keys.push_back({ k.at("id").get<std::string>(),
                    fixed_from_hex<32>(k.at("publicKeyHex").get<std::string>()), k.value("purpose", std::string {}) });
            }
            for (const auto &a: j.value("authentication", json::array()))
                d.authentication.push_back({ a.at("type").get<std::string>(), a.at("publicKey").get<std::string>() });
            for (const auto &s: j.value("service", json::array()))
                d.services.push_back({ s.at("type").get<std::string>(), s.at("serviceEndpoint").get<std::string>() });
            d.social_bindings = j.value("socialBinding", std::map<std::string, std::string> {});
            for (const auto &del: j.value("delegates", json::array()))
                d.delegates.push_back(identifier::parse(del.get<std::string>()));
            d.updated_at = j.value("updated", uint64_t { 0 });
            d.validate();
            return d;
        } catch (const json::exception &ex) {
            throw error(errc::malformed_ddo, ex.what());
        } catch (const error &ex) {
            if (ex.code() == errc::malformed_ddo)
                throw;
            throw error(errc::malformed_ddo, ex.what());
        }
    }

    void document::validate() const
    {
        std::set<std::string> ids;
        for (const auto &k: public_keys) {
            if (k.id.empty())
                throw error(errc::malformed_ddo, "public key with empty id");
            if (!ids.insert(k.id).second)
                throw error(errc::malformed_ddo, "duplicate public key id " + k.id);
        }
        for (const auto &a: authentication) {
            if (a.type.empty())
                throw error(errc::malformed_ddo, "authentication entry without a protocol type");
            if (!ids.contains(a.public_key))
                throw error(errc::malformed_ddo, "authentication references unknown key " + a.public_key);
        }
        for (const auto &s: services)
            if (s.type.empty() || s.uri.empty())
                throw error(errc::malformed_ddo, "service endpoint needs a type and a URI");
        for (const auto &[platform, uri]: social_bindings)
            if (platform.empty() || uri.empty())
                throw error(errc::malformed_ddo, "social binding needs a platform and a profile URI");
        std::set<identifier> dels;
        for (const auto &d: delegates) {
            if (d == id)
                throw error(errc::malformed_ddo, "a DID cannot delegate to itself");
            if (!dels.insert(d).second)
                throw error(errc::malformed_ddo, "duplicate delegate " + d.str());
        }
    }

    document minimal_document(const identifier &id, const verifying_key &owner)
    {
        document d;
        d.id = id;
        d.public_keys.push_back({ id.str() + "#owner", owner, "owner" });
        d.authentication.push_back({ "Ed25519SignatureAuthentication2018", id.str() + "#owner" });
        return d;
    }
}
