#include <ctime>
#include <cstdio>
#include <dpaas/credential/credential.hpp>

namespace dpaas::credential {
    namespace {
        constexpr std::string_view context_v1 = "https://www.w3.org/2018/credentials/v1";
        constexpr std::string_view base_type = "VerifiableCredential";
        constexpr std::string_view id_prefix = "urn:dpaas:credential:";
    }

    std::string format_timestamp(int64_t seconds)
    {
        const auto t = static_cast<std::time_t>(seconds);
        std::tm tm {};
        gmtime_r(&t, &tm);
        char buf[32];
        std::strftime(buf, sizeof(buf), "%Y-%m-%dT%H:%M:%SZ", &tm);
        return buf;
    }

    int64_t parse_timestamp(std::string_view iso8601)
    {
        std::tm tm {};
        char z = 0;
        const std::string s { iso8601 };
        if (std::sscanf(s.c_str(), "%4d-%2d-%2dT%2d:%2d:%2d%c", &tm.tm_year, &tm.tm_mon, &tm.tm_mday,
                &tm.tm_hour, &tm.tm_min, &tm.tm_sec, &z) != 7 || z != 'Z' || s.size() != 20)
            throw error(errc::bad_encoding, "timestamp must be YYYY-MM-DDTHH:MM:SSZ: " + s);
        tm.tm_year -= 1900;
        tm.tm_mon -= 1;
        return static_cast<int64_t>(timegm(&tm));
    }

    json credential::body() const
    {
        return json {
            { "issuer", issuer.str() },
            { "holder", holder.str() },
            { "claims", claims },
            { "issued_at", issued_at },
            { "schema", schema },
        };
    }

    json credential::to_json() const
    {
        json subject = claims;
        subject["id"] = holder.str();
        json types = json::array({ base_type });
        if (!schema.empty())
            types.push_back(schema);
        return json {
            { "@context", json::array({ context_v1 }) },
            { "id", std::string { id_prefix } + to_hex(id) },
            { "type", std::move(types) },
            { "issuer", issuer.str() },
            { "issuanceDate", format_timestamp(issued_at) },
            { "credentialSubject", std::move(subject) },
            { "proof", { { "type", "Ed25519Signature2018" }, { "signatureValue", sig.to_string() } } },
        };
    }

    credential credential::from_json(const json &j)
    {
        try {
            credential c;
            const auto id = j.at("id").get<std::string>();
            if (!id.starts_with(id_prefix))
                throw error(errc::bad_encoding, "credential id must start with " + std::string { id_prefix });
            c.id = fixed_from_hex<32>(std::string_view { id }.substr(id_prefix.size()));
            const auto &types = j.at("type");
            if (!types.is_array() || types.empty() || types.at(0) != base_type || types.size() > 2)
                throw error(errc::bad_encoding, "credential type must be [\"VerifiableCredential\", <schema>]");
            if (types.size() == 2)
                c.schema = types.at(1).get<std::string>();
            c.issuer = did::identifier::parse(j.at("issuer").get<std::string>());
            c.issued_at = parse_timestamp(j.at("issuanceDate").get<std::string>());
            for (const auto &[k, v]: j.at("credentialSubject").items()) {
                if (k == "id")
                    c.holder = did::identifier::parse(v.get<std::string>());
                else
                    c.claims[k] = v.get<std::string>();
            }
            if (!j.at("credentialSubject").contains("id"))
                throw error(errc::bad_encoding, "credentialSubject.id is required");
            c.sig = signature::from_string(j.at("proof").at("signatureValue").get<std::string>());
            return c;
        } catch (const json::exception &ex) {
            throw error(errc::bad_encoding, std::string { "malformed credential: " } + ex.what());
        }
    }
}
