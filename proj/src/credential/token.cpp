#include <dpaas/credential/token.hpp>

namespace dpaas::credential {
    namespace {
        using ordered_json = nlohmann::ordered_json;

        std::string segment(const ordered_json &j)
        {
            const auto text = j.dump();
            return base64url_encode(as_bytes(text));
        }

        bytes signing_input(const std::string &header, const std::string &payload)
        {
            const auto s = header + "." + payload;
            return { s.begin(), s.end() };
        }
    }

    access_token access_token::issue(const token_claims &claims, const keyvault::key_pair &signer)
    {
        access_token t;
        t._claims = claims;
        t._alg = token_algorithm;
        ordered_json header;
        header["alg"] = token_algorithm;
        header["typ"] = "JWT";
        ordered_json payload;
        payload["jti"] = to_hex(claims.jti);
        payload["iat"] = claims.iat;
        payload["nbf"] = claims.nbf;
        payload["exp"] = claims.exp;
        payload["one_off"] = claims.one_off;
        if (!claims.nonce.empty())
            payload["nonce"] = claims.nonce;
        t._header_segment = segment(header);
        t._payload_segment = segment(payload);
        const auto sig = signer.sign(signing_input(t._header_segment, t._payload_segment));
        t._signature.assign(sig.value.begin(), sig.value.end());
        return t;
    }

    access_token access_token::parse(std::string_view compact)
    {
        const auto d1 = compact.find('.');
        const auto d2 = d1 == std::string_view::npos ? d1 : compact.find('.', d1 + 1);
        if (d2 == std::string_view::npos || compact.find('.', d2 + 1) != std::string_view::npos)
            throw error(errc::bad_token, "token must have three segments");
        access_token t;
        t._header_segment = std::string { compact.substr(0, d1) };
        t._payload_segment = std::string { compact.substr(d1 + 1, d2 - d1 - 1) };
        try {
            t._signature = base64url_decode(compact.substr(d2 + 1));
            const auto header_raw = base64url_decode(t._header_segment);
            const auto payload_raw = base64url_decode(t._payload_segment);
            const auto header = json::parse(as_string(header_raw));
            const auto payload = json::parse(as_string(payload_raw));
            if (header.at("typ").get<std::string>() != "JWT")
                throw error(errc::bad_token, "typ must be JWT");
            t._alg = header.at("alg").get<std::string>();
            t._claims.jti = fixed_from_hex<32>(payload.at("jti").get<std::string>());
            t._claims.iat = payload.at("iat").get<int64_t>();
            t._claims.nbf = payload.at("nbf").get<int64_t>();
            t._claims.exp = payload.at("exp").get<int64_t>();
            t._claims.one_off = payload.at("one_off").get<bool>();
            t._claims.nonce = payload.value("nonce", std::string {});
        } catch (const json::exception &ex) {
            throw error(errc::bad_token, ex.what());
        } catch (const error &ex) {
            throw error(errc::bad_token, ex.what());
        }
        if (t._signature.size() != 64)
            throw error(errc::bad_token, "signature must be 64 bytes");
        return t;
    }

    std::string access_token::compact() const
    {
        return _header_segment + "." + _payload_segment + "." + base64url_encode(_signature);
    }

    bool access_token::verify(const verifying_key &key) const noexcept
    {
        if (_alg != token_algorithm || _signature.size() != 64)
            return false;
        signature sig;
        std::copy(_signature.begin(), _signature.end(), sig.value.begin());
        return verify_signature(key, signing_input(_header_segment, _payload_segment), sig);
    }

    json access_token::to_json() const
    {
        json j {
            { "token", compact() },
            { "token_id", to_hex(id()) },
            { "jti", to_hex(_claims.jti) },
            { "iat", _claims.iat },
            { "nbf", _claims.nbf },
            { "exp", _claims.exp },
            { "one_off", _claims.one_off },
        };
        if (!_claims.nonce.empty())
            j["nonce"] = _claims.nonce;
        return j;
    }
}
