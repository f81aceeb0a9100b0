#include <algorithm>
#include <cctype>
#include <sodium.h>
#include <dpaas/common/codec.hpp>
#include <dpaas/keyvault/wallet.hpp>

namespace dpaas::keyvault {
    kdf_params kdf_params::minimal()
    {
        return { "argon2id13", crypto_pwhash_argon2id_OPSLIMIT_MIN, crypto_pwhash_argon2id_MEMLIMIT_MIN };
    }

    std::string keystore_record::to_text() const
    {
        json j {
            { "version", version },
            { "kdf", { { "algorithm", kdf.algorithm }, { "opslimit", kdf.opslimit }, { "memlimit", kdf.memlimit } } },
            { "salt", base64_encode(salt) },
            { "nonce", base64_encode(nonce) },
            { "ciphertext", base64_encode(ciphertext) },
            { "mac", base64_encode(mac) },
            { "key_id", to_hex(id) },
        };
        return j.dump(2) + "\n";
    }

    keystore_record keystore_record::from_text(std::string_view text)
    {
        try {
            const auto j = json::parse(text);
            keystore_record r;
            r.version = j.at("version").get<uint32_t>();
            if (r.version != 1)
                throw error(errc::bad_encoding, "unsupported keystore version " + std::to_string(r.version));
            const auto &k = j.at("kdf");
            r.kdf.algorithm = k.at("algorithm").get<std::string>();
            r.kdf.opslimit = k.at("opslimit").get<uint64_t>();
            r.kdf.memlimit = k.at("memlimit").get<uint64_t>();
            r.salt = base64_decode(j.at("salt").get<std::string>());
            r.nonce = base64_decode(j.at("nonce").get<std::string>());
            r.ciphertext = base64_decode(j.at("ciphertext").get<std::string>());
            r.mac = base64_decode(j.at("mac").get<std::string>());
            r.id = fixed_from_hex<32>(j.at("key_id").get<std::string>());
            return r;
        } catch (const json::exception &ex) {
            throw error(errc::bad_encoding, std::string { "malformed keystore record: " } + ex.what());
        }
    }

    namespace {
        using wrap_key = secret_array<crypto_aead_xchacha20poly1305_ietf_KEYBYTES>;

        wrap_key stretch(std::string_view passphrase, const bytes &salt, const kdf_params &params)
        {
            if (params.algorithm != "argon2id13")
                throw error(errc::bad_encoding, "unsupported kdf " + params.algorithm);
            if (salt.size() != crypto_pwhash_SALTBYTES)
                throw error(errc::bad_encoding, "bad salt length");
            ensure_crypto_init();
            wrap_key key;
            if (crypto_pwhash(key.data(), key.size(), passphrase.data(), passphrase.size(), salt.data(),
                    params.opslimit, static_cast<size_t>(params.memlimit), crypto_pwhash_ALG_ARGON2ID13) != 0)
                throw error(errc::bad_encoding, "key stretching failed (parameters out of range or out of memory)");
            return key;
        }

        bytes associated_data(uint32_t version, const key_id &id)
        {
            encoder enc;
            enc.str("dpaas-keystore").u32(version).raw(id);
            return enc.take();
        }
    }

    keystore_record store_hot(const key_pair &key, std::string_view passphrase, const kdf_params &params, random_source &rng)
    {
        if (key.state() == key_state::deleted)
            throw error(errc::deleted_key, to_hex(key.id()));
        keystore_record r;
        r.kdf = params;
        r.id = key.id();
        r.salt.resize(crypto_pwhash_SALTBYTES);
        rng.fill(r.salt);
        r.nonce.resize(crypto_aead_xchacha20poly1305_ietf_NPUBBYTES);
        rng.fill(r.nonce);
        const auto wk = stretch(passphrase, r.salt, params);
        const auto ad = associated_data(r.version, r.id);
        r.ciphertext.resize(key.seed().size());
        r.mac.resize(crypto_aead_xchacha20poly1305_ietf_ABYTES);
        unsigned long long mac_len = 0;
        crypto_aead_xchacha20poly1305_ietf_encrypt_detached(r.ciphertext.data(), r.mac.data(), &mac_len,
            key.seed().data(), key.seed().size(), ad.data(), ad.size(), nullptr, r.nonce.data(), wk.data());
        return r;
    }

    key_pair load_hot(const keystore_record &record, std::string_view passphrase)
    {
        if (record.nonce.size() != crypto_aead_xchacha20poly1305_ietf_NPUBBYTES
                || record.mac.size() != crypto_aead_xchacha20poly1305_ietf_ABYTES
                || record.ciphertext.size() != seed_bytes::size())
            throw error(errc::bad_encoding, "keystore record fields have wrong sizes");
        const auto wk = stretch(passphrase, record.salt, record.kdf);
        const auto ad = associated_data(record.version, record.id);
        seed_bytes seed;
        if (crypto_aead_xchacha20poly1305_ietf_decrypt_detached(seed.data(), nullptr, record.ciphertext.data(),
                record.ciphertext.size(), record.mac.data(), ad.data(), ad.size(), record.nonce.data(), wk.data()) != 0)
            throw error(errc::wrong_passphrase);
        auto kp = key_pair::from_seed(seed);
        if (kp.id() != record.id)
            throw error(errc::bad_encoding, "decrypted key does not match record key id");
        return kp;
    }

    cold_export cold_export::parse(std::string_view line)
    {
        while (!line.empty() && std::isspace(static_cast<unsigned char>(line.back())))
            line.remove_suffix(1);
        while (!line.empty() && std::isspace(static_cast<unsigned char>(line.front())))
            line.remove_prefix(1);
        const auto dash = line.find('-');
        if (dash == std::string_view::npos || line.find('-', dash + 1) != std::string_view::npos)
            throw error(errc::bad_encoding, "cold export must be <hex-seed>-<hex-checksum>");
        cold_export e { std::string { line.substr(0, dash) }, std::string { line.substr(dash + 1) } };
        if (e.payload.size() != 64 || e.checksum.size() != 8)
            throw error(errc::bad_encoding, "cold export must carry 32 seed bytes and a 4-byte checksum");
        const auto lower = [](std::string &s) {
            std::transform(s.begin(), s.end(), s.begin(), [](unsigned char c) { return static_cast<char>(std::tolower(c)); });
        };
        lower(e.payload);
        lower(e.checksum);
        // validate both fields are hex
        (void)from_hex(e.payload);
        (void)from_hex(e.checksum);
        return e;
    }

    namespace {
        std::string checksum_of(const seed_bytes &seed)
        {
            const auto d = sha256(seed.view());
            return to_hex(byte_view { d }.first(4));
        }
    }

    cold_export export_cold(const key_pair &key)
    {
        if (key.state() == key_state::deleted)
            throw error(errc::deleted_key, to_hex(key.id()));
        return { to_hex(key.seed().view()), checksum_of(key.seed()) };
    }

    key_pair import_cold(const cold_export &exp)
    {
        const auto normalized = cold_export::parse(exp.to_string());
        auto raw = from_hex(normalized.payload);
        seed_bytes seed { raw };
        secure_wipe(raw);
        if (checksum_of(seed) != normalized.checksum)
            throw error(errc::bad_checksum);
        return key_pair::from_seed(seed);
    }
}
