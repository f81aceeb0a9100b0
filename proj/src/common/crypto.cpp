#include <mutex>
#include <sodium.h>
#include <dpaas/common/crypto.hpp>

namespace dpaas {
    void ensure_crypto_init()
    {
        static std::once_flag once;
        std::call_once(once, [] {
            if (sodium_init() < 0)
                throw std::runtime_error("libsodium initialization failed");
        });
    }

    digest sha256(byte_view data)
    {
        ensure_crypto_init();
        digest out;
        crypto_hash_sha256(out.data(), data.data(), data.size());
        return out;
    }

    std::string signature::to_string() const
    {
        return algorithm + ":" + base64url_encode(value);
    }

    signature signature::from_string(std::string_view text)
    {
        const auto pos = text.find(':');
        if (pos == std::string_view::npos)
            throw error(errc::bad_encoding, "signature must be <algorithm>:<base64url>");
        signature sig;
        sig.algorithm = std::string { text.substr(0, pos) };
        const auto raw = base64url_decode(text.substr(pos + 1));
        if (raw.size() != sig.value.size())
            throw error(errc::bad_encoding, "signature must be 64 bytes");
        std::copy(raw.begin(), raw.end(), sig.value.begin());
        return sig;
    }

    namespace {
        struct expanded_key {
            std::array<uint8_t, crypto_sign_PUBLICKEYBYTES> vk {};
            std::array<uint8_t, crypto_sign_SECRETKEYBYTES> sk {};
            ~expanded_key() { secure_wipe(sk); }
        };

        void expand(const seed_bytes &seed, expanded_key &out)
        {
            ensure_crypto_init();
            crypto_sign_seed_keypair(out.vk.data(), out.sk.data(), seed.data());
        }
    }

    verifying_key derive_verifying_key(const seed_bytes &seed)
    {
        expanded_key k;
        expand(seed, k);
        return k.vk;
    }

    signature sign_message(const seed_bytes &seed, byte_view message)
    {
        expanded_key k;
        expand(seed, k);
        signature sig;
        crypto_sign_detached(sig.value.data(), nullptr, message.data(), message.size(), k.sk.data());
        return sig;
    }

    signing_key_bytes expand_signing_key(const seed_bytes &seed)
    {
        expanded_key k;
        expand(seed, k);
        return signing_key_bytes { k.sk };
    }

    signature sign_message(const signing_key_bytes &sk, byte_view message)
    {
        ensure_crypto_init();
        signature sig;
        crypto_sign_detached(sig.value.data(), nullptr, message.data(), message.size(), sk.data());
        return sig;
    }

    bool verify_signature(const verifying_key &vk, byte_view message, const signature &sig) noexcept
    {
        if (sig.algorithm != signature_algorithm_id)
            return false;
        ensure_crypto_init();
        return crypto_sign_verify_detached(sig.value.data(), message.data(), message.size(), vk.data()) == 0;
    }
}
