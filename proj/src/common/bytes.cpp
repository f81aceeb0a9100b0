#include <sodium.h>
#include <dpaas/common/bytes.hpp>
#include <dpaas/common/crypto.hpp>

namespace dpaas {
    std::string to_hex(byte_view data)
    {
        std::string out(data.size() * 2 + 1, '\0');
        sodium_bin2hex(out.data(), out.size(), data.data(), data.size());
        out.pop_back();
        return out;
    }

    bytes from_hex(std::string_view hex)
    {
        if (hex.size() % 2 != 0)
            throw error(errc::bad_encoding, "odd-length hex string");
        bytes out(hex.size() / 2);
        size_t len = 0;
        const char *end = nullptr;
        if (sodium_hex2bin(out.data(), out.size(), hex.data(), hex.size(), nullptr, &len, &end) != 0
                || end != hex.data() + hex.size() || len != out.size())
            throw error(errc::bad_encoding, "invalid hex string");
        return out;
    }

    namespace {
        std::string b64_encode(byte_view data, int variant)
        {
            ensure_crypto_init();
            std::string out(sodium_base64_encoded_len(data.size(), variant), '\0');
            sodium_bin2base64(out.data(), out.size(), data.data(), data.size(), variant);
            out.resize(std::char_traits<char>::length(out.c_str()));
            return out;
        }

        bytes b64_decode(std::string_view text, int variant)
        {
            ensure_crypto_init();
            bytes out(text.size() * 3 / 4 + 3);
            size_t len = 0;
            const char *end = nullptr;
            if (sodium_base642bin(out.data(), out.size(), text.data(), text.size(), nullptr, &len, &end, variant) != 0
                    || end != text.data() + text.size())
                throw error(errc::bad_encoding, "invalid base64");
            out.resize(len);
            return out;
        }
    }

    std::string base64url_encode(byte_view data)
    {
        return b64_encode(data, sodium_base64_VARIANT_URLSAFE_NO_PADDING);
    }

    bytes base64url_decode(std::string_view text)
    {
        return b64_decode(text, sodium_base64_VARIANT_URLSAFE_NO_PADDING);
    }

    std::string base64_encode(byte_view data)
    {
        return b64_encode(data, sodium_base64_VARIANT_ORIGINAL);
    }

    bytes base64_decode(std::string_view text)
    {
        return b64_decode(text, sodium_base64_VARIANT_ORIGINAL);
    }

    bool secure_equal(byte_view a, byte_view b) noexcept
    {
        if (a.size() != b.size())
            return false;
        if (a.empty())
            return true;
        return sodium_memcmp(a.data(), b.data(), a.size()) == 0;
    }

    void secure_wipe(std::span<uint8_t> data) noexcept
    {
        if (!data.empty())
            sodium_memzero(data.data(), data.size());
    }
}
