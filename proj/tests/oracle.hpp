#pragma once

// Independent reference implementations used to check the production code.

#include <openssl/evp.h>
#include <openssl/sha.h>
#include <dpaas/common/bytes.hpp>

namespace oracle {
    inline dpaas::digest sha256(dpaas::byte_view data)
    {
        dpaas::digest out {};
        SHA256(data.data(), data.size(), out.data());
        return out;
    }

    inline dpaas::digest sha256(std::string_view s)
    {
        return sha256(dpaas::byte_view { reinterpret_cast<const uint8_t *>(s.data()), s.size() });
    }

    inline bool ed25519_verify(const std::array<uint8_t, 32> &public_key, std::string_view message,
        const std::array<uint8_t, 64> &sig)
    {
        EVP_PKEY *pkey = EVP_PKEY_new_raw_public_key(EVP_PKEY_ED25519, nullptr, public_key.data(), public_key.size());
        EVP_MD_CTX *ctx = EVP_MD_CTX_new();
        bool ok = pkey && ctx && EVP_DigestVerifyInit(ctx, nullptr, nullptr, nullptr, pkey) == 1
            && EVP_DigestVerify(ctx, sig.data(), sig.size(), reinterpret_cast<const uint8_t *>(message.data()), message.size()) == 1;
        EVP_MD_CTX_free(ctx);
        EVP_PKEY_free(pkey);
        return ok;
    }

    // Carry-less multiply then reduce modulo x^8 + x^4 + x^3 + x + 1, one bit at a time.
    inline uint8_t gf_mul(uint8_t a, uint8_t b)
    {
        uint8_t p = 0;
        for (int i = 0; i < 8; ++i) {
            if (b & 1)
                p ^= a;
            const bool carry = a & 0x80;
            a <<= 1;
            if (carry)
                a ^= 0x1b;
            b >>= 1;
        }
        return p;
    }

    inline uint8_t gf_inv(uint8_t a)
    {
        for (int c = 1; c < 256; ++c)
            if (gf_mul(a, static_cast<uint8_t>(c)) == 1)
                return static_cast<uint8_t>(c);
        return 0;
    }

    // Lagrange interpolation at zero over GF(2^8) using the bitwise multiply.
    inline uint8_t lagrange_at_zero(const std::vector<std::pair<uint8_t, uint8_t>> &pts)
    {
        uint8_t acc = 0;
        for (size_t i = 0; i < pts.size(); ++i) {
            uint8_t num = 1, den = 1;
            for (size_t j = 0; j < pts.size(); ++j) {
                if (i == j)
                    continue;
                num = gf_mul(num, pts[j].first);
                den = gf_mul(den, pts[i].first ^ pts[j].first);
            }
            acc ^= gf_mul(pts[i].second, gf_mul(num, gf_inv(den)));
        }
        return acc;
    }

    // Merkle root: pairwise digest(left || right), odd node promoted, empty = digest("").
    inline dpaas::digest merkle(std::vector<dpaas::digest> level)
    {
        if (level.empty())
            return sha256(std::string_view {});
        while (level.size() > 1) {
            std::vector<dpaas::digest> next;
            for (size_t i = 0; i < level.size(); i += 2) {
                if (i + 1 == level.size()) {
                    next.push_back(level[i]);
                    continue;
                }
                uint8_t buf[64];
                std::copy(level[i].begin(), level[i].end(), buf);
                std::copy(level[i + 1].begin(), level[i + 1].end(), buf + 32);
                next.push_back(sha256(dpaas::byte_view { buf, 64 }));
            }
            level = std::move(next);
        }
        return level.front();
    }
}
