#include <algorithm>
#include <set>
#include <dpaas/common/crypto.hpp>
#include <dpaas/keyvault/gf256.hpp>
#include <dpaas/keyvault/shamir.hpp>

namespace dpaas::keyvault {
    json shard::to_json() const
    {
        return json {
            { "secret_id", to_hex(secret_id) },
            { "x", x },
            { "y", to_hex(y) },
            { "threshold", threshold },
            { "total", total },
        };
    }

    shard shard::from_json(const json &j)
    {
        try {
            shard s;
            s.secret_id = fixed_from_hex<32>(j.at("secret_id").get<std::string>());
            s.x = j.at("x").get<uint8_t>();
            s.y = from_hex(j.at("y").get<std::string>());
            s.threshold = j.at("threshold").get<uint8_t>();
            s.total = j.at("total").get<uint8_t>();
            return s;
        } catch (const json::exception &ex) {
            throw error(errc::bad_encoding, std::string { "malformed shard: " } + ex.what());
        }
    }

    namespace {
        uint8_t eval_poly(std::span<const uint8_t> coeffs, uint8_t x)
        {
            // Horner, highest degree first.
            uint8_t acc = 0;
            for (auto it = coeffs.rbegin(); it != coeffs.rend(); ++it)
                acc = gf256::add(gf256::mul(acc, x), *it);
            return acc;
        }
    }

    std::vector<shard> shard_distribute(byte_view secret, unsigned total, unsigned threshold, random_source &rng)
    {
        if (threshold == 0 || threshold > total || total > 255)
            throw error(errc::bad_threshold, "need 1 <= t <= n <= 255, got t=" + std::to_string(threshold) + " n=" + std::to_string(total));
        if (secret.empty())
            throw error(errc::bad_threshold, "secret must be non-empty");

        std::array<uint8_t, 32> salt;
        rng.fill(salt);
        encoder id_input;
        id_input.raw(salt).raw(secret);
        const auto secret_id = sha256(id_input.data());
        secure_wipe(salt);

        std::vector<shard> out(total);
        for (unsigned j = 0; j < total; ++j) {
            out[j].secret_id = secret_id;
            out[j].x = static_cast<uint8_t>(j + 1);
            out[j].y.resize(secret.size());
            out[j].threshold = static_cast<uint8_t>(threshold);
            out[j].total = static_cast<uint8_t>(total);
        }

        std::vector<uint8_t> coeffs(threshold);
        for (size_t i = 0; i < secret.size(); ++i) {
            coeffs[0] = secret[i];
            rng.fill(std::span { coeffs }.subspan(1));
            for (auto &s: out)
                s.y[i] = eval_poly(coeffs, s.x);
        }
        secure_wipe(coeffs);
        return out;
    }

    uint8_t interpolate(std::span<const std::pair<uint8_t, uint8_t>> points, uint8_t at)
    {
        uint8_t acc = 0;
        for (size_t i = 0; i < points.size(); ++i) {
            uint8_t num = 1, den = 1;
            for (size_t k = 0; k < points.size(); ++k) {
                if (k == i)
                    continue;
                num = gf256::mul(num, gf256::sub(at, points[k].first));
                den = gf256::mul(den, gf256::sub(points[i].first, points[k].first));
            }
            acc = gf256::add(acc, gf256::mul(points[i].second, gf256::div(num, den)));
        }
        return acc;
    }

    bytes shard_combine(std::span<const shard> shards)
    {
        if (shards.empty())
            throw error(errc::insufficient_shards, "no shards given");
        const auto &first = shards.front();
        std::set<uint8_t> xs;
        for (const auto &s: shards) {
            if (s.secret_id != first.secret_id || s.threshold != first.threshold || s.total != first.total)
                throw error(errc::mixed_secrets, "shards belong to different splits");
            if (s.y.size() != first.y.size())
                throw error(errc::mixed_secrets, "shards have different lengths");
            if (s.x == 0 || !xs.insert(s.x).second)
                throw error(errc::inconsistent_shards, "duplicate or zero x coordinate " + std::to_string(s.x));
        }
        if (first.threshold == 0 || shards.size() < first.threshold)
            throw error(errc::insufficient_shards, "have " + std::to_string(shards.size()) + ", need " + std::to_string(first.threshold));

        const size_t t = first.threshold;
        bytes secret(first.y.size());
        std::vector<std::pair<uint8_t, uint8_t>> points(t);
        for (size_t i = 0; i < secret.size(); ++i) {
            for (size_t k = 0; k < t; ++k)
                points[k] = { shards[k].x, shards[k].y[i] };
            secret[i] = interpolate(points, 0);
            for (size_t e = t; e < shards.size(); ++e) {
                if (interpolate(points, shards[e].x) != shards[e].y[i]) {
                    secure_wipe(secret);
                    throw error(errc::inconsistent_shards, "shard x=" + std::to_string(shards[e].x) + " disagrees with the interpolant");
                }
            }
        }
        return secret;
    }
}
