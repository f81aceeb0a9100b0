#include <sodium.h>
#include <dpaas/common/crypto.hpp>
#include <dpaas/common/random.hpp>

namespace dpaas {
    void system_random::fill(std::span<uint8_t> out)
    {
        ensure_crypto_init();
        randombytes_buf(out.data(), out.size());
    }

    void seeded_random::fill(std::span<uint8_t> out)
    {
        for (auto &b: out)
            b = static_cast<uint8_t>(_engine() >> 56);
    }

    random_source &default_random()
    {
        static system_random rng;
        return rng;
    }
}
