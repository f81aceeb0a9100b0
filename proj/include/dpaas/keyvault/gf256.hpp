#pragma once

#include <array>
#include <cstdint>

// Arithmetic in GF(2^8) with reduction polynomial x^8 + x^4 + x^3 + x + 1 (0x11b).
namespace dpaas::keyvault::gf256 {
    namespace detail {
        struct tables {
            std::array<uint8_t, 512> exp {};
            std::array<uint8_t, 256> log {};
        };

        // 0x03 generates the multiplicative group under 0x11b.
        constexpr tables make_tables()
        {
            tables t;
            unsigned x = 1;
            for (unsigned i = 0; i < 255; ++i) {
                t.exp[i] = static_cast<uint8_t>(x);
                t.log[x] = static_cast<uint8_t>(i);
                // x *= 3
                unsigned x2 = x << 1;
                if (x2 & 0x100)
                    x2 ^= 0x11b;
                x ^= x2;
            }
            for (unsigned i = 255; i < 512; ++i)
                t.exp[i] = t.exp[i - 255];
            return t;
        }

        inline constexpr tables table = make_tables();
    }

    constexpr uint8_t add(uint8_t a, uint8_t b) noexcept { return a ^ b; }
    constexpr uint8_t sub(uint8_t a, uint8_t b) noexcept { return a ^ b; }

    constexpr uint8_t mul(uint8_t a, uint8_t b) noexcept
    {
        if (a == 0 || b == 0)
            return 0;
        return detail::table.exp[detail::table.log[a] + detail::table.log[b]];
    }

    // inv(0) is undefined; callers guarantee a != 0.
    constexpr uint8_t inv(uint8_t a) noexcept
    {
        return detail::table.exp[255 - detail::table.log[a]];
    }

    constexpr uint8_t div(uint8_t a, uint8_t b) noexcept
    {
        if (a == 0)
            return 0;
        return detail::table.exp[detail::table.log[a] + 255 - detail::table.log[b]];
    }
}
