#pragma once

#include <array>
#include <compare>
#include <cstdint>
#include <span>
#include <string>
#include <string_view>
#include <vector>

namespace dpaas {
    using bytes = std::vector<uint8_t>;
    using byte_view = std::span<const uint8_t>;
    using digest = std::array<uint8_t, 32>;

    inline byte_view as_bytes(std::string_view s) noexcept
    {
        return { reinterpret_cast<const uint8_t *>(s.data()), s.size() };
    }

    inline std::string_view as_string(byte_view b) noexcept
    {
        return { reinterpret_cast<const char *>(b.data()), b.size() };
    }

    // Lowercase hexadecimal.
    std::string to_hex(byte_view data);
    // Accepts either case; throws error(bad_encoding) on odd length or non-hex characters.
    bytes from_hex(std::string_view hex);

    template <size_t N>
    std::array<uint8_t, N> fixed_from_hex(std::string_view hex);

    // RFC 4648 section 5, no padding.
    std::string base64url_encode(byte_view data);
    bytes base64url_decode(std::string_view text);
    // Standard alphabet with padding; used by the keystore envelope.
    std::string base64_encode(byte_view data);
    bytes base64_decode(std::string_view text);

    // Constant-time comparison for MACs and secret-derived material.
    bool secure_equal(byte_view a, byte_view b) noexcept;

    // Overwrites a buffer in a way the optimizer cannot drop.
    void secure_wipe(std::span<uint8_t> data) noexcept;

    // Fixed-size secret buffer that wipes itself on destruction.
    template <size_t N>
    class secret_array {
    public:
        secret_array() = default;
        explicit secret_array(byte_view src);
        secret_array(const secret_array &) = default;
        secret_array &operator=(const secret_array &) = default;
        ~secret_array() { secure_wipe(_data); }

        [[nodiscard]] byte_view view() const noexcept { return _data; }
        [[nodiscard]] uint8_t *data() noexcept { return _data.data(); }
        [[nodiscard]] const uint8_t *data() const noexcept { return _data.data(); }
        static constexpr size_t size() noexcept { return N; }

        bool operator==(const secret_array &o) const noexcept { return secure_equal(_data, o._data); }
    private:
        std::array<uint8_t, N> _data {};
    };
}

#include <dpaas/common/error.hpp>

namespace dpaas {
    template <size_t N>
    std::array<uint8_t, N> fixed_from_hex(std::string_view hex)
    {
        const auto raw = from_hex(hex);
        if (raw.size() != N)
            throw error(errc::bad_encoding, "expected " + std::to_string(N) + " bytes of hex, got " + std::to_string(raw.size()));
        std::array<uint8_t, N> out;
        std::copy(raw.begin(), raw.end(), out.begin());
        return out;
    }

    template <size_t N>
    secret_array<N>::secret_array(byte_view src)
    {
        if (src.size() != N)
            throw error(errc::bad_encoding, "secret must be " + std::to_string(N) + " bytes");
        std::copy(src.begin(), src.end(), _data.begin());
    }
}
