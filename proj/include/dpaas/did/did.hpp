#pragma once

#include <array>
#include <compare>
#include <string>
#include <string_view>
#include <dpaas/common/crypto.hpp>

namespace dpaas {
    using address = std::array<uint8_t, 20>;

    // First 20 bytes of digest(verifying key).
    address address_of(const verifying_key &vk);
}

namespace dpaas::did {
    inline constexpr std::string_view method = "dpaas";

    // did:dpaas:<40 lowercase hex digits of the controlling account address>
    class identifier {
    public:
        identifier() = default;
        explicit identifier(const address &addr): _addr { addr } {}

        static identifier parse(std::string_view text);
        static bool valid(std::string_view text) noexcept;

        [[nodiscard]] std::string str() const;
        [[nodiscard]] const address &account() const noexcept { return _addr; }

        auto operator<=>(const identifier &) const = default;
    private:
        address _addr {};
    };
}
