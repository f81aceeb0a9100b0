#include <algorithm>
#include <dpaas/did/did.hpp>

namespace dpaas {
    address address_of(const verifying_key &vk)
    {
        const auto d = sha256(vk);
        address a;
        std::copy_n(d.begin(), a.size(), a.begin());
        return a;
    }
}

namespace dpaas::did {
    namespace {
        constexpr std::string_view prefix = "did:dpaas:";
    }

    bool identifier::valid(std::string_view text) noexcept
    {
        if (text.size() != prefix.size() + 40 || !text.starts_with(prefix))
            return false;
        return std::all_of(text.begin() + prefix.size(), text.end(),
            [](char c) { return (c >= '0' && c <= '9') || (c >= 'a' && c <= 'f'); });
    }

    identifier identifier::parse(std::string_view text)
    {
        if (!valid(text))
            throw error(errc::bad_encoding, "not a did:dpaas identifier: " + std::string { text });
        return identifier { fixed_from_hex<20>(text.substr(prefix.size())) };
    }

    std::string identifier::str() const
    {
        return std::string { prefix } + to_hex(_addr);
    }
}
