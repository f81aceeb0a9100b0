#pragma once

#include <cstdint>
#include <string>
#include <string_view>
#include <json.hpp>
#include <dpaas/common/bytes.hpp>

namespace dpaas {
    using json = nlohmann::json;

    // Canonical binary encoding: fields concatenated in declared order, integers
    // big-endian fixed width, variable-length fields prefixed by a 4-byte length.
    class encoder {
    public:
        encoder &u8(uint8_t v);
        encoder &u32(uint32_t v);
        encoder &u64(uint64_t v);
        encoder &i64(int64_t v) { return u64(static_cast<uint64_t>(v)); }
        encoder &raw(byte_view v);
        encoder &blob(byte_view v);
        encoder &str(std::string_view v) { return blob(as_bytes(v)); }

        [[nodiscard]] const bytes &data() const noexcept { return _buf; }
        bytes take() noexcept { return std::move(_buf); }
    private:
        bytes _buf;
    };

    // Throws error(errc) on truncated input; the code is chosen by the caller.
    class decoder {
    public:
        explicit decoder(byte_view data, errc on_error = errc::bad_encoding): _data { data }, _on_error { on_error } {}

        uint8_t u8();
        uint32_t u32();
        uint64_t u64();
        int64_t i64() { return static_cast<int64_t>(u64()); }
        byte_view raw(size_t n);
        byte_view blob();
        std::string str();

        template <size_t N>
        std::array<uint8_t, N> fixed()
        {
            const auto v = raw(N);
            std::array<uint8_t, N> out;
            std::copy(v.begin(), v.end(), out.begin());
            return out;
        }

        [[nodiscard]] bool done() const noexcept { return _pos == _data.size(); }
        void expect_done() const;
    private:
        byte_view _data;
        size_t _pos = 0;
        errc _on_error;
    };

    // Sorted keys, no insignificant whitespace, UTF-8 output. The single canonical form
    // for anything that is digested or signed as JSON.
    std::string canonical_json(const json &j);

    // Domain-separated signing input: canonical_json({"op": op, "body": body}).
    bytes signing_message(std::string_view op, const json &body);
}
