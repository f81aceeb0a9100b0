#include <dpaas/common/codec.hpp>
#include <dpaas/common/error.hpp>

namespace dpaas {
    encoder &encoder::u8(uint8_t v)
    {
        _buf.push_back(v);
        return *this;
    }

    encoder &encoder::u32(uint32_t v)
    {
        for (int shift = 24; shift >= 0; shift -= 8)
            _buf.push_back(static_cast<uint8_t>(v >> shift));
        return *this;
    }

    encoder &encoder::u64(uint64_t v)
    {
        for (int shift = 56; shift >= 0; shift -= 8)
            _buf.push_back(static_cast<uint8_t>(v >> shift));
        return *this;
    }

    encoder &encoder::raw(byte_view v)
    {
        _buf.insert(_buf.end(), v.begin(), v.end());
        return *this;
    }

    encoder &encoder::blob(byte_view v)
    {
        if (v.size() > UINT32_MAX)
            throw error(errc::bad_encoding, "field too large");
        u32(static_cast<uint32_t>(v.size()));
        return raw(v);
    }

    byte_view decoder::raw(size_t n)
    {
        if (_data.size() - _pos < n)
            throw error(_on_error, "truncated input");
        auto out = _data.subspan(_pos, n);
        _pos += n;
        return out;
    }

    uint8_t decoder::u8()
    {
        return raw(1)[0];
    }

    uint32_t decoder::u32()
    {
        uint32_t v = 0;
        for (auto b: raw(4))
            v = (v << 8) | b;
        return v;
    }

    uint64_t decoder::u64()
    {
        uint64_t v = 0;
        for (auto b: raw(8))
            v = (v << 8) | b;
        return v;
    }

    byte_view decoder::blob()
    {
        const auto len = u32();
        return raw(len);
    }

    std::string decoder::str()
    {
        return std::string { as_string(blob()) };
    }

    void decoder::expect_done() const
    {
        if (!done())
            throw error(_on_error, "trailing bytes");
    }

    std::string canonical_json(const json &j)
    {
        return j.dump(-1, ' ', false, json::error_handler_t::strict);
    }

    bytes signing_message(std::string_view op, const json &body)
    {
        const auto text = canonical_json(json { { "op", op }, { "body", body } });
        return { text.begin(), text.end() };
    }
}
