#include <zlib.h>
#include <dpaas/offchain/store.hpp>

namespace dpaas::offchain {
    std::string canonical_record(const std::string &key, const json &value)
    {
        return canonical_json(json { { "key", key }, { "value", value } });
    }

    namespace {
        uint32_t crc_of(std::string_view data)
        {
            return static_cast<uint32_t>(crc32(0L, reinterpret_cast<const Bytef *>(data.data()), static_cast<uInt>(data.size())));
        }
    }

    log_file_store::log_file_store(std::filesystem::path path): _path { std::move(path) }
    {
        if (_path.has_parent_path())
            std::filesystem::create_directories(_path.parent_path());
    }

    std::vector<std::pair<std::string, json>> log_file_store::load()
    {
        std::vector<std::pair<std::string, json>> out;
        uint64_t valid_end = 0;
        if (std::filesystem::exists(_path)) {
            std::ifstream in { _path, std::ios::binary };
            const bytes data { std::istreambuf_iterator<char> { in }, std::istreambuf_iterator<char> {} };
            size_t pos = 0;
            while (data.size() - pos >= 4) {
                decoder dec { byte_view { data }.subspan(pos) };
                const auto len = dec.u32();
                if (data.size() - pos < 8ULL + len)
                    break;
                const auto record = as_string(dec.raw(len));
                const auto crc = dec.u32();
                if (crc != crc_of(record))
                    throw error(errc::corrupt_log, _path.string() + ": checksum mismatch at offset " + std::to_string(pos));
                const auto j = json::parse(record, nullptr, false);
                if (j.is_discarded() || !j.contains("key") || !j.contains("value"))
                    throw error(errc::corrupt_log, _path.string() + ": malformed record at offset " + std::to_string(pos));
                out.emplace_back(j.at("key").get<std::string>(), j.at("value"));
                pos += 8 + len;
            }
            valid_end = pos;
        }
        if (std::filesystem::exists(_path) && std::filesystem::file_size(_path) != valid_end)
            std::filesystem::resize_file(_path, valid_end);
        _out = std::ofstream { _path, std::ios::binary | std::ios::app };
        if (!_out)
            throw error(errc::io_error, "cannot open " + _path.string());
        return out;
    }

    void log_file_store::append(const std::string &key, const json &value)
    {
        if (!_out.is_open()) {
            _out = std::ofstream { _path, std::ios::binary | std::ios::app };
            if (!_out)
                throw error(errc::io_error, "cannot open " + _path.string());
        }
        const auto record = canonical_record(key, value);
        encoder enc;
        enc.u32(static_cast<uint32_t>(record.size())).raw(as_bytes(record)).u32(crc_of(record));
        _out.write(reinterpret_cast<const char *>(enc.data().data()), static_cast<std::streamsize>(enc.data().size()));
        _out.flush();
        if (!_out)
            throw error(errc::io_error, "write to " + _path.string() + " failed");
    }
}
