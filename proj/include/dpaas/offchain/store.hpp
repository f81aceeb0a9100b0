#pragma once

#include <filesystem>
#include <fstream>
#include <memory>
#include <string>
#include <utility>
#include <vector>
#include <dpaas/common/codec.hpp>

namespace dpaas::offchain {
    // Canonical serialization of one repository record.
    std::string canonical_record(const std::string &key, const json &value);

    // Durability backend behind a repository. The repository keeps the ordered index in
    // memory; a backend only has to persist writes and hand them back on open.
    class record_store {
    public:
        virtual ~record_store() = default;
        virtual void append(const std::string &key, const json &value) = 0;
        // Every persisted write in order; later writes to a key supersede earlier ones.
        virtual std::vector<std::pair<std::string, json>> load() = 0;
    };

    class memory_store final : public record_store {
    public:
        void append(const std::string &, const json &) override {}
        std::vector<std::pair<std::string, json>> load() override { return {}; }
    };

    // Append-only log: each entry is len(4, big-endian) || canonical record || crc32(4, big-endian).
    // A truncated final entry (torn write) is dropped on load; a checksum mismatch is CorruptLog.
    class log_file_store final : public record_store {
    public:
        explicit log_file_store(std::filesystem::path path);

        void append(const std::string &key, const json &value) override;
        std::vector<std::pair<std::string, json>> load() override;
        [[nodiscard]] const std::filesystem::path &path() const noexcept { return _path; }
    private:
        std::filesystem::path _path;
        std::ofstream _out;
    };
}
