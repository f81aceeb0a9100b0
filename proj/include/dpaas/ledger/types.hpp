#pragma once

#include <cstdint>
#include <string>
#include <vector>
#include <dpaas/common/codec.hpp>
#include <dpaas/common/crypto.hpp>
#include <dpaas/did/did.hpp>

namespace dpaas::ledger {
    using tx_id = digest;

    inline constexpr std::string_view did_registry = "did-registry";
    inline constexpr std::string_view anchoring_registry = "anchoring-registry";

    struct account {
        dpaas::address address {};
        verifying_key key {};
        uint64_t nonce = 0;
    };

    // Contract call carried in a transaction payload: an operation tag plus canonical JSON arguments.
    struct contract_call {
        std::string op;
        json args;

        [[nodiscard]] bytes encode() const;
        static contract_call decode(byte_view payload);
    };

    struct transaction {
        dpaas::address sender {};
        uint64_t nonce = 0;
        std::string target;
        bytes payload;
        uint64_t gas = 0;
        signature sig;

        // Canonical encoding of every field before the signature.
        [[nodiscard]] bytes signing_bytes() const;
        [[nodiscard]] bytes encode() const;
        static transaction decode(byte_view data);
        [[nodiscard]] tx_id id() const { return sha256(encode()); }
    };

    struct receipt {
        tx_id id {};
        uint64_t height = 0;
        uint32_t index = 0;
        errc status = errc::ok;
        std::string detail;
        json output;

        [[nodiscard]] bool ok() const noexcept { return status == errc::ok; }
        [[nodiscard]] json to_json() const;
    };

    struct block {
        uint64_t height = 0;
        int64_t timestamp_ms = 0;
        digest parent_digest {};
        std::vector<transaction> transactions;
        std::vector<receipt> receipts;
        uint64_t gas_used = 0;
        digest state_digest {};

        [[nodiscard]] bytes encode() const;
        [[nodiscard]] digest hash() const { return sha256(encode()); }
        [[nodiscard]] json summary() const;
    };
}
