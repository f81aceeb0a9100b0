#pragma once

#include <stdexcept>
#include <string>
#include <string_view>

namespace dpaas {

    // Every failure the platform reports, across all modules. The names returned by
    // to_string() are the wire codes used in structured error bodies and CLI output.
    enum class errc {
        ok,
        // ledger
        duplicate_account,
        unknown_account,
        bad_signature,
        bad_nonce,
        bad_gas,
        unknown_contract,
        malformed_query,
        malformed_call,
        not_anchor_authority,
        anchor_exists,
        epoch_gap,
        // keyvault
        bad_threshold,
        insufficient_shards,
        mixed_secrets,
        inconsistent_shards,
        deleted_key,
        unknown_key,
        wrong_passphrase,
        bad_checksum,
        bad_encoding,
        // did
        not_found,
        already_registered,
        malformed_ddo,
        revoked,
        not_owner,
        unknown_delegate,
        not_delegate,
        already_voted,
        proposal_closed,
        unknown_proposal,
        // credential
        not_super,
        unknown_did,
        already_issuer,
        unknown_issuer,
        untrusted_issuer,
        missing_attribute,
        empty_selection,
        unknown_credential,
        cancelled,
        bad_window,
        not_holder,
        not_issuer,
        bad_token,
        integrity_mismatch,
        expired,
        not_yet_valid,
        consumed_token,
        bad_issuer_signature,
        // offchain
        unknown_repository,
        unknown_anchor,
        malformed_record,
        corrupt_log,
        io_error,
        // gateway
        bad_config,
        bind_failure,
        unknown_operation,
        bad_batch,
        bad_request,
    };

    std::string_view to_string(errc code) noexcept;
    errc errc_from_string(std::string_view name) noexcept;

    class error : public std::runtime_error {
    public:
        error(errc code, std::string detail = {});

        [[nodiscard]] errc code() const noexcept { return _code; }
        [[nodiscard]] const std::string &detail() const noexcept { return _detail; }
    private:
        errc _code;
        std::string _detail;
    };
}
