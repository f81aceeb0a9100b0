#include <array>
#include <utility>
#include <dpaas/common/error.hpp>

namespace dpaas {
    namespace {
        constexpr std::pair<errc, std::string_view> names[] {
            { errc::ok, "Ok" },
            { errc::duplicate_account, "DuplicateAccount" },
            { errc::unknown_account, "UnknownAccount" },
            { errc::bad_signature, "BadSignature" },
            { errc::bad_nonce, "BadNonce" },
            { errc::bad_gas, "BadGas" },
            { errc::unknown_contract, "UnknownContract" },
            { errc::malformed_query, "MalformedQuery" },
            { errc::malformed_call, "MalformedCall" },
            { errc::not_anchor_authority, "NotAnchorAuthority" },
            { errc::anchor_exists, "AnchorExists" },
            { errc::epoch_gap, "EpochGap" },
            { errc::bad_threshold, "BadThreshold" },
            { errc::insufficient_shards, "InsufficientShards" },
            { errc::mixed_secrets, "MixedSecrets" },
            { errc::inconsistent_shards, "InconsistentShards" },
            { errc::deleted_key, "DeletedKey" },
            { errc::unknown_key, "UnknownKey" },
            { errc::wrong_passphrase, "WrongPassphrase" },
            { errc::bad_checksum, "BadChecksum" },
            { errc::bad_encoding, "BadEncoding" },
            { errc::not_found, "NotFound" },
            { errc::already_registered, "AlreadyRegistered" },
            { errc::malformed_ddo, "MalformedDdo" },
            { errc::revoked, "Revoked" },
            { errc::not_owner, "NotOwner" },
            { errc::unknown_delegate, "UnknownDelegate" },
            { errc::not_delegate, "NotDelegate" },
            { errc::already_voted, "AlreadyVoted" },
            { errc::proposal_closed, "ProposalClosed" },
            { errc::unknown_proposal, "UnknownProposal" },
            { errc::not_super, "NotSuper" },
            { errc::unknown_did, "UnknownDid" },
            { errc::already_issuer, "AlreadyIssuer" },
            { errc::unknown_issuer, "UnknownIssuer" },
            { errc::untrusted_issuer, "UntrustedIssuer" },
            { errc::missing_attribute, "MissingAttribute" },
            { errc::empty_selection, "EmptySelection" },
            { errc::unknown_credential, "UnknownCredential" },
            { errc::cancelled, "Cancelled" },
            { errc::bad_window, "BadWindow" },
            { errc::not_holder, "NotHolder" },
            { errc::not_issuer, "NotIssuer" },
            { errc::bad_token, "BadToken" },
            { errc::integrity_mismatch, "IntegrityMismatch" },
            { errc::expired, "Expired" },
            { errc::not_yet_valid, "NotYetValid" },
            { errc::consumed_token, "ConsumedToken" },
            { errc::bad_issuer_signature, "BadIssuerSignature" },
            { errc::unknown_repository, "UnknownRepository" },
            { errc::unknown_anchor, "UnknownAnchor" },
            { errc::malformed_record, "MalformedRecord" },
            { errc::corrupt_log, "CorruptLog" },
            { errc::io_error, "IoError" },
            { errc::bad_config, "BadConfig" },
            { errc::bind_failure, "BindFailure" },
            { errc::unknown_operation, "UnknownOperation" },
            { errc::bad_batch, "BadBatch" },
            { errc::bad_request, "BadRequest" },
        };

        std::string make_message(errc code, const std::string &detail)
        {
            std::string msg { to_string(code) };
            if (!detail.empty()) {
                msg += ": ";
                msg += detail;
            }
            return msg;
        }
    }

    std::string_view to_string(errc code) noexcept
    {
        for (const auto &[c, name]: names)
            if (c == code)
                return name;
        return "Unknown";
    }

    errc errc_from_string(std::string_view name) noexcept
    {
        for (const auto &[c, n]: names)
            if (n == name)
                return c;
        return errc::bad_request;
    }

    error::error(errc code, std::string detail)
        : std::runtime_error { make_message(code, detail) }, _code { code }, _detail { std::move(detail) }
    {
    }
}
