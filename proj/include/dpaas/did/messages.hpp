#pragma once

#include <string_view>
#include <dpaas/common/codec.hpp>
#include <dpaas/did/document.hpp>

// Signing inputs for registry mutations. Shared by the registry contract and its clients.
// Owner messages bind the entry version so a signature cannot be replayed after the
// entry changes.
namespace dpaas::did::messages {
    inline bytes update(const identifier &id, uint64_t version, const document &ddo)
    {
        return signing_message("did.update", { { "did", id.str() }, { "version", version }, { "ddo", ddo.to_json() } });
    }

    inline bytes bind_social(const identifier &id, uint64_t version, std::string_view platform, std::string_view profile_uri)
    {
        return signing_message("did.bind_social", { { "did", id.str() }, { "version", version }, { "platform", platform }, { "profile_uri", profile_uri } });
    }

    inline bytes set_delegates(const identifier &id, uint64_t version, const std::vector<identifier> &delegates)
    {
        json dels = json::array();
        for (const auto &d: delegates)
            dels.push_back(d.str());
        return signing_message("did.set_delegates", { { "did", id.str() }, { "version", version }, { "delegates", dels } });
    }

    inline bytes propose(const identifier &id, const verifying_key &new_key, const identifier &delegate)
    {
        return signing_message("did.propose", { { "did", id.str() }, { "new_key", to_hex(new_key) }, { "delegate", delegate.str() } });
    }

    inline bytes vote(const digest &proposal_id, const identifier &delegate)
    {
        return signing_message("did.vote", { { "proposal_id", to_hex(proposal_id) }, { "delegate", delegate.str() } });
    }

    inline bytes revoke(const identifier &id, uint64_t version)
    {
        return signing_message("did.revoke", { { "did", id.str() }, { "version", version } });
    }
}
