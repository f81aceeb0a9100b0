#pragma once

#include <functional>
#include <map>
#include <string>
#include <dpaas/did/service.hpp>
#include <dpaas/offchain/repository.hpp>

namespace dpaas::offchain {
    using attribute_map = std::map<std::string, std::string>;

    // Decides whether an issuer may currently write and sign; backed by the Issuer Repository.
    using issuer_check = std::function<bool(const did::identifier &)>;

    // Identity and Fact Data Repositories, one per issuer ("issuer:<did>"). Records are
    // keyed by holder DID; each value maps attribute name to value.
    class identity_fact_store {
    public:
        identity_fact_store(repository_set &repos, const did::service &dids, issuer_check is_active_issuer);

        static std::string repository_id(const did::identifier &issuer);
        static bytes put_message(const did::identifier &issuer, const did::identifier &holder, const attribute_map &attributes);

        // Merges attributes for a holder; a name already present is overwritten.
        void put_attributes(const did::identifier &issuer, const did::identifier &holder, const attribute_map &attributes,
            const signature &issuer_signature);
        [[nodiscard]] attribute_map attributes(const did::identifier &issuer, const did::identifier &holder) const;
    private:
        repository_set &_repos;
        const did::service &_dids;
        issuer_check _is_active_issuer;
    };
}
