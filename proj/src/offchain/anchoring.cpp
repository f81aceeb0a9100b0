#include <dpaas/offchain/anchoring.hpp>

namespace dpaas::offchain {
    json anchor_record::to_json() const
    {
        return json { { "repository_id", repository_id }, { "epoch", epoch }, { "digest", to_hex(root) }, { "anchored_at", anchored_at } };
    }

    json integrity_report::to_json() const
    {
        json j { { "repository_id", repository_id }, { "epoch", epoch }, { "result", match ? "match" : "mismatch" } };
        j["expected"] = to_hex(expected);
        j["actual"] = to_hex(actual);
        return j;
    }

    anchor_service::anchor_service(repository_set &repos, ledger::ledger &chain, keyvault::key_pair authority)
        : _repos { repos }, _chain { chain }, _authority { std::move(authority) }
    {
        _chain.ensure_account(_authority.public_key());
    }

    pending_anchor anchor_service::submit_anchor(const std::string &repository_id)
    {
        const auto root = _repos.repository_digest(repository_id);
        std::lock_guard lock { _mutex };
        // Next epoch follows both the committed anchors and ours still in the pool. An
        // anchor that fails drops out once its receipt exists, so no gap persists.
        auto &in_flight = _in_flight[repository_id];
        std::erase_if(in_flight, [this](const auto &p) { return _chain.find_receipt(p.first).has_value(); });
        auto epoch = epochs(repository_id);
        for (const auto &[_, e]: in_flight)
            epoch = std::max(epoch, e + 1);
        const auto tx = _chain.submit_call(_authority, ledger::anchoring_registry,
            ledger::contract_call { "anchor", { { "repository_id", repository_id }, { "epoch", epoch }, { "digest", to_hex(root) } } });
        in_flight.emplace_back(tx, epoch);
        return { repository_id, epoch, root, tx };
    }

    anchor_record anchor_service::anchor(const std::string &repository_id)
    {
        const auto p = submit_anchor(repository_id);
        for (;;) {
            if (const auto r = _chain.find_receipt(p.tx)) {
                if (!r->ok())
                    throw error(r->status, r->detail);
                return { p.repository_id, p.epoch, p.root, r->height };
            }
            _chain.produce_block();
        }
    }

    std::optional<anchor_record> anchor_service::find(const std::string &repository_id, uint64_t epoch) const
    {
        const auto r = ledger::parse_query_result(_chain.query_contract(ledger::anchoring_registry,
            ledger::make_query("anchor", { { "repository_id", repository_id }, { "epoch", epoch } })));
        if (!r.found)
            return {};
        const auto a = ledger::anchor_entry::from_json(r.value);
        return anchor_record { a.repository_id, a.epoch, a.root, a.anchored_at };
    }

    uint64_t anchor_service::epochs(const std::string &repository_id) const
    {
        const auto r = ledger::parse_query_result(_chain.query_contract(ledger::anchoring_registry,
            ledger::make_query("epochs", { { "repository_id", repository_id } })));
        return r.value.at("count").get<uint64_t>();
    }

    integrity_report anchor_service::verify_integrity(const std::string &repository_id, uint64_t epoch) const
    {
        const auto &repo = _repos.at(repository_id);
        const auto a = find(repository_id, epoch);
        if (!a)
            throw error(errc::unknown_anchor, repository_id + "@" + std::to_string(epoch));
        integrity_report r;
        r.repository_id = repository_id;
        r.epoch = epoch;
        r.expected = a->root;
        r.actual = repo.root();
        r.match = r.expected == r.actual;
        return r;
    }

    void anchor_service::schedule(uint64_t period, std::vector<std::string> repository_ids)
    {
        if (period == 0)
            throw error(errc::bad_request, "anchoring period must be at least 1 block");
        _chain.add_pre_block_hook([this, period, ids = std::move(repository_ids)](uint64_t height) {
            if (height % period != 0)
                return;
            for (const auto &id: ids.empty() ? _repos.ids() : ids)
                submit_anchor(id);
        });
    }
}
