#include <dpaas/ledger/ledger.hpp>

namespace dpaas::ledger {
    namespace {
        enum journal_kind : uint8_t { kind_account = 1, kind_submit = 2, kind_block = 3 };
    }

    ledger::ledger(chain_config cfg, std::optional<std::filesystem::path> journal_path): _cfg { std::move(cfg) }
    {
        _cfg.validate();
        block genesis;
        genesis.height = 0;
        genesis.timestamp_ms = _cfg.genesis_time_ms;
        genesis.parent_digest = _cfg.hash();
        genesis.state_digest = _state.state_digest();
        _blocks.push_back(std::move(genesis));
        if (journal_path) {
            if (std::filesystem::exists(*journal_path))
                replay(*journal_path);
            _journal.emplace(*journal_path, std::ios::binary | std::ios::app);
            if (!*_journal)
                throw error(errc::io_error, "cannot open journal " + journal_path->string());
        }
    }

    void ledger::journal(uint8_t kind, byte_view payload)
    {
        if (!_journal || _replaying)
            return;
        encoder enc;
        enc.u8(kind).blob(payload);
        _journal->write(reinterpret_cast<const char *>(enc.data().data()), static_cast<std::streamsize>(enc.data().size()));
        _journal->flush();
        if (!*_journal)
            throw error(errc::io_error, "journal write failed");
    }

    void ledger::replay(const std::filesystem::path &path)
    {
        std::ifstream in { path, std::ios::binary };
        const bytes data { std::istreambuf_iterator<char> { in }, std::istreambuf_iterator<char> {} };
        decoder dec { data, errc::corrupt_log };
        _replaying = true;
        while (!dec.done()) {
            const auto kind = dec.u8();
            const auto payload = dec.blob();
            switch (kind) {
                case kind_account:
                    {
                    verifying_key key {};
                    if (payload.size() != key.size())
                        throw error(errc::corrupt_log, "bad account record");
                    std::copy(payload.begin(), payload.end(), key.begin());
                    create_account(key);
                    }
                    break;
                case kind_submit:
                    submit_transaction(transaction::decode(payload));
                    break;
                case kind_block: {
                    const auto h = produce_block().hash();
                    if (!std::equal(payload.begin(), payload.end(), h.begin(), h.end()))
                        throw error(errc::corrupt_log, "replayed block " + std::to_string(height()) + " digest differs from the journal");
                    break;
                }
                default:
                    throw error(errc::corrupt_log, "unknown journal record kind " + std::to_string(kind));
            }
        }
        _replaying = false;
    }

    account ledger::create_account(const verifying_key &key)
    {
        std::unique_lock lock { _mutex };
        const auto addr = address_of(key);
        if (_accounts.contains(addr))
            throw error(errc::duplicate_account, to_hex(addr));
        account a { addr, key, 0 };
        _accounts.emplace(addr, a);
        journal(kind_account, key);
        return a;
    }

    account ledger::ensure_account(const verifying_key &key)
    {
        {
            std::shared_lock lock { _mutex };
            if (const auto it = _accounts.find(address_of(key)); it != _accounts.end())
                return it->second;
        }
        try {
            return create_account(key);
        } catch (const error &ex) {
            if (ex.code() != errc::duplicate_account)
                throw;
            return *find_account(address_of(key));
        }
    }

    std::optional<account> ledger::find_account(const address &addr) const
    {
        std::shared_lock lock { _mutex };
        const auto it = _accounts.find(addr);
        if (it == _accounts.end())
            return {};
        return it->second;
    }

    uint64_t ledger::next_nonce(const address &addr) const
    {
        std::shared_lock lock { _mutex };
        if (const auto it = _pending_nonce.find(addr); it != _pending_nonce.end())
            return it->second + 1;
        const auto it = _accounts.find(addr);
        if (it == _accounts.end())
            throw error(errc::unknown_account, to_hex(addr));
        return it->second.nonce + 1;
    }

    contract_call ledger::validate_locked(const transaction &tx) const
    {
        const auto it = _accounts.find(tx.sender);
        if (it == _accounts.end())
            throw error(errc::unknown_account, to_hex(tx.sender));
        if (!verify_signature(it->second.key, tx.signing_bytes(), tx.sig))
            throw error(errc::bad_signature, "transaction from " + to_hex(tx.sender));
        const auto pit = _pending_nonce.find(tx.sender);
        const auto expected = (pit != _pending_nonce.end() ? pit->second : it->second.nonce) + 1;
        if (tx.nonce != expected)
            throw error(errc::bad_nonce, "expected " + std::to_string(expected) + ", got " + std::to_string(tx.nonce));
        if (tx.target != did_registry && tx.target != anchoring_registry)
            throw error(errc::unknown_contract, tx.target);
        auto call = contract_call::decode(tx.payload);
        const auto cost = _cfg.gas_for(tx.target, call.op);
        if (tx.gas != cost)
            throw error(errc::bad_gas, tx.target + "." + call.op + " costs " + std::to_string(cost) + ", transaction offers " + std::to_string(tx.gas));
        return call;
    }

    tx_id ledger::submit_locked(const transaction &tx, const contract_call &)
    {
        const auto id = tx.id();
        _pending_nonce[tx.sender] = tx.nonce;
        _pool.emplace_back(tx, id);
        _pending_ids.insert(id);
        journal(kind_submit, tx.encode());
        return id;
    }

    tx_id ledger::submit_transaction(const transaction &tx)
    {
        std::unique_lock lock { _mutex };
        const auto call = validate_locked(tx);
        return submit_locked(tx, call);
    }

    tx_id ledger::submit_call(const keyvault::key_pair &signer, std::string_view target, const contract_call &call)
    {
        transaction tx;
        tx.sender = address_of(signer.public_key());
        tx.target = std::string { target };
        tx.payload = call.encode();
        tx.gas = _cfg.gas_for(target, call.op);
        std::unique_lock lock { _mutex };
        const auto it = _accounts.find(tx.sender);
        if (it == _accounts.end())
            throw error(errc::unknown_account, to_hex(tx.sender));
        const auto pit = _pending_nonce.find(tx.sender);
        tx.nonce = (pit != _pending_nonce.end() ? pit->second : it->second.nonce) + 1;
        tx.sig = signer.sign(tx.signing_bytes());
        const auto checked = validate_locked(tx);
        return submit_locked(tx, checked);
    }

    void ledger::add_pre_block_hook(std::function<void(uint64_t)> hook)
    {
        std::lock_guard lock { _hook_mutex };
        _pre_block_hooks.push_back(std::move(hook));
    }

    block ledger::produce_block()
    {
        std::lock_guard producer { _producer_mutex };
        const auto next_height = height() + 1;
        if (!_replaying) {
            std::vector<std::function<void(uint64_t)>> hooks;
            {
                std::lock_guard lock { _hook_mutex };
                hooks = _pre_block_hooks;
            }
            for (const auto &hook: hooks)
                hook(next_height);
        }

        std::unique_lock lock { _mutex };
        block b;
        b.height = next_height;
        b.timestamp_ms = _blocks.back().timestamp_ms + _cfg.block_interval_ms;
        b.parent_digest = _blocks.back().hash();
        while (!_pool.empty()) {
            const auto &[tx, id] = _pool.front();
            if (b.gas_used + tx.gas > _cfg.block_gas_limit)
                break;
            auto &acct = _accounts.at(tx.sender);
            const exec_context ctx { b.height, b.timestamp_ms, tx.sender, acct.key };
            exec_result result;
            try {
                result = _state.execute(tx.target, contract_call::decode(tx.payload), ctx);
            } catch (const error &ex) {
                result = { ex.code(), ex.detail(), {} };
            }
            acct.nonce = tx.nonce;
            if (const auto pit = _pending_nonce.find(tx.sender); pit != _pending_nonce.end() && pit->second == tx.nonce)
                _pending_nonce.erase(pit);
            receipt r { id, b.height, static_cast<uint32_t>(b.transactions.size()), result.status, std::move(result.detail), std::move(result.output) };
            _receipts.emplace(id, r);
            _pending_ids.erase(id);
            b.gas_used += tx.gas;
            b.receipts.push_back(std::move(r));
            b.transactions.push_back(tx);
            _pool.pop_front();
        }
        b.state_digest = _state.state_digest();
        _blocks.push_back(b);
        journal(kind_block, b.hash());
        return b;
    }

    bytes ledger::query_contract(std::string_view target, byte_view query) const
    {
        std::shared_lock lock { _mutex };
        return _state.query(target, query);
    }

    std::pair<uint64_t, std::vector<bytes>> ledger::query_snapshot(std::string_view target, std::span<const bytes> queries) const
    {
        std::shared_lock lock { _mutex };
        std::vector<bytes> out;
        out.reserve(queries.size());
        for (const auto &q: queries)
            out.push_back(_state.query(target, q));
        return { _blocks.back().height, std::move(out) };
    }

    std::optional<receipt> ledger::find_receipt(const tx_id &id) const
    {
        std::shared_lock lock { _mutex };
        const auto it = _receipts.find(id);
        if (it == _receipts.end())
            return {};
        return it->second;
    }

    bool ledger::is_pending(const tx_id &id) const
    {
        std::shared_lock lock { _mutex };
        return _pending_ids.contains(id);
    }

    uint64_t ledger::height() const
    {
        std::shared_lock lock { _mutex };
        return _blocks.back().height;
    }

    int64_t ledger::now_ms() const
    {
        std::shared_lock lock { _mutex };
        return _blocks.back().timestamp_ms;
    }

    block ledger::block_at(uint64_t h) const
    {
        std::shared_lock lock { _mutex };
        if (h >= _blocks.size())
            throw error(errc::not_found, "no block at height " + std::to_string(h));
        return _blocks[h];
    }

    size_t ledger::pending_count() const
    {
        std::shared_lock lock { _mutex };
        return _pool.size();
    }

    digest ledger::state_digest() const
    {
        std::shared_lock lock { _mutex };
        return _blocks.back().state_digest;
    }
}
