#include <dpaas/ledger/types.hpp>

namespace dpaas::ledger {
    bytes contract_call::encode() const
    {
        encoder enc;
        enc.str(op).str(canonical_json(args));
        return enc.take();
    }

    contract_call contract_call::decode(byte_view payload)
    {
        decoder dec { payload, errc::malformed_call };
        contract_call c;
        c.op = dec.str();
        const auto text = dec.str();
        dec.expect_done();
        c.args = json::parse(text, nullptr, false);
        if (c.args.is_discarded())
            throw error(errc::malformed_call, "arguments are not JSON");
        return c;
    }

    bytes transaction::signing_bytes() const
    {
        encoder enc;
        enc.blob(sender).u64(nonce).str(target).blob(payload).u64(gas);
        return enc.take();
    }

    bytes transaction::encode() const
    {
        encoder enc;
        enc.raw(signing_bytes()).str(sig.algorithm).blob(sig.value);
        return enc.take();
    }

    transaction transaction::decode(byte_view data)
    {
        decoder dec { data };
        transaction tx;
        const auto sender = dec.blob();
        if (sender.size() != tx.sender.size())
            throw error(errc::bad_encoding, "sender must be 20 bytes");
        std::copy(sender.begin(), sender.end(), tx.sender.begin());
        tx.nonce = dec.u64();
        tx.target = dec.str();
        const auto payload = dec.blob();
        tx.payload.assign(payload.begin(), payload.end());
        tx.gas = dec.u64();
        tx.sig.algorithm = dec.str();
        const auto sig = dec.blob();
        if (sig.size() != tx.sig.value.size())
            throw error(errc::bad_encoding, "signature must be 64 bytes");
        std::copy(sig.begin(), sig.end(), tx.sig.value.begin());
        dec.expect_done();
        return tx;
    }

    json receipt::to_json() const
    {
        json j {
            { "tx_id", to_hex(id) },
            { "height", height },
            { "index", index },
            { "status", ok() ? "success" : "failed" },
        };
        if (!ok()) {
            j["error"] = to_string(status);
            j["detail"] = detail;
        }
        if (!output.is_null())
            j["output"] = output;
        return j;
    }

    bytes block::encode() const
    {
        encoder enc;
        enc.u64(height).i64(timestamp_ms).blob(parent_digest).u32(static_cast<uint32_t>(transactions.size()));
        for (size_t i = 0; i < transactions.size(); ++i) {
            enc.blob(transactions[i].encode());
            enc.str(to_string(receipts[i].status));
        }
        enc.u64(gas_used).blob(state_digest);
        return enc.take();
    }

    json block::summary() const
    {
        json txs = json::array();
        for (const auto &r: receipts)
            txs.push_back(r.to_json());
        return json {
            { "height", height },
            { "timestamp_ms", timestamp_ms },
            { "parent_digest", to_hex(parent_digest) },
            { "digest", to_hex(hash()) },
            { "gas_used", gas_used },
            { "state_digest", to_hex(state_digest) },
            { "transactions", std::move(txs) },
        };
    }
}
