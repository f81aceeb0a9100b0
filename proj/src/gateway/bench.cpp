#include <algorithm>
#include <atomic>
#include <cmath>
#include <chrono>
#include <thread>
#include <dpaas/gateway/bench.hpp>
#include <dpaas/gateway/platform.hpp>

namespace dpaas::gateway {
    namespace {
        using credential::credential_service;

        const std::vector<std::string> off_chain_ops {
            "resolution",
            "master-sub-key-generation",
            "shard-distribution",
            "selective-content-generation",
            "time-constrained-access",
            "one-off-access",
            "verification",
        };

        // Scratch platform with one registered issuer and holder, an approved issuer
        // record, holder attributes and one issued credential to grant and verify against.
        class fixture {
        public:
            fixture(const platform_config &cfg, uint64_t seed): _rng { seed }
            {
                auto scratch = cfg;
                scratch.storage.reset();
                scratch.anchoring_period = 0;
                _p = std::make_unique<platform>(scratch);
            }

            platform &p() { return *_p; }
            seeded_random &rng() { return _rng; }

            void prepare_credentials()
            {
                if (_cred)
                    return;
                _issuer_key.emplace(keyvault::generate_keypair(_rng));
                _holder_key.emplace(keyvault::generate_keypair(_rng));
                auto &dids = _p->dids();
                const auto issuer = dids.register_did(*_issuer_key);
                const auto holder = dids.register_did(*_holder_key);
                dids.confirm(issuer.tx);
                dids.confirm(holder.tx);
                _issuer = issuer.id;
                _holder = holder.id;
                _p->issuers().signup(_issuer, _p->super_key().sign(credential::issuer_registry::signup_message(_issuer)));
                const offchain::attribute_map attrs { { "name", "Alice" }, { "dob", "1990-01-01" }, { "degree", "BSc" } };
                _p->facts().put_attributes(_issuer, _holder, attrs,
                    _issuer_key->sign(offchain::identity_fact_store::put_message(_issuer, _holder, attrs)));
                auto issued = _p->credentials().generate_selective_credential(_issuer, _holder, { "name", "degree" }, *_issuer_key);
                _cred.emplace(std::move(issued.cred));
                _token = issued.token.compact();
            }

            // One call of `op`; false when the operation reported a failure.
            bool call(const std::string &op)
            {
                auto &creds = _p->credentials();
                if (op == "resolution") {
                    (void)_p->dids().resolve(_holder);
                    return true;
                }
                if (op == "master-sub-key-generation") {
                    const keyvault::master_key master { _holder_key->seed() };
                    (void)master.derive(_counter.fetch_add(1));
                    return true;
                }
                if (op == "shard-distribution") {
                    const auto seed = _holder_key->seed();
                    return keyvault::shard_distribute(seed.view(), 5, 3, default_random()).size() == 5;
                }
                if (op == "selective-content-generation") {
                    (void)creds.generate_selective_credential(_issuer, _holder, { "degree" }, *_issuer_key);
                    return true;
                }
                const auto now = creds.now();
                if (op == "time-constrained-access") {
                    const auto sig = _holder_key->sign(credential_service::grant_message(_cred->id, now, now + 3600, false));
                    (void)creds.grant_time_constrained(_cred->id, now, now + 3600, sig);
                    return true;
                }
                if (op == "one-off-access") {
                    const auto sig = _holder_key->sign(credential_service::grant_message(_cred->id, now, now + 3600, true));
                    (void)creds.grant_one_off(_cred->id, now + 3600, sig);
                    return true;
                }
                if (op == "verification")
                    return creds.verify(*_cred, _token).passed;
                throw error(errc::unknown_operation, op);
            }
        private:
            seeded_random _rng;
            std::unique_ptr<platform> _p;
            std::optional<keyvault::key_pair> _issuer_key, _holder_key;
            did::identifier _issuer, _holder;
            std::optional<credential::credential> _cred;
            std::string _token;
            std::atomic<uint64_t> _counter { 0 };
        };

        template <typename F>
        size_t run_batch(size_t batch_size, F &&fn)
        {
            std::atomic<size_t> ok { 0 };
            std::vector<std::thread> threads;
            threads.reserve(batch_size);
            for (size_t i = 0; i < batch_size; ++i)
                threads.emplace_back([&, i] {
                    try {
                        if (fn(i))
                            ok.fetch_add(1);
                    } catch (const std::exception &) {
                    }
                });
            for (auto &t: threads)
                t.join();
            return ok.load();
        }

        // Keeps the pool at two blocks' worth of registrations so every block fills, and
        // measures inclusions against the logical clock.
        bench_report bench_registration(fixture &fx, size_t batch_size, double duration)
        {
            auto &chain = fx.p().chain();
            const auto &cfg = chain.config();
            const auto gas = cfg.gas_for(ledger::did_registry, "register");
            const auto per_block = cfg.block_gas_limit / gas;
            const auto interval_s = static_cast<double>(cfg.block_interval_ms) / 1000.0;
            const auto blocks = std::max<uint64_t>(1, static_cast<uint64_t>(std::ceil(duration / interval_s)));

            bench_report r;
            r.operation = "registration";
            r.batch_size = batch_size;
            r.duration = duration;
            r.clock = bench_clock::logical;
            const auto start_ms = chain.now_ms();
            for (uint64_t b = 0; b < blocks; ++b) {
                while (chain.pending_count() < 2 * per_block) {
                    std::vector<keyvault::key_pair> keys;
                    for (size_t i = 0; i < batch_size; ++i)
                        keys.push_back(keyvault::generate_keypair(fx.rng()));
                    run_batch(batch_size, [&](size_t i) {
                        fx.p().dids().register_did(keys[i]);
                        return true;
                    });
                }
                const auto blk = chain.produce_block();
                size_t ok = 0;
                for (const auto &rc: blk.receipts)
                    ok += rc.ok();
                r.completed += ok;
                r.failed += blk.receipts.size() - ok;
                r.series.push_back(static_cast<double>(ok) / interval_s);
            }
            r.elapsed = static_cast<double>(chain.now_ms() - start_ms) / 1000.0;
            r.throughput = static_cast<double>(r.completed) / r.elapsed;
            return r;
        }

        bench_report bench_off_chain(fixture &fx, const std::string &op, size_t batch_size, double duration)
        {
            using clock = std::chrono::steady_clock;
            fx.prepare_credentials();
            bench_report r;
            r.operation = op;
            r.batch_size = batch_size;
            r.duration = duration;
            r.clock = bench_clock::wall;
            const auto start = clock::now();
            auto since = [&] { return std::chrono::duration<double>(clock::now() - start).count(); };
            size_t second_count = 0;
            size_t second = 0;
            while (since() < duration) {
                const auto ok = run_batch(batch_size, [&](size_t) { return fx.call(op); });
                r.completed += ok;
                r.failed += batch_size - ok;
                const auto now = static_cast<size_t>(since());
                while (second < now) {
                    r.series.push_back(static_cast<double>(second_count));
                    second_count = 0;
                    ++second;
                }
                second_count += ok;
            }
            r.elapsed = since();
            r.throughput = static_cast<double>(r.completed) / r.elapsed;
            return r;
        }
    }

    json bench_report::to_json() const
    {
        return json {
            { "operation", operation },
            { "batch_size", batch_size },
            { "duration", duration },
            { "completed", completed },
            { "failed", failed },
            { "elapsed", elapsed },
            { "throughput", throughput },
            { "clock", clock == bench_clock::logical ? "logical" : "wall" },
            { "series", series },
        };
    }

    std::vector<std::string> bench_operations()
    {
        std::vector<std::string> ops { "registration" };
        ops.insert(ops.end(), off_chain_ops.begin(), off_chain_ops.end());
        return ops;
    }

    bool bench_on_chain(std::string_view operation)
    {
        return operation == "registration";
    }

    std::vector<bench_report> run_bench(const platform_config &cfg, const std::vector<std::string> &operations,
        size_t batch_size, double duration, uint64_t seed)
    {
        if (batch_size == 0)
            throw error(errc::bad_batch, "batch_size must be at least 1");
        if (!(duration > 0))
            throw error(errc::bad_request, "duration must be positive");
        if (operations.empty())
            throw error(errc::unknown_operation, "no operation given");
        const auto known = bench_operations();
        for (const auto &op: operations)
            if (std::find(known.begin(), known.end(), op) == known.end())
                throw error(errc::unknown_operation, op);

        fixture fx { cfg, seed };
        std::vector<bench_report> reports;
        for (const auto &op: operations)
            reports.push_back(bench_on_chain(op) ? bench_registration(fx, batch_size, duration)
                                                 : bench_off_chain(fx, op, batch_size, duration));
        return reports;
    }

    bench_report run_bench(const platform_config &cfg, const std::string &operation, size_t batch_size, double duration,
        uint64_t seed)
    {
        return run_bench(cfg, std::vector<std::string> { operation }, batch_size, duration, seed).front();
    }
}
