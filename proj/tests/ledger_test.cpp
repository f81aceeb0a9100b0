#include <filesystem>
#include <thread>
#include <gtest/gtest.h>
#include <dpaas/did/document.hpp>
#include <dpaas/ledger/ledger.hpp>

using namespace dpaas;
using namespace dpaas::ledger;

namespace {
    keyvault::key_pair make_key(uint64_t seed)
    {
        seeded_random rng { seed };
        return keyvault::generate_keypair(rng);
    }

    contract_call register_call(const keyvault::key_pair &kp)
    {
        const did::identifier id { address_of(kp.public_key()) };
        return { "register", json { { "ddo", did::minimal_document(id, kp.public_key()).to_json() } } };
    }

    transaction signed_tx(const keyvault::key_pair &kp, uint64_t nonce, std::string target, const contract_call &call, uint64_t gas)
    {
        transaction tx;
        tx.sender = address_of(kp.public_key());
        tx.nonce = nonce;
        tx.target = std::move(target);
        tx.payload = call.encode();
        tx.gas = gas;
        tx.sig = kp.sign(tx.signing_bytes());
        return tx;
    }

    errc code_of(const std::function<void()> &f)
    {
        try {
            f();
        } catch (const error &ex) {
            return ex.code();
        }
        return errc::ok;
    }

    constexpr uint64_t register_gas = 228'000;
}

TEST(Ledger, BlockFillsUpToGasLimit)
{
    ledger::ledger chain;
    std::vector<keyvault::key_pair> keys;
    for (uint64_t i = 0; i < 400; ++i) {
        keys.push_back(make_key(1000 + i));
        chain.create_account(keys.back());
        chain.submit_call(keys.back(), did_registry, register_call(keys.back()));
    }
    const uint64_t fit = 80'000'000 / register_gas;
    ASSERT_EQ(fit, 350u);
    const auto b1 = chain.produce_block();
    EXPECT_EQ(b1.transactions.size(), fit);
    EXPECT_EQ(b1.gas_used, fit * register_gas);
    EXPECT_LE(b1.gas_used, chain.config().block_gas_limit);
    const auto b2 = chain.produce_block();
    EXPECT_EQ(b2.transactions.size(), 400 - fit);
    EXPECT_EQ(chain.pending_count(), 0u);
    EXPECT_EQ(chain.produce_block().transactions.size(), 0u);
}

TEST(Ledger, LogicalClock)
{
    chain_config cfg;
    cfg.genesis_time_ms = 1'000'000;
    cfg.block_interval_ms = 2500;
    ledger::ledger chain { cfg };
    EXPECT_EQ(chain.now_ms(), 1'000'000);
    for (int h = 1; h <= 4; ++h) {
        const auto b = chain.produce_block();
        EXPECT_EQ(b.height, static_cast<uint64_t>(h));
        EXPECT_EQ(b.timestamp_ms, 1'000'000 + h * 2500);
        EXPECT_EQ(b.parent_digest, chain.block_at(h - 1).hash());
    }
}

TEST(Ledger, SubmissionValidationOrder)
{
    ledger::ledger chain;
    const auto kp = make_key(1);
    const auto stranger = make_key(2);
    const auto call = register_call(kp);
    EXPECT_EQ(code_of([&] { chain.submit_transaction(signed_tx(kp, 1, std::string { did_registry }, call, register_gas)); }),
        errc::unknown_account);
    chain.create_account(kp);
    EXPECT_EQ(code_of([&] { chain.create_account(kp); }), errc::duplicate_account);

    auto forged = signed_tx(kp, 1, std::string { did_registry }, call, register_gas);
    forged.sig = stranger.sign(forged.signing_bytes());
    EXPECT_EQ(code_of([&] { chain.submit_transaction(forged); }), errc::bad_signature);
    EXPECT_EQ(code_of([&] { chain.submit_transaction(signed_tx(kp, 2, std::string { did_registry }, call, register_gas)); }),
        errc::bad_nonce);
    EXPECT_EQ(code_of([&] { chain.submit_transaction(signed_tx(kp, 0, std::string { did_registry }, call, register_gas)); }),
        errc::bad_nonce);
    EXPECT_EQ(code_of([&] { chain.submit_transaction(signed_tx(kp, 1, "token-registry", call, register_gas)); }),
        errc::unknown_contract);
    EXPECT_EQ(code_of([&] { chain.submit_transaction(signed_tx(kp, 1, std::string { did_registry }, call, register_gas - 1)); }),
        errc::bad_gas);
    EXPECT_EQ(code_of([&] {
        chain.submit_transaction(signed_tx(kp, 1, std::string { did_registry }, contract_call { "mint", json::object() }, 1));
    }), errc::malformed_call);

    EXPECT_EQ(chain.next_nonce(address_of(kp.public_key())), 1u);
    const auto id = chain.submit_transaction(signed_tx(kp, 1, std::string { did_registry }, call, register_gas));
    EXPECT_TRUE(chain.is_pending(id));
    EXPECT_EQ(chain.next_nonce(address_of(kp.public_key())), 2u);
    chain.produce_block();
    EXPECT_FALSE(chain.is_pending(id));
    ASSERT_TRUE(chain.find_receipt(id));
    EXPECT_TRUE(chain.find_receipt(id)->ok());
    EXPECT_EQ(chain.find_account(address_of(kp.public_key()))->nonce, 1u);
}

TEST(Ledger, FailedCallsAreIncludedAndCharged)
{
    ledger::ledger chain;
    const auto kp = make_key(3);
    chain.create_account(kp);
    const auto a = chain.submit_call(kp, did_registry, register_call(kp));
    const auto b = chain.submit_call(kp, did_registry, register_call(kp));
    const auto blk = chain.produce_block();
    EXPECT_EQ(blk.transactions.size(), 2u);
    EXPECT_EQ(blk.gas_used, 2 * register_gas);
    EXPECT_TRUE(chain.find_receipt(a)->ok());
    EXPECT_EQ(chain.find_receipt(b)->status, errc::already_registered);
}

TEST(Ledger, ConcurrentSubmitCallsShareOneAccount)
{
    ledger::ledger chain;
    const auto kp = make_key(4);
    chain.create_account(kp);
    std::vector<std::thread> threads;
    std::atomic<int> accepted { 0 };
    for (int t = 0; t < 8; ++t)
        threads.emplace_back([&] {
            for (int i = 0; i < 20; ++i) {
                chain.submit_call(kp, did_registry, contract_call { "revoke", { { "did", "did:dpaas:" + std::string(40, '0') } } });
                ++accepted;
            }
        });
    for (auto &t: threads)
        t.join();
    EXPECT_EQ(accepted, 160);
    EXPECT_EQ(chain.next_nonce(address_of(kp.public_key())), 161u);
    chain.produce_block();
    EXPECT_EQ(chain.find_account(address_of(kp.public_key()))->nonce, 160u);
}

TEST(Ledger, AnchoringRegistryRules)
{
    const auto authority = make_key(5);
    const auto other = make_key(6);
    chain_config cfg;
    cfg.anchor_authority = address_of(authority.public_key());
    ledger::ledger chain { cfg };
    chain.create_account(authority);
    chain.create_account(other);
    auto anchor = [&](const keyvault::key_pair &kp, uint64_t epoch) {
        const contract_call call { "anchor", { { "repository_id", "r" }, { "epoch", epoch }, { "digest", std::string(64, 'a') } } };
        return chain.submit_call(kp, anchoring_registry, call);
    };
    const auto ok0 = anchor(authority, 0);
    const auto dup = anchor(authority, 0);
    const auto gap = anchor(authority, 5);
    const auto foreign = anchor(other, 1);
    const auto ok1 = anchor(authority, 1);
    chain.produce_block();
    EXPECT_TRUE(chain.find_receipt(ok0)->ok());
    EXPECT_EQ(chain.find_receipt(dup)->status, errc::anchor_exists);
    EXPECT_EQ(chain.find_receipt(gap)->status, errc::epoch_gap);
    EXPECT_EQ(chain.find_receipt(foreign)->status, errc::not_anchor_authority);
    EXPECT_TRUE(chain.find_receipt(ok1)->ok());
    const auto r = parse_query_result(chain.query_contract(anchoring_registry, make_query("epochs", { { "repository_id", "r" } })));
    EXPECT_EQ(r.value.at("count").get<uint64_t>(), 2u);
}

TEST(Ledger, JournalReplayReproducesState)
{
    const auto path = std::filesystem::temp_directory_path() / ("dpaas-ledger-" + to_hex(make_key(99).id()) + ".journal");
    std::filesystem::remove(path);
    digest state {};
    digest tip {};
    tx_id pending {};
    {
        ledger::ledger chain { {}, path };
        for (uint64_t i = 0; i < 5; ++i) {
            const auto kp = make_key(200 + i);
            chain.create_account(kp);
            chain.submit_call(kp, did_registry, register_call(kp));
            chain.produce_block();
        }
        const auto kp = make_key(300);
        chain.create_account(kp);
        pending = chain.submit_call(kp, did_registry, register_call(kp));
        state = chain.state_digest();
        tip = chain.block_at(chain.height()).hash();
    }
    ledger::ledger reopened { {}, path };
    EXPECT_EQ(reopened.height(), 5u);
    EXPECT_EQ(reopened.state_digest(), state);
    EXPECT_EQ(reopened.block_at(5).hash(), tip);
    EXPECT_TRUE(reopened.is_pending(pending));
    reopened.produce_block();
    EXPECT_TRUE(reopened.find_receipt(pending)->ok());
    std::filesystem::remove(path);
}

TEST(Ledger, StateDigestIsDeterministic)
{
    auto run = [] {
        ledger::ledger chain;
        for (uint64_t i = 0; i < 10; ++i) {
            const auto kp = make_key(500 + i);
            chain.create_account(kp);
            chain.submit_call(kp, did_registry, register_call(kp));
        }
        chain.produce_block();
        return std::make_pair(chain.state_digest(), chain.block_at(1).hash());
    };
    EXPECT_EQ(run(), run());
}

TEST(ChainConfig, TextRoundTripAndValidation)
{
    chain_config cfg;
    cfg.block_interval_ms = 1000;
    cfg.gas["did-registry.register"] = 100'000;
    cfg.anchor_authority = address_of(make_key(7).public_key());
    const auto parsed = chain_config::parse(cfg.to_text());
    EXPECT_EQ(parsed.hash(), cfg.hash());
    EXPECT_EQ(parsed.gas_for(did_registry, "register"), 100'000u);
    EXPECT_NE(cfg.hash(), chain_config {}.hash());

    EXPECT_EQ(code_of([] { chain_config::parse("block_interval_ms=0\n"); }), errc::bad_config);
    EXPECT_EQ(code_of([] { chain_config::parse("nonsense\n"); }), errc::bad_config);
    EXPECT_EQ(code_of([] { chain_config::parse("block_gas_limit=100\n"); }), errc::bad_config);
}

TEST(ChainConfig, DefaultGasYieldsSeventyRegistrationsPerSecond)
{
    const chain_config cfg;
    const auto per_block = cfg.block_gas_limit / cfg.gas_for(did_registry, "register");
    EXPECT_DOUBLE_EQ(static_cast<double>(per_block) * 1000.0 / static_cast<double>(cfg.block_interval_ms), 70.0);
}
