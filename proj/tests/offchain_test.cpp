#include <algorithm>
#include <filesystem>
#include <fstream>
#include <random>
#include <gtest/gtest.h>
#include <dpaas/offchain/anchoring.hpp>
#include <dpaas/offchain/identity_facts.hpp>
#include <dpaas/offchain/merkle.hpp>
#include "oracle.hpp"

using namespace dpaas;
using namespace dpaas::offchain;

namespace {
    errc code_of(const std::function<void()> &f)
    {
        try {
            f();
        } catch (const error &ex) {
            return ex.code();
        }
        return errc::ok;
    }

    struct temp_dir {
        std::filesystem::path path;
        temp_dir()
        {
            bytes r(6);
            default_random().fill(r);
            path = std::filesystem::temp_directory_path() / ("dpaas-oc-" + to_hex(r));
            std::filesystem::create_directories(path);
        }
        ~temp_dir() { std::filesystem::remove_all(path); }
    };

    // Leaf oracle: the record serialized by hand as {"key":...,"value":...}.
    digest leaf_oracle(const std::string &key, const json &value)
    {
        return oracle::sha256(R"({"key":)" + json(key).dump() + R"(,"value":)" + value.dump() + "}");
    }

    digest repository_oracle(std::map<std::string, json> records)
    {
        std::vector<digest> leaves;
        for (const auto &[k, v]: records)
            leaves.push_back(leaf_oracle(k, v));
        return oracle::merkle(leaves);
    }
}

TEST(Merkle, MatchesOracleForAllSizes)
{
    seeded_random rng { 12 };
    for (size_t n = 0; n <= 33; ++n) {
        std::vector<digest> leaves(n);
        for (auto &l: leaves)
            rng.fill(l);
        EXPECT_EQ(merkle_root(leaves), oracle::merkle(leaves)) << n;
    }
}

TEST(Merkle, SmallCasesByHand)
{
    const auto a = oracle::sha256(std::string_view { "a" });
    const auto b = oracle::sha256(std::string_view { "b" });
    const auto c = oracle::sha256(std::string_view { "c" });
    EXPECT_EQ(merkle_root(std::vector<digest> {}), oracle::sha256(std::string_view {}));
    EXPECT_EQ(merkle_root(std::vector<digest> { a }), a);
    bytes ab(a.begin(), a.end());
    ab.insert(ab.end(), b.begin(), b.end());
    const auto hab = oracle::sha256(ab);
    EXPECT_EQ(merkle_root(std::vector<digest> { a, b }), hab);
    bytes abc(hab.begin(), hab.end());
    abc.insert(abc.end(), c.begin(), c.end());
    EXPECT_EQ(merkle_root(std::vector<digest> { a, b, c }), oracle::sha256(abc));
}

TEST(Repository, RootMatchesOracleAndIgnoresInsertionOrder)
{
    std::map<std::string, json> records;
    for (int i = 0; i < 12; ++i)
        records["k" + std::to_string(i)] = json { { "n", i }, { "name", "v" + std::to_string(i) } };
    std::vector<std::pair<std::string, json>> order(records.begin(), records.end());
    std::mt19937 g { 5 };
    digest first {};
    for (int trial = 0; trial < 5; ++trial) {
        std::shuffle(order.begin(), order.end(), g);
        repository r { "t", std::make_unique<memory_store>() };
        for (const auto &[k, v]: order)
            r.put(k, v);
        EXPECT_EQ(r.root(), repository_oracle(records));
        if (trial == 0)
            first = r.root();
        EXPECT_EQ(r.root(), first);
    }
}

TEST(Repository, OverwriteAndUpdate)
{
    repository r { "t", std::make_unique<memory_store>() };
    r.put("a", 1);
    const auto before = r.root();
    r.put("a", 2);
    EXPECT_NE(r.root(), before);
    EXPECT_EQ(r.get("a"), json(2));
    r.update("a", [](const std::optional<json> &cur) -> std::optional<json> { return cur->get<int>() + 1; });
    EXPECT_EQ(r.get("a"), json(3));
    const auto unchanged = r.root();
    r.update("a", [](const std::optional<json> &) -> std::optional<json> { return {}; });
    EXPECT_EQ(r.root(), unchanged);
    EXPECT_FALSE(r.get("missing"));
    EXPECT_EQ(r.size(), 1u);
}

TEST(LogStore, PersistsAndDropsTornTail)
{
    temp_dir dir;
    digest root {};
    {
        repository_set repos { dir.path };
        auto &r = repos.open("issuer:did:dpaas:" + std::string(40, 'b'));
        for (int i = 0; i < 5; ++i)
            r.put("k" + std::to_string(i), json { { "v", i } });
        r.put("k0", "replaced");
        root = r.root();
    }
    const auto file = dir.path / ("issuer+did+dpaas+" + std::string(40, 'b') + ".log");
    ASSERT_TRUE(std::filesystem::exists(file));
    {
        // Half-written entry: a length prefix promising more bytes than exist.
        std::ofstream out { file, std::ios::binary | std::ios::app };
        const char torn[] = { 0, 0, 0, 50, '{', '"' };
        out.write(torn, sizeof(torn));
    }
    repository_set repos { dir.path };
    const auto &r = repos.at("issuer:did:dpaas:" + std::string(40, 'b'));
    EXPECT_EQ(r.root(), root);
    EXPECT_EQ(r.get("k0"), json("replaced"));
    EXPECT_EQ(r.size(), 5u);
}

TEST(LogStore, ChecksumMismatchIsCorruptLog)
{
    temp_dir dir;
    const auto file = dir.path / "r.log";
    {
        log_file_store s { file };
        s.append("a", json { { "x", 1 } });
        s.append("b", json { { "x", 2 } });
    }
    {
        std::fstream f { file, std::ios::binary | std::ios::in | std::ios::out };
        f.seekp(6);
        f.put('X');
    }
    log_file_store s { file };
    EXPECT_EQ(code_of([&] { s.load(); }), errc::corrupt_log);
}

TEST(RepositorySet, UnknownRepository)
{
    repository_set repos;
    EXPECT_EQ(code_of([&] { (void)repos.at("nope"); }), errc::unknown_repository);
    repos.open("x");
    EXPECT_TRUE(repos.contains("x"));
    EXPECT_EQ(repos.repository_digest("x"), oracle::sha256(std::string_view {}));
}

namespace {
    struct chain_fixture {
        seeded_random rng { 31 };
        keyvault::key_pair authority = keyvault::generate_keypair(rng);
        ledger::ledger chain { config(authority) };
        did::service dids { chain };
        repository_set repos;
        anchor_service anchors { repos, chain, authority };

        static ledger::chain_config config(const keyvault::key_pair &kp)
        {
            ledger::chain_config c;
            c.anchor_authority = address_of(kp.public_key());
            return c;
        }
    };
}

TEST(IdentityFacts, WriteRules)
{
    chain_fixture f;
    const auto issuer_key = keyvault::generate_keypair(f.rng);
    const auto reg = f.dids.register_did(issuer_key);
    f.dids.confirm(reg.tx);
    const did::identifier holder { address_of(keyvault::generate_keypair(f.rng).public_key()) };
    bool trusted = true;
    identity_fact_store facts { f.repos, f.dids, [&](const did::identifier &) { return trusted; } };

    const attribute_map attrs { { "name", "Alice" }, { "degree", "BSc" } };
    auto sign = [&](const attribute_map &a) { return issuer_key.sign(identity_fact_store::put_message(reg.id, holder, a)); };
    facts.put_attributes(reg.id, holder, attrs, sign(attrs));
    facts.put_attributes(reg.id, holder, { { "degree", "MSc" } }, sign({ { "degree", "MSc" } }));
    EXPECT_EQ(facts.attributes(reg.id, holder), (attribute_map { { "name", "Alice" }, { "degree", "MSc" } }));
    EXPECT_TRUE(f.repos.contains(identity_fact_store::repository_id(reg.id)));

    EXPECT_EQ(code_of([&] { facts.put_attributes(reg.id, holder, attrs, sign({ { "other", "x" } })); }), errc::bad_signature);
    EXPECT_EQ(code_of([&] { facts.put_attributes(reg.id, holder, { { "id", "x" } }, sign({ { "id", "x" } })); }), errc::malformed_record);
    EXPECT_EQ(code_of([&] { facts.put_attributes(reg.id, holder, {}, sign({})); }), errc::malformed_record);
    trusted = false;
    EXPECT_EQ(code_of([&] { facts.put_attributes(reg.id, holder, attrs, sign(attrs)); }), errc::untrusted_issuer);
}

TEST(Anchoring, AnchorAndVerifyIntegrity)
{
    chain_fixture f;
    auto &repo = f.repos.open(std::string { credentials_repository });
    for (int i = 0; i < 8; ++i)
        repo.put("c" + std::to_string(i), json { { "i", i } });
    const auto a0 = f.anchors.anchor("credentials");
    EXPECT_EQ(a0.epoch, 0u);
    EXPECT_EQ(a0.root, repo.root());
    EXPECT_EQ(f.anchors.find("credentials", 0)->root, repo.root());
    EXPECT_TRUE(f.anchors.verify_integrity("credentials", 0).match);

    repo.put("c3", json { { "i", 300 } });
    const auto report = f.anchors.verify_integrity("credentials", 0);
    EXPECT_FALSE(report.match);
    EXPECT_EQ(report.to_json().at("result"), "mismatch");

    const auto a1 = f.anchors.anchor("credentials");
    EXPECT_EQ(a1.epoch, 1u);
    EXPECT_TRUE(f.anchors.verify_integrity("credentials", 1).match);
    EXPECT_EQ(f.anchors.epochs("credentials"), 2u);
    EXPECT_EQ(code_of([&] { (void)f.anchors.verify_integrity("credentials", 7); }), errc::unknown_anchor);
    EXPECT_EQ(code_of([&] { f.anchors.anchor("missing"); }), errc::unknown_repository);
}

TEST(Anchoring, ConsecutiveSubmissionsGetConsecutiveEpochs)
{
    chain_fixture f;
    f.repos.open("r").put("a", 1);
    const auto p0 = f.anchors.submit_anchor("r");
    const auto p1 = f.anchors.submit_anchor("r");
    EXPECT_EQ(p0.epoch, 0u);
    EXPECT_EQ(p1.epoch, 1u);
    f.chain.produce_block();
    EXPECT_TRUE(f.chain.find_receipt(p0.tx)->ok());
    EXPECT_TRUE(f.chain.find_receipt(p1.tx)->ok());
    EXPECT_EQ(f.anchors.submit_anchor("r").epoch, 2u);
}

TEST(Anchoring, ScheduledEveryPeriodBlocks)
{
    chain_fixture f;
    f.repos.open("r").put("a", 1);
    EXPECT_EQ(code_of([&] { f.anchors.schedule(0); }), errc::bad_request);
    f.anchors.schedule(10, { "r" });
    for (int i = 0; i < 25; ++i)
        f.chain.produce_block();
    ASSERT_EQ(f.anchors.epochs("r"), 2u);
    EXPECT_EQ(f.anchors.find("r", 0)->anchored_at, 10u);
    EXPECT_EQ(f.anchors.find("r", 1)->anchored_at, 20u);
}

TEST(Anchoring, OnlyAuthorityMayAnchor)
{
    chain_fixture f;
    f.repos.open("r").put("a", 1);
    anchor_service rogue { f.repos, f.chain, keyvault::generate_keypair(f.rng) };
    EXPECT_EQ(code_of([&] { rogue.anchor("r"); }), errc::not_anchor_authority);
    EXPECT_EQ(f.anchors.anchor("r").epoch, 0u);
}
