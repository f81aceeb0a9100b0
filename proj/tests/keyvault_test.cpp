#include <filesystem>
#include <thread>
#include <gtest/gtest.h>
#include <dpaas/keyvault/gf256.hpp>
#include <dpaas/keyvault/vault.hpp>
#include "oracle.hpp"

using namespace dpaas;
using namespace dpaas::keyvault;

namespace {
    bytes random_bytes(random_source &rng, size_t n)
    {
        bytes b(n);
        rng.fill(b);
        return b;
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

    struct temp_dir {
        std::filesystem::path path;
        temp_dir()
        {
            path = std::filesystem::temp_directory_path() / ("dpaas-kv-" + to_hex(random_bytes(default_random(), 6)));
            std::filesystem::create_directories(path);
        }
        ~temp_dir() { std::filesystem::remove_all(path); }
    };
}

TEST(Gf256, MulMatchesBitwiseOracleOnAllPairs)
{
    for (int a = 0; a < 256; ++a)
        for (int b = 0; b < 256; ++b)
            ASSERT_EQ(gf256::mul(a, b), oracle::gf_mul(a, b)) << a << "*" << b;
}

TEST(Gf256, InverseAndDivision)
{
    for (int a = 1; a < 256; ++a) {
        EXPECT_EQ(gf256::mul(a, gf256::inv(a)), 1) << a;
        EXPECT_EQ(gf256::inv(a), oracle::gf_inv(a));
        EXPECT_EQ(gf256::div(gf256::mul(a, 0x53), 0x53), a);
    }
    // 0x53 and 0xCA are inverses under the 0x11b reduction polynomial.
    EXPECT_EQ(gf256::mul(0x53, 0xCA), 1);
}

TEST(Shamir, ReconstructsAndMatchesLagrangeOracle)
{
    seeded_random rng { 42 };
    const auto secret = random_bytes(rng, 32);
    const auto shards = shard_distribute(secret, 5, 3, rng);
    ASSERT_EQ(shards.size(), 5u);
    for (unsigned i = 0; i < 5; ++i) {
        EXPECT_EQ(shards[i].x, i + 1);
        EXPECT_EQ(shards[i].threshold, 3);
        EXPECT_EQ(shards[i].total, 5);
        EXPECT_EQ(shards[i].secret_id, shards[0].secret_id);
    }
    const std::vector<shard> subset { shards[4], shards[1], shards[2] };
    EXPECT_EQ(shard_combine(subset), secret);
    for (size_t pos = 0; pos < secret.size(); ++pos) {
        std::vector<std::pair<uint8_t, uint8_t>> pts;
        for (const auto &s: subset)
            pts.emplace_back(s.x, s.y[pos]);
        EXPECT_EQ(oracle::lagrange_at_zero(pts), secret[pos]);
    }
}

TEST(Shamir, SecretIdDoesNotRevealSecret)
{
    seeded_random rng { 1 };
    const bytes secret { 9 };
    const auto a = shard_distribute(secret, 3, 2, rng);
    const auto b = shard_distribute(secret, 3, 2, rng);
    EXPECT_NE(a[0].secret_id, b[0].secret_id);
    EXPECT_NE(a[0].secret_id, oracle::sha256(secret));
}

TEST(Shamir, Errors)
{
    seeded_random rng { 5 };
    const auto secret = random_bytes(rng, 16);
    EXPECT_EQ(code_of([&] { shard_distribute(secret, 3, 4, rng); }), errc::bad_threshold);
    EXPECT_EQ(code_of([&] { shard_distribute(secret, 3, 0, rng); }), errc::bad_threshold);
    EXPECT_EQ(code_of([&] { shard_distribute(secret, 256, 2, rng); }), errc::bad_threshold);

    const auto s1 = shard_distribute(secret, 4, 3, rng);
    const auto s2 = shard_distribute(secret, 4, 3, rng);
    EXPECT_EQ(code_of([&] { shard_combine(std::vector<shard> { s1[0], s1[1] }); }), errc::insufficient_shards);
    EXPECT_EQ(code_of([&] { shard_combine(std::vector<shard> { s1[0], s1[1], s2[2] }); }), errc::mixed_secrets);
    EXPECT_EQ(code_of([&] { shard_combine(std::vector<shard> { s1[0], s1[1], s1[1] }); }), errc::inconsistent_shards);

    auto tampered = s1[3];
    tampered.y[0] ^= 1;
    EXPECT_EQ(code_of([&] { shard_combine(std::vector<shard> { s1[0], s1[1], s1[2], tampered }); }), errc::inconsistent_shards);
    // Extra consistent shards are accepted.
    EXPECT_EQ(shard_combine(s1), secret);
}

TEST(Shamir, ShardJsonRoundTrip)
{
    seeded_random rng { 8 };
    const auto shards = shard_distribute(random_bytes(rng, 4), 3, 2, rng);
    EXPECT_EQ(shard::from_json(shards[1].to_json()), shards[1]);
}

TEST(Keys, SubKeyDerivationMatchesOracle)
{
    seeded_random rng { 3 };
    const auto master = generate_keypair(rng);
    master_key mk { master.seed() };
    for (uint64_t index: { 0ULL, 1ULL, 7ULL, 1ULL << 40 }) {
        bytes input { master.seed().view().begin(), master.seed().view().end() };
        input.insert(input.end(), { 's', 'u', 'b' });
        for (int shift = 56; shift >= 0; shift -= 8)
            input.push_back(static_cast<uint8_t>(index >> shift));
        const auto expected_seed = oracle::sha256(input);
        const auto sub = mk.derive(index);
        EXPECT_TRUE(std::equal(expected_seed.begin(), expected_seed.end(), sub.seed().view().begin()));
        EXPECT_EQ(sub.id(), oracle::sha256(byte_view { sub.public_key() }));
    }
}

TEST(Keys, DeriveNextAdvances)
{
    seeded_random rng { 4 };
    master_key mk { generate_keypair(rng).seed() };
    const auto a = mk.derive_next();
    const auto b = mk.derive_next();
    EXPECT_EQ(mk.next_index(), 2u);
    EXPECT_NE(a.id(), b.id());
    EXPECT_EQ(a.id(), mk.derive(0).id());
}

TEST(Wallet, HotRoundTripAndWrongPassphrase)
{
    seeded_random rng { 9 };
    const auto kp = generate_keypair(rng);
    const auto rec = store_hot(kp, "correct horse", kdf_params::minimal(), rng);
    const auto parsed = keystore_record::from_text(rec.to_text());
    EXPECT_EQ(load_hot(parsed, "correct horse").id(), kp.id());
    EXPECT_EQ(code_of([&] { load_hot(parsed, "wrong"); }), errc::wrong_passphrase);

    auto tampered = parsed;
    tampered.ciphertext[0] ^= 1;
    EXPECT_EQ(code_of([&] { load_hot(tampered, "correct horse"); }), errc::wrong_passphrase);
    // Record id is authenticated data.
    auto swapped = parsed;
    swapped.id[0] ^= 1;
    EXPECT_EQ(code_of([&] { load_hot(swapped, "correct horse"); }), errc::wrong_passphrase);
}

TEST(Wallet, ColdExportChecksumMatchesOracle)
{
    seeded_random rng { 10 };
    const auto kp = generate_keypair(rng);
    const auto exp = export_cold(kp);
    EXPECT_EQ(exp.payload, to_hex(kp.seed().view()));
    const auto d = oracle::sha256(kp.seed().view());
    EXPECT_EQ(exp.checksum, to_hex(byte_view { d.data(), 4 }));

    auto upper = exp.to_string();
    std::transform(upper.begin(), upper.end(), upper.begin(), ::toupper);
    EXPECT_EQ(import_cold(cold_export::parse(upper)).id(), kp.id());

    auto bad = exp;
    bad.checksum[0] = bad.checksum[0] == '0' ? '1' : '0';
    EXPECT_EQ(code_of([&] { import_cold(bad); }), errc::bad_checksum);
    EXPECT_EQ(code_of([&] { cold_export::parse("nothex"); }), errc::bad_encoding);
}

TEST(Vault, DeletionIsTerminal)
{
    vault v;
    const auto info = v.generate();
    const auto sig = v.sign(info.id, as_bytes(std::string_view { "m" }));
    EXPECT_TRUE(verify_signature(info.public_key, as_bytes(std::string_view { "m" }), sig));
    const auto exported = v.export_cold(info.id);
    EXPECT_EQ(v.info(info.id).state, key_state::stored_cold);

    v.delete_key(info.id);
    EXPECT_EQ(v.info(info.id).state, key_state::deleted);
    EXPECT_EQ(code_of([&] { (void)v.sign(info.id, as_bytes(std::string_view { "m" })); }), errc::deleted_key);
    EXPECT_EQ(code_of([&] { v.export_cold(info.id); }), errc::deleted_key);
    EXPECT_EQ(code_of([&] { v.delete_key(info.id); }), errc::unknown_key);
    EXPECT_EQ(code_of([&] { v.import_cold(exported); }), errc::deleted_key);
    EXPECT_EQ(code_of([&] { (void)v.sign(digest {}, bytes {}); }), errc::unknown_key);
}

TEST(Vault, ShardAndRecoverIntoFreshVault)
{
    vault a, b;
    const auto info = a.generate();
    const auto shards = a.shard_key(info.id, 5, 3);
    const std::vector<shard> subset { shards[0], shards[2], shards[4] };
    const auto recovered = b.recover(subset);
    EXPECT_EQ(recovered.id, info.id);
    EXPECT_EQ(recovered.public_key, info.public_key);
}

TEST(Vault, MasterSubKeysAreTracked)
{
    vault v;
    const auto m = v.create_master();
    EXPECT_TRUE(m.master);
    const auto s0 = v.derive_next_sub_key(m.id);
    const auto s1 = v.derive_next_sub_key(m.id);
    EXPECT_EQ(v.info(m.id).next_index, 2u);
    EXPECT_EQ(v.derive_sub_key(m.id, 0).id(), s0.id());
    EXPECT_NE(s0.id(), s1.id());
    EXPECT_EQ(v.list().size(), 3u);
}

TEST(Vault, PersistsAcrossReopen)
{
    temp_dir dir;
    key_info kept, removed;
    {
        vault v { dir.path };
        kept = v.generate();
        removed = v.generate();
        v.delete_key(removed.id);
    }
    vault v { dir.path };
    EXPECT_EQ(v.info(kept.id).public_key, kept.public_key);
    EXPECT_EQ(v.info(removed.id).state, key_state::deleted);
    EXPECT_EQ(code_of([&] { (void)v.sign(removed.id, bytes {}); }), errc::deleted_key);
}

TEST(Vault, ConcurrentSignAndDelete)
{
    vault v;
    const auto info = v.generate();
    std::atomic<int> signed_ok { 0 }, refused { 0 };
    std::vector<std::thread> threads;
    for (int i = 0; i < 8; ++i)
        threads.emplace_back([&] {
            for (int j = 0; j < 50; ++j) {
                try {
                    const auto sig = v.sign(info.id, as_bytes(std::string_view { "x" }));
                    EXPECT_TRUE(verify_signature(info.public_key, as_bytes(std::string_view { "x" }), sig));
                    ++signed_ok;
                } catch (const error &ex) {
                    EXPECT_EQ(ex.code(), errc::deleted_key);
                    ++refused;
                }
            }
        });
    threads.emplace_back([&] { v.delete_key(info.id); });
    for (auto &t: threads)
        t.join();
    EXPECT_EQ(signed_ok + refused, 400);
    EXPECT_EQ(code_of([&] { (void)v.sign(info.id, bytes {}); }), errc::deleted_key);
}

TEST(Vault, HotStorageThroughVault)
{
    vault v;
    const auto info = v.generate();
    const auto rec = v.store_hot(info.id, "pw", kdf_params::minimal());
    EXPECT_EQ(v.info(info.id).state, key_state::stored_hot);
    vault other;
    EXPECT_EQ(other.load_hot(rec, "pw").id, info.id);
    EXPECT_EQ(code_of([&] { other.load_hot(rec, "nope"); }), errc::wrong_passphrase);
}
