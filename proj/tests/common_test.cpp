#include <gtest/gtest.h>
#include <dpaas/common/codec.hpp>
#include <dpaas/common/crypto.hpp>
#include <dpaas/common/random.hpp>
#include "oracle.hpp"

using namespace dpaas;

TEST(Sha256, KnownVector)
{
    EXPECT_EQ(to_hex(sha256(std::string_view { "abc" })),
        "ba7816bf8f01cfea414140de5dae2223b00361a396177a9cb410ff61f20015ad");
    EXPECT_EQ(to_hex(sha256(std::string_view {})),
        "e3b0c44298fc1c149afbf4c8996fb92427ae41e4649b934ca495991b7852b855");
}

TEST(Sha256, MatchesOpenSsl)
{
    seeded_random rng { 7 };
    for (size_t len = 0; len < 300; len += 7) {
        bytes data(len);
        rng.fill(data);
        EXPECT_EQ(sha256(data), oracle::sha256(data)) << "len " << len;
    }
}

TEST(Hex, RoundTripAndRejects)
{
    const bytes b { 0x00, 0x7f, 0x80, 0xff };
    EXPECT_EQ(to_hex(b), "007f80ff");
    EXPECT_EQ(from_hex("007F80ff"), b);
    EXPECT_THROW(from_hex("abc"), error);
    EXPECT_THROW(from_hex("zz"), error);
}

TEST(Base64Url, RoundTripNoPadding)
{
    seeded_random rng { 3 };
    for (size_t len = 0; len < 70; ++len) {
        bytes data(len);
        rng.fill(data);
        const auto enc = base64url_encode(data);
        EXPECT_EQ(enc.find('='), std::string::npos);
        EXPECT_EQ(enc.find('+'), std::string::npos);
        EXPECT_EQ(enc.find('/'), std::string::npos);
        EXPECT_EQ(base64url_decode(enc), data);
    }
}

TEST(CanonicalJson, SortedCompact)
{
    const json j { { "b", 1 }, { "a", { { "z", "x" }, { "c", true } } } };
    EXPECT_EQ(canonical_json(j), R"({"a":{"c":true,"z":"x"},"b":1})");
}

TEST(Codec, RoundTrip)
{
    encoder enc;
    enc.u8(7).u32(0xdeadbeef).u64(1ULL << 40).i64(-5).str("hi").blob(bytes { 1, 2, 3 });
    const auto data = enc.take();
    // u32 is big-endian
    EXPECT_EQ(data[1], 0xde);
    decoder dec { data };
    EXPECT_EQ(dec.u8(), 7);
    EXPECT_EQ(dec.u32(), 0xdeadbeefu);
    EXPECT_EQ(dec.u64(), 1ULL << 40);
    EXPECT_EQ(dec.i64(), -5);
    EXPECT_EQ(dec.str(), "hi");
    const auto blob = dec.blob();
    EXPECT_EQ(bytes(blob.begin(), blob.end()), (bytes { 1, 2, 3 }));
    EXPECT_TRUE(dec.done());
}

TEST(Codec, TruncationIsAnError)
{
    encoder enc;
    enc.str("hello");
    auto data = enc.take();
    data.pop_back();
    decoder dec { data };
    EXPECT_THROW(dec.str(), error);
}

TEST(Signature, VerifiesAndRejectsTampering)
{
    seeded_random rng { 11 };
    seed_bytes seed;
    rng.fill(std::span<uint8_t> { seed.data(), seed.size() });
    const auto vk = derive_verifying_key(seed);
    const auto msg = as_bytes(std::string_view { "message" });
    auto sig = sign_message(seed, msg);
    EXPECT_TRUE(verify_signature(vk, msg, sig));

    const auto parsed = signature::from_string(sig.to_string());
    EXPECT_EQ(parsed, sig);
    EXPECT_TRUE(sig.to_string().starts_with("Ed25519:"));

    auto bad = sig;
    bad.value[5] ^= 1;
    EXPECT_FALSE(verify_signature(vk, msg, bad));
    auto other_alg = sig;
    other_alg.algorithm = "ES256";
    EXPECT_FALSE(verify_signature(vk, msg, other_alg));
    EXPECT_FALSE(verify_signature(vk, as_bytes(std::string_view { "messagf" }), sig));
}

TEST(Errors, NamesRoundTrip)
{
    for (auto c: { errc::not_found, errc::bad_nonce, errc::consumed_token, errc::epoch_gap, errc::bad_batch }) {
        EXPECT_EQ(errc_from_string(to_string(c)), c);
    }
    EXPECT_EQ(to_string(errc::not_found), "NotFound");
    const error e { errc::malformed_ddo, "missing id" };
    EXPECT_EQ(e.code(), errc::malformed_ddo);
    EXPECT_EQ(e.detail(), "missing id");
}

TEST(SecureEqual, ComparesContent)
{
    const bytes a { 1, 2, 3 }, b { 1, 2, 3 }, c { 1, 2, 4 };
    EXPECT_TRUE(secure_equal(a, b));
    EXPECT_FALSE(secure_equal(a, c));
    EXPECT_FALSE(secure_equal(a, bytes { 1, 2 }));
}
