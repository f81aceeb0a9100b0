#include <thread>
#include <gtest/gtest.h>
#include <dpaas/gateway/platform.hpp>
#include "oracle.hpp"

using namespace dpaas;
using namespace dpaas::credential;

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

    struct actor {
        did::identifier id;
        keyvault::key_pair key;
    };

    struct fixture {
        gateway::platform p { quiet_config() };
        seeded_random rng { 2024 };
        actor issuer = make_actor();
        actor holder = make_actor();
        const offchain::attribute_map attrs { { "name", "Alice" }, { "dob", "1990-01-01" }, { "degree", "BSc" } };

        static gateway::platform_config quiet_config()
        {
            gateway::platform_config c;
            c.anchoring_period = 0;
            return c;
        }

        fixture()
        {
            signup(issuer.id);
            put_attributes(issuer, holder.id, attrs);
        }

        actor make_actor()
        {
            auto kp = keyvault::generate_keypair(rng);
            const auto reg = p.dids().register_did(kp);
            p.dids().confirm(reg.tx);
            return { reg.id, std::move(kp) };
        }

        void signup(const did::identifier &id)
        {
            p.issuers().signup(id, p.super_key().sign(issuer_registry::signup_message(id)));
        }

        void set_status(const did::identifier &id, issuer_status s)
        {
            const auto version = p.issuers().find(id)->version;
            p.issuers().update(id, s, p.super_key().sign(issuer_registry::update_message(id, s, version)));
        }

        void put_attributes(const actor &iss, const did::identifier &h, const offchain::attribute_map &a)
        {
            p.facts().put_attributes(iss.id, h, a, iss.key.sign(offchain::identity_fact_store::put_message(iss.id, h, a)));
        }

        issued_credential issue(std::vector<std::string> names)
        {
            return p.credentials().generate_selective_credential(issuer.id, holder.id, names, issuer.key);
        }

        access_token grant_time(const digest &id, int64_t nbf, int64_t exp)
        {
            return p.credentials().grant_time_constrained(id, nbf, exp,
                holder.key.sign(credential_service::grant_message(id, nbf, exp, false)));
        }

        access_token grant_once(const digest &id, int64_t exp)
        {
            const auto now = p.credentials().now();
            return p.credentials().grant_one_off(id, exp, holder.key.sign(credential_service::grant_message(id, now, exp, true)));
        }

        verification_report verify(const credential::credential &c, const access_token &t, std::optional<int64_t> at = {})
        {
            return p.credentials().verify(c, t.compact(), at.value_or(p.credentials().now()));
        }
    };

    std::string body_oracle(const credential::credential &c)
    {
        std::string claims = "{";
        for (const auto &[k, v]: c.claims) {
            if (claims.size() > 1)
                claims += ",";
            claims += json(k).dump() + ":" + json(v).dump();
        }
        claims += "}";
        return R"({"claims":)" + claims + R"(,"holder":")" + c.holder.str() + R"(","issued_at":)" + std::to_string(c.issued_at)
            + R"(,"issuer":")" + c.issuer.str() + R"(","schema":)" + json(c.schema).dump() + "}";
    }
}

TEST(Selective, ClaimsAreExactlyTheRequestedSubset)
{
    fixture f;
    const auto one = f.issue({ "degree" });
    EXPECT_EQ(one.cred.claims, (claim_map { { "degree", "BSc" } }));

    const auto all = f.issue({ "name", "dob", "degree" });
    EXPECT_EQ(all.cred.claims, claim_map(f.attrs.begin(), f.attrs.end()));
    const auto body = body_oracle(all.cred);
    EXPECT_EQ(all.cred.canonical_body(), body);
    EXPECT_EQ(all.cred.id, oracle::sha256(body));
    EXPECT_TRUE(oracle::ed25519_verify(f.issuer.key.public_key(), body, all.cred.sig.value));
    EXPECT_EQ(all.token.claims().jti, all.cred.id);
    EXPECT_FALSE(all.token.claims().one_off);
}

TEST(Selective, Errors)
{
    fixture f;
    auto c = [&](std::vector<std::string> names) { return code_of([&] { f.issue(names); }); };
    EXPECT_EQ(c({}), errc::empty_selection);
    try {
        f.issue({ "degree", "gpa", "zzz" });
        FAIL() << "expected MissingAttribute";
    } catch (const error &ex) {
        EXPECT_EQ(ex.code(), errc::missing_attribute);
        EXPECT_EQ(ex.detail(), "gpa");
    }
    const auto outsider = f.make_actor();
    EXPECT_EQ(code_of([&] {
        f.p.credentials().generate_selective_credential(outsider.id, f.holder.id, { "degree" }, outsider.key);
    }), errc::untrusted_issuer);
    EXPECT_EQ(code_of([&] {
        f.p.credentials().generate_selective_credential(f.issuer.id, f.holder.id, { "degree" }, outsider.key);
    }), errc::not_issuer);
}

TEST(WireForm, W3cLayoutRoundTrip)
{
    fixture f;
    const auto issued = f.p.credentials().generate_selective_credential(f.issuer.id, f.holder.id, { "name" }, f.issuer.key,
        "UniversityDegree");
    const auto j = issued.cred.to_json();
    for (const auto *k: { "@context", "id", "type", "issuer", "issuanceDate", "credentialSubject", "proof" })
        EXPECT_TRUE(j.contains(k)) << k;
    EXPECT_EQ(j.at("type"), json::array({ "VerifiableCredential", "UniversityDegree" }));
    EXPECT_EQ(j.at("credentialSubject").at("id"), f.holder.id.str());
    const auto back = credential::credential::from_json(j);
    EXPECT_EQ(back.canonical_body(), issued.cred.canonical_body());
    EXPECT_EQ(back.sig, issued.cred.sig);
    EXPECT_EQ(back.id, issued.cred.id);
    EXPECT_EQ(format_timestamp(0), "1970-01-01T00:00:00Z");
    EXPECT_EQ(parse_timestamp("2019-07-08T12:30:05Z"), 1562589005);
}

TEST(Token, CompactJwtLayout)
{
    fixture f;
    const auto t = f.issue({ "degree" }).token;
    const auto compact = t.compact();
    ASSERT_EQ(std::count(compact.begin(), compact.end(), '.'), 2);
    const auto header = base64url_decode(std::string_view { compact }.substr(0, compact.find('.')));
    EXPECT_EQ(as_string(header), R"({"alg":"EdDSA","typ":"JWT"})");
    const auto reparsed = access_token::parse(compact);
    EXPECT_EQ(reparsed.compact(), compact);
    EXPECT_TRUE(reparsed.verify(f.p.super_key().public_key()));
    EXPECT_FALSE(reparsed.verify(f.issuer.key.public_key()));
    // Signature covers the two leading segments as sent.
    const auto dot2 = compact.rfind('.');
    std::array<uint8_t, 64> sig {};
    const auto raw = base64url_decode(std::string_view { compact }.substr(dot2 + 1));
    std::copy(raw.begin(), raw.end(), sig.begin());
    EXPECT_TRUE(oracle::ed25519_verify(f.p.super_key().public_key(), std::string_view { compact }.substr(0, dot2), sig));
    EXPECT_EQ(code_of([] { access_token::parse("a.b"); }), errc::bad_token);
}

TEST(Token, SingleBitMutationsNeverPass)
{
    fixture f;
    const auto issued = f.issue({ "degree" });
    const auto compact = issued.token.compact();
    std::vector<std::string> segs;
    size_t start = 0;
    for (int i = 0; i < 3; ++i) {
        const auto end = compact.find('.', start);
        segs.push_back(compact.substr(start, end == std::string::npos ? std::string::npos : end - start));
        start = end + 1;
    }
    std::mt19937_64 g { 17 };
    int bad_token = 0, integrity = 0;
    for (int trial = 0; trial < 1000; ++trial) {
        auto parts = segs;
        const auto s = g() % 3;
        auto raw = base64url_decode(parts[s]);
        const auto bit = g() % (raw.size() * 8);
        raw[bit / 8] ^= static_cast<uint8_t>(1u << (bit % 8));
        parts[s] = base64url_encode(raw);
        const auto mutated = parts[0] + "." + parts[1] + "." + parts[2];
        const auto r = f.p.credentials().verify(issued.cred, mutated, f.p.credentials().now());
        ASSERT_FALSE(r.passed) << mutated;
        if (r.failure == errc::bad_token)
            ++bad_token;
        else if (r.failure == errc::integrity_mismatch)
            ++integrity;
        else
            FAIL() << "unexpected " << to_string(r.failure);
    }
    EXPECT_EQ(bad_token + integrity, 1000);
}

TEST(Verify, FreshCredentialPassesAllChecks)
{
    fixture f;
    const auto issued = f.issue({ "degree" });
    const auto r = f.verify(issued.cred, issued.token);
    EXPECT_TRUE(r.passed);
    EXPECT_EQ(r.checks_passed, verification_checks.size());
    const auto j = r.to_json();
    EXPECT_EQ(j.at("checks").size(), 7u);
    for (const auto &c: j.at("checks"))
        EXPECT_EQ(c.at("result"), "pass");
}

TEST(Verify, IntegrityMismatchOnAlteredClaim)
{
    fixture f;
    const auto issued = f.issue({ "degree", "name" });
    auto altered = issued.cred;
    altered.claims["degree"] = "PhD";
    EXPECT_NE(altered.compute_id(), issued.cred.id);
    EXPECT_EQ(altered.compute_id(), oracle::sha256(body_oracle(altered)));
    const auto r = f.verify(altered, issued.token);
    EXPECT_FALSE(r.passed);
    EXPECT_EQ(r.failure, errc::integrity_mismatch);
    EXPECT_EQ(r.checks_passed, 1u);
}

TEST(TimeConstrained, WindowChecks)
{
    fixture f;
    const auto issued = f.issue({ "degree" });
    const auto t0 = f.p.now_seconds();
    const auto tok = f.grant_time(issued.cred.id, t0, t0 + 3600);
    EXPECT_FALSE(tok.claims().one_off);
    EXPECT_TRUE(f.p.credentials().token(tok.id()).has_value());
    EXPECT_TRUE(f.verify(issued.cred, tok, t0).passed);
    EXPECT_TRUE(f.verify(issued.cred, tok, t0 + 3600).passed);
    EXPECT_EQ(f.verify(issued.cred, tok, t0 + 3601).failure, errc::expired);
    const auto later = f.grant_time(issued.cred.id, t0 + 100, t0 + 200);
    EXPECT_EQ(f.verify(issued.cred, later, t0 + 99).failure, errc::not_yet_valid);
    // Repeated use inside the window is allowed for time-constrained tokens.
    EXPECT_TRUE(f.verify(issued.cred, tok, t0 + 10).passed);
}

TEST(TimeConstrained, GrantErrors)
{
    fixture f;
    const auto issued = f.issue({ "degree" });
    const auto id = issued.cred.id;
    const auto t0 = f.p.now_seconds();
    EXPECT_EQ(code_of([&] { f.grant_time(id, t0 + 10, t0); }), errc::bad_window);
    EXPECT_EQ(code_of([&] {
        f.p.credentials().grant_time_constrained(id, t0, t0 + 5,
            f.issuer.key.sign(credential_service::grant_message(id, t0, t0 + 5, false)));
    }), errc::not_holder);
    EXPECT_EQ(code_of([&] { f.grant_time(digest {}, t0, t0 + 5); }), errc::unknown_credential);
    f.p.credentials().cancel(id, f.issuer.key.sign(credential_service::cancel_message(id)));
    EXPECT_EQ(code_of([&] { f.grant_time(id, t0, t0 + 5); }), errc::cancelled);
}

TEST(OneOff, ConsumedExactlyOnce)
{
    fixture f;
    const auto issued = f.issue({ "degree" });
    const auto t0 = f.p.now_seconds();
    const auto a = f.grant_once(issued.cred.id, t0 + 600);
    const auto b = f.grant_once(issued.cred.id, t0 + 600);
    EXPECT_TRUE(a.claims().one_off);
    EXPECT_NE(a.id(), b.id());
    EXPECT_EQ(f.p.credentials().token(a.id())->state, access_state::unused);

    EXPECT_TRUE(f.verify(issued.cred, a).passed);
    EXPECT_EQ(f.p.credentials().token(a.id())->state, access_state::consumed);
    EXPECT_EQ(f.verify(issued.cred, a).failure, errc::consumed_token);
    // The second token has its own flag.
    EXPECT_EQ(f.p.credentials().token(b.id())->state, access_state::unused);
    EXPECT_TRUE(f.verify(issued.cred, b).passed);
    EXPECT_EQ(f.verify(issued.cred, b).failure, errc::consumed_token);
}

TEST(OneOff, FailedVerificationDoesNotConsume)
{
    fixture f;
    const auto issued = f.issue({ "degree" });
    const auto t = f.grant_once(issued.cred.id, f.p.now_seconds() + 600);
    auto altered = issued.cred;
    altered.claims["degree"] = "PhD";
    EXPECT_EQ(f.verify(altered, t).failure, errc::integrity_mismatch);
    f.set_status(f.issuer.id, issuer_status::removed);
    EXPECT_EQ(f.verify(issued.cred, t).failure, errc::untrusted_issuer);
    EXPECT_EQ(f.p.credentials().token(t.id())->state, access_state::unused);
    f.set_status(f.issuer.id, issuer_status::active);
    EXPECT_TRUE(f.verify(issued.cred, t).passed);
}

TEST(OneOff, ConcurrentVerificationsPassOnce)
{
    fixture f;
    const auto issued = f.issue({ "degree" });
    const auto t = f.grant_once(issued.cred.id, f.p.now_seconds() + 600);
    std::atomic<int> passed { 0 }, consumed { 0 };
    std::vector<std::thread> threads;
    for (int i = 0; i < 32; ++i)
        threads.emplace_back([&] {
            const auto r = f.verify(issued.cred, t);
            if (r.passed)
                ++passed;
            else if (r.failure == errc::consumed_token)
                ++consumed;
        });
    for (auto &th: threads)
        th.join();
    EXPECT_EQ(passed, 1);
    EXPECT_EQ(consumed, 31);
}

TEST(Cancellation, Rules)
{
    fixture f;
    const auto issued = f.issue({ "degree" });
    const auto id = issued.cred.id;
    const auto other = f.make_actor();
    f.signup(other.id);
    EXPECT_EQ(code_of([&] { f.p.credentials().cancel(id, other.key.sign(credential_service::cancel_message(id))); }),
        errc::not_issuer);
    EXPECT_EQ(code_of([&] { f.p.credentials().cancel(digest {}, f.issuer.key.sign(credential_service::cancel_message(digest {}))); }),
        errc::unknown_credential);
    f.p.credentials().cancel(id, f.issuer.key.sign(credential_service::cancel_message(id)));
    EXPECT_EQ(f.verify(issued.cred, issued.token).failure, errc::cancelled);
    EXPECT_NO_THROW(f.p.credentials().cancel(id, f.issuer.key.sign(credential_service::cancel_message(id))));
    EXPECT_EQ(f.p.credentials().record(id)->status, record_status::cancelled);
}

TEST(Issuers, SignupAndUpdateRules)
{
    fixture f;
    const auto candidate = f.make_actor();
    const auto msg = issuer_registry::signup_message(candidate.id);
    EXPECT_EQ(code_of([&] { f.p.issuers().signup(candidate.id, candidate.key.sign(msg)); }), errc::not_super);
    const did::identifier ghost { address_of(keyvault::generate_keypair(f.rng).public_key()) };
    EXPECT_EQ(code_of([&] { f.signup(ghost); }), errc::unknown_did);

    const auto revoked = f.make_actor();
    f.p.dids().confirm(f.p.dids().revoke(revoked.id, revoked.key));
    EXPECT_EQ(code_of([&] { f.signup(revoked.id); }), errc::unknown_did);

    f.signup(candidate.id);
    EXPECT_EQ(code_of([&] { f.signup(candidate.id); }), errc::already_issuer);
    const auto rec = f.p.issuers().find(candidate.id);
    ASSERT_TRUE(rec);
    EXPECT_EQ(rec->status, issuer_status::active);
    EXPECT_EQ(rec->approved_by, address_of(f.p.super_key().public_key()));

    EXPECT_EQ(code_of([&] {
        f.p.issuers().update(ghost, issuer_status::removed,
            f.p.super_key().sign(issuer_registry::update_message(ghost, issuer_status::removed, 0)));
    }), errc::unknown_issuer);
    EXPECT_EQ(code_of([&] {
        f.p.issuers().update(candidate.id, issuer_status::removed,
            candidate.key.sign(issuer_registry::update_message(candidate.id, issuer_status::removed, 0)));
    }), errc::not_super);

    // A super signature is good for one version only.
    const auto sig = f.p.super_key().sign(issuer_registry::update_message(candidate.id, issuer_status::removed, 0));
    f.p.issuers().update(candidate.id, issuer_status::removed, sig);
    f.set_status(candidate.id, issuer_status::active);
    EXPECT_EQ(code_of([&] { f.p.issuers().update(candidate.id, issuer_status::removed, sig); }), errc::not_super);
    EXPECT_TRUE(f.p.issuers().is_active(candidate.id));
}

TEST(Issuers, RemovedIssuerFailsVerificationUntilRestored)
{
    fixture f;
    const auto issued = f.issue({ "degree" });
    f.set_status(f.issuer.id, issuer_status::removed);
    EXPECT_EQ(f.verify(issued.cred, issued.token).failure, errc::untrusted_issuer);
    f.set_status(f.issuer.id, issuer_status::active);
    EXPECT_TRUE(f.verify(issued.cred, issued.token).passed);
}

TEST(Verify, IssuerKeyRotationKeepsOldCredentialsValid)
{
    fixture f;
    const auto issued = f.issue({ "degree" });
    const auto delegate = f.make_actor();
    f.p.dids().confirm(f.p.dids().add_delegates(f.issuer.id, { delegate.id }, f.issuer.key));
    const auto fresh = keyvault::generate_keypair(f.rng);
    f.p.dids().confirm(f.p.dids().propose_key_update(f.issuer.id, fresh.public_key(), delegate.id, delegate.key));
    ASSERT_EQ(f.p.dids().entry(f.issuer.id).owner_key, fresh.public_key());

    EXPECT_TRUE(f.verify(issued.cred, issued.token).passed);
    EXPECT_EQ(code_of([&] { f.issue({ "degree" }); }), errc::not_issuer);
    const auto next = f.p.credentials().generate_selective_credential(f.issuer.id, f.holder.id, { "degree" }, fresh);
    EXPECT_TRUE(f.verify(next.cred, next.token).passed);

    // A forged credential back-dated to before the rotation but signed with the new key.
    auto forged = next.cred;
    forged.issued_at = issued.cred.issued_at;
    forged.sig = fresh.sign(as_bytes(forged.canonical_body()));
    forged.id = forged.compute_id();
    const auto t = f.p.credentials().grant_time_constrained(next.cred.id, 0, 1'000'000,
        f.holder.key.sign(credential_service::grant_message(next.cred.id, 0, 1'000'000, false)));
    EXPECT_EQ(f.verify(forged, t).failure, errc::integrity_mismatch);
}
