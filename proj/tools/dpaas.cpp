#include <algorithm>
// Command-line front end. Every subcommand becomes a gateway request, executed either
// in-process against the state directory or against a running server (--server).
#include <csignal>
#include <pthread.h>
#include <fstream>
#include <iostream>
#include <sstream>
#include <CLI11.hpp>
#include <dpaas/gateway/server.hpp>

using namespace dpaas;
using namespace dpaas::gateway;

namespace {
    std::string read_file(const std::string &path)
    {
        std::ifstream in { path };
        if (!in)
            throw error(errc::io_error, "cannot read " + path);
        std::stringstream ss;
        ss << in.rdbuf();
        return ss.str();
    }

    void write_file(const std::filesystem::path &path, const std::string &text)
    {
        std::ofstream out { path, std::ios::trunc };
        out << text << '\n';
        if (!out)
            throw error(errc::io_error, "cannot write " + path.string());
    }

    json read_json(const std::string &path)
    {
        try {
            return json::parse(read_file(path));
        } catch (const json::exception &ex) {
            throw error(errc::bad_request, path + ": " + ex.what());
        }
    }

    std::string scalar_text(const json &v)
    {
        return v.is_string() ? v.get<std::string>() : v.dump();
    }

    bool flat_object(const json &v)
    {
        return v.is_object() && std::none_of(v.begin(), v.end(), [](const json &x) { return x.is_structured(); });
    }

    void print_text(const json &j, const std::string &indent = {})
    {
        if (!j.is_object()) {
            std::cout << indent << (j.is_string() ? j.get<std::string>() : j.dump()) << '\n';
            return;
        }
        for (const auto &[k, v]: j.items()) {
            if (v.is_string())
                std::cout << indent << k << ": " << v.get<std::string>() << '\n';
            else if (v.is_object() && !v.empty()) {
                std::cout << indent << k << ":\n";
                print_text(v, indent + "  ");
            } else if (v.is_array() && !v.empty() && std::all_of(v.begin(), v.end(), flat_object)) {
                std::cout << indent << k << ":\n";
                for (const auto &item: v) {
                    std::string line;
                    for (const auto &[ik, iv]: item.items())
                        line += (line.empty() ? "" : ", ") + ik + ": " + scalar_text(iv);
                    std::cout << indent << "  - " << line << '\n';
                }
            } else if (v.is_array() && !v.empty() && std::all_of(v.begin(), v.end(), [](const json &x) { return x.is_object(); })) {
                std::cout << indent << k << ":\n";
                for (const auto &item: v) {
                    std::cout << indent << "  -\n";
                    print_text(item, indent + "    ");
                }
            } else
                std::cout << indent << k << ": " << v.dump() << '\n';
        }
    }
}

int main(int argc, char **argv)
{
    CLI::App app { "Design-pattern identity platform: keys, DIDs, credentials, repositories, chain" };
    app.require_subcommand(1);

    std::string state_dir = "dpaas-state";
    std::string config_path;
    std::string server_url;
    bool as_json = false;
    app.add_option("--state", state_dir, "State directory for in-process runs")->envname("DPAAS_STORAGE");
    app.add_option("--config", config_path, "Platform config file (JSON)");
    app.add_option("--server", server_url, "Send requests to a running server, e.g. http://127.0.0.1:8080");
    app.add_flag("--json", as_json, "Machine-readable output");

    request req;
    std::function<void(const json &)> after;   // post-processing of a successful response
    bool verify_command = false;
    auto post = [&](std::string path, json body) { req = { "POST", std::move(path), std::move(body) }; };
    auto get = [&](std::string path) { req = { "GET", std::move(path), json::object() }; };

    // key
    auto *key = app.add_subcommand("key", "Key management")->require_subcommand(1);
    bool master = false;
    std::string key_id, master_id, passphrase, cold, keystore_file, out_path;
    uint64_t index = 0;
    unsigned total = 0, threshold = 0;
    std::vector<std::string> files;
    bool hot = false, as_cold = false, minimal_kdf = false;

    auto *k_gen = key->add_subcommand("generate", "Generate a key (or a master key)");
    k_gen->add_flag("--master", master);
    k_gen->callback([&] { post("/v1/key/generate", { { "master", master } }); });

    auto *k_derive = key->add_subcommand("derive", "Derive a sub-key from a master key");
    k_derive->add_option("--master", master_id)->required();
    auto *index_opt = k_derive->add_option("--index", index);
    k_derive->callback([&] {
        json b { { "master_key_id", master_id } };
        if (index_opt->count())
            b["index"] = index;
        post("/v1/key/master-sub-key-generation", b);
    });

    auto *k_shard = key->add_subcommand("shard", "Split a key into shards");
    k_shard->add_option("--key", key_id)->required();
    k_shard->add_option("--t", threshold)->required();
    k_shard->add_option("--n", total)->required();
    k_shard->add_option("--out", out_path, "Directory for shard-<x>.json files");
    k_shard->callback([&] {
        post("/v1/key/shard-distribution", { { "key_id", key_id }, { "total", total }, { "threshold", threshold } });
        if (!out_path.empty())
            after = [&](const json &res) {
                std::filesystem::create_directories(out_path);
                for (const auto &s: res.at("shards"))
                    write_file(std::filesystem::path { out_path } / ("shard-" + std::to_string(s.at("x").get<int>()) + ".json"),
                        s.dump(2));
            };
    });

    auto *k_combine = key->add_subcommand("combine", "Recover a key from shard files");
    k_combine->add_option("files", files)->required();
    k_combine->callback([&] {
        json shards = json::array();
        for (const auto &f: files)
            shards.push_back(read_json(f));
        post("/v1/key/shard-combination", { { "shards", shards } });
    });

    auto *k_export = key->add_subcommand("export", "Export a key to cold or hot storage");
    k_export->add_option("--key", key_id)->required();
    k_export->add_flag("--cold", as_cold);
    k_export->add_flag("--hot", hot);
    k_export->add_option("--passphrase", passphrase);
    k_export->add_flag("--minimal-kdf", minimal_kdf, "Cheap KDF parameters (testing only)");
    k_export->add_option("--out", out_path, "Write the keystore record here");
    k_export->callback([&] {
        if (hot == as_cold)
            throw CLI::ValidationError("export", "exactly one of --hot or --cold is required");
        if (as_cold) {
            post("/v1/key/hot-cold-wallet-storage", { { "action", "export-cold" }, { "key_id", key_id } });
            return;
        }
        post("/v1/key/hot-cold-wallet-storage", { { "action", "store-hot" }, { "key_id", key_id },
            { "passphrase", passphrase }, { "kdf", minimal_kdf ? "minimal" : "interactive" } });
        if (!out_path.empty())
            after = [&](const json &res) { write_file(out_path, res.at("keystore").get<std::string>()); };
    });

    auto *k_import = key->add_subcommand("import", "Import a key from cold or hot storage");
    k_import->add_option("--cold", cold);
    k_import->add_option("--keystore", keystore_file);
    k_import->add_option("--passphrase", passphrase);
    k_import->callback([&] {
        if (!cold.empty())
            post("/v1/key/hot-cold-wallet-storage", { { "action", "import-cold" }, { "export", cold } });
        else if (!keystore_file.empty())
            post("/v1/key/hot-cold-wallet-storage", { { "action", "load-hot" }, { "keystore", read_file(keystore_file) },
                { "passphrase", passphrase } });
        else
            throw CLI::ValidationError("import", "--cold or --keystore is required");
    });

    auto *k_delete = key->add_subcommand("delete", "Delete a key permanently");
    k_delete->add_option("--key", key_id)->required();
    k_delete->callback([&] { post("/v1/key/key-deletion", { { "key_id", key_id } }); });

    key->add_subcommand("list", "List keys")->callback([&] { get("/v1/key"); });
    auto *k_show = key->add_subcommand("show", "Show one key");
    k_show->add_option("id", key_id)->required();
    k_show->callback([&] { get("/v1/key/" + key_id); });

    // did
    auto *did_cmd = app.add_subcommand("did", "Decentralized identifiers")->require_subcommand(1);
    std::string did_a, did_b, ddo_file, platform_name, uri, new_key, delegate, proposal;
    std::vector<std::string> delegates;
    size_t count = 0;
    bool no_wait = false;
    auto with_wait = [&](json b) {
        b["wait"] = !no_wait;
        return b;
    };

    auto *d_reg = did_cmd->add_subcommand("register", "Register the DID of a key");
    d_reg->add_option("--key", key_id)->required();
    d_reg->add_option("--ddo", ddo_file, "DID document JSON file");
    d_reg->add_flag("--no-wait", no_wait);
    d_reg->callback([&] {
        json b { { "key_id", key_id } };
        if (!ddo_file.empty())
            b["ddo"] = read_json(ddo_file);
        post("/v1/did/registration", with_wait(b));
    });

    auto *d_multi = did_cmd->add_subcommand("register-multiple", "Register DIDs for fresh sub-keys of a master key");
    d_multi->add_option("--master", master_id)->required();
    d_multi->add_option("--count", count)->required();
    d_multi->add_flag("--no-wait", no_wait);
    d_multi->callback([&] { post("/v1/did/multiple-registration", with_wait({ { "master_key_id", master_id }, { "count", count } })); });

    auto *d_resolve = did_cmd->add_subcommand("resolve", "Resolve a DID document");
    d_resolve->add_option("did", did_a)->required();
    d_resolve->callback([&] { get("/v1/did/resolution/" + did_a); });

    auto *d_dual = did_cmd->add_subcommand("dual-resolve", "Resolve two DIDs against one state");
    d_dual->add_option("first", did_a)->required();
    d_dual->add_option("second", did_b)->required();
    d_dual->callback([&] { post("/v1/did/dual-resolution", { { "first", did_a }, { "second", did_b } }); });

    auto *d_update = did_cmd->add_subcommand("update", "Replace the DID document");
    d_update->add_option("did", did_a)->required();
    d_update->add_option("--key", key_id)->required();
    d_update->add_option("--ddo", ddo_file)->required();
    d_update->add_flag("--no-wait", no_wait);
    d_update->callback([&] {
        post("/v1/did/update", with_wait({ { "did", did_a }, { "key_id", key_id }, { "ddo", read_json(ddo_file) } }));
    });

    auto *d_bind = did_cmd->add_subcommand("bind", "Bind a social media profile");
    d_bind->add_option("did", did_a)->required();
    d_bind->add_option("--key", key_id)->required();
    d_bind->add_option("--platform", platform_name)->required();
    d_bind->add_option("--uri", uri)->required();
    d_bind->add_flag("--no-wait", no_wait);
    d_bind->callback([&] {
        post("/v1/did/bound-with-social-media",
            with_wait({ { "did", did_a }, { "key_id", key_id }, { "platform", platform_name }, { "uri", uri } }));
    });

    auto *d_del = did_cmd->add_subcommand("delegates", "Set the delegates of a DID");
    d_del->add_option("did", did_a)->required();
    d_del->add_option("--key", key_id)->required();
    d_del->add_option("delegates", delegates);
    d_del->add_flag("--no-wait", no_wait);
    d_del->callback([&] {
        post("/v1/did/delegates", with_wait({ { "did", did_a }, { "key_id", key_id }, { "delegates", delegates } }));
    });

    auto *d_prop = did_cmd->add_subcommand("propose", "Propose a key replacement as a delegate");
    d_prop->add_option("did", did_a)->required();
    d_prop->add_option("--new-key", new_key, "Public key hex")->required();
    d_prop->add_option("--delegate", delegate)->required();
    d_prop->add_option("--key", key_id)->required();
    d_prop->add_flag("--no-wait", no_wait);
    d_prop->callback([&] {
        post("/v1/did/update-by-delegates", with_wait({ { "action", "propose" }, { "did", did_a }, { "new_key", new_key },
            { "delegate", delegate }, { "key_id", key_id } }));
    });

    auto *d_vote = did_cmd->add_subcommand("vote", "Vote for a key replacement proposal");
    d_vote->add_option("proposal", proposal)->required();
    d_vote->add_option("--delegate", delegate)->required();
    d_vote->add_option("--key", key_id)->required();
    d_vote->add_flag("--no-wait", no_wait);
    d_vote->callback([&] {
        post("/v1/did/update-by-delegates", with_wait({ { "action", "vote" }, { "proposal_id", proposal },
            { "delegate", delegate }, { "key_id", key_id } }));
    });

    auto *d_revoke = did_cmd->add_subcommand("revoke", "Revoke a DID");
    d_revoke->add_option("did", did_a)->required();
    d_revoke->add_option("--key", key_id)->required();
    d_revoke->add_flag("--no-wait", no_wait);
    d_revoke->callback([&] { post("/v1/did/revocation", with_wait({ { "did", did_a }, { "key_id", key_id } })); });

    // cred
    auto *cred = app.add_subcommand("cred", "Credentials")->require_subcommand(1);
    std::string issuer, holder, approver, status, schema, cred_id, cred_file, token;
    std::vector<std::string> attrs, pairs;
    int64_t nbf = 0, exp = 0, at = 0;

    auto approver_id = [&] {
        if (!approver.empty())
            return approver;
        throw CLI::ValidationError("approver", "--approver is required");
    };

    auto *c_signup = cred->add_subcommand("issuer-signup", "Approve an issuer");
    c_signup->add_option("issuer", issuer)->required();
    c_signup->add_option("--approver", approver, "Approving key id (the platform super key)")->required();
    c_signup->callback([&] { post("/v1/credential/issuer-signup", { { "issuer", issuer }, { "approver_key_id", approver_id() } }); });

    auto *c_update = cred->add_subcommand("issuer-update", "Change an issuer's status");
    c_update->add_option("issuer", issuer)->required();
    c_update->add_option("--status", status)->required()->check(CLI::IsMember({ "active", "removed" }));
    c_update->add_option("--approver", approver)->required();
    c_update->callback([&] {
        post("/v1/credential/issuer-update", { { "issuer", issuer }, { "status", status }, { "approver_key_id", approver_id() } });
    });

    auto *c_attr = cred->add_subcommand("attributes", "Store holder attributes in the issuer's repository");
    c_attr->add_option("--issuer", issuer)->required();
    c_attr->add_option("--holder", holder)->required();
    c_attr->add_option("--key", key_id)->required();
    c_attr->add_option("pairs", pairs, "name=value")->required();
    c_attr->callback([&] {
        json a = json::object();
        for (const auto &p: pairs) {
            const auto eq = p.find('=');
            if (eq == std::string::npos)
                throw CLI::ValidationError("pairs", "expected name=value: " + p);
            a[p.substr(0, eq)] = p.substr(eq + 1);
        }
        post("/v1/credential/attributes", { { "issuer", issuer }, { "holder", holder }, { "key_id", key_id }, { "attributes", a } });
    });

    auto *c_issue = cred->add_subcommand("issue", "Generate a selective credential");
    c_issue->add_option("--issuer", issuer)->required();
    c_issue->add_option("--holder", holder)->required();
    c_issue->add_option("--key", key_id, "Issuer key id")->required();
    c_issue->add_option("--attr", attrs)->required();
    c_issue->add_option("--schema", schema);
    c_issue->add_option("--out", out_path, "Write the credential JSON here");
    c_issue->callback([&] {
        post("/v1/credential/selective-content-generation", { { "issuer", issuer }, { "holder", holder }, { "key_id", key_id },
            { "attributes", attrs }, { "schema", schema } });
        if (!out_path.empty())
            after = [&](const json &res) { write_file(out_path, res.at("credential").dump(2)); };
    });

    auto *c_time = cred->add_subcommand("grant-time", "Grant time-constrained access");
    c_time->add_option("credential", cred_id)->required();
    c_time->add_option("--nbf", nbf)->required();
    c_time->add_option("--exp", exp)->required();
    c_time->add_option("--key", key_id, "Holder key id")->required();
    c_time->callback([&] {
        post("/v1/credential/time-constrained-access", { { "credential_id", cred_id }, { "nbf", nbf }, { "exp", exp }, { "key_id", key_id } });
    });

    auto *c_once = cred->add_subcommand("grant-oneoff", "Grant one-off access");
    c_once->add_option("credential", cred_id)->required();
    c_once->add_option("--exp", exp)->required();
    c_once->add_option("--key", key_id, "Holder key id")->required();
    c_once->callback([&] {
        post("/v1/credential/one-off-access", { { "credential_id", cred_id }, { "exp", exp }, { "key_id", key_id } });
    });

    auto *c_verify = cred->add_subcommand("verify", "Verify a credential with an access token");
    c_verify->add_option("--credential", cred_file, "Credential JSON file")->required();
    c_verify->add_option("--token", token)->required();
    auto *at_opt = c_verify->add_option("--at", at, "Logical time in seconds (default: now)");
    c_verify->callback([&] {
        json b { { "credential", read_json(cred_file) }, { "token", token } };
        if (at_opt->count())
            b["at"] = at;
        post("/v1/credential/verification", b);
        verify_command = true;
    });

    auto *c_cancel = cred->add_subcommand("cancel", "Cancel a credential");
    c_cancel->add_option("credential", cred_id)->required();
    c_cancel->add_option("--key", key_id, "Issuer key id")->required();
    c_cancel->callback([&] { post("/v1/credential/cancellation", { { "credential_id", cred_id }, { "key_id", key_id } }); });

    // repo
    auto *repo = app.add_subcommand("repo", "Off-chain repositories")->require_subcommand(1);
    std::string repo_id, record_key, value_text;
    uint64_t epoch = 0;

    auto *r_put = repo->add_subcommand("put", "Write a record");
    r_put->add_option("repository", repo_id)->required();
    r_put->add_option("key", record_key)->required();
    r_put->add_option("value", value_text, "JSON value")->required();
    r_put->callback([&] {
        json v;
        try {
            v = json::parse(value_text);
        } catch (const json::exception &) {
            v = value_text;
        }
        post("/v1/repository/put", { { "repository_id", repo_id }, { "key", record_key }, { "value", v } });
    });

    auto *r_anchor = repo->add_subcommand("anchor", "Anchor a repository digest on the ledger");
    r_anchor->add_option("repository", repo_id)->required();
    r_anchor->add_flag("--no-wait", no_wait);
    r_anchor->callback([&] { post("/v1/repository/anchoring-to-blockchain", with_wait({ { "repository_id", repo_id } })); });

    auto *r_verify = repo->add_subcommand("verify-integrity", "Compare a repository with an anchored epoch");
    r_verify->add_option("repository", repo_id)->required();
    r_verify->add_option("--epoch", epoch)->required();
    r_verify->callback([&] { post("/v1/repository/integrity", { { "repository_id", repo_id }, { "epoch", epoch } }); });

    auto *r_digest = repo->add_subcommand("digest", "Current Merkle root of a repository");
    r_digest->add_option("repository", repo_id)->required();
    r_digest->callback([&] { get("/v1/repository/digest/" + repo_id); });

    // chain
    auto *chain = app.add_subcommand("chain", "Ledger")->require_subcommand(1);
    uint64_t blocks = 1;
    std::string tx;
    auto *ch_produce = chain->add_subcommand("produce-block", "Produce blocks");
    ch_produce->add_option("--count", blocks);
    ch_produce->callback([&] { post("/v1/chain/produce-block", { { "count", blocks } }); });
    chain->add_subcommand("status", "Chain status")->callback([&] { get("/v1/chain/status"); });
    auto *ch_receipt = chain->add_subcommand("receipt", "Receipt of a transaction");
    ch_receipt->add_option("tx", tx)->required();
    ch_receipt->callback([&] { get("/v1/chain/receipt/" + tx); });

    // bench, catalog, serve
    std::vector<std::string> ops;
    size_t batch = 20;
    double duration = 60;
    uint64_t seed = 1;
    auto *bench = app.add_subcommand("bench", "Throughput benchmark");
    bench->add_option("operations", ops)->required();
    bench->add_option("--batch", batch, "Concurrent calls per batch");
    bench->add_option("--duration", duration, "Seconds (logical for registration, wall otherwise)");
    bench->add_option("--seed", seed);
    bench->callback([&] {
        post("/v1/bench", { { "operations", ops }, { "batch_size", batch }, { "duration", duration }, { "seed", seed } });
    });

    app.add_subcommand("catalog", "List endpoints")->callback([&] { get("/v1/catalog"); });

    std::string bind;
    auto *serve = app.add_subcommand("serve", "Run the HTTP gateway");
    serve->add_option("--bind", bind, "host:port");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError &e) {
        return app.exit(e);
    }

    try {
        platform_config cfg = config_path.empty() ? platform_config {} : platform_config::load(config_path);
        if (!cfg.storage)
            cfg.storage = state_dir;
        cfg.apply_env();
        if (!bind.empty())
            cfg.set_bind(bind);

        if (serve->parsed()) {
            platform p { cfg };
            dispatcher d { p };
            http_server srv { d, cfg.bind_host, cfg.bind_port };
            // Block the stop signals before the server threads exist so only sigwait sees them.
            sigset_t stop_signals;
            sigemptyset(&stop_signals);
            sigaddset(&stop_signals, SIGINT);
            sigaddset(&stop_signals, SIGTERM);
            pthread_sigmask(SIG_BLOCK, &stop_signals, nullptr);
            srv.start();
            std::cerr << "serving on " << srv.host() << ":" << srv.port() << '\n';
            int sig = 0;
            sigwait(&stop_signals, &sig);
            srv.stop();
            return 0;
        }

        response res;
        if (!server_url.empty()) {
            res = remote_call(server_url, req);
        } else {
            platform p { cfg };
            dispatcher d { p };
            res = d.handle(req);
        }

        if (res.status != 200) {
            if (as_json)
                std::cout << res.body.dump() << '\n';
            std::cerr << "error: " << res.body.value("code", "Error") << ": " << res.body.value("detail", "") << '\n';
            return 1;
        }
        if (after)
            after(res.body);
        if (as_json)
            std::cout << res.body.dump() << '\n';
        else
            print_text(res.body);
        if (verify_command && !res.body.at("passed").get<bool>()) {
            std::cerr << "error: " << res.body.at("failure").get<std::string>() << '\n';
            return 1;
        }
        return 0;
    } catch (const error &ex) {
        if (as_json)
            std::cout << error_body(ex).dump() << '\n';
        std::cerr << "error: " << to_string(ex.code()) << ": " << ex.detail() << '\n';
        return 1;
    }
}
