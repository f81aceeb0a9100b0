#pragma once

#include <string>
#include <vector>
#include <dpaas/common/codec.hpp>
#include <dpaas/gateway/config.hpp>

namespace dpaas::gateway {
    enum class bench_clock { logical, wall };

    struct bench_report {
        std::string operation;
        size_t batch_size = 0;
        double duration = 0;       // requested, seconds
        size_t completed = 0;
        size_t failed = 0;
        double elapsed = 0;        // seconds on `clock`
        double throughput = 0;     // completed / elapsed
        bench_clock clock = bench_clock::wall;
        std::vector<double> series;   // per block (logical) or per second (wall)

        [[nodiscard]] json to_json() const;
    };

    // Operations the harness can drive. Registration runs on the ledger and is measured
    // in logical time; the rest are off-chain and measured in wall time.
    std::vector<std::string> bench_operations();
    bool bench_on_chain(std::string_view operation);

    // Runs every operation in order against one scratch in-memory platform built from
    // `cfg`; each batch is `batch_size` concurrent calls awaited before the next.
    std::vector<bench_report> run_bench(const platform_config &cfg, const std::vector<std::string> &operations,
        size_t batch_size, double duration, uint64_t seed = 1);
    bench_report run_bench(const platform_config &cfg, const std::string &operation, size_t batch_size, double duration,
        uint64_t seed = 1);
}
