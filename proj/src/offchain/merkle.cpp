#include <vector>
#include <dpaas/common/crypto.hpp>
#include <dpaas/offchain/merkle.hpp>

namespace dpaas::offchain {
    digest merkle_root(std::span<const digest> leaves)
    {
        if (leaves.empty())
            return sha256(byte_view {});
        std::vector<digest> level { leaves.begin(), leaves.end() };
        std::array<uint8_t, 64> pair;
        while (level.size() > 1) {
            std::vector<digest> next;
            next.reserve((level.size() + 1) / 2);
            for (size_t i = 0; i + 1 < level.size(); i += 2) {
                std::copy(level[i].begin(), level[i].end(), pair.begin());
                std::copy(level[i + 1].begin(), level[i + 1].end(), pair.begin() + 32);
                next.push_back(sha256(pair));
            }
            if (level.size() % 2 == 1)
                next.push_back(level.back());
            level = std::move(next);
        }
        return level.front();
    }
}
