#pragma once

#include <span>
#include <dpaas/common/bytes.hpp>

namespace dpaas::offchain {
    // Binary Merkle root. Internal nodes are digest(left || right); a node without a
    // sibling is promoted unchanged to the next level. No leaves gives digest("").
    digest merkle_root(std::span<const digest> leaves);
}
