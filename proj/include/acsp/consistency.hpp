// Greatest family of partial homomorphisms on at most k elements closed under
// restriction and one-point extension.
#pragma once

#include "acsp/relaxations.hpp"

#include <cstdint>
#include <optional>

namespace acsp {

struct ConsistencyOptions {
    // Process pending removals in a seeded random order instead of FIFO.
    std::optional<std::uint64_t> shuffle_seed;
};

// Starts from every homomorphism of inst[X].
KappaMap k_consistency(const RelStructure& tmpl, const RelStructure& inst, int k, ConsistencyOptions opts = {});
// Starts from seed, which must list homomorphisms only.
KappaMap k_consistency(const RelStructure& tmpl, const RelStructure& inst, int k, const KappaMap& seed,
                       ConsistencyOptions opts = {});

}  // namespace acsp
