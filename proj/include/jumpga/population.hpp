#pragma once

#include <cstddef>
#include <vector>

#include <jumpga/bitstring.hpp>

namespace jumpga::core {

/// Ordered multiset of genotype slots with cached fitness. Slots are
/// positions, so duplicate genotypes occupy distinct slots.
struct Population {
    std::vector<Genotype> members;
    std::vector<int> fitness;

    std::size_t size() const { return members.size(); }
};

} // namespace jumpga::core
