#pragma once

#include <cstdint>
#include <span>
#include <vector>

#include <jumpga/bitstring.hpp>

namespace jumpga::diversity {

/// Pairwise Hamming distances of the population slots, with incremental
/// maintenance of the maximum distance d(P) and the number of slot pairs
/// achieving it.
///
/// replace() recomputes only the row/column of the replaced slot; the
/// per-row maxima are patched in O(mu) with an occasional row rescan when a
/// row's last maximal partner was the replaced slot.
class DistanceMatrix {
public:
    DistanceMatrix() = default;
    explicit DistanceMatrix(std::span<const core::Genotype> members) { build(members); }

    void build(std::span<const core::Genotype> members);

    /// `members` must already hold the new genotype at `slot`.
    void replace(std::size_t slot, std::span<const core::Genotype> members);

    std::size_t size() const { return size_; }
    int at(std::size_t i, std::size_t j) const { return dist_[i * size_ + j]; }

    /// d(P): max over slot pairs; 0 for a single slot.
    int max_distance() const { return max_distance_; }

    /// Number of unordered slot pairs at distance d(P). When d(P) = 0 every
    /// pair qualifies, so this equals mu*(mu-1)/2.
    std::uint64_t max_pair_count() const { return max_pair_count_; }

    int row_max(std::size_t i) const { return row_max_[i]; }
    std::uint64_t row_max_count(std::size_t i) const { return row_max_count_[i]; }

private:
    void rescan_row(std::size_t i);
    void recompute_global();

    std::size_t size_ = 0;
    std::vector<int> dist_;
    std::vector<int> row_max_;
    std::vector<std::uint64_t> row_max_count_;
    int max_distance_ = 0;
    std::uint64_t max_pair_count_ = 0;
};

/// (d, m) of a population plus the size of the max-distance pair set.
/// Convention: m = 0 when d = 0 (all slots identical).
struct DiversitySnapshot {
    int d = 0;
    int m = 0;
    std::uint64_t max_pair_count = 0;

    friend bool operator==(const DiversitySnapshot&, const DiversitySnapshot&) = default;
};

/// Exact maximum matching of a general graph given as adjacency lists.
/// The bitmask variant memoizes subset states and requires <= 20 vertices;
/// the blossom variant (augmenting paths with blossom contraction) handles
/// any size in O(V^3).
int maximum_matching_bitmask(const std::vector<std::vector<int>>& adj);
int maximum_matching_blossom(const std::vector<std::vector<int>>& adj);

/// One maximum matching as vertex pairs (blossom witness).
std::vector<std::pair<int, int>> maximum_matching_pairs(const std::vector<std::vector<int>>& adj);

/// Adjacency lists of the max-distance graph: vertices are slots, edges the
/// pairs at distance d(P). Empty edge set when d(P) = 0.
std::vector<std::vector<int>> max_distance_graph(const DistanceMatrix& matrix);

/// m(P): maximum number of disjoint slot pairs at distance d(P). Uses the
/// bitmask search for mu <= 20 and blossom beyond; 0 when d(P) = 0.
int max_disjoint_pairs(const DistanceMatrix& matrix);

DiversitySnapshot snapshot(const DistanceMatrix& matrix);

/// Builds a fresh matrix; independent of any incrementally maintained state.
DiversitySnapshot snapshot_from_scratch(std::span<const core::Genotype> members);

int max_distance(std::span<const core::Genotype> members);

struct AddReport {
    int d_before = 0;
    int d_after = 0;
    int m_after = 0;
    bool d_increased = false;
};

/// Diversity of P with one extra member appended. Enforces that a strict
/// increase of d leaves exactly one disjoint max pair.
AddReport probe_addition(std::span<const core::Genotype> members, const core::Genotype& extra);

} // namespace jumpga::diversity
