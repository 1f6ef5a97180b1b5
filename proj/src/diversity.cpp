#include <jumpga/diversity.hpp>

#include <algorithm>
#include <queue>
#include <stdexcept>
#include <unordered_map>

namespace jumpga::diversity {

void DistanceMatrix::build(std::span<const core::Genotype> members) {
    size_ = members.size();
    dist_.assign(size_ * size_, 0);
    row_max_.assign(size_, 0);
    row_max_count_.assign(size_, 0);
    for (std::size_t i = 0; i < size_; ++i)
        for (std::size_t j = i + 1; j < size_; ++j) {
            const int d = core::hamming(members[i], members[j]);
            dist_[i * size_ + j] = d;
            dist_[j * size_ + i] = d;
        }
    for (std::size_t i = 0; i < size_; ++i) rescan_row(i);
    recompute_global();
}

void DistanceMatrix::rescan_row(std::size_t i) {
    int best = 0;
    std::uint64_t count = 0;
    for (std::size_t j = 0; j < size_; ++j) {
        if (j == i) continue;
        const int d = dist_[i * size_ + j];
        if (d > best) {
            best = d;
            count = 1;
        } else if (d == best) {
            ++count;
        }
    }
    row_max_[i] = best;
    row_max_count_[i] = count;
}

void DistanceMatrix::recompute_global() {
    max_distance_ = 0;
    for (std::size_t i = 0; i < size_; ++i) max_distance_ = std::max(max_distance_, row_max_[i]);
    std::uint64_t ordered = 0;
    for (std::size_t i = 0; i < size_; ++i)
        if (row_max_[i] == max_distance_ && size_ > 1) ordered += row_max_count_[i];
    max_pair_count_ = ordered / 2;
}

void DistanceMatrix::replace(std::size_t slot, std::span<const core::Genotype> members) {
    if (members.size() != size_) throw std::invalid_argument("DistanceMatrix::replace: size changed");
    for (std::size_t j = 0; j < size_; ++j) {
        if (j == slot) continue;
        const int nd = core::hamming(members[slot], members[j]);
        const int old = dist_[slot * size_ + j];
        if (nd == old) continue;
        dist_[slot * size_ + j] = nd;
        dist_[j * size_ + slot] = nd;
        if (nd > row_max_[j]) {
            row_max_[j] = nd;
            row_max_count_[j] = 1;
        } else {
            if (old == row_max_[j]) --row_max_count_[j];
            if (nd == row_max_[j]) ++row_max_count_[j];
            if (row_max_count_[j] == 0) rescan_row(j);
        }
    }
    rescan_row(slot);
    recompute_global();
}

namespace {

// Subset-memoized search: match the lowest remaining vertex or skip it.
int matching_bitmask_impl(std::uint32_t mask, const std::vector<std::uint32_t>& adj,
                          std::unordered_map<std::uint32_t, int>& memo) {
    if (mask == 0) return 0;
    auto it = memo.find(mask);
    if (it != memo.end()) return it->second;
    const int v = std::countr_zero(mask);
    const std::uint32_t rest = mask & (mask - 1);  // drop v
    int best = matching_bitmask_impl(rest, adj, memo);
    std::uint32_t cands = adj[v] & rest;
    while (cands != 0) {
        const int u = std::countr_zero(cands);
        cands &= cands - 1;
        best = std::max(best,
                        1 + matching_bitmask_impl(rest & ~(1U << u), adj, memo));
    }
    memo.emplace(mask, best);
    return best;
}

} // namespace

int maximum_matching_bitmask(const std::vector<std::vector<int>>& adj) {
    const std::size_t n = adj.size();
    if (n > 20) throw std::invalid_argument("maximum_matching_bitmask: more than 20 vertices");
    std::vector<std::uint32_t> masks(n, 0);
    for (std::size_t v = 0; v < n; ++v)
        for (int u : adj[v]) masks[v] |= 1U << u;
    std::unordered_map<std::uint32_t, int> memo;
    const std::uint32_t full = n == 0 ? 0 : (1U << n) - 1U;
    return matching_bitmask_impl(full, masks, memo);
}

namespace {

std::vector<int> blossom_match(const std::vector<std::vector<int>>& adj) {
    const int n = static_cast<int>(adj.size());
    std::vector<int> match(n, -1), parent(n), base(n);
    std::vector<char> used(n), blossom(n);

    auto lca = [&](int a, int b) {
        std::vector<char> seen(n, 0);
        for (;;) {
            a = base[a];
            seen[a] = 1;
            if (match[a] == -1) break;
            a = parent[match[a]];
        }
        for (;;) {
            b = base[b];
            if (seen[b]) return b;
            b = parent[match[b]];
        }
    };

    auto mark_path = [&](int v, int b, int child) {
        while (base[v] != b) {
            blossom[base[v]] = 1;
            blossom[base[match[v]]] = 1;
            parent[v] = child;
            child = match[v];
            v = parent[match[v]];
        }
    };

    auto find_augmenting_path = [&](int root) -> int {
        std::fill(used.begin(), used.end(), 0);
        std::fill(parent.begin(), parent.end(), -1);
        for (int i = 0; i < n; ++i) base[i] = i;
        used[root] = 1;
        std::queue<int> q;
        q.push(root);
        while (!q.empty()) {
            const int v = q.front();
            q.pop();
            for (int to : adj[v]) {
                if (base[v] == base[to] || match[v] == to) continue;
                if (to == root || (match[to] != -1 && parent[match[to]] != -1)) {
                    // odd cycle: contract the blossom
                    const int cur_base = lca(v, to);
                    std::fill(blossom.begin(), blossom.end(), 0);
                    mark_path(v, cur_base, to);
                    mark_path(to, cur_base, v);
                    for (int i = 0; i < n; ++i)
                        if (blossom[base[i]]) {
                            base[i] = cur_base;
                            if (!used[i]) {
                                used[i] = 1;
                                q.push(i);
                            }
                        }
                } else if (parent[to] == -1) {
                    parent[to] = v;
                    if (match[to] == -1) return to;
                    used[match[to]] = 1;
                    q.push(match[to]);
                }
            }
        }
        return -1;
    };

    for (int v = 0; v < n; ++v) {
        if (match[v] != -1) continue;
        const int u = find_augmenting_path(v);
        if (u == -1) continue;
        int cur = u;
        while (cur != -1) {
            const int prev = parent[cur];
            const int next = match[prev];
            match[cur] = prev;
            match[prev] = cur;
            cur = next;
        }
    }
    return match;
}

} // namespace

int maximum_matching_blossom(const std::vector<std::vector<int>>& adj) {
    const auto match = blossom_match(adj);
    int matched = 0;
    for (int v : match)
        if (v != -1) ++matched;
    return matched / 2;
}

std::vector<std::pair<int, int>> maximum_matching_pairs(const std::vector<std::vector<int>>& adj) {
    const auto match = blossom_match(adj);
    std::vector<std::pair<int, int>> pairs;
    for (int v = 0; v < static_cast<int>(match.size()); ++v)
        if (match[v] > v) pairs.emplace_back(v, match[v]);
    return pairs;
}

std::vector<std::vector<int>> max_distance_graph(const DistanceMatrix& matrix) {
    const std::size_t n = matrix.size();
    std::vector<std::vector<int>> adj(n);
    const int d = matrix.max_distance();
    if (d == 0) return adj;
    for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = i + 1; j < n; ++j)
            if (matrix.at(i, j) == d) {
                adj[i].push_back(static_cast<int>(j));
                adj[j].push_back(static_cast<int>(i));
            }
    return adj;
}

int max_disjoint_pairs(const DistanceMatrix& matrix) {
    if (matrix.size() < 2 || matrix.max_distance() == 0) return 0;
    const auto adj = max_distance_graph(matrix);
    if (matrix.size() <= 20) return maximum_matching_bitmask(adj);
    return maximum_matching_blossom(adj);
}

DiversitySnapshot snapshot(const DistanceMatrix& matrix) {
    return {matrix.max_distance(), max_disjoint_pairs(matrix), matrix.max_pair_count()};
}

DiversitySnapshot snapshot_from_scratch(std::span<const core::Genotype> members) {
    DistanceMatrix m(members);
    return snapshot(m);
}

int max_distance(std::span<const core::Genotype> members) {
    int best = 0;
    for (std::size_t i = 0; i < members.size(); ++i)
        for (std::size_t j = i + 1; j < members.size(); ++j)
            best = std::max(best, core::hamming(members[i], members[j]));
    return best;
}

AddReport probe_addition(std::span<const core::Genotype> members, const core::Genotype& extra) {
    AddReport report;
    report.d_before = max_distance(members);
    std::vector<core::Genotype> extended(members.begin(), members.end());
    extended.push_back(extra);
    const DiversitySnapshot snap = snapshot_from_scratch(extended);
    report.d_after = snap.d;
    report.m_after = snap.m;
    report.d_increased = snap.d > report.d_before;
    if (report.d_increased && snap.m != 1)
        throw std::logic_error("probe_addition: d increased but disjoint max pairs != 1");
    return report;
}

} // namespace jumpga::diversity
