// Neighborhood-based data substitution (NeNDS): a column is sorted, split
// into consecutive neighborhoods, and each neighborhood's values travel one
// step
// along a single substitution cycle, so no value keeps its row, no pair of
// values swaps, and the multiset of the column never changes.
//
// Two ways to pick the cycle: an exhaustive tree search that minimizes the
// bottleneck (the largest absolute difference along any cycle edge) and the
// linear zigzag walk over the sorted order, which attains the same bottleneck
// on one-dimensional values.
#pragma once

#include <cstdint>
#include <iosfwd>
#include <vector>

#include "privleak/errors.hpp"

namespace privleak {

struct NeighborMember {
    int row = 0;  // 0-based row in the column
    double value = 0.0;
};

struct Neighborhood {
    int index = 0;
    std::vector<NeighborMember> members;  // ascending by value
};

struct SubstitutionCycle {
    // Visiting order of sorted positions, always starting at 0; the edge
    // order[i] -> order[i+1] moves the value at sorted position order[i]
    // into the row of sorted position order[i+1] (wrapping at the end).
    std::vector<int> order;
    double bottleneck = 0.0;
    std::uint64_t ops = 0;  // search-effort counter (nodes expanded / steps)
};

enum class CycleMethod { Tree, Zigzag };

// Sorts ascending (ties by row) and chunks into consecutive blocks.
// Requires nh_size >= 3 and column size divisible by nh_size.
std::vector<Neighborhood> partition_neighborhoods(const std::vector<double>& column,
                                                  int nh_size);

// Exhaustive bottleneck minimization over all substitution cycles, skipping
// edges between duplicate values.  Ties are broken by the lexicographically
// smaller descending-sorted edge-length vector, then by the lexicographically
// smaller predecessor array; on distinct values the winner coincides with the
// zigzag walk.
SubstitutionCycle optimal_cycle_tree(const Neighborhood& nh);

// v1 -> v3 -> v5 -> ... -> v6 -> v4 -> v2 -> v1 over the sorted order.
SubstitutionCycle optimal_cycle_zigzag(const Neighborhood& nh);

struct ObfuscatedColumn {
    std::vector<double> values;
    std::vector<Neighborhood> neighborhoods;
    std::vector<SubstitutionCycle> cycles;  // parallel to neighborhoods
    std::uint64_t ops = 0;
};

ObfuscatedColumn apply_nends(const std::vector<double>& column, int nh_size,
                             CycleMethod method);

// Single-column CSV with a "value" header.
void save_column_csv(const std::vector<double>& column, std::ostream& out);
void save_column_csv(const std::vector<double>& column, const std::string& path);
std::vector<double> load_column_csv(std::istream& in);
std::vector<double> load_column_csv(const std::string& path);

}  // namespace privleak
