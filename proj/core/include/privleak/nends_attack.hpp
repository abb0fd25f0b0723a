// Reconstruction of a NeNDS-obfuscated column from partial knowledge.
//
// Sorting the published column reproduces the original neighborhoods exactly,
// because substitution never moves a value across a neighborhood boundary.
// Within a neighborhood whose values were deranged along a single cycle with
// no two-element swaps, knowing the original rows of all but two values pins
// down the remaining two:
//   - size-3 neighborhoods admit only two candidate cycles and one known
//     value selects between them;
//   - if one unknown value currently occupies an unknown row, the no-swap
//     rule forces it into the other unknown row (case 1);
//   - otherwise walking backwards through known origins from one unknown row
//     reaches the value that belongs there (case 2).
// Published data violating these constraints (a value on its own row, a swap)
// raises inconsistency_error.  Values within a neighborhood are assumed
// distinct, as the dataset model guarantees for speeds.
#pragma once

#include <map>
#include <string>
#include <vector>

#include "privleak/errors.hpp"
#include "privleak/nends.hpp"

namespace privleak {

// One unit of attacker knowledge: in neighborhood `neighborhood`, `value`
// originally sat in row `row`.  All indices 0-based; the CSV form is 1-based.
struct KnownOrigin {
    int neighborhood = 0;
    int row = 0;
    double value = 0.0;
};

using PartialKnowledge = std::vector<KnownOrigin>;

// Identical to partition_neighborhoods: member rows are positions in the
// published column.
std::vector<Neighborhood> reconstruct_neighborhoods(const std::vector<double>& published,
                                                    int nh_size);

enum class ResolutionCase { Direct, NH3, Case1, Case2 };

struct NeighborhoodResolution {
    int index = 0;
    bool resolved = false;
    ResolutionCase used = ResolutionCase::Direct;
    std::map<int, double> origin;  // original row -> value, complete when resolved
};

// `known` maps a value to its original row.  Requires exactly one known value.
NeighborhoodResolution resolve_nh3(const Neighborhood& nh,
                                   const std::map<double, int>& known);

// Requires all but two values known; works for any neighborhood size >= 3.
NeighborhoodResolution resolve_general(const Neighborhood& nh,
                                       const std::map<double, int>& known);

struct RecoveredMapping {
    std::vector<double> original;  // NaN on rows of unresolved neighborhoods
    std::vector<NeighborhoodResolution> neighborhoods;
    bool success = false;  // every neighborhood resolved
};

// Neighborhoods missing more than two origins are reported unresolved rather
// than rejected, so partial knowledge still yields partial recovery.
RecoveredMapping recover_column(const std::vector<double>& published, int nh_size,
                                const PartialKnowledge& knowledge);

// CSV "neighborhood,row,value" with 1-based neighborhood and row indices.
void save_knowledge_csv(const PartialKnowledge& knowledge, std::ostream& out);
void save_knowledge_csv(const PartialKnowledge& knowledge, const std::string& path);
PartialKnowledge load_knowledge_csv(std::istream& in);
PartialKnowledge load_knowledge_csv(const std::string& path);

const char* to_string(ResolutionCase c);

}  // namespace privleak
