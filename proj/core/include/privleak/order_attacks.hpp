// Attacks on order statistics (MIN / MAX / MED) of a k-suppressing engine
// over 1D data.
//
// Everything here observes only query answers and suppression bits; occupied
// coordinates are located by bisecting the suppression boundary, and every
// probe is charged to the engine's query counter.
#pragma once

#include <cstdint>
#include <map>
#include <vector>

#include "privleak/dataset.hpp"
#include "privleak/query_engine.hpp"

namespace privleak {

enum class ExtremumKind { Min, Max };
enum class ExtremumScope { Global, KLocal };

struct ExtremumFinding {
    std::int64_t coordinate = 0;
    double speed = 0.0;
    ExtremumKind kind = ExtremumKind::Min;
    ExtremumScope scope = ExtremumScope::Global;
    // False when every range that excludes the extremum is suppressed, which
    // can happen for n < 2k; the speed is still exact.
    bool position_known = true;
    std::uint64_t queries_used = 0;
};

// Value first (whole-span query), then position: shrink the span from the
// side that keeps the extremum unchanged and bisect the boundary where the
// answer changes.  If both sides hit suppression before any change, the
// position stays unknown.
ExtremumFinding attack_global_extremum(const Engine& e, ExtremumKind kind, std::int64_t tau,
                                       SpanBounds span);

struct KLocalScan {
    std::vector<ExtremumFinding> findings;
    // (k+1)-record windows actually probed, as (left, right) coordinates.
    std::vector<std::pair<std::int64_t, std::int64_t>> windows;
    std::uint64_t queries_used = 0;
};

// A record is k-locally extreme when some (k+1)-record window has it as the
// outermost member and it attains the window's min or max: dropping it from
// the window changes the answer, which attributes the value to it.
KLocalScan attack_k_local_extremum(const Engine& e, std::int64_t tau, SpanBounds span);

struct ScanRecovery {
    std::map<std::int64_t, double> recovered;  // coordinate -> speed
    bool complete = false;
    // Leftover coordinates whose values are known only as a set (n = 3 keeps
    // the middle coordinate invisible to suppression; n = 4 cannot separate
    // the two interior records by any answerable query).
    std::vector<std::int64_t> unresolved_coords;
    std::vector<double> unresolved_values;
    std::uint64_t queries_used = 0;
};

// k = 3 full reconstruction: slide the minimal 3-record window across the
// graph from both ends; each step drops exactly one record whose speed is
// the set difference of consecutive {min, med, max} triples.  Complete for
// n >= 5.
ScanRecovery attack_full_scan_k3(const Engine& e, std::int64_t tau, SpanBounds span);

}  // namespace privleak
