// Average-query reconstruction attacks against a k-suppressing engine.
//
// The linear attack walks half-open ranges [x, +inf) along one axis and
// recovers dropped speeds by differencing consecutive answered averages;
// counts are inferred backwards from the terminal range, which is known to
// hold exactly k records.  The planar and cubic attacks split a section with
// one axis-aligned cut, recover the section sizes and the cut-line average
// from five AVG queries, and either stop (fewer than k records share the cut
// line) or recurse into the cut line with the linear attack.
#pragma once

#include <array>
#include <cstdint>
#include <map>
#include <utility>
#include <vector>

#include "privleak/dataset.hpp"
#include "privleak/errors.hpp"
#include "privleak/query_engine.hpp"

namespace privleak {

struct LinearAttackOptions {
    std::int64_t tau = 0;
    // Attacker profile.  false: only the target coordinate is known and the
    // sweep advances one coordinate per query.  true: all record positions
    // are known and the sweep advances one occupied coordinate per query.
    bool knows_positions = false;
};

struct LinearRecovery {
    std::map<std::int64_t, double> recovered;  // swept-axis coordinate -> speed
    Range terminal_range;                      // last answered range; holds exactly k records
    double terminal_avg = 0.0;
    std::uint64_t queries_used = 0;
    // Ground-truth check by the simulator: a dropped record left the average
    // unchanged, so the backward count inference is corrupt.
    bool ambiguous = false;
    std::vector<std::pair<std::int64_t, double>> trace;  // (range start, answered avg)
};

// Requires a record at x_target and at least k records at coordinates
// >= x_target; throws attack_error when the first query is already
// suppressed.
LinearRecovery attack_linear_avg(const Engine& e, std::int64_t x_target,
                                 const LinearAttackOptions& opt = {});

struct PartitionInputs {
    double s_n = 0.0;       // AVG over the whole section
    double s_top = 0.0;     // AVG over top (cut line included)
    double s_bot = 0.0;     // AVG over bottom (cut line included)
    double s_top_hat = 0.0; // AVG over top without the cut line
    double s_bot_hat = 0.0; // AVG over bottom without the cut line
    int n = 0;              // section record count
};

struct PartitionStats {
    double t = 0.0;      // records in top
    double b = 0.0;      // records in bottom
    double m = 0.0;      // records on the cut line
    double s_mid = 0.0;  // average on the cut line
    PartitionInputs in;
};

PartitionStats solve_partition_closed(const PartitionInputs& in);
PartitionStats solve_partition_linear(const PartitionInputs& in);
// Both routes, with a mutual agreement check at 1e-9 relative tolerance.
PartitionStats solve_partition_system(const PartitionInputs& in);

enum class CutDecision {
    Success1,           // cut line holds more than k records; linear follow-up ran
    Success2,           // cut line holds fewer than k records; its average leaked
    RetryGroupEqualsK,  // exactly k on the cut line: suppression gives nothing
    RetrySuppressed,    // one of the five section queries was suppressed
    RetrySingular,
    RetryEmptyMid,
    RetryDegenerate,    // follow-up sweep recovered nothing usable
};

struct CutAttempt {
    int axis = 0;
    std::int64_t cut = 0;
    CutDecision decision = CutDecision::RetrySuppressed;
};

enum class AttackStatus { Attack1Success, Attack2Success, Retry, Infeasible };

struct AttackOutcome {
    AttackStatus status = AttackStatus::Infeasible;

    std::array<std::int64_t, 3> victim_pos{0, 0, 0};  // Attack1Success
    double victim_speed = 0.0;
    bool has_line = false;
    LinearRecovery line;

    double group_avg = 0.0;  // Attack2Success
    int group_count = 0;

    bool has_stats = false;  // stats of the decisive cut
    PartitionStats stats;

    std::uint64_t queries_used = 0;
    std::vector<CutAttempt> attempts;
};

struct SectionAttackOptions {
    std::int64_t tau = 0;
    int n = 0;  // section size, known a priori
    SpanBounds span{0, 0};
    std::vector<std::int64_t> cuts;  // cut candidates; empty -> balanced sweep over span
    bool knows_positions = false;
};

// Candidate cut coordinates in [span.lo, span.hi], most balanced first.
std::vector<std::int64_t> balanced_cut_candidates(SpanBounds span);

// One cut evaluated on its own: five AVG queries plus the partition solve.
struct AttemptResult {
    CutDecision decision = CutDecision::RetrySuppressed;
    bool has_stats = false;
    PartitionStats stats;
};
AttemptResult evaluate_cut(const Engine& e, const Range& base, int axis, std::int64_t cut,
                           int n_section, std::int64_t tau);

AttackOutcome attack_planar_avg(const Engine& e, const SectionAttackOptions& opt);
AttackOutcome attack_cubic_avg(const Engine& e, const SectionAttackOptions& opt);

}  // namespace privleak
