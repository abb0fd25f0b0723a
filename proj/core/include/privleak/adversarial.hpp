// Adversarial speed assignments whose hidden member is never returned by any
// answerable MIN / MAX / MED range query, plus the brute-force oracle that
// certifies this by enumerating every such query.
//
// Indices are 1-based throughout this module, matching the s_1..s_n and
// x_1..x_n naming used in reports; records sit at consecutive coordinates.
#pragma once

#include <cstdint>
#include <iosfwd>
#include <vector>

#include "privleak/query_engine.hpp"

namespace privleak {

struct SpeedAssignment {
    std::vector<double> speeds;  // speeds[i] belongs to position index i+1
    int hidden_index = 1;
    int k = 4;
};

// Hides s_1 for any k >= 4, n >= k.  Deterministic: each extension places
// the new speed strictly beyond the running whole-prefix median, on the side
// away from s_1, so no median query can ever step onto s_1.
SpeedAssignment lemma1_assignment(int n, int k);

// Hides s_3 for any k >= 4, n >= 2k, growing an 8-record base ordering.
// Each extension draws a value strictly between s_3 and the closest median
// among the prefixes that contain s_3, keeping every median non-adjacent to
// it.  Values are renormalized to 10 * rank, so runs differ across seeds
// only in which admissible ordering they pick.
SpeedAssignment lemma2_assignment(int n, int k, std::uint64_t seed = 0);

struct ResultCell {
    int lo = 0;  // first position index of the range
    int hi = 0;  // last position index
    int min_index = 0;
    int max_index = 0;
    int med_index = 0;
};

struct ResultTable {
    int n = 0;
    int k = 0;
    std::vector<ResultCell> cells;
};

// Every contiguous range of at least k records, evaluated directly.
ResultTable enumerate_all_results(const SpeedAssignment& a);

struct Witness {
    int lo = 0;
    int hi = 0;
    QueryKind kind = QueryKind::Min;
};

struct HiddenessReport {
    bool hidden = false;
    std::vector<Witness> witnesses;  // every cell that returned the target
    ResultTable table;
};

HiddenessReport verify_hidden(const SpeedAssignment& a, int target);

// CSV rows "range_start,range_end,kind,result_index".
void write_result_table_csv(const ResultTable& t, std::ostream& out);

}  // namespace privleak
