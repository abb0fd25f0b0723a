// Spatial record model for query-set-size-controlled statistical databases:
// records carry integer positions in 1-3 dimensions, a real-valued speed and
// a timestamp.  Ranges are axis-aligned boxes whose per-axis intervals may be
// unbounded on either side.
#pragma once

#include <array>
#include <cstdint>
#include <iosfwd>
#include <limits>
#include <string>
#include <vector>

namespace privleak {

struct Record {
    std::int64_t id = 0;
    std::array<std::int64_t, 3> pos{0, 0, 0};  // axes beyond the dimension stay 0
    double speed = 0.0;
    std::int64_t t = 0;
};

// Closed integer interval; the sentinels make [lo, hi] behave as (-inf, hi],
// [lo, +inf) or (-inf, +inf) without a separate flag.
struct Interval {
    static constexpr std::int64_t kNegInf = std::numeric_limits<std::int64_t>::min();
    static constexpr std::int64_t kPosInf = std::numeric_limits<std::int64_t>::max();

    std::int64_t lo = kNegInf;
    std::int64_t hi = kPosInf;

    static Interval all() { return {}; }
    static Interval at_least(std::int64_t lo) { return {lo, kPosInf}; }
    static Interval at_most(std::int64_t hi) { return {kNegInf, hi}; }
    static Interval closed(std::int64_t lo, std::int64_t hi) { return {lo, hi}; }
    static Interval point(std::int64_t v) { return {v, v}; }

    bool contains(std::int64_t x) const { return lo <= x && x <= hi; }
    bool empty() const { return lo > hi; }

    Interval intersect(const Interval& o) const {
        return {lo > o.lo ? lo : o.lo, hi < o.hi ? hi : o.hi};
    }
    bool operator==(const Interval& o) const = default;
};

struct Range {
    int dimension = 1;
    std::array<Interval, 3> axes{Interval::all(), Interval::all(), Interval::all()};

    static Range all(int dimension);

    bool contains(const std::array<std::int64_t, 3>& p) const;
    Range with_axis(int axis, Interval iv) const;       // replaces one axis
    Range clipped(int axis, Interval iv) const;         // intersects one axis
    std::string to_string() const;
    bool operator==(const Range& o) const = default;
};

class Dataset {
  public:
    Dataset() = default;
    // Validates: dimension in 1..3, every record inside it, no duplicate
    // (position, t) pair and no duplicate speed within a timestamp.
    Dataset(int dimension, std::vector<Record> records);

    int dimension() const { return dimension_; }
    const std::vector<Record>& records() const { return records_; }
    std::vector<std::int64_t> timestamps() const;
    int count_at(std::int64_t t) const;
    bool empty() const { return records_.empty(); }

  private:
    int dimension_ = 1;
    std::vector<Record> records_;
};

// Generation parameters.  When `positions`/`speeds` are non-empty they are
// used verbatim (fixture path); otherwise positions are drawn uniformly
// without repetition from [coord_lo, coord_hi]^dimension and speeds uniformly
// from [speed_lo, speed_hi] with global distinctness enforced.
struct DatasetSpec {
    int dimension = 1;
    int n = 1;
    std::int64_t coord_lo = 0;
    std::int64_t coord_hi = 0;
    double speed_lo = 0.0;
    double speed_hi = 0.0;
    std::uint64_t seed = 0;
    std::int64_t timestamp = 0;
    std::vector<std::array<std::int64_t, 3>> positions;
    std::vector<double> speeds;
};

Dataset build_dataset(const DatasetSpec& spec);

int count_in_range(const Dataset& ds, const Range& r, std::int64_t t);

// A priori attacker knowledge of the monitored area: every coordinate of
// every record lies in [lo, hi] on each axis.
struct SpanBounds {
    std::int64_t lo = 0;
    std::int64_t hi = 0;
};

// The five sections induced by one axis-aligned cut: top/bot include the cut
// hyperplane, the hats exclude it, mid is the hyperplane itself.
struct PartitionRanges {
    Range top, bot, mid, top_hat, bot_hat;
};

PartitionRanges make_partition(const Range& base, int axis, std::int64_t cut);
PartitionRanges partition_around(const Dataset& ds, int axis, std::int64_t cut);

// CSV: header "id,x[,y[,z]],speed,t", one record per row.
void save_dataset_csv(const Dataset& ds, std::ostream& out);
void save_dataset_csv(const Dataset& ds, const std::string& path);
Dataset load_dataset_csv(std::istream& in);
Dataset load_dataset_csv(const std::string& path);

}  // namespace privleak
