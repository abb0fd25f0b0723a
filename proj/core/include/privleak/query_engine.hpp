// Query-set-size controlled aggregate interface: AVG, MIN, MAX and MED over
// a range are answered only when at least k records match; otherwise the
// result is suppressed and carries nothing else.  MED returns the lower of
// the two middle values for even-sized query sets.
#pragma once

#include <atomic>
#include <cstdint>
#include <optional>

#include "privleak/dataset.hpp"

namespace privleak {

enum class QueryKind { Avg, Min, Max, Med };

// Empty means suppressed.
using QueryResult = std::optional<double>;

class Engine {
  public:
    // k >= 1 and k <= n at every timestamp present.  The dataset must
    // outlive the engine.
    Engine(const Dataset& ds, int k);

    QueryResult aggregate_query(QueryKind kind, const Range& r, std::int64_t t) const;

    int k() const { return k_; }
    std::uint64_t queries_issued() const { return counter_.load(std::memory_order_relaxed); }

    // Simulator-side escape hatch: attacks must not consult this for their
    // query logic, only for flagging degenerate constructions and for the
    // knows-all-positions attacker profile.
    const Dataset& ground_truth() const { return *ds_; }

  private:
    const Dataset* ds_;
    int k_;
    mutable std::atomic<std::uint64_t> counter_{0};
};

const char* to_string(QueryKind kind);

}  // namespace privleak
