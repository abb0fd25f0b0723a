#include "privleak/query_engine.hpp"

#include <algorithm>
#include <stdexcept>
#include <vector>

namespace privleak {

Engine::Engine(const Dataset& ds, int k) : ds_(&ds), k_(k) {
    if (k < 1) throw std::invalid_argument("k must be at least 1");
    for (std::int64_t t : ds.timestamps())
        if (k > ds.count_at(t))
            throw std::invalid_argument("k exceeds the record count at a timestamp");
}

QueryResult Engine::aggregate_query(QueryKind kind, const Range& r, std::int64_t t) const {
    counter_.fetch_add(1, std::memory_order_relaxed);
    if (r.dimension != ds_->dimension())
        throw std::invalid_argument("query range dimension does not match dataset");

    std::vector<double> speeds;
    for (const Record& rec : ds_->records())
        if (rec.t == t && r.contains(rec.pos)) speeds.push_back(rec.speed);

    if (static_cast<int>(speeds.size()) < k_) return std::nullopt;

    switch (kind) {
        case QueryKind::Avg: {
            double sum = 0.0;
            for (double s : speeds) sum += s;
            return sum / static_cast<double>(speeds.size());
        }
        case QueryKind::Min:
            return *std::min_element(speeds.begin(), speeds.end());
        case QueryKind::Max:
            return *std::max_element(speeds.begin(), speeds.end());
        case QueryKind::Med: {
            // lower median: index (m-1)/2 of the sorted values
            const std::size_t idx = (speeds.size() - 1) / 2;
            std::nth_element(speeds.begin(), speeds.begin() + idx, speeds.end());
            return speeds[idx];
        }
    }
    throw std::logic_error("unreachable query kind");
}

const char* to_string(QueryKind kind) {
    switch (kind) {
        case QueryKind::Avg: return "AVG";
        case QueryKind::Min: return "MIN";
        case QueryKind::Max: return "MAX";
        case QueryKind::Med: return "MED";
    }
    return "?";
}

}  // namespace privleak
