#include "privleak/order_attacks.hpp"

#include <algorithm>
#include <optional>
#include <set>
#include <stdexcept>

#include "privleak/errors.hpp"

namespace privleak {

namespace {

Range span_range(std::int64_t lo, std::int64_t hi) {
    Range r = Range::all(1);
    r.axes[0] = Interval::closed(lo, hi);
    return r;
}

struct Prober {
    const Engine& e;
    std::int64_t tau;

    QueryResult value(QueryKind kind, std::int64_t lo, std::int64_t hi) const {
        return e.aggregate_query(kind, span_range(lo, hi), tau);
    }
    bool answered(std::int64_t lo, std::int64_t hi) const {
        return value(QueryKind::Min, lo, hi).has_value();
    }

    // Smallest b in [b_lo, b_hi] with [a, b] answered.
    std::optional<std::int64_t> min_answered_hi(std::int64_t a, std::int64_t b_lo,
                                                std::int64_t b_hi) const {
        if (b_lo > b_hi || !answered(a, b_hi)) return std::nullopt;
        std::int64_t lo = b_lo, hi = b_hi;  // hi is answered
        while (lo < hi) {
            const std::int64_t mid = lo + (hi - lo) / 2;
            if (answered(a, mid))
                hi = mid;
            else
                lo = mid + 1;
        }
        return hi;
    }

    // Largest a in [a_lo, a_hi] with [a, b] answered.
    std::optional<std::int64_t> max_answered_lo(std::int64_t b, std::int64_t a_lo,
                                                std::int64_t a_hi) const {
        if (a_lo > a_hi || !answered(a_lo, b)) return std::nullopt;
        std::int64_t lo = a_lo, hi = a_hi;  // lo is answered
        while (lo < hi) {
            const std::int64_t mid = lo + (hi - lo + 1) / 2;
            if (answered(mid, b))
                lo = mid;
            else
                hi = mid - 1;
        }
        return lo;
    }
};

}  // namespace

ExtremumFinding attack_global_extremum(const Engine& e, ExtremumKind kind, std::int64_t tau,
                                       SpanBounds span) {
    const std::uint64_t q0 = e.queries_issued();
    const Prober p{e, tau};
    const QueryKind qk = (kind == ExtremumKind::Min) ? QueryKind::Min : QueryKind::Max;

    const QueryResult whole = p.value(qk, span.lo, span.hi);
    if (!whole) throw attack_error("whole-span query suppressed; span holds fewer than k records");
    const double best = *whole;

    ExtremumFinding f;
    f.speed = best;
    f.kind = kind;
    f.scope = ExtremumScope::Global;

    // Shrink from the left: find the largest c with [c, hi] still answering
    // the unchanged extremum, then look one step further.
    {
        std::int64_t lo = span.lo, hi = span.hi;  // predicate true at lo
        while (lo < hi) {
            const std::int64_t mid = lo + (hi - lo + 1) / 2;
            const QueryResult r = p.value(qk, mid, span.hi);
            if (r && *r == best)
                lo = mid;
            else
                hi = mid - 1;
        }
        const QueryResult beyond = p.value(qk, lo + 1, span.hi);
        if (beyond.has_value()) {  // extremum left the range exactly at lo
            f.coordinate = lo;
            f.queries_used = e.queries_issued() - q0;
            return f;
        }
    }

    // Left side ran out of answerable ranges first; mirror from the right.
    {
        std::int64_t lo = span.lo, hi = span.hi;  // predicate true at hi
        while (lo < hi) {
            const std::int64_t mid = lo + (hi - lo) / 2;
            const QueryResult r = p.value(qk, span.lo, mid);
            if (r && *r == best)
                hi = mid;
            else
                lo = mid + 1;
        }
        const QueryResult beyond = p.value(qk, span.lo, hi - 1);
        if (beyond.has_value()) {
            f.coordinate = hi;
            f.queries_used = e.queries_issued() - q0;
            return f;
        }
    }

    f.position_known = false;
    f.queries_used = e.queries_issued() - q0;
    return f;
}

KLocalScan attack_k_local_extremum(const Engine& e, std::int64_t tau, SpanBounds span) {
    const std::uint64_t q0 = e.queries_issued();
    const Prober p{e, tau};
    KLocalScan scan;

    // Walk the suppression boundary to enumerate every (k+1)-record window
    // (left, right): `left` is the window's first occupied coordinate and
    // `right` its last, found without ever seeing a count.
    const std::optional<std::int64_t> first_hi = p.min_answered_hi(span.lo, span.lo, span.hi);
    if (first_hi) {
        std::int64_t a = span.lo;
        std::int64_t b = *first_hi;  // k-th occupied coordinate
        while (true) {
            // smallest a' > a with [a', b] suppressed: a' - 1 is occupied
            std::int64_t lo = a + 1, hi = b + 1;  // [b + 1, b] is empty, so suppressed
            while (lo < hi) {
                const std::int64_t mid = lo + (hi - lo) / 2;
                if (p.answered(mid, b))
                    lo = mid + 1;
                else
                    hi = mid;
            }
            const std::int64_t left = hi - 1;
            const std::optional<std::int64_t> grown =
                p.min_answered_hi(left + 1, b + 1, span.hi);
            if (!grown) break;
            scan.windows.emplace_back(left, *grown);
            a = left + 1;
            b = *grown;
        }
    }

    std::set<std::pair<std::int64_t, int>> seen;
    auto emit = [&](std::int64_t coord, double speed, ExtremumKind kind) {
        if (!seen.insert({coord, kind == ExtremumKind::Min ? 0 : 1}).second) return;
        ExtremumFinding f;
        f.coordinate = coord;
        f.speed = speed;
        f.kind = kind;
        f.scope = ExtremumScope::KLocal;
        f.queries_used = e.queries_issued() - q0;
        scan.findings.push_back(f);
    };

    for (const auto& [left, right] : scan.windows) {
        for (ExtremumKind kind : {ExtremumKind::Min, ExtremumKind::Max}) {
            const QueryKind qk = (kind == ExtremumKind::Min) ? QueryKind::Min : QueryKind::Max;
            const QueryResult whole = p.value(qk, left, right);
            const QueryResult no_left = p.value(qk, left + 1, right);
            const QueryResult no_right = p.value(qk, left, right - 1);
            if (!whole || !no_left || !no_right)
                throw std::logic_error("window query unexpectedly suppressed");
            if (*whole != *no_left) emit(left, *whole, kind);
            if (*whole != *no_right) emit(right, *whole, kind);
        }
    }

    scan.queries_used = e.queries_issued() - q0;
    return scan;
}

namespace {

std::multiset<double> triple(const Prober& p, std::int64_t lo, std::int64_t hi) {
    const QueryResult mn = p.value(QueryKind::Min, lo, hi);
    const QueryResult md = p.value(QueryKind::Med, lo, hi);
    const QueryResult mx = p.value(QueryKind::Max, lo, hi);
    if (!mn || !md || !mx) throw std::logic_error("triple query unexpectedly suppressed");
    return {*mn, *md, *mx};
}

// The one value in `from` missing from `to`.
std::optional<double> missing_value(const std::multiset<double>& from,
                                    const std::multiset<double>& to) {
    for (double v : from)
        if (!to.count(v)) return v;
    return std::nullopt;
}

}  // namespace

ScanRecovery attack_full_scan_k3(const Engine& e, std::int64_t tau, SpanBounds span) {
    if (e.k() != 3) throw std::invalid_argument("attack_full_scan_k3 requires k = 3");
    const std::uint64_t q0 = e.queries_issued();
    const Prober p{e, tau};
    ScanRecovery out;

    std::set<std::int64_t> coords;
    std::set<double> all_values;

    // Forward: window [a, b] holds exactly three records; pin its leftmost
    // record by the suppression boundary, slide right, and attribute the
    // missing triple value to the pinned coordinate.
    {
        const std::optional<std::int64_t> b0 = p.min_answered_hi(span.lo, span.lo, span.hi);
        if (!b0) throw attack_error("span holds fewer than three records");
        std::int64_t a = span.lo, b = *b0;
        std::multiset<double> cur = triple(p, a, b);
        all_values.insert(cur.begin(), cur.end());
        while (true) {
            const std::optional<std::int64_t> left = p.max_answered_lo(b, a, b);
            if (!left) throw std::logic_error("window lost its own left boundary");
            coords.insert(*left);
            const std::optional<std::int64_t> grown =
                p.min_answered_hi(*left + 1, b + 1, span.hi);
            if (!grown) break;
            const std::multiset<double> next = triple(p, *left + 1, *grown);
            all_values.insert(next.begin(), next.end());
            if (const std::optional<double> gone = missing_value(cur, next))
                out.recovered[*left] = *gone;
            a = *left + 1;
            b = *grown;
            cur = next;
        }
    }

    // Backward mirror: pin the window's rightmost record, slide left.
    {
        const std::optional<std::int64_t> a0 = p.max_answered_lo(span.hi, span.lo, span.hi);
        if (!a0) throw attack_error("span holds fewer than three records");
        std::int64_t a = *a0, b = span.hi;
        std::multiset<double> cur = triple(p, a, b);
        while (true) {
            const std::optional<std::int64_t> right = p.min_answered_hi(a, a, b);
            if (!right) throw std::logic_error("window lost its own right boundary");
            coords.insert(*right);
            const std::optional<std::int64_t> shrunk =
                p.max_answered_lo(*right - 1, span.lo, a - 1);
            if (!shrunk) break;
            const std::multiset<double> next = triple(p, *shrunk, *right - 1);
            if (const std::optional<double> gone = missing_value(cur, next))
                out.recovered[*right] = *gone;
            a = *shrunk;
            b = *right - 1;
            cur = next;
        }
    }

    // Whatever is left follows by elimination when only one record is open.
    std::set<double> assigned;
    for (const auto& [c, v] : out.recovered) assigned.insert(v);
    std::vector<std::int64_t> open_coords;
    for (std::int64_t c : coords)
        if (!out.recovered.count(c)) open_coords.push_back(c);
    std::vector<double> open_values;
    for (double v : all_values)
        if (!assigned.count(v)) open_values.push_back(v);

    if (open_values.size() == 1 && open_coords.size() == 1) {
        out.recovered[open_coords.front()] = open_values.front();
        open_coords.clear();
        open_values.clear();
    }

    out.unresolved_coords = std::move(open_coords);
    out.unresolved_values = std::move(open_values);
    out.complete = out.unresolved_values.empty() &&
                   static_cast<std::size_t>(std::count_if(
                       e.ground_truth().records().begin(), e.ground_truth().records().end(),
                       [&](const Record& r) { return r.t == tau; })) == out.recovered.size();
    out.queries_used = e.queries_issued() - q0;
    return out;
}

}  // namespace privleak
