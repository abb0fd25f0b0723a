#include "privleak/avg_attacks.hpp"

#include <algorithm>
#include <cmath>
#include <cstdlib>
#include <set>

namespace privleak {

namespace {

constexpr double kAgreementTol = 1e-9;
constexpr double kSingularTol = 1e-9;

double rel_gap(double a, double b) {
    const double scale = std::max({1.0, std::fabs(a), std::fabs(b)});
    return std::fabs(a - b) / scale;
}

// Occupied coordinates along `axis` for records of `base` at time tau.
// Ground-truth helper: used by the knows-all-positions profile and by the
// degenerate-construction check, never by the query logic itself.
std::vector<std::int64_t> occupied_on_axis(const Engine& e, const Range& base, int axis,
                                           std::int64_t tau) {
    std::set<std::int64_t> coords;
    for (const Record& r : e.ground_truth().records())
        if (r.t == tau && base.contains(r.pos)) coords.insert(r.pos[axis]);
    return {coords.begin(), coords.end()};
}

LinearRecovery linear_sweep(const Engine& e, const Range& base, int axis, std::int64_t start,
                            std::int64_t tau, bool knows_positions) {
    const std::uint64_t q0 = e.queries_issued();

    std::vector<std::int64_t> occupied;
    if (knows_positions) occupied = occupied_on_axis(e, base, axis, tau);

    LinearRecovery rec;
    std::int64_t cursor = start;
    while (true) {
        const Range r = base.clipped(axis, Interval::at_least(cursor));
        const QueryResult res = e.aggregate_query(QueryKind::Avg, r, tau);
        if (!res) {
            if (rec.trace.empty())
                throw attack_error("first query suppressed: fewer than k records beyond the target");
            break;
        }
        rec.trace.emplace_back(cursor, *res);
        if (knows_positions) {
            auto it = std::upper_bound(occupied.begin(), occupied.end(), cursor);
            cursor = (it == occupied.end()) ? cursor + 1 : *it;
        } else {
            ++cursor;
        }
    }

    rec.terminal_range = base.clipped(axis, Interval::at_least(rec.trace.back().first));
    rec.terminal_avg = rec.trace.back().second;

    // The terminal range holds exactly k records; infer earlier counts
    // backwards, attributing one dropped record to every average change.
    double count = e.k();
    for (std::size_t i = rec.trace.size() - 1; i-- > 0;) {
        const double prev_avg = rec.trace[i].second;
        const double next_avg = rec.trace[i + 1].second;
        if (prev_avg != next_avg) {
            const double speed = (count + 1) * prev_avg - count * next_avg;
            rec.recovered[rec.trace[i].first] = speed;
            count += 1;
        }
    }

    // Simulator check: an unchanged average across a step that really dropped
    // a record poisons the inferred counts.
    if (!knows_positions) occupied = occupied_on_axis(e, base, axis, tau);
    for (std::size_t i = 0; i + 1 < rec.trace.size(); ++i) {
        if (rec.trace[i].second != rec.trace[i + 1].second) continue;
        const auto lo = std::lower_bound(occupied.begin(), occupied.end(), rec.trace[i].first);
        const auto hi = std::lower_bound(occupied.begin(), occupied.end(), rec.trace[i + 1].first);
        if (lo != hi) rec.ambiguous = true;
    }

    rec.queries_used = e.queries_issued() - q0;
    return rec;
}

}  // namespace

LinearRecovery attack_linear_avg(const Engine& e, std::int64_t x_target,
                                 const LinearAttackOptions& opt) {
    if (e.ground_truth().dimension() != 1)
        throw std::invalid_argument("attack_linear_avg expects a 1D dataset");
    return linear_sweep(e, Range::all(1), 0, x_target, opt.tau, opt.knows_positions);
}

PartitionStats solve_partition_closed(const PartitionInputs& in) {
    const double scale = std::max({1.0, std::fabs(in.s_top), std::fabs(in.s_bot),
                                   std::fabs(in.s_top_hat), std::fabs(in.s_bot_hat)});
    const double den_b = in.s_bot - in.s_top_hat;
    const double den_t = in.s_top - in.s_bot_hat;
    if (std::fabs(den_b) < kSingularTol * scale || std::fabs(den_t) < kSingularTol * scale)
        throw singular_system_error("section averages do not separate the partition");

    PartitionStats st;
    st.in = in;
    st.b = in.n * (in.s_n - in.s_top_hat) / den_b;
    st.t = in.n * (in.s_n - in.s_bot_hat) / den_t;
    st.m = st.t + st.b - in.n;
    if (std::fabs(st.m) < 0.5)
        throw empty_mid_error("no records on the cut line; its average is undefined");
    st.s_mid = (st.t * in.s_top + st.b * in.s_bot - in.n * in.s_n) / st.m;
    return st;
}

PartitionStats solve_partition_linear(const PartitionInputs& in) {
    // Unknowns v = (T, B, M, P) with P = M * s_mid:
    //   T*s_top + B*s_bot           - P = n*s_n     (whole section)
    //   T + B   - M                     = n         (cut line counted twice)
    //   T*(s_top - s_top_hat) + M*s_top_hat - P = 0 (top without the line)
    //   B*(s_bot - s_bot_hat) + M*s_bot_hat - P = 0 (bottom without the line)
    double a[4][5] = {
        {in.s_top, in.s_bot, 0.0, -1.0, in.n * in.s_n},
        {1.0, 1.0, -1.0, 0.0, static_cast<double>(in.n)},
        {in.s_top - in.s_top_hat, 0.0, in.s_top_hat, -1.0, 0.0},
        {0.0, in.s_bot - in.s_bot_hat, in.s_bot_hat, -1.0, 0.0},
    };

    double norm = 0.0;
    for (auto& row : a)
        for (int c = 0; c < 4; ++c) norm = std::max(norm, std::fabs(row[c]));
    const double pivot_tol = 1e-12 * std::max(1.0, norm);

    for (int col = 0; col < 4; ++col) {
        int pivot = col;
        for (int r = col + 1; r < 4; ++r)
            if (std::fabs(a[r][col]) > std::fabs(a[pivot][col])) pivot = r;
        if (std::fabs(a[pivot][col]) < pivot_tol)
            throw singular_system_error("partition system is singular");
        if (pivot != col) std::swap(a[pivot], a[col]);
        for (int r = 0; r < 4; ++r) {
            if (r == col) continue;
            const double f = a[r][col] / a[col][col];
            for (int c = col; c < 5; ++c) a[r][c] -= f * a[col][c];
        }
    }

    PartitionStats st;
    st.in = in;
    st.t = a[0][4] / a[0][0];
    st.b = a[1][4] / a[1][1];
    st.m = a[2][4] / a[2][2];
    const double p = a[3][4] / a[3][3];
    if (std::fabs(st.m) < 0.5)
        throw empty_mid_error("no records on the cut line; its average is undefined");
    st.s_mid = p / st.m;
    return st;
}

PartitionStats solve_partition_system(const PartitionInputs& in) {
    const PartitionStats closed = solve_partition_closed(in);
    const PartitionStats lin = solve_partition_linear(in);
    if (rel_gap(closed.t, lin.t) > kAgreementTol || rel_gap(closed.b, lin.b) > kAgreementTol ||
        rel_gap(closed.m, lin.m) > kAgreementTol ||
        rel_gap(closed.s_mid, lin.s_mid) > kAgreementTol)
        throw singular_system_error("closed-form and linear-system routes disagree");
    return closed;
}

std::vector<std::int64_t> balanced_cut_candidates(SpanBounds span) {
    if (span.hi < span.lo) throw std::invalid_argument("span.hi < span.lo");
    std::vector<std::int64_t> cuts;
    cuts.reserve(span.hi - span.lo + 1);
    for (std::int64_t c = span.lo; c <= span.hi; ++c) cuts.push_back(c);
    const std::int64_t twice_mid = span.lo + span.hi;
    std::stable_sort(cuts.begin(), cuts.end(), [&](std::int64_t x, std::int64_t y) {
        return std::llabs(2 * x - twice_mid) < std::llabs(2 * y - twice_mid);
    });
    return cuts;
}

namespace {

AttemptResult evaluate_cut_impl(const Engine& e, const Range& base, int axis, std::int64_t cut,
                                int n_section, std::int64_t tau, double s_n) {
    const PartitionRanges pr = make_partition(base, axis, cut);
    AttemptResult out;

    const QueryResult s_top = e.aggregate_query(QueryKind::Avg, pr.top, tau);
    const QueryResult s_bot = e.aggregate_query(QueryKind::Avg, pr.bot, tau);
    const QueryResult s_top_hat = e.aggregate_query(QueryKind::Avg, pr.top_hat, tau);
    const QueryResult s_bot_hat = e.aggregate_query(QueryKind::Avg, pr.bot_hat, tau);
    if (!s_top || !s_bot || !s_top_hat || !s_bot_hat) {
        out.decision = CutDecision::RetrySuppressed;
        return out;
    }

    PartitionInputs in;
    in.s_n = s_n;
    in.s_top = *s_top;
    in.s_bot = *s_bot;
    in.s_top_hat = *s_top_hat;
    in.s_bot_hat = *s_bot_hat;
    in.n = n_section;
    try {
        out.stats = solve_partition_system(in);
        out.has_stats = true;
    } catch (const empty_mid_error&) {
        out.decision = CutDecision::RetryEmptyMid;
        return out;
    } catch (const singular_system_error&) {
        out.decision = CutDecision::RetrySingular;
        return out;
    }

    const long long m = std::llround(out.stats.m);
    if (m <= 0) {
        out.decision = CutDecision::RetryEmptyMid;
    } else if (m < e.k()) {
        out.decision = CutDecision::Success2;
    } else if (m == e.k()) {
        out.decision = CutDecision::RetryGroupEqualsK;
    } else {
        out.decision = CutDecision::Success1;
    }
    return out;
}

// Returns the first axis that is neither pinched in `base` nor `cut_axis`;
// the follow-up sweep runs along it.
int line_axis_for(const Range& base, int cut_axis) {
    for (int a = 0; a < base.dimension; ++a) {
        if (a == cut_axis) continue;
        if (base.axes[a].lo == base.axes[a].hi) continue;
        return a;
    }
    throw std::logic_error("no free axis left for the follow-up sweep");
}

AttackOutcome section_attack(const Engine& e, const Range& base, int cut_axis,
                             const SectionAttackOptions& opt) {
    const std::uint64_t q0 = e.queries_issued();
    AttackOutcome out;

    const QueryResult s_n = e.aggregate_query(QueryKind::Avg, base, opt.tau);
    if (!s_n) {
        out.queries_used = e.queries_issued() - q0;
        return out;  // the section itself is suppressed
    }

    const std::vector<std::int64_t> cuts =
        opt.cuts.empty() ? balanced_cut_candidates(opt.span) : opt.cuts;

    for (std::int64_t cut : cuts) {
        AttemptResult ar = evaluate_cut_impl(e, base, cut_axis, cut, opt.n, opt.tau, *s_n);

        if (ar.decision == CutDecision::Success2) {
            out.attempts.push_back({cut_axis, cut, ar.decision});
            out.status = AttackStatus::Attack2Success;
            out.stats = ar.stats;
            out.has_stats = true;
            out.group_avg = ar.stats.s_mid;
            out.group_count = static_cast<int>(std::llround(ar.stats.m));
            out.queries_used = e.queries_issued() - q0;
            return out;
        }

        if (ar.decision == CutDecision::Success1) {
            const Range mid = make_partition(base, cut_axis, cut).mid;
            const int m_rounded = static_cast<int>(std::llround(ar.stats.m));

            // Count free axes of the mid section: 1 -> linear sweep, 2 -> recurse.
            int free_axes = 0;
            for (int a = 0; a < mid.dimension; ++a)
                if (mid.axes[a].lo != mid.axes[a].hi) ++free_axes;

            if (free_axes >= 2) {
                SectionAttackOptions nested = opt;
                nested.n = m_rounded;
                nested.cuts.clear();
                AttackOutcome sub = section_attack(e, mid, cut_axis - 1, nested);
                if (sub.status == AttackStatus::Attack1Success ||
                    sub.status == AttackStatus::Attack2Success) {
                    out.attempts.push_back({cut_axis, cut, CutDecision::Success1});
                    sub.attempts.insert(sub.attempts.begin(), out.attempts.begin(),
                                        out.attempts.end());
                    out.attempts = std::move(sub.attempts);
                    out.status = sub.status;
                    out.victim_pos = sub.victim_pos;
                    out.victim_speed = sub.victim_speed;
                    out.has_line = sub.has_line;
                    out.line = std::move(sub.line);
                    out.group_avg = sub.group_avg;
                    out.group_count = sub.group_count;
                    out.has_stats = sub.has_stats;
                    out.stats = sub.has_stats ? sub.stats : ar.stats;
                    out.queries_used = e.queries_issued() - q0;
                    return out;
                }
                out.attempts.push_back({cut_axis, cut, CutDecision::RetryDegenerate});
                continue;
            }

            const int sweep_axis = line_axis_for(mid, cut_axis);
            LinearRecovery line;
            try {
                line = linear_sweep(e, mid, sweep_axis, opt.span.lo, opt.tau,
                                    opt.knows_positions);
            } catch (const attack_error&) {
                out.attempts.push_back({cut_axis, cut, CutDecision::RetryDegenerate});
                continue;
            }
            if (line.recovered.empty()) {
                out.attempts.push_back({cut_axis, cut, CutDecision::RetryDegenerate});
                continue;
            }

            out.attempts.push_back({cut_axis, cut, CutDecision::Success1});
            out.status = AttackStatus::Attack1Success;
            const auto first = line.recovered.begin();
            for (int a = 0; a < mid.dimension; ++a)
                if (mid.axes[a].lo == mid.axes[a].hi) out.victim_pos[a] = mid.axes[a].lo;
            out.victim_pos[sweep_axis] = first->first;
            out.victim_speed = first->second;
            out.has_line = true;
            out.line = std::move(line);
            out.stats = ar.stats;
            out.has_stats = true;
            out.queries_used = e.queries_issued() - q0;
            return out;
        }

        out.attempts.push_back({cut_axis, cut, ar.decision});
    }

    out.status = (!out.attempts.empty() &&
                  out.attempts.back().decision == CutDecision::RetryGroupEqualsK)
                     ? AttackStatus::Retry
                     : AttackStatus::Infeasible;
    out.queries_used = e.queries_issued() - q0;
    return out;
}

}  // namespace

AttemptResult evaluate_cut(const Engine& e, const Range& base, int axis, std::int64_t cut,
                           int n_section, std::int64_t tau) {
    const QueryResult s_n = e.aggregate_query(QueryKind::Avg, base, tau);
    if (!s_n) return {};
    return evaluate_cut_impl(e, base, axis, cut, n_section, tau, *s_n);
}

AttackOutcome attack_planar_avg(const Engine& e, const SectionAttackOptions& opt) {
    if (e.ground_truth().dimension() != 2)
        throw std::invalid_argument("attack_planar_avg expects a 2D dataset");
    return section_attack(e, Range::all(2), 1, opt);
}

AttackOutcome attack_cubic_avg(const Engine& e, const SectionAttackOptions& opt) {
    if (e.ground_truth().dimension() != 3)
        throw std::invalid_argument("attack_cubic_avg expects a 3D dataset");
    return section_attack(e, Range::all(3), 2, opt);
}

}  // namespace privleak
