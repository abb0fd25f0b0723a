#include "privleak/adversarial.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <ostream>
#include <random>
#include <stdexcept>

namespace privleak {

namespace {

// Lower median of speeds[first..last] (0-based, inclusive).
double lower_median(const std::vector<double>& speeds, int first, int last) {
    std::vector<double> v(speeds.begin() + first, speeds.begin() + last + 1);
    const std::size_t idx = (v.size() - 1) / 2;
    std::nth_element(v.begin(), v.begin() + idx, v.end());
    return v[idx];
}

void renormalize_to_ranks(std::vector<double>& speeds) {
    std::vector<double> sorted = speeds;
    std::sort(sorted.begin(), sorted.end());
    std::map<double, double> value_of;
    for (std::size_t r = 0; r < sorted.size(); ++r)
        value_of[sorted[r]] = 10.0 * static_cast<double>(r + 1);
    for (double& s : speeds) s = value_of[s];
}

void check_certified(const SpeedAssignment& a, const char* who) {
    if (!verify_hidden(a, a.hidden_index).hidden)
        throw std::logic_error(std::string(who) + " produced a non-hidden assignment");
}

}  // namespace

SpeedAssignment lemma1_assignment(int n, int k) {
    if (k < 4) throw std::invalid_argument("hiding requires k >= 4");
    if (n < k) throw std::invalid_argument("n must be at least k");

    // Base ordering s_2 > s_1 > s_3 > s_4.
    std::vector<double> s = {30.0, 40.0, 20.0, 10.0};
    while (static_cast<int>(s.size()) < n) {
        const double med = lower_median(s, 0, static_cast<int>(s.size()) - 1);
        if (med == s[0]) throw std::logic_error("prefix median stepped onto the hidden speed");
        if (med > s[0])
            s.push_back(*std::max_element(s.begin(), s.end()) + 10.0);
        else
            s.push_back(*std::min_element(s.begin(), s.end()) - 10.0);
    }

    renormalize_to_ranks(s);
    SpeedAssignment a{std::move(s), 1, k};
    check_certified(a, "lemma1_assignment");
    return a;
}

SpeedAssignment lemma2_assignment(int n, int k, std::uint64_t seed) {
    if (k < 4) throw std::invalid_argument("hiding requires k >= 4");
    if (n < 2 * k) throw std::invalid_argument("n must be at least 2k");

    // Base ordering s_8 > s_4 > s_3 > s_7 > s_6 > s_1 > s_2 > s_5, hiding s_3.
    std::vector<double> s = {30.0, 20.0, 60.0, 70.0, 10.0, 40.0, 50.0, 80.0};
    const int j = 3;
    const double hidden = s[j - 1];
    std::mt19937_64 rng(seed);

    while (static_cast<int>(s.size()) < n) {
        const int last = static_cast<int>(s.size()) - 1;
        double closest = 0.0;
        bool above = false;
        for (int i = 1; i <= j; ++i) {
            const double m = lower_median(s, i - 1, last);
            if (m == hidden || (i > 1 && (m > hidden) != above))
                throw std::logic_error("prefix medians straddle the hidden speed");
            if (i == 1 || std::fabs(m - hidden) < std::fabs(closest - hidden)) {
                closest = m;
                above = m > hidden;
            }
        }
        std::uniform_real_distribution<double> draw(std::min(closest, hidden),
                                                    std::max(closest, hidden));
        double v;
        do {
            v = draw(rng);
        } while (v == closest || v == hidden ||
                 std::find(s.begin(), s.end(), v) != s.end());
        s.push_back(v);
    }

    renormalize_to_ranks(s);
    SpeedAssignment a{std::move(s), j, k};
    check_certified(a, "lemma2_assignment");
    return a;
}

ResultTable enumerate_all_results(const SpeedAssignment& a) {
    const int n = static_cast<int>(a.speeds.size());
    if (a.k < 1 || a.k > n) throw std::invalid_argument("k must be in 1..n");

    ResultTable t;
    t.n = n;
    t.k = a.k;
    for (int lo = 1; lo <= n; ++lo) {
        for (int hi = lo + a.k - 1; hi <= n; ++hi) {
            ResultCell cell;
            cell.lo = lo;
            cell.hi = hi;
            std::vector<int> idx;
            for (int i = lo; i <= hi; ++i) idx.push_back(i);
            std::sort(idx.begin(), idx.end(),
                      [&](int x, int y) { return a.speeds[x - 1] < a.speeds[y - 1]; });
            cell.min_index = idx.front();
            cell.max_index = idx.back();
            cell.med_index = idx[(idx.size() - 1) / 2];
            t.cells.push_back(cell);
        }
    }
    return t;
}

HiddenessReport verify_hidden(const SpeedAssignment& a, int target) {
    if (target < 1 || target > static_cast<int>(a.speeds.size()))
        throw std::invalid_argument("target index out of range");

    HiddenessReport rep;
    rep.table = enumerate_all_results(a);
    for (const ResultCell& c : rep.table.cells) {
        if (c.min_index == target) rep.witnesses.push_back({c.lo, c.hi, QueryKind::Min});
        if (c.max_index == target) rep.witnesses.push_back({c.lo, c.hi, QueryKind::Max});
        if (c.med_index == target) rep.witnesses.push_back({c.lo, c.hi, QueryKind::Med});
    }
    rep.hidden = rep.witnesses.empty();
    return rep;
}

void write_result_table_csv(const ResultTable& t, std::ostream& out) {
    out << "range_start,range_end,kind,result_index\n";
    for (const ResultCell& c : t.cells) {
        out << c.lo << ',' << c.hi << ",MIN," << c.min_index << '\n';
        out << c.lo << ',' << c.hi << ",MAX," << c.max_index << '\n';
        out << c.lo << ',' << c.hi << ",MED," << c.med_index << '\n';
    }
}

}  // namespace privleak
