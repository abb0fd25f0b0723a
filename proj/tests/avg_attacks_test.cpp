#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <cmath>

#include "privleak/avg_attacks.hpp"
#include "test_util.hpp"

using namespace privleak;

namespace {

Dataset grid_2d(const std::vector<std::vector<double>>& rows_by_y) {
    DatasetSpec spec;
    spec.dimension = 2;
    spec.n = 0;
    for (std::size_t y = 0; y < rows_by_y.size(); ++y) {
        for (std::size_t x = 0; x < rows_by_y[y].size(); ++x) {
            spec.positions.push_back(
                {static_cast<std::int64_t>(x), static_cast<std::int64_t>(y), 0});
            spec.speeds.push_back(rows_by_y[y][x]);
            ++spec.n;
        }
    }
    return build_dataset(spec);
}

}  // namespace

TEST_CASE("linear attack on the six-record fixture") {
    // Speeds 10..60 at x = 0..5, k = 3, target x = 0.  Hand-derived:
    // averages 35, 40, 45, 50 answered, then [4, inf) is suppressed, and
    // differencing recovers 10, 20, 30.
    Dataset ds = test::six_record_fixture();
    Engine e(ds, 3);
    LinearRecovery rec = attack_linear_avg(e, 0);

    REQUIRE(rec.trace.size() == 4);
    CHECK(rec.trace[0].second == doctest::Approx(35.0).epsilon(1e-12));
    CHECK(rec.trace[1].second == doctest::Approx(40.0).epsilon(1e-12));
    CHECK(rec.trace[2].second == doctest::Approx(45.0).epsilon(1e-12));
    CHECK(rec.trace[3].second == doctest::Approx(50.0).epsilon(1e-12));
    CHECK(rec.queries_used == 5);

    REQUIRE(rec.recovered.size() == 3);
    CHECK(rec.recovered.at(0) == doctest::Approx(10.0).epsilon(1e-12));
    CHECK(rec.recovered.at(1) == doctest::Approx(20.0).epsilon(1e-12));
    CHECK(rec.recovered.at(2) == doctest::Approx(30.0).epsilon(1e-12));

    CHECK(rec.terminal_range.axes[0] == Interval::at_least(3));
    CHECK(rec.terminal_avg == doctest::Approx(50.0).epsilon(1e-12));
    CHECK_FALSE(rec.ambiguous);

    SUBCASE("knowing all positions changes queries, not results") {
        Engine e2(ds, 3);
        LinearRecovery rec2 = attack_linear_avg(e2, 0, {0, true});
        CHECK(rec2.recovered == rec.recovered);
        CHECK(rec2.queries_used == 5);
    }
}

TEST_CASE("linear attack recovers a single target mid-line") {
    // Target x = 2 leaves one differencing step before the terminal range.
    Dataset ds = test::six_record_fixture();
    Engine e(ds, 3);
    LinearRecovery rec = attack_linear_avg(e, 2);
    REQUIRE(rec.recovered.size() == 1);
    CHECK(rec.recovered.at(2) == doctest::Approx(30.0).epsilon(1e-12));
}

TEST_CASE("linear attack refuses targets with fewer than k beyond them") {
    Dataset ds = test::six_record_fixture();
    Engine e(ds, 3);
    CHECK_THROWS_AS(attack_linear_avg(e, 4), attack_error);
}

TEST_CASE("unchanged average across a real record flags ambiguity") {
    // k = 2; dropping the record at x = 0 (speed 20) keeps the average at 20.
    DatasetSpec spec;
    spec.dimension = 1;
    spec.n = 3;
    spec.positions = {{0, 0, 0}, {1, 0, 0}, {2, 0, 0}};
    spec.speeds = {20.0, 10.0, 30.0};
    Dataset ds = build_dataset(spec);
    Engine e(ds, 2);
    LinearRecovery rec = attack_linear_avg(e, 0);
    CHECK(rec.ambiguous);
    CHECK_FALSE(rec.recovered.count(0));
}

TEST_CASE("random 1D datasets are recovered exactly") {
    for (std::uint64_t seed = 0; seed < 20; ++seed) {
        Dataset ds = test::random_1d(40, seed);
        auto line = test::sorted_line(ds);
        Engine e(ds, 5);
        LinearRecovery rec = attack_linear_avg(e, line.front().first);
        REQUIRE(rec.recovered.size() == line.size() - 5);
        CHECK_FALSE(rec.ambiguous);
        for (std::size_t i = 0; i + 5 < line.size(); ++i) {
            REQUIRE(rec.recovered.count(line[i].first));
            CHECK(rec.recovered.at(line[i].first) ==
                  doctest::Approx(line[i].second).epsilon(1e-9));
        }
    }
}

TEST_CASE("partition closed form on the hand instance") {
    // n = 8, S_n = 45, S_top = 30, S_bot = 60, S_top_hat = 20, S_bot_hat = 70
    // describe top-hat {10,20,30}, line {40,50}, bottom-hat {60,70,80}.
    PartitionInputs in{45.0, 30.0, 60.0, 20.0, 70.0, 8};
    for (PartitionStats st :
         {solve_partition_closed(in), solve_partition_linear(in), solve_partition_system(in)}) {
        CHECK(st.t == doctest::Approx(5.0).epsilon(1e-12));
        CHECK(st.b == doctest::Approx(5.0).epsilon(1e-12));
        CHECK(st.m == doctest::Approx(2.0).epsilon(1e-12));
        CHECK(st.s_mid == doctest::Approx(45.0).epsilon(1e-12));
    }
}

TEST_CASE("partition solver failure modes") {
    SUBCASE("identical section averages are singular") {
        PartitionInputs in{45.0, 50.0, 50.0, 50.0, 50.0, 8};
        CHECK_THROWS_AS(solve_partition_closed(in), singular_system_error);
        CHECK_THROWS_AS(solve_partition_linear(in), singular_system_error);
    }
    SUBCASE("empty cut line is reported as such") {
        // top {10}+{}, bottom {20}+{}: T = 2, B = 2, M = 0.
        PartitionInputs in{15.0, 10.0, 20.0, 10.0, 20.0, 4};
        CHECK_THROWS_AS(solve_partition_closed(in), empty_mid_error);
        CHECK_THROWS_AS(solve_partition_linear(in), empty_mid_error);
    }
}

TEST_CASE("partition stats recovered through live queries") {
    // y = 2 row {10,20,30}, y = 1 line {40,50}, y = 0 row {60,70,80}.
    // k = 3 keeps the three-record hat sections answerable.
    Dataset ds = grid_2d({{60.0, 70.0, 80.0}, {40.0, 50.0}, {10.0, 20.0, 30.0}});
    Engine e(ds, 3);
    AttemptResult ar = evaluate_cut(e, Range::all(2), 1, 1, 8, 0);
    REQUIRE(ar.has_stats);
    CHECK(ar.decision == CutDecision::Success2);
    CHECK(ar.stats.t == doctest::Approx(5.0).epsilon(1e-9));
    CHECK(ar.stats.b == doctest::Approx(5.0).epsilon(1e-9));
    CHECK(ar.stats.m == doctest::Approx(2.0).epsilon(1e-9));
    CHECK(ar.stats.s_mid == doctest::Approx(45.0).epsilon(1e-9));
}

TEST_CASE("balanced cut candidates sweep outward from the middle") {
    CHECK(balanced_cut_candidates({0, 4}) ==
          std::vector<std::int64_t>{2, 1, 3, 0, 4});
    CHECK(balanced_cut_candidates({0, 3}) ==
          std::vector<std::int64_t>{1, 2, 0, 3});
    CHECK(balanced_cut_candidates({5, 5}) == std::vector<std::int64_t>{5});
    CHECK_THROWS_AS(balanced_cut_candidates({3, 1}), std::invalid_argument);
}

TEST_CASE("planar attack leaks a small cut-line group") {
    Dataset ds = grid_2d({{60.0, 70.0, 80.0}, {40.0, 50.0}, {10.0, 20.0, 30.0}});
    Engine e(ds, 3);
    SectionAttackOptions opt;
    opt.n = 8;
    opt.span = test::data_span(ds);
    AttackOutcome out = attack_planar_avg(e, opt);
    CHECK(out.status == AttackStatus::Attack2Success);
    REQUIRE(out.attempts.size() == 1);
    CHECK(out.attempts[0].cut == 1);
    CHECK(out.attempts[0].decision == CutDecision::Success2);
    CHECK(out.group_count == 2);
    CHECK(out.group_avg == doctest::Approx(45.0).epsilon(1e-9));
}

TEST_CASE("planar attack retries a cut line of exactly k records") {
    // Rows: y=0 holds 4, y=1 holds exactly k=4 (forced retry), y=2 holds 2,
    // y=3 holds 4.  First candidate cut y=1 must be retried; y=2 leaks.
    Dataset ds = grid_2d({{10.0, 20.0, 30.0, 40.0},
                          {50.0, 60.0, 70.0, 80.0},
                          {90.0, 100.0},
                          {110.0, 120.0, 130.0, 140.0}});
    Engine e(ds, 4);
    SectionAttackOptions opt;
    opt.n = 14;
    opt.span = test::data_span(ds);
    AttackOutcome out = attack_planar_avg(e, opt);
    CHECK(out.status == AttackStatus::Attack2Success);
    REQUIRE(out.attempts.size() == 2);
    CHECK(out.attempts[0].cut == 1);
    CHECK(out.attempts[0].decision == CutDecision::RetryGroupEqualsK);
    CHECK(out.attempts[1].cut == 2);
    CHECK(out.attempts[1].decision == CutDecision::Success2);
    CHECK(out.group_count == 2);
    CHECK(out.group_avg == doctest::Approx(95.0).epsilon(1e-9));
}

TEST_CASE("planar attack sweeps a crowded cut line and names a victim") {
    // Line y=1 holds 6 > k records; rows y=0 and y=2 keep the hats answerable.
    Dataset ds = grid_2d({{10.0, 20.0, 30.0, 40.0},
                          {51.0, 52.0, 53.0, 54.0, 55.0, 56.0},
                          {90.0, 100.0, 110.0, 120.0}});
    Engine e(ds, 4);
    SectionAttackOptions opt;
    opt.n = 14;
    opt.span = test::data_span(ds);
    AttackOutcome out = attack_planar_avg(e, opt);
    REQUIRE(out.status == AttackStatus::Attack1Success);
    CHECK(out.victim_pos[0] == 0);
    CHECK(out.victim_pos[1] == 1);
    CHECK(out.victim_speed == doctest::Approx(51.0).epsilon(1e-9));
    REQUIRE(out.has_line);
    CHECK(out.line.recovered.size() == 2);  // 6 on the line, terminal k = 4
    CHECK(out.line.recovered.at(1) == doctest::Approx(52.0).epsilon(1e-9));
    bool saw_success1 = false;
    for (const CutAttempt& a : out.attempts)
        saw_success1 |= a.decision == CutDecision::Success1;
    CHECK(saw_success1);
}

TEST_CASE("cubic attack recurses into a crowded plane") {
    DatasetSpec spec;
    spec.dimension = 3;
    spec.n = 0;
    auto put = [&](std::int64_t x, std::int64_t y, std::int64_t z, double s) {
        spec.positions.push_back({x, y, z});
        spec.speeds.push_back(s);
        ++spec.n;
    };
    // Plane z=1: rows y=0 (4 records), y=1 (2 records), y=2 (4 records).
    double s = 10.0;
    for (std::int64_t x = 0; x < 4; ++x) put(x, 0, 1, s += 1.0);
    for (std::int64_t x = 0; x < 2; ++x) put(x, 1, 1, s += 1.0);
    for (std::int64_t x = 0; x < 4; ++x) put(x, 2, 1, s += 1.0);
    // Planes z=0 and z=3 keep the outer hats answerable.
    for (std::int64_t x = 0; x < 4; ++x) put(x, 0, 0, s += 1.0);
    for (std::int64_t x = 0; x < 4; ++x) put(x, 0, 3, s += 1.0);
    Dataset ds = build_dataset(spec);

    Engine e(ds, 4);
    SectionAttackOptions opt;
    opt.n = 18;
    opt.span = test::data_span(ds);
    AttackOutcome out = attack_cubic_avg(e, opt);
    REQUIRE(out.status == AttackStatus::Attack2Success);
    CHECK(out.group_count == 2);
    // The leaked group is the pair at (y=1, z=1): speeds 15 and 16.
    CHECK(out.group_avg == doctest::Approx(15.5).epsilon(1e-9));
    bool outer_success1 = false;
    for (const CutAttempt& a : out.attempts)
        outer_success1 |= a.axis == 2 && a.decision == CutDecision::Success1;
    CHECK(outer_success1);
}

TEST_CASE("section attacks demand the right dimension") {
    Dataset ds1 = test::six_record_fixture();
    Engine e1(ds1, 3);
    CHECK_THROWS_AS(attack_planar_avg(e1, {}), std::invalid_argument);
    CHECK_THROWS_AS(attack_cubic_avg(e1, {}), std::invalid_argument);
}
