#include "scenario.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <filesystem>
#include <fstream>
#include <future>
#include <random>
#include <stdexcept>

#include "privleak/adversarial.hpp"
#include "privleak/avg_attacks.hpp"
#include "privleak/dataset.hpp"
#include "privleak/nends.hpp"
#include "privleak/nends_attack.hpp"
#include "privleak/order_attacks.hpp"
#include "privleak/query_engine.hpp"

namespace privleak::tools {

using nlohmann::json;

const char* const kModeList[11] = {
    "gen",         "attack-avg-1d", "attack-avg-2d", "attack-avg-3d",
    "attack-order", "lemma1",       "lemma2",        "table1",
    "nends",       "nends-attack",  "nends-bench",
};

json to_json(const ScenarioConfig& cfg) {
    return json{
        {"mode", cfg.mode},         {"input", cfg.input},
        {"output", cfg.output},     {"knowledge", cfg.knowledge},
        {"method", cfg.method},     {"k", cfg.k},
        {"nh_size", cfg.nh_size},   {"seed", cfg.seed},
        {"n", cfg.n},               {"dim", cfg.dim},
        {"target_x", cfg.target_x}, {"t", cfg.t},
        {"batch", cfg.batch},
    };
}

ScenarioConfig config_from_json(const json& j) {
    ScenarioConfig cfg;
    cfg.mode = j.value("mode", cfg.mode);
    cfg.input = j.value("input", cfg.input);
    cfg.output = j.value("output", cfg.output);
    cfg.knowledge = j.value("knowledge", cfg.knowledge);
    cfg.method = j.value("method", cfg.method);
    cfg.k = j.value("k", cfg.k);
    cfg.nh_size = j.value("nh_size", cfg.nh_size);
    cfg.seed = j.value("seed", cfg.seed);
    cfg.n = j.value("n", cfg.n);
    cfg.dim = j.value("dim", cfg.dim);
    cfg.target_x = j.value("target_x", cfg.target_x);
    cfg.t = j.value("t", cfg.t);
    cfg.batch = j.value("batch", cfg.batch);
    return cfg;
}

namespace {

Dataset load_input_dataset(const ScenarioConfig& cfg) {
    if (cfg.input.empty()) {
        throw std::runtime_error(cfg.mode + " requires --input with a dataset CSV");
    }
    return load_dataset_csv(cfg.input);
}

std::vector<double> load_input_column(const ScenarioConfig& cfg) {
    if (cfg.input.empty()) {
        throw std::runtime_error(cfg.mode + " requires --input with a column CSV");
    }
    return load_column_csv(cfg.input);
}

// A priori bounding interval covering every coordinate at the timestamp.
SpanBounds span_of(const Dataset& ds, std::int64_t t, int dim) {
    SpanBounds span{Interval::kPosInf, Interval::kNegInf};
    for (const Record& rec : ds.records()) {
        if (rec.t != t) continue;
        for (int axis = 0; axis < dim; ++axis) {
            span.lo = std::min(span.lo, rec.pos[axis]);
            span.hi = std::max(span.hi, rec.pos[axis]);
        }
    }
    if (span.lo > span.hi) {
        throw std::runtime_error("no records at timestamp " + std::to_string(t));
    }
    return span;
}

const char* status_name(AttackStatus s) {
    switch (s) {
        case AttackStatus::Attack1Success: return "attack1-success";
        case AttackStatus::Attack2Success: return "attack2-success";
        case AttackStatus::Retry: return "retry";
        case AttackStatus::Infeasible: return "infeasible";
    }
    return "unknown";
}

const char* decision_name(CutDecision d) {
    switch (d) {
        case CutDecision::Success1: return "success1";
        case CutDecision::Success2: return "success2";
        case CutDecision::RetryGroupEqualsK: return "retry-group-equals-k";
        case CutDecision::RetrySuppressed: return "retry-suppressed";
        case CutDecision::RetrySingular: return "retry-singular";
        case CutDecision::RetryEmptyMid: return "retry-empty-mid";
        case CutDecision::RetryDegenerate: return "retry-degenerate";
    }
    return "unknown";
}

json recovery_json(const LinearRecovery& rec) {
    json recovered = json::array();
    for (const auto& [x, speed] : rec.recovered) {
        recovered.push_back(json{{"x", x}, {"speed", speed}});
    }
    json trace = json::array();
    for (const auto& [start, avg] : rec.trace) {
        trace.push_back(json{{"range_start", start}, {"avg", avg}});
    }
    return json{
        {"recovered", recovered},
        {"terminal_range", rec.terminal_range.to_string()},
        {"terminal_avg", rec.terminal_avg},
        {"queries_used", rec.queries_used},
        {"ambiguous", rec.ambiguous},
        {"trace", trace},
    };
}

json outcome_json(const AttackOutcome& o, int dim) {
    json result;
    result["status"] = status_name(o.status);
    result["queries_used"] = o.queries_used;
    json attempts = json::array();
    for (const CutAttempt& a : o.attempts) {
        attempts.push_back(
            json{{"axis", a.axis}, {"cut", a.cut}, {"decision", decision_name(a.decision)}});
    }
    result["attempts"] = attempts;
    if (o.has_stats) {
        result["cut_stats"] = json{{"top_count", o.stats.t},
                                   {"bottom_count", o.stats.b},
                                   {"line_count", o.stats.m},
                                   {"line_avg", o.stats.s_mid}};
    }
    if (o.status == AttackStatus::Attack1Success) {
        json pos = json::array();
        for (int axis = 0; axis < dim; ++axis) pos.push_back(o.victim_pos[axis]);
        result["victim"] = json{{"pos", pos}, {"speed", o.victim_speed}};
        if (o.has_line) result["sweep"] = recovery_json(o.line);
    }
    if (o.status == AttackStatus::Attack2Success) {
        result["group"] = json{{"avg", o.group_avg}, {"count", o.group_count}};
    }
    return result;
}

json finding_json(const ExtremumFinding& f) {
    return json{
        {"coordinate", f.coordinate},
        {"speed", f.speed},
        {"kind", f.kind == ExtremumKind::Min ? "min" : "max"},
        {"position_known", f.position_known},
        {"queries_used", f.queries_used},
    };
}

json assignment_json(const SpeedAssignment& a, const HiddenessReport& rep) {
    json witnesses = json::array();
    std::size_t shown = std::min<std::size_t>(rep.witnesses.size(), 20);
    for (std::size_t i = 0; i < shown; ++i) {
        const Witness& w = rep.witnesses[i];
        witnesses.push_back(json{{"lo", w.lo}, {"hi", w.hi}, {"kind", to_string(w.kind)}});
    }
    return json{
        {"n", static_cast<int>(a.speeds.size())},
        {"k", a.k},
        {"hidden_index", a.hidden_index},
        {"speeds", a.speeds},
        {"hidden", rep.hidden},
        {"witness_count", rep.witnesses.size()},
        {"witnesses", witnesses},
    };
}

const ResultCell& cell_at(const ResultTable& t, int lo, int hi) {
    for (const ResultCell& c : t.cells) {
        if (c.lo == lo && c.hi == hi) return c;
    }
    throw std::logic_error("result table is missing a range");
}

// Paper-style layout: one block per range size, rows F_min / F_max / F_med,
// one column per range of that size, entries are 1-based speed indices.
void write_table_layout_csv(const ResultTable& t, std::ostream& out) {
    for (int len = t.k; len <= t.n; ++len) {
        out << "# " << len << " vehicles\n";
        out << "range";
        for (int lo = 1; lo + len - 1 <= t.n; ++lo) {
            out << ",x" << lo << "-x" << lo + len - 1;
        }
        out << "\n";
        const char* row_names[3] = {"F_min", "F_max", "F_med"};
        for (int row = 0; row < 3; ++row) {
            out << row_names[row];
            for (int lo = 1; lo + len - 1 <= t.n; ++lo) {
                const ResultCell& c = cell_at(t, lo, lo + len - 1);
                int idx = row == 0 ? c.min_index : row == 1 ? c.max_index : c.med_index;
                out << ",s" << idx;
            }
            out << "\n";
        }
        if (len < t.n) out << "\n";
    }
}

json run_gen(const ScenarioConfig& cfg) {
    if (cfg.output.empty()) throw std::runtime_error("gen requires --output");
    DatasetSpec spec;
    spec.dimension = cfg.dim;
    spec.n = cfg.n;
    spec.coord_lo = 0;
    spec.coord_hi = std::max<std::int64_t>(100, 4LL * cfg.n);
    spec.speed_lo = 10.0;
    spec.speed_hi = 10.0 + 10.0 * cfg.n;
    spec.seed = cfg.seed;
    spec.timestamp = cfg.t;
    Dataset ds = build_dataset(spec);
    save_dataset_csv(ds, cfg.output);
    return json{{"records", static_cast<int>(ds.records().size())},
                {"dimension", ds.dimension()},
                {"coord_hi", spec.coord_hi},
                {"written", cfg.output}};
}

json run_attack_avg_1d(const ScenarioConfig& cfg) {
    Dataset ds = load_input_dataset(cfg);
    Engine engine(ds, cfg.k);
    LinearRecovery rec = attack_linear_avg(engine, cfg.target_x, {cfg.t, false});
    return recovery_json(rec);
}

json run_attack_avg_section(const ScenarioConfig& cfg, int dim) {
    Dataset ds = load_input_dataset(cfg);
    Engine engine(ds, cfg.k);
    SectionAttackOptions opt;
    opt.tau = cfg.t;
    opt.n = ds.count_at(cfg.t);
    opt.span = span_of(ds, cfg.t, dim);
    AttackOutcome outcome =
        dim == 2 ? attack_planar_avg(engine, opt) : attack_cubic_avg(engine, opt);
    return outcome_json(outcome, dim);
}

json run_attack_order(const ScenarioConfig& cfg) {
    Dataset ds = load_input_dataset(cfg);
    Engine engine(ds, cfg.k);
    SpanBounds span = span_of(ds, cfg.t, 1);
    json result;
    result["global_min"] =
        finding_json(attack_global_extremum(engine, ExtremumKind::Min, cfg.t, span));
    result["global_max"] =
        finding_json(attack_global_extremum(engine, ExtremumKind::Max, cfg.t, span));
    KLocalScan scan = attack_k_local_extremum(engine, cfg.t, span);
    json local = json::array();
    for (const ExtremumFinding& f : scan.findings) local.push_back(finding_json(f));
    result["k_local"] = json{{"findings", local},
                             {"windows", scan.windows.size()},
                             {"queries_used", scan.queries_used}};
    if (cfg.k == 3) {
        ScanRecovery rec = attack_full_scan_k3(engine, cfg.t, span);
        json recovered = json::array();
        for (const auto& [x, speed] : rec.recovered) {
            recovered.push_back(json{{"x", x}, {"speed", speed}});
        }
        result["full_scan"] = json{{"recovered", recovered},
                                   {"complete", rec.complete},
                                   {"unresolved_coords", rec.unresolved_coords},
                                   {"unresolved_values", rec.unresolved_values},
                                   {"queries_used", rec.queries_used}};
    }
    return result;
}

json run_lemma(const ScenarioConfig& cfg, int which) {
    SpeedAssignment a = which == 1 ? lemma1_assignment(cfg.n, cfg.k)
                                   : lemma2_assignment(cfg.n, cfg.k, cfg.seed);
    HiddenessReport rep = verify_hidden(a, a.hidden_index);
    if (!cfg.output.empty()) {
        std::ofstream out(cfg.output);
        if (!out) throw std::runtime_error("cannot open " + cfg.output + " for writing");
        write_result_table_csv(rep.table, out);
    }
    return assignment_json(a, rep);
}

json run_table1(const ScenarioConfig& cfg) {
    SpeedAssignment a = lemma2_assignment(cfg.n, cfg.k, cfg.seed);
    ResultTable table = enumerate_all_results(a);
    if (!cfg.output.empty()) {
        std::ofstream out(cfg.output);
        if (!out) throw std::runtime_error("cannot open " + cfg.output + " for writing");
        write_table_layout_csv(table, out);
    }
    json cells = json::array();
    for (const ResultCell& c : table.cells) {
        cells.push_back(json{{"lo", c.lo},
                             {"hi", c.hi},
                             {"min", c.min_index},
                             {"max", c.max_index},
                             {"med", c.med_index}});
    }
    return json{{"n", table.n}, {"k", table.k}, {"speeds", a.speeds}, {"cells", cells}};
}

CycleMethod parse_method(const std::string& method) {
    if (method == "tree") return CycleMethod::Tree;
    if (method == "zigzag") return CycleMethod::Zigzag;
    throw std::runtime_error("--method must be tree or zigzag");
}

json run_nends(const ScenarioConfig& cfg) {
    std::vector<double> column = load_input_column(cfg);
    ObfuscatedColumn obf = apply_nends(column, cfg.nh_size, parse_method(cfg.method));
    if (!cfg.output.empty()) save_column_csv(obf.values, cfg.output);
    json nhs = json::array();
    for (std::size_t i = 0; i < obf.neighborhoods.size(); ++i) {
        const Neighborhood& nh = obf.neighborhoods[i];
        json rows = json::array();
        json values = json::array();
        for (const NeighborMember& member : nh.members) {
            rows.push_back(member.row + 1);
            values.push_back(member.value);
        }
        nhs.push_back(json{{"index", nh.index + 1},
                           {"rows", rows},
                           {"values", values},
                           {"order", obf.cycles[i].order},
                           {"bottleneck", obf.cycles[i].bottleneck}});
    }
    return json{{"n", static_cast<int>(column.size())},
                {"nh_size", cfg.nh_size},
                {"method", cfg.method},
                {"ops", obf.ops},
                {"neighborhoods", nhs},
                {"values", obf.values}};
}

json run_nends_attack(const ScenarioConfig& cfg) {
    std::vector<double> published = load_input_column(cfg);
    if (cfg.knowledge.empty()) {
        throw std::runtime_error("nends-attack requires --knowledge with a knowledge CSV");
    }
    PartialKnowledge knowledge = load_knowledge_csv(cfg.knowledge);
    RecoveredMapping rec = recover_column(published, cfg.nh_size, knowledge);
    if (!cfg.output.empty()) save_column_csv(rec.original, cfg.output);
    json nhs = json::array();
    for (const NeighborhoodResolution& res : rec.neighborhoods) {
        nhs.push_back(json{{"index", res.index + 1},
                           {"resolved", res.resolved},
                           {"case", to_string(res.used)}});
    }
    json original = json::array();
    for (double v : rec.original) {
        if (std::isnan(v)) {
            original.push_back(nullptr);
        } else {
            original.push_back(v);
        }
    }
    return json{{"success", rec.success}, {"neighborhoods", nhs}, {"original", original}};
}

json run_nends_bench(const ScenarioConfig& cfg, json& timing) {
    if (cfg.n < cfg.nh_size || cfg.n % cfg.nh_size != 0) {
        throw std::runtime_error("nends-bench needs --n a positive multiple of --nh-size");
    }
    std::mt19937_64 rng(cfg.seed);
    std::uniform_real_distribution<double> dist(0.0, 1000.0);
    std::vector<double> column(cfg.n);
    for (double& v : column) v = dist(rng);

    using clock = std::chrono::steady_clock;
    auto t0 = clock::now();
    ObfuscatedColumn tree = apply_nends(column, cfg.nh_size, CycleMethod::Tree);
    auto t1 = clock::now();
    ObfuscatedColumn zigzag = apply_nends(column, cfg.nh_size, CycleMethod::Zigzag);
    auto t2 = clock::now();
    timing["tree_ms"] = std::chrono::duration<double, std::milli>(t1 - t0).count();
    timing["zigzag_ms"] = std::chrono::duration<double, std::milli>(t2 - t1).count();

    bool same = tree.values == zigzag.values;
    return json{{"n", cfg.n},
                {"nh_size", cfg.nh_size},
                {"tree_ops", tree.ops},
                {"zigzag_ops", zigzag.ops},
                {"ops_ratio", zigzag.ops == 0 ? 0.0
                                              : static_cast<double>(tree.ops) /
                                                    static_cast<double>(zigzag.ops)},
                {"identical_output", same}};
}

}  // namespace

json run_scenario(const ScenarioConfig& cfg) {
    using clock = std::chrono::steady_clock;
    json report;
    report["mode"] = cfg.mode;
    report["config"] = to_json(cfg);
    json timing;
    auto start = clock::now();

    json result;
    if (cfg.mode == "gen") {
        result = run_gen(cfg);
    } else if (cfg.mode == "attack-avg-1d") {
        result = run_attack_avg_1d(cfg);
    } else if (cfg.mode == "attack-avg-2d") {
        result = run_attack_avg_section(cfg, 2);
    } else if (cfg.mode == "attack-avg-3d") {
        result = run_attack_avg_section(cfg, 3);
    } else if (cfg.mode == "attack-order") {
        result = run_attack_order(cfg);
    } else if (cfg.mode == "lemma1") {
        result = run_lemma(cfg, 1);
    } else if (cfg.mode == "lemma2") {
        result = run_lemma(cfg, 2);
    } else if (cfg.mode == "table1") {
        result = run_table1(cfg);
    } else if (cfg.mode == "nends") {
        result = run_nends(cfg);
    } else if (cfg.mode == "nends-attack") {
        result = run_nends_attack(cfg);
    } else if (cfg.mode == "nends-bench") {
        result = run_nends_bench(cfg, timing);
    } else {
        std::string modes;
        for (const char* m : kModeList) {
            if (!modes.empty()) modes += ", ";
            modes += m;
        }
        throw std::runtime_error("unknown mode '" + cfg.mode + "'; expected one of: " + modes);
    }

    timing["elapsed_ms"] =
        std::chrono::duration<double, std::milli>(clock::now() - start).count();
    report["result"] = result;
    report["timing"] = timing;
    return report;
}

namespace {

std::string suffixed_path(const std::string& path, int index) {
    if (path.empty()) return path;
    std::filesystem::path p(path);
    std::filesystem::path out = p.parent_path();
    out /= p.stem().string() + "-" + std::to_string(index) + p.extension().string();
    return out.string();
}

}  // namespace

std::string failure_reason(const json& report) {
    if (report.is_array()) {
        for (const json& single : report) {
            std::string reason = failure_reason(single);
            if (!reason.empty()) return reason;
        }
        return {};
    }
    const std::string mode = report.value("mode", "");
    const json& result = report.at("result");
    if (mode == "attack-avg-2d" || mode == "attack-avg-3d") {
        const std::string status = result.value("status", "");
        if (status != "attack1-success" && status != "attack2-success") {
            return "attack ended with status " + status;
        }
    } else if (mode == "nends-attack") {
        if (!result.value("success", false)) return "column only partially recovered";
    } else if (mode == "lemma1" || mode == "lemma2") {
        if (!result.value("hidden", false)) return "assignment failed the hiding check";
    } else if (mode == "nends-bench") {
        if (!result.value("identical_output", true)) return "tree and zigzag outputs differ";
    }
    return {};
}

json run_batch(const ScenarioConfig& cfg) {
    if (cfg.batch <= 1) return run_scenario(cfg);
    std::vector<std::future<json>> futures;
    futures.reserve(cfg.batch);
    for (int i = 0; i < cfg.batch; ++i) {
        ScenarioConfig run = cfg;
        run.batch = 1;
        run.seed = cfg.seed + static_cast<std::uint64_t>(i);
        run.output = suffixed_path(cfg.output, i);
        futures.push_back(
            std::async(std::launch::async, [run] { return run_scenario(run); }));
    }
    json reports = json::array();
    for (auto& f : futures) reports.push_back(f.get());
    return reports;
}

}  // namespace privleak::tools
