#include "privleak/nends_attack.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <limits>
#include <set>
#include <sstream>
#include <stdexcept>

namespace privleak {

std::vector<Neighborhood> reconstruct_neighborhoods(const std::vector<double>& published,
                                                    int nh_size) {
    return partition_neighborhoods(published, nh_size);
}

namespace {

// Fails when the derived assignment leaves a value on its own row.
void check_deranged(const Neighborhood& nh, const std::map<int, double>& origin) {
    for (const NeighborMember& member : nh.members) {
        auto it = origin.find(member.row);
        if (it != origin.end() && it->second == member.value) {
            throw inconsistency_error(
                "published column keeps a value on its original row");
        }
    }
}

int published_row_of(const Neighborhood& nh, double value) {
    for (const NeighborMember& member : nh.members) {
        if (member.value == value) return member.row;
    }
    throw inconsistency_error("value is not a member of the neighborhood");
}

}  // namespace

NeighborhoodResolution resolve_nh3(const Neighborhood& nh,
                                   const std::map<double, int>& known) {
    if (nh.members.size() != 3) {
        throw std::invalid_argument("resolve_nh3 needs a size-3 neighborhood");
    }
    if (known.size() != 1) {
        throw std::invalid_argument("resolve_nh3 needs exactly one known origin");
    }
    double v = known.begin()->first;
    int origin_row = known.begin()->second;
    int current_row = published_row_of(nh, v);
    if (origin_row == current_row) {
        throw inconsistency_error("published column keeps a value on its original row");
    }
    // Of the two derangements of three rows, only one moves v from origin_row
    // to current_row: origin_row -> current_row -> third -> origin_row.
    int third = -1;
    for (const NeighborMember& member : nh.members) {
        if (member.row != origin_row && member.row != current_row) third = member.row;
    }
    if (third < 0) throw inconsistency_error("known origin row is outside the neighborhood");

    NeighborhoodResolution res;
    res.index = nh.index;
    res.used = ResolutionCase::NH3;
    // Row r originally held the value now published on the row r maps to.
    auto published_at = [&](int row) {
        for (const NeighborMember& member : nh.members) {
            if (member.row == row) return member.value;
        }
        throw inconsistency_error("row is outside the neighborhood");
    };
    res.origin[origin_row] = v;
    res.origin[current_row] = published_at(third);
    res.origin[third] = published_at(origin_row);
    check_deranged(nh, res.origin);
    res.resolved = true;
    return res;
}

NeighborhoodResolution resolve_general(const Neighborhood& nh,
                                       const std::map<double, int>& known) {
    int m = static_cast<int>(nh.members.size());
    if (known.size() + 2 != static_cast<std::size_t>(m)) {
        throw std::invalid_argument("resolve_general needs exactly two unknown origins");
    }

    std::set<int> rows;
    for (const NeighborMember& member : nh.members) rows.insert(member.row);
    for (const auto& [value, row] : known) {
        if (!rows.count(row)) {
            throw inconsistency_error("known origin row is outside the neighborhood");
        }
    }

    std::vector<double> unknown_values;
    std::set<int> unknown_rows = rows;
    for (const NeighborMember& member : nh.members) {
        if (!known.count(member.value)) unknown_values.push_back(member.value);
    }
    for (const auto& [value, row] : known) unknown_rows.erase(row);
    if (unknown_values.size() != 2 || unknown_rows.size() != 2) {
        throw inconsistency_error("knowledge does not leave exactly two open rows");
    }

    int slot_a = *unknown_rows.begin();
    int slot_b = *std::next(unknown_rows.begin());
    double u0 = unknown_values[0];
    double u1 = unknown_values[1];
    int cur0 = published_row_of(nh, u0);
    int cur1 = published_row_of(nh, u1);
    bool u0_in_open = cur0 == slot_a || cur0 == slot_b;
    bool u1_in_open = cur1 == slot_a || cur1 == slot_b;

    NeighborhoodResolution res;
    res.index = nh.index;
    for (const auto& [value, row] : known) res.origin[row] = value;

    if (u0_in_open && u1_in_open) {
        // Any assignment would fix a value in place or swap the pair.
        throw inconsistency_error(
            "both unknown values sit on the open rows; substitution cycles forbid this");
    }
    if (u0_in_open || u1_in_open) {
        res.used = ResolutionCase::Case1;
        double inside = u0_in_open ? u0 : u1;
        double outside = u0_in_open ? u1 : u0;
        int inside_cur = u0_in_open ? cur0 : cur1;
        int other_slot = inside_cur == slot_a ? slot_b : slot_a;
        res.origin[other_slot] = inside;       // cannot stay on its own row
        res.origin[inside_cur] = outside;
        check_deranged(nh, res.origin);
        res.resolved = true;
        return res;
    }

    // Case 2: both open rows currently hold known values.  The published value
    // on a row is the cycle predecessor of the row's original value, so
    // following known origins backwards from slot_a visits ever-earlier
    // predecessors of X[slot_a] and must reach the other unknown original,
    // X[slot_b], before looping.
    res.used = ResolutionCase::Case2;
    auto published_at = [&](int row) {
        for (const NeighborMember& member : nh.members) {
            if (member.row == row) return member.value;
        }
        throw inconsistency_error("walk left the neighborhood");
    };
    std::set<int> visited{slot_a};
    double cursor = published_at(slot_a);
    double found = std::numeric_limits<double>::quiet_NaN();
    for (int step = 0; step < m; ++step) {
        auto it = known.find(cursor);
        if (it == known.end()) {
            found = cursor;  // first unknown value on the backward path
            break;
        }
        int next_row = it->second;
        if (visited.count(next_row)) {
            throw inconsistency_error("backward walk loops without closing the cycle");
        }
        visited.insert(next_row);
        cursor = published_at(next_row);
    }
    if (std::isnan(found)) {
        throw inconsistency_error("backward walk exhausted the neighborhood");
    }
    res.origin[slot_b] = found;
    res.origin[slot_a] = found == u0 ? u1 : u0;
    check_deranged(nh, res.origin);
    res.resolved = true;
    return res;
}

RecoveredMapping recover_column(const std::vector<double>& published, int nh_size,
                                const PartialKnowledge& knowledge) {
    std::vector<Neighborhood> nhs = reconstruct_neighborhoods(published, nh_size);

    std::map<int, std::map<double, int>> known_by_nh;
    for (const KnownOrigin& item : knowledge) {
        if (item.neighborhood < 0 || item.neighborhood >= static_cast<int>(nhs.size())) {
            throw std::invalid_argument("knowledge references neighborhood " +
                                        std::to_string(item.neighborhood + 1) +
                                        " which does not exist");
        }
        const Neighborhood& nh = nhs[item.neighborhood];
        bool member = std::any_of(nh.members.begin(), nh.members.end(),
                                  [&](const NeighborMember& mem) {
                                      return mem.value == item.value;
                                  });
        if (!member) {
            throw std::invalid_argument("knowledge value is not in neighborhood " +
                                        std::to_string(item.neighborhood + 1));
        }
        auto [it, inserted] =
            known_by_nh[item.neighborhood].emplace(item.value, item.row);
        if (!inserted && it->second != item.row) {
            throw std::invalid_argument("conflicting origins for one value");
        }
    }

    RecoveredMapping out;
    out.original.assign(published.size(), std::numeric_limits<double>::quiet_NaN());
    out.success = true;
    for (const Neighborhood& nh : nhs) {
        const std::map<double, int>& known = known_by_nh[nh.index];
        std::size_t unknowns = nh.members.size() - known.size();
        NeighborhoodResolution res;
        if (unknowns > 2) {
            res.index = nh.index;
            res.resolved = false;
            out.success = false;
        } else if (unknowns < 2) {
            // Over-specified: at most one open row, filled by elimination.
            res.index = nh.index;
            res.used = ResolutionCase::Direct;
            for (const auto& [value, row] : known) res.origin[row] = value;
            if (unknowns == 1) {
                std::set<int> open_rows;
                for (const NeighborMember& member : nh.members) open_rows.insert(member.row);
                for (const auto& [value, row] : known) open_rows.erase(row);
                double open_value = 0.0;
                for (const NeighborMember& member : nh.members) {
                    if (!known.count(member.value)) open_value = member.value;
                }
                res.origin[*open_rows.begin()] = open_value;
            }
            check_deranged(nh, res.origin);
            res.resolved = true;
        } else if (nh.members.size() == 3) {
            res = resolve_nh3(nh, known);
        } else {
            res = resolve_general(nh, known);
        }
        if (res.resolved) {
            for (const auto& [row, value] : res.origin) out.original[row] = value;
        }
        out.neighborhoods.push_back(std::move(res));
    }
    return out;
}

void save_knowledge_csv(const PartialKnowledge& knowledge, std::ostream& out) {
    out << "neighborhood,row,value\n";
    out.precision(17);
    for (const KnownOrigin& item : knowledge) {
        out << item.neighborhood + 1 << "," << item.row + 1 << "," << item.value << "\n";
    }
}

void save_knowledge_csv(const PartialKnowledge& knowledge, const std::string& path) {
    std::ofstream out(path);
    if (!out) throw std::runtime_error("cannot open " + path + " for writing");
    save_knowledge_csv(knowledge, out);
}

PartialKnowledge load_knowledge_csv(std::istream& in) {
    std::string line;
    if (!std::getline(in, line) || line != "neighborhood,row,value") {
        throw std::runtime_error(
            "knowledge CSV must start with a 'neighborhood,row,value' header");
    }
    PartialKnowledge knowledge;
    std::size_t line_no = 1;
    while (std::getline(in, line)) {
        ++line_no;
        if (line.empty()) continue;
        std::istringstream fields(line);
        std::string nh_text, row_text, value_text;
        if (!std::getline(fields, nh_text, ',') || !std::getline(fields, row_text, ',') ||
            !std::getline(fields, value_text)) {
            throw std::runtime_error("knowledge CSV line " + std::to_string(line_no) +
                                     ": expected 3 fields");
        }
        try {
            KnownOrigin item;
            item.neighborhood = std::stoi(nh_text) - 1;
            item.row = std::stoi(row_text) - 1;
            item.value = std::stod(value_text);
            if (item.neighborhood < 0 || item.row < 0) {
                throw std::runtime_error("indices are 1-based");
            }
            knowledge.push_back(item);
        } catch (const std::exception& e) {
            throw std::runtime_error("knowledge CSV line " + std::to_string(line_no) +
                                     ": " + e.what());
        }
    }
    return knowledge;
}

PartialKnowledge load_knowledge_csv(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw std::runtime_error("cannot open " + path);
    return load_knowledge_csv(in);
}

const char* to_string(ResolutionCase c) {
    switch (c) {
        case ResolutionCase::Direct: return "DIRECT";
        case ResolutionCase::NH3: return "NH3";
        case ResolutionCase::Case1: return "CASE1";
        case ResolutionCase::Case2: return "CASE2";
    }
    return "UNKNOWN";
}

}  // namespace privleak
