#include "privleak/nends.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <limits>
#include <numeric>
#include <sstream>
#include <stdexcept>
#include <string>

namespace privleak {

std::vector<Neighborhood> partition_neighborhoods(const std::vector<double>& column,
                                                  int nh_size) {
    if (nh_size < 3) {
        throw std::invalid_argument("neighborhood size must be at least 3");
    }
    if (column.empty() || column.size() % static_cast<std::size_t>(nh_size) != 0) {
        throw std::invalid_argument(
            "column size must be a positive multiple of the neighborhood size");
    }
    std::vector<NeighborMember> sorted(column.size());
    for (std::size_t i = 0; i < column.size(); ++i) {
        sorted[i] = NeighborMember{static_cast<int>(i), column[i]};
    }
    std::stable_sort(sorted.begin(), sorted.end(),
                     [](const NeighborMember& a, const NeighborMember& b) {
                         return a.value < b.value;
                     });

    std::vector<Neighborhood> out;
    out.reserve(column.size() / static_cast<std::size_t>(nh_size));
    for (std::size_t base = 0; base < sorted.size(); base += nh_size) {
        Neighborhood nh;
        nh.index = static_cast<int>(base / nh_size);
        nh.members.assign(sorted.begin() + base, sorted.begin() + base + nh_size);
        out.push_back(std::move(nh));
    }
    return out;
}

namespace {

// Predecessor array of a cycle: pred[p] is the sorted position whose value
// moves into p's row.
std::vector<int> predecessors(const std::vector<int>& order) {
    std::vector<int> pred(order.size());
    for (std::size_t i = 0; i < order.size(); ++i) {
        int from = order[i];
        int to = order[(i + 1) % order.size()];
        pred[to] = from;
    }
    return pred;
}

std::vector<double> edge_lengths_desc(const std::vector<int>& order,
                                      const std::vector<double>& values) {
    std::vector<double> lens(order.size());
    for (std::size_t i = 0; i < order.size(); ++i) {
        int a = order[i];
        int b = order[(i + 1) % order.size()];
        lens[i] = std::abs(values[a] - values[b]);
    }
    std::sort(lens.begin(), lens.end(), std::greater<double>());
    return lens;
}

struct CycleKey {
    double bottleneck = 0.0;
    std::vector<double> lens_desc;
    std::vector<int> pred;

    bool operator<(const CycleKey& o) const {
        if (bottleneck != o.bottleneck) return bottleneck < o.bottleneck;
        if (lens_desc != o.lens_desc) return lens_desc < o.lens_desc;
        return pred < o.pred;
    }
};

struct TreeSearch {
    const std::vector<double>& values;
    int m;
    std::uint64_t ops = 0;
    bool found = false;
    CycleKey best_key;
    std::vector<int> best_order;

    std::vector<int> path;
    std::vector<bool> used;

    explicit TreeSearch(const std::vector<double>& v)
        : values(v), m(static_cast<int>(v.size())), used(v.size(), false) {
        path.reserve(v.size());
    }

    void run() {
        path.push_back(0);
        used[0] = true;
        extend(0.0);
    }

    void extend(double max_so_far) {
        ++ops;
        // Equal bottlenecks must survive so the tie-break can compare them.
        if (found && max_so_far > best_key.bottleneck) return;
        if (static_cast<int>(path.size()) == m) {
            double closing = std::abs(values[path.back()] - values[0]);
            if (closing == 0.0) return;
            double bneck = std::max(max_so_far, closing);
            if (found && bneck > best_key.bottleneck) return;
            CycleKey key{bneck, edge_lengths_desc(path, values), predecessors(path)};
            if (!found || key < best_key) {
                found = true;
                best_key = std::move(key);
                best_order = path;
            }
            return;
        }
        for (int next = 1; next < m; ++next) {
            if (used[next]) continue;
            double step = std::abs(values[path.back()] - values[next]);
            if (step == 0.0) continue;
            used[next] = true;
            path.push_back(next);
            extend(std::max(max_so_far, step));
            path.pop_back();
            used[next] = false;
        }
    }
};

std::vector<double> member_values(const Neighborhood& nh) {
    std::vector<double> v(nh.members.size());
    for (std::size_t i = 0; i < v.size(); ++i) v[i] = nh.members[i].value;
    return v;
}

}  // namespace

SubstitutionCycle optimal_cycle_tree(const Neighborhood& nh) {
    if (nh.members.size() < 3) {
        throw std::invalid_argument("a substitution cycle needs at least 3 members");
    }
    std::vector<double> values = member_values(nh);
    TreeSearch search(values);
    search.run();
    if (!search.found) {
        throw infeasible_cycle_error(
            "no substitution cycle avoids equal-valued rows in this neighborhood");
    }
    return SubstitutionCycle{search.best_order, search.best_key.bottleneck, search.ops};
}

SubstitutionCycle optimal_cycle_zigzag(const Neighborhood& nh) {
    int m = static_cast<int>(nh.members.size());
    if (m < 3) {
        throw std::invalid_argument("a substitution cycle needs at least 3 members");
    }
    std::vector<int> order;
    order.reserve(m);
    for (int p = 0; p < m; p += 2) order.push_back(p);
    int top_odd = (m % 2 == 0) ? m - 1 : m - 2;
    for (int p = top_odd; p >= 1; p -= 2) order.push_back(p);

    std::vector<double> values = member_values(nh);
    SubstitutionCycle cycle;
    cycle.order = std::move(order);
    for (int i = 0; i < m; ++i) {
        int a = cycle.order[i];
        int b = cycle.order[(i + 1) % m];
        double step = std::abs(values[a] - values[b]);
        if (step == 0.0) {
            throw infeasible_cycle_error(
                "zigzag cycle crosses equal-valued rows in this neighborhood");
        }
        cycle.bottleneck = std::max(cycle.bottleneck, step);
        ++cycle.ops;
    }
    return cycle;
}

ObfuscatedColumn apply_nends(const std::vector<double>& column, int nh_size,
                             CycleMethod method) {
    ObfuscatedColumn out;
    out.values = column;
    out.neighborhoods = partition_neighborhoods(column, nh_size);
    out.cycles.reserve(out.neighborhoods.size());
    for (const Neighborhood& nh : out.neighborhoods) {
        SubstitutionCycle cycle = method == CycleMethod::Tree
                                      ? optimal_cycle_tree(nh)
                                      : optimal_cycle_zigzag(nh);
        out.ops += cycle.ops;
        for (std::size_t i = 0; i < cycle.order.size(); ++i) {
            const NeighborMember& from = nh.members[cycle.order[i]];
            const NeighborMember& to =
                nh.members[cycle.order[(i + 1) % cycle.order.size()]];
            out.values[to.row] = from.value;
        }
        out.cycles.push_back(std::move(cycle));
    }
    return out;
}

void save_column_csv(const std::vector<double>& column, std::ostream& out) {
    out << "value\n";
    out.precision(17);
    for (double v : column) out << v << "\n";
}

void save_column_csv(const std::vector<double>& column, const std::string& path) {
    std::ofstream out(path);
    if (!out) throw std::runtime_error("cannot open " + path + " for writing");
    save_column_csv(column, out);
}

std::vector<double> load_column_csv(std::istream& in) {
    std::string line;
    if (!std::getline(in, line) || line != "value") {
        throw std::runtime_error("column CSV must start with a 'value' header");
    }
    std::vector<double> column;
    std::size_t line_no = 1;
    while (std::getline(in, line)) {
        ++line_no;
        if (line.empty()) continue;
        std::size_t used = 0;
        double v = 0.0;
        try {
            v = std::stod(line, &used);
        } catch (const std::exception&) {
            throw std::runtime_error("column CSV line " + std::to_string(line_no) +
                                     ": not a number: " + line);
        }
        if (used != line.size()) {
            throw std::runtime_error("column CSV line " + std::to_string(line_no) +
                                     ": trailing characters: " + line);
        }
        column.push_back(v);
    }
    return column;
}

std::vector<double> load_column_csv(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw std::runtime_error("cannot open " + path);
    return load_column_csv(in);
}

}  // namespace privleak
