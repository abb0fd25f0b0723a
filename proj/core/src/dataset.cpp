#include "privleak/dataset.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <map>
#include <random>
#include <set>
#include <sstream>
#include <stdexcept>
#include <unordered_set>

namespace privleak {

namespace {

void check_dimension(int d) {
    if (d < 1 || d > 3) throw std::invalid_argument("dimension must be 1, 2 or 3");
}

std::string axis_bound(std::int64_t v) {
    if (v == Interval::kNegInf) return "-inf";
    if (v == Interval::kPosInf) return "+inf";
    return std::to_string(v);
}

}  // namespace

Range Range::all(int dimension) {
    check_dimension(dimension);
    Range r;
    r.dimension = dimension;
    return r;
}

bool Range::contains(const std::array<std::int64_t, 3>& p) const {
    for (int a = 0; a < dimension; ++a)
        if (!axes[a].contains(p[a])) return false;
    return true;
}

Range Range::with_axis(int axis, Interval iv) const {
    if (axis < 0 || axis >= dimension) throw std::invalid_argument("axis out of range");
    Range r = *this;
    r.axes[axis] = iv;
    return r;
}

Range Range::clipped(int axis, Interval iv) const {
    if (axis < 0 || axis >= dimension) throw std::invalid_argument("axis out of range");
    Range r = *this;
    r.axes[axis] = r.axes[axis].intersect(iv);
    return r;
}

std::string Range::to_string() const {
    std::ostringstream os;
    for (int a = 0; a < dimension; ++a) {
        if (a) os << " x ";
        os << '[' << axis_bound(axes[a].lo) << ", " << axis_bound(axes[a].hi) << ']';
    }
    return os.str();
}

Dataset::Dataset(int dimension, std::vector<Record> records)
    : dimension_(dimension), records_(std::move(records)) {
    check_dimension(dimension_);
    std::map<std::int64_t, std::set<std::array<std::int64_t, 3>>> seen_pos;
    std::map<std::int64_t, std::set<double>> seen_speed;
    for (const Record& r : records_) {
        for (int a = dimension_; a < 3; ++a)
            if (r.pos[a] != 0)
                throw std::invalid_argument("record uses an axis beyond the dataset dimension");
        if (!seen_pos[r.t].insert(r.pos).second)
            throw std::invalid_argument("two records share a position at one timestamp");
        if (!seen_speed[r.t].insert(r.speed).second)
            throw std::invalid_argument("two records share a speed at one timestamp");
    }
}

std::vector<std::int64_t> Dataset::timestamps() const {
    std::set<std::int64_t> ts;
    for (const Record& r : records_) ts.insert(r.t);
    return {ts.begin(), ts.end()};
}

int Dataset::count_at(std::int64_t t) const {
    int c = 0;
    for (const Record& r : records_)
        if (r.t == t) ++c;
    return c;
}

Dataset build_dataset(const DatasetSpec& spec) {
    check_dimension(spec.dimension);
    if (spec.n < 1) throw std::invalid_argument("n must be positive");

    std::vector<std::array<std::int64_t, 3>> positions = spec.positions;
    std::vector<double> speeds = spec.speeds;
    if (!positions.empty() && static_cast<int>(positions.size()) != spec.n)
        throw std::invalid_argument("explicit positions must have n entries");
    if (!speeds.empty() && static_cast<int>(speeds.size()) != spec.n)
        throw std::invalid_argument("explicit speeds must have n entries");

    std::mt19937_64 rng(spec.seed);

    if (positions.empty()) {
        if (spec.coord_hi < spec.coord_lo)
            throw std::invalid_argument("coord_hi < coord_lo");
        const unsigned __int128 side =
            static_cast<unsigned __int128>(spec.coord_hi - spec.coord_lo) + 1;
        unsigned __int128 capacity = 1;
        for (int a = 0; a < spec.dimension; ++a) {
            capacity *= side;
            if (capacity > (static_cast<unsigned __int128>(1) << 62)) {
                capacity = static_cast<unsigned __int128>(1) << 62;
                break;
            }
        }
        if (static_cast<unsigned __int128>(spec.n) > capacity)
            throw std::invalid_argument("coordinate box too small for n distinct positions");

        std::uniform_int_distribution<std::int64_t> coord(spec.coord_lo, spec.coord_hi);
        std::set<std::array<std::int64_t, 3>> used;
        while (static_cast<int>(positions.size()) < spec.n) {
            std::array<std::int64_t, 3> p{0, 0, 0};
            for (int a = 0; a < spec.dimension; ++a) p[a] = coord(rng);
            if (used.insert(p).second) positions.push_back(p);
        }
    }

    if (speeds.empty()) {
        if (spec.speed_hi < spec.speed_lo)
            throw std::invalid_argument("speed_hi < speed_lo");
        if (spec.speed_hi == spec.speed_lo) {
            if (spec.n != 1)
                throw std::invalid_argument("constant speed admits only n=1 (speeds must be distinct)");
            speeds.push_back(spec.speed_lo);
        } else {
            std::uniform_real_distribution<double> dist(spec.speed_lo, spec.speed_hi);
            std::unordered_set<double> used;
            while (static_cast<int>(speeds.size()) < spec.n) {
                double s = dist(rng);
                if (used.insert(s).second) speeds.push_back(s);
            }
        }
    }

    std::vector<Record> records(spec.n);
    for (int i = 0; i < spec.n; ++i) {
        records[i].id = i;
        records[i].pos = positions[i];
        records[i].speed = speeds[i];
        records[i].t = spec.timestamp;
    }
    return Dataset(spec.dimension, std::move(records));
}

int count_in_range(const Dataset& ds, const Range& r, std::int64_t t) {
    if (r.dimension != ds.dimension())
        throw std::invalid_argument("range dimension does not match dataset");
    int c = 0;
    for (const Record& rec : ds.records())
        if (rec.t == t && r.contains(rec.pos)) ++c;
    return c;
}

PartitionRanges make_partition(const Range& base, int axis, std::int64_t cut) {
    if (axis < 0 || axis >= base.dimension) throw std::invalid_argument("axis out of range");
    if (cut == Interval::kNegInf || cut == Interval::kPosInf)
        throw std::invalid_argument("cut coordinate must be finite");
    PartitionRanges p;
    p.top = base.clipped(axis, Interval::at_least(cut));
    p.bot = base.clipped(axis, Interval::at_most(cut));
    p.mid = base.clipped(axis, Interval::point(cut));
    p.top_hat = base.clipped(axis, Interval::at_least(cut + 1));
    p.bot_hat = base.clipped(axis, Interval::at_most(cut - 1));
    return p;
}

PartitionRanges partition_around(const Dataset& ds, int axis, std::int64_t cut) {
    if (ds.dimension() < 2)
        throw std::invalid_argument("partition_around needs a 2D or 3D dataset");
    return make_partition(Range::all(ds.dimension()), axis, cut);
}

namespace {

std::vector<std::string> split_csv_line(const std::string& line) {
    std::vector<std::string> out;
    std::string cur;
    for (char c : line) {
        if (c == ',') {
            out.push_back(cur);
            cur.clear();
        } else if (c != '\r') {
            cur += c;
        }
    }
    out.push_back(cur);
    return out;
}

}  // namespace

void save_dataset_csv(const Dataset& ds, std::ostream& out) {
    static const char* kAxisNames[3] = {"x", "y", "z"};
    out << "id";
    for (int a = 0; a < ds.dimension(); ++a) out << ',' << kAxisNames[a];
    out << ",speed,t\n";
    out.precision(17);
    for (const Record& r : ds.records()) {
        out << r.id;
        for (int a = 0; a < ds.dimension(); ++a) out << ',' << r.pos[a];
        out << ',' << r.speed << ',' << r.t << '\n';
    }
}

void save_dataset_csv(const Dataset& ds, const std::string& path) {
    std::ofstream f(path);
    if (!f) throw std::runtime_error("cannot open " + path + " for writing");
    save_dataset_csv(ds, f);
}

Dataset load_dataset_csv(std::istream& in) {
    std::string line;
    if (!std::getline(in, line)) throw std::runtime_error("dataset CSV is empty");
    const std::vector<std::string> header = split_csv_line(line);

    int dimension = 0;
    if (header.size() == 4 && header[1] == "x")
        dimension = 1;
    else if (header.size() == 5 && header[1] == "x" && header[2] == "y")
        dimension = 2;
    else if (header.size() == 6 && header[1] == "x" && header[2] == "y" && header[3] == "z")
        dimension = 3;
    if (dimension == 0 || header[0] != "id" || header[header.size() - 2] != "speed" ||
        header.back() != "t")
        throw std::runtime_error("dataset CSV header must be id,x[,y[,z]],speed,t");

    std::vector<Record> records;
    std::size_t line_no = 1;
    while (std::getline(in, line)) {
        ++line_no;
        if (line.empty() || line == "\r") continue;
        const std::vector<std::string> f = split_csv_line(line);
        if (f.size() != header.size())
            throw std::runtime_error("dataset CSV line " + std::to_string(line_no) +
                                     " has wrong field count");
        try {
            Record r;
            r.id = std::stoll(f[0]);
            for (int a = 0; a < dimension; ++a) r.pos[a] = std::stoll(f[1 + a]);
            r.speed = std::stod(f[1 + dimension]);
            r.t = std::stoll(f[2 + dimension]);
            records.push_back(r);
        } catch (const std::exception&) {
            throw std::runtime_error("dataset CSV line " + std::to_string(line_no) +
                                     " is malformed");
        }
    }
    try {
        return Dataset(dimension, std::move(records));
    } catch (const std::invalid_argument& e) {
        throw std::runtime_error(std::string("dataset CSV rejected: ") + e.what());
    }
}

Dataset load_dataset_csv(const std::string& path) {
    std::ifstream f(path);
    if (!f) throw std::runtime_error("cannot open " + path);
    return load_dataset_csv(f);
}

}  // namespace privleak
