#include "evostab/signal.hpp"

#include <algorithm>
#include <cstdio>
#include <istream>
#include <ostream>
#include <sstream>

namespace evostab {

namespace {

void require_same_layout(const SampledSignal& a, const SampledSignal& b) {
    if (a.nodes() != b.nodes() || a.dim() != b.dim() || a.t0() != b.t0() || a.dt() != b.dt())
        throw std::invalid_argument("signals live on different grids");
}

} // namespace

SampledSignal difference(const SampledSignal& a, const SampledSignal& b) {
    require_same_layout(a, b);
    SampledSignal out = a;
    auto& d = out.raw();
    const auto& rb = b.raw();
    for (std::size_t i = 0; i < d.size(); ++i) d[i] -= rb[i];
    return out;
}

SampledSignal sum(const SampledSignal& a, const SampledSignal& b) {
    require_same_layout(a, b);
    SampledSignal out = a;
    auto& d = out.raw();
    const auto& rb = b.raw();
    for (std::size_t i = 0; i < d.size(); ++i) d[i] += rb[i];
    return out;
}

SampledSignal scaled(const SampledSignal& a, double c) {
    SampledSignal out = a;
    for (auto& v : out.raw()) v *= c;
    return out;
}

double max_node_distance(const SampledSignal& a, const SampledSignal& b) {
    require_same_layout(a, b);
    double m = 0.0;
    for (std::size_t k = 0; k < a.nodes(); ++k) {
        double s = 0.0;
        auto na = a.node(k);
        auto nb = b.node(k);
        for (std::size_t c = 0; c < na.size(); ++c) {
            const double d = na[c] - nb[c];
            s += d * d;
        }
        m = std::max(m, std::sqrt(s));
    }
    return m;
}

void write_csv(std::ostream& out, const SampledSignal& s) {
    out << "t";
    for (std::size_t c = 0; c < s.dim(); ++c) out << ",v" << c;
    out << "\n";
    char buf[32];
    for (std::size_t k = 0; k < s.nodes(); ++k) {
        std::snprintf(buf, sizeof buf, "%.17g", s.time(k));
        out << buf;
        for (std::size_t c = 0; c < s.dim(); ++c) {
            std::snprintf(buf, sizeof buf, "%.17g", s.at(k, c));
            out << ',' << buf;
        }
        out << "\n";
    }
}

SampledSignal read_csv(std::istream& in) {
    std::string line;
    if (!std::getline(in, line)) throw std::invalid_argument("empty CSV");
    std::vector<double> times;
    std::vector<std::vector<double>> rows;
    while (std::getline(in, line)) {
        if (line.empty()) continue;
        std::istringstream row(line);
        std::string cell;
        std::vector<double> vals;
        bool first = true;
        while (std::getline(row, cell, ',')) {
            if (first) {
                times.push_back(std::stod(cell));
                first = false;
            } else {
                vals.push_back(std::stod(cell));
            }
        }
        rows.push_back(std::move(vals));
    }
    if (rows.empty()) throw std::invalid_argument("CSV has no data rows");
    const std::size_t dim = rows.front().size();
    const double dt = times.size() > 1 ? times[1] - times[0] : 1.0;
    SampledSignal s(Grid(times.front(), dt, rows.size()), dim);
    for (std::size_t k = 0; k < rows.size(); ++k) {
        if (rows[k].size() != dim) throw std::invalid_argument("ragged CSV row");
        s.set_node(k, rows[k]);
    }
    return s;
}

} // namespace evostab
