#include "czw/grid.hpp"

#include <algorithm>
#include <bit>
#include <cmath>
#include <fstream>
#include <iomanip>
#include <limits>
#include <sstream>
#include <string>

#include "czw/error.hpp"

namespace czw {

UniformGrid::UniformGrid(double a, double b, int levels) : a_(a), b_(b), levels_(levels) {
    if (!std::isfinite(a) || !std::isfinite(b) || !(a < b))
        throw DomainError("UniformGrid: need finite a < b");
    if (levels < 1 || levels > 30) throw DomainError("UniformGrid: levels must be in [1, 30]");
    n_ = std::size_t{1} << levels;
    h_ = (b - a) / static_cast<double>(n_);
}

UniformGrid UniformGrid::with_cells(double a, double b, std::size_t n) {
    if (n < 2 || !std::has_single_bit(n))
        throw DomainError("UniformGrid: cell count must be a power of two >= 2");
    return UniformGrid(a, b, std::countr_zero(n));
}

std::size_t UniformGrid::cell_of(double x) const {
    const double pos = std::floor((x - a_) / h_);
    if (pos <= 0.0) return 0;
    if (pos >= static_cast<double>(n_ - 1)) return n_ - 1;
    return static_cast<std::size_t>(pos);
}

std::size_t UniformGrid::nearest_cell(double x) const {
    const double pos = std::round((x - a_) / h_ - 0.5);
    if (pos <= 0.0) return 0;
    if (pos >= static_cast<double>(n_ - 1)) return n_ - 1;
    return static_cast<std::size_t>(pos);
}

CellRange DyadicInterval::cells(const UniformGrid& grid) const {
    if (gen < 0 || gen > grid.levels()) {
        std::ostringstream msg;
        msg << "dyadic generation " << gen << " exceeds grid depth " << grid.levels();
        throw ResolutionError(msg.str());
    }
    if (idx >= (std::size_t{1} << gen)) throw DomainError("dyadic index out of range");
    const std::size_t width = grid.size() >> gen;
    return {idx * width, (idx + 1) * width};
}

double DyadicInterval::left(const UniformGrid& grid) const {
    return grid.a() + static_cast<double>(idx) * grid.length() / std::ldexp(1.0, gen);
}

double DyadicInterval::right(const UniformGrid& grid) const {
    return grid.a() + static_cast<double>(idx + 1) * grid.length() / std::ldexp(1.0, gen);
}

std::pair<DyadicInterval, DyadicInterval> DyadicInterval::children() const {
    return {{gen + 1, 2 * idx}, {gen + 1, 2 * idx + 1}};
}

std::optional<DyadicInterval> DyadicInterval::parent() const {
    if (gen == 0) return std::nullopt;
    return DyadicInterval{gen - 1, idx / 2};
}

DilatedRange dilate(const UniformGrid& grid, CellRange q, double factor) {
    if (q.empty() || q.end > grid.size()) throw DomainError("dilate: invalid cell range");
    if (!(factor >= 1.0)) throw DomainError("dilate: factor must be >= 1");
    const double center = 0.5 * static_cast<double>(q.begin + q.end);
    const double half = 0.5 * factor * static_cast<double>(q.size());
    const double lo = std::floor(center - half + 1e-9);
    const double hi = std::ceil(center + half - 1e-9);
    const double n = static_cast<double>(grid.size());
    DilatedRange out;
    out.clamped = lo < 0.0 || hi > n;
    out.cells.begin = static_cast<std::size_t>(std::max(lo, 0.0));
    out.cells.end = static_cast<std::size_t>(std::min(hi, n));
    return out;
}

DilatedRange dilate(const UniformGrid& grid, const DyadicInterval& q, double factor) {
    return dilate(grid, q.cells(grid), factor);
}

GridFunction::GridFunction(UniformGrid grid) : grid_(grid), values_(grid.size(), 0.0) {}

GridFunction::GridFunction(UniformGrid grid, std::vector<double> values)
    : grid_(grid), values_(std::move(values)) {
    if (values_.size() != grid_.size())
        throw DomainError("GridFunction: value count does not match the grid");
    for (double v : values_)
        if (!std::isfinite(v)) throw DomainError("GridFunction: values must be finite");
}

GridFunction GridFunction::constant(UniformGrid grid, double c) {
    return GridFunction(grid, std::vector<double>(grid.size(), c));
}

GridFunction GridFunction::sample(UniformGrid grid, const std::function<double(double)>& fn) {
    std::vector<double> v(grid.size());
    for (std::size_t i = 0; i < v.size(); ++i) v[i] = fn(grid.midpoint(i));
    return GridFunction(grid, std::move(v));
}

GridFunction GridFunction::abs() const {
    return map([](double v) { return std::abs(v); });
}

GridFunction GridFunction::pow(double exponent) const {
    return map([exponent](double v) { return std::pow(std::abs(v), exponent); });
}

GridFunction GridFunction::map(const std::function<double(double)>& fn) const {
    std::vector<double> v(values_.size());
    std::transform(values_.begin(), values_.end(), v.begin(), fn);
    return GridFunction(grid_, std::move(v));
}

GridFunction& GridFunction::operator+=(const GridFunction& other) {
    require_same_grid(*this, other, "operator+=");
    for (std::size_t i = 0; i < values_.size(); ++i) values_[i] += other.values_[i];
    return *this;
}

GridFunction& GridFunction::operator-=(const GridFunction& other) {
    require_same_grid(*this, other, "operator-=");
    for (std::size_t i = 0; i < values_.size(); ++i) values_[i] -= other.values_[i];
    return *this;
}

GridFunction& GridFunction::operator*=(const GridFunction& other) {
    require_same_grid(*this, other, "operator*=");
    for (std::size_t i = 0; i < values_.size(); ++i) values_[i] *= other.values_[i];
    return *this;
}

GridFunction& GridFunction::operator*=(double c) {
    for (double& v : values_) v *= c;
    return *this;
}

double GridFunction::sup_norm() const {
    double m = 0.0;
    for (double v : values_) m = std::max(m, std::abs(v));
    return m;
}

void require_same_grid(const GridFunction& f, const GridFunction& g, const char* where) {
    if (!(f.grid() == g.grid())) throw GridMismatchError(std::string(where) + ": grids differ");
}

double average(const GridFunction& f, CellRange q) {
    if (q.empty() || q.end > f.size()) throw DomainError("average: invalid cell range");
    double s = 0.0;
    for (std::size_t i = q.begin; i < q.end; ++i) s += f[i];
    return s / static_cast<double>(q.size());
}

double average(const GridFunction& f, const DyadicInterval& q) {
    return average(f, q.cells(f.grid()));
}

double integral(const GridFunction& f) { return integral(f, {0, f.size()}); }

double integral(const GridFunction& f, CellRange q) {
    double s = 0.0;
    for (std::size_t i = q.begin; i < q.end; ++i) s += f[i];
    return s * f.grid().spacing();
}

double lp_norm(const GridFunction& f, double p) {
    if (!(p > 0.0)) throw DomainError("lp_norm: p must be > 0");
    double acc = 0.0;
    for (double v : f.values()) acc += std::pow(std::abs(v), p);
    return std::pow(acc * f.grid().spacing(), 1.0 / p);
}

double weighted_lp_norm(const GridFunction& f, const GridFunction& w, double p) {
    require_same_grid(f, w, "weighted_lp_norm");
    if (!(p > 0.0)) throw DomainError("weighted_lp_norm: p must be > 0");
    double acc = 0.0;
    for (std::size_t i = 0; i < f.size(); ++i) acc += std::pow(std::abs(f[i]), p) * w[i];
    return std::pow(acc * f.grid().spacing(), 1.0 / p);
}

double level_set_measure(const GridFunction& g, const GridFunction& w, double lambda) {
    require_same_grid(g, w, "level_set_measure");
    double acc = 0.0;
    for (std::size_t i = 0; i < g.size(); ++i)
        if (std::abs(g[i]) > lambda) acc += w[i];
    return acc * g.grid().spacing();
}

double weak_l1_norm(const GridFunction& g, const GridFunction& w) {
    require_same_grid(g, w, "weak_l1_norm");
    // For lambda just below a level v, the set {|g| > lambda} is {|g| >= v};
    // the supremum is approached at the distinct levels.
    std::vector<std::size_t> order(g.size());
    for (std::size_t i = 0; i < order.size(); ++i) order[i] = i;
    std::sort(order.begin(), order.end(),
              [&](std::size_t l, std::size_t r) { return std::abs(g[l]) > std::abs(g[r]); });
    double mass = 0.0;
    double best = 0.0;
    for (std::size_t k = 0; k < order.size(); ++k) {
        mass += w[order[k]];
        const double level = std::abs(g[order[k]]);
        const bool last_of_level = k + 1 == order.size() || std::abs(g[order[k + 1]]) < level;
        if (last_of_level) best = std::max(best, level * mass);
    }
    return best * g.grid().spacing();
}

PrefixSums::PrefixSums(std::span<const double> values) : prefix_(values.size() + 1, 0.0) {
    for (std::size_t i = 0; i < values.size(); ++i) prefix_[i + 1] = prefix_[i] + values[i];
}

void for_each_interval(std::size_t n, std::size_t stride,
                       const std::function<void(CellRange)>& visit) {
    if (stride == 0) throw ConfigError("for_each_interval: stride must be >= 1");
    std::vector<std::size_t> breaks;
    for (std::size_t i = 0; i < n; i += stride) breaks.push_back(i);
    breaks.push_back(n);
    for (std::size_t s = 0; s + 1 < breaks.size(); ++s)
        for (std::size_t e = s + 1; e < breaks.size(); ++e) visit({breaks[s], breaks[e]});
}

std::vector<DyadicInterval> all_dyadic(const UniformGrid& grid) {
    std::vector<DyadicInterval> out;
    out.reserve(2 * grid.size());
    for (int g = 0; g <= grid.levels(); ++g)
        for (std::size_t i = 0; i < (std::size_t{1} << g); ++i) out.push_back({g, i});
    return out;
}

void write_csv(const GridFunction& f, const std::filesystem::path& path) {
    std::ofstream out(path);
    if (!out) throw IoError("cannot open " + path.string() + " for writing");
    out << "x,value\n" << std::setprecision(17);
    for (std::size_t i = 0; i < f.size(); ++i) out << f.grid().midpoint(i) << ',' << f[i] << '\n';
    if (!out) throw IoError("write failed: " + path.string());
}

GridFunction read_csv(const std::filesystem::path& path) {
    std::ifstream in(path);
    if (!in) throw IoError("cannot open " + path.string());
    std::string line;
    if (!std::getline(in, line) || line.rfind("x,value", 0) != 0)
        throw IoError(path.string() + ": expected header `x,value`");
    std::vector<double> xs;
    std::vector<double> vs;
    while (std::getline(in, line)) {
        if (line.empty()) continue;
        const auto comma = line.find(',');
        if (comma == std::string::npos) throw IoError(path.string() + ": malformed row: " + line);
        try {
            xs.push_back(std::stod(line.substr(0, comma)));
            vs.push_back(std::stod(line.substr(comma + 1)));
        } catch (const std::exception&) {
            throw IoError(path.string() + ": malformed row: " + line);
        }
    }
    if (xs.size() < 2) throw IoError(path.string() + ": need at least two rows");
    const double h = xs[1] - xs[0];
    if (!(h > 0.0)) throw IoError(path.string() + ": x must be increasing");
    for (std::size_t i = 1; i < xs.size(); ++i)
        if (std::abs((xs[i] - xs[i - 1]) - h) > 1e-9 * std::max(1.0, std::abs(xs[i])))
            throw IoError(path.string() + ": x is not a uniform midpoint grid");
    const double a = xs.front() - 0.5 * h;
    const double b = a + h * static_cast<double>(xs.size());
    return GridFunction(UniformGrid::with_cells(a, b, xs.size()), std::move(vs));
}

}  // namespace czw
