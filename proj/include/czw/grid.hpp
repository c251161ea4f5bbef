#pragma once

#include <cstddef>
#include <filesystem>
#include <functional>
#include <optional>
#include <span>
#include <utility>
#include <vector>

namespace czw {

/// Uniform midpoint grid on [a, b) with n = 2^levels cells.
class UniformGrid {
public:
    UniformGrid(double a, double b, int levels);

    /// Grid with `n` cells; n must be a power of two >= 2.
    static UniformGrid with_cells(double a, double b, std::size_t n);

    double a() const { return a_; }
    double b() const { return b_; }
    double length() const { return b_ - a_; }
    std::size_t size() const { return n_; }
    int levels() const { return levels_; }
    double spacing() const { return h_; }
    double midpoint(std::size_t i) const { return a_ + (static_cast<double>(i) + 0.5) * h_; }

    /// Cell containing x, clamped to the domain.
    std::size_t cell_of(double x) const;

    /// Index of the cell whose midpoint is closest to x.
    std::size_t nearest_cell(double x) const;

    friend bool operator==(const UniformGrid&, const UniformGrid&) = default;

private:
    double a_;
    double b_;
    int levels_;
    std::size_t n_;
    double h_;
};

/// Half-open range of cell indices [begin, end); every grid-aligned
/// subinterval of the domain is one of these.
struct CellRange {
    std::size_t begin = 0;
    std::size_t end = 0;

    std::size_t size() const { return end - begin; }
    bool empty() const { return end <= begin; }
    bool contains(std::size_t i) const { return i >= begin && i < end; }

    friend bool operator==(const CellRange&, const CellRange&) = default;
};

/// Node of the dyadic tree rooted at the whole domain.
struct DyadicInterval {
    int gen = 0;
    std::size_t idx = 0;

    /// Cell range covered on `grid`; throws ResolutionError when gen exceeds
    /// the grid's depth.
    CellRange cells(const UniformGrid& grid) const;
    double left(const UniformGrid& grid) const;
    double right(const UniformGrid& grid) const;

    std::pair<DyadicInterval, DyadicInterval> children() const;
    std::optional<DyadicInterval> parent() const;

    friend bool operator==(const DyadicInterval&, const DyadicInterval&) = default;
};

struct DilatedRange {
    CellRange cells;
    bool clamped = false;
};

/// Smallest grid-aligned range containing the `factor`-fold concentric
/// dilate of `q`, clamped to the domain.
DilatedRange dilate(const UniformGrid& grid, CellRange q, double factor);
DilatedRange dilate(const UniformGrid& grid, const DyadicInterval& q, double factor);

/// Piecewise-constant function sampled at cell midpoints.
class GridFunction {
public:
    explicit GridFunction(UniformGrid grid);
    GridFunction(UniformGrid grid, std::vector<double> values);

    static GridFunction constant(UniformGrid grid, double c);
    static GridFunction sample(UniformGrid grid, const std::function<double(double)>& fn);

    const UniformGrid& grid() const { return grid_; }
    std::size_t size() const { return values_.size(); }
    std::span<const double> values() const { return values_; }
    std::span<double> values() { return values_; }
    double operator[](std::size_t i) const { return values_[i]; }
    double& operator[](std::size_t i) { return values_[i]; }

    GridFunction abs() const;
    GridFunction pow(double exponent) const;  // |f|^exponent
    GridFunction map(const std::function<double(double)>& fn) const;

    GridFunction& operator+=(const GridFunction& other);
    GridFunction& operator-=(const GridFunction& other);
    GridFunction& operator*=(const GridFunction& other);
    GridFunction& operator*=(double c);

    friend GridFunction operator+(GridFunction lhs, const GridFunction& rhs) { return lhs += rhs; }
    friend GridFunction operator-(GridFunction lhs, const GridFunction& rhs) { return lhs -= rhs; }
    friend GridFunction operator*(GridFunction lhs, const GridFunction& rhs) { return lhs *= rhs; }
    friend GridFunction operator*(GridFunction lhs, double c) { return lhs *= c; }
    friend GridFunction operator*(double c, GridFunction rhs) { return rhs *= c; }

    /// Largest |value|.
    double sup_norm() const;

private:
    UniformGrid grid_;
    std::vector<double> values_;
};

/// Throws GridMismatchError unless both functions live on the same grid.
void require_same_grid(const GridFunction& f, const GridFunction& g, const char* where);

/// Signed average (1/|Q|) * integral over Q (exact midpoint sums).
double average(const GridFunction& f, CellRange q);
double average(const GridFunction& f, const DyadicInterval& q);

/// Integral over the whole domain, sum of values * h.
double integral(const GridFunction& f);
double integral(const GridFunction& f, CellRange q);

/// (sum |f|^p h)^(1/p).
double lp_norm(const GridFunction& f, double p);

/// (sum |f|^p w h)^(1/p); w must share the grid.
double weighted_lp_norm(const GridFunction& f, const GridFunction& w, double p);

/// w({x : |g(x)| > lambda}) = sum of w h over cells with |g| > lambda.
double level_set_measure(const GridFunction& g, const GridFunction& w, double lambda);

/// sup_{lambda > 0} lambda * w({|g| > lambda}), the weak L^1(w) quasi-norm.
double weak_l1_norm(const GridFunction& g, const GridFunction& w);

/// Prefix sums P[i] = values[0] + ... + values[i-1], for O(1) interval sums.
class PrefixSums {
public:
    explicit PrefixSums(std::span<const double> values);
    double sum(std::size_t begin, std::size_t end) const { return prefix_[end] - prefix_[begin]; }
    double mean(std::size_t begin, std::size_t end) const {
        return sum(begin, end) / static_cast<double>(end - begin);
    }

private:
    std::vector<double> prefix_;
};

/// Visit every grid-aligned interval whose endpoints lie on multiples of
/// `stride` cells (the last breakpoint is always n).
void for_each_interval(std::size_t n, std::size_t stride,
                       const std::function<void(CellRange)>& visit);

/// Every dyadic interval of the grid, root first, generation by generation.
std::vector<DyadicInterval> all_dyadic(const UniformGrid& grid);

// CSV with header `x,value`, one row per cell.
void write_csv(const GridFunction& f, const std::filesystem::path& path);
GridFunction read_csv(const std::filesystem::path& path);

}  // namespace czw
