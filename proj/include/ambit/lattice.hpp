#pragma once

#include <algorithm>
#include <cmath>
#include <stdexcept>
#include <utility>
#include <vector>

#include "ambit/error.hpp"
#include "ambit/geometry.hpp"
#include "ambit/levy_basis.hpp"
#include "ambit/random.hpp"

namespace ambit {

/// One realisation of a homogeneous Lévy basis on a space-time lattice of
/// dx x dt cells. Column k covers s in [s0 + k dt, s0 + (k+1) dt); row j covers
/// xi in [xi0 + j dx, xi0 + (j+1) dx). Each column holds a contiguous block of
/// rows [lo_k, hi_k). Cells are drawn column by column, rows in increasing
/// order, so the realisation depends only on the layout and the stream.
class BasisLattice {
public:
    BasisLattice(double dx, double dt, double xi0, double s0, std::vector<std::pair<long, long>> rows)
        : dx_(dx), dt_(dt), xi0_(xi0), s0_(s0), rows_(std::move(rows)) {
        if (!(dx > 0.0) || !(dt > 0.0)) throw std::invalid_argument("lattice resolutions must be positive");
        offset_.resize(rows_.size() + 1, 0);
        for (std::size_t k = 0; k < rows_.size(); ++k) {
            const long n = std::max(0L, rows_[k].second - rows_[k].first);
            offset_[k + 1] = offset_[k] + static_cast<std::size_t>(n);
        }
    }

    void draw(const CellIncrementSampler& sampler, RandomStream& rng) {
        cells_.resize(offset_.back());
        for (double& c : cells_) c = sampler(rng);
        prefix_.assign(offset_.back() + rows_.size(), 0.0);
        for (std::size_t k = 0; k < rows_.size(); ++k) {
            const std::size_t base = offset_[k] + k;
            for (std::size_t i = offset_[k]; i < offset_[k + 1]; ++i) {
                prefix_[base + (i - offset_[k]) + 1] = prefix_[base + (i - offset_[k])] + cells_[i];
            }
        }
    }

    std::size_t columns() const noexcept { return rows_.size(); }
    long row_lo(std::size_t k) const { return rows_[k].first; }
    long row_hi(std::size_t k) const { return rows_[k].second; }
    double dx() const noexcept { return dx_; }
    double dt() const noexcept { return dt_; }
    double cell_volume() const noexcept { return dx_ * dt_; }

    double s_left(std::size_t k) const { return s0_ + static_cast<double>(k) * dt_; }
    double s_center(std::size_t k) const { return s0_ + (static_cast<double>(k) + 0.5) * dt_; }
    double xi_left(long j) const { return xi0_ + static_cast<double>(j) * dx_; }
    double xi_center(long j) const { return xi0_ + (static_cast<double>(j) + 0.5) * dx_; }

    double cell(std::size_t k, long j) const {
        return cells_[offset_[k] + static_cast<std::size_t>(j - rows_[k].first)];
    }

    /// Sum of the cells in column k with rows in [a, b), clipped to the column.
    double column_sum(std::size_t k, long a, long b) const {
        a = std::max(a, rows_[k].first);
        b = std::min(b, rows_[k].second);
        if (b <= a) return 0.0;
        const std::size_t base = offset_[k] + k;
        return prefix_[base + static_cast<std::size_t>(b - rows_[k].first)] -
               prefix_[base + static_cast<std::size_t>(a - rows_[k].first)];
    }

private:
    double dx_, dt_, xi0_, s0_;
    std::vector<std::pair<long, long>> rows_;
    std::vector<std::size_t> offset_;
    std::vector<double> cells_;
    std::vector<double> prefix_;
};

/// Number of cells of width dx whose centres lie in [0, depth].
inline long cells_below(double depth, double dx) {
    if (!(depth >= 0.0)) return 0;
    return static_cast<long>(std::floor(depth / dx + 0.5));
}

/// Rows whose centres lie in [lo, hi] (inclusive row indices; empty when
/// first > last).
inline std::pair<long, long> rows_in(double lo, double hi, double dx) {
    if (hi < lo) return {1, 0};
    return {static_cast<long>(std::ceil(lo / dx - 0.5 - 1e-9)), static_cast<long>(std::floor(hi / dx - 0.5 + 1e-9))};
}

/// Lattice layout for evaluating integrals over A_t(x) at every x in `xs`
/// and every sorted t in `times`. Rows are anchored at xi = 0; the earliest
/// column starts `lookback` before the first time, floored to the grid.
inline BasisLattice field_lattice(const AmbitSet& set, const std::vector<double>& xs, const std::vector<double>& times,
                                  double dx, double dt, double lookback) {
    if (times.empty() || xs.empty()) throw std::invalid_argument("field lattice needs times and locations");
    for (std::size_t i = 1; i < times.size(); ++i) {
        if (times[i] < times[i - 1]) throw std::invalid_argument("evaluation times must be sorted");
    }
    const double s0 = std::floor((times.front() - lookback) / dt + 1e-9) * dt;
    const auto columns = static_cast<std::size_t>(std::ceil((times.back() - s0) / dt - 1e-9));
    const auto [xmin, xmax] = std::minmax_element(xs.begin(), xs.end());
    std::vector<std::pair<long, long>> rows(columns, {0L, 0L});
    for (std::size_t k = 0; k < columns; ++k) {
        const double sc = s0 + (static_cast<double>(k) + 0.5) * dt;
        long lo = 0, hi = -1;
        bool any = false;
        for (auto it = std::lower_bound(times.begin(), times.end(), sc); it != times.end(); ++it) {
            const auto [a, b] = set.section(*it - sc);
            if (b < a) continue;
            const auto [r0, r1] = rows_in(*xmin + a, *xmax + b, dx);
            if (r1 < r0) continue;
            lo = any ? std::min(lo, r0) : r0;
            hi = any ? std::max(hi, r1) : r1;
            any = true;
            if (set.is_trawl()) break;  // sections shrink with the lag
        }
        if (any) rows[k] = {lo, hi + 1};
    }
    return BasisLattice(dx, dt, 0.0, s0, std::move(rows));
}

/// Lookback for an ambit set: its time depth, or the trawl lag leaving at most
/// a fraction eps of the trawl outside the window.
inline double ambit_lookback(const AmbitSet& set, double eps, double max_lookback) {
    const double back = set.is_trawl() ? set.trawl()->lookback(eps) : set.time_depth();
    if (!std::isfinite(back) || back > max_lookback) {
        throw WindowError("ambit set window exceeds the configured maximum lookback", back);
    }
    return back;
}

/// sum over cells with centre in A_t(x) of weight(k, j) * cell. Without a
/// weight the column prefix sums are used.
template <class Weight>
double lattice_sum(const BasisLattice& lat, const AmbitSet& set, double x, double t, Weight&& weight) {
    double total = 0.0;
    for (std::size_t k = 0; k < lat.columns(); ++k) {
        const double sc = lat.s_center(k);
        if (sc > t) break;
        const auto [a, b] = set.section(t - sc);
        if (b < a) continue;
        const auto [r0, r1] = rows_in(x + a, x + b, lat.dx());
        const long j0 = std::max(r0, lat.row_lo(k)), j1 = std::min(r1 + 1, lat.row_hi(k));
        for (long j = j0; j < j1; ++j) total += weight(k, j) * lat.cell(k, j);
    }
    return total;
}

inline double lattice_sum(const BasisLattice& lat, const AmbitSet& set, double x, double t) {
    double total = 0.0;
    for (std::size_t k = 0; k < lat.columns(); ++k) {
        const double sc = lat.s_center(k);
        if (sc > t) break;
        const auto [a, b] = set.section(t - sc);
        if (b < a) continue;
        const auto [r0, r1] = rows_in(x + a, x + b, lat.dx());
        total += lat.column_sum(k, r0, r1 + 1);
    }
    return total;
}

}  // namespace ambit
