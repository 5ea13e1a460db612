#include "optomask/optics.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace optomask {

PixelGrid PixelGrid::for_rows(std::uint64_t rows) {
  if (rows == 0) throw std::invalid_argument("PixelGrid: empty matrix");
  int side = 1;
  while (std::uint64_t(side) * side < rows) ++side;
  return {rows, side};
}

void OpticsParams::validate() const {
  if (!(alpha >= 0.0 && alpha < 1.0))
    throw std::invalid_argument("optics: alpha must lie in [0, 1)");
  if (!(beta >= 0.0 && beta <= 0.25))
    throw std::invalid_argument("optics: beta must lie in [0, 0.25]");
  if (!(tau > 0.0)) throw std::invalid_argument("optics: tau must be positive");
  if (!(i0 > 0.0)) throw std::invalid_argument("optics: i0 must be positive");
  if (!(tau < i0)) throw std::invalid_argument("optics: tau must be below i0");
}

double IntensityField::max_used() const {
  double m = 0.0;
  for (std::uint64_t c = 0; c < used; ++c) m = std::max(m, cells[c]);
  return m;
}

double IntensityField::total() const {
  double t = 0.0;
  for (double v : cells) t += v;
  return t;
}

namespace {

std::vector<int> sorted_selection(const IncidenceMatrix& m, const MaskSelection& sel,
                                  LayerOrder order) {
  std::vector<int> layers = sel.selected;
  for (int c : layers)
    if (c < 0 || c >= m.cols) throw std::invalid_argument("optics: selected column out of range");
  std::sort(layers.begin(), layers.end());
  if (std::adjacent_find(layers.begin(), layers.end()) != layers.end())
    throw std::invalid_argument("optics: selection contains a duplicate column");
  if (order == LayerOrder::descending) std::reverse(layers.begin(), layers.end());
  return layers;
}

}  // namespace

IntensityField propagate(const IncidenceMatrix& m, const MaskSelection& sel,
                         const OpticsParams& p, const PropagateOptions& opts) {
  p.validate();
  const PixelGrid grid = PixelGrid::for_rows(m.rows);
  const int side = grid.side;
  const std::uint64_t cells = std::uint64_t(side) * side;

  // in-grid 4-neighborhood (filler cells excluded), fixed across layers
  std::vector<std::uint32_t> nbr(m.rows * 4);
  std::vector<std::uint8_t> nbr_count(m.rows, 0);
  for (std::uint64_t c = 0; c < m.rows; ++c) {
    const int row = grid.cell_row(c), col = grid.cell_col(c);
    auto add = [&](std::int64_t other) {
      if (other >= 0 && std::uint64_t(other) < m.rows)
        nbr[c * 4 + nbr_count[c]++] = static_cast<std::uint32_t>(other);
    };
    if (row > 0) add(std::int64_t(c) - side);
    if (row < side - 1) add(std::int64_t(c) + side);
    if (col > 0) add(std::int64_t(c) - 1);
    if (col < side - 1) add(std::int64_t(c) + 1);
  }

  IntensityField f{side, m.rows, std::vector<double>(cells, 0.0)};
  for (std::uint64_t c = 0; c < m.rows; ++c) f.cells[c] = p.i0;

  std::vector<double> next(cells, 0.0);
  for (int layer : sorted_selection(m, sel, opts.order)) {
    std::fill(next.begin(), next.end(), 0.0);
    for (std::uint64_t c = 0; c < m.rows; ++c) {
      const double cur = f.cells[c];
      if (cur == 0.0) continue;
      if (m.bits.get(c, layer)) continue;  // blocked: intensity absorbed, no leak
      const int k = nbr_count[c];
      next[c] += cur * (1.0 - p.alpha) * (1.0 - k * p.beta);
      const double leak = cur * p.beta * (1.0 - p.alpha);
      for (int i = 0; i < k; ++i) {
        const std::uint32_t o = nbr[c * 4 + i];
        const bool receiver_blocked = m.bits.get(o, layer);
        if (!receiver_blocked || opts.beta_blocked_retention) next[o] += leak;
      }
    }
    std::swap(f.cells, next);
  }
  return f;
}

DetectionReport detect(const IntensityField& f, const OpticsParams& p) {
  p.validate();
  DetectionReport r;
  const std::uint64_t cells = f.cells.size();
  for (std::uint64_t c = 0; c < cells; ++c) {
    r.total_intensity += f.cells[c];
    if (f.cells[c] > p.tau) r.cells_above.push_back(c);
  }
  r.any_above_tau = !r.cells_above.empty();
  return r;
}

MarginReport crosstalk_margin(const IncidenceMatrix& m, const MaskSelection& sel,
                              const OpticsParams& p, const PropagateOptions& opts) {
  p.validate();
  const std::vector<int> layers = sorted_selection(m, sel, LayerOrder::ascending);
  for (std::uint64_t r = 0; r < m.rows; ++r) {
    bool blocked = false;
    for (int c : layers)
      if (m.bits.get(r, c)) { blocked = true; break; }
    if (!blocked)
      throw std::invalid_argument("crosstalk_margin: selection does not block every row");
  }

  auto max_at = [&](double beta) {
    OpticsParams q = p;
    q.beta = beta;
    return propagate(m, sel, q, opts).max_used();
  };

  MarginReport rep;
  rep.max_intensity = max_at(p.beta);

  const double cap = 0.25;
  if (max_at(cap) <= p.tau) {
    rep.safe_beta = cap;
    return rep;
  }
  double lo = 0.0, hi = cap;  // lo safe, hi unsafe
  while (hi - lo > 1e-6 * hi) {
    const double mid = 0.5 * (lo + hi);
    if (max_at(mid) <= p.tau)
      lo = mid;
    else
      hi = mid;
  }
  rep.safe_beta = lo;
  return rep;
}

}  // namespace optomask
