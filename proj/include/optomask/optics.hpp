// optics.hpp - lossy propagation of a light field through a mask stack
#pragma once

#include <cstdint>
#include <vector>

#include "optomask/solver.hpp"

namespace optomask {

// Square cell grid holding one matrix row per cell, row-major; cells at
// index >= rows are filler and stay permanently opaque.
struct PixelGrid {
  std::uint64_t rows = 0;
  int side = 0;

  static PixelGrid for_rows(std::uint64_t rows);
  bool used(std::uint64_t cell) const { return cell < rows; }
  int cell_row(std::uint64_t cell) const { return static_cast<int>(cell / side); }
  int cell_col(std::uint64_t cell) const { return static_cast<int>(cell % side); }
};

// alpha: per-layer absorption; beta: per-neighbor leakage share, at most 1/4;
// tau: detection threshold; i0: injected intensity. Requires tau < i0.
struct OpticsParams {
  double alpha = 0.0;
  double beta = 0.0;
  double tau = 0.5;
  double i0 = 1.0;

  void validate() const;
};

enum class LayerOrder { ascending, descending };

struct PropagateOptions {
  LayerOrder order = LayerOrder::ascending;
  bool beta_blocked_retention = false;  // blocked cells keep received leakage
};

// Cell intensities, row-major over the full side*side grid; filler cells 0.
struct IntensityField {
  int side = 0;
  std::uint64_t used = 0;
  std::vector<double> cells;

  double at(int row, int col) const { return cells[std::size_t(row) * side + col]; }
  double max_used() const;
  double total() const;
};

// Applies the selected mask layers in canonical order, one synchronous
// double-buffered sweep per layer. A cell open at the current layer keeps
// (1-alpha)(1-k*beta) of its intensity and leaks beta*(1-alpha) of it to each
// of its k in-grid 4-neighbors; a blocked cell loses its own intensity and,
// unless beta_blocked_retention is set, also the leakage it received.
IntensityField propagate(const IncidenceMatrix& m, const MaskSelection& sel,
                         const OpticsParams& p, const PropagateOptions& opts = {});

struct DetectionReport {
  bool any_above_tau = false;
  std::vector<std::uint64_t> cells_above;  // cell indices, ascending
  double total_intensity = 0.0;
};

DetectionReport detect(const IntensityField& f, const OpticsParams& p);

struct MarginReport {
  double max_intensity = 0.0;  // worst cell at the requested beta
  double safe_beta = 0.0;      // largest beta keeping every cell at or below tau
};

// Requires a selection that blocks every row in the ideal model. safe_beta is
// located by bisection over [0, 0.25] to 1e-6 relative precision.
MarginReport crosstalk_margin(const IncidenceMatrix& m, const MaskSelection& sel,
                              const OpticsParams& p, const PropagateOptions& opts = {});

}  // namespace optomask
