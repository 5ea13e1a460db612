#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <random>
#include <stdexcept>
#include <vector>

#include "optomask/optics.hpp"
#include "oracle_helpers.hpp"

using namespace optomask;

namespace {

GraphInstance complete_digraph(int n) {
  std::vector<EdgeId> edges;
  for (int s = 1; s <= n; ++s)
    for (int d = 1; d <= n; ++d)
      if (s != d) edges.push_back({s, d});
  return GraphInstance::make(n, std::move(edges));
}

MaskSelection selection_for(const IncidenceMatrix& m, const GraphInstance& g) {
  return selection_from_vector(edge_vector(m, g));
}

// The selection restricted to its first t layers in ascending order.
MaskSelection prefix_of(const MaskSelection& sel, std::size_t t) {
  std::vector<int> s = sel.selected;
  std::sort(s.begin(), s.end());
  s.resize(t);
  return {s};
}

bool fillers_zero(const IntensityField& f) {
  for (std::uint64_t cell = f.used; cell < std::uint64_t(f.side) * f.side; ++cell)
    if (f.cells[cell] != 0.0) return false;
  return true;
}

}  // namespace

TEST_CASE("pixel grids are the smallest squares that fit") {
  for (std::uint64_t rows = 1; rows <= 50; ++rows) {
    PixelGrid g = PixelGrid::for_rows(rows);
    CHECK(std::uint64_t(g.side) * g.side >= rows);
    CHECK(std::uint64_t(g.side - 1) * (g.side - 1) < rows);
    CHECK(g.used(rows - 1));
    CHECK_FALSE(g.used(rows));
  }
  CHECK(PixelGrid::for_rows(2).side == 2);
  CHECK(PixelGrid::for_rows(24).side == 5);
}

TEST_CASE("parameter validation enforces the documented ranges") {
  CHECK_THROWS_AS((OpticsParams{-0.1, 0.0, 0.5, 1.0}.validate()), std::invalid_argument);
  CHECK_THROWS_AS((OpticsParams{1.0, 0.0, 0.5, 1.0}.validate()), std::invalid_argument);
  CHECK_THROWS_AS((OpticsParams{0.0, -0.01, 0.5, 1.0}.validate()), std::invalid_argument);
  CHECK_THROWS_AS((OpticsParams{0.0, 0.26, 0.5, 1.0}.validate()), std::invalid_argument);
  CHECK_THROWS_AS((OpticsParams{0.0, 0.0, 0.0, 1.0}.validate()), std::invalid_argument);
  CHECK_THROWS_AS((OpticsParams{0.0, 0.0, 0.5, 0.0}.validate()), std::invalid_argument);
  CHECK_THROWS_AS((OpticsParams{0.0, 0.0, 1.0, 1.0}.validate()), std::invalid_argument);
  OpticsParams{0.0, 0.25, 0.5, 1.0}.validate();
}

TEST_CASE("the lossless model reproduces the ideal solver exactly") {
  CopyLedger ledger;
  OpticsParams ideal{0.0, 0.0, 0.5, 1.0};
  std::mt19937_64 rng(31415);
  for (int n = 4; n <= 5; ++n) {
    IncidenceMatrix m = build_hamiltonian(n, ledger);
    std::vector<GraphInstance> suite{complete_digraph(n)};
    for (int t = 0; t < 30; ++t) suite.push_back(testref::random_digraph(n, rng));
    for (const GraphInstance& g : suite) {
      std::vector<int> counts = multiply(m, edge_vector(m, g));
      IntensityField f = propagate(m, selection_for(m, g), ideal);
      for (std::uint64_t r = 0; r < m.rows; ++r) {
        double want = counts[std::size_t(r)] == 0 ? 1.0 : 0.0;
        CHECK(f.cells[r] == want);
      }
      CHECK(fillers_zero(f));
    }
  }
}

TEST_CASE("pure attenuation scales open cells by the layer count") {
  CopyLedger ledger;
  IncidenceMatrix m5 = build_hamiltonian(5, ledger);
  std::mt19937_64 rng(2718);
  OpticsParams p{0.1, 0.0, 0.01, 2.0};
  for (int t = 0; t < 20; ++t) {
    GraphInstance g = testref::random_digraph(5, rng);
    MaskSelection sel = selection_for(m5, g);
    double expect = 2.0 * std::pow(0.9, double(sel.selected.size()));
    std::vector<int> counts = multiply(m5, edge_vector(m5, g));
    IntensityField f = propagate(m5, sel, p);
    for (std::uint64_t r = 0; r < m5.rows; ++r) {
      if (counts[std::size_t(r)] == 0)
        CHECK(f.cells[r] == doctest::Approx(expect).epsilon(1e-12));
      else
        CHECK(f.cells[r] == 0.0);
    }
  }
}

TEST_CASE("a blocking stack extinguishes everything when nothing leaks") {
  CopyLedger ledger;
  IncidenceMatrix m5 = build_hamiltonian(5, ledger);
  OpticsParams p{0.1, 0.0, 0.5, 1.0};
  IntensityField f = propagate(m5, {{0, 1, 2, 3}}, p);
  for (double c : f.cells) CHECK(c == 0.0);
}

TEST_CASE("detection applies a strict threshold and sums the field") {
  CopyLedger ledger;
  IncidenceMatrix m4 = build_hamiltonian(4, ledger);
  OpticsParams ideal{0.0, 0.0, 0.5, 1.0};
  IntensityField f = propagate(m4, selection_for(m4, complete_digraph(4)), ideal);
  DetectionReport det = detect(f, ideal);
  CHECK(det.any_above_tau);
  CHECK(det.cells_above.size() == 6);
  CHECK(det.total_intensity == 6.0);

  IntensityField crafted;
  crafted.side = 2;
  crafted.used = 3;
  crafted.cells = {0.5, 0.6, 0.4, 0.0};
  DetectionReport d2 = detect(crafted, ideal);
  CHECK(d2.cells_above == std::vector<std::uint64_t>{1});
  CHECK(d2.total_intensity == doctest::Approx(1.5).epsilon(1e-15));

  IntensityField m5f = propagate(build_hamiltonian(5, ledger), {{0, 1, 2, 3}},
                                 OpticsParams{0.0, 0.0, 0.5, 1.0});
  DetectionReport d3 = detect(m5f, ideal);
  CHECK_FALSE(d3.any_above_tau);
  CHECK(d3.total_intensity == 0.0);
}

TEST_CASE("summed intensity reads out the permanent under ideal parameters") {
  IncidenceMatrix p4 = build_permanent(4);
  BinaryMatrixA ones = BinaryMatrixA::make(4);
  for (int i = 1; i <= 4; ++i)
    for (int j = 1; j <= 4; ++j) ones.at(i, j) = 1;
  OpticsParams ideal{0.0, 0.0, 0.5, 1.0};
  IntensityField f = propagate(p4, selection_from_vector(edge_vector(p4, ones)), ideal);
  CHECK(detect(f, ideal).total_intensity / ideal.i0 == 24.0);
}

TEST_CASE("no layer ever increases the total intensity") {
  CopyLedger ledger;
  IncidenceMatrix m5 = build_hamiltonian(5, ledger);
  std::mt19937_64 rng(55);
  for (double alpha : {0.0, 0.1})
    for (double beta : {0.0, 0.1, 0.25})
      for (bool retain : {false, true}) {
        PropagateOptions opts;
        opts.beta_blocked_retention = retain;
        OpticsParams p{alpha, beta, 0.5, 1.0};
        for (int t = 0; t < 8; ++t) {
          MaskSelection sel = selection_for(m5, testref::random_digraph(5, rng));
          double prev = -1.0;
          for (std::size_t len = 0; len <= sel.selected.size(); ++len) {
            IntensityField f = propagate(m5, prefix_of(sel, len), p, opts);
            double total = f.total();
            if (prev >= 0.0) CHECK(total <= prev + 1e-12);
            prev = total;
            CHECK(fillers_zero(f));
            for (double c : f.cells) CHECK(c >= 0.0);
          }
        }
      }
}

TEST_CASE("without crosstalk, stacking more masks never raises a cell") {
  CopyLedger ledger;
  IncidenceMatrix m5 = build_hamiltonian(5, ledger);
  std::mt19937_64 rng(808);
  for (double alpha : {0.0, 0.3}) {
    OpticsParams p{alpha, 0.0, 0.5, 1.0};
    for (int t = 0; t < 15; ++t) {
      MaskSelection sel = selection_for(m5, testref::random_digraph(5, rng));
      IntensityField base = propagate(m5, sel, p);
      int extra = int(rng() % std::uint64_t(m5.cols));
      std::vector<int> grown = sel.selected;
      if (std::find(grown.begin(), grown.end(), extra) != grown.end()) continue;
      grown.push_back(extra);
      std::sort(grown.begin(), grown.end());
      IntensityField more = propagate(m5, {grown}, p);
      for (std::size_t i = 0; i < base.cells.size(); ++i) CHECK(more.cells[i] <= base.cells[i]);
    }
  }
}

TEST_CASE("with crosstalk, an extra mask can raise a dark cell") {
  // Leakage redirects intensity sideways before a later layer absorbs it, so
  // stacking is not pointwise monotone once beta > 0. Pinned instance: the
  // four-vertex set, masks {0,1} versus {0,1,2}, where cell 0 goes from
  // blocked-dark to lit by its neighbors.
  CopyLedger ledger;
  IncidenceMatrix m4 = build_hamiltonian(4, ledger);
  OpticsParams p{0.0, 0.25, 0.5, 1.0};
  IntensityField two = propagate(m4, {{0, 1}}, p);
  IntensityField three = propagate(m4, {{0, 1, 2}}, p);
  CHECK(two.cells[0] == 0.0);
  CHECK(three.cells[0] == doctest::Approx(0.046875).epsilon(1e-12));
}

TEST_CASE("the field responds continuously to the leakage parameter") {
  CopyLedger ledger;
  IncidenceMatrix m5 = build_hamiltonian(5, ledger);
  std::mt19937_64 rng(606);
  const double eps = 1e-5;
  for (double beta : {0.01, 0.1, 0.2}) {
    for (int t = 0; t < 10; ++t) {
      MaskSelection sel = selection_for(m5, testref::random_digraph(5, rng));
      const double layers = double(sel.selected.size());
      IntensityField f1 = propagate(m5, sel, OpticsParams{0.05, beta, 0.5, 1.0});
      IntensityField f2 = propagate(m5, sel, OpticsParams{0.05, beta + eps, 0.5, 1.0});
      // Per-layer derivative in beta is bounded by 8*i0 per cell, so the
      // whole stack moves at most 8*L*i0*eps plus curvature slack.
      const double bound = 9.0 * layers * 1.0 * eps;
      for (std::size_t i = 0; i < f1.cells.size(); ++i)
        CHECK(std::abs(f1.cells[i] - f2.cells[i]) <= bound);
    }
  }
}

TEST_CASE("layer order is a real knob and runs are repeatable") {
  CopyLedger ledger;
  IncidenceMatrix m5 = build_hamiltonian(5, ledger);
  OpticsParams p{0.0, 0.25, 0.5, 1.0};
  PropagateOptions down;
  down.order = LayerOrder::descending;

  IntensityField a1 = propagate(m5, {{0, 1, 2, 3}}, p);
  IntensityField a2 = propagate(m5, {{0, 1, 2, 3}}, p);
  CHECK(a1.cells == a2.cells);

  IntensityField d = propagate(m5, {{0, 1, 2, 3}}, p, down);
  double maxdiff = 0.0;
  for (std::size_t i = 0; i < a1.cells.size(); ++i)
    maxdiff = std::max(maxdiff, std::abs(a1.cells[i] - d.cells[i]));
  CHECK(maxdiff > 0.1);

  OpticsParams nobeta{0.2, 0.0, 0.5, 1.0};
  IntensityField u0 = propagate(m5, {{0, 5, 9, 17}}, nobeta);
  IntensityField d0 = propagate(m5, {{0, 5, 9, 17}}, nobeta, down);
  CHECK(u0.cells == d0.cells);
}

TEST_CASE("retaining leakage in blocked cells only adds intensity") {
  CopyLedger ledger;
  IncidenceMatrix m5 = build_hamiltonian(5, ledger);
  std::mt19937_64 rng(404);
  OpticsParams p{0.05, 0.2, 0.5, 1.0};
  PropagateOptions keep;
  keep.beta_blocked_retention = true;
  for (int t = 0; t < 10; ++t) {
    MaskSelection sel = selection_for(m5, testref::random_digraph(5, rng));
    IntensityField off = propagate(m5, sel, p);
    IntensityField on = propagate(m5, sel, p, keep);
    for (std::size_t i = 0; i < off.cells.size(); ++i) CHECK(on.cells[i] >= off.cells[i]);
  }
}

TEST_CASE("selections must be valid column sets") {
  CopyLedger ledger;
  IncidenceMatrix m4 = build_hamiltonian(4, ledger);
  OpticsParams p{0.0, 0.0, 0.5, 1.0};
  CHECK_THROWS_AS(propagate(m4, {{12}}, p), std::invalid_argument);
  CHECK_THROWS_AS(propagate(m4, {{-1}}, p), std::invalid_argument);
  CHECK_THROWS_AS(propagate(m4, {{3, 3}}, p), std::invalid_argument);
  CHECK_THROWS_AS(propagate(m4, {{0}}, OpticsParams{0.0, 0.3, 0.5, 1.0}), std::invalid_argument);
}

TEST_CASE("crosstalk margin finds the safe leakage region") {
  CopyLedger ledger;
  IncidenceMatrix m5 = build_hamiltonian(5, ledger);
  MaskSelection blocking{{0, 1, 2, 3}};

  MarginReport quiet = crosstalk_margin(m5, blocking, OpticsParams{0.0, 0.0, 0.5, 1.0});
  CHECK(quiet.max_intensity == 0.0);
  CHECK(quiet.safe_beta == 0.25);

  OpticsParams hot{0.0, 0.25, 0.08, 1.0};
  MarginReport tight = crosstalk_margin(m5, blocking, hot);
  CHECK(tight.max_intensity > hot.tau);
  CHECK(tight.safe_beta < 0.25);
  CHECK(tight.safe_beta > 0.0);
  IntensityField at_safe = propagate(m5, blocking, OpticsParams{0.0, tight.safe_beta, 0.08, 1.0});
  CHECK(at_safe.max_used() <= hot.tau);

  CHECK_THROWS_AS(crosstalk_margin(m5, {{0}}, OpticsParams{0.0, 0.1, 0.5, 1.0}),
                  std::invalid_argument);
  CHECK_THROWS_AS(crosstalk_margin(m5, blocking, OpticsParams{0.0, 0.1, 1.5, 1.0}),
                  std::invalid_argument);
}
