#include "optomask/solver.hpp"

#include <algorithm>
#include <bit>
#include <stdexcept>
#include <string>

namespace optomask {

GraphInstance GraphInstance::make(int n, std::vector<EdgeId> edges) {
  if (n < 1) throw std::invalid_argument("graph: n must be positive");
  for (const EdgeId& e : edges) {
    if (e.src < 1 || e.src > n || e.dst < 1 || e.dst > n)
      throw std::invalid_argument("graph: edge endpoint out of range");
    if (e.src == e.dst) throw std::invalid_argument("graph: self-loops are not allowed");
  }
  std::sort(edges.begin(), edges.end(), [](const EdgeId& x, const EdgeId& y) {
    return x.src != y.src ? x.src < y.src : x.dst < y.dst;
  });
  for (std::size_t i = 1; i < edges.size(); ++i)
    if (edges[i] == edges[i - 1]) throw std::invalid_argument("graph: duplicate edge");
  return {n, std::move(edges)};
}

bool GraphInstance::has(EdgeId e) const {
  return std::binary_search(edges.begin(), edges.end(), e,
                            [](const EdgeId& x, const EdgeId& y) {
                              return x.src != y.src ? x.src < y.src : x.dst < y.dst;
                            });
}

BinaryMatrixA BinaryMatrixA::make(int n) {
  if (n < 1) throw std::invalid_argument("matrix: n must be positive");
  return {n, std::vector<std::uint8_t>(std::size_t(n) * n, 0)};
}

int EdgeVector::count() const {
  int acc = 0;
  for (std::uint64_t w : words) acc += std::popcount(w);
  return acc;
}

EdgeVector make_edge_vector(int cols) {
  return {cols, std::vector<std::uint64_t>((cols + 63) / 64, 0)};
}

EdgeVector edge_vector(const IncidenceMatrix& m, const GraphInstance& g) {
  if (m.kind != MatrixKind::hamiltonian)
    throw std::invalid_argument("edge_vector: matrix kind is not hamiltonian");
  if (m.n != g.n) throw std::invalid_argument("edge_vector: size mismatch between matrix and graph");
  EdgeVector v = make_edge_vector(m.cols);
  for (int c = 0; c < m.cols; ++c)
    if (!g.has(column_edge(m.kind, m.n, c))) v.set(c);
  return v;
}

EdgeVector edge_vector(const IncidenceMatrix& m, const BinaryMatrixA& a) {
  if (m.kind != MatrixKind::permanent)
    throw std::invalid_argument("edge_vector: matrix kind is not permanent");
  if (m.n != a.n) throw std::invalid_argument("edge_vector: size mismatch between matrix and instance");
  EdgeVector v = make_edge_vector(m.cols);
  for (int i = 1; i <= m.n; ++i)
    for (int j = 1; j <= m.n; ++j)
      if (!a.at(i, j)) v.set(edge_column(m.kind, m.n, {i, j}));
  return v;
}

EdgeVector selection_to_vector(int cols, const std::vector<int>& selected) {
  EdgeVector v = make_edge_vector(cols);
  for (int c : selected) {
    if (c < 0 || c >= cols) throw std::invalid_argument("selection: column index out of range");
    v.set(c);
  }
  return v;
}

MaskSelection selection_from_vector(const EdgeVector& v) {
  MaskSelection s;
  for (int c = 0; c < v.cols; ++c)
    if (v.at(c)) s.selected.push_back(c);
  return s;
}

std::vector<int> multiply(const IncidenceMatrix& m, const EdgeVector& v) {
  if (v.cols != m.cols) throw std::invalid_argument("multiply: vector length mismatch");
  std::vector<int> counts(m.rows);
  for (std::uint64_t r = 0; r < m.rows; ++r) counts[r] = m.bits.and_popcount(r, v.words);
  return counts;
}

HamiltonianDecision decide_hamiltonian(const IncidenceMatrix& m, const GraphInstance& g) {
  const std::vector<int> counts = multiply(m, edge_vector(m, g));
  HamiltonianDecision d;
  for (std::uint64_t r = 0; r < counts.size(); ++r)
    if (counts[r] == 0) d.witness_rows.push_back(r);
  d.exists = !d.witness_rows.empty();
  return d;
}

std::uint64_t permanent_by_masks(const IncidenceMatrix& m, const BinaryMatrixA& a) {
  const std::vector<int> counts = multiply(m, edge_vector(m, a));
  std::uint64_t perm = 0;
  for (int c : counts) perm += (c == 0);
  return perm;
}

std::map<int, std::uint64_t> blocking_histogram(const std::vector<int>& counts) {
  std::map<int, std::uint64_t> h;
  for (int c : counts) ++h[c];
  return h;
}

OracleCycles oracle_hamiltonian(const GraphInstance& g) {
  if (g.n > 9) throw std::invalid_argument("oracle_hamiltonian: n exceeds brute-force range");
  OracleCycles out;
  if (g.n < 2) return out;
  std::vector<int> rest(g.n - 1);
  for (int i = 0; i < g.n - 1; ++i) rest[i] = i + 2;
  do {
    int prev = 1;
    bool ok = true;
    for (int v : rest) {
      if (!g.has({prev, v})) { ok = false; break; }
      prev = v;
    }
    if (ok && g.has({prev, 1})) {
      std::vector<int> cycle{1};
      cycle.insert(cycle.end(), rest.begin(), rest.end());
      out.cycles.push_back(std::move(cycle));
    }
  } while (std::next_permutation(rest.begin(), rest.end()));
  out.exists = !out.cycles.empty();
  return out;
}

std::uint64_t oracle_permanent(const BinaryMatrixA& a) {
  const int n = a.n;
  if (n > 20) throw std::invalid_argument("oracle_permanent: n exceeds supported range");
  std::vector<std::uint64_t> rowsum(n, 0);
  std::uint64_t total = 0;
  std::uint64_t gray = 0;
  for (std::uint64_t k = 1; k < (std::uint64_t(1) << n); ++k) {
    const std::uint64_t g = k ^ (k >> 1);
    const int j = std::countr_zero(g ^ gray);
    if (g & (std::uint64_t(1) << j))
      for (int i = 0; i < n; ++i) rowsum[i] += a.at(i + 1, j + 1);
    else
      for (int i = 0; i < n; ++i) rowsum[i] -= a.at(i + 1, j + 1);
    gray = g;
    std::uint64_t prod = 1;
    for (int i = 0; i < n; ++i) prod *= rowsum[i];
    if ((n - std::popcount(g)) & 1)
      total -= prod;
    else
      total += prod;
  }
  return total;
}

}  // namespace optomask
