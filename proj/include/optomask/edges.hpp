// edges.hpp - directed-edge identifiers and their fixed column order
#pragma once

#include <stdexcept>

namespace optomask {

enum class MatrixKind { hamiltonian, permanent };

// Directed edge (src, dst), vertices 1-based. For the permanent kind the
// same struct names a matrix position (i, j), where src == dst is legal.
struct EdgeId {
  int src = 0;
  int dst = 0;
  bool operator==(const EdgeId&) const = default;
};

// Number of columns for a size-n matrix of the given kind.
inline int edge_count(MatrixKind kind, int n) {
  return kind == MatrixKind::hamiltonian ? n * (n - 1) : n * n;
}

// Column index of an edge: lexicographic by (src, dst).
inline int edge_column(MatrixKind kind, int n, EdgeId e) {
  if (e.src < 1 || e.src > n || e.dst < 1 || e.dst > n)
    throw std::invalid_argument("edge endpoint out of range");
  if (kind == MatrixKind::hamiltonian) {
    if (e.src == e.dst) throw std::invalid_argument("self-loop has no column");
    return (e.src - 1) * (n - 1) + (e.dst - 1) - (e.dst > e.src ? 1 : 0);
  }
  return (e.src - 1) * n + (e.dst - 1);
}

// Inverse of edge_column.
inline EdgeId column_edge(MatrixKind kind, int n, int col) {
  if (col < 0 || col >= edge_count(kind, n))
    throw std::invalid_argument("column index out of range");
  if (kind == MatrixKind::hamiltonian) {
    int src = col / (n - 1) + 1;
    int off = col % (n - 1);
    int dst = off + 1 + (off + 1 >= src ? 1 : 0);
    return {src, dst};
  }
  return {col / n + 1, col % n + 1};
}

}  // namespace optomask
