// solver.hpp - instance encoding and mask-stack evaluation
#pragma once

#include <cstdint>
#include <map>
#include <vector>

#include "optomask/incidence.hpp"

namespace optomask {

// Directed graph on vertices 1..n, no self-loops, edges deduplicated.
struct GraphInstance {
  int n = 0;
  std::vector<EdgeId> edges;

  static GraphInstance make(int n, std::vector<EdgeId> edges);
  bool has(EdgeId e) const;
};

// Dense 0/1 matrix, row-major, 1-based accessors.
struct BinaryMatrixA {
  int n = 0;
  std::vector<std::uint8_t> a;

  static BinaryMatrixA make(int n);
  std::uint8_t& at(int i, int j) { return a[std::size_t(i - 1) * n + (j - 1)]; }
  std::uint8_t at(int i, int j) const { return a[std::size_t(i - 1) * n + (j - 1)]; }
};

// Word-packed 0/1 vector over the column space; entry k is 1 iff the mask of
// column k is part of the stack.
struct EdgeVector {
  int cols = 0;
  std::vector<std::uint64_t> words;

  int at(int k) const { return (words[k / 64] >> (k % 64)) & 1u; }
  void set(int k) { words[k / 64] |= std::uint64_t(1) << (k % 64); }
  int count() const;
};

// Column indices of the activated masks, ascending.
struct MaskSelection {
  std::vector<int> selected;
};

struct HamiltonianDecision {
  bool exists = false;
  std::vector<std::uint64_t> witness_rows;  // ascending
};

EdgeVector make_edge_vector(int cols);

// Absent edges get a 1 (their mask joins the stack), present edges a 0.
EdgeVector edge_vector(const IncidenceMatrix& m, const GraphInstance& g);

// Position (i, j) gets the complement of a_ij.
EdgeVector edge_vector(const IncidenceMatrix& m, const BinaryMatrixA& a);

EdgeVector selection_to_vector(int cols, const std::vector<int>& selected);
MaskSelection selection_from_vector(const EdgeVector& v);

// Per row, the number of stacked masks blocking it.
std::vector<int> multiply(const IncidenceMatrix& m, const EdgeVector& v);

HamiltonianDecision decide_hamiltonian(const IncidenceMatrix& m, const GraphInstance& g);

// Permanent of a via the mask stack: rows left unblocked.
std::uint64_t permanent_by_masks(const IncidenceMatrix& m, const BinaryMatrixA& a);

std::map<int, std::uint64_t> blocking_histogram(const std::vector<int>& counts);

// Brute-force cycle enumeration, n <= 9. Testing reference and CLI cross-check.
struct OracleCycles {
  bool exists = false;
  std::vector<std::vector<int>> cycles;  // vertex sequences starting at 1
};
OracleCycles oracle_hamiltonian(const GraphInstance& g);

// Inclusion-exclusion permanent, n <= 20. Arithmetic runs mod 2^64; the true
// value of a 0/1 permanent at n <= 20 fits, so the result is exact.
std::uint64_t oracle_permanent(const BinaryMatrixA& a);

}  // namespace optomask
