// incidence.hpp - solution/edge incidence matrices and their copy-based synthesis
#pragma once

#include <cstdint>
#include <memory>
#include <vector>

#include "optomask/bitrows.hpp"
#include "optomask/edges.hpp"

namespace optomask {

// Accounting for the block-structured synthesis of a matrix. block_copies
// counts every block operation (stenciled column copies and constant fills,
// auxiliary-mask upkeep included) and accumulates across chained extensions;
// elements_written is the element count rows*cols of the matrix produced last.
struct CopyLedger {
  std::uint64_t block_copies = 0;
  std::uint64_t elements_written = 0;
};

// Row counts are factorial in n; these bounds keep allocations sane.
inline constexpr int kMaxHamiltonianN = 12;
inline constexpr int kMaxPermanentN = 8;

struct PositionIncidence;  // per-(position, column) row sets, kept for extension

// Row r encodes one candidate solution; bit (r, c) is 1 iff that solution
// uses the edge of column c. row_labels stores the decoded solutions flat,
// n entries per row: a vertex sequence starting at 1 (hamiltonian) or a
// permutation image list (permanent).
struct IncidenceMatrix {
  MatrixKind kind = MatrixKind::hamiltonian;
  int n = 0;
  std::uint64_t rows = 0;
  int cols = 0;
  BitRows bits;
  std::vector<std::uint8_t> row_labels;
  std::shared_ptr<const PositionIncidence> pos_aux;  // synthesis by-product

  std::vector<int> row_label(std::uint64_t r) const;

  bool same_content(const IncidenceMatrix& o) const {
    return kind == o.kind && n == o.n && rows == o.rows && cols == o.cols &&
           bits == o.bits && row_labels == o.row_labels;
  }
};

// 2x6 matrix for n = 3: rows 100110 (cycle 1-2-3-1) and 011001 (cycle 1-3-2-1).
IncidenceMatrix build_base_hamiltonian();

// One extension step n -> n+1. New rows are grouped per old row; within a
// group the new vertex walks from the end of the old cycle towards the
// front, so row r*n + s inserts vertex n+1 after position n-s of old row r.
// The bit content is produced exclusively by ledger-counted block operations.
IncidenceMatrix extend_hamiltonian(const IncidenceMatrix& m, CopyLedger& ledger);

// Chained extensions from the base up to size n (n >= 3), ledger accumulated.
IncidenceMatrix build_hamiltonian(int n, CopyLedger& ledger);

// n! x n^2 matrix, rows in lexicographic order of the permutation image list,
// row sigma set at positions (i, sigma(i)). Supported for n <= 8.
IncidenceMatrix build_permanent(int n);

// Decodes row r from its bits, checks the result against the stored label,
// and returns it. A disagreement means the matrix is corrupt and throws.
std::vector<int> row_to_solution(const IncidenceMatrix& m, std::uint64_t r);

}  // namespace optomask
