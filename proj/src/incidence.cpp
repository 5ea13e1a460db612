// incidence.cpp - matrix synthesis by stenciled block copies
//
// Extension n -> n+1 writes ones onto a fresh all-zero matrix; no element is
// ever written twice. Every write happens inside a block operation whose
// source is a whole old column or a position stencil of one (the per-position
// row sets kept in PositionIncidence), so the per-extension operation count
// stays polynomial in n while the element count grows factorially.
//
// Row layout after extending old row r (cycle c_1..c_m, c_1 = 1): new row
// r*m + s inserts vertex m+1 after position p = m - s, i.e. s = 0 appends at
// the end. For the new row (r, s):
//   column (a, b), a,b <= m : old bit minus rows where (a,b) sat at position p
//   column (a, m+1)         : 1 iff c_p == a
//   column (m+1, b)         : 1 iff c_{p+1} == b  (cyclically, c_{m+1} = c_1)
// Position stencils resolve these predicates: c_2 == a iff edge (1,a) is
// used, c_m == a iff edge (a,1) is used, and for 2 < q < m the rows with
// c_q == a are the disjoint union of the position-q stencils of the edges
// leaving a.

#include "optomask/incidence.hpp"

#include <algorithm>
#include <stdexcept>
#include <string>

namespace optomask {

struct PositionIncidence {
  int n = 0;     // positions 1..n
  int cols = 0;  // n*(n-1) edge columns
  std::vector<std::vector<std::uint32_t>> cells;

  PositionIncidence() = default;
  PositionIncidence(int n_, int cols_) : n(n_), cols(cols_), cells(std::size_t(n_) * cols_) {}

  const std::vector<std::uint32_t>& at(int q, int col) const {
    return cells[std::size_t(q - 1) * cols + col];
  }
  std::vector<std::uint32_t>& at(int q, int col) {
    return cells[std::size_t(q - 1) * cols + col];
  }
};

namespace {

int ham_col(int n, int src, int dst) {
  return edge_column(MatrixKind::hamiltonian, n, {src, dst});
}

// Rebuilds the position stencils of a matrix that arrived without them
// (e.g. loaded from a file); stands in for auxiliary masks that a synthesis
// run would have kept, so it is not ledger-counted.
std::shared_ptr<const PositionIncidence> derive_position_incidence(const IncidenceMatrix& m) {
  auto ep = std::make_shared<PositionIncidence>(m.n, m.cols);
  for (std::uint64_t r = 0; r < m.rows; ++r) {
    const std::uint8_t* lab = m.row_labels.data() + r * m.n;
    for (int i = 1; i <= m.n; ++i) {
      int src = lab[i - 1];
      int dst = lab[i % m.n];
      ep->at(i, ham_col(m.n, src, dst)).push_back(static_cast<std::uint32_t>(r));
    }
  }
  return ep;
}

// Invokes f once per stencil whose old rows satisfy c_q == a; a null list
// means "all rows". Skips impossible (q, a) combinations.
template <class F>
void for_rows_with_vertex_at(const PositionIncidence& ep, int m, int q, int a, F&& f) {
  if (q == 1) {
    if (a == 1) f(nullptr);
    return;
  }
  if (a == 1) return;
  if (q == 2) {
    f(&ep.at(1, ham_col(m, 1, a)));
  } else if (q == m) {
    f(&ep.at(m, ham_col(m, a, 1)));
  } else {
    for (int v = 2; v <= m; ++v)
      if (v != a) f(&ep.at(q, ham_col(m, a, v)));
  }
}

IncidenceMatrix extend_impl(const IncidenceMatrix& old, CopyLedger& ledger, bool keep_aux) {
  if (old.kind != MatrixKind::hamiltonian)
    throw std::invalid_argument("extend_hamiltonian: matrix kind is not hamiltonian");
  if (old.n < 3 || old.n >= kMaxHamiltonianN)
    throw std::invalid_argument("extend_hamiltonian: size out of supported range");

  const int m = old.n;
  const int w = m + 1;
  const std::uint64_t new_rows = old.rows * m;
  const int new_cols = edge_count(MatrixKind::hamiltonian, w);

  std::shared_ptr<const PositionIncidence> derived;
  const PositionIncidence* ep = old.pos_aux.get();
  if (!ep) {
    derived = derive_position_incidence(old);
    ep = derived.get();
  }

  IncidenceMatrix out;
  out.kind = MatrixKind::hamiltonian;
  out.n = w;
  out.rows = new_rows;
  out.cols = new_cols;
  out.bits = BitRows(new_rows, new_cols);

  auto new_ep = keep_aux ? std::make_shared<PositionIncidence>(w, new_cols) : nullptr;

  // Block primitives. A null source list addresses every old row. Each call
  // is one recorded operation; repeated writes to one element are a bug.
  auto punch_bits = [&](int dst_col, const std::vector<std::uint32_t>* src, int slot_lo,
                        int slot_hi) {
    if (slot_lo < 0) slot_lo = 0;
    if (slot_hi > m - 1) slot_hi = m - 1;
    if (slot_lo > slot_hi) return;
    if (src && src->empty()) return;
    auto write = [&](std::uint64_t r) {
      std::uint64_t base = r * m;
      for (int s = slot_lo; s <= slot_hi; ++s) {
        if (out.bits.get(base + s, dst_col))
          throw std::logic_error("extend_hamiltonian: element written twice");
        out.bits.set(base + s, dst_col);
      }
    };
    if (src)
      for (std::uint32_t r : *src) write(r);
    else
      for (std::uint64_t r = 0; r < old.rows; ++r) write(r);
    ++ledger.block_copies;
  };
  auto punch_list = [&](int q, int dst_col, const std::vector<std::uint32_t>* src, int slot_lo,
                        int slot_hi) {
    if (slot_lo < 0) slot_lo = 0;
    if (slot_hi > m - 1) slot_hi = m - 1;
    if (slot_lo > slot_hi) return;
    if (src && src->empty()) return;
    auto& cell = new_ep->at(q, dst_col);
    auto write = [&](std::uint64_t r) {
      std::uint64_t base = r * m;
      for (int s = slot_lo; s <= slot_hi; ++s)
        cell.push_back(static_cast<std::uint32_t>(base + s));
    };
    if (src)
      for (std::uint32_t r : *src) write(r);
    else
      for (std::uint64_t r = 0; r < old.rows; ++r) write(r);
    ++ledger.block_copies;
  };

  for (int a = 1; a <= w; ++a) {
    for (int b = 1; b <= w; ++b) {
      if (a == b) continue;
      const int c = edge_column(MatrixKind::hamiltonian, w, {a, b});
      if (b == w) {
        // bit(r, s) = [c_p == a], p = m - s
        for (int q = 1; q <= m; ++q)
          for_rows_with_vertex_at(*ep, m, q, a,
                                  [&](const std::vector<std::uint32_t>* src) {
                                    punch_bits(c, src, m - q, m - q);
                                  });
      } else if (a == w) {
        // bit(r, s) = [c_{p+1} == b]; p = m gives the closing edge into 1
        if (b == 1) {
          punch_bits(c, nullptr, 0, 0);
        } else {
          for (int q = 2; q <= m; ++q)
            for_rows_with_vertex_at(*ep, m, q, b,
                                    [&](const std::vector<std::uint32_t>* src) {
                                      punch_bits(c, src, m - q + 1, m - q + 1);
                                    });
        }
      } else {
        // old edge: keep the old bit except where insertion breaks it
        const int oc = ham_col(m, a, b);
        for (int q = 1; q <= m; ++q) {
          const auto& src = ep->at(q, oc);
          if (src.empty()) continue;
          punch_bits(c, &src, 0, m - q - 1);
          punch_bits(c, &src, m - q + 1, m - 1);
        }
      }
    }
  }

  if (new_ep) {
    for (int a = 1; a <= m; ++a) {
      for (int b = 1; b <= m; ++b) {
        if (a == b) continue;
        const int oc = ham_col(m, a, b);
        const int nc = ham_col(w, a, b);
        for (int q = 1; q <= w; ++q) {
          if (q <= m) punch_list(q, nc, &ep->at(q, oc), 0, m - q - 1);
          if (q >= 2) punch_list(q, nc, &ep->at(q - 1, oc), m - q + 2, m - 1);
        }
      }
    }
    for (int a = 1; a <= m; ++a) {
      const int nc = ham_col(w, a, w);
      for (int q = 1; q <= m; ++q)
        for_rows_with_vertex_at(*ep, m, q, a,
                                [&](const std::vector<std::uint32_t>* src) {
                                  punch_list(q, nc, src, m - q, m - q);
                                });
    }
    for (int b = 1; b <= m; ++b) {
      const int nc = ham_col(w, w, b);
      if (b == 1) {
        punch_list(w, nc, nullptr, 0, 0);
      } else {
        for (int q = 2; q <= m; ++q)
          for_rows_with_vertex_at(*ep, m, q, b,
                                  [&](const std::vector<std::uint32_t>* src) {
                                    punch_list(q, nc, src, m - q + 1, m - q + 1);
                                  });
      }
    }
    for (auto& cell : new_ep->cells) std::sort(cell.begin(), cell.end());
  }

  out.row_labels.resize(new_rows * std::size_t(w));
  for (std::uint64_t r = 0; r < old.rows; ++r) {
    const std::uint8_t* lab = old.row_labels.data() + r * m;
    for (int s = 0; s < m; ++s) {
      const int p = m - s;
      std::uint8_t* dst = out.row_labels.data() + (r * m + s) * w;
      for (int i = 0; i < p; ++i) dst[i] = lab[i];
      dst[p] = static_cast<std::uint8_t>(w);
      for (int i = p; i < m; ++i) dst[i + 1] = lab[i];
    }
  }

  ledger.elements_written = new_rows * static_cast<std::uint64_t>(new_cols);
  out.pos_aux = std::move(new_ep);
  return out;
}

IncidenceMatrix build_base_impl(CopyLedger* ledger) {
  IncidenceMatrix m;
  m.kind = MatrixKind::hamiltonian;
  m.n = 3;
  m.rows = 2;
  m.cols = 6;
  m.bits = BitRows(2, 6);
  m.row_labels = {1, 2, 3, 1, 3, 2};

  auto ep = std::make_shared<PositionIncidence>(3, 6);
  std::uint64_t ops = 0;
  for (std::uint64_t r = 0; r < 2; ++r) {
    const std::uint8_t* lab = m.row_labels.data() + r * 3;
    for (int i = 1; i <= 3; ++i) {
      int col = ham_col(3, lab[i - 1], lab[i % 3]);
      m.bits.set(r, col);
      ep->at(i, col).push_back(static_cast<std::uint32_t>(r));
      ops += 2;  // one single-element fill for the bit, one for the stencil
    }
  }
  m.pos_aux = std::move(ep);
  if (ledger) {
    ledger->block_copies += ops;
    ledger->elements_written = m.rows * static_cast<std::uint64_t>(m.cols);
  }
  return m;
}

}  // namespace

std::vector<int> IncidenceMatrix::row_label(std::uint64_t r) const {
  if (r >= rows) throw std::out_of_range("row_label: row index out of range");
  std::vector<int> out(n);
  for (int i = 0; i < n; ++i) out[i] = row_labels[r * n + i];
  return out;
}

IncidenceMatrix build_base_hamiltonian() { return build_base_impl(nullptr); }

IncidenceMatrix extend_hamiltonian(const IncidenceMatrix& m, CopyLedger& ledger) {
  return extend_impl(m, ledger, true);
}

IncidenceMatrix build_hamiltonian(int n, CopyLedger& ledger) {
  if (n < 3) throw std::invalid_argument("build_hamiltonian: n must be at least 3");
  if (n > kMaxHamiltonianN)
    throw std::invalid_argument("build_hamiltonian: n exceeds supported range");
  IncidenceMatrix m = build_base_impl(&ledger);
  for (int g = 3; g < n; ++g) m = extend_impl(m, ledger, /*keep_aux=*/g + 1 < n);
  return m;
}

IncidenceMatrix build_permanent(int n) {
  if (n < 1) throw std::invalid_argument("build_permanent: n must be at least 1");
  if (n > kMaxPermanentN)
    throw std::invalid_argument("build_permanent: n exceeds supported range");
  IncidenceMatrix m;
  m.kind = MatrixKind::permanent;
  m.n = n;
  m.cols = n * n;
  std::uint64_t rows = 1;
  for (int i = 2; i <= n; ++i) rows *= i;
  m.rows = rows;
  m.bits = BitRows(rows, m.cols);
  m.row_labels.resize(rows * std::size_t(n));

  std::vector<int> sigma(n);
  for (int i = 0; i < n; ++i) sigma[i] = i + 1;
  std::uint64_t r = 0;
  do {
    for (int i = 0; i < n; ++i) {
      m.row_labels[r * n + i] = static_cast<std::uint8_t>(sigma[i]);
      m.bits.set(r, edge_column(MatrixKind::permanent, n, {i + 1, sigma[i]}));
    }
    ++r;
  } while (std::next_permutation(sigma.begin(), sigma.end()));
  return m;
}

std::vector<int> row_to_solution(const IncidenceMatrix& m, std::uint64_t r) {
  if (r >= m.rows) throw std::out_of_range("row_to_solution: row index out of range");
  std::vector<int> decoded(m.n, 0);
  if (m.kind == MatrixKind::hamiltonian) {
    std::vector<int> next(m.n + 1, 0);
    int used = 0;
    for (int c = 0; c < m.cols; ++c) {
      if (!m.bits.get(r, c)) continue;
      EdgeId e = column_edge(m.kind, m.n, c);
      if (next[e.src] != 0)
        throw std::logic_error("row_to_solution: row encodes two departures from vertex " +
                                 std::to_string(e.src));
      next[e.src] = e.dst;
      ++used;
    }
    if (used != m.n) throw std::logic_error("row_to_solution: row weight is not n");
    int v = 1;
    for (int i = 0; i < m.n; ++i) {
      decoded[i] = v;
      v = next[v];
      if (v == 0) throw std::logic_error("row_to_solution: walk leaves the cycle");
    }
    if (v != 1) throw std::logic_error("row_to_solution: walk does not close at vertex 1");
  } else {
    std::vector<char> seen(m.n + 1, 0);
    for (int c = 0; c < m.cols; ++c) {
      if (!m.bits.get(r, c)) continue;
      EdgeId e = column_edge(m.kind, m.n, c);
      if (decoded[e.src - 1] != 0 || seen[e.dst])
        throw std::logic_error("row_to_solution: row is not a permutation");
      decoded[e.src - 1] = e.dst;
      seen[e.dst] = 1;
    }
    for (int i = 0; i < m.n; ++i)
      if (decoded[i] == 0) throw std::logic_error("row_to_solution: row is not a permutation");
  }
  const std::uint8_t* lab = m.row_labels.data() + r * m.n;
  for (int i = 0; i < m.n; ++i)
    if (decoded[i] != lab[i])
      throw std::logic_error("row_to_solution: decoded row disagrees with stored label");
  return decoded;
}

}  // namespace optomask
