#include "optomask/io.hpp"

#include <cctype>
#include <cstdio>
#include <fstream>
#include <istream>
#include <ostream>
#include <set>
#include <sstream>
#include <string>
#include <vector>

namespace optomask {

namespace {

// Line-oriented scanner that stamps every complaint with source and line.
class LineReader {
 public:
  LineReader(std::istream& in, std::string source) : in_(in), source_(std::move(source)) {}

  bool next(std::string& out) {
    if (!std::getline(in_, out)) return false;
    ++line_;
    if (!out.empty() && out.back() == '\r') out.pop_back();
    return true;
  }

  std::string need(const char* what) {
    std::string s;
    if (!next(s)) {
      ++line_;
      fail(std::string("unexpected end of file, expected ") + what);
    }
    return s;
  }

  void expect_end() {
    std::string s;
    while (next(s))
      if (!s.empty()) fail("unexpected trailing content");
  }

  [[noreturn]] void fail(const std::string& reason) const {
    throw parse_error(source_ + ":" + std::to_string(line_) + ": " + reason);
  }

 private:
  std::istream& in_;
  std::string source_;
  int line_ = 0;
};

std::vector<std::string> split_ws(const std::string& s) {
  std::vector<std::string> out;
  std::istringstream iss(s);
  std::string tok;
  while (iss >> tok) out.push_back(tok);
  return out;
}

bool parse_u64(const std::string& s, std::uint64_t& out) {
  if (s.empty()) return false;
  std::uint64_t v = 0;
  for (char c : s) {
    if (c < '0' || c > '9') return false;
    if (v > (UINT64_MAX - std::uint64_t(c - '0')) / 10) return false;
    v = v * 10 + std::uint64_t(c - '0');
  }
  out = v;
  return true;
}

bool parse_int(const std::string& s, int& out) {
  std::uint64_t v = 0;
  if (!parse_u64(s, v) || v > 1000000) return false;
  out = static_cast<int>(v);
  return true;
}

// "key=value" with a mandatory key, numeric value.
std::string kv_value(LineReader& r, const std::string& tok, const char* key) {
  const std::string prefix = std::string(key) + "=";
  if (tok.rfind(prefix, 0) != 0)
    r.fail("expected " + prefix + "..., got \"" + tok + "\"");
  return tok.substr(prefix.size());
}

std::uint64_t factorial_u64(int n) {
  std::uint64_t f = 1;
  for (int i = 2; i <= n; ++i) f *= std::uint64_t(i);
  return f;
}

std::vector<int> parse_label_csv(LineReader& r, const std::string& line, int n) {
  const std::string prefix = "label=";
  if (line.rfind(prefix, 0) != 0) r.fail("expected label=..., got \"" + line + "\"");
  std::vector<int> vals;
  std::string cur;
  for (std::size_t i = prefix.size(); i <= line.size(); ++i) {
    if (i == line.size() || line[i] == ',') {
      int v = 0;
      if (!parse_int(cur, v)) r.fail("label entry \"" + cur + "\" is not a number");
      vals.push_back(v);
      cur.clear();
    } else {
      cur.push_back(line[i]);
    }
  }
  if (static_cast<int>(vals.size()) != n)
    r.fail("label has " + std::to_string(vals.size()) + " entries, expected " + std::to_string(n));
  return vals;
}

bool is_permutation(const std::vector<int>& v, int n) {
  std::vector<char> seen(std::size_t(n) + 1, 0);
  for (int x : v) {
    if (x < 1 || x > n || seen[std::size_t(x)]) return false;
    seen[std::size_t(x)] = 1;
  }
  return true;
}

}  // namespace

void write_maskset(const IncidenceMatrix& m, std::ostream& out) {
  out << "MASKSET v1\n";
  out << "kind=" << (m.kind == MatrixKind::hamiltonian ? "hamiltonian" : "permanent")
      << " n=" << m.n << " rows=" << m.rows << " cols=" << m.cols << "\n";
  std::string line(std::size_t(m.cols), '0');
  for (std::uint64_t r = 0; r < m.rows; ++r) {
    for (int c = 0; c < m.cols; ++c) line[std::size_t(c)] = m.bits.get(r, c) ? '1' : '0';
    out << line << "\n";
  }
  for (std::uint64_t r = 0; r < m.rows; ++r) {
    out << "label=";
    for (int i = 0; i < m.n; ++i) {
      if (i) out << ",";
      out << int(m.row_labels[r * std::uint64_t(m.n) + std::uint64_t(i)]);
    }
    out << "\n";
  }
}

void write_maskset_file(const IncidenceMatrix& m, const std::string& path) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw std::runtime_error(path + ": cannot open for writing");
  write_maskset(m, out);
  out.flush();
  if (!out) throw std::runtime_error(path + ": write failed");
}

IncidenceMatrix read_maskset(std::istream& in, const std::string& source) {
  LineReader r(in, source);
  if (r.need("MASKSET v1 header") != "MASKSET v1") r.fail("missing MASKSET v1 header");

  std::vector<std::string> toks = split_ws(r.need("kind/n/rows/cols line"));
  if (toks.size() != 4) r.fail("expected kind=... n=... rows=... cols=...");
  const std::string kind_s = kv_value(r, toks[0], "kind");
  IncidenceMatrix m;
  if (kind_s == "hamiltonian")
    m.kind = MatrixKind::hamiltonian;
  else if (kind_s == "permanent")
    m.kind = MatrixKind::permanent;
  else
    r.fail("unknown kind \"" + kind_s + "\"");
  std::uint64_t rows = 0;
  int cols = 0;
  if (!parse_int(kv_value(r, toks[1], "n"), m.n)) r.fail("n is not a number");
  if (!parse_u64(kv_value(r, toks[2], "rows"), rows)) r.fail("rows is not a number");
  if (!parse_int(kv_value(r, toks[3], "cols"), cols)) r.fail("cols is not a number");

  const bool ham = m.kind == MatrixKind::hamiltonian;
  const int n_lo = ham ? 3 : 1;
  const int n_hi = ham ? kMaxHamiltonianN : kMaxPermanentN;
  if (m.n < n_lo || m.n > n_hi)
    r.fail("n=" + std::to_string(m.n) + " outside supported range " + std::to_string(n_lo) +
           ".." + std::to_string(n_hi));
  const std::uint64_t want_rows = ham ? factorial_u64(m.n - 1) : factorial_u64(m.n);
  const int want_cols = edge_count(m.kind, m.n);
  if (rows != want_rows)
    r.fail("rows=" + std::to_string(rows) + " does not match n (expected " +
           std::to_string(want_rows) + ")");
  if (cols != want_cols)
    r.fail("cols=" + std::to_string(cols) + " does not match n (expected " +
           std::to_string(want_cols) + ")");
  m.rows = rows;
  m.cols = cols;
  m.bits = BitRows(rows, cols);

  for (std::uint64_t row = 0; row < rows; ++row) {
    std::string line = r.need("bit row");
    if (line.size() != std::size_t(cols))
      r.fail("bit row has " + std::to_string(line.size()) + " characters, expected " +
             std::to_string(cols));
    int weight = 0;
    for (int c = 0; c < cols; ++c) {
      if (line[std::size_t(c)] == '1') {
        m.bits.set(row, c);
        ++weight;
      } else if (line[std::size_t(c)] != '0') {
        r.fail(std::string("bit row contains '") + line[std::size_t(c)] + "'");
      }
    }
    if (weight != m.n)
      r.fail("bit row has weight " + std::to_string(weight) + ", expected " +
             std::to_string(m.n));
  }

  m.row_labels.resize(rows * std::uint64_t(m.n));
  for (std::uint64_t row = 0; row < rows; ++row) {
    std::vector<int> lab = parse_label_csv(r, r.need("label line"), m.n);
    if (!is_permutation(lab, m.n)) r.fail("label is not a permutation of 1.." + std::to_string(m.n));
    if (ham && lab[0] != 1) r.fail("cycle label must start at vertex 1");
    for (int i = 0; i < m.n; ++i) {
      EdgeId e = ham ? EdgeId{lab[std::size_t(i)], lab[std::size_t((i + 1) % m.n)]}
                     : EdgeId{i + 1, lab[std::size_t(i)]};
      if (!m.bits.get(row, edge_column(m.kind, m.n, e)))
        r.fail("label disagrees with bit row " + std::to_string(row));
      m.row_labels[row * std::uint64_t(m.n) + std::uint64_t(i)] =
          static_cast<std::uint8_t>(lab[std::size_t(i)]);
    }
  }
  r.expect_end();
  return m;
}

IncidenceMatrix read_maskset_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw parse_error(path + ": cannot open file");
  return read_maskset(in, path);
}

void write_graph(const GraphInstance& g, std::ostream& out) {
  out << "GRAPH n=" << g.n << "\n";
  for (const EdgeId& e : g.edges) out << e.src << " " << e.dst << "\n";
}

GraphInstance read_graph(std::istream& in, const std::string& source) {
  LineReader r(in, source);
  std::vector<std::string> toks = split_ws(r.need("GRAPH header"));
  if (toks.size() != 2 || toks[0] != "GRAPH") r.fail("expected \"GRAPH n=<n>\"");
  int n = 0;
  if (!parse_int(kv_value(r, toks[1], "n"), n) || n < 1) r.fail("n is not a positive number");
  if (n > kMaxHamiltonianN)
    r.fail("n=" + std::to_string(n) + " outside supported range 1.." +
           std::to_string(kMaxHamiltonianN));

  std::vector<EdgeId> edges;
  std::set<std::pair<int, int>> seen;
  std::string line;
  while (r.next(line)) {
    if (line.empty()) continue;
    std::vector<std::string> parts = split_ws(line);
    int s = 0, d = 0;
    if (parts.size() != 2 || !parse_int(parts[0], s) || !parse_int(parts[1], d))
      r.fail("expected \"<src> <dst>\", got \"" + line + "\"");
    if (s < 1 || s > n || d < 1 || d > n) r.fail("edge endpoint outside 1.." + std::to_string(n));
    if (s == d) r.fail("self-loops are not allowed");
    if (!seen.insert({s, d}).second)
      r.fail("duplicate edge " + std::to_string(s) + " " + std::to_string(d));
    edges.push_back({s, d});
  }
  return GraphInstance::make(n, std::move(edges));
}

GraphInstance read_graph_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw parse_error(path + ": cannot open file");
  return read_graph(in, path);
}

void write_binmat(const BinaryMatrixA& a, std::ostream& out) {
  out << "BINMAT n=" << a.n << "\n";
  for (int i = 1; i <= a.n; ++i) {
    for (int j = 1; j <= a.n; ++j) out << (a.at(i, j) ? '1' : '0');
    out << "\n";
  }
}

BinaryMatrixA read_binmat(std::istream& in, const std::string& source) {
  LineReader r(in, source);
  std::vector<std::string> toks = split_ws(r.need("BINMAT header"));
  if (toks.size() != 2 || toks[0] != "BINMAT") r.fail("expected \"BINMAT n=<n>\"");
  int n = 0;
  if (!parse_int(kv_value(r, toks[1], "n"), n) || n < 1) r.fail("n is not a positive number");
  if (n > 20) r.fail("n=" + std::to_string(n) + " outside supported range 1..20");
  BinaryMatrixA a = BinaryMatrixA::make(n);
  for (int i = 1; i <= n; ++i) {
    std::string line = r.need("matrix row");
    if (line.size() != std::size_t(n))
      r.fail("matrix row has " + std::to_string(line.size()) + " characters, expected " +
             std::to_string(n));
    for (int j = 1; j <= n; ++j) {
      char c = line[std::size_t(j - 1)];
      if (c != '0' && c != '1') r.fail(std::string("matrix row contains '") + c + "'");
      a.at(i, j) = c == '1' ? 1 : 0;
    }
  }
  r.expect_end();
  return a;
}

BinaryMatrixA read_binmat_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw parse_error(path + ": cannot open file");
  return read_binmat(in, path);
}

void write_intensity_csv(const IntensityField& f, std::ostream& out) {
  out << "row,col,intensity\n";
  char buf[64];
  for (int row = 0; row < f.side; ++row)
    for (int col = 0; col < f.side; ++col) {
      std::snprintf(buf, sizeof buf, "%.12e", f.at(row, col));
      out << row << "," << col << "," << buf << "\n";
    }
}

void write_intensity_csv_file(const IntensityField& f, const std::string& path) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw std::runtime_error(path + ": cannot open for writing");
  write_intensity_csv(f, out);
  out.flush();
  if (!out) throw std::runtime_error(path + ": write failed");
}

}  // namespace optomask
