// io.hpp - text file formats: mask sets, graphs, 0/1 matrices, intensity dumps
#pragma once

#include <iosfwd>
#include <string>

#include "optomask/incidence.hpp"
#include "optomask/optics.hpp"
#include "optomask/solver.hpp"

namespace optomask {

// Parse failure carrying "<source>:<line>: <reason>".
struct parse_error : std::runtime_error {
  using std::runtime_error::runtime_error;
};

// MASKSET v1:
//   MASKSET v1
//   kind=<hamiltonian|permanent> n=<n> rows=<rows> cols=<cols>
//   <rows lines of '0'/'1', cols chars each>
//   <rows lines "label=v1,v2,...">
void write_maskset(const IncidenceMatrix& m, std::ostream& out);
void write_maskset_file(const IncidenceMatrix& m, const std::string& path);
IncidenceMatrix read_maskset(std::istream& in, const std::string& source);
IncidenceMatrix read_maskset_file(const std::string& path);

// GRAPH:
//   GRAPH n=<n>
//   <one "src dst" line per directed edge, 1-based>
void write_graph(const GraphInstance& g, std::ostream& out);
GraphInstance read_graph(std::istream& in, const std::string& source);
GraphInstance read_graph_file(const std::string& path);

// BINMAT:
//   BINMAT n=<n>
//   <n lines of '0'/'1', n chars each>
void write_binmat(const BinaryMatrixA& a, std::ostream& out);
BinaryMatrixA read_binmat(std::istream& in, const std::string& source);
BinaryMatrixA read_binmat_file(const std::string& path);

// CSV "row,col,intensity", all grid cells row-major, 12+ significant digits.
void write_intensity_csv(const IntensityField& f, std::ostream& out);
void write_intensity_csv_file(const IntensityField& f, const std::string& path);

}  // namespace optomask
