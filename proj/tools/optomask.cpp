// optomask - command-line front end for mask synthesis, solving, optics, layout
#include <charconv>
#include <cstdint>
#include <exception>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "optomask/io.hpp"
#include "optomask/layout.hpp"
#include "optomask/manifest.hpp"
#include "optomask/optics.hpp"
#include "optomask/solver.hpp"

namespace {

using namespace optomask;

std::string dtos(double v) {
  char buf[64];
  auto [p, ec] = std::to_chars(buf, buf + sizeof buf, v);
  (void)ec;
  return std::string(buf, p);
}

std::string nm_to_um(std::int64_t nm) { return dtos(double(nm) / 1e3) + "um"; }
std::string nm_to_mm(std::int64_t nm) { return dtos(double(nm) / 1e6) + "mm"; }

constexpr std::uint64_t kWitnessPrintCap = 20;

struct OpticsArgs {
  double alpha = 0.0;
  double beta = 0.0;
  double tau = 0.5;
  double i0 = 1.0;
  std::string field_csv;

  OpticsParams params() const { return {alpha, beta, tau, i0}; }
  void record(Manifest& man) const {
    man.arg("alpha", alpha);
    man.arg("beta", beta);
    man.arg("tau", tau);
    man.arg("i0", i0);
    if (!field_csv.empty()) man.arg("field-csv", field_csv);
  }
};

void print_detection(const IntensityField& field, const DetectionReport& det,
                     const OpticsArgs& oa) {
  std::cout << "optics: alpha=" << dtos(oa.alpha) << " beta=" << dtos(oa.beta)
            << " tau=" << dtos(oa.tau) << " i0=" << dtos(oa.i0) << "\n";
  std::cout << "detected=" << (det.any_above_tau ? "yes" : "no")
            << " cells_above=" << det.cells_above.size()
            << " max_intensity=" << dtos(field.max_used())
            << " total_intensity=" << dtos(det.total_intensity) << "\n";
}

// Stdout-only runs append their manifest to the report instead of a file.
void finish_manifest(Manifest& man, const std::string& file_or_empty) {
  if (file_or_empty.empty()) {
    std::cout << "\n" << man.text();
  } else {
    man.write_file(file_or_empty);
    std::cout << "manifest=" << file_or_empty << "\n";
  }
}

int run_gen(int n, const std::string& out_dir) {
  std::filesystem::create_directories(out_dir);
  CopyLedger ledger;
  IncidenceMatrix m = build_hamiltonian(n, ledger);
  const std::string path =
      (std::filesystem::path(out_dir) / ("maskset_n" + std::to_string(n) + ".txt")).string();
  write_maskset_file(m, path);

  std::cout << "wrote " << path << "\n";
  std::cout << "rows=" << m.rows << " cols=" << m.cols << "\n";
  std::cout << "block_copies=" << ledger.block_copies << "\n";
  std::cout << "elements_written=" << ledger.elements_written << "\n";

  Manifest man;
  man.subcommand = "gen";
  man.arg("n", std::int64_t(n));
  man.arg("out", out_dir);
  man.output("masks", path);
  finish_manifest(man, path + ".manifest");
  return 0;
}

int run_solve(const std::string& graph_path, const std::string& masks_path, bool with_optics,
              const OpticsArgs& oa) {
  GraphInstance g = read_graph_file(graph_path);
  IncidenceMatrix m = read_maskset_file(masks_path);
  if (m.kind != MatrixKind::hamiltonian)
    throw std::invalid_argument("solve: mask set is not of the hamiltonian kind");

  EdgeVector v = edge_vector(m, g);
  std::vector<int> counts = multiply(m, v);
  HamiltonianDecision dec = decide_hamiltonian(m, g);

  std::cout << "graph=" << graph_path << " n=" << g.n << " edges=" << g.edges.size() << "\n";
  std::cout << "masks=" << masks_path << " rows=" << m.rows << " cols=" << m.cols << "\n";
  std::cout << "stacked=" << v.count() << "\n";
  std::cout << "exists=" << (dec.exists ? "yes" : "no") << "\n";
  std::cout << "witnesses=" << dec.witness_rows.size() << "\n";
  std::uint64_t shown = 0;
  for (std::uint64_t r : dec.witness_rows) {
    if (shown == kWitnessPrintCap) {
      std::cout << "(" << dec.witness_rows.size() - shown << " more witnesses omitted)\n";
      break;
    }
    std::vector<int> cyc = row_to_solution(m, r);
    std::cout << "cycle:";
    for (int x : cyc) std::cout << " " << x;
    std::cout << "\n";
    ++shown;
  }
  for (const auto& [k, c] : blocking_histogram(counts))
    std::cout << "blocked_by=" << k << " rows=" << c << "\n";

  Manifest man;
  man.subcommand = "solve";
  man.arg("graph", graph_path);
  man.arg("masks", masks_path);
  std::string manifest_path;
  if (with_optics) {
    OpticsParams p = oa.params();
    p.validate();
    IntensityField field = propagate(m, selection_from_vector(v), p);
    DetectionReport det = detect(field, p);
    print_detection(field, det, oa);
    oa.record(man);
    if (!oa.field_csv.empty()) {
      write_intensity_csv_file(field, oa.field_csv);
      std::cout << "wrote " << oa.field_csv << "\n";
    }
  }
  man.input("graph", graph_path);
  man.input("masks", masks_path);
  if (with_optics && !oa.field_csv.empty()) {
    man.output("field", oa.field_csv);
    manifest_path = oa.field_csv + ".manifest";
  }
  finish_manifest(man, manifest_path);
  return 0;
}

int run_permanent(const std::string& matrix_path) {
  BinaryMatrixA a = read_binmat_file(matrix_path);
  std::cout << "matrix=" << matrix_path << " n=" << a.n << "\n";
  std::uint64_t ryser = oracle_permanent(a);
  if (a.n <= kMaxPermanentN) {
    IncidenceMatrix m = build_permanent(a.n);
    std::uint64_t by_masks = permanent_by_masks(m, a);
    std::cout << "masks=" << by_masks << "\n";
    std::cout << "ryser=" << ryser << "\n";
    if (by_masks != ryser)
      throw std::logic_error("permanent: mask count " + std::to_string(by_masks) +
                             " disagrees with inclusion-exclusion value " + std::to_string(ryser));
  } else {
    std::cout << "masks=n/a\n";
    std::cout << "ryser=" << ryser << "\n";
  }
  std::cout << "permanent=" << ryser << "\n";

  Manifest man;
  man.subcommand = "permanent";
  man.arg("matrix", matrix_path);
  man.input("matrix", matrix_path);
  finish_manifest(man, "");
  return 0;
}

int run_layout(int n, int k, const LayoutParams& p, const std::string& svg_path,
               const std::string& rects_path) {
  p.validate();
  InstanceArray arr = instance_array(n, k, p);
  CopyLedger ledger;
  IncidenceMatrix m = build_hamiltonian(n, ledger);
  ArrayGeometry geo = array_geometry(m, arr, p);
  emit_svg(geo.apertures, geo.canvas_nm, geo.canvas_nm, svg_path);
  emit_rects(geo.apertures, rects_path);

  std::cout << "combos=" << arr.count << "\n";
  std::cout << "grid=" << arr.grid_side << "x" << arr.grid_side << "\n";
  std::cout << "unused=" << arr.unused_cells << "\n";
  std::cout << "mask=" << nm_to_um(arr.mask_extent_nm) << " x " << nm_to_um(arr.mask_extent_nm)
            << "\n";
  std::cout << "box=" << nm_to_mm(arr.box_nm) << " x " << nm_to_mm(arr.box_nm) << "\n";
  std::cout << "apertures=" << geo.apertures.size() << "\n";

  Manifest man;
  man.subcommand = "layout";
  man.arg("n", std::int64_t(n));
  man.arg("layers", std::int64_t(k));
  man.arg("pixel-size", p.pixel_size_nm);
  man.arg("pixel-gap", p.pixel_gap_nm);
  man.arg("mask-gap", p.mask_gap_nm);
  man.arg("svg", svg_path);
  man.arg("rects", rects_path);
  man.output("svg", svg_path);
  man.output("rects", rects_path);
  finish_manifest(man, svg_path + ".manifest");
  return 0;
}

int run_simulate(const std::string& graph_path, const std::string& masks_path,
                 const OpticsArgs& oa) {
  GraphInstance g = read_graph_file(graph_path);
  IncidenceMatrix m = read_maskset_file(masks_path);
  if (m.kind != MatrixKind::hamiltonian)
    throw std::invalid_argument("simulate: mask set is not of the hamiltonian kind");
  OpticsParams p = oa.params();
  p.validate();

  EdgeVector v = edge_vector(m, g);
  IntensityField field = propagate(m, selection_from_vector(v), p);
  DetectionReport det = detect(field, p);

  std::cout << "graph=" << graph_path << " n=" << g.n << " edges=" << g.edges.size() << "\n";
  std::cout << "masks=" << masks_path << " rows=" << m.rows << " cols=" << m.cols << "\n";
  std::cout << "stacked=" << v.count() << "\n";
  print_detection(field, det, oa);
  write_intensity_csv_file(field, oa.field_csv);
  std::cout << "wrote " << oa.field_csv << "\n";

  Manifest man;
  man.subcommand = "simulate";
  man.arg("graph", graph_path);
  man.arg("masks", masks_path);
  oa.record(man);
  man.input("graph", graph_path);
  man.input("masks", masks_path);
  man.output("field", oa.field_csv);
  finish_manifest(man, oa.field_csv + ".manifest");
  return 0;
}

void add_optics_options(CLI::App* sub, OpticsArgs& oa, bool required) {
  auto* a = sub->add_option("--alpha", oa.alpha, "Per-layer absorption, in [0,1)");
  auto* b = sub->add_option("--beta", oa.beta, "Per-neighbor leakage share, in [0,0.25]");
  auto* t = sub->add_option("--tau", oa.tau, "Detection threshold");
  auto* i = sub->add_option("--i0", oa.i0, "Injected intensity");
  auto* f = sub->add_option("--field-csv", oa.field_csv, "Write the intensity field as CSV");
  if (required)
    for (auto* o : {a, b, t, i, f}) o->required();
}

void add_config_option(CLI::App* sub, std::string& path) {
  sub->add_option("--config", path, "key=value defaults file; explicit flags win");
}

// Feeds key=value lines into any option the command line left untouched.
void apply_config(CLI::App* sub, const std::string& path) {
  if (path.empty()) return;
  std::ifstream in(path);
  if (!in) throw std::runtime_error(path + ": cannot open config file");
  std::string line;
  int no = 0;
  while (std::getline(in, line)) {
    ++no;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.empty() || line[0] == '#') continue;
    auto eq = line.find('=');
    if (eq == std::string::npos || eq == 0)
      throw std::runtime_error(path + ":" + std::to_string(no) + ": expected key=value");
    std::string key = line.substr(0, eq);
    CLI::Option* opt = sub->get_option_no_throw("--" + key);
    if (opt == nullptr)
      throw std::runtime_error(path + ":" + std::to_string(no) + ": unknown key \"" + key + "\"");
    if (opt->count() == 0) {
      opt->add_result(line.substr(eq + 1));
      opt->run_callback();
    }
  }
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Mask-stack computer for Hamiltonian cycles and matrix permanents"};
  app.require_subcommand(1);

  std::string gen_cfg, solve_cfg, perm_cfg, lay_cfg, sim_cfg;
  int gen_n = 0;
  std::string gen_out;
  CLI::App* gen = app.add_subcommand("gen", "Synthesize a mask set and write it to a directory");
  gen->add_option("--n", gen_n, "Problem size (vertex count)")->required();
  gen->add_option("--out", gen_out, "Output directory")->required();
  add_config_option(gen, gen_cfg);

  std::string solve_graph, solve_masks;
  OpticsArgs solve_oa;
  CLI::App* solve = app.add_subcommand("solve", "Decide an instance against a mask set");
  solve->add_option("--graph", solve_graph, "GRAPH file")->required();
  solve->add_option("--masks", solve_masks, "MASKSET file")->required();
  add_optics_options(solve, solve_oa, false);
  add_config_option(solve, solve_cfg);

  std::string perm_matrix;
  CLI::App* perm = app.add_subcommand("permanent", "Permanent of a 0/1 matrix, two methods");
  perm->add_option("--matrix", perm_matrix, "BINMAT file")->required();
  add_config_option(perm, perm_cfg);

  int lay_n = 0, lay_k = 0;
  LayoutParams lay_p;
  std::string lay_svg, lay_rects;
  CLI::App* lay = app.add_subcommand("layout", "Plan a fabrication array of stacked-mask instances");
  lay->add_option("--n", lay_n, "Problem size (vertex count)")->required();
  lay->add_option("--layers", lay_k, "Masks per stacked instance")->required();
  lay->add_option("--pixel-size", lay_p.pixel_size_nm, "Pixel size in nm");
  lay->add_option("--pixel-gap", lay_p.pixel_gap_nm, "Pixel gap in nm");
  lay->add_option("--mask-gap", lay_p.mask_gap_nm, "Gap between masks in nm");
  lay->add_option("--svg", lay_svg, "Output SVG path")->required();
  lay->add_option("--rects", lay_rects, "Output RECTS path")->required();
  add_config_option(lay, lay_cfg);

  std::string sim_graph, sim_masks;
  OpticsArgs sim_oa;
  CLI::App* sim = app.add_subcommand("simulate", "Propagate light through an instance's stack");
  sim->add_option("--graph", sim_graph, "GRAPH file")->required();
  sim->add_option("--masks", sim_masks, "MASKSET file")->required();
  add_optics_options(sim, sim_oa, true);
  add_config_option(sim, sim_cfg);

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    int code = app.exit(e);
    return code == 0 ? 0 : 1;
  }

  try {
    if (gen->parsed()) {
      apply_config(gen, gen_cfg);
      return run_gen(gen_n, gen_out);
    }
    if (solve->parsed()) {
      apply_config(solve, solve_cfg);
      bool with_optics = solve->count("--alpha") || solve->count("--beta") ||
                         solve->count("--tau") || solve->count("--i0") ||
                         solve->count("--field-csv");
      return run_solve(solve_graph, solve_masks, with_optics, solve_oa);
    }
    if (perm->parsed()) {
      apply_config(perm, perm_cfg);
      return run_permanent(perm_matrix);
    }
    if (lay->parsed()) {
      apply_config(lay, lay_cfg);
      return run_layout(lay_n, lay_k, lay_p, lay_svg, lay_rects);
    }
    if (sim->parsed()) {
      apply_config(sim, sim_cfg);
      return run_simulate(sim_graph, sim_masks, sim_oa);
    }
  } catch (const std::invalid_argument& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  } catch (const std::out_of_range& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  } catch (const std::logic_error& e) {
    std::cerr << "internal inconsistency: " << e.what() << "\n";
    return 2;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  }
  return 1;
}
