// Command-line front end: exact stencil solving, grid averaging, the energy
// and Laplacian labs, and the defect lab, with CSV/JSON outputs that are
// byte-identical across runs for fixed flags.

#include <cmath>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "dyadic/forms.hpp"
#include "dyadic/mvp.hpp"
#include "dyadic/report.hpp"
#include "dyadic/solver.hpp"
#include "dyadic/util.hpp"

namespace {

using namespace dyadic;

// ---------------------------------------------------------------------------
// Flag parsing helpers
// ---------------------------------------------------------------------------

[[noreturn]] void usage_error(const std::string& msg) {
  throw Error(Errc::invalid_argument, msg);
}

std::vector<StencilPair> parse_pairs(const std::string& text) {
  std::vector<StencilPair> out;
  std::size_t pos = 0;
  auto skip_ws = [&] {
    while (pos < text.size() && text[pos] == ' ') ++pos;
  };
  skip_ws();
  while (pos < text.size()) {
    if (text[pos] != '(') usage_error("expected '(' in pairs list: " + text);
    ++pos;
    int vals[2] = {0, 0};
    for (int v = 0; v < 2; ++v) {
      skip_ws();
      std::size_t end = pos;
      while (end < text.size() && text[end] >= '0' && text[end] <= '9') ++end;
      if (end == pos) usage_error("expected digit in pairs list: " + text);
      vals[v] = std::stoi(text.substr(pos, end - pos));
      pos = end;
      skip_ws();
      if (v == 0) {
        if (pos >= text.size() || text[pos] != ',') {
          usage_error("expected ',' inside pair: " + text);
        }
        ++pos;
      }
    }
    if (pos >= text.size() || text[pos] != ')') {
      usage_error("expected ')' in pairs list: " + text);
    }
    ++pos;
    out.push_back(make_canonical(vals[0], vals[1]));
    skip_ws();
    if (pos < text.size()) {
      if (text[pos] != ',') usage_error("expected ',' between pairs: " + text);
      ++pos;
      skip_ws();
    }
  }
  if (out.empty()) usage_error("empty pairs list");
  return out;
}

std::vector<Rational> parse_coeffs(const std::string& text) {
  std::vector<Rational> out;
  std::stringstream ss(text);
  std::string item;
  while (std::getline(ss, item, ',')) {
    if (!item.empty()) out.push_back(parse_rational(item));
  }
  if (out.empty()) usage_error("empty coefficient list");
  return out;
}

std::array<double, 2> parse_point(const std::string& text) {
  const std::size_t comma = text.find(',');
  if (comma == std::string::npos) usage_error("expected 'x,y': " + text);
  try {
    return {std::stod(text.substr(0, comma)), std::stod(text.substr(comma + 1))};
  } catch (const std::exception&) {
    usage_error("malformed point: " + text);
  }
}

std::pair<int, int> parse_range(const std::string& text) {
  const std::size_t dots = text.find("..");
  try {
    if (dots == std::string::npos) {
      const int m = std::stoi(text);
      return {m, m};
    }
    return {std::stoi(text.substr(0, dots)), std::stoi(text.substr(dots + 2))};
  } catch (const std::exception&) {
    usage_error("malformed range: " + text);
  }
}

// "2^-3..2^-7", "2^-4", or a comma list of decimal side lengths.
std::vector<double> parse_sides(const std::string& text) {
  std::vector<double> out;
  if (text.rfind("2^-", 0) == 0) {
    const std::size_t dots = text.find("..");
    try {
      const int lo = std::stoi(text.substr(3, dots - 3));
      int hi = lo;
      if (dots != std::string::npos) {
        const std::string rest = text.substr(dots + 2);
        if (rest.rfind("2^-", 0) != 0) usage_error("malformed sides: " + text);
        hi = std::stoi(rest.substr(3));
      }
      for (int e = lo; e <= hi; ++e) out.push_back(std::ldexp(1.0, -e));
    } catch (const std::exception&) {
      usage_error("malformed sides: " + text);
    }
    return out;
  }
  std::stringstream ss(text);
  std::string item;
  while (std::getline(ss, item, ',')) {
    if (item.empty()) continue;
    try {
      out.push_back(std::stod(item));
    } catch (const std::exception&) {
      usage_error("malformed side: " + item);
    }
  }
  if (out.empty()) usage_error("empty sides list");
  return out;
}

// "f:4:@0.5,0.5" -> re_part, degree 4, centered (0.5, 0.5).
HarmonicBasisSpec parse_basis(const std::string& text) {
  if (text.size() < 2 || (text[0] != 'f' && text[0] != 'g') || text[1] != ':') {
    usage_error("basis shorthand must look like f:4:@0.5,0.5");
  }
  HarmonicBasisSpec spec;
  spec.kind = text[0] == 'f' ? BasisKind::re_part : BasisKind::im_part;
  const std::size_t colon = text.find(':', 2);
  try {
    spec.degree = std::stoi(text.substr(2, colon - 2));
  } catch (const std::exception&) {
    usage_error("malformed basis degree: " + text);
  }
  if (colon == std::string::npos || colon + 1 >= text.size() ||
      text[colon + 1] != '@') {
    usage_error("basis shorthand must look like f:4:@0.5,0.5");
  }
  spec.center = parse_point(text.substr(colon + 2));
  return spec;
}

struct FunctionFlags {
  std::string expr;
  std::string basis;

  ExprPtr resolve() const {
    if (!expr.empty() && !basis.empty()) {
      usage_error("--expr and --basis are mutually exclusive");
    }
    if (!basis.empty()) return harmonic_basis(parse_basis(basis));
    if (expr.empty()) usage_error("one of --expr / --basis is required");
    return parse(expr);
  }

  // Derivative-bound spec when one is known for this function.
  std::optional<HarmonicSpec> resolve_spec() const {
    if (!basis.empty()) return basis_spec(parse_basis(basis));
    if (!expr.empty()) {
      const ExprPtr tree = parse(expr);
      if (tree_equal(tree, parse("sin(x)*exp(y)"))) return sinexp_spec();
    }
    return std::nullopt;
  }
};

struct StencilFlags {
  std::string file;
  std::string pairs;
  std::string coeffs;

  StencilFamily resolve() const {
    if (!file.empty()) {
      if (!pairs.empty() || !coeffs.empty()) {
        usage_error("--stencil and --pairs/--coeffs are mutually exclusive");
      }
      return StencilFamily::load_file(file);
    }
    if (pairs.empty() || coeffs.empty()) {
      usage_error("need --stencil FILE or both --pairs and --coeffs");
    }
    return StencilFamily::create(parse_pairs(pairs), parse_coeffs(coeffs));
  }
};

void add_stencil_flags(CLI::App* cmd, StencilFlags& flags) {
  cmd->add_option("--stencil", flags.file, "stencil family JSON file");
  cmd->add_option("--pairs", flags.pairs, "inline pairs, e.g. \"(0,1),(1,1)\"");
  cmd->add_option("--coeffs", flags.coeffs,
                  "inline coefficients, e.g. \"1/5,1/20\"");
}

void validate_quad(int q) {
  if (q < 2 || q > 64) usage_error("--quad must be in [2, 64]");
}

void validate_level(int m) {
  if (m < 0 || m > 10) usage_error("--m must be in [0, 10]");
}

void write_output(const std::string& out_path, const std::string& content) {
  if (out_path.empty()) {
    std::cout << content;
    return;
  }
  std::ofstream out(out_path);
  if (!out) usage_error("cannot write output file: " + out_path);
  out << content;
}

std::string rational_line(const Rational& r) {
  return to_string(r) + " (" + format_double15(to_double(r)) + ")";
}

// ---------------------------------------------------------------------------
// Commands
// ---------------------------------------------------------------------------

int cmd_stencil_solve(const std::string& pairs_text, int level, bool as_json,
                      const std::string& out_path) {
  const std::vector<StencilPair> pairs = parse_pairs(pairs_text);
  const SolutionSet solution = solve_level(pairs, level);
  if (as_json) {
    std::cout << to_json_string(solution) << "\n";
  } else if (solution.kind != SolutionKind::infeasible) {
    std::cout << (solution.kind == SolutionKind::unique ? "unique solution"
                                                        : "affine family")
              << " at target level " << level << "\n";
    for (std::size_t i = 0; i < pairs.size(); ++i) {
      std::cout << "  A(" << pairs[i].p1 << "," << pairs[i].p2
                << ") = " << rational_line(solution.particular[i]) << "\n";
    }
    if (solution.kind == SolutionKind::affine_family) {
      for (const auto& v : solution.null_basis) {
        std::cout << "  direction:";
        for (const Rational& c : v) std::cout << " " << to_string(c);
        std::cout << "\n";
      }
      std::cout << "  min-norm member:";
      for (const Rational& c : min_norm_member(solution)) {
        std::cout << " " << to_string(c);
      }
      std::cout << "\n";
    }
    std::cout << "  renorm M = "
              << rational_line(renorm_constant(pairs, solution.particular))
              << "\n";
    std::cout << "  realized level = " << solution.realized_level.level
              << (solution.realized_level.exact ? "" : " (lower bound)")
              << "\n";
  }
  if (solution.kind == SolutionKind::infeasible) {
    std::cerr << "infeasible: no coefficients reach level " << level
              << " with these pairs\n";
    return 2;
  }
  if (!out_path.empty()) {
    const std::vector<Rational> member =
        solution.kind == SolutionKind::unique ? solution.particular
                                              : min_norm_member(solution);
    StencilFamily::create(pairs, member).save_file(out_path);
  }
  return 0;
}

int cmd_stencil_tpk(const std::string& pair_text, int k) {
  const std::vector<StencilPair> pairs = parse_pairs(pair_text);
  if (pairs.size() != 1) usage_error("--pair takes exactly one pair");
  std::cout << to_string(moment(pairs[0], k)) << "\n";
  return 0;
}

int cmd_stencil_level(const std::string& pairs_text,
                      const std::string& coeffs_text, int k_max) {
  const LevelResult r = mean_value_level(parse_pairs(pairs_text),
                                         parse_coeffs(coeffs_text), k_max);
  if (r.exact) {
    std::cout << "level " << r.level << "\n";
  } else {
    std::cout << "level >= " << r.level << " (all constraints hold through k_max)\n";
  }
  return 0;
}

int cmd_stencil_table4() {
  const std::vector<std::pair<std::vector<StencilPair>, int>> systems = {
      {{{0, 1}}, 1},
      {{{0, 1}, {1, 1}}, 1},
      {{{0, 1}, {1, 1}}, 2},
      {{{0, 1}, {1, 1}, {0, 2}}, 3},
      {{{0, 1}, {1, 1}, {0, 2}, {1, 2}}, 4},
  };
  for (const auto& [pairs, level] : systems) {
    std::cout << "P = {";
    for (std::size_t i = 0; i < pairs.size(); ++i) {
      std::cout << (i ? ", " : "") << "(" << pairs[i].p1 << "," << pairs[i].p2
                << ")";
    }
    std::cout << "}, target level " << level << "\n";
    const SolutionSet s = solve_level(pairs, level);
    if (s.kind == SolutionKind::unique) {
      for (std::size_t i = 0; i < pairs.size(); ++i) {
        std::cout << "  A(" << pairs[i].p1 << "," << pairs[i].p2
                  << ") = " << rational_line(s.particular[i]) << "\n";
      }
      std::cout << "  M = "
                << rational_line(renorm_constant(pairs, s.particular))
                << ", realized level " << s.realized_level.level << "\n";
    } else if (s.kind == SolutionKind::affine_family) {
      std::cout << "  affine family; min-norm member:";
      for (const Rational& c : min_norm_member(s)) {
        std::cout << " " << to_string(c);
      }
      std::cout << "\n  constraint: particular";
      for (std::size_t i = 0; i < pairs.size(); ++i) {
        std::cout << " " << to_string(s.particular[i]);
      }
      std::cout << " + span of directions\n";
    } else {
      std::cout << "  infeasible\n";
    }
  }
  return 0;
}

int cmd_grid_averages(const FunctionFlags& fn, int m, int quad,
                      const std::string& out_path, int threads) {
  validate_level(m);
  validate_quad(quad);
  const CellAverages avg = CellAverages::compute(fn.resolve(), m, quad, threads);
  std::ostringstream csv;
  csv << "level,i,j,center_x,center_y,value\n";
  for (int level = 0; level <= m; ++level) {
    const int n = 1 << level;
    for (int j = 0; j < n; ++j) {
      for (int i = 0; i < n; ++i) {
        const CellGeometry geo = coord_geometry({level, i, j});
        csv << level << ',' << i << ',' << j << ','
            << format_double(geo.center[0]) << ','
            << format_double(geo.center[1]) << ','
            << format_double(static_cast<double>(avg.value(level, i, j)))
            << "\n";
      }
    }
  }
  write_output(out_path, csv.str());
  return 0;
}

int cmd_energy(const std::string& f_text, const std::string& g_text,
               const StencilFlags& stencil_flags, const std::string& range,
               int quad, const std::string& out_path, int threads) {
  validate_quad(quad);
  const auto [m_lo, m_hi] = parse_range(range);
  validate_level(m_hi);
  if (m_lo < 0 || m_lo > m_hi) usage_error("bad --m-range");
  const StencilFamily fam = stencil_flags.resolve();
  const EnergyResult result = energy_sweep(parse(f_text), parse(g_text), fam,
                                           m_lo, m_hi, quad, threads);
  std::ostringstream csv;
  csv << "m,E_m,reference,abs_error\n";
  for (std::size_t i = 0; i < result.values.size(); ++i) {
    csv << (result.m_lo + static_cast<int>(i)) << ','
        << format_double(result.values[i]) << ','
        << format_double(result.reference) << ','
        << format_double(result.errors[i]) << "\n";
  }
  write_output(out_path, csv.str());
  return 0;
}

int cmd_laplacian(const FunctionFlags& fn, const StencilFlags& stencil_flags,
                  int m, int quad, const std::string& out_path, int threads) {
  validate_level(m);
  validate_quad(quad);
  const StencilFamily fam = stencil_flags.resolve();
  const ExprPtr f = fn.resolve();
  const CellAverages avg = CellAverages::compute(f, m, quad, threads);
  const LaplacianField field = discrete_laplacian(avg, fam);
  std::ostringstream csv;
  csv << "i,j,center_x,center_y,delta_m,reference,abs_error\n";
  const int n = 1 << m;
  for (int j = 0; j < n; ++j) {
    for (int i = 0; i < n; ++i) {
      const CellGeometry geo = coord_geometry({m, i, j});
      const double reference = eval_jet2(f, geo.center).laplacian();
      csv << i << ',' << j << ',' << format_double(geo.center[0]) << ','
          << format_double(geo.center[1]) << ',';
      if (const auto v = field.at(i, j)) {
        csv << format_double(*v) << ',' << format_double(reference) << ','
            << format_double(std::fabs(*v - reference));
      } else {
        csv << ',' << format_double(reference) << ',';
      }
      csv << "\n";
    }
  }
  write_output(out_path, csv.str());
  return 0;
}

std::vector<DefectSample> collect_defect_samples(
    const FunctionFlags& fn, const StencilFamily& fam,
    const std::string& center_text, const std::string& sides_text, int quad,
    bool unit_square) {
  const std::array<double, 2> x = parse_point(center_text);
  const ExprPtr h = fn.resolve();
  const auto spec = fn.resolve_spec();
  std::vector<DefectSample> samples;
  for (const double l : parse_sides(sides_text)) {
    DefectSample s = mean_value_defect(h, x, l, fam, quad, unit_square);
    if (spec) s.bound = defect_bound(*spec, x, l, fam).total();
    samples.push_back(s);
  }
  return samples;
}

int cmd_mvp_defect(const FunctionFlags& fn, const StencilFlags& flags,
                   const std::string& center_text,
                   const std::string& sides_text, int quad, bool unit_square,
                   const std::string& out_path, bool fit_only) {
  validate_quad(quad);
  const StencilFamily fam = flags.resolve();
  const std::vector<DefectSample> samples = collect_defect_samples(
      fn, fam, center_text, sides_text, quad, unit_square);

  std::string fit_line;
  try {
    const OrderFit fit = fit_order(samples);
    fit_line = "# slope=" + format_double15(fit.slope) +
               " intercept=" + format_double15(fit.intercept) +
               " r2=" + format_double15(fit.r2) +
               " samples=" + std::to_string(fit.sides.size());
  } catch (const Error& e) {
    if (e.code() != Errc::all_below_floor &&
        e.code() != Errc::insufficient_samples) {
      throw;
    }
    fit_line = std::string("# no order fit: ") + e.what();
  }

  std::ostringstream csv;
  if (!fit_only) {
    csv << "l,defect,bound,ratio\n";
    for (const DefectSample& s : samples) {
      csv << format_double(s.side) << ',' << format_double(s.defect) << ',';
      if (std::isnan(s.bound)) {
        csv << ',';
      } else {
        csv << format_double(s.bound) << ','
            << format_double(s.bound > 0 ? std::fabs(s.defect) / s.bound : 0);
      }
      csv << "\n";
    }
  }
  csv << fit_line << "\n";
  write_output(out_path, csv.str());
  return 0;
}

int cmd_mvp_sweep(const StencilFlags& flags, const std::string& center_text,
                  double l, int quad, const std::string& out_path) {
  validate_quad(quad);
  const StencilFamily fam = flags.resolve();
  const std::vector<SweepRow> rows =
      exactness_sweep(fam, parse_point(center_text), l, quad);
  std::ostringstream csv;
  csv << "kind,n,defect,closed_form,status\n";
  bool all_pass = true;
  for (const SweepRow& row : rows) {
    csv << (row.kind == BasisKind::re_part ? 'f' : 'g') << ',' << row.degree
        << ',' << format_double(row.measured) << ','
        << format_double(row.closed_value) << ','
        << (row.pass ? "ok" : "FAIL") << "\n";
    all_pass = all_pass && row.pass;
  }
  write_output(out_path, csv.str());
  if (!all_pass) {
    std::cerr << "sweep has failing rows\n";
    return 3;
  }
  return 0;
}

int cmd_report(bool quick, int threads, const std::string& stencil_file,
               const std::string& out_path) {
  if (!stencil_file.empty()) {
    // Validate up front; malformed files exit 1 with diagnostics before any
    // criterion runs.
    const StencilFamily fam = StencilFamily::load_file(stencil_file);
    std::cout << "stencil file ok: level " << fam.level().level << ", M = "
              << to_string(fam.renorm()) << "\n";
  }
  ReportOptions options;
  options.quick = quick;
  options.threads = threads;
  const std::vector<CriterionResult> results = run_acceptance(options);
  bool all = true;
  for (const CriterionResult& r : results) {
    std::cout << r.id << " " << (r.pass ? "PASS" : "FAIL") << " — " << r.name
              << " (" << format_double15(r.seconds) << " s)\n";
    if (!r.details.empty()) std::cout << "    " << r.details << "\n";
    all = all && r.pass;
  }
  const std::string json = report_json(results, options);
  if (!out_path.empty()) write_output(out_path, json + "\n");
  std::cout << (all ? "ALL PASS" : "FAILURES PRESENT") << "\n";
  return all ? 0 : 4;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{
      "dyadic — self-similar cell-average calculus on the unit square"};
  app.require_subcommand(1);
  app.fallthrough();  // global flags may follow the subcommand

  int threads = default_thread_count();
  app.add_option("--threads", threads,
                 "worker cap for data-parallel sweeps (env DYADIC_THREADS)");

  // ---- stencil ----
  auto* stencil = app.add_subcommand("stencil", "exact stencil constants");
  stencil->require_subcommand(1);

  auto* solve = stencil->add_subcommand("solve", "solve for coefficients");
  std::string solve_pairs;
  int solve_level_target = 1;
  bool solve_json = false;
  std::string solve_out;
  solve->add_option("--pairs", solve_pairs, "e.g. \"(0,1),(1,1)\"")
      ->required();
  solve->add_option("--level", solve_level_target, "target mean value level")
      ->required();
  solve->add_flag("--json", solve_json, "emit the solution set as JSON");
  solve->add_option("--out", solve_out, "save the family JSON here");

  auto* tpk = stencil->add_subcommand("tpk", "one exact stencil moment");
  std::string tpk_pair;
  int tpk_k = 0;
  tpk->add_option("--pair", tpk_pair, "e.g. \"(1,1)\"")->required();
  tpk->add_option("--k", tpk_k, "moment order")->required();

  auto* level_cmd = stencil->add_subcommand("level", "realized level");
  std::string level_pairs, level_coeffs;
  int level_kmax = 16;
  level_cmd->add_option("--pairs", level_pairs)->required();
  level_cmd->add_option("--coeffs", level_coeffs)->required();
  level_cmd->add_option("--kmax", level_kmax, "constraint check cap");

  auto* table4 = stencil->add_subcommand("table4", "the five worked systems");

  // ---- grid ----
  auto* grid = app.add_subcommand("grid", "dyadic grid tools");
  grid->require_subcommand(1);
  auto* averages = grid->add_subcommand("averages", "cell averages CSV");
  FunctionFlags grid_fn;
  int grid_m = 4, grid_quad = 12;
  std::string grid_out;
  averages->add_option("--expr", grid_fn.expr, "expression text");
  averages->add_option("--basis", grid_fn.basis, "f:4:@0.5,0.5 shorthand");
  averages->add_option("--m", grid_m, "finest level")->required();
  averages->add_option("--quad", grid_quad, "quadrature order");
  averages->add_option("--out", grid_out, "output CSV path");

  // ---- energy ----
  auto* energy_cmd = app.add_subcommand("energy", "discrete energy sweep");
  std::string energy_f, energy_g, energy_range = "1..6", energy_out;
  int energy_quad = 12;
  StencilFlags energy_stencil;
  energy_cmd->add_option("--f", energy_f, "first function")->required();
  energy_cmd->add_option("--g", energy_g, "second function")->required();
  energy_cmd->add_option("--m-range", energy_range, "levels, e.g. 1..8");
  energy_cmd->add_option("--quad", energy_quad, "quadrature order");
  energy_cmd->add_option("--out", energy_out, "output CSV path");
  add_stencil_flags(energy_cmd, energy_stencil);

  // ---- laplacian ----
  auto* lap = app.add_subcommand("laplacian", "discrete Laplacian field");
  FunctionFlags lap_fn;
  int lap_m = 5, lap_quad = 12;
  std::string lap_out;
  StencilFlags lap_stencil;
  lap->add_option("--expr", lap_fn.expr, "expression text");
  lap->add_option("--basis", lap_fn.basis, "f:4:@0.5,0.5 shorthand");
  lap->add_option("--m", lap_m, "level")->required();
  lap->add_option("--quad", lap_quad, "quadrature order");
  lap->add_option("--out", lap_out, "output CSV path");
  add_stencil_flags(lap, lap_stencil);

  // ---- mvp ----
  auto* mvp = app.add_subcommand("mvp", "mean value defect lab");
  mvp->require_subcommand(1);

  auto* defect = mvp->add_subcommand("defect", "defect ladder CSV + fit");
  FunctionFlags defect_fn;
  std::string defect_center = "0.5,0.5", defect_sides = "2^-3..2^-7",
              defect_out;
  int defect_quad = 12;
  bool defect_unit_square = false;
  defect->add_option("--expr", defect_fn.expr, "expression text");
  defect->add_option("--basis", defect_fn.basis, "f:4:@0.5,0.5 shorthand");
  defect->add_option("--center", defect_center, "square center");
  defect->add_option("--sides", defect_sides, "e.g. 2^-3..2^-7 or 0.125,0.0625");
  defect->add_option("--quad", defect_quad, "quadrature order");
  defect->add_flag("--unit-square", defect_unit_square,
                   "reject neighbors leaving [0,1]^2");
  defect->add_option("--out", defect_out, "output CSV path");
  StencilFlags defect_stencil;
  add_stencil_flags(defect, defect_stencil);

  auto* order = mvp->add_subcommand("order", "order fit only");
  FunctionFlags order_fn;
  std::string order_center = "0.5,0.5", order_sides = "2^-3..2^-7", order_out;
  int order_quad = 12;
  order->add_option("--expr", order_fn.expr, "expression text");
  order->add_option("--basis", order_fn.basis, "f:4:@0.5,0.5 shorthand");
  order->add_option("--center", order_center, "square center");
  order->add_option("--sides", order_sides, "side ladder");
  order->add_option("--quad", order_quad, "quadrature order");
  order->add_option("--out", order_out, "output path");
  StencilFlags order_stencil;
  add_stencil_flags(order, order_stencil);

  auto* sweep = mvp->add_subcommand("sweep", "basis exactness sweep");
  std::string sweep_center = "0.5,0.5", sweep_out;
  double sweep_l = 0.0625;
  int sweep_quad = 12;
  sweep->add_option("--l", sweep_l, "square side");
  sweep->add_option("--center", sweep_center, "square center");
  sweep->add_option("--quad", sweep_quad, "quadrature order");
  sweep->add_option("--out", sweep_out, "output CSV path");
  StencilFlags sweep_stencil;
  add_stencil_flags(sweep, sweep_stencil);

  // ---- report ----
  auto* report = app.add_subcommand("report", "run the acceptance suite");
  bool report_quick = false, report_full = false;
  std::string report_stencil, report_out;
  report->add_flag("--quick", report_quick, "fast sanity pass (levels <= 6)");
  report->add_flag("--full", report_full, "nominal ranges (default)");
  report->add_option("--stencil", report_stencil,
                     "validate this family file first");
  report->add_option("--out", report_out, "write the JSON verdict here");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : 1;
  }

  try {
    if (solve->parsed()) {
      return cmd_stencil_solve(solve_pairs, solve_level_target, solve_json,
                               solve_out);
    }
    if (tpk->parsed()) return cmd_stencil_tpk(tpk_pair, tpk_k);
    if (level_cmd->parsed()) {
      return cmd_stencil_level(level_pairs, level_coeffs, level_kmax);
    }
    if (table4->parsed()) return cmd_stencil_table4();
    if (averages->parsed()) {
      return cmd_grid_averages(grid_fn, grid_m, grid_quad, grid_out, threads);
    }
    if (energy_cmd->parsed()) {
      return cmd_energy(energy_f, energy_g, energy_stencil, energy_range,
                        energy_quad, energy_out, threads);
    }
    if (lap->parsed()) {
      return cmd_laplacian(lap_fn, lap_stencil, lap_m, lap_quad, lap_out,
                           threads);
    }
    if (defect->parsed()) {
      return cmd_mvp_defect(defect_fn, defect_stencil, defect_center,
                            defect_sides, defect_quad, defect_unit_square,
                            defect_out, false);
    }
    if (order->parsed()) {
      return cmd_mvp_defect(order_fn, order_stencil, order_center, order_sides,
                            order_quad, false, order_out, true);
    }
    if (sweep->parsed()) {
      return cmd_mvp_sweep(sweep_stencil, sweep_center, sweep_l, sweep_quad,
                           sweep_out);
    }
    if (report->parsed()) {
      return cmd_report(report_quick && !report_full, threads, report_stencil,
                        report_out);
    }
  } catch (const Error& e) {
    std::cerr << "error: " << e.what() << "\n";
    switch (e.code()) {
      case Errc::syntax:
      case Errc::unknown_function:
      case Errc::non_integer_exponent:
      case Errc::invalid_argument:
      case Errc::invalid_digit:
      case Errc::invalid_degree:
      case Errc::non_canonical_pair:
      case Errc::duplicate_pair:
        return 1;
      default:
        return 3;
    }
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 3;
  }
  return 0;
}
