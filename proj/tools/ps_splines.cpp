#include <cstdio>
#include <fstream>
#include <iostream>
#include <memory>
#include <sstream>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "json.hpp"
#include "pss/error.hpp"
#include "pss/problems.hpp"
#include "pss/verify.hpp"

using namespace pss;

namespace {

struct RunConfig {
  std::string mesh;
  std::string space = "all";
  std::vector<int> levels;
  std::string strategy = "prefer-barycenter";
  QuadratureDegrees quad;
  std::string out;
  std::string function = "all";
  int samples = 50;
  int resolution = 0;
};

SplitStrategy parse_strategy(const std::string& s) {
  if (s == "prefer-barycenter") return SplitStrategy::PreferBarycenter;
  if (s == "incenter-on-t2") return SplitStrategy::IncenterOnT2;
  throw InvalidArgument("unknown split strategy '" + s + "'");
}

std::vector<int> parse_spaces(const std::string& s) {
  if (s == "all") return {0, 1, 2};
  if (s == "0" || s == "1" || s == "2") return {s[0] - '0'};
  throw InvalidArgument("--space must be 0, 1, 2 or all");
}

void check_levels(const std::vector<int>& levels) {
  if (levels.empty()) throw InvalidArgument("no levels given");
  for (std::size_t i = 0; i < levels.size(); ++i) {
    if (levels[i] < 1) throw InvalidArgument("levels must be positive");
    if (i > 0 && levels[i] <= levels[i - 1]) throw InvalidArgument("levels must be increasing");
  }
}

void write_file(const std::string& path, const std::string& text) {
  std::ofstream f(path, std::ios::binary);
  if (!f) throw InvalidArgument("cannot write '" + path + "'");
  f << text;
  if (!f) throw InvalidArgument("cannot write '" + path + "'");
}

std::string json_path(const std::string& csv) {
  const auto dot = csv.rfind('.');
  const auto slash = csv.find_last_of("/\\");
  if (dot == std::string::npos || (slash != std::string::npos && dot < slash)) return csv + ".json";
  return csv.substr(0, dot) + ".json";
}

std::shared_ptr<const PSRefinement> refine(const Triangulation& macro, int level,
                                           const RunConfig& cfg) {
  return std::make_shared<const PSRefinement>(
      build_ps(uniform_refine(macro, level), parse_strategy(cfg.strategy)));
}

int run_dims(const RunConfig& cfg) {
  check_levels(cfg.levels);
  const Triangulation macro = load_mesh_file(cfg.mesh);
  std::printf("%5s %7s %7s %7s %6s %8s %8s %8s %8s %8s %8s %8s\n", "level", "n_v", "n_e", "n_t",
              "n_sym", "dim_S0", "dim_S1", "dim_S2", "f_S0", "f_S1", "f_S2", "dim_CT");
  bool ok = true;
  for (int level : cfg.levels) {
    const auto ps = refine(macro, level, cfg);
    const SplineSpaces spaces = build_spaces(ps);
    const DimensionFormulas f = dimension_formulas(macro, level, ps->n_sym());
    std::printf("%5d %7d %7d %7d %6d %8d %8d %8d %8lld %8lld %8lld %8lld\n", level,
                ps->mesh.n_vertices(), ps->mesh.n_edges(), ps->mesh.n_triangles(), ps->n_sym(),
                spaces.dim(0), spaces.dim(1), spaces.dim(2), f.s0, f.s1, f.s2, f.clough_tocher);
    ok = ok && spaces.dim(0) == f.s0 && spaces.dim(1) == f.s1 && spaces.dim(2) == f.s2;
  }
  if (!ok) {
    std::fprintf(stderr, "error: dimension formula mismatch\n");
    return 2;
  }
  return 0;
}

int run_problem(ProblemKind kind, const RunConfig& cfg) {
  const Triangulation macro = load_mesh_file(cfg.mesh);
  ConvergenceOptions opt;
  opt.levels = cfg.levels;
  opt.spaces = parse_spaces(cfg.space);
  opt.strategy = parse_strategy(cfg.strategy);
  opt.quad = cfg.quad;
  check_levels(opt.levels);
  const auto rows = convergence_study(default_case(kind), macro, opt);
  const std::string csv = convergence_csv(rows);
  if (cfg.out.empty()) {
    std::fputs(csv.c_str(), stdout);
  } else {
    write_file(cfg.out, csv);
    write_file(json_path(cfg.out), convergence_json(rows, opt));
  }
  return 0;
}

std::vector<int> function_ids(const SplineBasis& basis, const std::string& which) {
  std::vector<int> ids;
  if (which == "all") {
    for (int i = 0; i < basis.size(); ++i) ids.push_back(i);
    return ids;
  }
  if (which.size() >= 2 && (which[0] == 'v' || which[0] == 'e')) {
    std::size_t used = 0;
    int k = -1;
    try {
      k = std::stoi(which.substr(1), &used);
    } catch (const std::exception&) {
      used = 0;
    }
    if (used == which.size() - 1 && k >= 0) {
      const int id = which[0] == 'v' ? k : basis.n_vertex_functions() + k;
      const int limit = which[0] == 'v' ? basis.n_vertex_functions() : basis.n_edge_functions();
      if (k >= limit) {
        throw InvalidArgument("function " + which + " out of range (" + which.substr(0, 1) +
                              "0.." + which.substr(0, 1) + std::to_string(limit - 1) + ")");
      }
      return {id};
    }
  }
  throw InvalidArgument("--function must be v<i>, e<i> or all");
}

int run_basis_dump(const RunConfig& cfg) {
  if (cfg.levels.size() != 1) throw InvalidArgument("basis-dump takes a single --level");
  check_levels(cfg.levels);
  if (cfg.samples < 1) throw InvalidArgument("--samples must be positive");
  if (cfg.resolution < 0) throw InvalidArgument("--resolution must be nonnegative");
  const Triangulation macro = load_mesh_file(cfg.mesh);
  const auto ps = refine(macro, cfg.levels[0], cfg);
  const SplineBasis basis = build_basis(ps);
  const std::vector<int> ids = function_ids(basis, cfg.function);

  nlohmann::json doc;
  doc["level"] = cfg.levels[0];
  doc["n_vertex_functions"] = basis.n_vertex_functions();
  doc["n_edge_functions"] = basis.n_edge_functions();
  doc["functions"] = nlohmann::json::parse(basis_dump_json(basis, ids));
  if (cfg.resolution > 0) {
    const int n = cfg.resolution;
    for (std::size_t k = 0; k < ids.size(); ++k) {
      nlohmann::json samples = nlohmann::json::array();
      const SplineFunction& f = basis.family.functions[ids[k]];
      for (const auto& [mid, c] : f.patches) {
        const Triangle t = ps->micro_triangle(mid);
        const BBPatch patch{t, 3, std::vector<double>(c.begin(), c.end())};
        for (int a = 0; a <= n; ++a) {
          for (int b = 0; a + b <= n; ++b) {
            const Point p = from_barycentric(
                t, {static_cast<double>(a) / n, static_cast<double>(b) / n,
                    static_cast<double>(n - a - b) / n});
            samples.push_back({p.x, p.y, bb_eval(patch, p)});
          }
        }
      }
      doc["functions"][k]["samples"] = samples;
    }
  }

  const ElementIndex index = element_index(basis.family);
  double worst = 0.0;
  for (const Point& p : sample_domain(ps->mesh, cfg.samples, 1)) {
    double sum = 0.0;
    for (const auto& [i, v] : eval_all(basis.family, index, p)) sum += v;
    worst = std::max(worst, std::abs(sum - 1.0));
  }
  doc["partition_of_unity"] = {{"points", cfg.samples}, {"max_deviation", worst}};

  const std::string text = doc.dump() + "\n";
  if (cfg.out.empty()) {
    std::fputs(text.c_str(), stdout);
  } else {
    write_file(cfg.out, text);
  }
  std::fprintf(stderr, "partition of unity: max |sum - 1| = %.3e over %d points\n", worst,
               cfg.samples);
  if (!(worst <= 1e-12)) {
    std::fprintf(stderr, "error: partition of unity violated\n");
    return 2;
  }
  return 0;
}

int run_check(const RunConfig& cfg) {
  check_levels(cfg.levels);
  const Triangulation macro = load_mesh_file(cfg.mesh);
  std::string failure;
  for (int level : cfg.levels) {
    const auto ps = refine(macro, level, cfg);
    const SplineSpaces spaces = build_spaces(ps);
    std::printf("level %d: %d triangles, n_sym %d\n", level, ps->mesh.n_triangles(), ps->n_sym());

    const EntityCounts predicted = predicted_counts(macro, level);
    const bool counts_ok = predicted == ps->mesh.counts();
    std::printf("  entity counts     %s\n", counts_ok ? "ok" : "MISMATCH");
    if (!counts_ok && failure.empty()) failure = "entity counts";

    const DimensionFormulas f = dimension_formulas(macro, level, ps->n_sym());
    const bool dims_ok = spaces.dim(0) == f.s0 && spaces.dim(1) == f.s1 && spaces.dim(2) == f.s2;
    std::printf("  dimensions        %d %d %d  %s\n", spaces.dim(0), spaces.dim(1), spaces.dim(2),
                dims_ok ? "ok" : "MISMATCH");
    if (!dims_ok && failure.empty()) failure = "dimension formulas";

    if (ps->n_micro() <= 400) {
      const DimensionOracle oracle = space_dimension_oracle(*ps);
      const bool ok = !oracle.ambiguous && oracle.dimension == spaces.dim(0);
      std::printf("  nullspace oracle  %d  %s\n", oracle.dimension, ok ? "ok" : "MISMATCH");
      if (!ok && failure.empty()) failure = "nullspace dimension";
    } else {
      std::printf("  nullspace oracle  skipped (%d micro-triangles)\n", ps->n_micro());
    }

    bool sums_ok = true;
    for (const ExtractionMatrix* h : {&spaces.h1, &spaces.h2}) {
      for (const Rational& s : h->column_sums()) sums_ok = sums_ok && s == Rational(1);
    }
    std::printf("  extraction sums   %s\n", sums_ok ? "ok" : "FAIL");
    if (!sums_ok && failure.empty()) failure = "extraction column sums";

    for (int r = 0; r < 3; ++r) {
      const PropertyReport rep = check_properties(spaces, r);
      std::string which;
      const bool ok = rep.pass(&which);
      std::printf("  S%d (%d functions) pu %.1e  min %.1e  C1 %.1e  C2 %.1e/%.1e/%.1e  %s\n", r,
                  rep.functions, rep.pu_error, rep.min_value, rep.c1, rep.c2_split_point,
                  rep.c2_split_edges, rep.c2_sym, ok ? "ok" : ("FAIL: " + which).c_str());
      if (!ok && failure.empty()) failure = which + " in S" + std::to_string(r);
    }
  }
  if (!failure.empty()) {
    std::fprintf(stderr, "error: %s\n", failure.c_str());
    return 2;
  }
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Powell-Sabin C1 cubic splines: bases, extraction and Galerkin experiments"};
  app.require_subcommand(1);
  RunConfig cfg;

  auto add_common = [&](CLI::App* sub) {
    sub->add_option("--mesh", cfg.mesh, "macro mesh JSON file")->required()->check(CLI::ExistingFile);
    sub->add_option("--strategy", cfg.strategy, "split-point strategy")
        ->check(CLI::IsMember({"prefer-barycenter", "incenter-on-t2"}));
  };
  auto* dims = app.add_subcommand("dims", "dimensions of S0, S1, S2 per level");
  add_common(dims);
  dims->add_option("--levels,--level", cfg.levels, "refinement levels (default 1,2,4,8)")
      ->delimiter(',');

  std::vector<std::pair<CLI::App*, ProblemKind>> problems;
  for (ProblemKind kind : {ProblemKind::LeastSquares, ProblemKind::Poisson, ProblemKind::Biharmonic}) {
    auto* sub = app.add_subcommand(problem_name(kind), "convergence study for the " +
                                                           problem_name(kind) + " problem");
    add_common(sub);
    sub->add_option("--levels,--level", cfg.levels, "refinement levels (default 1,2,4,8)")
        ->delimiter(',');
    sub->add_option("--space", cfg.space, "0, 1, 2 or all");
    sub->add_option("--out", cfg.out, "CSV output path; a JSON mirror is written next to it");
    sub->add_option("--quad-assembly", cfg.quad.assembly, "quadrature degree for matrices")
        ->check(CLI::Range(1, 20));
    sub->add_option("--quad-norms", cfg.quad.norms, "quadrature degree for loads and errors")
        ->check(CLI::Range(1, 20));
    problems.emplace_back(sub, kind);
  }

  auto* dump = app.add_subcommand("basis-dump", "dump S0 basis functions as JSON");
  add_common(dump);
  dump->add_option("--level", cfg.levels, "refinement level")->expected(1);
  dump->add_option("--function", cfg.function, "v<i>, e<i> or all");
  dump->add_option("--samples", cfg.samples, "points for the partition-of-unity check");
  dump->add_option("--resolution", cfg.resolution, "per-micro-triangle sampling of each function");
  dump->add_option("--out", cfg.out, "output path (default stdout)");

  auto* check = app.add_subcommand("check", "run the property suite");
  add_common(check);
  check->add_option("--levels,--level", cfg.levels, "refinement levels (default 1)")->delimiter(',');

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : 1;
  }

  try {
    if (*dims) {
      if (cfg.levels.empty()) cfg.levels = {1, 2, 4, 8};
      return run_dims(cfg);
    }
    for (const auto& [sub, kind] : problems) {
      if (*sub) {
        if (cfg.levels.empty()) cfg.levels = {1, 2, 4, 8};
        return run_problem(kind, cfg);
      }
    }
    if (*dump) {
      if (cfg.levels.empty()) cfg.levels = {1};
      return run_basis_dump(cfg);
    }
    if (*check) {
      if (cfg.levels.empty()) cfg.levels = {1};
      return run_check(cfg);
    }
  } catch (const ParseError& e) {
    std::fprintf(stderr, "error: %s\n", e.what());
    return 1;
  } catch (const MeshError& e) {
    std::fprintf(stderr, "error: invalid mesh: %s\n", e.what());
    return 1;
  } catch (const InvalidArgument& e) {
    std::fprintf(stderr, "error: %s\n", e.what());
    return 1;
  } catch (const SolverError& e) {
    std::fprintf(stderr, "error: solver: %s\n", e.what());
    return 2;
  } catch (const GeometryError& e) {
    std::fprintf(stderr, "error: geometry: %s\n", e.what());
    return 2;
  } catch (const ConstructionError& e) {
    std::fprintf(stderr, "error: construction: %s\n", e.what());
    return 2;
  } catch (const std::exception& e) {
    std::fprintf(stderr, "error: %s\n", e.what());
    return 2;
  }
  return 0;
}
