// Command-line driver: seeded graph generation, LP transform analysis,
// null-model diagnostics and graphon estimation, emitting machine-readable
// CSV/JSON artifacts. Exit codes: 0 success, 1 internal error, 2 usage or
// input error.

#include <CLI11.hpp>
#include <cstdint>
#include <filesystem>
#include <iostream>
#include <map>
#include <string>
#include <vector>

#include "grafield/grafield.hpp"

namespace fs = std::filesystem;
using namespace grafield;

namespace {

struct UsageError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

struct GeneratorOptions {
  std::string kind;
  int n = 0;
  double p = -1.0;
  std::vector<int> sizes;
  std::vector<double> prob_matrix;
  std::int64_t edges = 0;
  bool directed = false;
  std::uint64_t seed = 0;
};

struct InputOptions {
  std::string edge_list_path;
  std::string adjacency_path;
  GeneratorOptions gen;
  bool expected = false;
  bool directed = false;
  bool order_by_degree = false;
};

void add_generator_options(CLI::App* cmd, GeneratorOptions& g) {
  cmd->add_option("--kind", g.kind, "generator kind: er | bipartite | sbm | null");
  cmd->add_option("--n", g.n, "node count (er, null)");
  cmd->add_option("--p", g.p, "edge probability (er, bipartite)");
  cmd->add_option("--sizes", g.sizes, "group/block sizes, e.g. 40,60")->delimiter(',');
  cmd->add_option("--prob-matrix", g.prob_matrix,
                  "row-major block edge probabilities, e.g. .6,.1,.1,.1")
      ->delimiter(',');
  cmd->add_option("--edges", g.edges, "number of edge draws (null kind)");
  cmd->add_option("--seed", g.seed, "random seed");
}

GeneratorSpec make_spec(const GeneratorOptions& o) {
  GeneratorSpec spec;
  spec.n = o.n;
  spec.p = o.p;
  spec.sizes = o.sizes;
  spec.directed = o.directed;
  spec.seed = o.seed;
  if (o.kind == "er") {
    spec.kind = GeneratorKind::er;
  } else if (o.kind == "bipartite") {
    spec.kind = GeneratorKind::bipartite;
    if (spec.sizes.empty() && o.n > 0)  // split evenly when only --n is given
      spec.sizes = {o.n / 2, o.n - o.n / 2};
  } else if (o.kind == "sbm") {
    spec.kind = GeneratorKind::sbm;
    const auto blocks = o.sizes.size();
    if (o.prob_matrix.size() != blocks * blocks)
      throw UsageError("--prob-matrix needs sizes^2 row-major entries");
    spec.block_probs.resize(static_cast<Eigen::Index>(blocks), static_cast<Eigen::Index>(blocks));
    for (size_t a = 0; a < blocks; ++a)
      for (size_t b = 0; b < blocks; ++b)
        spec.block_probs(a, b) = o.prob_matrix[a * blocks + b];
  } else if (o.kind == "null") {
    spec.kind = GeneratorKind::null_model;
  } else {
    throw UsageError("unknown --kind '" + o.kind + "' (er | bipartite | sbm | null)");
  }
  return spec;
}

Graph generate_graph(const GeneratorOptions& o, bool expected) {
  const GeneratorSpec spec = make_spec(o);
  if (spec.kind == GeneratorKind::null_model) {
    if (expected) throw UsageError("--expected is not defined for the null sampler");
    if (o.n < 2 || o.edges < 1) throw UsageError("null kind needs --n >= 2 and --edges >= 1");
    const auto m = Marginal::from_probs(Eigen::VectorXd::Constant(o.n, 1.0 / o.n));
    return sample_null(m, m, o.edges, o.seed);
  }
  return expected ? expected_graph(spec) : sample_generator(spec);
}

std::string read_existing_file(const std::string& path) {
  if (!fs::exists(path)) throw UsageError("missing input file: " + path);
  return read_file(path);
}

Graph load_graph(const InputOptions& in) {
  const int sources = (!in.edge_list_path.empty() ? 1 : 0) +
                      (!in.adjacency_path.empty() ? 1 : 0) + (!in.gen.kind.empty() ? 1 : 0);
  if (sources != 1)
    throw UsageError("exactly one input source required: --input, --adjacency or --kind");
  GeneratorOptions gen = in.gen;
  gen.directed = in.directed;
  Graph g = !in.edge_list_path.empty()
                ? parse_edge_list(read_existing_file(in.edge_list_path), in.directed)
            : !in.adjacency_path.empty()
                ? parse_adjacency_csv(read_existing_file(in.adjacency_path), in.directed)
                : generate_graph(gen, in.expected);
  if (in.order_by_degree) g = g.order_by_degree();
  return g;
}

void add_input_options(CLI::App* cmd, InputOptions& in) {
  cmd->add_option("--input", in.edge_list_path, "edge-list file: 'src dst [weight]' per line");
  cmd->add_option("--adjacency", in.adjacency_path, "adjacency CSV file: n rows of n entries");
  add_generator_options(cmd, in.gen);
  cmd->add_flag("--expected", in.expected, "use the expected (noise-free) generator graph");
  cmd->add_flag("--directed", in.directed, "directed input / directed sampling");
  cmd->add_flag("--order-by-degree", in.order_by_degree,
                "re-index nodes by decreasing total degree before analysis");
}

void write_artifacts(const fs::path& out_dir,
                     const std::map<std::string, std::string>& files) {
  fs::create_directories(out_dir);
  for (const auto& [name, content] : files) {
    atomic_write_file(out_dir / name, content);
    std::cout << "wrote " << (out_dir / name).string() << "\n";
  }
}

struct BasisPair {
  Marginal mx, my;
  LPBasis bx, by;
  LPMatrix lp;
};

BasisPair transform_pipeline(const Graph& g, int max_degree, bool full_rank) {
  BasisPair p;
  std::tie(p.mx, p.my) = marginals(g);
  const int dx = full_rank ? static_cast<int>(p.mx.support.size()) - 1
                           : std::min(max_degree, static_cast<int>(p.mx.support.size()) - 1);
  const int dy = full_rank ? static_cast<int>(p.my.support.size()) - 1
                           : std::min(max_degree, static_cast<int>(p.my.support.size()) - 1);
  p.bx = build_basis(p.mx, dx);
  p.by = build_basis(p.my, dy);
  p.lp = lp_coefficients(joint_pmf(g), p.bx, p.by);
  return p;
}

int cmd_analyze(const InputOptions& in, const std::string& out_dir, int max_degree,
                bool full_rank, bool no_selection, int resolution, bool clip) {
  const Graph g = load_graph(in);
  const BasisPair p = transform_pipeline(g, max_degree, full_rank);
  const Selection sel = no_selection ? full_selection(p.lp) : select_components(p.lp);
  const DensityField field = reconstruct_field(p.lp, sel, p.bx, p.by);
  const Grid grid = evaluate_grid(field, resolution, clip);

  std::ostringstream summary;
  summary << "{\"n\": " << g.n() << ", \"directed\": " << (g.directed() ? "true" : "false")
          << ", \"total_weight\": " << detail::fmt_real(g.total_weight())
          << ", \"m_x\": " << p.bx.m << ", \"m_y\": " << p.by.m
          << ", \"k_star\": " << sel.k_star
          << ", \"lpinfor_full\": " << detail::fmt_real(lpinfor(p.lp))
          << ", \"lpinfor_selected\": " << detail::fmt_real(lpinfor(p.lp, sel)) << "}\n";

  write_artifacts(out_dir,
                  {{"basis.json", "{\"x\": " + basis_json(p.bx) + ", \"y\": " +
                                      basis_json(p.by) + "}\n"},
                   {"coefficients.csv", coefficients_csv(p.lp)},
                   {"selection.json", selection_json(sel)},
                   {"field_grid.csv", grid_csv(grid)},
                   {"summary.json", summary.str()}});
  return 0;
}

int cmd_diagnose(const InputOptions& in, const std::string& out_dir,
                 std::vector<int> grid_dims, const std::string& test_kind, bool null_band) {
  (void)null_band;  // the correlogram always carries the 1.96/sqrt(N) band
  const Graph g = load_graph(in);
  if (grid_dims.empty()) grid_dims = {10, 10};
  if (grid_dims.size() != 2 || grid_dims[0] < 1 || grid_dims[1] < 1)
    throw UsageError("--grid expects two positive integers J K");
  const auto [mx, my] = marginals(g);
  const LPBasis bx = build_basis(mx, std::min(grid_dims[0],
                                              static_cast<int>(mx.support.size()) - 1));
  const LPBasis by = build_basis(my, std::min(grid_dims[1],
                                              static_cast<int>(my.support.size()) - 1));
  const LPMatrix lp = lp_coefficients(joint_pmf(g), bx, by);

  TestResult result;
  if (test_kind == "full") {
    result = lpinfor_test(lp);
  } else if (test_kind == "selected") {
    result = lpinfor_test(lp, select_components(lp));
  } else {
    throw UsageError("--test must be 'full' or 'selected'");
  }

  write_artifacts(out_dir, {{"correlogram.csv", correlogram_csv(correlogram(lp))},
                            {"test.json", test_result_json(result)}});
  return 0;
}

int cmd_graphon(const InputOptions& in, const std::string& out_dir,
                const std::string& marginal_mode, bool full_rank, bool raw_density,
                bool zero_diagonal, int resolution, int max_degree) {
  const Graph g = load_graph(in);
  MarginalMode mm;
  if (marginal_mode == "smoothed") {
    mm = MarginalMode::smoothed;
  } else if (marginal_mode == "empirical") {
    mm = MarginalMode::empirical;
  } else {
    throw UsageError("--marginals must be 'empirical' or 'smoothed'");
  }
  GraphonEstimate w = estimate_graphon(
      g, mm, full_rank ? SelectionMode::full_rank : SelectionMode::selected, !raw_density,
      max_degree);
  if (zero_diagonal)
    for (int x = 0; x < g.n(); ++x) w.field.cell_values(x, x) = 0.0;
  if (w.over_one_cells > 0)
    std::cerr << "warning: " << w.over_one_cells
              << " cells exceed 1 on the probability scale (model misfit or weighted input)\n";

  write_artifacts(out_dir, {{"graphon_grid.csv", grid_csv(evaluate_graphon_grid(w, resolution))},
                            {"graphon_meta.json", graphon_metadata_json(w)}});
  return 0;
}

int cmd_generate(const GeneratorOptions& gen, bool directed, const std::string& out_path) {
  GeneratorOptions o = gen;
  o.directed = directed;
  const Graph g = generate_graph(o, /*expected=*/false);
  atomic_write_file(out_path, write_edge_list(g));
  std::cout << "wrote " << out_path << "\n";
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"LP graph transforms, correlation density fields, null diagnostics "
               "and smooth graphon estimates"};
  app.require_subcommand(1);

  // generate
  auto* generate = app.add_subcommand("generate", "sample a seeded random graph to an edge list");
  GeneratorOptions gen_opts;
  bool gen_directed = false;
  std::string gen_out;
  add_generator_options(generate, gen_opts);
  generate->add_flag("--directed", gen_directed, "sample a directed graph");
  generate->add_option("--out", gen_out, "output edge-list path")->required();

  // analyze
  auto* analyze = app.add_subcommand("analyze", "basis, transform, selection and field grid");
  InputOptions analyze_in;
  std::string analyze_out = ".";
  int analyze_degree = 10, analyze_res = 100;
  bool analyze_full_rank = false, analyze_no_selection = false, analyze_clip = false;
  add_input_options(analyze, analyze_in);
  analyze->add_option("--max-degree", analyze_degree, "basis functions per axis (default 10)");
  analyze->add_flag("--full-rank", analyze_full_rank, "use every available basis function");
  analyze->add_flag("--no-selection", analyze_no_selection, "keep all computed coefficients");
  analyze->add_option("--resolution", analyze_res, "field grid resolution (default 100)");
  analyze->add_flag("--clip", analyze_clip, "clip negative grid values at zero");
  analyze->add_option("--out-dir", analyze_out, "output directory");

  // diagnose
  auto* diagnose = app.add_subcommand("diagnose", "correlogram and the chi-square null test");
  InputOptions diag_in;
  std::string diag_out = ".", diag_test = "full";
  std::vector<int> diag_grid;
  bool diag_null_band = false;
  add_input_options(diagnose, diag_in);
  diagnose->add_option("--grid", diag_grid, "coefficient grid J K")->expected(2);
  diagnose->add_option("--test", diag_test, "test variant: full | selected");
  diagnose->add_flag("--null-band", diag_null_band, "emit the 95% null band (always on)");
  diagnose->add_option("--out-dir", diag_out, "output directory");

  // graphon
  auto* graphon = app.add_subcommand("graphon", "smooth graphon estimate on a grid");
  InputOptions graphon_in;
  std::string graphon_out = ".", graphon_marginals = "smoothed";
  int graphon_res = 100, graphon_degree = 10;
  bool graphon_full_rank = false, graphon_raw = false, graphon_zero_diag = false;
  add_input_options(graphon, graphon_in);
  graphon->add_option("--marginals", graphon_marginals, "empirical | smoothed (default)");
  graphon->add_option("--max-degree", graphon_degree, "basis functions per axis (default 10)");
  graphon->add_flag("--full-rank", graphon_full_rank, "use every available basis function");
  graphon->add_flag("--raw-density", graphon_raw, "skip the total-weight scale");
  graphon->add_flag("--zero-diagonal", graphon_zero_diag, "zero self-pair cells in the output");
  graphon->add_option("--resolution", graphon_res, "grid resolution (default 100)");
  graphon->add_option("--out-dir", graphon_out, "output directory");

  try {
    app.parse(argc, argv);
    if (generate->parsed())
      return cmd_generate(gen_opts, gen_directed, gen_out);
    if (analyze->parsed())
      return cmd_analyze(analyze_in, analyze_out, analyze_degree, analyze_full_rank,
                         analyze_no_selection, analyze_res, analyze_clip);
    if (diagnose->parsed())
      return cmd_diagnose(diag_in, diag_out, diag_grid, diag_test, diag_null_band);
    if (graphon->parsed())
      return cmd_graphon(graphon_in, graphon_out, graphon_marginals, graphon_full_rank,
                         graphon_raw, graphon_zero_diag, graphon_res, graphon_degree);
    return 2;
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::CallForVersion& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  } catch (const UsageError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  } catch (const ParseError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  } catch (const std::invalid_argument& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  } catch (const std::domain_error& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  } catch (const std::exception& e) {
    std::cerr << "internal error: " << e.what() << "\n";
    return 1;
  }
}
