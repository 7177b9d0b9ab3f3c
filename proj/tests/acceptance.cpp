// Acceptance suite: one PASS/FAIL line per criterion, nonzero exit on any
// failure.

#include <chrono>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <functional>
#include <map>
#include <numbers>
#include <random>
#include <sstream>
#include <string>
#include <vector>

#include "coword/export.hpp"
#include "coword/factors.hpp"
#include "coword/layout.hpp"
#include "coword/pipeline.hpp"
#include "coword/termstats.hpp"
#include "coword/vectorspace.hpp"
#include "oracles.hpp"
#include "test_helpers.hpp"

using namespace coword;
using coword::testing::labels;
using coword::testing::random_counts;
using coword::testing::source_dir;
using coword::testing::TempDir;
namespace fs = std::filesystem;

namespace {

using Clock = std::chrono::steady_clock;

double seconds_since(Clock::time_point start) {
  return std::chrono::duration<double>(Clock::now() - start).count();
}

/// Collects failures for one criterion.
class Verdict {
 public:
  void require(bool ok, const std::string& what) {
    if (!ok && failures_.size() < 5) failures_.push_back(what);
    if (!ok) ++failed_;
  }
  void note(const std::string& s) { notes_.push_back(s); }
  bool ok() const { return failed_ == 0; }

  std::string detail() const {
    std::string out;
    for (const auto& n : notes_) out += (out.empty() ? "" : "; ") + n;
    if (failed_ > 0) {
      out += (out.empty() ? "" : "; ") + std::to_string(failed_) + " check(s) failed";
      for (const auto& f : failures_) out += " | " + f;
    }
    return out;
  }

 private:
  std::vector<std::string> failures_;
  std::vector<std::string> notes_;
  std::size_t failed_ = 0;
};

std::string fmt(double v, const char* spec = "%.3g") {
  char buf[64];
  std::snprintf(buf, sizeof buf, spec, v);
  return buf;
}

WordDocMatrix random_word_doc(std::mt19937_64& rng, int max_rows, int max_cols, int max_count) {
  const int r = 1 + static_cast<int>(rng() % static_cast<std::uint64_t>(max_rows));
  const int c = 1 + static_cast<int>(rng() % static_cast<std::uint64_t>(max_cols));
  return WordDocMatrix::from_counts(random_counts(rng, r, c, max_count), labels("d", r),
                                    labels("t", c));
}

// ---------------------------------------------------------------------------

void tfidf_oracle(Verdict& v) {
  std::mt19937_64 rng(101);
  double worst = 0.0;
  double elapsed = 0.0;
  for (int trial = 0; trial < 200; ++trial) {
    const int r = 1 + static_cast<int>(rng() % 10);
    const int c = 2 + static_cast<int>(rng() % 19);
    CountMatrix counts = random_counts(rng, r, c, 9);
    for (int i = 0; i < r; ++i) counts(i, 0) = 1 + static_cast<std::int64_t>(rng() % 9);
    const auto m = WordDocMatrix::from_counts(counts, labels("d", r), labels("t", c));
    const auto start = Clock::now();
    const RealMatrix t = tfidf_matrix(m);
    elapsed += seconds_since(start);
    for (Eigen::Index k = 0; k < t.cols(); ++k) {
      int df = 0;
      for (Eigen::Index i = 0; i < t.rows(); ++i) df += counts(i, k) > 0;
      for (Eigen::Index i = 0; i < t.rows(); ++i) {
        const double want =
            static_cast<double>(counts(i, k)) * std::log2(static_cast<double>(r) / df);
        worst = std::max(worst, std::abs(t(i, k) - want));
      }
    }
    for (Eigen::Index i = 0; i < t.rows(); ++i)
      v.require(t(i, 0) == 0.0, "DOCFREQ = n column not exactly 0");
  }
  v.require(worst < 1e-12, "max |error| " + fmt(worst));
  v.require(elapsed < 1.0, "runtime " + fmt(elapsed) + " s");
  v.note("200 matrices, max |error| " + fmt(worst) + ", " + fmt(elapsed) + " s");
}

void chi_square_oracle(Verdict& v) {
  std::mt19937_64 rng(102);
  double worst = 0.0;
  double elapsed = 0.0;
  for (int trial = 0; trial < 200; ++trial) {
    const auto m = random_word_doc(rng, 6, 6, 9);
    for (bool yates : {false, true}) {
      const auto start = Clock::now();
      const auto report = chi_square(m, yates ? YatesRule::ObservedBelow5 : YatesRule::Off);
      elapsed += seconds_since(start);
      const auto oracle = oracle::chi_square(m.counts(), yates);
      worst = std::max(worst, std::abs(report.total - oracle.total));
      for (Eigen::Index i = 0; i < report.per_cell.rows(); ++i)
        for (Eigen::Index k = 0; k < report.per_cell.cols(); ++k)
          worst = std::max(worst, std::abs(report.per_cell(i, k) - oracle.cells[i][k]));
    }
    v.require(chi_square(m, YatesRule::ObservedBelow5).total <=
                  chi_square(m, YatesRule::Off).total,
              "Yates-on total exceeds Yates-off total");
  }
  CountMatrix ex(2, 2);
  ex << 10, 20, 30, 40;
  const auto example = WordDocMatrix::from_counts(ex, {"d1", "d2"}, {"a", "b"});
  const double lib = chi_square(example, YatesRule::Off).total;
  const double ref = oracle::chi_square(ex, false).total;
  v.require(std::abs(lib - ref) < 1e-9, "2x2 example " + fmt(lib, "%.6f") + " vs oracle " +
                                            fmt(ref, "%.6f"));
  v.require(worst < 1e-9, "max |error| " + fmt(worst));
  v.require(elapsed < 1.0, "runtime " + fmt(elapsed) + " s");
  v.note("2x2 example " + fmt(lib, "%.5f") + " (oracle " + fmt(ref, "%.5f") + ")");
  v.note("max |error| " + fmt(worst) + ", " + fmt(elapsed) + " s");
}

void margin_property(Verdict& v) {
  std::mt19937_64 rng(103);
  double worst = 0.0;
  for (int trial = 0; trial < 400; ++trial) {
    const auto m = random_word_doc(rng, 10, 20, 9);
    const RealMatrix e = expected_matrix(m).values;
    for (Eigen::Index i = 0; i < e.rows(); ++i)
      worst = std::max(worst, std::abs(e.row(i).sum() -
                                        static_cast<double>(m.row_margins()[i])));
    for (Eigen::Index k = 0; k < e.cols(); ++k)
      worst = std::max(worst, std::abs(e.col(k).sum() -
                                        static_cast<double>(m.col_margins()[k])));
  }
  v.require(worst < 1e-9, "margin error " + fmt(worst));
  for (std::int64_t c : {1, 3, 7}) {
    const auto u = WordDocMatrix::from_counts(CountMatrix::Constant(4, 5, c), labels("d", 4),
                                              labels("t", 5));
    const auto oe = obs_exp(u);
    v.require((oe.values.array() == 1.0).all(), "uniform obs/exp not all ones");
  }
  v.note("400 matrices, max margin error " + fmt(worst));
}

void pearson_centered_cosine(Verdict& v) {
  std::mt19937_64 rng(104);
  std::normal_distribution<double> d(1.0, 2.0);
  double worst = 0.0;
  for (int trial = 0; trial < 500; ++trial) {
    const int n = 2 + static_cast<int>(rng() % 40);
    RealVector x(n), y(n);
    for (int i = 0; i < n; ++i) {
      x(i) = d(rng);
      y(i) = d(rng);
    }
    const RealVector xc = x.array() - x.mean();
    const RealVector yc = y.array() - y.mean();
    worst = std::max(worst, std::abs(pearson(x, y) - cosine(xc, yc)));
  }
  v.require(worst < 1e-12, "max difference " + fmt(worst));
  v.note("500 pairs, max difference " + fmt(worst));
}

void cooccurrence_exact(Verdict& v) {
  std::mt19937_64 rng(105);
  for (int trial = 0; trial < 100; ++trial) {
    const auto m = random_word_doc(rng, 12, 18, 9);
    const CountMatrix& a = m.counts();
    const auto words = cooccurrence(m, CoocMode::Words).values;
    const auto docs = cooccurrence(m, CoocMode::Documents).values;
    bool exact = true;
    for (Eigen::Index x = 0; x < a.cols(); ++x)
      for (Eigen::Index y = 0; y < a.cols(); ++y) {
        std::int64_t s = 0;
        for (Eigen::Index i = 0; i < a.rows(); ++i) s += a(i, x) * a(i, y);
        exact = exact && words(x, y) == s;
      }
    for (Eigen::Index x = 0; x < a.rows(); ++x)
      for (Eigen::Index y = 0; y < a.rows(); ++y) {
        std::int64_t s = 0;
        for (Eigen::Index k = 0; k < a.cols(); ++k) s += a(x, k) * a(y, k);
        exact = exact && docs(x, y) == s;
      }
    v.require(exact, "product mismatch in trial " + std::to_string(trial));
    v.require(words == words.transpose() && docs == docs.transpose(), "asymmetric output");
    const auto b = cooccurrence(m.binarized(), CoocMode::Words).values;
    const auto df = m.doc_freqs();
    for (Eigen::Index k = 0; k < b.rows(); ++k)
      v.require(b(k, k) == df[static_cast<std::size_t>(k)], "binary diagonal != docfreq");
  }
  v.note("100 matrices, exact");
}

LabeledMatrix random_real(std::mt19937_64& rng, int rows, int cols) {
  std::normal_distribution<double> d(0.0, 1.0);
  LabeledMatrix m;
  m.values.resize(rows, cols);
  for (int i = 0; i < rows; ++i) {
    const double z = d(rng);
    for (int k = 0; k < cols; ++k) m.values(i, k) = d(rng) + (k < cols / 2 ? z : -0.5 * z);
  }
  m.row_labels = labels("d", rows);
  m.col_labels = labels("v", cols);
  return m;
}

void factor_reconstruction(Verdict& v) {
  std::mt19937_64 rng(106);
  double recon = 0.0, resid = 0.0, spectrum = 0.0;
  for (int trial = 0; trial < 50; ++trial) {
    const auto m = random_real(rng, 20, 8);
    const auto sol = factor_analyze(m, CellMode::Counts, FactorMode::R, FactorCount::exactly(8));
    const auto corr = oracle::column_correlations(m.values);
    const RealMatrix rebuilt = sol.loadings * sol.loadings.transpose();
    RealMatrix r(8, 8);
    for (int a = 0; a < 8; ++a)
      for (int b = 0; b < 8; ++b) {
        r(a, b) = corr[a][b];
        recon = std::max(recon, std::abs(rebuilt(a, b) - corr[a][b]));
      }
    const auto ev = oracle::jacobi_eigenvalues(corr);
    for (std::size_t f = 0; f < sol.factors(); ++f) {
      const double lambda = sol.eigenvalues[f];
      spectrum = std::max(spectrum, std::abs(lambda - ev[f]));
      if (lambda <= 1e-12) continue;
      const RealVector vec = sol.loadings.col(static_cast<Eigen::Index>(f)) / std::sqrt(lambda);
      resid = std::max(resid, (r * vec - lambda * vec).norm());
    }
  }
  v.require(recon < 1e-8, "reconstruction error " + fmt(recon));
  v.require(resid < 1e-8, "eigen-residual " + fmt(resid));
  v.require(spectrum < 1e-8, "eigenvalues differ from Jacobi oracle by " + fmt(spectrum));
  v.note("50 matrices, |LL'-R| " + fmt(recon) + ", residual " + fmt(resid));
}

void varimax_invariants(Verdict& v) {
  std::mt19937_64 rng(107);
  std::normal_distribution<double> d(0.0, 0.5);
  double comm = 0.0, ortho = 0.0, worst_angle = 0.0, worst_drop = 0.0;
  int two_factor_cases = 0;
  for (int trial = 0; trial < 100; ++trial) {
    const int p = 4 + static_cast<int>(rng() % 16);
    const int k = trial < 50 ? 2 : 2 + static_cast<int>(rng() % 4);
    FactorSolution sol;
    sol.loadings.resize(p, k);
    for (int j = 0; j < p; ++j)
      for (int f = 0; f < k; ++f) sol.loadings(j, f) = d(rng);
    sol.variable_labels = labels("v", p);
    VarimaxReport rep;
    const auto out = varimax(sol, {}, &rep);
    const auto h0 = sol.communalities();
    const auto h1 = out.communalities();
    for (int j = 0; j < p; ++j) comm = std::max(comm, std::abs(h0[j] - h1[j]));
    ortho = std::max(ortho,
                     (rep.rotation.transpose() * rep.rotation - RealMatrix::Identity(k, k))
                         .cwiseAbs()
                         .maxCoeff());
    // Each planar rotation maximizes its pair exactly, so a drop can only be
    // floating-point noise; allow 1e-12 relative to the criterion.
    for (std::size_t s = 1; s < rep.criterion.size(); ++s) {
      const double drop = rep.criterion[s - 1] - rep.criterion[s];
      worst_drop = std::max(worst_drop, drop / std::max(1.0, std::abs(rep.criterion[s - 1])));
    }
    if (k == 2) {
      ++two_factor_cases;
      const double angle = std::atan2(rep.rotation(1, 0), rep.rotation(0, 0));
      const double grid = oracle::varimax_grid_angle(oracle::row_normalized(sol.loadings));
      worst_angle = std::max(worst_angle, oracle::quarter_turn_distance_deg(angle, grid));
    }
  }
  v.require(comm < 1e-8, "communality drift " + fmt(comm));
  v.require(ortho < 1e-10, "orthogonality error " + fmt(ortho));
  v.require(worst_angle < 0.5, "angle off by " + fmt(worst_angle) + " deg");
  v.require(worst_drop <= 1e-12, "criterion decreased by " + fmt(worst_drop) + " (relative)");
  v.note("100 solutions (" + std::to_string(two_factor_cases) + " two-factor), max angle gap " +
         fmt(worst_angle) + " deg, largest per-sweep drop " + fmt(worst_drop));
}

void suppression_behavior(Verdict& v) {
  std::mt19937_64 rng(108);
  std::uniform_real_distribution<double> small(-0.1, 0.1);
  int white = 0, dotted = 0;
  for (int trial = 0; trial < 50; ++trial) {
    const int p = 3 + static_cast<int>(rng() % 6);
    const int k = 1 + static_cast<int>(rng() % 4);
    FactorSolution sol;
    sol.variable_labels = labels("v", p);
    sol.loadings.resize(p, k);
    for (int j = 0; j < p; ++j)
      for (int f = 0; f < k; ++f) {
        const auto pick = rng() % 4;
        sol.loadings(j, f) = pick == 0 ? 0.1 : pick == 1 ? -0.1 : small(rng);
      }
    const Graph g = factor_graph(sol);
    const auto assignment = assign_factors(sol);
    v.require(g.edge_count() == 0, "suppressed loading produced an edge");
    for (const auto& a : assignment) v.require(!a.has_value(), "suppressed variable assigned");
    Layout layout;
    for (std::size_t i = 0; i < g.node_count(); ++i) layout.positions.push_back({0.5, 0.5});
    FactorAssignment full(g.node_count());
    const std::string svg = format_svg_map(g, layout, &full);
    std::istringstream lines(svg);
    std::string line;
    while (std::getline(lines, line))
      if (line.rfind("<circle", 0) == 0) {
        v.require(line.find("fill=\"#ffffff\"") != std::string::npos, "unassigned node not white");
        ++white;
      }
  }
  FactorSolution neg;
  neg.variable_labels = {"a", "b", "c"};
  neg.loadings.resize(3, 2);
  neg.loadings << -0.5, 0.3, 0.8, -0.11, 0.05, -0.6;
  const Graph g = factor_graph(neg);
  for (const auto& e : g.edges()) {
    const double l = neg.loadings(static_cast<Eigen::Index>(e.a),
                                  static_cast<Eigen::Index>(e.b - 3));
    v.require((l < 0) == (e.style == EdgeStyle::Dotted), "edge style does not follow sign");
    v.require(e.weight == std::abs(l), "edge weight is not |loading|");
    dotted += e.style == EdgeStyle::Dotted;
  }
  v.require(g.edge_count() == 5, "expected 5 edges outside [-0.1, 0.1]");
  Layout layout;
  for (std::size_t i = 0; i < g.node_count(); ++i) layout.positions.push_back({0.5, 0.5});
  v.require(format_svg_map(g, layout).find("stroke-dasharray") != std::string::npos,
            "dotted edge not dashed in SVG");
  v.require(format_pajek_net(g).find("p Dots") != std::string::npos,
            "dotted edge not marked in Pajek");
  v.note(std::to_string(white) + " white nodes checked, " + std::to_string(dotted) +
         " dotted edges");
}

void threshold_semantics(Verdict& v) {
  const PipelineConfig defaults;
  v.require(defaults.cos_threshold == 0.1, "default cosine threshold is not 0.1");
  v.require(defaults.cooc_threshold == 1.0, "default co-occurrence threshold is not 1");

  RealMatrix s(2, 2);
  s << 1.0, 0.1, 0.1, 1.0;
  const SimilarityMatrix sim{s, {"a", "b"}, SimilarityKind::Cosine, {}};
  v.require(threshold_graph(sim, defaults.cos_threshold).edge_count() == 1,
            "cosine exactly 0.1 should be an edge (>=)");
  CountMatrix c(3, 3);
  c << 3, 1, 2, 1, 3, 0, 2, 0, 3;
  const CoocMatrix cooc{c, {"a", "b", "c"}, CoocMode::Words};
  const Graph cg = threshold_graph(cooc, defaults.cooc_threshold);
  v.require(cg.edge_count() == 1, "co-occurrence of exactly 1 should not be an edge (>)");

  std::mt19937_64 rng(109);
  int monotone_checks = 0;
  for (int trial = 0; trial < 50; ++trial) {
    const auto m = random_word_doc(rng, 10, 15, 4);
    const auto cs = cosine_matrix(m.as_real(), Orientation::Columns);
    const auto co = cooccurrence(m, CoocMode::Words);
    std::size_t prev = SIZE_MAX;
    for (int step = 0; step <= 40; ++step) {
      const auto n = threshold_graph(cs, step * 0.025).edge_count();
      v.require(n <= prev, "cosine edge count increased with the threshold");
      prev = n;
      ++monotone_checks;
    }
    prev = SIZE_MAX;
    for (int t = 0; t <= 40; ++t) {
      const auto n = threshold_graph(co, t).edge_count();
      v.require(n <= prev, "co-occurrence edge count increased with the threshold");
      prev = n;
      ++monotone_checks;
    }
  }
  v.note(std::to_string(monotone_checks) + " monotonicity checks");
}

double dist(Point a, Point b) { return std::hypot(a.x - b.x, a.y - b.y); }

Graph chain_graph(std::size_t n, const std::vector<std::pair<std::size_t, std::size_t>>& edges) {
  Graph g;
  for (std::size_t i = 0; i < n; ++i) g.add_node({"n" + std::to_string(i), std::nullopt, 1.0});
  for (auto [a, b] : edges) g.add_edge(a, b, 1.0);
  return g;
}

std::string file_bytes(const fs::path& p) {
  std::error_code ec;
  return fs::exists(p, ec) ? read_text_file(p) : std::string();
}

void layout_checks(Verdict& v) {
  const Graph pair = chain_graph(2, {{0, 1}});
  const auto fr = fruchterman_reingold_raw(pair, {});
  const double sep = dist(fr.raw[0], fr.raw[1]);
  v.require(std::abs(sep - fr.kappa) < 0.1 * fr.kappa,
            "FR separation " + fmt(sep) + " vs kappa " + fmt(fr.kappa));

  const Graph k3 = chain_graph(3, {{0, 1}, {1, 2}, {0, 2}});
  const auto kk = kamada_kawai_raw(k3, {});
  const double ab = dist(kk.raw[0], kk.raw[1]), bc = dist(kk.raw[1], kk.raw[2]),
               ac = dist(kk.raw[0], kk.raw[2]);
  const double spread = std::max({ab, bc, ac}) - std::min({ab, bc, ac});
  v.require(spread < 1e-4, "K3 spread " + fmt(spread));

  const Graph path = chain_graph(3, {{0, 1}, {1, 2}});
  const auto kp = kamada_kawai_raw(path, {});
  const auto hops = hop_distances(path);
  double best_random = INFINITY;
  for (std::uint64_t s = 0; s < 100; ++s)
    best_random = std::min(best_random, kk_stress(random_placement(3, 500 + s, 3.0), hops, 1.0));
  v.require(kp.stress <= best_random,
            "KK stress " + fmt(kp.stress) + " > best random " + fmt(best_random));

  const Graph pk = chain_graph(12, {{0, 1}, {1, 2}, {2, 0}, {3, 4}, {4, 5}, {6, 7}, {8, 9}});
  const auto a = fruchterman_reingold(pk, {300, 9, true});
  const auto b = fruchterman_reingold(pk, {300, 9, true});
  v.require(a.positions == b.positions, "FR not bitwise reproducible");
  const LayoutFn fn = [](const Graph& g, std::uint64_t seed) {
    return fruchterman_reingold(g, {300, seed, false});
  };
  v.require(split_and_pack(pk, fn, 3, 1).positions == split_and_pack(pk, fn, 3, 8).positions,
            "packed layout differs between 1 and 8 threads");

  TempDir one("acc-t1"), eight("acc-t8");
  PipelineConfig cfg = load_config(source_dir() / "data" / "micro.conf");
  cfg.out = one.path();
  cfg.threads = 1;
  run_pipeline(cfg);
  cfg.out = eight.path();
  cfg.threads = 8;
  run_pipeline(cfg);
  for (const auto& name : artifact_names())
    v.require(file_bytes(one.path() / name) == file_bytes(eight.path() / name),
              name + " differs between --threads 1 and --threads 8");
  v.note("FR d/kappa " + fmt(sep / fr.kappa, "%.4f") + ", K3 spread " + fmt(spread) +
         ", KK stress " + fmt(kp.stress) + " <= " + fmt(best_random));
}

Graph random_graph(std::mt19937_64& rng) {
  Graph g;
  const std::size_t n = 1 + rng() % 20;
  for (std::size_t i = 0; i < n; ++i) {
    Node node{"w" + std::to_string(i), std::nullopt, 1.0};
    if (i == 0) node.label = "quote \"q\" mark";
    if (rng() % 2) node.group = static_cast<int>(rng() % 15);
    g.add_node(std::move(node));
  }
  for (std::size_t a = 0; a < n; ++a)
    for (std::size_t b = a + 1; b < n; ++b)
      if (rng() % 3 == 0)
        g.add_edge(a, b, static_cast<double>(1 + rng() % 99999) / 10000.0,
                   rng() % 4 == 0 ? EdgeStyle::Dotted : EdgeStyle::Solid);
  return g;
}

void format_fidelity(Verdict& v) {
  TempDir out("acc-golden");
  PipelineConfig cfg = load_config(source_dir() / "data" / "micro.conf");
  cfg.out = out.path();
  run_pipeline(cfg);
  const fs::path golden = source_dir() / "tests" / "golden" / "micro";
  for (const char* name : {"map.net", "factors.net", "coocc.dat"}) {
    const std::string want = file_bytes(golden / name);
    v.require(!want.empty(), std::string("missing golden ") + name);
    v.require(file_bytes(out.path() / name) == want, std::string(name) + " differs from golden");
  }

  std::mt19937_64 rng(111);
  for (int trial = 0; trial < 100; ++trial) {
    const Graph g = random_graph(rng);
    Layout layout;
    for (std::size_t i = 0; i < g.node_count(); ++i)
      layout.positions.push_back({static_cast<double>(rng() % 10001) / 10000.0,
                                  static_cast<double>(rng() % 10001) / 10000.0});
    const auto back = parse_pajek_net(format_pajek_net(g, &layout));
    v.require(back.graph == g, "net round trip changed the graph");
    v.require(back.coordinates == layout.positions, "net round trip changed coordinates");

    const int n = 1 + static_cast<int>(rng() % 12);
    CountMatrix c(n, n);
    for (int i = 0; i < n; ++i)
      for (int j = 0; j <= i; ++j) c(i, j) = c(j, i) = static_cast<std::int64_t>(rng() % 500);
    const CoocMatrix m{c, labels("t", n), CoocMode::Words};
    const auto mb = parse_pajek_matrix(format_pajek_matrix(m));
    v.require(mb.values == m.values && mb.labels == m.labels, "matrix round trip mismatch");
  }
  v.note("3 golden files, 100 graph and 100 matrix round trips");
}

// A 500-document corpus over a 2,000-word vocabulary with five latent
// topics, one document per line.
void write_synthetic_corpus(const fs::path& path) {
  std::mt19937_64 rng(2024);
  const int vocab = 2000, docs = 500, topics = 5;
  std::vector<std::string> words;
  for (int w = 0; w < vocab; ++w) {
    char buf[16];
    std::snprintf(buf, sizeof buf, "w%04d", w);
    words.emplace_back(buf);
  }
  std::ofstream f(path, std::ios::binary);
  std::uniform_real_distribution<double> u(0.0, 1.0);
  for (int d = 0; d < docs; ++d) {
    const int topic = d % topics;
    std::string line;
    // Every word appears at least once across the corpus.
    for (int w = d; w < vocab; w += docs) line += words[w] + " ";
    for (int t = 0; t < 150; ++t) {
      int w;
      if (u(rng) < 0.6) {
        // Topic block of 400 words, Zipf-like inside the block.
        const double z = std::pow(u(rng), 3.0);
        w = topic * 400 + static_cast<int>(z * 400);
      } else {
        w = static_cast<int>(std::pow(u(rng), 2.0) * vocab);
      }
      line += words[std::min(w, vocab - 1)] + " ";
    }
    f << line << "\n";
  }
}

void end_to_end(Verdict& v) {
  TempDir a("acc-e2e-a"), b("acc-e2e-b");
  PipelineConfig cfg = load_config(source_dir() / "data" / "micro.conf");
  cfg.out = a.path();
  auto start = Clock::now();
  run_pipeline(cfg);
  const double micro_seconds = seconds_since(start);
  cfg.out = b.path();
  run_pipeline(cfg);
  int present = 0;
  for (const auto& name : artifact_names()) {
    const bool exists = fs::exists(a.path() / name);
    present += exists;
    v.require(exists, "missing artifact " + name);
    v.require(file_bytes(a.path() / name) == file_bytes(b.path() / name),
              name + " differs between runs");
  }
  v.require(micro_seconds < 5.0, "micro-corpus took " + fmt(micro_seconds) + " s");

  TempDir big("acc-e2e-big");
  write_synthetic_corpus(big.path() / "corpus.txt");
  PipelineConfig large;
  large.input = big.path() / "corpus.txt";
  large.format = CorpusFormat::OnePerLine;
  large.top = 2000;
  large.factors = FactorCount::exactly(5);
  large.out = big.path() / "out";
  start = Clock::now();
  run_pipeline(large);
  const double large_seconds = seconds_since(start);
  const std::string terms = file_bytes(large.out / "terms.csv");
  const auto rows = std::count(terms.begin(), terms.end(), '\n') - 1;
  v.require(rows == 2000, "synthetic vocabulary has " + std::to_string(rows) + " terms");
  const std::string loadings = file_bytes(large.out / "loadings.csv");
  v.require(loadings.rfind("variable,factor1,factor2,factor3,factor4,factor5,communality", 0) == 0,
            "loadings.csv does not hold 5 factors");
  v.require(fs::exists(large.out / "map.svg"), "synthetic run produced no map.svg");
  v.require(large_seconds < 60.0, "synthetic corpus took " + fmt(large_seconds) + " s");
  v.note(std::to_string(present) + "/9 artifacts, micro " + fmt(micro_seconds) +
         " s, 500x2000 synthetic " + fmt(large_seconds) + " s");
}

}  // namespace

int main() {
  struct Criterion {
    int id;
    const char* name;
    std::function<void(Verdict&)> run;
  };
  const std::vector<Criterion> criteria = {
      {1, "tf-idf oracle", tfidf_oracle},
      {2, "chi-square oracle", chi_square_oracle},
      {3, "margin property", margin_property},
      {4, "pearson equals centred cosine", pearson_centered_cosine},
      {5, "co-occurrence exactness", cooccurrence_exact},
      {6, "factor reconstruction", factor_reconstruction},
      {7, "varimax invariants", varimax_invariants},
      {8, "suppression behaviour", suppression_behavior},
      {9, "threshold semantics", threshold_semantics},
      {10, "layout checks", layout_checks},
      {11, "format fidelity", format_fidelity},
      {12, "end-to-end", end_to_end},
  };
  int failed = 0;
  for (const auto& c : criteria) {
    Verdict v;
    try {
      c.run(v);
    } catch (const std::exception& e) {
      v.require(false, std::string("exception: ") + e.what());
    }
    std::printf("%s  criterion %2d  %-30s %s\n", v.ok() ? "PASS" : "FAIL", c.id, c.name,
                v.detail().c_str());
    std::fflush(stdout);
    failed += !v.ok();
  }
  std::printf("%d/%zu criteria passed\n", static_cast<int>(criteria.size()) - failed,
              criteria.size());
  return failed == 0 ? 0 : 1;
}
