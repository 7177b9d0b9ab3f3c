#include "coword/factors.hpp"

#include <algorithm>
#include <cmath>

namespace coword {
namespace {

// Flips each column so its largest-magnitude entry (first on ties) is
// non-negative. Returns the applied signs.
std::vector<double> normalize_signs(RealMatrix& columns) {
  std::vector<double> signs(columns.cols(), 1.0);
  for (Eigen::Index f = 0; f < columns.cols(); ++f) {
    Eigen::Index arg = 0;
    double best = -1.0;
    for (Eigen::Index j = 0; j < columns.rows(); ++j) {
      if (std::abs(columns(j, f)) > best) {
        best = std::abs(columns(j, f));
        arg = j;
      }
    }
    if (columns.rows() > 0 && columns(arg, f) < 0.0) {
      columns.col(f) *= -1.0;
      signs[f] = -1.0;
    }
  }
  return signs;
}

}  // namespace

std::vector<double> FactorSolution::communalities() const {
  std::vector<double> h(variables(), 0.0);
  for (Eigen::Index j = 0; j < loadings.rows(); ++j)
    h[j] = loadings.row(j).squaredNorm();
  return h;
}

FactorSolution extract_components(const SimilarityMatrix& correlation,
                                  FactorCount count) {
  const Eigen::Index p = correlation.values.rows();
  if (p < 2)
    throw DataError("factor analysis needs at least 2 non-constant variables, got " +
                    std::to_string(p));
  if (count.explicit_k && *count.explicit_k <= 0)
    throw UsageError("number of factors must be positive");

  Eigen::SelfAdjointEigenSolver<RealMatrix> solver(correlation.values);
  if (solver.info() != Eigen::Success)
    throw DataError("eigendecomposition of the correlation matrix failed");
  // Eigen returns ascending order.
  const RealVector evals = solver.eigenvalues().reverse();
  const RealMatrix evecs = solver.eigenvectors().rowwise().reverse();

  FactorSolution sol;
  sol.variable_labels = correlation.labels;
  Eigen::Index k = 0;
  if (count.explicit_k) {
    k = *count.explicit_k;
    if (k > p) {
      sol.warnings.push_back("requested " + std::to_string(k) +
                             " factors but only " + std::to_string(p) +
                             " variables; clamped to " + std::to_string(p));
      k = p;
    }
  } else {
    while (k < p && evals(k) > 1.0) ++k;
    if (k == 0)
      throw DataError(
          "no eigenvalue exceeds 1 (Kaiser criterion retains no factor); "
          "pass an explicit factor count");
  }

  sol.loadings.resize(p, k);
  for (Eigen::Index f = 0; f < k; ++f) {
    const double lambda = std::max(evals(f), 0.0);
    sol.loadings.col(f) = evecs.col(f) * std::sqrt(lambda);
    sol.eigenvalues.push_back(evals(f));
    sol.explained_variance_pct.push_back(100.0 * evals(f) / static_cast<double>(p));
  }
  normalize_signs(sol.loadings);
  return sol;
}

FactorSolution factor_analyze(const LabeledMatrix& m, CellMode input_mode,
                              FactorMode orientation, FactorCount count,
                              unsigned threads) {
  if (count.explicit_k && *count.explicit_k <= 0)
    throw UsageError("number of factors must be positive");
  // Q-mode is the R-mode path on the transposed matrix.
  const LabeledMatrix input = orientation == FactorMode::Q ? m.transposed() : m;
  const SimilarityMatrix corr =
      pearson_matrix(input, Orientation::Columns, threads);
  FactorSolution sol = extract_components(corr, count);
  sol.input_mode = input_mode;
  sol.orientation = orientation;
  for (const auto& d : corr.dropped)
    sol.warnings.insert(sol.warnings.begin(),
                        "dropped constant variable '" + d + "'");
  return sol;
}

double varimax_criterion(const RealMatrix& loadings) {
  const double p = static_cast<double>(loadings.rows());
  double total = 0.0;
  for (Eigen::Index f = 0; f < loadings.cols(); ++f) {
    double s2 = 0.0, s4 = 0.0;
    for (Eigen::Index j = 0; j < loadings.rows(); ++j) {
      const double sq = loadings(j, f) * loadings(j, f);
      s2 += sq;
      s4 += sq * sq;
    }
    total += p * s4 - s2 * s2;
  }
  return total;
}

FactorSolution varimax(const FactorSolution& sol, const VarimaxOptions& opts,
                       VarimaxReport* report) {
  FactorSolution out = sol;
  const Eigen::Index p = sol.loadings.rows();
  const Eigen::Index k = sol.loadings.cols();
  VarimaxReport rep;
  rep.rotation = RealMatrix::Identity(k, k);
  if (k < 2) {
    out.warnings.push_back("varimax skipped: a single factor cannot be rotated");
    if (report) *report = std::move(rep);
    return out;
  }

  RealVector h = RealVector::Ones(p);
  RealMatrix x = sol.loadings;
  if (opts.kaiser_normalize) {
    for (Eigen::Index j = 0; j < p; ++j) {
      h(j) = x.row(j).norm();
      if (h(j) > 0.0) x.row(j) /= h(j);
    }
  }

  const double n = static_cast<double>(p);
  double crit = varimax_criterion(x);
  rep.criterion.push_back(crit);
  for (int sweep = 0; sweep < opts.max_iter; ++sweep) {
    for (Eigen::Index f = 0; f < k - 1; ++f) {
      for (Eigen::Index g = f + 1; g < k; ++g) {
        double a = 0.0, b = 0.0, c = 0.0, d = 0.0;
        for (Eigen::Index j = 0; j < p; ++j) {
          const double u = x(j, f) * x(j, f) - x(j, g) * x(j, g);
          const double v = 2.0 * x(j, f) * x(j, g);
          a += u;
          b += v;
          c += u * u - v * v;
          d += 2.0 * u * v;
        }
        const double num = d - 2.0 * a * b / n;
        const double den = c - (a * a - b * b) / n;
        const double phi = std::atan2(num, den) / 4.0;
        const double cs = std::cos(phi), sn = std::sin(phi);
        for (Eigen::Index j = 0; j < p; ++j) {
          const double xf = x(j, f), xg = x(j, g);
          x(j, f) = xf * cs + xg * sn;
          x(j, g) = -xf * sn + xg * cs;
        }
        for (Eigen::Index r = 0; r < k; ++r) {
          const double tf = rep.rotation(r, f), tg = rep.rotation(r, g);
          rep.rotation(r, f) = tf * cs + tg * sn;
          rep.rotation(r, g) = -tf * sn + tg * cs;
        }
      }
    }
    ++rep.sweeps;
    const double next = varimax_criterion(x);
    rep.criterion.push_back(next);
    const double gain = next - crit;
    crit = next;
    if (gain < opts.tol) {
      rep.converged = true;
      break;
    }
  }
  if (!rep.converged)
    out.warnings.push_back("varimax did not converge in " +
                           std::to_string(opts.max_iter) + " sweeps");

  if (opts.kaiser_normalize) {
    for (Eigen::Index j = 0; j < p; ++j) x.row(j) *= h(j);
  }
  const auto signs = normalize_signs(x);
  for (Eigen::Index f = 0; f < k; ++f) rep.rotation.col(f) *= signs[f];
  out.loadings = std::move(x);
  out.rotated = true;
  if (report) *report = std::move(rep);
  return out;
}

FactorAssignment assign_factors(const FactorSolution& sol, double suppression) {
  FactorAssignment out(sol.variables());
  for (Eigen::Index j = 0; j < sol.loadings.rows(); ++j) {
    std::size_t best_f = 0;
    double best = -1.0;
    for (Eigen::Index f = 0; f < sol.loadings.cols(); ++f) {
      if (std::abs(sol.loadings(j, f)) > best) {
        best = std::abs(sol.loadings(j, f));
        best_f = static_cast<std::size_t>(f);
      }
    }
    if (best > suppression)
      out[j] = FactorMembership{best_f, sol.loadings(j, best_f) >= 0.0};
  }
  return out;
}

std::string factor_node_label(std::size_t factor) {
  return "Factor " + std::to_string(factor + 1);
}

Graph factor_graph(const FactorSolution& sol, double suppression,
                   SuppressionBoundary boundary) {
  Graph g;
  const auto assignment = assign_factors(sol, suppression);
  for (std::size_t j = 0; j < sol.variables(); ++j) {
    Node node{sol.variable_labels[j], std::nullopt, 1.0};
    if (assignment[j]) node.group = static_cast<int>(assignment[j]->factor);
    g.add_node(std::move(node));
  }
  const std::size_t first_factor = g.node_count();
  for (std::size_t f = 0; f < sol.factors(); ++f)
    g.add_node({factor_node_label(f), static_cast<int>(f), 1.0});
  for (std::size_t j = 0; j < sol.variables(); ++j) {
    for (std::size_t f = 0; f < sol.factors(); ++f) {
      const double l = sol.loadings(j, f);
      const double mag = std::abs(l);
      const bool suppressed = boundary == SuppressionBoundary::Closed
                                  ? mag <= suppression
                                  : mag < suppression;
      if (suppressed) continue;
      g.add_edge(j, first_factor + f, mag,
                 l < 0.0 ? EdgeStyle::Dotted : EdgeStyle::Solid);
    }
  }
  return g;
}

SvdResult truncated_svd(const RealMatrix& m, std::size_t k) {
  const auto full = static_cast<std::size_t>(std::min(m.rows(), m.cols()));
  if (k < 1 || k > full)
    throw UsageError("truncated_svd: k must be in [1, " + std::to_string(full) +
                     "], got " + std::to_string(k));
  Eigen::BDCSVD<RealMatrix> svd(m, Eigen::ComputeThinU | Eigen::ComputeThinV);
  const auto kk = static_cast<Eigen::Index>(k);
  SvdResult out;
  out.rank = k;
  out.singular_values = svd.singularValues().head(kk);
  out.u = svd.matrixU().leftCols(kk);
  out.v = svd.matrixV().leftCols(kk);
  const auto signs = normalize_signs(out.u);
  for (Eigen::Index f = 0; f < kk; ++f) out.v.col(f) *= signs[f];
  return out;
}

}  // namespace coword
