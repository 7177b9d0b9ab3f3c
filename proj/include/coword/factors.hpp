#pragma once

#include <optional>
#include <string>
#include <vector>

#include "coword/common.hpp"
#include "coword/vectorspace.hpp"

namespace coword {

enum class FactorMode { R, Q };

/// Explicit number of factors, or Kaiser's rule (eigenvalue > 1) when empty.
struct FactorCount {
  std::optional<int> explicit_k;

  static FactorCount kaiser() { return {}; }
  static FactorCount exactly(int k) { return {k}; }
};

struct FactorSolution {
  RealMatrix loadings;  // variables x factors
  std::vector<double> eigenvalues;             // retained, non-increasing
  std::vector<double> explained_variance_pct;  // 100 * eigenvalue / variables
  bool rotated = false;
  std::vector<std::string> variable_labels;
  CellMode input_mode = CellMode::Counts;
  FactorMode orientation = FactorMode::R;
  std::vector<std::string> warnings;

  std::size_t variables() const { return static_cast<std::size_t>(loadings.rows()); }
  std::size_t factors() const { return static_cast<std::size_t>(loadings.cols()); }
  std::vector<double> communalities() const;
};

/// Principal components of a correlation matrix: loading = v * sqrt(lambda).
/// Within each factor the loading of largest magnitude is made non-negative.
FactorSolution extract_components(const SimilarityMatrix& correlation,
                                  FactorCount count);

/// Correlates the variables of a 2-mode matrix (columns in R-mode, rows in
/// Q-mode) and extracts principal components.
FactorSolution factor_analyze(const LabeledMatrix& m, CellMode input_mode,
                              FactorMode orientation, FactorCount count,
                              unsigned threads = 1);

struct VarimaxOptions {
  bool kaiser_normalize = true;
  double tol = 1e-10;
  int max_iter = 500;
};

struct VarimaxReport {
  RealMatrix rotation;             // old loadings * rotation = new loadings
  std::vector<double> criterion;  // after each sweep, starting with the input
  int sweeps = 0;
  bool converged = false;
};

/// Raw varimax criterion: sum over factors of the variance of the squared
/// loadings, times p^2.
double varimax_criterion(const RealMatrix& loadings);

/// Orthogonal varimax by pairwise planar rotations, pairs (f, g) swept in
/// lexicographic order.
FactorSolution varimax(const FactorSolution& sol, const VarimaxOptions& opts,
                       VarimaxReport* report = nullptr);

struct FactorMembership {
  std::size_t factor = 0;
  bool positive = true;
};

using FactorAssignment = std::vector<std::optional<FactorMembership>>;

inline constexpr double kDefaultSuppression = 0.1;

/// Variable j goes to argmax_f |loading| when that maximum lies outside the
/// suppression interval [-s, s]; otherwise it stays unassigned.
FactorAssignment assign_factors(const FactorSolution& sol,
                                double suppression = kDefaultSuppression);

enum class SuppressionBoundary {
  Closed,  // suppress |loading| <= s
  Open,    // suppress |loading| < s
};

std::string factor_node_label(std::size_t factor);

/// Bipartite graph: variable nodes, then one node per factor. Edge weight is
/// |loading|; negative loadings are dotted.
Graph factor_graph(const FactorSolution& sol,
                   double suppression = kDefaultSuppression,
                   SuppressionBoundary boundary = SuppressionBoundary::Closed);

struct SvdResult {
  RealMatrix u;  // rows x rank
  RealVector singular_values;
  RealMatrix v;  // cols x rank
  std::size_t rank = 0;
};

/// Best rank-k factorization, singular values descending. Within each
/// component the largest-magnitude entry of u is non-negative.
SvdResult truncated_svd(const RealMatrix& m, std::size_t k);

}  // namespace coword
