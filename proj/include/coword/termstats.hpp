#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "coword/common.hpp"
#include "coword/corpus.hpp"

namespace coword {

/// E_ik = R_i * C_k / T. Row and column sums reproduce the observed margins.
struct ExpectedMatrix {
  RealMatrix values;
};

ExpectedMatrix expected_matrix(const WordDocMatrix& m);

/// FREQ_ik * log2(n / DOCFREQ_k), n = number of documents.
RealMatrix tfidf_matrix(const WordDocMatrix& m);

/// Column sums of tfidf_matrix.
std::vector<double> tfidf_per_term(const WordDocMatrix& m);

enum class YatesRule {
  Off,
  ObservedBelow5,  // (|O-E| - 0.5)^2 / E for cells with O < 5, floored at 0
};

struct ChiSquareReport {
  double total = 0.0;
  std::int64_t degrees_of_freedom = 0;
  RealMatrix per_cell;
  Eigen::Matrix<bool, Eigen::Dynamic, Eigen::Dynamic> yates_applied;
};

ChiSquareReport chi_square(const WordDocMatrix& m, YatesRule yates);

/// Column sums of the per-cell contributions.
std::vector<double> chi_square_per_term(const ChiSquareReport& report);

struct ObsExp {
  RealMatrix values;               // O / E per cell
  std::vector<double> column_sums;  // per-term score
};

ObsExp obs_exp(const WordDocMatrix& m);

/// The cell values fed to similarity and factor analysis.
LabeledMatrix cell_values(const WordDocMatrix& m, CellMode mode);

struct TermScore {
  std::string term;
  std::int64_t freq = 0;
  std::int64_t doc_freq = 0;
  double tfidf = 0.0;
  double chi2 = 0.0;
  double obs_exp_sum = 0.0;
};

using TermScores = std::vector<TermScore>;

TermScores term_scores(const WordDocMatrix& m, YatesRule yates);

enum class Criterion { Freq, TfIdf, Chi2, ObsExp };

std::string to_string(Criterion c);
Criterion parse_criterion(const std::string& name);

double score_of(const TermScore& s, Criterion c);

struct Selection {
  std::optional<std::size_t> top_n;
  std::optional<double> threshold;  // keep scores >= threshold
};

/// Terms sorted by descending score (ties lexicographic), cut at top_n or
/// filtered at >= threshold. Empty result is a DataError.
std::vector<std::string> select_terms(const TermScores& scores,
                                      Criterion criterion,
                                      const Selection& selection);

/// The same ordering applied to the whole table.
TermScores rank_terms(TermScores scores, Criterion criterion);

}  // namespace coword
