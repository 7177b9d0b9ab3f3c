#include "coword/termstats.hpp"

#include <algorithm>
#include <cmath>

namespace coword {

ExpectedMatrix expected_matrix(const WordDocMatrix& m) {
  const auto& R = m.row_margins();
  const auto& C = m.col_margins();
  const double T = static_cast<double>(m.total());
  RealMatrix e(m.rows(), m.cols());
  for (std::size_t i = 0; i < m.rows(); ++i)
    for (std::size_t k = 0; k < m.cols(); ++k)
      e(i, k) = static_cast<double>(R[i]) * static_cast<double>(C[k]) / T;
  return {std::move(e)};
}

RealMatrix tfidf_matrix(const WordDocMatrix& m) {
  const double n = static_cast<double>(m.rows());
  const auto df = m.doc_freqs();
  RealMatrix out(m.rows(), m.cols());
  for (std::size_t k = 0; k < m.cols(); ++k) {
    const double idf = std::log2(n / static_cast<double>(df[k]));
    for (std::size_t i = 0; i < m.rows(); ++i)
      out(i, k) = static_cast<double>(m.counts()(i, k)) * idf;
  }
  return out;
}

std::vector<double> tfidf_per_term(const WordDocMatrix& m) {
  const RealMatrix t = tfidf_matrix(m);
  std::vector<double> sums(m.cols(), 0.0);
  for (std::size_t k = 0; k < m.cols(); ++k)
    for (std::size_t i = 0; i < m.rows(); ++i) sums[k] += t(i, k);
  return sums;
}

ChiSquareReport chi_square(const WordDocMatrix& m, YatesRule yates) {
  const RealMatrix e = expected_matrix(m).values;
  ChiSquareReport rep;
  rep.per_cell.resize(e.rows(), e.cols());
  rep.yates_applied.setConstant(e.rows(), e.cols(), false);
  for (Eigen::Index i = 0; i < e.rows(); ++i) {
    for (Eigen::Index k = 0; k < e.cols(); ++k) {
      const double o = static_cast<double>(m.counts()(i, k));
      double diff = std::abs(o - e(i, k));
      if (yates == YatesRule::ObservedBelow5 && o < 5.0) {
        diff = std::max(diff - 0.5, 0.0);
        rep.yates_applied(i, k) = true;
      }
      rep.per_cell(i, k) = diff * diff / e(i, k);
    }
  }
  // Row-major accumulation so the total equals the sum of column sums up to
  // rounding, independent of Eigen's reduction order.
  for (Eigen::Index i = 0; i < e.rows(); ++i)
    for (Eigen::Index k = 0; k < e.cols(); ++k) rep.total += rep.per_cell(i, k);
  rep.degrees_of_freedom = static_cast<std::int64_t>(m.rows() - 1) *
                           static_cast<std::int64_t>(m.cols() - 1);
  return rep;
}

std::vector<double> chi_square_per_term(const ChiSquareReport& report) {
  std::vector<double> sums(report.per_cell.cols(), 0.0);
  for (Eigen::Index k = 0; k < report.per_cell.cols(); ++k)
    for (Eigen::Index i = 0; i < report.per_cell.rows(); ++i)
      sums[k] += report.per_cell(i, k);
  return sums;
}

ObsExp obs_exp(const WordDocMatrix& m) {
  const RealMatrix e = expected_matrix(m).values;
  ObsExp out;
  out.values = m.counts().cast<double>().cwiseQuotient(e);
  out.column_sums.assign(m.cols(), 0.0);
  for (std::size_t k = 0; k < m.cols(); ++k)
    for (std::size_t i = 0; i < m.rows(); ++i)
      out.column_sums[k] += out.values(i, k);
  return out;
}

LabeledMatrix cell_values(const WordDocMatrix& m, CellMode mode) {
  switch (mode) {
    case CellMode::Counts: return m.as_real();
    case CellMode::TfIdf: return {tfidf_matrix(m), m.row_labels(), m.col_labels()};
    case CellMode::ObsExp: return {obs_exp(m).values, m.row_labels(), m.col_labels()};
  }
  return m.as_real();
}

TermScores term_scores(const WordDocMatrix& m, YatesRule yates) {
  const auto df = m.doc_freqs();
  const auto tfidf = tfidf_per_term(m);
  const auto chi2 = chi_square_per_term(chi_square(m, yates));
  const auto oe = obs_exp(m).column_sums;
  TermScores scores(m.cols());
  for (std::size_t k = 0; k < m.cols(); ++k) {
    scores[k] = {m.col_labels()[k], m.col_margins()[k], df[k], tfidf[k],
                 chi2[k], oe[k]};
  }
  return scores;
}

std::string to_string(Criterion c) {
  switch (c) {
    case Criterion::Freq: return "freq";
    case Criterion::TfIdf: return "tfidf";
    case Criterion::Chi2: return "chi2";
    case Criterion::ObsExp: return "obsexp";
  }
  return "freq";
}

Criterion parse_criterion(const std::string& name) {
  if (name == "freq") return Criterion::Freq;
  if (name == "tfidf") return Criterion::TfIdf;
  if (name == "chi2") return Criterion::Chi2;
  if (name == "obsexp") return Criterion::ObsExp;
  throw UsageError("invalid criterion '" + name +
                   "' (valid: freq, tfidf, chi2, obsexp)");
}

double score_of(const TermScore& s, Criterion c) {
  switch (c) {
    case Criterion::Freq: return static_cast<double>(s.freq);
    case Criterion::TfIdf: return s.tfidf;
    case Criterion::Chi2: return s.chi2;
    case Criterion::ObsExp: return s.obs_exp_sum;
  }
  return 0.0;
}

TermScores rank_terms(TermScores scores, Criterion criterion) {
  std::sort(scores.begin(), scores.end(),
            [criterion](const TermScore& x, const TermScore& y) {
              const double sx = score_of(x, criterion);
              const double sy = score_of(y, criterion);
              if (sx != sy) return sx > sy;
              return x.term < y.term;
            });
  return scores;
}

std::vector<std::string> select_terms(const TermScores& scores,
                                      Criterion criterion,
                                      const Selection& selection) {
  if (selection.top_n && *selection.top_n < 1)
    throw UsageError("top_n must be >= 1");
  if (selection.threshold && !std::isfinite(*selection.threshold))
    throw UsageError("selection threshold must be finite");
  std::vector<std::string> out;
  for (const auto& s : rank_terms(scores, criterion)) {
    if (selection.top_n && out.size() >= *selection.top_n) break;
    if (selection.threshold && score_of(s, criterion) < *selection.threshold)
      break;
    out.push_back(s.term);
  }
  if (out.empty())
    throw DataError("term selection by " + to_string(criterion) +
                    " is empty; lower the threshold");
  return out;
}

}  // namespace coword
