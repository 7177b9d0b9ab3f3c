#pragma once

#include <string>
#include <vector>

#include "coword/common.hpp"
#include "coword/corpus.hpp"

namespace coword {

enum class SimilarityKind { Cosine, Pearson };

struct SimilarityMatrix {
  RealMatrix values;  // symmetric by construction
  std::vector<std::string> labels;
  SimilarityKind kind = SimilarityKind::Cosine;
  std::vector<std::string> dropped;  // constant vectors skipped (Pearson)
};

/// Salton's cosine between the columns (or rows) of `m`. An all-zero vector
/// is a DataError naming its label.
SimilarityMatrix cosine_matrix(const LabeledMatrix& m, Orientation orientation,
                               unsigned threads = 1);

/// Product-moment correlation. Constant vectors are dropped and listed in
/// `dropped`.
SimilarityMatrix pearson_matrix(const LabeledMatrix& m, Orientation orientation,
                                unsigned threads = 1);

double cosine(const RealVector& x, const RealVector& y);
double pearson(const RealVector& x, const RealVector& y);

enum class CoocMode { Words, Documents };

struct CoocMatrix {
  CountMatrix values;
  std::vector<std::string> labels;
  CoocMode mode = CoocMode::Words;
};

/// A^T A (words) or A A^T (documents), in exact integer arithmetic.
CoocMatrix cooccurrence(const WordDocMatrix& m, CoocMode mode);

enum class ThresholdRule { GreaterOrEqual, Greater };

/// Edge (a, b), a < b, iff value passes the threshold; diagonal ignored and
/// isolated nodes kept.
Graph threshold_graph(const RealMatrix& values,
                      const std::vector<std::string>& labels, double threshold,
                      ThresholdRule rule);
Graph threshold_graph(const SimilarityMatrix& sim, double threshold,
                      ThresholdRule rule = ThresholdRule::GreaterOrEqual);
Graph threshold_graph(const CoocMatrix& cooc, double threshold,
                      ThresholdRule rule = ThresholdRule::Greater);

}  // namespace coword
