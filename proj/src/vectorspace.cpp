#include "coword/vectorspace.hpp"

#include <algorithm>
#include <cmath>

namespace coword {
namespace {

// Variables as columns of the returned matrix.
RealMatrix as_variables(const LabeledMatrix& m, Orientation orientation,
                        std::vector<std::string>& labels) {
  if (orientation == Orientation::Columns) {
    labels = m.col_labels;
    return m.values;
  }
  labels = m.row_labels;
  return m.values.transpose();
}

// Upper triangle of the cosine matrix of the columns of `x`, mirrored.
RealMatrix column_cosines(const RealMatrix& x, unsigned threads) {
  const Eigen::Index p = x.cols();
  RealVector norms(p);
  for (Eigen::Index j = 0; j < p; ++j) norms(j) = std::sqrt(x.col(j).squaredNorm());
  RealMatrix out = RealMatrix::Identity(p, p);
  parallel_for(static_cast<std::size_t>(p), threads, [&](std::size_t a) {
    const auto ja = static_cast<Eigen::Index>(a);
    for (Eigen::Index b = ja + 1; b < p; ++b) {
      double dot = 0.0;
      for (Eigen::Index i = 0; i < x.rows(); ++i) dot += x(i, ja) * x(i, b);
      out(ja, b) = std::clamp(dot / (norms(ja) * norms(b)), -1.0, 1.0);
    }
  });
  for (Eigen::Index a = 0; a < p; ++a)
    for (Eigen::Index b = a + 1; b < p; ++b) out(b, a) = out(a, b);
  return out;
}

}  // namespace

double cosine(const RealVector& x, const RealVector& y) {
  double dot = 0.0, xx = 0.0, yy = 0.0;
  for (Eigen::Index i = 0; i < x.size(); ++i) {
    dot += x(i) * y(i);
    xx += x(i) * x(i);
    yy += y(i) * y(i);
  }
  return dot / (std::sqrt(xx) * std::sqrt(yy));
}

double pearson(const RealVector& x, const RealVector& y) {
  const RealVector cx = x.array() - x.mean();
  const RealVector cy = y.array() - y.mean();
  return cosine(cx, cy);
}

SimilarityMatrix cosine_matrix(const LabeledMatrix& m, Orientation orientation,
                               unsigned threads) {
  SimilarityMatrix sim;
  sim.kind = SimilarityKind::Cosine;
  const RealMatrix x = as_variables(m, orientation, sim.labels);
  for (Eigen::Index j = 0; j < x.cols(); ++j) {
    if ((x.col(j).array() == 0.0).all())
      throw DataError("cosine: zero vector for '" + sim.labels[j] + "'");
  }
  sim.values = column_cosines(x, threads);
  return sim;
}

SimilarityMatrix pearson_matrix(const LabeledMatrix& m, Orientation orientation,
                                unsigned threads) {
  SimilarityMatrix sim;
  sim.kind = SimilarityKind::Pearson;
  std::vector<std::string> labels;
  const RealMatrix x = as_variables(m, orientation, labels);
  std::vector<Eigen::Index> kept;
  for (Eigen::Index j = 0; j < x.cols(); ++j) {
    const auto col = x.col(j);
    if ((col.array() == col(0)).all()) {
      sim.dropped.push_back(labels[j]);
    } else {
      kept.push_back(j);
      sim.labels.push_back(labels[j]);
    }
  }
  RealMatrix centered = x(Eigen::all, kept);
  for (Eigen::Index j = 0; j < centered.cols(); ++j)
    centered.col(j).array() -= centered.col(j).mean();
  sim.values = column_cosines(centered, threads);
  return sim;
}

CoocMatrix cooccurrence(const WordDocMatrix& m, CoocMode mode) {
  CoocMatrix c;
  c.mode = mode;
  const CountMatrix& a = m.counts();
  if (mode == CoocMode::Words) {
    c.values = a.transpose() * a;
    c.labels = m.col_labels();
  } else {
    c.values = a * a.transpose();
    c.labels = m.row_labels();
  }
  return c;
}

Graph threshold_graph(const RealMatrix& values,
                      const std::vector<std::string>& labels, double threshold,
                      ThresholdRule rule) {
  if (values.rows() != values.cols() ||
      static_cast<std::size_t>(values.rows()) != labels.size())
    throw DataError("threshold_graph: matrix must be square and labelled");
  Graph g;
  for (const auto& l : labels) g.add_node({l, std::nullopt, 1.0});
  for (Eigen::Index a = 0; a < values.rows(); ++a) {
    for (Eigen::Index b = a + 1; b < values.cols(); ++b) {
      const double v = values(a, b);
      const bool pass = rule == ThresholdRule::GreaterOrEqual ? v >= threshold
                                                              : v > threshold;
      if (pass)
        g.add_edge(static_cast<std::size_t>(a), static_cast<std::size_t>(b), v);
    }
  }
  return g;
}

Graph threshold_graph(const SimilarityMatrix& sim, double threshold,
                      ThresholdRule rule) {
  return threshold_graph(sim.values, sim.labels, threshold, rule);
}

Graph threshold_graph(const CoocMatrix& cooc, double threshold,
                      ThresholdRule rule) {
  return threshold_graph(cooc.values.cast<double>(), cooc.labels, threshold,
                         rule);
}

}  // namespace coword
