#pragma once

#include <cstdint>
#include <functional>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include <Eigen/Dense>

namespace coword {

using RealMatrix = Eigen::MatrixXd;
using RealVector = Eigen::VectorXd;
using CountMatrix = Eigen::Matrix<std::int64_t, Eigen::Dynamic, Eigen::Dynamic>;

// Error categories map onto the CLI exit statuses (1 usage, 2 data, 3 I/O).
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
  virtual int exit_status() const = 0;
};

class UsageError : public Error {
 public:
  using Error::Error;
  int exit_status() const override { return 1; }
};

class DataError : public Error {
 public:
  using Error::Error;
  int exit_status() const override { return 2; }
};

class IoError : public Error {
 public:
  using Error::Error;
  int exit_status() const override { return 3; }
};

enum class Orientation { Columns, Rows };

enum class CellMode { Counts, TfIdf, ObsExp };

std::string to_string(CellMode mode);
CellMode parse_cell_mode(const std::string& name);

/// A dense real matrix with row and column labels (documents x terms for
/// the 2-mode case).
struct LabeledMatrix {
  RealMatrix values;
  std::vector<std::string> row_labels;
  std::vector<std::string> col_labels;

  LabeledMatrix transposed() const {
    return {values.transpose(), col_labels, row_labels};
  }
};

enum class EdgeStyle { Solid, Dotted };

struct Node {
  std::string label;
  std::optional<int> group;  // 0-based factor index, if colored
  double size = 1.0;         // drives the SVG radius (term frequency)
};

struct Edge {
  std::size_t a = 0;
  std::size_t b = 0;
  double weight = 1.0;
  EdgeStyle style = EdgeStyle::Solid;
};

/// Undirected weighted graph. No self-loops, labels unique.
class Graph {
 public:
  Graph() = default;

  std::size_t add_node(Node node);
  void add_edge(std::size_t a, std::size_t b, double weight,
                EdgeStyle style = EdgeStyle::Solid);

  const std::vector<Node>& nodes() const { return nodes_; }
  std::vector<Node>& nodes() { return nodes_; }
  const std::vector<Edge>& edges() const { return edges_; }
  std::size_t node_count() const { return nodes_.size(); }
  std::size_t edge_count() const { return edges_.size(); }

  /// Adjacency lists in node order, neighbours in edge insertion order.
  std::vector<std::vector<std::size_t>> adjacency() const;

  /// Subgraph induced by `members` (in the given order).
  Graph induced(const std::vector<std::size_t>& members) const;

  friend bool operator==(const Graph&, const Graph&);

 private:
  std::vector<Node> nodes_;
  std::vector<Edge> edges_;
};

bool operator==(const Node& x, const Node& y);
bool operator==(const Edge& x, const Edge& y);

/// Runs fn(i) for i in [0, n) on up to `threads` workers. Each index is
/// processed exactly once; callers write only to slot i so results do not
/// depend on the thread count.
void parallel_for(std::size_t n, unsigned threads,
                  const std::function<void(std::size_t)>& fn);

}  // namespace coword
