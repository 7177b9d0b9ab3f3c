#include "coword/common.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <exception>
#include <mutex>
#include <thread>
#include <unordered_set>

namespace coword {

std::string to_string(CellMode mode) {
  switch (mode) {
    case CellMode::Counts: return "counts";
    case CellMode::TfIdf: return "tfidf";
    case CellMode::ObsExp: return "obsexp";
  }
  return "counts";
}

CellMode parse_cell_mode(const std::string& name) {
  if (name == "counts") return CellMode::Counts;
  if (name == "tfidf") return CellMode::TfIdf;
  if (name == "obsexp") return CellMode::ObsExp;
  throw UsageError("invalid cells mode '" + name +
                   "' (valid: counts, tfidf, obsexp)");
}

std::size_t Graph::add_node(Node node) {
  if (node.label.empty()) throw DataError("graph node label must be non-empty");
  for (const auto& n : nodes_) {
    if (n.label == node.label)
      throw DataError("duplicate graph node label '" + node.label + "'");
  }
  nodes_.push_back(std::move(node));
  return nodes_.size() - 1;
}

void Graph::add_edge(std::size_t a, std::size_t b, double weight,
                     EdgeStyle style) {
  if (a >= nodes_.size() || b >= nodes_.size())
    throw DataError("edge endpoint out of range");
  if (a == b) throw DataError("self-loop on '" + nodes_[a].label + "'");
  if (!std::isfinite(weight)) throw DataError("non-finite edge weight");
  edges_.push_back({a, b, weight, style});
}

std::vector<std::vector<std::size_t>> Graph::adjacency() const {
  std::vector<std::vector<std::size_t>> adj(nodes_.size());
  for (const auto& e : edges_) {
    adj[e.a].push_back(e.b);
    adj[e.b].push_back(e.a);
  }
  return adj;
}

Graph Graph::induced(const std::vector<std::size_t>& members) const {
  Graph sub;
  std::vector<std::size_t> remap(nodes_.size(), nodes_.size());
  for (std::size_t i = 0; i < members.size(); ++i) {
    remap[members[i]] = i;
    sub.nodes_.push_back(nodes_[members[i]]);
  }
  for (const auto& e : edges_) {
    if (remap[e.a] < nodes_.size() && remap[e.b] < nodes_.size())
      sub.edges_.push_back({remap[e.a], remap[e.b], e.weight, e.style});
  }
  return sub;
}

bool operator==(const Node& x, const Node& y) {
  return x.label == y.label && x.group == y.group && x.size == y.size;
}

bool operator==(const Edge& x, const Edge& y) {
  return x.a == y.a && x.b == y.b && x.weight == y.weight && x.style == y.style;
}

bool operator==(const Graph& x, const Graph& y) {
  return x.nodes_ == y.nodes_ && x.edges_ == y.edges_;
}

void parallel_for(std::size_t n, unsigned threads,
                  const std::function<void(std::size_t)>& fn) {
  const std::size_t workers =
      std::min<std::size_t>(std::max(1u, threads), n);
  if (workers <= 1) {
    for (std::size_t i = 0; i < n; ++i) fn(i);
    return;
  }
  std::atomic<std::size_t> next{0};
  std::exception_ptr failure;
  std::mutex failure_mutex;
  auto work = [&] {
    for (std::size_t i = next++; i < n; i = next++) {
      try {
        fn(i);
      } catch (...) {
        std::lock_guard lock(failure_mutex);
        if (!failure) failure = std::current_exception();
      }
    }
  };
  std::vector<std::thread> pool;
  pool.reserve(workers - 1);
  for (std::size_t t = 1; t < workers; ++t) pool.emplace_back(work);
  work();
  for (auto& t : pool) t.join();
  if (failure) std::rethrow_exception(failure);
}

}  // namespace coword
