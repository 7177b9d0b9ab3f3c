#pragma once

#include <cstdint>
#include <functional>
#include <random>
#include <string>
#include <vector>

#include "coword/common.hpp"

namespace coword {

struct Point {
  double x = 0.0;
  double y = 0.0;

  friend bool operator==(const Point&, const Point&) = default;
};

/// Node positions in [0,1]^2, one per graph node.
struct Layout {
  std::vector<Point> positions;
  std::string algorithm;
  std::uint64_t seed = 0;
  int iterations = 0;
};

inline constexpr std::uint64_t kDefaultSeed = 42;

/// Seeded generator: std::mt19937_64, doubles from the top 53 bits.
class LayoutRng {
 public:
  explicit LayoutRng(std::uint64_t seed) : engine_(seed) {}
  double uniform() { return static_cast<double>(engine_() >> 11) * 0x1.0p-53; }
  Point unit_vector();

 private:
  std::mt19937_64 engine_;
};

std::vector<Point> random_placement(std::size_t n, std::uint64_t seed,
                                    double side = 1.0);

/// Uniform scale into the unit square, centred; aspect ratio preserved.
/// Degenerate extents collapse to 0.5.
std::vector<Point> normalize_to_unit_square(std::vector<Point> points);

struct FrOptions {
  int iterations = 500;
  std::uint64_t seed = kDefaultSeed;
  bool use_weights = false;
};

struct FrRun {
  std::vector<Point> raw;  // before normalization, in a unit-area frame
  double kappa = 0.0;      // optimal distance sqrt(area / |V|)
};

inline constexpr double kCoincidentEpsilon = 1e-9;

FrRun fruchterman_reingold_raw(const Graph& g, const FrOptions& opts);
Layout fruchterman_reingold(const Graph& g, const FrOptions& opts = {});

struct KkOptions {
  double tol = 1e-6;
  int max_iter = 1000;  // budget: max_iter * |V| single-node Newton steps
  double edge_length = 1.0;
  std::uint64_t seed = kDefaultSeed;
};

struct KkRun {
  std::vector<Point> raw;
  double stress = 0.0;
  std::vector<double> stress_trace;  // after each accepted update
  int steps = 0;
  bool converged = false;
};

/// All-pairs unweighted hop distances; -1 for unreachable pairs.
std::vector<std::vector<int>> hop_distances(const Graph& g);

/// Kamada-Kawai stress sum_{a<b} (|p_a - p_b| - L d_ab)^2 / d_ab^2.
double kk_stress(const std::vector<Point>& positions,
                 const std::vector<std::vector<int>>& hops, double edge_length);

/// Requires a connected graph (DataError otherwise).
KkRun kamada_kawai_raw(const Graph& g, const KkOptions& opts);
Layout kamada_kawai(const Graph& g, const KkOptions& opts = {});

/// Connected components, each sorted by node index, in order of their
/// smallest member.
std::vector<std::vector<std::size_t>> connected_components(const Graph& g);

using LayoutFn = std::function<Layout(const Graph&, std::uint64_t seed)>;

inline constexpr double kPackGutter = 0.05;

/// Lays out each multi-node component with seed + its rank, packs the boxes
/// left to right by descending node count with 5% gutters, puts isolated
/// nodes in a trailing row underneath, and renormalizes.
Layout split_and_pack(const Graph& g, const LayoutFn& layout_fn,
                      std::uint64_t seed, unsigned threads = 1);

}  // namespace coword
