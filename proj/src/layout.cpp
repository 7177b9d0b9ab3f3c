#include "coword/layout.hpp"

#include <algorithm>
#include <cmath>
#include <deque>
#include <limits>
#include <numbers>

namespace coword {

Point LayoutRng::unit_vector() {
  const double angle = 2.0 * std::numbers::pi * uniform();
  return {std::cos(angle), std::sin(angle)};
}

std::vector<Point> random_placement(std::size_t n, std::uint64_t seed,
                                    double side) {
  LayoutRng rng(seed);
  std::vector<Point> pts(n);
  for (auto& p : pts) {
    p.x = rng.uniform() * side;
    p.y = rng.uniform() * side;
  }
  return pts;
}

std::vector<Point> normalize_to_unit_square(std::vector<Point> points) {
  if (points.empty()) return points;
  double min_x = points[0].x, max_x = points[0].x;
  double min_y = points[0].y, max_y = points[0].y;
  for (const auto& p : points) {
    min_x = std::min(min_x, p.x);
    max_x = std::max(max_x, p.x);
    min_y = std::min(min_y, p.y);
    max_y = std::max(max_y, p.y);
  }
  const double extent = std::max(max_x - min_x, max_y - min_y);
  const double cx = 0.5 * (min_x + max_x);
  const double cy = 0.5 * (min_y + max_y);
  for (auto& p : points) {
    if (extent > 0.0) {
      p.x = 0.5 + (p.x - cx) / extent;
      p.y = 0.5 + (p.y - cy) / extent;
    } else {
      p = {0.5, 0.5};
    }
    p.x = std::clamp(p.x, 0.0, 1.0);
    p.y = std::clamp(p.y, 0.0, 1.0);
  }
  return points;
}

FrRun fruchterman_reingold_raw(const Graph& g, const FrOptions& opts) {
  const std::size_t n = g.node_count();
  if (n == 0) throw DataError("cannot lay out an empty graph");
  const double area = 1.0;
  FrRun run;
  run.kappa = std::sqrt(area / static_cast<double>(n));
  const double k = run.kappa;
  const double k2 = k * k;
  LayoutRng rng(opts.seed);
  run.raw.resize(n);
  for (auto& p : run.raw) {
    p.x = rng.uniform();
    p.y = rng.uniform();
  }
  auto& pos = run.raw;
  const double t0 = 0.1 * std::sqrt(area);
  std::vector<Point> disp(n);
  for (int it = 0; it < opts.iterations; ++it) {
    const double temp =
        t0 * (1.0 - static_cast<double>(it) / static_cast<double>(opts.iterations));
    std::fill(disp.begin(), disp.end(), Point{});
    for (std::size_t a = 0; a < n; ++a) {
      for (std::size_t b = a + 1; b < n; ++b) {
        double dx = pos[a].x - pos[b].x;
        double dy = pos[a].y - pos[b].y;
        double d2 = dx * dx + dy * dy;
        if (d2 < kCoincidentEpsilon * kCoincidentEpsilon) {
          const Point u = rng.unit_vector();
          dx = u.x * kCoincidentEpsilon;
          dy = u.y * kCoincidentEpsilon;
          d2 = kCoincidentEpsilon * kCoincidentEpsilon;
        }
        // Repulsion k^2/d along (dx, dy)/d.
        const double s = k2 / d2;
        disp[a].x += dx * s;
        disp[a].y += dy * s;
        disp[b].x -= dx * s;
        disp[b].y -= dy * s;
      }
    }
    for (const auto& e : g.edges()) {
      const double dx = pos[e.a].x - pos[e.b].x;
      const double dy = pos[e.a].y - pos[e.b].y;
      const double d = std::hypot(dx, dy);
      if (d < kCoincidentEpsilon) continue;
      const double w = opts.use_weights ? e.weight : 1.0;
      const double f = d * d / k * w;
      disp[e.a].x -= dx / d * f;
      disp[e.a].y -= dy / d * f;
      disp[e.b].x += dx / d * f;
      disp[e.b].y += dy / d * f;
    }
    for (std::size_t v = 0; v < n; ++v) {
      const double len = std::hypot(disp[v].x, disp[v].y);
      if (len <= 0.0) continue;
      const double step = std::min(len, temp);
      pos[v].x += disp[v].x / len * step;
      pos[v].y += disp[v].y / len * step;
    }
  }
  return run;
}

Layout fruchterman_reingold(const Graph& g, const FrOptions& opts) {
  FrRun run = fruchterman_reingold_raw(g, opts);
  return {normalize_to_unit_square(std::move(run.raw)), "fr", opts.seed,
          opts.iterations};
}

std::vector<std::vector<int>> hop_distances(const Graph& g) {
  const std::size_t n = g.node_count();
  const auto adj = g.adjacency();
  std::vector<std::vector<int>> dist(n, std::vector<int>(n, -1));
  for (std::size_t s = 0; s < n; ++s) {
    std::deque<std::size_t> queue{s};
    dist[s][s] = 0;
    while (!queue.empty()) {
      const std::size_t v = queue.front();
      queue.pop_front();
      for (auto u : adj[v]) {
        if (dist[s][u] < 0) {
          dist[s][u] = dist[s][v] + 1;
          queue.push_back(u);
        }
      }
    }
  }
  return dist;
}

double kk_stress(const std::vector<Point>& positions,
                 const std::vector<std::vector<int>>& hops, double edge_length) {
  double total = 0.0;
  for (std::size_t a = 0; a < positions.size(); ++a) {
    for (std::size_t b = a + 1; b < positions.size(); ++b) {
      const double d = hops[a][b];
      const double gap =
          std::hypot(positions[a].x - positions[b].x,
                     positions[a].y - positions[b].y) -
          edge_length * d;
      total += gap * gap / (d * d);
    }
  }
  return total;
}

namespace {

struct KkSystem {
  const std::vector<std::vector<int>>& hops;
  double edge_length;

  // Stress terms involving node m placed at p.
  double local_energy(const std::vector<Point>& pos, std::size_t m,
                      Point p) const {
    double e = 0.0;
    for (std::size_t i = 0; i < pos.size(); ++i) {
      if (i == m) continue;
      const double d = hops[m][i];
      const double gap =
          std::hypot(p.x - pos[i].x, p.y - pos[i].y) - edge_length * d;
      e += gap * gap / (d * d);
    }
    return e;
  }

  // Half-gradient and half-Hessian of the stress with respect to node m.
  void derivatives(const std::vector<Point>& pos, std::size_t m, double& gx,
                   double& gy, double& hxx, double& hxy, double& hyy) const {
    gx = gy = hxx = hxy = hyy = 0.0;
    for (std::size_t i = 0; i < pos.size(); ++i) {
      if (i == m) continue;
      const double d = hops[m][i];
      const double k = 1.0 / (d * d);
      const double l = edge_length * d;
      const double dx = pos[m].x - pos[i].x;
      const double dy = pos[m].y - pos[i].y;
      const double dist = std::max(std::hypot(dx, dy), kCoincidentEpsilon);
      const double dist3 = dist * dist * dist;
      gx += k * (dx - l * dx / dist);
      gy += k * (dy - l * dy / dist);
      hxx += k * (1.0 - l * dy * dy / dist3);
      hxy += k * (l * dx * dy / dist3);
      hyy += k * (1.0 - l * dx * dx / dist3);
    }
  }
};

}  // namespace

KkRun kamada_kawai_raw(const Graph& g, const KkOptions& opts) {
  const std::size_t n = g.node_count();
  if (n == 0) throw DataError("cannot lay out an empty graph");
  const auto hops = hop_distances(g);
  int max_hop = 0;
  for (std::size_t a = 0; a < n; ++a) {
    for (std::size_t b = 0; b < n; ++b) {
      if (hops[a][b] < 0)
        throw DataError("kamada_kawai requires a connected graph ('" +
                        g.nodes()[a].label + "' cannot reach '" +
                        g.nodes()[b].label + "'); split components first");
      max_hop = std::max(max_hop, hops[a][b]);
    }
  }
  KkRun run;
  run.raw = random_placement(n, opts.seed,
                             opts.edge_length * std::max(1, max_hop));
  if (n == 1) {
    run.converged = true;
    return run;
  }
  const KkSystem sys{hops, opts.edge_length};
  auto& pos = run.raw;
  run.stress = kk_stress(pos, hops, opts.edge_length);

  std::vector<char> stalled(n, 0);
  const long budget = static_cast<long>(opts.max_iter) * static_cast<long>(n);
  while (run.steps < budget) {
    // Node with the largest gradient, skipping nodes that could not improve.
    std::size_t m = n;
    double best = -1.0;
    double max_grad = 0.0;
    for (std::size_t v = 0; v < n; ++v) {
      double gx, gy, hxx, hxy, hyy;
      sys.derivatives(pos, v, gx, gy, hxx, hxy, hyy);
      const double delta = std::hypot(gx, gy);
      max_grad = std::max(max_grad, delta);
      if (!stalled[v] && delta > best) {
        best = delta;
        m = v;
      }
    }
    if (max_grad < opts.tol) {
      run.converged = true;
      break;
    }
    if (m == n || best < opts.tol) break;

    bool moved = false;
    for (int inner = 0; inner < 100 && run.steps < budget; ++inner) {
      double gx, gy, hxx, hxy, hyy;
      sys.derivatives(pos, m, gx, gy, hxx, hxy, hyy);
      if (std::hypot(gx, gy) < opts.tol) break;
      const double det = hxx * hyy - hxy * hxy;
      double sx, sy;
      if (det > 0.0 && hxx > 0.0 && std::isfinite(det)) {
        sx = -(hyy * gx - hxy * gy) / det;
        sy = -(hxx * gy - hxy * gx) / det;
      } else {
        // Indefinite Hessian: plain gradient step scaled by the spring sum.
        double ks = 0.0;
        for (std::size_t i = 0; i < n; ++i)
          if (i != m) ks += 1.0 / (hops[m][i] * hops[m][i]);
        sx = -gx / ks;
        sy = -gy / ks;
      }
      const double before = sys.local_energy(pos, m, pos[m]);
      bool accepted = false;
      for (int halving = 0; halving < 50; ++halving) {
        const Point trial{pos[m].x + sx, pos[m].y + sy};
        const double after = sys.local_energy(pos, m, trial);
        if (after <= before) {
          pos[m] = trial;
          // Only terms touching m change, so the stress moves by the same
          // amount as the local energy.
          run.stress += after - before;
          run.stress_trace.push_back(run.stress);
          accepted = true;
          break;
        }
        sx *= 0.5;
        sy *= 0.5;
      }
      ++run.steps;
      if (!accepted) break;
      moved = true;
    }
    if (moved) {
      std::fill(stalled.begin(), stalled.end(), 0);
    } else {
      stalled[m] = 1;
    }
  }
  run.stress = kk_stress(pos, hops, opts.edge_length);
  return run;
}

Layout kamada_kawai(const Graph& g, const KkOptions& opts) {
  KkRun run = kamada_kawai_raw(g, opts);
  return {normalize_to_unit_square(std::move(run.raw)), "kk", opts.seed,
          run.steps};
}

std::vector<std::vector<std::size_t>> connected_components(const Graph& g) {
  const std::size_t n = g.node_count();
  const auto adj = g.adjacency();
  std::vector<char> seen(n, 0);
  std::vector<std::vector<std::size_t>> comps;
  for (std::size_t s = 0; s < n; ++s) {
    if (seen[s]) continue;
    std::vector<std::size_t> members;
    std::deque<std::size_t> queue{s};
    seen[s] = 1;
    while (!queue.empty()) {
      const auto v = queue.front();
      queue.pop_front();
      members.push_back(v);
      for (auto u : adj[v]) {
        if (!seen[u]) {
          seen[u] = 1;
          queue.push_back(u);
        }
      }
    }
    std::sort(members.begin(), members.end());
    comps.push_back(std::move(members));
  }
  return comps;
}

Layout split_and_pack(const Graph& g, const LayoutFn& layout_fn,
                      std::uint64_t seed, unsigned threads) {
  Layout out;
  out.seed = seed;
  if (g.node_count() == 0) return out;

  std::vector<std::vector<std::size_t>> blocks;
  std::vector<std::size_t> isolates;
  for (auto& c : connected_components(g)) {
    if (c.size() == 1) {
      isolates.push_back(c[0]);
    } else {
      blocks.push_back(std::move(c));
    }
  }
  // Stable: ties keep the order of the smallest member.
  std::stable_sort(blocks.begin(), blocks.end(),
                   [](const auto& x, const auto& y) { return x.size() > y.size(); });

  if (blocks.size() == 1 && isolates.empty()) {
    Layout direct = layout_fn(g, seed);
    direct.positions = normalize_to_unit_square(std::move(direct.positions));
    return direct;
  }

  std::vector<Layout> parts(blocks.size());
  parallel_for(blocks.size(), threads, [&](std::size_t c) {
    parts[c] = layout_fn(g.induced(blocks[c]), seed + c);
  });

  std::vector<Point> pos(g.node_count());
  double x_offset = 0.0;
  double height = 0.0;
  const double largest = blocks.empty() ? 1.0 : static_cast<double>(blocks[0].size());
  for (std::size_t c = 0; c < blocks.size(); ++c) {
    const double scale = std::sqrt(static_cast<double>(blocks[c].size()) / largest);
    for (std::size_t i = 0; i < blocks[c].size(); ++i) {
      const Point p = parts[c].positions[i];
      pos[blocks[c][i]] = {x_offset + p.x * scale, p.y * scale};
    }
    x_offset += scale + kPackGutter;
    height = std::max(height, scale);
    if (c == 0) {
      out.algorithm = parts[c].algorithm;
      out.iterations = parts[c].iterations;
    }
  }
  if (!isolates.empty()) {
    const double width = blocks.empty() ? 1.0 : x_offset - kPackGutter;
    const double row_y = blocks.empty() ? 0.0 : height + kPackGutter;
    const double count = static_cast<double>(isolates.size());
    for (std::size_t i = 0; i < isolates.size(); ++i)
      pos[isolates[i]] = {width * (static_cast<double>(i) + 0.5) / count, row_y};
  }
  out.positions = normalize_to_unit_square(std::move(pos));
  return out;
}

}  // namespace coword
