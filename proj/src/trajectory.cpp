#include "ovp/trajectory.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <numeric>
#include <random>
#include <set>

namespace ovp {

EdgeCost edge_cost(const ViewPoint& a, const ViewPoint& b) {
  EdgeCost e;
  e.length = (b.position - a.position).norm();
  e.angle = angle_between(a.direction, b.direction);
  e.cost = e.length * std::exp(e.angle / std::max(e.length, kLengthFloor));
  return e;
}

std::string to_string(ClusterStrategy s) {
  switch (s) {
    case ClusterStrategy::direction: return "direction";
    case ClusterStrategy::height: return "height";
    case ClusterStrategy::hybrid: return "hybrid";
  }
  return "hybrid";
}

ClusterStrategy cluster_strategy_from_string(const std::string& s) {
  if (s == "direction") return ClusterStrategy::direction;
  if (s == "height") return ClusterStrategy::height;
  if (s == "hybrid") return ClusterStrategy::hybrid;
  throw ValidationError("unknown cluster strategy '" + s + "'");
}

void ClusterSpec::validate() const {
  if (capacity <= 1) throw ValidationError("cluster capacity must exceed 1");
  if (direction_bins == 0) throw ValidationError("direction_bins must be positive");
  if (!(height_band > 0)) throw ValidationError("height_band must be positive");
}

namespace {

std::vector<Vec3> fibonacci_sphere(std::size_t k) {
  const double golden = kPi * (3.0 - std::sqrt(5.0));
  std::vector<Vec3> pts(k);
  for (std::size_t i = 0; i < k; ++i) {
    const double z = 1.0 - (2.0 * i + 1.0) / static_cast<double>(k);
    const double r = std::sqrt(std::max(0.0, 1.0 - z * z));
    pts[i] = Vec3(r * std::cos(i * golden), r * std::sin(i * golden), z);
  }
  return pts;
}

std::vector<Cluster> split_by_direction(std::span<const ViewPoint> views, const Cluster& members, std::size_t bins,
                                        int iterations) {
  const std::size_t k = std::min(bins, members.size());
  std::vector<Vec3> protos = fibonacci_sphere(k);
  std::vector<std::size_t> assign(members.size(), 0);
  auto nearest = [&](const Vec3& d) {
    std::size_t best = 0;
    for (std::size_t p = 1; p < protos.size(); ++p) {
      if (protos[p].dot(d) > protos[best].dot(d)) best = p;
    }
    return best;
  };
  for (std::size_t m = 0; m < members.size(); ++m) assign[m] = nearest(views[members[m]].direction);
  for (int it = 0; it < iterations; ++it) {
    std::vector<Vec3> sum(k, Vec3::Zero());
    for (std::size_t m = 0; m < members.size(); ++m) sum[assign[m]] += views[members[m]].direction;
    for (std::size_t p = 0; p < k; ++p) {
      if (sum[p].norm() > 1e-12) protos[p] = sum[p].normalized();
    }
    bool changed = false;
    for (std::size_t m = 0; m < members.size(); ++m) {
      const std::size_t a = nearest(views[members[m]].direction);
      changed |= a != assign[m];
      assign[m] = a;
    }
    if (!changed) break;
  }
  std::vector<Cluster> groups(k);
  for (std::size_t m = 0; m < members.size(); ++m) groups[assign[m]].push_back(members[m]);
  std::erase_if(groups, [](const Cluster& c) { return c.empty(); });
  return groups;
}

std::vector<Cluster> split_by_height(std::span<const ViewPoint> views, const Cluster& members, double band) {
  std::map<long, Cluster> bands;
  for (auto m : members) bands[static_cast<long>(std::floor(views[m].position.z() / band))].push_back(m);
  std::vector<Cluster> out;
  for (auto& [key, c] : bands) out.push_back(std::move(c));
  return out;
}

// Spatial k-means with farthest-point seeding; recursively enforces capacity.
void split_to_capacity(std::span<const ViewPoint> views, Cluster members, std::size_t capacity,
                       std::vector<Cluster>& out) {
  if (members.size() <= capacity) {
    out.push_back(std::move(members));
    return;
  }
  const std::size_t k = (members.size() + capacity - 1) / capacity;
  std::vector<Vec3> centers{views[members.front()].position};
  while (centers.size() < k) {
    std::size_t far = 0;
    double far_d = -1;
    for (std::size_t m = 0; m < members.size(); ++m) {
      double d = std::numeric_limits<double>::infinity();
      for (const auto& c : centers) d = std::min(d, (views[members[m]].position - c).squaredNorm());
      if (d > far_d) {
        far_d = d;
        far = m;
      }
    }
    centers.push_back(views[members[far]].position);
  }
  std::vector<std::size_t> assign(members.size(), 0);
  for (int it = 0; it < 30; ++it) {
    bool changed = false;
    for (std::size_t m = 0; m < members.size(); ++m) {
      std::size_t best = 0;
      for (std::size_t c = 1; c < k; ++c) {
        if ((views[members[m]].position - centers[c]).squaredNorm() <
            (views[members[m]].position - centers[best]).squaredNorm()) {
          best = c;
        }
      }
      changed |= best != assign[m];
      assign[m] = best;
    }
    std::vector<Vec3> sum(k, Vec3::Zero());
    std::vector<std::size_t> count(k, 0);
    for (std::size_t m = 0; m < members.size(); ++m) {
      sum[assign[m]] += views[members[m]].position;
      ++count[assign[m]];
    }
    for (std::size_t c = 0; c < k; ++c) {
      if (count[c]) centers[c] = sum[c] / static_cast<double>(count[c]);
    }
    if (!changed && it > 0) break;
  }
  std::vector<Cluster> parts(k);
  for (std::size_t m = 0; m < members.size(); ++m) parts[assign[m]].push_back(members[m]);
  std::erase_if(parts, [](const Cluster& c) { return c.empty(); });
  if (parts.size() == 1) {
    // Coincident positions: fall back to contiguous chunks.
    parts.clear();
    for (std::size_t i = 0; i < members.size(); i += capacity) {
      parts.emplace_back(members.begin() + i, members.begin() + std::min(members.size(), i + capacity));
    }
  }
  for (auto& p : parts) split_to_capacity(views, std::move(p), capacity, out);
}

}  // namespace

std::vector<Cluster> cluster(std::span<const ViewPoint> views, const ClusterSpec& spec) {
  spec.validate();
  if (views.empty()) return {};
  Cluster all(views.size());
  std::iota(all.begin(), all.end(), 0u);

  std::vector<Cluster> groups;
  switch (spec.strategy) {
    case ClusterStrategy::direction:
      groups = split_by_direction(views, all, spec.direction_bins, spec.lloyd_iterations);
      break;
    case ClusterStrategy::height:
      groups = split_by_height(views, all, spec.height_band);
      break;
    case ClusterStrategy::hybrid:
      for (auto& g : split_by_direction(views, all, spec.direction_bins, spec.lloyd_iterations)) {
        for (auto& b : split_by_height(views, g, spec.height_band)) groups.push_back(std::move(b));
      }
      break;
  }
  std::vector<Cluster> out;
  for (auto& g : groups) split_to_capacity(views, std::move(g), spec.capacity, out);
  for (auto& c : out) std::sort(c.begin(), c.end());
  std::sort(out.begin(), out.end(), [](const Cluster& a, const Cluster& b) { return a.front() < b.front(); });
  return out;
}

void GaParams::validate() const {
  if (population < 2) throw ValidationError("GA population must be >= 2");
  if (tournament < 1) throw ValidationError("GA tournament size must be >= 1");
  if (!(mutation >= 0 && mutation <= 1)) throw ValidationError("GA mutation probability must be in [0, 1]");
  if (elites >= population) throw ValidationError("GA elite count must be below the population");
}

double path_cost(std::span<const ViewPoint> views, std::span<const std::uint32_t> order) {
  double c = 0.0;
  for (std::size_t i = 1; i < order.size(); ++i) c += edge_cost(views[order[i - 1]], views[order[i]]).cost;
  return c;
}

std::vector<std::uint32_t> nearest_neighbor_order(std::span<const ViewPoint> views, std::uint32_t start) {
  std::vector<char> used(views.size(), 0);
  std::vector<std::uint32_t> order{start};
  used[start] = 1;
  while (order.size() < views.size()) {
    std::uint32_t best = 0;
    double best_c = std::numeric_limits<double>::infinity();
    for (std::uint32_t j = 0; j < views.size(); ++j) {
      if (used[j]) continue;
      const double c = edge_cost(views[order.back()], views[j]).cost;
      if (c < best_c) {
        best_c = c;
        best = j;
      }
    }
    used[best] = 1;
    order.push_back(best);
  }
  return order;
}

Tour solve_tour(std::span<const ViewPoint> views, const Vec3& launch, std::uint64_t seed, const GaParams& ga) {
  ga.validate();
  const std::size_t n = views.size();
  if (n == 0) return {};
  std::uint32_t start = 0;
  for (std::uint32_t i = 1; i < n; ++i) {
    if ((views[i].position - launch).norm() < (views[start].position - launch).norm()) start = i;
  }
  if (n == 1) return {{start}, 0.0};

  std::vector<double> cost(n * n);
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = 0; j < n; ++j) cost[i * n + j] = i == j ? 0.0 : edge_cost(views[i], views[j]).cost;
  }
  using Genome = std::vector<std::uint32_t>;  // every node except start
  auto genome_cost = [&](const Genome& g) {
    double c = cost[start * n + g[0]];
    for (std::size_t i = 1; i < g.size(); ++i) c += cost[g[i - 1] * n + g[i]];
    return c;
  };

  std::mt19937_64 rng(seed);
  std::vector<Genome> pop;
  Genome identity;
  for (std::uint32_t i = 0; i < n; ++i) {
    if (i != start) identity.push_back(i);
  }
  pop.push_back(identity);
  {
    auto nn = nearest_neighbor_order(views, start);
    pop.emplace_back(nn.begin() + 1, nn.end());
  }
  while (pop.size() < ga.population) {
    Genome g = identity;
    std::shuffle(g.begin(), g.end(), rng);
    pop.push_back(std::move(g));
  }
  std::vector<double> fitness(pop.size());
  for (std::size_t i = 0; i < pop.size(); ++i) fitness[i] = genome_cost(pop[i]);

  const std::size_t m = identity.size();
  std::uniform_int_distribution<std::size_t> pick(0, pop.size() - 1);
  std::uniform_int_distribution<std::size_t> locus(0, m - 1);
  std::uniform_real_distribution<double> unit(0.0, 1.0);
  auto tournament = [&]() -> const Genome& {
    std::size_t best = pick(rng);
    for (std::size_t t = 1; t < ga.tournament; ++t) {
      const std::size_t c = pick(rng);
      if (fitness[c] < fitness[best] || (fitness[c] == fitness[best] && c < best)) best = c;
    }
    return pop[best];
  };

  std::vector<std::size_t> rank(pop.size());
  std::vector<char> present(n, 0);
  for (std::size_t gen = 0; gen < ga.generations && m > 1; ++gen) {
    std::iota(rank.begin(), rank.end(), 0u);
    std::stable_sort(rank.begin(), rank.end(), [&](std::size_t a, std::size_t b) { return fitness[a] < fitness[b]; });
    std::vector<Genome> next;
    next.reserve(pop.size());
    std::set<Genome> seen;
    for (std::size_t e = 0; e < ga.elites; ++e) {
      next.push_back(pop[rank[e]]);
      seen.insert(pop[rank[e]]);
    }
    while (next.size() < pop.size()) {
      const Genome& p1 = tournament();
      const Genome& p2 = tournament();
      std::size_t i = locus(rng), j = locus(rng);
      if (i > j) std::swap(i, j);
      Genome child(m);
      std::fill(present.begin(), present.end(), 0);
      for (std::size_t k = i; k <= j; ++k) {
        child[k] = p1[k];
        present[p1[k]] = 1;
      }
      std::size_t write = (j + 1) % m;
      for (std::size_t k = 0; k < m; ++k) {
        const std::uint32_t gene = p2[(j + 1 + k) % m];
        if (present[gene]) continue;
        child[write] = gene;
        write = (write + 1) % m;
      }
      if (unit(rng) < ga.mutation) std::swap(child[locus(rng)], child[locus(rng)]);
      // Duplicates are replaced by random immigrants to keep the population diverse.
      if (!seen.insert(child).second) {
        std::shuffle(child.begin(), child.end(), rng);
        seen.insert(child);
      }
      next.push_back(std::move(child));
    }
    pop = std::move(next);
    for (std::size_t k = 0; k < pop.size(); ++k) fitness[k] = genome_cost(pop[k]);
  }

  std::size_t best = 0;
  for (std::size_t k = 1; k < pop.size(); ++k) {
    if (fitness[k] < fitness[best]) best = k;
  }
  Tour tour;
  tour.order.push_back(start);
  tour.order.insert(tour.order.end(), pop[best].begin(), pop[best].end());
  tour.cost = fitness[best];
  return tour;
}

void FlightParams::validate() const {
  if (!(speed > 0 && trigger_interval > 0 && endurance > 0)) {
    throw ValidationError("flight speed, trigger interval and endurance must be positive");
  }
  if (!(hover >= 0)) throw ValidationError("hover overhead must be non-negative");
}

std::size_t FlightPlan::view_point_images() const {
  std::size_t n = 0;
  for (const auto& s : sorties) n += s.view_point_images;
  return n;
}

std::size_t FlightPlan::interpolated_images() const {
  std::size_t n = 0;
  for (const auto& s : sorties) n += s.interpolated_images;
  return n;
}

Vec3 slerp(const Vec3& a, const Vec3& b, double t) {
  const double omega = angle_between(a, b);
  if (omega < 1e-9) return ((1 - t) * a + t * b).normalized();
  if (kPi - omega < 1e-9) {
    // Antipodal: rotate through any perpendicular.
    Vec3 axis = a.unitOrthogonal();
    return Eigen::AngleAxisd(t * kPi, axis) * a;
  }
  const double so = std::sin(omega);
  return (std::sin((1 - t) * omega) / so * a + std::sin(t * omega) / so * b).normalized();
}

namespace {

struct Leg {
  std::vector<Waypoint> waypoints;  // excludes the start viewpoint, ends with the target viewpoint
  double length = 0;
};

Waypoint view_waypoint(const ViewPoint& v) {
  return {v.position, v.direction, true, WaypointKind::view_point, static_cast<std::int64_t>(v.id)};
}

Leg build_leg(const ViewPoint& a, const ViewPoint& b, const FlightParams& params, const SafeZone& zone) {
  Leg leg;
  const double step = params.speed * params.trigger_interval;
  if (zone.segment_free(a.position, b.position)) {
    const double len = (b.position - a.position).norm();
    const auto n = static_cast<std::size_t>(std::floor(len / step));
    for (std::size_t k = 1; k <= n; ++k) {
      const double t = static_cast<double>(k) / static_cast<double>(n + 1);
      leg.waypoints.push_back({a.position + t * (b.position - a.position), slerp(a.direction, b.direction, t), true,
                               WaypointKind::interpolated, -1});
    }
    leg.waypoints.push_back(view_waypoint(b));
    leg.length = len;
    return leg;
  }
  // Climb, traverse above every forbidden voxel, descend. No triggers.
  const double z = std::max({zone.max_forbidden_altitude() + zone.cell(), a.position.z(), b.position.z()});
  const Vec3 up_a(a.position.x(), a.position.y(), z);
  const Vec3 up_b(b.position.x(), b.position.y(), z);
  std::vector<Vec3> path{a.position};
  for (const Vec3& p : {up_a, up_b}) {
    if ((p - path.back()).norm() > 1e-9) path.push_back(p);
  }
  if ((b.position - path.back()).norm() > 1e-9) path.push_back(b.position);
  for (std::size_t k = 1; k < path.size(); ++k) {
    if (!zone.segment_free(path[k - 1], path[k])) {
      throw InfeasibleError("no vertical detour between viewpoints " + std::to_string(a.id) + " and " +
                            std::to_string(b.id));
    }
    leg.length += (path[k] - path[k - 1]).norm();
  }
  for (std::size_t k = 1; k + 1 < path.size(); ++k) {
    leg.waypoints.push_back({path[k], k == 1 ? a.direction : b.direction, false, WaypointKind::interpolated, -1});
  }
  leg.waypoints.push_back(view_waypoint(b));
  return leg;
}

void tally(Sortie& s) {
  s.view_point_images = 0;
  s.interpolated_images = 0;
  for (const auto& w : s.waypoints) {
    if (!w.trigger) continue;
    if (w.kind == WaypointKind::view_point) ++s.view_point_images;
    else ++s.interpolated_images;
  }
}

}  // namespace

std::vector<Sortie> split_and_interpolate(std::span<const ViewPoint> tour, const FlightParams& params,
                                          const SafeZone& zone, std::size_t cluster_index) {
  params.validate();
  std::vector<Sortie> sorties;
  if (tour.empty()) return sorties;
  if (params.hover > params.endurance) {
    throw InfeasibleError("hover overhead alone exceeds the endurance");
  }
  Sortie current;
  current.cluster = cluster_index;
  current.waypoints.push_back(view_waypoint(tour[0]));
  current.time = params.hover;
  for (std::size_t i = 1; i < tour.size(); ++i) {
    Leg leg = build_leg(tour[i - 1], tour[i], params, zone);
    const double leg_time = leg.length / params.speed;
    if (leg_time > params.endurance) {
      throw InfeasibleError("leg between viewpoints " + std::to_string(tour[i - 1].id) + " and " +
                            std::to_string(tour[i].id) + " needs " + std::to_string(leg_time) +
                            " s, more than the endurance");
    }
    if (current.time + leg_time + params.hover <= params.endurance) {
      current.waypoints.insert(current.waypoints.end(), leg.waypoints.begin(), leg.waypoints.end());
      current.length += leg.length;
      current.time += leg_time + params.hover;
    } else {
      tally(current);
      sorties.push_back(std::move(current));
      current = Sortie{};
      current.cluster = cluster_index;
      current.waypoints.push_back(view_waypoint(tour[i]));
      current.time = params.hover;
    }
  }
  tally(current);
  sorties.push_back(std::move(current));
  return sorties;
}

}  // namespace ovp
