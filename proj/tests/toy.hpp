#pragma once

// Randomized toy reconstructability instances: samples on a ground patch,
// views on a hemisphere band above them, visibility by a random mask.

#include <random>
#include <vector>

#include "oracles.hpp"

namespace toy {

using ovp::Vec3;

struct Instance {
  std::vector<ovp::SurfaceSample> samples;
  std::vector<ovp::ViewPoint> views;
  ovp::VisibilityMatrix vis;
  ovp::ReconWeights weights;

  ovp::ReconContext context() const {
    ovp::ReconContext c;
    c.samples = samples;
    c.views = views;
    c.vis = &vis;
    c.weights = weights;
    return c;
  }
};

inline Instance make(std::size_t n_samples, std::size_t n_views, double p_visible, std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> u(0, 1);
  Instance in;
  for (std::size_t i = 0; i < n_samples; ++i) {
    ovp::SurfaceSample s;
    s.position = Vec3(40 * u(rng), 40 * u(rng), 0);
    s.normal = (Vec3(0.3 * (u(rng) - 0.5), 0.3 * (u(rng) - 0.5), 1)).normalized();
    s.id = static_cast<std::uint32_t>(i);
    in.samples.push_back(s);
  }
  for (std::size_t i = 0; i < n_views; ++i) {
    const double az = 2 * ovp::kPi * u(rng), el = ovp::deg_to_rad(35 + 50 * u(rng)), r = 40 + 60 * u(rng);
    ovp::ViewPoint v;
    v.position = Vec3(20, 20, 0) + r * Vec3(std::cos(el) * std::cos(az), std::cos(el) * std::sin(az), std::sin(el));
    v.direction = (Vec3(20, 20, 0) - v.position).normalized();
    v.id = static_cast<std::uint32_t>(i);
    in.views.push_back(v);
  }
  std::vector<std::vector<std::uint32_t>> cols(n_views);
  for (std::size_t v = 0; v < n_views; ++v) {
    for (std::size_t s = 0; s < n_samples; ++s) {
      if (u(rng) < p_visible) cols[v].push_back(static_cast<std::uint32_t>(s));
    }
  }
  in.vis = ovp::VisibilityMatrix::from_columns(n_samples, std::move(cols));
  return in;
}

inline double brute_h(const Instance& in, std::size_t s, const std::vector<std::uint32_t>& set) {
  return oracle::h(s, set, in.samples, in.views, in.weights,
                   [&](std::size_t si, std::uint32_t v) { return in.vis.visible(static_cast<std::uint32_t>(si), v); });
}

}  // namespace toy
