// Acceptance suite: one PASS/FAIL line per criterion, nonzero exit when any
// criterion fails. Run with a criterion number to run just that one.

#include <chrono>
#include <cstdio>
#include <fstream>
#include <functional>
#include <iostream>
#include <map>
#include <sstream>
#include <thread>

#include "fixtures.hpp"
#include "oracles.hpp"
#include "toy.hpp"
#include "ovp/bvh.hpp"
#include "ovp/cli.hpp"
#include "ovp/pipeline.hpp"

using namespace ovp;

namespace {

struct Outcome {
  bool pass = false;
  std::string detail;
};

std::filesystem::path data_path(const char* name) { return std::filesystem::path(OVP_SOURCE_DIR) / "data" / name; }

std::string fmt(const char* f, double a) {
  char buf[128];
  std::snprintf(buf, sizeof buf, f, a);
  return buf;
}

Outcome c1_definitional() {
  std::mt19937_64 rng(101);
  std::size_t checked = 0, bad = 0;
  double worst = 0;
  for (int trial = 0; trial < 200; ++trial) {
    SceneSpec spec;
    spec.width = spec.depth = 80;
    spec.random.count = 1 + trial % 3;
    spec.random.max_height = 30;
    spec.seed = rng();
    const TriMesh m = generate_scene(spec);
    const Bvh bvh(m);
    auto samples = poisson_sample(m, 12, rng());
    samples.resize(std::min<std::size_t>(samples.size(), 1 + trial % 10));
    std::uniform_real_distribution<double> ux(-10, 90), uz(20, 80);
    std::vector<ViewPoint> views;
    const std::size_t nv = 2 + trial % 9;
    for (std::uint32_t i = 0; i < nv; ++i) {
      ViewPoint v;
      v.position = Vec3(ux(rng), ux(rng), uz(rng));
      const Vec3 target = samples[i % samples.size()].position;
      v.direction = (target - v.position).normalized();
      v.id = i;
      views.push_back(v);
    }
    CameraModel cam;
    const VisibilityMatrix vis = build_matrix(samples, views, cam, bvh, 1);
    ReconContext ctx{samples, views, &vis, ReconWeights{}};
    std::vector<std::uint32_t> set(nv);
    std::iota(set.begin(), set.end(), 0u);
    auto sees = [&](std::size_t s, std::uint32_t v) { return oracle::visible(samples[s], views[v], cam, m); };
    std::vector<double> hb(samples.size());
    for (std::size_t s = 0; s < samples.size(); ++s) {
      hb[s] = oracle::h(s, set, samples, views, ctx.weights, sees);
      const double ha = sample_h(static_cast<std::uint32_t>(s), set, ctx);
      const double rel = std::abs(ha - hb[s]) / std::max(std::abs(hb[s]), 1e-300);
      if (hb[s] == 0 ? ha != 0 : rel > 1e-12) ++bad;
      worst = std::max(worst, hb[s] == 0 ? 0 : rel);
      ++checked;
    }
    for (std::uint32_t v = 0; v < nv; ++v) {
      double rb = kSeesNone;
      for (std::size_t s = 0; s < samples.size(); ++s) {
        if (sees(s, v)) rb = std::min(rb, hb[s]);
      }
      const double ra = view_redundancy(v, set, ctx);
      if (rb == kSeesNone ? ra != kSeesNone : std::abs(ra - rb) > 1e-12 * std::max(rb, 1e-300) && rb != 0) ++bad;
      if (rb == 0 && ra != 0) ++bad;
      ++checked;
    }
  }
  return {bad == 0, std::to_string(checked) + " values, " + std::to_string(bad) + " mismatches, worst rel " +
                        fmt("%.2e", worst)};
}

Outcome c2_monotonicity() {
  std::mt19937_64 rng(202);
  std::uniform_real_distribution<double> u(0, 1);
  const ReconWeights w;
  std::size_t bad = 0;
  for (int i = 0; i < 1000; ++i) {
    SurfaceSample s;
    s.normal = oracle::random_unit(rng);
    const Vec3 vi = (20 + 150 * u(rng)) * oracle::random_unit(rng);
    const Vec3 vj = (20 + 150 * u(rng)) * oracle::random_unit(rng);
    const PairGeometry g = pair_geometry(s, vi, vj);
    const double q = pair_q(g, w);
    if (!(q >= 0 && q <= 1)) ++bad;
    if (q != pair_q(pair_geometry(s, vj, vi), w)) ++bad;
    PairGeometry far = g, steep = g;
    far.d_m += 30 * u(rng);
    steep.theta_m = std::min(kPi, g.theta_m + u(rng));
    if (pair_q(far, w) > q || pair_q(steep, w) > q) ++bad;

    const auto in = toy::make(1, 2 + i % 9, 0.8, rng());
    const auto ctx = in.context();
    std::vector<std::uint32_t> set;
    double prev = 0;
    for (std::uint32_t v = 0; v < in.views.size(); ++v) {
      set.push_back(v);
      const double h = sample_h(0, set, ctx);
      if (h < prev) ++bad;
      prev = h;
    }
  }
  return {bad == 0, "1000 cases, " + std::to_string(bad) + " violations"};
}

Outcome c3_visibility() {
  const TriMesh m = generate_scene(fixture::two_buildings());
  const Bvh bvh(m);
  const auto samples = poisson_sample(m, 5, 4);
  std::mt19937_64 rng(303);
  const Aabb b = m.bounds();
  std::uniform_real_distribution<double> ux(b.min.x() - 30, b.max.x() + 30), uy(b.min.y() - 30, b.max.y() + 30),
      uz(15, b.max.z() + 60);
  std::vector<ViewPoint> views;
  for (std::uint32_t i = 0; i < 50; ++i) {
    ViewPoint v;
    v.position = Vec3(ux(rng), uy(rng), uz(rng));
    v.direction = (samples[rng() % samples.size()].position - v.position).normalized();
    v.id = i;
    views.push_back(v);
  }
  CameraModel cam;
  const VisibilityMatrix vis = build_matrix(samples, views, cam, bvh);
  std::size_t agree = 0, total = 0, positives = 0;
  for (std::uint32_t s = 0; s < samples.size(); ++s) {
    for (std::uint32_t v = 0; v < views.size(); ++v) {
      const bool e = oracle::visible(samples[s], views[v], cam, m);
      positives += e;
      agree += vis.visible(s, v) == e;
      ++total;
    }
  }
  const bool ok = agree == total && samples.size() >= 200 && positives > 0;
  return {ok, std::to_string(samples.size()) + "x50 pairs, " + std::to_string(positives) + " visible, agreement " +
                  fmt("%.4f%%", 100.0 * agree / total)};
}

Outcome c4_optimizer() {
  std::size_t violations = 0, oracle_fail = 0, infeasible_mismatch = 0;
  for (std::uint64_t k = 0; k < 50; ++k) {
    const std::size_t nv = 4 + k % 9, ns = 1 + k % 8;
    const auto in = toy::make(ns, nv, 0.65, 4000 + k);
    PlannerConfig cfg;
    cfg.t_h = 0.15;
    cfg.neighbor_radius = 60;
    const PlanResult r = optimize(in.views, in.samples, in.vis, in.weights, cfg);
    std::vector<std::uint32_t> all(nv);
    std::iota(all.begin(), all.end(), 0u);
    std::vector<std::size_t> must;
    std::vector<std::uint32_t> infeasible;
    for (std::uint32_t s = 0; s < ns; ++s) {
      if (toy::brute_h(in, s, all) > cfg.t_h) must.push_back(s);
      else infeasible.push_back(s);
    }
    if (infeasible != r.infeasible_samples) ++infeasible_mismatch;
    for (auto s : must) {
      if (!(toy::brute_h(in, s, r.kept) > cfg.t_h)) ++violations;
    }
    const int best = oracle::min_feasible_subset(nv, must, cfg.t_h, [&](std::size_t s, const std::vector<std::uint32_t>& set) {
      return toy::brute_h(in, s, set);
    });
    if (best < 0 || static_cast<std::size_t>(best) > r.kept.size()) ++oracle_fail;
  }
  return {violations == 0 && oracle_fail == 0 && infeasible_mismatch == 0,
          "50 instances, " + std::to_string(violations) + " violations, " + std::to_string(oracle_fail) +
              " oracle failures, " + std::to_string(infeasible_mismatch) + " infeasible-set mismatches"};
}

Outcome c5_table2() {
  const RunConfig cfg = load_run_config(data_path("reference_plan.json"));
  const PlanRun run = run_plan(cfg);
  std::vector<ViewPoint> kept;
  for (auto id : run.plan.kept) kept.push_back(run.plan.views[id]);
  const EvalRun opt = run_evaluate(*run.mesh, kept, cfg);
  const EvalRun obl = run_evaluate(*run.mesh, run_baseline(*run.mesh, cfg), cfg);
  const double dl = opt.report.percent[0] - obl.report.percent[0];
  const double ratio = obl.facade_mean > 0 ? opt.facade_mean / obl.facade_mean : 0;
  std::ostringstream d;
  d << "level I optimized " << fmt("%.2f%%", opt.report.percent[0]) << " (" << kept.size() << " views) vs oblique "
    << fmt("%.2f%%", obl.report.percent[0]) << " (" << obl.views.size() << " views), facade mean h "
    << fmt("%.3f", opt.facade_mean) << " vs " << fmt("%.3f", obl.facade_mean) << " (ratio " << fmt("%.3f", ratio)
    << "); need +15 pp and ratio >= 2";
  return {dl >= 15.0 && ratio >= 2.0, d.str()};
}

Outcome c6_exactness() {
  std::size_t bad = 0;
  auto near = [&](double a, double b) {
    if (std::abs(a - b) > 1e-9 * std::max(1.0, std::abs(b))) ++bad;
  };
  {
    CameraModel c;
    c.fov = kPi / 2;
    c.view_distance = 100;
    c.max_range = 200;
    const auto p = disk_radius(c, 0.85);
    near(p.footprint, 200.0);
    near(p.disk_radius, 30.0);
  }
  {
    CameraModel c;
    c.fov = 1.1;
    c.view_distance = 80;
    const auto p = disk_radius(c, 0.85);
    near(p.footprint, 98.09683412610171);
    near(p.disk_radius, 14.714525118915256);
  }
  {
    CameraModel c;
    c.fov = kPi / 3;
    c.view_distance = 50;
    const auto p = disk_radius(c, 0.6);
    near(p.footprint, 57.735026918962575);  // 100 / sqrt(3)
    near(p.disk_radius, 23.09401076758503);
  }
  // Placement in open air: v = s + d n, o = -n.
  const TriMesh m = fixture::plane(2000, 2000);
  SafeZoneParams zp;
  zp.margin = 4;
  const SafeZone z = dilate(m, zp);
  std::vector<SurfaceSample> s(3);
  s[0].position = Vec3(1000, 1000, 0);
  s[0].normal = Vec3::UnitZ();
  s[1].position = Vec3(500, 700, 0);
  s[1].normal = Vec3(1, 2, 2).normalized();
  s[2].position = Vec3(1200, 300, 0);
  s[2].normal = Vec3(-3, 0, 4).normalized();
  CameraModel cam;
  const auto v = initial_viewpoints(s, cam, z, PlannerConfig{});
  const Vec3 expect[3] = {Vec3(1000, 1000, 80), Vec3(500 + 80.0 / 3, 700 + 160.0 / 3, 160.0 / 3),
                          Vec3(1200 - 48, 300, 64)};
  for (int i = 0; i < 3; ++i) {
    for (int k = 0; k < 3; ++k) {
      near(v[i].position[k], expect[i][k]);
      near(v[i].direction[k], -s[i].normal[k]);
    }
  }
  return {bad == 0, std::to_string(bad) + " mismatches over 3 radius cases and 3 placements"};
}

Outcome c7_tsp() {
  int exact = 0, over5 = 0;
  std::mt19937_64 rng(707);
  for (std::uint64_t k = 0; k < 100; ++k) {
    const std::size_t n = 2 + k % 7;
    std::uniform_real_distribution<double> u(0, 150), h(30, 90);
    std::vector<ViewPoint> v(n);
    for (std::uint32_t i = 0; i < n; ++i) {
      v[i].position = Vec3(u(rng), u(rng), h(rng));
      v[i].direction = oracle::random_unit(rng);
      v[i].id = i;
    }
    const Tour t = solve_tour(v, Vec3::Zero(), k);
    const double best = oracle::exhaustive_open_path(n, t.order.front(), [&](std::size_t a, std::size_t b) {
      const double l = (v[a].position - v[b].position).norm();
      return l * std::exp(oracle::angle(v[a].direction, v[b].direction) / std::max(l, 1.0));
    });
    if (t.cost <= best * (1 + 1e-12) + 1e-12) ++exact;
    if (t.cost > best * 1.05) ++over5;
  }
  return {exact >= 95 && over5 == 0,
          std::to_string(exact) + "/100 optimal, " + std::to_string(over5) + " runs more than 5% above optimum"};
}

Outcome c8_flight_safety() {
  const RunConfig cfg = load_run_config(data_path("reference_plan.json"));
  const PlanRun run = run_plan(cfg);
  std::size_t violations = 0, over_time = 0, probes_legs = 0;
  std::map<std::int64_t, int> triggered;
  for (const auto& s : run.flight.sorties) {
    if (s.time > run.flight.params.endurance) ++over_time;
    for (std::size_t i = 0; i < s.waypoints.size(); ++i) {
      const auto& w = s.waypoints[i];
      if (w.kind == WaypointKind::view_point && w.trigger) ++triggered[w.view_id];
      if (i + 1 < s.waypoints.size()) {
        violations += oracle::probe_violations(run.zone, w.position, s.waypoints[i + 1].position, 1.0);
        ++probes_legs;
      }
    }
  }
  std::size_t wrong_count = 0;
  for (auto id : run.plan.kept) wrong_count += triggered[static_cast<std::int64_t>(id)] != 1;
  wrong_count += triggered.size() != run.plan.kept.size();
  std::ostringstream d;
  d << run.flight.sorties.size() << " sorties, " << probes_legs << " segments probed at 1 m, " << violations
    << " violations; " << wrong_count << " trigger-count errors over " << run.plan.kept.size() << " kept views; "
    << over_time << " sorties over endurance";
  return {violations == 0 && wrong_count == 0 && over_time == 0, d.str()};
}

Outcome c9_determinism() {
  const auto base = std::filesystem::temp_directory_path() / "ovp_acceptance_det";
  std::filesystem::remove_all(base);
  const std::string cfg = data_path("reference_plan.json").string();
  for (const char* run : {"a", "b"}) {
    std::vector<std::string> args = {"ovp", "plan", "--config", cfg, "--out", (base / run).string()};
    std::vector<char*> argv;
    for (auto& a : args) argv.push_back(a.data());
    if (run_cli(static_cast<int>(argv.size()), argv.data()) != 0) return {false, "plan run failed"};
  }
  auto slurp = [](const std::filesystem::path& p) {
    std::ifstream in(p, std::ios::binary);
    std::ostringstream ss;
    ss << in.rdbuf();
    return ss.str();
  };
  std::size_t files = 0, differ = 0;
  for (const auto& e : std::filesystem::directory_iterator(base / "a")) {
    const auto ext = e.path().extension();
    if (ext != ".json" && ext != ".csv") continue;
    ++files;
    const auto other = base / "b" / e.path().filename();
    if (!std::filesystem::exists(other) || slurp(e.path()) != slurp(other)) ++differ;
  }
  return {files >= 6 && differ == 0, std::to_string(files) + " JSON/CSV artifacts, " + std::to_string(differ) + " differ"};
}

Outcome c10_performance() {
  const TriMesh m = generate_scene(reference_scene_spec());
  auto samples = poisson_sample(m, 2.4, 1010);
  if (samples.size() < 5000) return {false, "only " + std::to_string(samples.size()) + " samples"};
  samples.resize(5000);
  const SafeZone zone = dilate(m, SafeZoneParams{});
  std::vector<SurfaceSample> seeds;
  for (std::size_t i = 0; i < samples.size(); i += 2) seeds.push_back(samples[i]);
  auto all = initial_viewpoints(seeds, CameraModel{}, zone, PlannerConfig{});
  std::vector<ViewPoint> views;
  for (const auto& v : all) {
    if (v.state != ViewState::dropped && views.size() < 2000) {
      views.push_back(v);
      views.back().id = static_cast<std::uint32_t>(views.size() - 1);
    }
  }
  if (views.size() < 2000) return {false, "only " + std::to_string(views.size()) + " views"};
  const Bvh bvh(m);
  auto timed = [&](unsigned threads, VisibilityMatrix& out) {
    const auto t0 = std::chrono::steady_clock::now();
    out = build_matrix(samples, views, CameraModel{}, bvh, threads);
    return std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
  };
  VisibilityMatrix a, b;
  const double t8 = timed(8, a);
  const double t1 = timed(1, b);
  const double speedup = t1 / t8;
  std::ostringstream d;
  d << "5000x2000: 8 threads " << fmt("%.2f s", t8) << ", 1 thread " << fmt("%.2f s", t1) << ", speedup "
    << fmt("%.2fx", speedup) << " (hardware threads: " << std::thread::hardware_concurrency() << ", "
    << a.nonzeros() << " visible pairs, matrices " << (a.rows == b.rows ? "identical" : "DIFFER") << ")";
  return {t8 < 120 && speedup >= 3.0 && a.rows == b.rows, d.str()};
}

struct Criterion {
  int id;
  const char* name;
  double limit_s;
  std::function<Outcome()> run;
};

}  // namespace

int main(int argc, char** argv) {
  set_warnings_enabled(false);
  const std::vector<Criterion> all = {
      {1, "reconstructability definitional equivalence", 10, c1_definitional},
      {2, "monotonicity suite", 10, c2_monotonicity},
      {3, "visibility oracle", 60, c3_visibility},
      {4, "optimizer feasibility and subset oracle", 120, c4_optimizer},
      {5, "oblique vs optimized qualitative reproduction", 300, c5_table2},
      {6, "placement and disk-radius exactness", 1, c6_exactness},
      {7, "GA tour vs exhaustive optimum", 60, c7_tsp},
      {8, "flight-plan safety and conservation", 60, c8_flight_safety},
      {9, "byte-identical plan artifacts", 1e9, c9_determinism},
      {10, "visibility-matrix performance", 1e9, c10_performance},
  };
  const int only = argc > 1 ? std::atoi(argv[1]) : 0;
  int failed = 0;
  for (const auto& c : all) {
    if (only && c.id != only) continue;
    const auto t0 = std::chrono::steady_clock::now();
    Outcome o;
    try {
      o = c.run();
    } catch (const std::exception& e) {
      o = {false, std::string("exception: ") + e.what()};
    }
    const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    const bool in_time = secs < c.limit_s;
    const bool pass = o.pass && in_time;
    failed += !pass;
    std::printf("%s criterion %d: %s [%.2f s%s] %s\n", pass ? "PASS" : "FAIL", c.id, c.name, secs,
                in_time ? "" : ", over time limit", o.detail.c_str());
    std::fflush(stdout);
  }
  std::printf("%d criteria failed\n", failed);
  return failed == 0 ? 0 : 1;
}
