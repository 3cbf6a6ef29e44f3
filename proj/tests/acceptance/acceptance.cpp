// Copyright 2026 The TIGeR Engine Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

// Acceptance checks. One PASS/FAIL line per criterion; exit status is the
// number of failures (capped at 1).

#include <chrono>
#include <cmath>
#include <cstdio>
#include <functional>
#include <string>
#include <vector>

#include "../oracles/box_oracle.hpp"
#include "tiger/error.hpp"
#include "tiger/generator.hpp"
#include "tiger/minidsl.hpp"
#include "tiger/random.hpp"
#include "tiger/reward.hpp"
#include "tiger/tools.hpp"

using namespace tiger;

namespace {

using Clock = std::chrono::steady_clock;

int failures = 0;

void report(const char* name, bool pass, const std::string& detail, double seconds) {
  std::printf("%s %-24s %s (%.2fs)\n", pass ? "PASS" : "FAIL", name, detail.c_str(), seconds);
  std::fflush(stdout);
  if (!pass) ++failures;
}

void criterion(const char* name, const std::function<bool(std::string&)>& body) {
  const auto t0 = Clock::now();
  std::string detail;
  bool pass = false;
  try {
    pass = body(detail);
  } catch (const std::exception& e) {
    detail += std::string(" exception: ") + e.what();
  }
  report(name, pass, detail, std::chrono::duration<double>(Clock::now() - t0).count());
}

std::string fmt(const char* f, auto... args) {
  char buf[256];
  std::snprintf(buf, sizeof buf, f, args...);
  return buf;
}

Pose random_pose(Rng& rng) {
  const Vec3 eye(rng.uniform(-5, 5), rng.uniform(-5, 5), rng.uniform(0.5, 3));
  const Vec3 target(rng.uniform(-1, 1), rng.uniform(-1, 1), rng.uniform(0, 1));
  return Pose::look_at(eye, target);
}

OrientedBox3 random_box(Rng& rng, double spread) {
  return OrientedBox3::make(Vec3(rng.uniform(-spread, spread), rng.uniform(-spread, spread),
                                 rng.uniform(-spread, spread)),
                            Vec3(rng.uniform(0.05, 0.6), rng.uniform(0.05, 0.6), rng.uniform(0.05, 0.6)),
                            rng.uniform(-kPi, kPi));
}

// Placeholders in place of every tool result, as a model would emit.
Trajectory strip_results(const Trajectory& t) {
  Trajectory out = t;
  for (auto& s : out.steps) {
    if (auto* r = std::get_if<ToolResult>(&s)) r->value = Placeholder{};
  }
  return out;
}

DatasetConfig uniform_config(std::size_t count, std::uint64_t seed) {
  DatasetConfig cfg;
  cfg.count = count;
  cfg.seed = seed;
  const auto t = default_templates();
  for (const auto& x : t) cfg.mix.push_back({x, 1.0 / double(t.size())});
  return cfg;
}

std::string random_expr(Rng& rng, int depth) {
  if (depth == 0 || rng.below(4) == 0) return std::to_string(int(rng.below(9)) + 1);
  const auto sub = [&] { return random_expr(rng, depth - 1); };
  switch (rng.below(9)) {
    case 0: return "(" + sub() + " + " + sub() + ")";
    case 1: return "(" + sub() + " / " + sub() + ")";
    case 2: return "-" + sub();
    case 3: return "(if " + sub() + " < " + sub() + " then " + sub() + " else " + sub() + ")";
    case 4: return "max(" + sub() + ", " + sub() + ")";
    case 5: return "norm(vec(" + sub() + ", " + sub() + ", 2))";
    case 6: return "at(vec(" + sub() + ", 1, " + sub() + "), 2)";
    case 7: return "at(matmul(rotz(" + sub() + "), vec(1, " + sub() + ", 0)), 1)";
    default: return "sqrt(abs(" + sub() + "))";
  }
}

}  // namespace

int main() {
  std::printf("tiger acceptance\n");

  criterion("projection_round_trip", [](std::string& d) {
    const auto t0 = Clock::now();
    const CameraIntrinsics k = default_intrinsics();
    Rng rng(1);
    double worst = 0;
    for (int i = 0; i < 100000; ++i) {
      const Pose pose = random_pose(rng);
      const Vec2 px(rng.uniform(0, k.width), rng.uniform(0, k.height));
      const double depth = rng.uniform(0.1, 50.0);
      const Vec3 world = transform(invert(pose), unproject(px, depth, k));
      const Projection p = project(world, k, pose);
      worst = std::max(worst, (p.pixel - px).norm());
    }
    const double secs = std::chrono::duration<double>(Clock::now() - t0).count();
    d = fmt("max error %.3g px over 1e5 draws, %.2f s", worst, secs);
    return worst < 1e-9 && secs < 5.0;
  });

  criterion("obb_distance_sampling", [](std::string& d) {
    constexpr double h = 0.02;
    Rng rng(2);
    int below = 0, within = 0, separated = 0;
    double worst_gap = 0;
    for (int i = 0; i < 1000; ++i) {
      const OrientedBox3 a = random_box(rng, 2.0);
      const OrientedBox3 b = random_box(rng, 2.0);
      const double analytic = obb_distance(a, b);
      separated += analytic > 0.0;
      const double sampled = oracle::sampled_distance(a, b, h);
      below += analytic <= sampled + 1e-12;
      within += sampled - analytic <= 2 * h;
      worst_gap = std::max(worst_gap, sampled - analytic);
    }
    int identical = 0;
    for (int i = 0; i < 100; ++i) {
      const OrientedBox3 a = random_box(rng, 3.0);
      identical += obb_distance(a, a) == 0.0;
    }
    d = fmt("analytic<=sampled %d/1000, within 2h %d/1000 (max gap %.2e, %d separated), identical->0 %d/100",
            below, within, worst_gap, separated, identical);
    return below == 1000 && within == 1000 && identical == 100;
  });

  criterion("camera_motion_labels", [](std::string& d) {
    Rng rng(3);
    int correct = 0;
    for (int i = 0; i < 500; ++i) {
      const Vec3 pivot(rng.uniform(-2, 2), rng.uniform(-2, 2), rng.uniform(0, 1));
      const double radius = rng.uniform(1.5, 5), height = rng.uniform(0.5, 2.5);
      const double theta = rng.uniform(-kPi, kPi);
      const double step = (rng.coin() ? 1 : -1) * rng.uniform(2, 80) * kPi / 180;
      const auto eye = [&](double t) -> Vec3 {
        return pivot + Vec3(radius * std::cos(t), radius * std::sin(t), height);
      };
      const Pose first = Pose::look_at(eye(theta), pivot);
      const Pose second = Pose::look_at(eye(theta + step), pivot);
      // Counter-clockwise seen from above is "right", clockwise is "left".
      const OrbitDirection want = step > 0 ? OrbitDirection::Right : OrbitDirection::Left;
      correct += relative_camera_motion(first, second, pivot).direction == want;
    }
    d = fmt("%d/500 correct", correct);
    return correct == 500;
  });

  // Shared by the reward and self-consistency checks.
  const auto gen0 = Clock::now();
  const DatasetConfig cfg = uniform_config(1000, 20261015);
  const Dataset ds = generate_dataset(cfg, 0);
  const double gen_secs = std::chrono::duration<double>(Clock::now() - gen0).count();

  criterion("reward_anchors", [&](std::string& d) {
    const RewardConfig rc;
    const auto probe = [](double x) {
      return parse_trajectory("<tool_call>probe(x=" + format_number(x) +
                              ")</tool_call><answer format=scalar>1</answer>");
    };
    const auto ans = [](double x) {
      return parse_trajectory("<answer format=scalar>" + format_number(x) + "</answer>");
    };
    const double p0 = score_param(probe(0.7), probe(0.7), rc);
    const double p_half = score_param(probe(0.7 + std::log(2.0) / rc.alpha), probe(0.7), rc);
    const double a0 = score_answer(ans(1.5), ans(1.5), rc);
    const double a_half = score_answer(ans(1.5 + std::log(2.0) / rc.gamma), ans(1.5), rc);
    int exact = 0;
    for (const auto& s : ds.samples) {
      exact += score_trajectory(s.trajectory, s.trajectory, s.scene, BoxMode::Oracle, rc).composite == 1.0;
    }
    d = fmt("r_param %.15g/%.15g, r_answer %.15g/%.15g, self composite 1.0 %d/%zu", p0, p_half, a0, a_half,
            exact, ds.samples.size());
    return p0 == 1.0 && std::abs(p_half - 0.5) < 1e-12 && a0 == 1.0 && std::abs(a_half - 0.5) < 1e-12 &&
           exact == 1000 && ds.samples.size() == 1000;
  });

  criterion("grpo_math", [](std::string& d) {
    Rng rng(5);
    int ok = 0, batches = 0;
    for (int i = 0; i < 10000; ++i) {
      std::vector<double> r(2 + rng.below(63));
      const double scale = std::pow(10.0, rng.uniform(-4, 4));
      for (double& x : r) x = rng.uniform(-1, 1) * scale;
      ++batches;
      const auto a = grpo_advantages(r);
      double mean = 0, var = 0;
      for (double x : a) mean += x;
      mean /= double(a.size());
      for (double x : a) var += (x - mean) * (x - mean);
      const double sigma = std::sqrt(var / double(a.size()));
      ok += std::abs(mean) < 1e-12 && std::abs(sigma - 1.0) < 1e-9;
    }
    GrpoBatch b;
    b.ratios = {2.0};
    b.kl = {0.0};
    const double pos = grpo_objective(b, std::vector<double>{1.0});
    const double neg = grpo_objective(b, std::vector<double>{-1.0});
    b.ratios = std::vector<double>(8, 1.0);
    b.kl = std::vector<double>(8, 0.0);
    std::vector<double> adv(8);
    for (double& x : adv) x = rng.uniform(-2, 2);
    double m = 0;
    for (double x : adv) m += x;
    for (double& x : adv) x -= m / 8;
    const double flat = grpo_objective(b, adv);
    d = fmt("advantages %d/%d, clip cases %.15g and %.15g, unit-ratio loss %.3g", ok, batches, pos, neg, flat);
    return ok == batches && std::abs(pos + 1.2) < 1e-12 && std::abs(neg - 2.0) < 1e-12 &&
           std::abs(flat) < 1e-12;
  });

  criterion("delta2_and_interval", [](std::string& d) {
    bool ok = true;
    Rng rng(6);
    for (int i = 0; i < 1000; ++i) {
      const double gt = std::pow(2.0, rng.uniform(-10, 10));
      // Exactly representable boundaries.
      ok &= evaluate_delta2(gt * 0.5, gt) && evaluate_delta2(gt * 2.0, gt);
      ok &= !evaluate_delta2(std::nextafter(gt * 0.5, 0.0), gt);
      ok &= !evaluate_delta2(std::nextafter(gt * 2.0, 1e300), gt);
    }
    ok &= evaluate_delta2(0.5, 1.0) && evaluate_delta2(2.0, 1.0) && !evaluate_delta2(0.49, 1.0) &&
          !evaluate_delta2(2.01, 1.0);
    ok &= check_interval(0.05, 0.05, 0.15) && check_interval(0.15, 0.05, 0.15) &&
          check_interval(0.1, 0.05, 0.15) && !check_interval(0.04, 0.05, 0.15) &&
          !check_interval(0.16, 0.05, 0.15);
    d = ok ? "boundaries inclusive at 0.5x and 2x; interval [0.05, 0.15] m" : "boundary mismatch";
    return ok;
  });

  criterion("dataset_self_consistency", [&](std::string& d) {
    const auto t0 = Clock::now();
    int replays = 0, perfect = 0;
    for (const auto& s : ds.samples) {
      ExecutionContext ctx(s.scene, BoxMode::Oracle);
      const Trajectory replay = run_trajectory(ctx, strip_results(s.trajectory));
      replays += render_trajectory(replay) == render_trajectory(s.trajectory);
      perfect += score_trajectory(replay, s.trajectory, s.scene, BoxMode::Oracle).composite == 1.0;
    }
    const double loop_secs = gen_secs + std::chrono::duration<double>(Clock::now() - t0).count();
    const Dataset again = generate_dataset(dataset_config_from_json(ds.manifest), 0);
    const bool regen = again.jsonl == ds.jsonl && again.manifest == ds.manifest;
    d = fmt("replays %d/1000, composite 1.0 %d/1000, manifest regeneration %s, loop %.2f s", replays, perfect,
            regen ? "identical" : "DIFFERS", loop_secs);
    return replays == 1000 && perfect == 1000 && regen && loop_secs < 60.0;
  });

  criterion("parser_totality", [&](std::string& d) {
    Rng rng(8);
    int parsed = 0, positioned = 0, other = 0;
    const std::string seed_text = render_trajectory(ds.samples.front().trajectory);
    for (int i = 0; i < 100000; ++i) {
      std::string s;
      if (i % 2 == 0) {
        s.resize(rng.below(96));
        for (char& c : s) c = char(rng.below(256));
      } else {
        s = seed_text;
        for (int k = 0, n = 1 + int(rng.below(6)); k < n && !s.empty(); ++k) {
          const std::size_t pos = rng.below(s.size());
          switch (rng.below(3)) {
            case 0: s.erase(pos, 1 + rng.below(12)); break;
            case 1: s.insert(pos, 1, char(rng.below(256))); break;
            default: s[pos] = char(rng.below(256)); break;
          }
        }
      }
      try {
        parse_trajectory(s);
        ++parsed;
      } catch (const Error& e) {
        const bool kind = e.code() == ErrorCode::SyntaxError || e.code() == ErrorCode::OrderingError;
        if (kind && e.offset() && *e.offset() <= s.size()) ++positioned;
        else ++other;
      } catch (...) {
        ++other;
      }
    }
    int identity = 0;
    for (const auto& smp : ds.samples) {
      identity += parse_trajectory(render_trajectory(smp.trajectory)) == smp.trajectory;
    }
    d = fmt("1e5 inputs: %d parsed, %d positioned errors, %d other; parse(render) %d/1000", parsed, positioned,
            other, identity);
    return other == 0 && parsed + positioned == 100000 && identity == 1000;
  });

  criterion("minidsl_sandbox", [](std::string& d) {
    const std::vector<std::string_view> forbidden = {"open", "read", "write", "print", "file", "time",
                                                     "clock", "now", "rand", "seed", "sleep", "exec",
                                                     "system", "import", "env", "socket", "input"};
    int flagged = 0;
    for (const auto& b : dsl::builtins()) {
      for (const auto& f : forbidden) flagged += b.name.find(f) != std::string_view::npos;
    }
    Rng rng(9);
    int halted = 0;
    for (int i = 0; i < 5000; ++i) {
      const std::string body = random_expr(rng, 7);
      const auto prog = dsl::parse_program(i % 2 ? body : "let a = " + random_expr(rng, 4) + ";\na * " + body);
      dsl::EvalLimits limits;
      limits.max_steps = prog.node_count();
      try {
        dsl::eval(prog, {}, limits);
        ++halted;
      } catch (const Error& e) {
        halted += e.code() != ErrorCode::LimitExceeded;
      }
    }
    const Value five = dsl::eval(dsl::parse_program("norm(vec(3,4,0))"), {});
    const bool anchor = five.is<Scalar>() && five.as<Scalar>().value == 5.0;
    d = fmt("%zu builtins, %d forbidden names, %d/5000 halted within node count, norm anchor %s",
            dsl::builtins().size(), flagged, halted, anchor ? "5" : "wrong");
    return flagged == 0 && halted == 5000 && anchor;
  });

  criterion("fitted_box_lifting", [](std::string& d) {
    Rng rng(10);
    int yaw_ok = 0, ext_ok = 0, oracle_ok = 0, n = 0;
    double worst_yaw = 0, worst_ext = 0;
    for (int i = 0; i < 200; ++i) {
      Scene s;
      s.intrinsics = default_intrinsics();
      s.floor_z = 0.0;
      const Vec3 half(rng.uniform(0.15, 0.5), rng.uniform(0.15, 0.5), rng.uniform(0.15, 0.6));
      const double yaw = rng.uniform(-kPi, kPi);
      const OrientedBox3 box = OrientedBox3::make(Vec3(rng.uniform(-1, 1), rng.uniform(-1, 1), half.z()), half, yaw);
      s.objects.push_back({1, "box", box});
      // Fronto-parallel: the camera faces the box's -y face, raised so the
      // top face is in view.
      const Vec3 facing = box.rotation().col(1);
      const double dist = rng.uniform(2.0, 3.5);
      const Vec3 eye = box.center - facing * dist + Vec3(0, 0, rng.uniform(1.0, 1.8));
      s.views = {Pose::identity(), Pose::look_at(eye, box.center)};
      s.validate();
      const Box2 b2 = *s.projected_box(s.objects[0], 1);
      const ToolCall call{"box_2d_to_box_3d", {{"view", Scalar{1, {}}}, {"box", b2}}};
      ExecutionContext oracle(s, BoxMode::Oracle);
      oracle_ok += execute_tool(oracle, call) == Value(box);
      ExecutionContext fitted(s, BoxMode::Fitted);
      const OrientedBox3 f = execute_tool(fitted, call).as<OrientedBox3>();
      ++n;
      // Yaw error modulo 90 degrees; a quarter-turn swaps the footprint axes.
      const double diff = f.yaw - yaw;
      const double quarter = std::round(diff / (kPi / 2));
      const double err = std::abs(diff - quarter * kPi / 2) * 180 / kPi;
      worst_yaw = std::max(worst_yaw, err);
      yaw_ok += err <= 5.0;
      const bool swapped = std::abs(std::fmod(quarter, 2.0)) == 1.0;
      const double ex = swapped ? f.half_extents.y() : f.half_extents.x();
      const double ey = swapped ? f.half_extents.x() : f.half_extents.y();
      const double rel = std::max(std::abs(ex - half.x()) / half.x(), std::abs(ey - half.y()) / half.y());
      worst_ext = std::max(worst_ext, rel);
      ext_ok += rel <= 0.15;
    }
    d = fmt("yaw within 5 deg %d/%d (worst %.2f), footprint within 15%% %d/%d (worst %.1f%%), oracle exact %d/%d",
            yaw_ok, n, worst_yaw, ext_ok, n, worst_ext * 100, oracle_ok, n);
    return yaw_ok == n && ext_ok == n && oracle_ok == n;
  });

  std::printf("%d failure(s)\n", failures);
  return failures == 0 ? 0 : 1;
}
