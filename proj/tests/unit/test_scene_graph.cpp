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

#include <set>

#include "fixtures.hpp"
#include "tiger/random.hpp"
#include "tiger/scene_graph.hpp"

using namespace tiger;

TEST_SUITE("scene_graph") {

TEST_CASE("camera-centric relations on the fixture") {
  const Scene s = fixtures::two_box_scene();
  const SceneGraph g = build_scene_graph(s, 1);
  CHECK(g.has(1, Relation::LeftOf, 2));
  CHECK(g.has(2, Relation::RightOf, 1));
  CHECK_FALSE(g.has(2, Relation::LeftOf, 1));
  CHECK_FALSE(g.has(1, Relation::Above, 2));
  for (const auto& e : g.edges) {
    CHECK(e.frame == 1);
    CHECK(e.surface_distance == doctest::Approx(obb_distance(s.find(e.src)->box, s.find(e.dst)->box)));
  }
}

TEST_CASE("relations are antisymmetric") {
  Rng rng(5);
  for (int i = 0; i < 30; ++i) {
    const Scene s = generate_scene(SceneParams{}, rng.next());
    for (std::size_t v = 0; v < s.views.size(); ++v) {
      for (const auto& a : s.objects) {
        for (const auto& b : s.objects) {
          const Pose& p = s.views[v];
          CHECK_FALSE((spatial_relation(a, b, p, Relation::LeftOf) &&
                       spatial_relation(a, b, p, Relation::RightOf)));
          CHECK(spatial_relation(a, b, p, Relation::LeftOf) ==
                spatial_relation(b, a, p, Relation::RightOf));
          CHECK(spatial_relation(a, b, p, Relation::InFrontOf) ==
                spatial_relation(b, a, p, Relation::Behind));
          CHECK(spatial_relation(a, b, p, Relation::Above) ==
                spatial_relation(b, a, p, Relation::Below));
        }
      }
    }
  }
}

TEST_CASE("dead band suppresses near-equal positions") {
  const Pose cam = Pose::look_at(Vec3(0, -4, 1), Vec3(0, 0, 1));
  const auto a = OrientedBox3::make(Vec3(0, 0, 1), Vec3(0.2, 0.2, 0.2), 0.0);
  const auto b = OrientedBox3::make(Vec3(0.1, 0, 1), Vec3(0.2, 0.2, 0.2), 0.0);
  CHECK_FALSE(spatial_relation(a, b, cam, Relation::LeftOf));
  CHECK_FALSE(spatial_relation(b, a, cam, Relation::RightOf));
  const auto c = OrientedBox3::make(Vec3(0.5, 0, 1), Vec3(0.2, 0.2, 0.2), 0.0);
  CHECK(spatial_relation(a, c, cam, Relation::LeftOf));
  CHECK_FALSE(spatial_relation(a, c, cam, Relation::Between));
}

TEST_CASE("vertical relations") {
  const Pose cam = Pose::identity();
  const auto low = OrientedBox3::make(Vec3(0, 0, 0.5), Vec3(0.5, 0.5, 0.5), 0.0);
  const auto high = OrientedBox3::make(Vec3(0, 0, 1.5), Vec3(0.2, 0.2, 0.5), 0.0);
  CHECK(spatial_relation(high, low, cam, Relation::Above));
  CHECK(spatial_relation(low, high, cam, Relation::Below));
  const auto overlap = OrientedBox3::make(Vec3(2, 0, 0.9), Vec3(0.2, 0.2, 0.5), 0.0);
  CHECK_FALSE(spatial_relation(overlap, low, cam, Relation::Above));
}

TEST_CASE("between") {
  const auto make = [](int id, double x, double y) {
    return ObjectNode{id, "o" + std::to_string(id),
                      OrientedBox3::make(Vec3(x, y, 0.3), Vec3(0.2, 0.2, 0.3), 0.0)};
  };
  const ObjectNode c = make(1, -2, 0), b = make(2, 2, 0);
  CHECK(between(make(3, 0, 0.1), c, b));
  CHECK_FALSE(between(make(3, 0, 1.0), c, b));
  CHECK_FALSE(between(make(3, 3, 0.0), c, b));
}

TEST_CASE("match_annotations is greedy one-to-one") {
  const std::vector<LabeledBox2> pred = {{"a", {0, 0, 10, 10}}, {"b", {1, 1, 11, 11}},
                                         {"c", {50, 50, 60, 60}}};
  const std::vector<Box2> ref = {{0, 0, 10, 10}, {100, 100, 110, 110}};
  const auto m = match_annotations(pred, ref, 0.1);
  REQUIRE(m.size() == 1);
  CHECK(m[0].predicted == 0);
  CHECK(m[0].reference == 0);
  CHECK(m[0].iou == 1.0);
  CHECK(match_annotations(pred, ref, 1.0).size() == 1);
  CHECK_TIGER_ERROR(match_annotations(pred, ref, 1.01), ErrorCode::InvalidArgument);
}

TEST_CASE("match_annotations never reuses an index") {
  Rng rng(9);
  for (int trial = 0; trial < 200; ++trial) {
    std::vector<LabeledBox2> pred;
    std::vector<Box2> ref;
    for (int i = 0; i < 6; ++i) {
      const double u = rng.uniform(0, 50), v = rng.uniform(0, 50);
      pred.push_back({"x", {u, v, u + rng.uniform(5, 20), v + rng.uniform(5, 20)}});
      const double s = rng.uniform(0, 50), t = rng.uniform(0, 50);
      ref.push_back({s, t, s + rng.uniform(5, 20), t + rng.uniform(5, 20)});
    }
    const auto m = match_annotations(pred, ref, 0.05);
    std::set<std::size_t> used_p, used_r;
    double last = 2.0;
    for (const auto& x : m) {
      CHECK(used_p.insert(x.predicted).second);
      CHECK(used_r.insert(x.reference).second);
      CHECK(x.iou >= 0.05);
      CHECK(x.iou <= last);  // descending IoU
      CHECK(x.iou == iou_2d(pred[x.predicted].box, ref[x.reference]));
      last = x.iou;
    }
  }
}

TEST_CASE("region sampling lands in the region") {
  const Pose cam = Pose::look_at(Vec3(0, -4, 1.5), Vec3(0, 0, 0.5));
  const auto anchor = OrientedBox3::make(Vec3(0, 0, 0.8), Vec3(0.3, 0.3, 0.3), 0.2);
  for (Region r : {Region::Below, Region::Above, Region::LeftOf, Region::RightOf,
                   Region::Behind, Region::InFront}) {
    for (std::uint64_t seed = 0; seed < 30; ++seed) {
      const Vec3 p = sample_region_point(anchor, r, cam, 0.05, seed, 0.0);
      CHECK_MESSAGE(spatial_relation(point_box(p), anchor, cam, relation_for(r)), to_string(r));
      CHECK(obb_distance(point_box(p), anchor) >= 0.05 - 1e-9);
      CHECK(p.z() >= 0.0);
    }
  }
  const auto grounded = OrientedBox3::make(Vec3(0, 0, 0.3), Vec3(0.3, 0.3, 0.3), 0.0);
  CHECK_TIGER_ERROR(sample_region_point(grounded, Region::Below, cam, 0.05, 1, 0.0),
                    ErrorCode::InfeasibleRegion);
}

}  // TEST_SUITE
