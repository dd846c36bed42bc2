#include <doctest.h>

#include <cmath>

#include "signkit/anchors.hpp"
#include "support.hpp"

using namespace signkit;
using namespace signkit::testing;

namespace {

GridSpec single_box_spec() {
  GridSpec spec;
  spec.input_width = 256;
  spec.input_height = 256;
  spec.layer_strides = {256};
  spec.aspect_ratios = {1.0};
  return spec;
}

}  // namespace

TEST_CASE("generate_default_boxes: single-cell arithmetic") {
  const auto boxes = generate_default_boxes(single_box_spec());
  REQUIRE(boxes.size() == 1);
  CHECK(boxes[0].cx == 128.0);
  CHECK(boxes[0].cy == 128.0);
  CHECK(boxes[0].w == 1024.0);
  CHECK(boxes[0].h == 1024.0);
}

TEST_CASE("generate_default_boxes: ceiling grid and closed-form count") {
  GridSpec spec;
  spec.input_width = 800;
  spec.input_height = 450;
  spec.layer_strides = {8};
  spec.aspect_ratios = {1.0};
  const auto boxes = generate_default_boxes(spec);
  CHECK(boxes.size() == 100u * 57u);  // ceil(450/8) = 57
  CHECK(boxes.back().cell_row == 56);
  CHECK(boxes.back().cell_col == 99);

  GridSpec full;
  full.input_width = 800;
  full.input_height = 450;
  std::size_t expected = 0;
  for (int s : full.layer_strides) {
    const auto cols = static_cast<std::size_t>((800 + s - 1) / s);
    const auto rows = static_cast<std::size_t>((450 + s - 1) / s);
    expected += 5 * cols * rows;
  }
  CHECK(generate_default_boxes(full).size() == expected);
  CHECK(full.box_count() == expected);
}

TEST_CASE("generate_default_boxes: deterministic (layer,row,col,ratio) ordering") {
  GridSpec spec;
  spec.input_width = 64;
  spec.input_height = 32;
  spec.layer_strides = {16, 32};
  spec.aspect_ratios = {1.0, 2.0};
  const auto a = generate_default_boxes(spec);
  const auto b = generate_default_boxes(spec);
  REQUIRE(a.size() == b.size());
  for (std::size_t i = 0; i < a.size(); ++i) {
    CHECK(a[i].cx == b[i].cx);
    CHECK(a[i].cy == b[i].cy);
    CHECK(a[i].w == b[i].w);
    CHECK(a[i].ratio_index == b[i].ratio_index);
  }
  // layer 0: 4x2 cells, 2 ratios each.
  CHECK(a[0].ratio_index == 0);
  CHECK(a[1].ratio_index == 1);
  CHECK(a[1].cell_col == 0);
  CHECK(a[2].cell_col == 1);
  CHECK(a[8].cell_row == 1);
  CHECK(a[16].layer_index == 1);

  // aspect ratio stretches w by sqrt(r) and shrinks h by sqrt(r)
  CHECK(a[1].w == doctest::Approx(a[0].w * std::sqrt(2.0)));
  CHECK(a[1].h == doctest::Approx(a[0].h / std::sqrt(2.0)));
}

TEST_CASE("generate_default_boxes: invalid specs") {
  GridSpec spec = single_box_spec();
  spec.input_width = 0;
  CHECK_THROWS_AS(generate_default_boxes(spec), InvalidSpec);

  spec = single_box_spec();
  spec.layer_strides = {32, 16};
  CHECK_THROWS_AS(generate_default_boxes(spec), InvalidSpec);

  spec = single_box_spec();
  spec.aspect_ratios = {1.0, -2.0};
  CHECK_THROWS_AS(generate_default_boxes(spec), InvalidSpec);
}

TEST_CASE("default box corner quad follows the TL,TR,BR,BL canon") {
  const auto boxes = generate_default_boxes(single_box_spec());
  const Quad q = boxes[0].corner_quad();
  CHECK(q[0].x < q[1].x);
  CHECK(q[0].y == q[1].y);
  CHECK(q[2].y > q[1].y);
  CHECK(q[3].x == q[0].x);
}

TEST_CASE("encode_vertices: zero offsets and pinned shift example") {
  DefaultBox box{50, 50, 100, 100, 0, 0, 0, 0};
  const Quad corners = box.corner_quad();
  const RegressionVector zero = encode_vertices(corners, box);
  for (double v : zero.v) CHECK(v == 0.0);

  Quad shifted = corners;
  for (auto& p : shifted) p.x += 10.0;
  const RegressionVector dp = encode_vertices(shifted, box, true);
  for (std::size_t i = 0; i < 4; ++i) {
    CHECK(dp.v[2 * i] == doctest::Approx(0.1).epsilon(1e-15));
    CHECK(dp.v[2 * i + 1] == 0.0);
  }
  const RegressionVector raw = encode_vertices(shifted, box, false);
  for (std::size_t i = 0; i < 4; ++i) {
    CHECK(raw.v[2 * i] == 10.0);
  }

  const Quad decoded = decode_vertices(dp, box, true);
  for (std::size_t i = 0; i < 4; ++i) {
    CHECK(distance(decoded[i], shifted[i]) < 1e-12);
  }
}

TEST_CASE("decode_vertices: zero vector yields the box corners") {
  DefaultBox box{17, 23, 64, 32, 0, 0, 0, 0};
  const Quad decoded = decode_vertices(RegressionVector{}, box);
  const Quad corners = box.corner_quad();
  for (std::size_t i = 0; i < 4; ++i) {
    CHECK(decoded[i].x == corners[i].x);
    CHECK(decoded[i].y == corners[i].y);
  }
}

TEST_CASE("codec round trips are exact in both modes") {
  Rng rng(23);
  for (int trial = 0; trial < 2000; ++trial) {
    DefaultBox box;
    box.cx = rng.uniform(0.0, 800.0);
    box.cy = rng.uniform(0.0, 450.0);
    box.w = rng.uniform(4.0, 512.0);
    box.h = rng.uniform(4.0, 512.0);
    const Quad target = random_quad(rng, rng.uniform(10.0, 300.0),
                                    {rng.uniform(0.0, 700.0), rng.uniform(0.0, 400.0)});
    for (bool normalize : {true, false}) {
      const Quad round =
          decode_vertices(encode_vertices(target, box, normalize), box, normalize);
      for (std::size_t i = 0; i < 4; ++i) {
        CHECK(std::abs(round[i].x - target[i].x) <= 1e-12 * std::max(1.0, std::abs(target[i].x)));
        CHECK(std::abs(round[i].y - target[i].y) <= 1e-12 * std::max(1.0, std::abs(target[i].y)));
      }
    }
  }
}

TEST_CASE("box codec: zero, pinned shift, round trip") {
  DefaultBox box{50, 50, 100, 100, 0, 0, 0, 0};
  const auto zero = encode_box(box.box(), box);
  for (double v : zero) CHECK(v == 0.0);

  AABox shifted = box.box();
  shifted.left += 10.0;
  shifted.right += 10.0;
  const auto delta = encode_box(shifted, box, true);
  CHECK(delta[0] == doctest::Approx(0.1).epsilon(1e-15));
  CHECK(delta[1] == 0.0);
  CHECK(delta[2] == doctest::Approx(0.1).epsilon(1e-15));
  CHECK(delta[3] == 0.0);

  Rng rng(29);
  for (int trial = 0; trial < 500; ++trial) {
    DefaultBox b;
    b.cx = rng.uniform(0.0, 800.0);
    b.cy = rng.uniform(0.0, 450.0);
    b.w = rng.uniform(4.0, 512.0);
    b.h = rng.uniform(4.0, 512.0);
    const AABox target = random_box(rng, 600.0);
    for (bool normalize : {true, false}) {
      const AABox round = decode_box(encode_box(target, b, normalize), b, normalize);
      CHECK(std::abs(round.left - target.left) <= 1e-12 * std::max(1.0, std::abs(target.left)));
      CHECK(std::abs(round.right - target.right) <=
            1e-12 * std::max(1.0, std::abs(target.right)));
      CHECK(std::abs(round.top - target.top) <= 1e-12 * std::max(1.0, std::abs(target.top)));
      CHECK(std::abs(round.bottom - target.bottom) <=
            1e-12 * std::max(1.0, std::abs(target.bottom)));
    }
  }
}
