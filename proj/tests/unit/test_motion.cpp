#include <doctest.h>

#include <cmath>
#include <fstream>
#include <algorithm>
#include <sstream>

#include "gpca/error.hpp"
#include "gpca/linalg.hpp"
#include "gpca/motion.hpp"
#include "gpca/synthgen.hpp"

using namespace gpca;

TEST_CASE("stationary correspondences are excluded") {
  const std::vector<Correspondence> c = {{Eigen::Vector3d(1, 0, 1), Eigen::Vector3d(1, 0, 1)},
                                         Correspondence::from_pixels(10, 20, 12, 25)};
  const auto l = epipolar_lines(c);
  CHECK(l.excluded == std::vector<std::size_t>{0});
  CHECK(l.kept == std::vector<std::size_t>{1});
  CHECK(l.lines.col(0).norm() == doctest::Approx(1.0));
  // Homogeneous input with a scale other than 1 is normalized first.
  const std::vector<Correspondence> scaled = {{Eigen::Vector3d(20, 40, 2), Eigen::Vector3d(12, 25, 1)}};
  CHECK((epipolar_lines(scaled).lines - l.lines).norm() < 1e-15);
  CHECK_THROWS_AS(epipolar_lines({{Eigen::Vector3d(1, 0, 0), Eigen::Vector3d(1, 0, 1)}}), InputError);
}

TEST_CASE("epipolar lines of one translation lie on the epipole's plane") {
  TranslationSceneSpec spec;
  spec.motions = 1;
  spec.seed = 3;
  auto scene = translation_scene(spec);
  const auto l = epipolar_lines(scene.correspondences);
  CHECK(l.excluded.empty());
  CHECK((scene.epipoles[0].transpose() * l.lines).cwiseAbs().maxCoeff() <= 1e-10);

  // The specific translation T = e1.
  scene.translations[0] = Eigen::Vector3d::UnitX();
  const Eigen::Matrix3d k = scene.camera;
  for (auto& c : scene.correspondences) {
    const Eigen::Vector3d p = 7.0 * (k.inverse() * c.x1) + Eigen::Vector3d::UnitX();
    c.x2 = k * p / p(2);
    CHECK(std::abs(c.x2.dot(k.inverse().transpose() * Eigen::Vector3d::UnitX().cross(k.inverse() * c.x1))) < 1e-12);
  }
  const Eigen::Vector3d e = (k * Eigen::Vector3d::UnitX()).normalized();
  CHECK((e.transpose() * epipolar_lines(scene.correspondences).lines).cwiseAbs().maxCoeff() <= 1e-10);
}

TEST_CASE("two translations, noiseless") {
  for (bool condition : {true, false}) {
    TranslationSceneSpec spec;
    spec.seed = 11;
    const auto scene = translation_scene(spec);
    CHECK(scene.correspondences.size() == 92);
    const auto r = segment_translations(scene.correspondences, 2, {.normalize_image = condition});
    CHECK(classification_rate(scene.labels, r.segmentation.labels) == 1.0);
    CHECK(translation_error(scene, r.epipoles) < 1e-6);
  }
}

TEST_CASE("swapping frames does not change the segmentation") {
  TranslationSceneSpec spec;
  spec.seed = 12;
  spec.noise_px = 0.5;
  const auto scene = translation_scene(spec);
  auto swapped = scene.correspondences;
  for (auto& c : swapped) std::swap(c.x1, c.x2);
  const auto a = segment_translations(scene.correspondences, 2);
  const auto b = segment_translations(swapped, 2);
  CHECK(classification_rate(a.segmentation.labels, b.segmentation.labels) == 1.0);
  CHECK(translation_error(scene, a.epipoles) == doctest::Approx(translation_error(scene, b.epipoles)).epsilon(1e-6));
}

TEST_CASE("one pixel of noise") {
  double err = 0.0, rate = 0.0;
  const int trials = 50;
  for (int s = 0; s < trials; ++s) {
    TranslationSceneSpec spec;
    spec.seed = static_cast<std::uint64_t>(s);
    spec.noise_px = 1.0;
    const auto scene = translation_scene(spec);
    const auto r = segment_translations(scene.correspondences, 2);
    err += translation_error(scene, r.epipoles);
    rate += classification_rate(scene.labels, r.segmentation.labels);
  }
  CHECK(err / trials <= 3.0);
  CHECK(rate / trials >= 0.9);
}

TEST_CASE("stationary points are reported") {
  TranslationSceneSpec spec;
  spec.seed = 13;
  auto scene = translation_scene(spec);
  scene.correspondences[5].x2 = scene.correspondences[5].x1;
  const auto r = segment_translations(scene.correspondences, 2);
  CHECK(r.excluded == std::vector<std::size_t>{5});
  CHECK(r.segmentation.labels[5] == kOutlier);
  CHECK(std::isnan(r.segmentation.residuals(5)));
  CHECK_FALSE(r.segmentation.warnings.empty());
}

TEST_CASE("trajectory matrix ranks") {
  AffineSceneSpec one;
  one.motions = 1;
  one.points = {30};
  one.seed = 1;
  const auto single = affine_scene(one);
  const Eigen::VectorXd s = single.trajectories.singular_values();
  CHECK(s(4) <= 1e-10 * s(0));
  const auto projected = project_trajectories(single.trajectories);
  CHECK(projected.rows() == 5);
  CHECK(linalg::singular_values(projected)(4) <= 1e-10);

  AffineSceneSpec two;
  two.seed = 2;
  const auto pair = affine_scene(two);
  const Eigen::VectorXd s2 = pair.trajectories.singular_values();
  CHECK(s2(4) > 1e-6 * s2(0));
  CHECK(s2(8) <= 1e-10 * s2(0));

  const auto w1 = trajectory_matrix({{Eigen::Vector2d(1, 2)}, {Eigen::Vector2d(3, 4)}});
  CHECK(w1.w.rows() == 2);
  CHECK(w1.w.cols() == 2);
  CHECK_THROWS_AS(trajectory_matrix({{Eigen::Vector2d(1, 2)}, {}}), InputError);
  CHECK_THROWS_AS(project_trajectories(w1), InputError);
  TrajectoryMatrix flat;
  flat.frames = 3;
  flat.w = Eigen::MatrixXd::Zero(6, 8);
  flat.w.row(0).setOnes();
  CHECK_THROWS_AS(project_trajectories(flat), DegenerateError);
}

TEST_CASE("two affine motions segment exactly") {
  AffineSceneSpec spec;
  spec.seed = 5;
  spec.points = {30, 45};
  const auto scene = affine_scene(spec);
  const auto r = segment_affine(scene.trajectories, 2);
  CHECK(classification_rate(scene.labels, r.segmentation.labels) == 1.0);

  // A different generic 5-dimensional view of the column space gives the same labels.
  Rng rng(9);
  const Eigen::MatrixXd q = linalg::random_orthonormal(rng, 5, 5);
  auto other = segment(q * r.projected, 2);
  CHECK(classification_rate(r.segmentation.labels, other.labels) == 1.0);
}

TEST_CASE("track files round-trip") {
  AffineSceneSpec spec;
  spec.frames = 4;
  spec.points = {6};
  const auto scene = affine_scene(spec);
  std::stringstream ss;
  write_tracks(ss, scene.trajectories);
  const auto back = read_tracks(ss);
  CHECK(back.frames == 4);
  CHECK(back.w == scene.trajectories.w);

  std::istringstream bad("2 2\n1 2 3 4\n1 2 3\n");
  try {
    read_tracks(bad);
    FAIL("expected an error");
  } catch (const InputError& e) {
    CHECK(std::string(e.what()).find("line 3") != std::string::npos);
  }
  std::istringstream junk("1 1\n1 x\n");
  CHECK_THROWS_AS(read_tracks(junk), InputError);
}

TEST_CASE("bundled frame-major fixture runs end to end") {
  std::ifstream in(GPCA_TEST_DATA_DIR "/two_bodies_frame_major.txt");
  REQUIRE(in.good());
  const auto w = import_frame_major(in);
  CHECK(w.frames == 6);
  CHECK(w.tracks() == 26);
  std::vector<int> truth(26, 1);
  std::fill(truth.begin(), truth.begin() + 12, 0);
  const auto r = segment_affine(w, 2);
  CHECK(classification_rate(truth, r.segmentation.labels) == 1.0);

  std::istringstream short_file("3 2\n1 2\n3 4\n");
  CHECK_THROWS_AS(import_frame_major(short_file), InputError);
}

TEST_CASE("correspondence CSV") {
  std::istringstream in("x1,y1,x2,y2\n1,2,3,4\n\n5.5,6,7,8e1\n");
  const auto c = read_correspondences(in);
  REQUIRE(c.size() == 2);
  CHECK(c[1].x2(1) == 80.0);
  std::stringstream out;
  write_correspondences(out, c);
  const auto again = read_correspondences(out);
  CHECK(again[1].x1 == c[1].x1);
  std::istringstream bad("1,2,3\n");
  try {
    read_correspondences(bad);
    FAIL("expected an error");
  } catch (const InputError& e) {
    CHECK(std::string(e.what()).find("line 1") != std::string::npos);
  }
}
