#pragma once

#include <cstddef>
#include <cstdint>
#include <iosfwd>
#include <string>
#include <vector>

#include <Eigen/Dense>

#include "gpca/segmentation.hpp"

namespace gpca {

/// Image point in two frames, homogeneous with third coordinate 1.
struct Correspondence {
  Eigen::Vector3d x1;
  Eigen::Vector3d x2;

  static Correspondence from_pixels(double u1, double v1, double u2, double v2) {
    return {Eigen::Vector3d(u1, v1, 1.0), Eigen::Vector3d(u2, v2, 1.0)};
  }
};

struct EpipolarLines {
  Eigen::MatrixXd lines;              // 3 x kept.size(), unit columns
  std::vector<std::size_t> kept;      // correspondence index of each column
  std::vector<std::size_t> excluded;  // stationary points (x2 parallel to x1)
};

/// l_j = x2_j x x1_j, normalized. Correspondences with |l| < 1e-12 |x1| |x2| are excluded.
EpipolarLines epipolar_lines(const std::vector<Correspondence>& correspondences);

/// Similarity that moves the centroid of the image points to the origin and
/// scales their mean distance to sqrt(2).
Eigen::Matrix3d normalizing_transform(const std::vector<Correspondence>& correspondences);

struct TranslationOptions {
  double kappa = kDefaultKappa;
  double delta = kDefaultDelta;
  bool normalize_image = true;  // condition the coordinates before forming lines
};

struct TranslationResult {
  Segmentation segmentation;          // per correspondence; excluded points get kOutlier
  std::vector<Eigen::Vector3d> epipoles;  // pixel coordinates, unit norm
  EpipolarLines lines;                // the data actually segmented
  std::vector<std::size_t> excluded;
};

/// Segments n purely translational motions: each epipole is the normal of a
/// plane through the origin containing that motion's epipolar lines.
TranslationResult segment_translations(const std::vector<Correspondence>& correspondences, unsigned n,
                                       const TranslationOptions& options = {});

struct TranslationScene {
  std::vector<Correspondence> correspondences;
  std::vector<int> labels;
  std::vector<Eigen::Vector3d> translations;  // unit
  std::vector<Eigen::Vector3d> epipoles;      // K T, unit
  Eigen::Matrix3d camera;
};

struct TranslationSceneSpec {
  unsigned motions = 2;
  std::size_t points = 92;   // split as evenly as possible
  double image_size = 500.0;
  double focal = 500.0;
  double noise_px = 0.0;
  std::uint64_t seed = 0;
  double min_angle_deg = 20.0;  // between translation directions
};

/// Points at depth 5..10 seen in both frames; frame-1 pixels uniform over the image.
TranslationScene translation_scene(const TranslationSceneSpec& spec);

/// Angle in degrees between the true translations and K^-1 e for the estimated
/// epipoles, sign-free, mean over the best matching.
double translation_error(const TranslationScene& scene, const std::vector<Eigen::Vector3d>& epipoles);

/// W (2F x N): column j stacks the F image positions of track j.
struct TrajectoryMatrix {
  Eigen::MatrixXd w;
  std::size_t frames = 0;

  std::size_t tracks() const { return static_cast<std::size_t>(w.cols()); }
  Eigen::VectorXd singular_values() const;
};

/// Throws InputError on ragged or empty tracks.
TrajectoryMatrix trajectory_matrix(const std::vector<std::vector<Eigen::Vector2d>>& tracks);

/// Coordinates of each track along the top `dim` singular directions of W,
/// Sigma_dim V_dim^T = U_dim^T W, without centering (dim x N).
Eigen::MatrixXd project_trajectories(const TrajectoryMatrix& trajectories, unsigned dim = 5);

struct AffineSceneSpec {
  unsigned motions = 2;
  std::vector<std::size_t> points = {40};  // per motion; a single entry applies to all
  std::size_t frames = 10;
  double noise_px = 0.0;
  std::uint64_t seed = 0;
};

struct AffineScene {
  TrajectoryMatrix trajectories;
  std::vector<int> labels;
};

/// Independent rigid bodies under affine cameras, about 500 pixels across.
AffineScene affine_scene(const AffineSceneSpec& spec);

struct AffineResult {
  Segmentation segmentation;  // in the projected space
  Eigen::MatrixXd projected;  // dim x N
};

AffineResult segment_affine(const TrajectoryMatrix& trajectories, unsigned n, const SegmentOptions& options = {},
                            unsigned dim = 5);

/// Track file: header "F N", then one track per line with 2F numbers x1 y1 ... xF yF.
TrajectoryMatrix read_tracks(std::istream& in);
void write_tracks(std::ostream& out, const TrajectoryMatrix& trajectories);

/// Frame-major layout: header "N F", then F blocks of N lines "x y" (blank lines and
/// '#' comments ignored).
TrajectoryMatrix import_frame_major(std::istream& in);

/// CSV with x1,y1,x2,y2 per row; an optional non-numeric header row is skipped.
std::vector<Correspondence> read_correspondences(std::istream& in);
void write_correspondences(std::ostream& out, const std::vector<Correspondence>& correspondences);

}  // namespace gpca
