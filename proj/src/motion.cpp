#include "gpca/motion.hpp"

#include <cmath>
#include <istream>
#include <limits>
#include <numbers>
#include <ostream>
#include <sstream>
#include <string>

#include "gpca/error.hpp"
#include "gpca/format.hpp"
#include "gpca/linalg.hpp"
#include "gpca/rng.hpp"
#include "gpca/synthgen.hpp"

namespace gpca {

namespace {

constexpr double kStationary = 1e-12;

Eigen::Vector3d dehomogenize(const Eigen::Vector3d& x, std::size_t j) {
  if (x(2) == 0.0 || !x.allFinite())
    throw InputError("correspondence " + std::to_string(j) + ": point at infinity or non-finite");
  return x / x(2);
}

// Whitespace tokens of a line with any '#' comment removed.
std::vector<std::string> tokens(const std::string& line) {
  std::istringstream ss(line.substr(0, line.find('#')));
  std::vector<std::string> out;
  for (std::string t; ss >> t;) out.push_back(t);
  return out;
}

std::vector<double> numbers(const std::vector<std::string>& toks, std::size_t line_no) {
  std::vector<double> out(toks.size());
  for (std::size_t k = 0; k < toks.size(); ++k)
    if (!parse_double(toks[k], out[k]) || !std::isfinite(out[k]))
      throw InputError("line " + std::to_string(line_no) + ": '" + toks[k] + "' is not a finite number");
  return out;
}

std::size_t parse_count(const std::string& token, std::size_t line_no, const char* what) {
  double v = 0.0;
  if (!parse_double(token, v) || v < 1.0 || v != std::floor(v) || v > 1e9)
    throw InputError("line " + std::to_string(line_no) + ": " + what + " must be a positive integer");
  return static_cast<std::size_t>(v);
}

// Next line with content; returns false at end of input.
bool next_tokens(std::istream& in, std::size_t& line_no, std::vector<std::string>& out) {
  for (std::string line; std::getline(in, line);) {
    ++line_no;
    out = tokens(line);
    if (!out.empty()) return true;
  }
  return false;
}

Eigen::Matrix3d rotation(Rng& rng) {
  Eigen::Matrix3d q = linalg::random_orthonormal(rng, 3, 3);
  if (q.determinant() < 0.0) q.col(2) = -q.col(2);
  return q;
}

}  // namespace

EpipolarLines epipolar_lines(const std::vector<Correspondence>& correspondences) {
  EpipolarLines out;
  std::vector<Eigen::Vector3d> cols;
  for (std::size_t j = 0; j < correspondences.size(); ++j) {
    const Eigen::Vector3d x1 = dehomogenize(correspondences[j].x1, j);
    const Eigen::Vector3d x2 = dehomogenize(correspondences[j].x2, j);
    const Eigen::Vector3d l = x2.cross(x1);
    if (l.norm() < kStationary * x1.norm() * x2.norm()) {
      out.excluded.push_back(j);
      continue;
    }
    cols.push_back(l.normalized());
    out.kept.push_back(j);
  }
  out.lines.resize(3, static_cast<Eigen::Index>(cols.size()));
  for (std::size_t k = 0; k < cols.size(); ++k) out.lines.col(static_cast<Eigen::Index>(k)) = cols[k];
  return out;
}

Eigen::Matrix3d normalizing_transform(const std::vector<Correspondence>& correspondences) {
  if (correspondences.empty()) return Eigen::Matrix3d::Identity();
  Eigen::Vector2d centroid = Eigen::Vector2d::Zero();
  for (std::size_t j = 0; j < correspondences.size(); ++j)
    centroid += dehomogenize(correspondences[j].x1, j).head<2>() + dehomogenize(correspondences[j].x2, j).head<2>();
  const double count = 2.0 * static_cast<double>(correspondences.size());
  centroid /= count;
  double spread = 0.0;
  for (std::size_t j = 0; j < correspondences.size(); ++j)
    spread += (dehomogenize(correspondences[j].x1, j).head<2>() - centroid).norm() +
              (dehomogenize(correspondences[j].x2, j).head<2>() - centroid).norm();
  spread /= count;
  const double s = spread > 0.0 ? std::numbers::sqrt2 / spread : 1.0;
  Eigen::Matrix3d h;
  h << s, 0, -s * centroid(0), 0, s, -s * centroid(1), 0, 0, 1;
  return h;
}

TranslationResult segment_translations(const std::vector<Correspondence>& correspondences, unsigned n,
                                       const TranslationOptions& options) {
  TranslationResult out;
  const EpipolarLines raw = epipolar_lines(correspondences);
  if (raw.kept.empty()) throw InputError("segment_translations: every correspondence is stationary");
  out.excluded = raw.excluded;

  Eigen::Matrix3d h = Eigen::Matrix3d::Identity();
  out.lines = raw;
  if (options.normalize_image) {
    h = normalizing_transform(correspondences);
    for (std::size_t k = 0; k < raw.kept.size(); ++k) {
      const auto& c = correspondences[raw.kept[k]];
      const Eigen::Vector3d l = (h * dehomogenize(c.x2, k)).cross(h * dehomogenize(c.x1, k));
      out.lines.lines.col(static_cast<Eigen::Index>(k)) = l.normalized();
    }
  }

  SegmentOptions seg_options = SegmentOptions::hyperplanes();
  seg_options.kappa = options.kappa;
  seg_options.delta = options.delta;
  Segmentation inner = segment(out.lines.lines, n, seg_options);

  // A normal m of the conditioned lines is the epipole h^-1 m in pixels.
  const Eigen::Matrix3d h_inv = h.inverse();
  Segmentation& seg = out.segmentation;
  seg.degree = n;
  seg.stages = inner.stages;
  seg.warnings = inner.warnings;
  for (const auto& m : inner.models) {
    const Eigen::Vector3d e = (h_inv * m.complement.col(0)).normalized();
    out.epipoles.push_back(e);
    seg.models.push_back(SubspaceModel::from_complement(e));
  }
  seg.labels.assign(correspondences.size(), kOutlier);
  seg.residuals = Eigen::VectorXd::Constant(static_cast<Eigen::Index>(correspondences.size()),
                                            std::numeric_limits<double>::quiet_NaN());
  for (std::size_t k = 0; k < raw.kept.size(); ++k) {
    const int label = inner.labels[k];
    seg.labels[raw.kept[k]] = label;
    seg.residuals(static_cast<Eigen::Index>(raw.kept[k])) =
        std::abs(out.epipoles[static_cast<std::size_t>(label)].dot(raw.lines.col(static_cast<Eigen::Index>(k))));
  }
  if (!raw.excluded.empty())
    seg.warnings.push_back(std::to_string(raw.excluded.size()) + " stationary correspondences excluded");
  return out;
}

TranslationScene translation_scene(const TranslationSceneSpec& spec) {
  if (spec.motions == 0) throw InputError("translation scene: at least one motion required");
  if (spec.points < spec.motions) throw InputError("translation scene: fewer points than motions");
  if (!(spec.image_size > 0.0) || !(spec.focal > 0.0)) throw InputError("translation scene: bad camera");
  if (!(spec.noise_px >= 0.0) || !std::isfinite(spec.noise_px))
    throw InputError("translation scene: noise must be a finite value >= 0");

  Rng rng(spec.seed);
  TranslationScene scene;
  const double c = spec.image_size / 2.0;
  scene.camera << spec.focal, 0, c, 0, spec.focal, c, 0, 0, 1;
  const Eigen::Matrix3d k_inv = scene.camera.inverse();

  const double min_cos = std::cos(spec.min_angle_deg * std::numbers::pi / 180.0);
  for (unsigned i = 0; i < spec.motions; ++i) {
    for (int attempt = 0;; ++attempt) {
      if (attempt == 1000) throw InputError("translation scene: could not draw distinct translations");
      const Eigen::Vector3d t = Eigen::Vector3d(rng.normal_matrix(3, 1)).normalized();
      bool ok = true;
      for (const auto& u : scene.translations) ok = ok && std::abs(u.dot(t)) <= min_cos;
      if (ok) {
        scene.translations.push_back(t);
        scene.epipoles.push_back((scene.camera * t).normalized());
        break;
      }
    }
  }

  const std::size_t base = spec.points / spec.motions, extra = spec.points % spec.motions;
  for (unsigned i = 0; i < spec.motions; ++i) {
    const std::size_t count = base + (i < extra ? 1 : 0);
    for (std::size_t j = 0; j < count; ++j) {
      const Eigen::Vector3d x1(rng.uniform(0.0, spec.image_size), rng.uniform(0.0, spec.image_size), 1.0);
      const double depth = rng.uniform(5.0, 10.0);
      const Eigen::Vector3d p = depth * (k_inv * x1) + scene.translations[i];
      const Eigen::Vector3d x2 = scene.camera * p / p(2);
      scene.correspondences.push_back({x1, x2});
      scene.labels.push_back(static_cast<int>(i));
    }
  }
  if (spec.noise_px > 0.0)
    for (auto& corr : scene.correspondences) {
      corr.x1.head<2>() += spec.noise_px * rng.normal_matrix(2, 1);
      corr.x2.head<2>() += spec.noise_px * rng.normal_matrix(2, 1);
    }
  return scene;
}

double translation_error(const TranslationScene& scene, const std::vector<Eigen::Vector3d>& epipoles) {
  const Eigen::Matrix3d k_inv = scene.camera.inverse();
  std::vector<SubspaceModel> truth, estimate;
  for (const auto& t : scene.translations) truth.push_back(SubspaceModel::from_complement(t));
  for (const auto& e : epipoles) estimate.push_back(SubspaceModel::from_complement(k_inv * e));
  return angle_error(truth, estimate);
}

Eigen::VectorXd TrajectoryMatrix::singular_values() const { return linalg::singular_values(w); }

TrajectoryMatrix trajectory_matrix(const std::vector<std::vector<Eigen::Vector2d>>& tracks) {
  if (tracks.empty()) throw InputError("trajectory matrix: no tracks");
  const std::size_t frames = tracks.front().size();
  if (frames == 0) throw InputError("trajectory matrix: tracks have no frames");
  TrajectoryMatrix out;
  out.frames = frames;
  out.w.resize(static_cast<Eigen::Index>(2 * frames), static_cast<Eigen::Index>(tracks.size()));
  for (std::size_t j = 0; j < tracks.size(); ++j) {
    if (tracks[j].size() != frames)
      throw InputError("trajectory matrix: track " + std::to_string(j) + " has " + std::to_string(tracks[j].size()) +
                       " frames, expected " + std::to_string(frames));
    for (std::size_t f = 0; f < frames; ++f)
      out.w.block<2, 1>(static_cast<Eigen::Index>(2 * f), static_cast<Eigen::Index>(j)) = tracks[j][f];
  }
  if (!out.w.allFinite()) throw InputError("trajectory matrix: non-finite coordinates");
  return out;
}

Eigen::MatrixXd project_trajectories(const TrajectoryMatrix& trajectories, unsigned dim) {
  const Eigen::MatrixXd& w = trajectories.w;
  if (dim == 0) throw InputError("project_trajectories: target dimension must be positive");
  if (w.cols() < static_cast<Eigen::Index>(dim))
    throw InputError("project_trajectories: need at least " + std::to_string(dim) + " tracks");
  if (w.rows() < static_cast<Eigen::Index>(dim))
    throw InputError("project_trajectories: need at least " + std::to_string((dim + 1) / 2) + " frames");
  Eigen::JacobiSVD<Eigen::MatrixXd> svd(w, Eigen::ComputeThinV);
  const Eigen::VectorXd& s = svd.singularValues();
  if (s(0) == 0.0 || s.size() < 2 || s(1) <= 1e-12 * s(0))
    throw DegenerateError("project_trajectories: trajectory matrix has rank below 2");
  // Sigma_k V_k^T: a rank-r W keeps its columns in an r-dimensional subspace.
  return s.head(dim).asDiagonal() * svd.matrixV().leftCols(dim).transpose();
}

AffineScene affine_scene(const AffineSceneSpec& spec) {
  if (spec.motions == 0) throw InputError("affine scene: at least one motion required");
  if (spec.frames == 0) throw InputError("affine scene: at least one frame required");
  if (spec.points.empty() || (spec.points.size() != 1 && spec.points.size() != spec.motions))
    throw InputError("affine scene: points must have one entry or one per motion");
  if (!(spec.noise_px >= 0.0) || !std::isfinite(spec.noise_px))
    throw InputError("affine scene: noise must be a finite value >= 0");

  Rng rng(spec.seed);
  std::vector<std::vector<Eigen::Vector2d>> tracks;
  AffineScene scene;
  for (unsigned i = 0; i < spec.motions; ++i) {
    const std::size_t count = spec.points.size() == 1 ? spec.points[0] : spec.points[i];
    // Per frame: scaled orthographic camera [s R_12 | t].
    std::vector<Eigen::Matrix<double, 2, 4>> cameras;
    for (std::size_t f = 0; f < spec.frames; ++f) {
      Eigen::Matrix<double, 2, 4> a;
      a.leftCols<3>() = 100.0 * rotation(rng).topRows<2>();
      a.col(3) = Eigen::Vector2d(rng.uniform(150.0, 350.0), rng.uniform(150.0, 350.0));
      cameras.push_back(a);
    }
    for (std::size_t j = 0; j < count; ++j) {
      const Eigen::Vector4d x(rng.uniform(-1.0, 1.0), rng.uniform(-1.0, 1.0), rng.uniform(-1.0, 1.0), 1.0);
      std::vector<Eigen::Vector2d> track;
      for (const auto& a : cameras) track.emplace_back(a * x);
      tracks.push_back(std::move(track));
      scene.labels.push_back(static_cast<int>(i));
    }
  }
  if (spec.noise_px > 0.0)
    for (auto& track : tracks)
      for (auto& p : track) p += spec.noise_px * rng.normal_matrix(2, 1);
  scene.trajectories = trajectory_matrix(tracks);
  return scene;
}

AffineResult segment_affine(const TrajectoryMatrix& trajectories, unsigned n, const SegmentOptions& options,
                            unsigned dim) {
  AffineResult out;
  out.projected = project_trajectories(trajectories, dim);
  out.segmentation = segment(out.projected, n, options);
  return out;
}

TrajectoryMatrix read_tracks(std::istream& in) {
  std::size_t line_no = 0;
  std::vector<std::string> toks;
  if (!next_tokens(in, line_no, toks)) throw InputError("track file: empty input");
  if (toks.size() != 2) throw InputError("line " + std::to_string(line_no) + ": header must be 'F N'");
  const std::size_t frames = parse_count(toks[0], line_no, "F");
  const std::size_t count = parse_count(toks[1], line_no, "N");

  TrajectoryMatrix out;
  out.frames = frames;
  out.w.resize(static_cast<Eigen::Index>(2 * frames), static_cast<Eigen::Index>(count));
  for (std::size_t j = 0; j < count; ++j) {
    if (!next_tokens(in, line_no, toks))
      throw InputError("track file: expected " + std::to_string(count) + " tracks, found " + std::to_string(j));
    if (toks.size() != 2 * frames)
      throw InputError("line " + std::to_string(line_no) + ": expected " + std::to_string(2 * frames) +
                       " numbers, got " + std::to_string(toks.size()));
    const auto v = numbers(toks, line_no);
    for (std::size_t r = 0; r < v.size(); ++r) out.w(static_cast<Eigen::Index>(r), static_cast<Eigen::Index>(j)) = v[r];
  }
  if (next_tokens(in, line_no, toks)) throw InputError("line " + std::to_string(line_no) + ": unexpected extra track");
  return out;
}

void write_tracks(std::ostream& out, const TrajectoryMatrix& trajectories) {
  out << trajectories.frames << ' ' << trajectories.tracks() << '\n';
  for (Eigen::Index j = 0; j < trajectories.w.cols(); ++j) {
    for (Eigen::Index r = 0; r < trajectories.w.rows(); ++r)
      out << (r ? " " : "") << format_double(trajectories.w(r, j));
    out << '\n';
  }
}

TrajectoryMatrix import_frame_major(std::istream& in) {
  std::size_t line_no = 0;
  std::vector<std::string> toks;
  if (!next_tokens(in, line_no, toks)) throw InputError("frame-major file: empty input");
  if (toks.size() != 2) throw InputError("line " + std::to_string(line_no) + ": header must be 'N F'");
  const std::size_t count = parse_count(toks[0], line_no, "N");
  const std::size_t frames = parse_count(toks[1], line_no, "F");

  TrajectoryMatrix out;
  out.frames = frames;
  out.w.resize(static_cast<Eigen::Index>(2 * frames), static_cast<Eigen::Index>(count));
  for (std::size_t f = 0; f < frames; ++f)
    for (std::size_t j = 0; j < count; ++j) {
      if (!next_tokens(in, line_no, toks))
        throw InputError("frame-major file: input ends in frame " + std::to_string(f + 1) + " at point " +
                         std::to_string(j + 1));
      if (toks.size() != 2)
        throw InputError("line " + std::to_string(line_no) + ": expected 'x y', got " + std::to_string(toks.size()) +
                         " values");
      const auto v = numbers(toks, line_no);
      out.w(static_cast<Eigen::Index>(2 * f), static_cast<Eigen::Index>(j)) = v[0];
      out.w(static_cast<Eigen::Index>(2 * f + 1), static_cast<Eigen::Index>(j)) = v[1];
    }
  if (next_tokens(in, line_no, toks)) throw InputError("line " + std::to_string(line_no) + ": unexpected extra data");
  return out;
}

std::vector<Correspondence> read_correspondences(std::istream& in) {
  std::vector<Correspondence> out;
  std::size_t line_no = 0;
  bool first = true;
  for (std::string line; std::getline(in, line);) {
    ++line_no;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.find_first_not_of(" \t") == std::string::npos || line.front() == '#') continue;
    std::vector<std::string> fields;
    std::stringstream ss(line);
    for (std::string f; std::getline(ss, f, ',');) fields.push_back(f);
    double probe = 0.0;
    if (first && !fields.empty() && !parse_double(fields[0], probe)) {
      first = false;
      continue;
    }
    first = false;
    if (fields.size() != 4)
      throw InputError("line " + std::to_string(line_no) + ": expected 4 values x1,y1,x2,y2, got " +
                       std::to_string(fields.size()));
    double v[4];
    for (int k = 0; k < 4; ++k)
      if (!parse_double(fields[static_cast<std::size_t>(k)], v[k]) || !std::isfinite(v[k]))
        throw InputError("line " + std::to_string(line_no) + ": '" + fields[static_cast<std::size_t>(k)] +
                         "' is not a finite number");
    out.push_back(Correspondence::from_pixels(v[0], v[1], v[2], v[3]));
  }
  if (out.empty()) throw InputError("correspondence file: no rows");
  return out;
}

void write_correspondences(std::ostream& out, const std::vector<Correspondence>& correspondences) {
  out << "x1,y1,x2,y2\n";
  for (std::size_t j = 0; j < correspondences.size(); ++j) {
    const Eigen::Vector3d a = dehomogenize(correspondences[j].x1, j), b = dehomogenize(correspondences[j].x2, j);
    out << format_double(a(0)) << ',' << format_double(a(1)) << ',' << format_double(b(0)) << ','
        << format_double(b(1)) << '\n';
  }
}

}  // namespace gpca
