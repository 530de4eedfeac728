#include "bottlegan/stain.hpp"

#include <algorithm>
#include <cmath>

#include "bottlegan/error.hpp"

namespace bottlegan {

namespace {

double percentile(std::vector<double>& values, double q) {
  std::sort(values.begin(), values.end());
  const double pos = q * static_cast<double>(values.size() - 1);
  const auto lo = static_cast<std::size_t>(pos);
  const std::size_t hi = std::min(lo + 1, values.size() - 1);
  const double frac = pos - static_cast<double>(lo);
  return values[lo] * (1.0 - frac) + values[hi] * frac;
}

Eigen::Vector3d normalized_column(Eigen::Vector3d v) {
  for (int i = 0; i < 3; ++i) v[i] = std::max(0.0, v[i]);
  const double n = v.norm();
  if (n < 1e-12) throw DegenerateInputError("stain vector collapsed to zero");
  return v / n;
}

// Column 0 is hematoxylin: the more blue-heavy vector, ties broken by the
// larger first coordinate.
StainMatrix order_columns(const Eigen::Vector3d& a, const Eigen::Vector3d& b) {
  bool a_first = a[2] > b[2];
  if (std::abs(a[2] - b[2]) <= 1e-12) a_first = a[0] >= b[0];
  StainMatrix m;
  m.col(0) = a_first ? a : b;
  m.col(1) = a_first ? b : a;
  return m;
}

}  // namespace

double od_max() { return -std::log(kOdEps); }

void validate_stain_matrix(const StainMatrix& m) {
  for (int c = 0; c < 2; ++c) {
    if (std::abs(m.col(c).norm() - 1.0) > 1e-6)
      throw InvalidInputError("stain matrix column is not unit norm");
    for (int r = 0; r < 3; ++r)
      if (m(r, c) < -1e-12) throw InvalidInputError("stain matrix entry is negative");
  }
}

double column_angle_deg(const Eigen::Vector3d& a, const Eigen::Vector3d& b) {
  const double d = a.normalized().dot(b.normalized());
  return std::acos(std::clamp(d, -1.0, 1.0)) * 180.0 / M_PI;
}

double stain_angle_deg(const StainMatrix& a, const StainMatrix& b) {
  return std::max(column_angle_deg(a.col(0), b.col(0)), column_angle_deg(a.col(1), b.col(1)));
}

ImageOD rgb_to_od(const ImageRGB& img, double eps) {
  if (eps <= 0.0 || eps > 1e-2) throw InvalidInputError("rgb_to_od: eps must be in (0, 1e-2]");
  ImageOD od(img.h, img.w);
  for (std::size_t i = 0; i < img.v.size(); ++i) {
    const double x = img.v[i];
    if (!std::isfinite(x)) throw InvalidInputError("rgb_to_od: non-finite pixel");
    od.v[i] = -std::log(std::max(x, eps));
  }
  return od;
}

ImageRGB od_to_rgb(const ImageOD& od) {
  ImageRGB img(od.h, od.w);
  for (std::size_t i = 0; i < od.v.size(); ++i) {
    const double d = od.v[i];
    if (!std::isfinite(d) || d < 0.0) throw InvalidInputError("od_to_rgb: OD must be finite and >= 0");
    img.v[i] = std::clamp(std::exp(-d), 0.0, 1.0);
  }
  return img;
}

ImageRGB render_from_concentrations(const ConcentrationMap& conc, const StainStyle& style,
                                    Rng& rng) {
  if (conc.h <= 0 || conc.w <= 0 || conc.v.size() != conc.pixels() * 2)
    throw InvalidInputError("render: malformed concentration map");
  ImageOD od(conc.h, conc.w);
  const StainMatrix& m = style.matrix;
  const std::size_t n = conc.pixels();
  for (std::size_t p = 0; p < n; ++p) {
    const double ch = conc.v[p * 2 + 0];
    const double ce = conc.v[p * 2 + 1];
    if (ch < -1e-12 || ce < -1e-12 || ch > style.c_max[0] + 1e-9 || ce > style.c_max[1] + 1e-9)
      throw InvalidInputError("render: concentration out of [0, c_max]");
    for (int c = 0; c < 3; ++c) {
      double d = m(c, 0) * ch + m(c, 1) * ce;
      if (style.sigma_od > 0.0) d += rng.normal(0.0, style.sigma_od);
      od.v[p * 3 + c] = std::max(0.0, d);
    }
  }
  return od_to_rgb(od);
}

StainMatrix macenko_estimate(const ImageRGB& img, double alpha, double beta) {
  const ImageOD od = rgb_to_od(img);
  std::vector<Eigen::Vector3d> pts;
  pts.reserve(od.pixels());
  for (std::size_t p = 0; p < od.pixels(); ++p) {
    const Eigen::Vector3d d(od.v[p * 3], od.v[p * 3 + 1], od.v[p * 3 + 2]);
    if (d.norm() > beta) pts.push_back(d);
  }
  if (pts.size() < 64)
    throw InsufficientTissueError("macenko: fewer than 64 pixels above the OD threshold");

  Eigen::Matrix3d scatter = Eigen::Matrix3d::Zero();
  for (const auto& d : pts) scatter += d * d.transpose();
  scatter /= static_cast<double>(pts.size());

  Eigen::SelfAdjointEigenSolver<Eigen::Matrix3d> eig(scatter);
  const Eigen::Vector3d evals = eig.eigenvalues();  // ascending
  if (evals[2] <= 1e-12 || evals[1] <= 1e-8 * evals[2])
    throw DegenerateInputError("macenko: OD cloud does not span a two-dye plane");

  Eigen::Vector3d v1 = eig.eigenvectors().col(2);
  Eigen::Vector3d v2 = eig.eigenvectors().col(1);
  Eigen::Vector3d mean = Eigen::Vector3d::Zero();
  for (const auto& d : pts) mean += d;
  mean /= static_cast<double>(pts.size());
  if (v1.dot(mean) < 0.0) v1 = -v1;

  std::vector<double> phis;
  phis.reserve(pts.size());
  for (const auto& d : pts) phis.push_back(std::atan2(d.dot(v2), d.dot(v1)));
  const double lo = percentile(phis, alpha / 100.0);
  const double hi = percentile(phis, 1.0 - alpha / 100.0);

  auto direction = [&](double phi) {
    Eigen::Vector3d u = std::cos(phi) * v1 + std::sin(phi) * v2;
    if (u.sum() < 0.0) u = -u;
    return normalized_column(u);
  };
  return order_columns(direction(lo), direction(hi));
}

StainStyle mix_styles(const std::vector<StainStyle>& styles, const std::vector<double>& weights) {
  if (styles.empty()) throw InvalidInputError("mix_styles: empty style list");
  if (styles.size() != weights.size())
    throw InvalidInputError("mix_styles: weights/styles size mismatch");
  double total = 0.0;
  for (double w : weights) {
    if (w < -1e-12) throw InvalidInputError("mix_styles: negative weight");
    total += w;
  }
  if (std::abs(total - 1.0) > 1e-9) throw InvalidInputError("mix_styles: weights must sum to 1");

  StainStyle out;
  Eigen::Matrix<double, 3, 2> m = Eigen::Matrix<double, 3, 2>::Zero();
  out.c_max.setZero();
  out.sigma_matrix = 0.0;
  out.sigma_od = 0.0;
  for (std::size_t i = 0; i < styles.size(); ++i) {
    m += weights[i] * styles[i].matrix;
    out.c_max += weights[i] * styles[i].c_max;
    out.sigma_matrix += weights[i] * styles[i].sigma_matrix;
    out.sigma_od += weights[i] * styles[i].sigma_od;
  }
  out.matrix.col(0) = normalized_column(m.col(0));
  out.matrix.col(1) = normalized_column(m.col(1));
  return out;
}

StainStyle perturb_style(const StainStyle& style, Rng& rng) {
  StainStyle out = style;
  if (style.sigma_matrix <= 0.0) return out;
  Eigen::Matrix<double, 3, 2> m = style.matrix;
  for (int r = 0; r < 3; ++r)
    for (int c = 0; c < 2; ++c) m(r, c) += rng.normal(0.0, style.sigma_matrix);
  for (int c = 0; c < 2; ++c) {
    Eigen::Vector3d col = m.col(c);
    for (int r = 0; r < 3; ++r) col[r] = std::max(0.0, col[r]);
    // A column wiped out by noise keeps its original direction.
    out.matrix.col(c) = col.norm() < 1e-8 ? style.matrix.col(c).normalized() : col.normalized();
  }
  return out;
}

const std::array<StainStyle, 5>& reference_basis() {
  static const std::array<StainStyle, 5> basis = [] {
    // Standard published H&E optical-density vectors.
    const Eigen::Vector3d h0(0.65, 0.70, 0.29);
    const Eigen::Vector3d e0(0.07, 0.99, 0.11);
    // Systematic per-channel hue/saturation rescalings of the base pair.
    const double hs[5][3] = {{1.00, 1.00, 1.00},
                             {1.15, 0.95, 1.00},
                             {0.85, 1.05, 1.10},
                             {1.00, 1.12, 0.88},
                             {1.10, 0.88, 1.05}};
    const double es[5][3] = {{1.00, 1.00, 1.00},
                             {0.90, 1.00, 1.20},
                             {1.10, 1.00, 0.85},
                             {1.20, 0.90, 1.00},
                             {0.95, 1.12, 0.90}};
    std::array<StainStyle, 5> out;
    for (int i = 0; i < 5; ++i) {
      Eigen::Vector3d h = h0.cwiseProduct(Eigen::Vector3d(hs[i][0], hs[i][1], hs[i][2]));
      Eigen::Vector3d e = e0.cwiseProduct(Eigen::Vector3d(es[i][0], es[i][1], es[i][2]));
      out[i].matrix.col(0) = h.normalized();
      out[i].matrix.col(1) = e.normalized();
      out[i].c_max = Eigen::Vector2d(1.5, 1.2);
      out[i].sigma_matrix = 0.0;
      out[i].sigma_od = 0.0;
    }
    return out;
  }();
  return basis;
}

}  // namespace bottlegan
