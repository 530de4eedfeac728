#pragma once

#include <Eigen/Dense>
#include <array>
#include <vector>

#include "bottlegan/image.hpp"
#include "bottlegan/rng.hpp"

namespace bottlegan {

// Column j is the unit-norm optical-density color vector of dye j
// (column 0 hematoxylin, column 1 eosin).
using StainMatrix = Eigen::Matrix<double, 3, 2>;

// Ground-truth realization of one laboratory's staining style: the stain
// matrix plus concentration ceilings and noise scales used when rendering.
struct StainStyle {
  StainMatrix matrix;
  Eigen::Vector2d c_max{1.5, 1.2};
  double sigma_matrix = 0.0;  // per-entry stain-matrix noise
  double sigma_od = 0.0;      // per-pixel optical-density noise
};

// Per-pixel dye concentrations, h*w*2 row-major, >= 0.
struct ConcentrationMap {
  int h = 0, w = 0;
  std::vector<double> v;

  ConcentrationMap() = default;
  ConcentrationMap(int height, int width)
      : h(height), w(width), v(static_cast<std::size_t>(height) * width * 2, 0.0) {}
  double& at(int y, int x, int d) { return v[(static_cast<std::size_t>(y) * w + x) * 2 + d]; }
  double at(int y, int x, int d) const { return v[(static_cast<std::size_t>(y) * w + x) * 2 + d]; }
  std::size_t pixels() const { return static_cast<std::size_t>(h) * w; }
};

// 8-bit quantization floor; optical densities live in [0, -ln eps].
inline constexpr double kOdEps = 1.0 / 255.0;
double od_max();

ImageOD rgb_to_od(const ImageRGB& img, double eps = kOdEps);
ImageRGB od_to_rgb(const ImageOD& od);

// Beer-Lambert forward model: OD = conc * matrix^T plus optional Gaussian
// pixel noise, clamped to >= 0. Exact and deterministic when sigma_od == 0.
ImageRGB render_from_concentrations(const ConcentrationMap& conc, const StainStyle& style,
                                    Rng& rng);

// Macenko stain-matrix estimation: threshold by OD norm, project onto the
// top-2 principal plane, take robust extreme angles.
StainMatrix macenko_estimate(const ImageRGB& img, double alpha = 1.0, double beta = 0.15);

StainStyle mix_styles(const std::vector<StainStyle>& styles, const std::vector<double>& weights);
StainStyle perturb_style(const StainStyle& style, Rng& rng);

// Built-in bank of five H&E stain-vector pairs: a standard published pair
// plus four systematic hue/saturation perturbations. Version 1; any change
// is a new version because client styles derive from it.
const std::array<StainStyle, 5>& reference_basis();

void validate_stain_matrix(const StainMatrix& m);
double column_angle_deg(const Eigen::Vector3d& a, const Eigen::Vector3d& b);
// Max per-column angle between two stain matrices, in degrees.
double stain_angle_deg(const StainMatrix& a, const StainMatrix& b);

}  // namespace bottlegan
