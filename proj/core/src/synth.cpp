#include "bottlegan/synth.hpp"

#include <algorithm>
#include <cmath>

#include "bottlegan/error.hpp"

namespace bottlegan {

namespace {

constexpr double kConcCeilH = 1.4;  // generation ceilings, strictly inside c_max
constexpr double kConcCeilE = 1.1;
constexpr std::uint64_t kRenderSeedSalt = 0x52454e4445520001ULL;

double smoothstep(double x) {
  x = std::clamp(x, 0.0, 1.0);
  return x * x * (3.0 - 2.0 * x);
}

// Bilinear value noise on a coarse grid, in [0, 1].
struct ValueNoise {
  int gh, gw, cell;
  std::vector<double> grid;

  ValueNoise(Rng& rng, int h, int w, int cell_px) : cell(cell_px) {
    gh = h / cell + 2;
    gw = w / cell + 2;
    grid.resize(static_cast<std::size_t>(gh) * gw);
    for (auto& g : grid) g = rng.uniform();
  }

  double operator()(int y, int x) const {
    const double fy = static_cast<double>(y) / cell;
    const double fx = static_cast<double>(x) / cell;
    const int iy = static_cast<int>(fy);
    const int ix = static_cast<int>(fx);
    const double ty = smoothstep(fy - iy);
    const double tx = smoothstep(fx - ix);
    auto g = [&](int yy, int xx) { return grid[static_cast<std::size_t>(yy) * gw + xx]; };
    const double a = g(iy, ix) * (1 - tx) + g(iy, ix + 1) * tx;
    const double b = g(iy + 1, ix) * (1 - tx) + g(iy + 1, ix + 1) * tx;
    return a * (1 - ty) + b * ty;
  }
};

}  // namespace

std::uint64_t content_seed(std::uint64_t seed, int band, int index) {
  return seed * 1000000ULL + static_cast<std::uint64_t>(band) * 1000ULL +
         static_cast<std::uint64_t>(index);
}

ContentSample gen_content(std::uint64_t seed, int h, int w, double density) {
  if (h < 16 || w < 16) throw InvalidInputError("gen_content: image must be at least 16x16");
  Rng rng(seed);
  ContentSample out;
  out.conc = ConcentrationMap(h, w);
  out.label.assign(static_cast<std::size_t>(h) * w, 0);

  // Hematoxylin: elliptical nucleus bumps; overlaps take the max.
  std::vector<double> hconc(static_cast<std::size_t>(h) * w, 0.0);
  const int min_dim = std::min(h, w);
  const double rmax = std::max(4.0, min_dim / 10.0);
  const int blobs = std::max<int>(1, std::lround(density * h * w / 576.0));
  for (int n = 0; n < blobs; ++n) {
    const double cy = rng.uniform(0.0, h);
    const double cx = rng.uniform(0.0, w);
    const double a = rng.uniform(3.0, rmax);
    const double b = rng.uniform(3.0, rmax);
    const double th = rng.uniform(0.0, M_PI);
    const double peak = rng.uniform(0.8, 1.3);
    const double ct = std::cos(th), st = std::sin(th);
    const int r = static_cast<int>(std::ceil(std::max(a, b))) + 1;
    const int y0 = std::max(0, static_cast<int>(cy) - r), y1 = std::min(h - 1, static_cast<int>(cy) + r);
    const int x0 = std::max(0, static_cast<int>(cx) - r), x1 = std::min(w - 1, static_cast<int>(cx) + r);
    for (int y = y0; y <= y1; ++y) {
      for (int x = x0; x <= x1; ++x) {
        const double dy = y - cy, dx = x - cx;
        const double u = ct * dx + st * dy;
        const double v = -st * dx + ct * dy;
        const double q = (u / a) * (u / a) + (v / b) * (v / b);
        if (q < 1.0) {
          const double bump = peak * (1.0 - q);
          auto& cell = hconc[static_cast<std::size_t>(y) * w + x];
          cell = std::max(cell, bump);
        }
      }
    }
  }

  // Eosin: smooth stroma field, zeroed in the background and inside nuclei.
  ValueNoise stroma(rng, h, w, std::max(6, min_dim / 8));
  for (int y = 0; y < h; ++y) {
    for (int x = 0; x < w; ++x) {
      const std::size_t p = static_cast<std::size_t>(y) * w + x;
      const double hc = std::min(hconc[p], kConcCeilH);
      const double s = stroma(y, x);
      const double tissue = smoothstep((s - 0.30) / 0.20);
      double ec = kConcCeilE * tissue * (0.4 + 0.6 * s);
      ec *= std::clamp(1.0 - hc / kNucleusThreshold, 0.0, 1.0);
      out.conc.v[p * 2 + 0] = hc;
      out.conc.v[p * 2 + 1] = std::clamp(ec, 0.0, kConcCeilE);
      out.label[p] = hc > kNucleusThreshold ? 1 : 0;
    }
  }
  return out;
}

StainStyle reference_style() {
  StainStyle s = reference_basis()[0];
  s.sigma_matrix = 0.0;
  s.sigma_od = 0.0;
  return s;
}

ImageRGB8 render_sample(const ContentSample& sample, const StainStyle& style,
                        std::uint64_t seed) {
  Rng rng(seed ^ kRenderSeedSalt);
  return quantize(render_from_concentrations(sample.conc, style, rng));
}

std::vector<ContentSample> build_reference_set(const FederationConfig& cfg, std::uint64_t seed) {
  std::vector<ContentSample> out;
  out.reserve(static_cast<std::size_t>(cfg.reference_size));
  for (int i = 0; i < cfg.reference_size; ++i)
    out.push_back(gen_content(content_seed(seed, 999, i), cfg.height, cfg.width, cfg.density));
  return out;
}

namespace {

void validate_config(const FederationConfig& cfg) {
  if (cfg.clients < 2) throw ConfigError("federation: need at least 2 clients");
  if (cfg.clients > 998) throw ConfigError("federation: at most 998 clients (seed bands)");
  if (cfg.samples_per_client < 1 || cfg.samples_per_client > 400)
    throw ConfigError("federation: samples_per_client out of range");
  if (cfg.test_samples_per_client < 0 || cfg.test_samples_per_client > 400)
    throw ConfigError("federation: test_samples_per_client out of range");
  if (cfg.reference_size < 1) throw ConfigError("federation: reference_size must be positive");
  if (cfg.height < 16 || cfg.width < 16) throw ConfigError("federation: patches must be >= 16px");
  const int labeled = (cfg.clients + 1) / 2;
  const int cap = std::min(11, cfg.samples_per_client);
  if (cfg.label_budget < labeled || cfg.label_budget > labeled * cap)
    throw ConfigError("federation: label budget infeasible for the labeled clients");
}

// Per-client label counts: uniform draws in [1, 11] rescaled to sum to the
// budget, each count kept within [1, cap].
std::vector<int> label_counts(Rng& rng, int n, int budget, int cap) {
  std::vector<int> u(static_cast<std::size_t>(n));
  double total = 0.0;
  for (auto& ui : u) {
    ui = static_cast<int>(rng.uniform_int(11)) + 1;
    total += ui;
  }
  std::vector<int> c(static_cast<std::size_t>(n));
  int sum = 0;
  for (int i = 0; i < n; ++i) {
    c[i] = std::clamp(static_cast<int>(std::lround(u[i] * budget / total)), 1, cap);
    sum += c[i];
  }
  int guard = 0;
  while (sum != budget) {
    for (int i = 0; i < n && sum != budget; ++i) {
      if (sum < budget && c[i] < cap) {
        ++c[i];
        ++sum;
      } else if (sum > budget && c[i] > 1) {
        --c[i];
        --sum;
      }
    }
    if (++guard > budget + 11 * n) throw ConfigError("federation: label counts did not converge");
  }
  return c;
}

}  // namespace

FederationDataset build_federation(const FederationConfig& cfg, std::uint64_t seed) {
  validate_config(cfg);
  Rng rng(seed);

  const int k_clients = cfg.clients;
  const int n_labeled_clients = (k_clients + 1) / 2;

  // Unique style per client: perturbed random simplex mixture of the basis.
  const auto& basis = reference_basis();
  std::vector<StainStyle> basis_list(basis.begin(), basis.end());
  std::vector<StainStyle> styles;
  styles.reserve(static_cast<std::size_t>(k_clients));
  for (int k = 0; k < k_clients; ++k) {
    StainStyle s = mix_styles(basis_list, rng.simplex(static_cast<int>(basis_list.size())));
    s.sigma_matrix = cfg.sigma_matrix;
    s.sigma_od = cfg.sigma_od;
    styles.push_back(perturb_style(s, rng));
  }

  std::vector<int> order(static_cast<std::size_t>(k_clients));
  for (int k = 0; k < k_clients; ++k) order[k] = k;
  rng.shuffle(order.begin(), order.end());
  std::vector<bool> labeled(static_cast<std::size_t>(k_clients), false);
  for (int i = 0; i < n_labeled_clients; ++i) labeled[order[i]] = true;

  const int cap = std::min(11, cfg.samples_per_client);
  const std::vector<int> counts = label_counts(rng, n_labeled_clients, cfg.label_budget, cap);

  FederationDataset fed;
  fed.clients.resize(static_cast<std::size_t>(k_clients));
  int labeled_slot = 0;
  for (int k = 0; k < k_clients; ++k) {
    ClientDataset& cd = fed.clients[static_cast<std::size_t>(k)];
    cd.style = styles[static_cast<std::size_t>(k)];
    cd.style_id = k;
    cd.labeled = labeled[static_cast<std::size_t>(k)];
    cd.n_labeled = cd.labeled ? counts[static_cast<std::size_t>(labeled_slot++)] : 0;
    for (int i = 0; i < cfg.samples_per_client; ++i) {
      const std::uint64_t cs = content_seed(seed, k, i);
      cd.samples.push_back(gen_content(cs, cfg.height, cfg.width, cfg.density));
      cd.images.push_back(render_sample(cd.samples.back(), cd.style, cs));
    }
    for (int i = 0; i < cfg.test_samples_per_client; ++i) {
      const std::uint64_t cs = content_seed(seed, k, 500 + i);
      cd.test_samples.push_back(gen_content(cs, cfg.height, cfg.width, cfg.density));
      cd.test_images.push_back(render_sample(cd.test_samples.back(), cd.style, cs));
    }
  }

  fed.reference = build_reference_set(cfg, seed);
  const StainStyle ref = reference_style();
  for (int i = 0; i < cfg.reference_size; ++i)
    fed.reference_images.push_back(
        render_sample(fed.reference[static_cast<std::size_t>(i)], ref, content_seed(seed, 999, i)));
  return fed;
}

}  // namespace bottlegan
