#pragma once

#include <cstdint>
#include <vector>

#include "bottlegan/stain.hpp"

namespace bottlegan {

// Destained content: per-pixel dye concentrations plus the nucleus mask.
// The label is exactly the set of pixels whose hematoxylin concentration
// exceeds the generation-time nucleus threshold.
struct ContentSample {
  ConcentrationMap conc;
  std::vector<std::uint8_t> label;  // h*w, 1 = nucleus
};

struct FederationConfig {
  int clients = 8;
  int samples_per_client = 12;
  int test_samples_per_client = 4;
  int label_budget = 24;
  int height = 96;
  int width = 96;
  double density = 1.0;
  int reference_size = 16;
  double sigma_matrix = 0.03;  // stain-matrix noise used when synthesizing styles
  double sigma_od = 0.02;      // pixel OD noise used when rendering client images
};

struct ClientDataset {
  std::vector<ContentSample> samples;
  std::vector<ImageRGB8> images;  // samples rendered in the client style
  std::vector<ContentSample> test_samples;
  std::vector<ImageRGB8> test_images;
  StainStyle style;
  int style_id = 0;
  bool labeled = false;
  int n_labeled = 0;  // the first n_labeled samples expose their labels
};

struct FederationDataset {
  std::vector<ClientDataset> clients;
  std::vector<ContentSample> reference;       // the public set C
  std::vector<ImageRGB8> reference_images;    // C rendered in the reference style
};

// Hematoxylin concentration threshold defining the nucleus label.
inline constexpr double kNucleusThreshold = 0.5;

// Tissue-like content: elliptical nucleus blobs over a smooth stroma field.
// Deterministic in seed.
ContentSample gen_content(std::uint64_t seed, int h, int w, double density = 1.0);

// The canonical reference staining: basis style 0 with all noise disabled.
StainStyle reference_style();

std::vector<ContentSample> build_reference_set(const FederationConfig& cfg, std::uint64_t seed);

// K clients with unique synthesized styles, ceil(K/2) of them labeled, the
// label budget split into per-client counts in [1, 11], plus a disjoint
// reference set. Pure function of (cfg, seed).
FederationDataset build_federation(const FederationConfig& cfg, std::uint64_t seed);

// Renders one content sample in the given style; the render noise stream is
// derived from the content seed so materialization is reproducible.
ImageRGB8 render_sample(const ContentSample& sample, const StainStyle& style,
                        std::uint64_t content_seed);

// Seed-space partitioning: content seeds for client k live in band k, the
// reference set in band 999, held-out test content at in-band offset 500.
std::uint64_t content_seed(std::uint64_t seed, int band, int index);

}  // namespace bottlegan
