#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "otrimle/core_model.hpp"
#include "otrimle/distributions.hpp"
#include "otrimle/truth_eval.hpp"

namespace otrimle {

/// Distribution of one uninformative coordinate: zero mean, unit variance,
/// independent of everything else (Gaussian or Student t).
struct Marginal {
  Family family = Family::kGaussian;
  double nu = 3.0;
};

struct DgpSpec {
  std::string name;
  std::string description;
  int g = 0;
  int p = 0;
  int informative_dims = 2;
  std::vector<ComponentSpec> components;  // cluster components, labels 1..g
  std::optional<ComponentSpec> noise;     // uniform box on the informative dims, label 0
  std::vector<Marginal> uninformative;    // one entry per dimension beyond informative_dims
  int n = 0;

  double noise_weight() const { return noise ? noise->weight : 0.0; }
  void validate() const;
};

struct LabeledSample {
  Dataset data;
  Labeling gen_labels;  // generating component per point, 0 for noise
  TruthParams truth;
};

/// Reference-truth triples of a spec: renormalised cluster weights and the
/// MCD functional of every cluster component, block-diagonal over the
/// uninformative coordinates.
TruthParams dgp_truth(const DgpSpec& spec);

/// Draws spec.n points; identical seeds give bit-identical samples.
LabeledSample sample_dgp(const DgpSpec& spec, std::uint64_t seed);

/// Seed of the named stream for one replicate of a master seed.
std::uint64_t stream_seed(std::uint64_t master, std::uint64_t replicate, const std::string& stream);

/// Representative specs for the six setup families, low and high dimension.
const std::vector<DgpSpec>& builtin_specs();

/// Looks up a builtin spec; the error message lists the catalog.
const DgpSpec& builtin_spec(const std::string& name);

/// Two overlapping unit-variance clusters, 100 points each at (0,0) and (3,0),
/// plus 12 points from N((12,0), 25 I); generating labels 1, 2, 3. With two
/// clusters the small wide group is either noise or a cluster of its own,
/// depending on how strongly the noise proportion is penalised.
LabeledSample overlap_pair_dataset(std::uint64_t seed);

/// Seed of the reference draw of overlap_pair_dataset.
inline constexpr std::uint64_t kOverlapPairSeed = 4;

/// Copy of a spec with a different sample size.
DgpSpec with_sample_size(DgpSpec spec, int n);

}  // namespace otrimle
