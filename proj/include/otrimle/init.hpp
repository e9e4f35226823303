#pragma once

#include <vector>

#include "otrimle/core_model.hpp"

namespace otrimle {

struct InitConfig {
  int g = 2;
  double min_pr = 0.005;  // minimum cluster size as a share of n
  int knn_k = 5;
  int max_repairs = 20;

  void validate() const;
};

/// Distance of every point to its k-th nearest neighbour (Euclidean).
std::vector<double> kth_neighbor_distances(const Dataset& data, int k);

/// Clutter detection on k-th neighbour distances: the k-th neighbour distance
/// of a Poisson process in R^p satisfies c * d^p ~ Gamma(k, 1), so a
/// two-intensity mixture of such laws is fitted by EM and points whose
/// posterior favours the low-intensity (clutter) component are flagged.
std::vector<bool> nn_noise_detect(const Dataset& data, int knn_k);

/// Greedy agglomeration under the Gaussian classification likelihood with
/// unrestricted cluster covariances. Returns labels in {1, ..., g}.
Labeling mbhc_agglomerate(const Dataset& data, int g);

/// Noise guess followed by agglomeration of the remaining points, repaired so
/// that every cluster holds at least ceil(min_pr * n) points. Label 0 marks the
/// initial noise.
Labeling initial_partition(const Dataset& data, const InitConfig& cfg);

/// Number of distinct rows.
int count_distinct(const Dataset& data);

}  // namespace otrimle
