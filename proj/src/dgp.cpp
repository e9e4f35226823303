#include "otrimle/dgp.hpp"

#include <cmath>
#include <random>
#include <sstream>

#include "otrimle/error.hpp"

namespace otrimle {

namespace {

Matrix mat2(double a, double b, double c) {
  Matrix m(2, 2);
  m << a, b, b, c;
  return m;
}

Vector vec2(double x, double y) {
  Vector v(2);
  v << x, y;
  return v;
}

ComponentSpec gaussian(double weight, Vector location, Matrix shape) {
  ComponentSpec c;
  c.family = Family::kGaussian;
  c.weight = weight;
  c.location = std::move(location);
  c.shape = std::move(shape);
  return c;
}

ComponentSpec student(double weight, Vector location, Matrix shape, double nu = 3.0) {
  ComponentSpec c = gaussian(weight, std::move(location), std::move(shape));
  c.family = Family::kStudentT;
  c.nu = nu;
  return c;
}

ComponentSpec box(double weight, Vector lo, Vector hi) {
  ComponentSpec c;
  c.family = Family::kUniformBox;
  c.weight = weight;
  c.box_lo = std::move(lo);
  c.box_hi = std::move(hi);
  return c;
}

// Scale of a unit-variance t marginal.
double unit_variance_t_scale(double nu) { return std::sqrt((nu - 2.0) / nu); }

std::uint64_t splitmix64(std::uint64_t x) {
  x += 0x9e3779b97f4a7c15ULL;
  x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
  x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
  return x ^ (x >> 31);
}

// FNV-1a; stable across platforms, unlike std::hash.
std::uint64_t fnv1a(const std::string& s) {
  std::uint64_t h = 0xcbf29ce484222325ULL;
  for (unsigned char ch : s) {
    h ^= ch;
    h *= 0x100000001b3ULL;
  }
  return h;
}

void validate_component(const ComponentSpec& c, int dims, const std::string& where) {
  if (c.dim() != dims) throw Error(ErrorKind::kInvalidInput, where + ": dimension differs from informative_dims");
  if (!(c.weight >= 0.0)) throw Error(ErrorKind::kInvalidInput, where + ": negative weight");
  if (c.family == Family::kUniformBox) {
    if (c.box_hi.size() != dims) throw Error(ErrorKind::kInvalidInput, where + ": box bounds differ in length");
    for (int k = 0; k < dims; ++k) {
      if (!(c.box_hi(k) > c.box_lo(k))) throw Error(ErrorKind::kInvalidInput, where + ": empty box");
    }
    return;
  }
  if (c.shape.rows() != dims || c.shape.cols() != dims) {
    throw Error(ErrorKind::kInvalidInput, where + ": shape matrix has the wrong size");
  }
  if (c.family == Family::kStudentT && !(c.nu > 0.0)) throw Error(ErrorKind::kInvalidInput, where + ": nu must be positive");
  CovFactor check(c.shape);  // throws when not positive definite
}

}  // namespace

void DgpSpec::validate() const {
  if (name.empty()) throw Error(ErrorKind::kInvalidInput, "spec needs a name");
  if (g < 1 || static_cast<int>(components.size()) != g) {
    throw Error(ErrorKind::kInvalidInput, "spec '" + name + "': g must equal the number of components");
  }
  if (informative_dims < 1 || informative_dims > p) {
    throw Error(ErrorKind::kInvalidInput, "spec '" + name + "': informative_dims must lie in [1, p]");
  }
  if (static_cast<int>(uninformative.size()) != p - informative_dims) {
    throw Error(ErrorKind::kInvalidInput, "spec '" + name + "': one uninformative marginal per extra dimension");
  }
  if (n < 1) throw Error(ErrorKind::kInvalidInput, "spec '" + name + "': n must be positive");
  double total = noise_weight();
  for (std::size_t j = 0; j < components.size(); ++j) {
    const ComponentSpec& c = components[j];
    const std::string where = "spec '" + name + "' component " + std::to_string(j + 1);
    if (c.family == Family::kUniformBox) throw Error(ErrorKind::kInvalidInput, where + ": clusters must be elliptical");
    validate_component(c, informative_dims, where);
    total += c.weight;
  }
  if (noise) {
    if (noise->family != Family::kUniformBox) throw Error(ErrorKind::kInvalidInput, "spec '" + name + "': noise must be a box");
    validate_component(*noise, informative_dims, "spec '" + name + "' noise");
  }
  if (std::abs(total - 1.0) > 1e-12) throw Error(ErrorKind::kInvalidInput, "spec '" + name + "': weights must sum to 1");
  for (const Marginal& m : uninformative) {
    if (m.family == Family::kUniformBox) throw Error(ErrorKind::kInvalidInput, "spec '" + name + "': uniform marginals unsupported");
    if (m.family == Family::kStudentT && !(m.nu > 2.0)) {
      throw Error(ErrorKind::kInvalidInput, "spec '" + name + "': unit-variance t marginals need nu > 2");
    }
  }
}

TruthParams dgp_truth(const DgpSpec& spec) {
  spec.validate();
  const double cluster_mass = 1.0 - spec.noise_weight();
  const int q = spec.informative_dims;
  // Uninformative coordinates are independent of the cluster, so their block
  // is the per-coordinate MCD variance.
  Vector extra(spec.p - q);
  for (int k = 0; k < spec.p - q; ++k) {
    const Marginal& m = spec.uninformative[k];
    if (m.family == Family::kGaussian) {
      extra(k) = 1.0;
    } else {
      const double s = unit_variance_t_scale(m.nu);
      extra(k) = mcd_radial_factor(m.family, m.nu, 1) * s * s;
    }
  }
  TruthParams truth;
  for (const ComponentSpec& c : spec.components) {
    const CenterScatter cs = mcd_functional(c);
    ClusterTriple t;
    t.pi = c.weight / cluster_mass;
    t.center = Vector::Zero(spec.p);
    t.center.head(q) = cs.center;
    t.scatter = Matrix::Zero(spec.p, spec.p);
    t.scatter.topLeftCorner(q, q) = cs.scatter;
    for (int k = 0; k < spec.p - q; ++k) t.scatter(q + k, q + k) = extra(k);
    truth.triples.push_back(std::move(t));
  }
  return truth;
}

std::uint64_t stream_seed(std::uint64_t master, std::uint64_t replicate, const std::string& stream) {
  return splitmix64(splitmix64(splitmix64(master) ^ replicate) ^ fnv1a(stream));
}

LabeledSample sample_dgp(const DgpSpec& spec, std::uint64_t seed) {
  spec.validate();
  std::mt19937_64 rng(seed);
  std::normal_distribution<double> normal(0.0, 1.0);
  const int q = spec.informative_dims;

  std::vector<double> weights;
  weights.push_back(spec.noise_weight());
  for (const ComponentSpec& c : spec.components) weights.push_back(c.weight);
  std::discrete_distribution<int> membership(weights.begin(), weights.end());

  std::vector<Matrix> roots;
  for (const ComponentSpec& c : spec.components) roots.push_back(Eigen::LLT<Matrix>(c.shape).matrixL());

  Matrix x(spec.n, spec.p);
  Labeling labels(spec.n);
  for (int i = 0; i < spec.n; ++i) {
    const int k = membership(rng);
    labels[i] = k;
    if (k == 0) {
      const ComponentSpec& b = *spec.noise;
      for (int d = 0; d < q; ++d) {
        std::uniform_real_distribution<double> u(b.box_lo(d), b.box_hi(d));
        x(i, d) = u(rng);
      }
    } else {
      const ComponentSpec& c = spec.components[k - 1];
      Vector z(q);
      for (int d = 0; d < q; ++d) z(d) = normal(rng);
      Vector y = roots[k - 1] * z;
      if (c.family == Family::kStudentT) {
        std::chi_squared_distribution<double> chi(c.nu);
        y *= std::sqrt(c.nu / chi(rng));
      }
      x.row(i).head(q) = (c.location + y).transpose();
    }
    for (int d = q; d < spec.p; ++d) {
      const Marginal& m = spec.uninformative[d - q];
      double v = normal(rng);
      if (m.family == Family::kStudentT) {
        std::chi_squared_distribution<double> chi(m.nu);
        v *= std::sqrt(m.nu / chi(rng)) * unit_variance_t_scale(m.nu);
      }
      x(i, d) = v;
    }
  }
  return LabeledSample{Dataset(std::move(x)), std::move(labels), dgp_truth(spec)};
}

LabeledSample overlap_pair_dataset(std::uint64_t seed) {
  constexpr int kMain = 100;
  constexpr int kSmall = 12;
  const int n = 2 * kMain + kSmall;
  std::mt19937_64 rng(seed);
  std::normal_distribution<double> normal(0.0, 1.0);
  Matrix x(n, 2);
  Labeling labels(n);
  for (int i = 0; i < n; ++i) {
    const int k = i < kMain ? 1 : (i < 2 * kMain ? 2 : 3);
    const double cx = k == 1 ? 0.0 : (k == 2 ? 3.0 : 12.0);
    const double sd = k == 3 ? 5.0 : 1.0;
    x(i, 0) = cx + sd * normal(rng);
    x(i, 1) = sd * normal(rng);
    labels[i] = k;
  }
  TruthParams truth;
  const double total = n;
  truth.triples = {ClusterTriple{kMain / total, vec2(0.0, 0.0), Matrix::Identity(2, 2)},
                   ClusterTriple{kMain / total, vec2(3.0, 0.0), Matrix::Identity(2, 2)},
                   ClusterTriple{kSmall / total, vec2(12.0, 0.0), 25.0 * Matrix::Identity(2, 2)}};
  return LabeledSample{Dataset(std::move(x)), std::move(labels), std::move(truth)};
}

DgpSpec with_sample_size(DgpSpec spec, int n) {
  spec.n = n;
  spec.validate();
  return spec;
}

namespace {

DgpSpec make_spec(std::string name, std::string description, std::vector<ComponentSpec> clusters,
                  std::optional<ComponentSpec> noise, bool high, Family extra_family) {
  DgpSpec s;
  s.name = std::move(name);
  s.description = std::move(description);
  s.g = static_cast<int>(clusters.size());
  s.informative_dims = 2;
  s.p = high ? 20 : 2;
  s.n = high ? 2000 : 1000;
  s.components = std::move(clusters);
  s.noise = std::move(noise);
  s.uninformative.assign(s.p - 2, Marginal{extra_family, 3.0});
  s.validate();
  return s;
}

std::vector<DgpSpec> build_catalog() {
  std::vector<DgpSpec> out;
  for (bool high : {false, true}) {
    const std::string suffix = high ? "h-like" : "l-like";

    // Noise spread over the whole clustered region.
    out.push_back(make_spec(
        "WideNoise.3" + suffix, "three Gaussian clusters inside a uniform noise box covering all of them",
        {gaussian(0.30, vec2(0.0, 0.0), mat2(1.0, 0.4, 1.0)), gaussian(0.30, vec2(7.0, 0.0), mat2(1.5, 0.0, 0.6)),
         gaussian(0.25, vec2(3.5, 6.0), mat2(0.8, -0.3, 1.2))},
        box(0.15, vec2(-6.0, -6.0), vec2(13.0, 12.0)), high, Family::kGaussian));

    // Noise on a wide region touching one cluster only at its edge.
    out.push_back(make_spec(
        "SideNoise.2" + suffix, "two Gaussian clusters with a wide uniform noise band to one side",
        {gaussian(0.45, vec2(0.0, 0.0), mat2(1.0, 0.3, 1.0)), gaussian(0.45, vec2(5.0, 0.0), mat2(0.8, 0.0, 1.5))},
        box(0.10, vec2(7.0, -15.0), vec2(25.0, 15.0)), high, Family::kGaussian));

    // A handful of points far away from every cluster.
    out.push_back(make_spec(
        "SunSpot.3" + suffix, "three Gaussian clusters and about 2% extremely outlying uniform points",
        {gaussian(0.33, vec2(0.0, 0.0), mat2(1.0, 0.3, 1.0)), gaussian(0.33, vec2(6.0, 0.0), mat2(1.2, 0.0, 0.8)),
         gaussian(0.32, vec2(3.0, 5.5), mat2(0.9, -0.2, 1.1))},
        box(0.02, vec2(45.0, 45.0), vec2(55.0, 55.0)), high, Family::kGaussian));

    // Heavy-tailed clusters, no noise component.
    out.push_back(make_spec(
        "TGauss.3" + suffix, "three noncentral t3 clusters without noise",
        {student(1.0 / 3.0, vec2(0.0, 0.0), mat2(1.0, 0.3, 1.0)),
         student(1.0 / 3.0, vec2(9.0, 0.0), mat2(1.2, 0.0, 0.8)),
         student(1.0 / 3.0, vec2(4.5, 8.0), mat2(0.9, -0.2, 1.1))},
        std::nullopt, high, Family::kGaussian));

    // Gaussian clusters; the extra dimensions carry t3 outliers.
    out.push_back(make_spec(
        "GaussT.3" + suffix, "three Gaussian clusters; uninformative dimensions are unit-variance t3",
        {gaussian(0.35, vec2(0.0, 0.0), mat2(1.0, 0.3, 1.0)), gaussian(0.35, vec2(6.0, 0.0), mat2(1.2, 0.0, 0.8)),
         gaussian(0.30, vec2(3.0, 5.5), mat2(0.9, -0.2, 1.1))},
        std::nullopt, high, Family::kStudentT));

    // Plain Gaussian mixture with some overlap.
    out.push_back(make_spec(
        "Noiseless.5" + suffix, "five overlapping Gaussian clusters without noise",
        {gaussian(0.2, vec2(0.0, 0.0), mat2(1.0, 0.3, 1.0)), gaussian(0.2, vec2(6.0, 0.0), mat2(1.2, 0.0, 0.8)),
         gaussian(0.2, vec2(0.0, 6.0), mat2(0.9, -0.2, 1.1)), gaussian(0.2, vec2(6.0, 6.0), mat2(1.0, 0.0, 1.0)),
         gaussian(0.2, vec2(3.0, 3.0), mat2(0.6, 0.2, 0.6))},
        std::nullopt, high, Family::kGaussian));
  }
  return out;
}

}  // namespace

const std::vector<DgpSpec>& builtin_specs() {
  static const std::vector<DgpSpec> catalog = build_catalog();
  return catalog;
}

const DgpSpec& builtin_spec(const std::string& name) {
  for (const DgpSpec& s : builtin_specs()) {
    if (s.name == name) return s;
  }
  std::ostringstream msg;
  msg << "unknown builtin spec '" << name << "'; available:";
  for (const DgpSpec& s : builtin_specs()) msg << ' ' << s.name;
  throw Error(ErrorKind::kInvalidInput, msg.str());
}

}  // namespace otrimle
