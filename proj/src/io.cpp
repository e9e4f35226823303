#include "otrimle/io.hpp"

#include <charconv>
#include <cmath>
#include <fstream>
#include <limits>
#include <sstream>
#include <vector>

#include "json.hpp"
#include "otrimle/error.hpp"

namespace otrimle {

using nlohmann::json;

namespace {

[[noreturn]] void parse_error(const std::string& source, int line, const std::string& what) {
  throw Error(ErrorKind::kParse, source + ":" + std::to_string(line) + ": " + what);
}

std::string trim(const std::string& s) {
  const auto b = s.find_first_not_of(" \t\r");
  if (b == std::string::npos) return "";
  const auto e = s.find_last_not_of(" \t\r");
  return s.substr(b, e - b + 1);
}

std::vector<std::string> split(const std::string& line, char delim) {
  std::vector<std::string> out;
  if (delim == ' ') {
    std::istringstream ss(line);
    std::string tok;
    while (ss >> tok) out.push_back(tok);
    return out;
  }
  std::string field;
  std::istringstream ss(line);
  while (std::getline(ss, field, delim)) out.push_back(trim(field));
  if (!line.empty() && line.back() == delim) out.emplace_back();
  return out;
}

bool parse_double(const std::string& s, double& out) {
  if (s.empty()) return false;
  const char* first = s.data();
  if (*first == '+') ++first;
  const auto [ptr, ec] = std::from_chars(first, s.data() + s.size(), out);
  return ec == std::errc() && ptr == s.data() + s.size();
}

char detect_delimiter(const std::string& line) {
  for (char c : {',', ';', '\t'}) {
    if (line.find(c) != std::string::npos) return c;
  }
  return ' ';
}

std::string format_double(double v) {
  char buf[64];
  const auto res = std::to_chars(buf, buf + sizeof buf, v);
  return std::string(buf, res.ptr);
}

std::ofstream open_out(const std::string& path) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw Error(ErrorKind::kInvalidInput, "cannot write " + path);
  return out;
}

std::ifstream open_in(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error(ErrorKind::kInvalidInput, "cannot read " + path);
  return in;
}

// JSON has no infinities or NaN; those travel as strings.
json num(double v) {
  if (std::isnan(v)) return "nan";
  if (std::isinf(v)) return v > 0 ? "inf" : "-inf";
  return v;
}

double get_num(const json& j) {
  if (j.is_string()) {
    const auto& s = j.get_ref<const std::string&>();
    if (s == "nan") return std::numeric_limits<double>::quiet_NaN();
    if (s == "inf") return std::numeric_limits<double>::infinity();
    if (s == "-inf") return -std::numeric_limits<double>::infinity();
    throw Error(ErrorKind::kParse, "expected a number, got '" + s + "'");
  }
  if (!j.is_number()) throw Error(ErrorKind::kParse, "expected a number");
  return j.get<double>();
}

json vec_json(const Vector& v) {
  json a = json::array();
  for (Eigen::Index i = 0; i < v.size(); ++i) a.push_back(num(v(i)));
  return a;
}

Vector vec_from(const json& j) {
  if (!j.is_array()) throw Error(ErrorKind::kParse, "expected an array");
  Vector v(static_cast<Eigen::Index>(j.size()));
  for (std::size_t i = 0; i < j.size(); ++i) v(static_cast<Eigen::Index>(i)) = get_num(j[i]);
  return v;
}

json mat_json(const Matrix& m) {
  json rows = json::array();
  for (Eigen::Index r = 0; r < m.rows(); ++r) rows.push_back(vec_json(m.row(r).transpose()));
  return rows;
}

Matrix mat_from(const json& j) {
  if (!j.is_array()) throw Error(ErrorKind::kParse, "expected a matrix");
  const auto rows = static_cast<Eigen::Index>(j.size());
  const Eigen::Index cols = rows == 0 ? 0 : static_cast<Eigen::Index>(j[0].size());
  Matrix m(rows, cols);
  for (Eigen::Index r = 0; r < rows; ++r) {
    const Vector row = vec_from(j[static_cast<std::size_t>(r)]);
    if (row.size() != cols) throw Error(ErrorKind::kParse, "ragged matrix");
    m.row(r) = row.transpose();
  }
  return m;
}

json doubles_json(const std::vector<double>& v) {
  json a = json::array();
  for (double x : v) a.push_back(num(x));
  return a;
}

std::vector<double> doubles_from(const json& j) {
  std::vector<double> v;
  for (const auto& x : j) v.push_back(get_num(x));
  return v;
}

json params_json(const MixtureParams& p) {
  json j;
  j["pi0"] = num(p.pi0);
  j["delta"] = num(p.delta);
  j["pi"] = vec_json(p.pi);
  j["mu"] = json::array();
  j["sigma"] = json::array();
  for (int k = 0; k < p.g(); ++k) {
    j["mu"].push_back(vec_json(p.mu[k]));
    j["sigma"].push_back(mat_json(p.sigma[k]));
  }
  return j;
}

MixtureParams params_from(const json& j) {
  MixtureParams p;
  p.pi0 = get_num(j.at("pi0"));
  p.delta = get_num(j.at("delta"));
  p.pi = vec_from(j.at("pi"));
  for (const auto& m : j.at("mu")) p.mu.push_back(vec_from(m));
  for (const auto& s : j.at("sigma")) p.sigma.push_back(mat_from(s));
  return p;
}

json triples_json(const std::vector<ClusterTriple>& triples) {
  json a = json::array();
  for (const auto& t : triples) a.push_back({{"pi", num(t.pi)}, {"center", vec_json(t.center)}, {"scatter", mat_json(t.scatter)}});
  return a;
}

std::vector<ClusterTriple> triples_from(const json& j) {
  std::vector<ClusterTriple> out;
  for (const auto& t : j) out.push_back({get_num(t.at("pi")), vec_from(t.at("center")), mat_from(t.at("scatter"))});
  return out;
}

json component_json(const ComponentSpec& c) {
  json j{{"family", to_string(c.family)}, {"weight", num(c.weight)}};
  if (c.family == Family::kUniformBox) {
    j["box_lo"] = vec_json(c.box_lo);
    j["box_hi"] = vec_json(c.box_hi);
  } else {
    j["location"] = vec_json(c.location);
    j["shape"] = mat_json(c.shape);
    if (c.family == Family::kStudentT) j["nu"] = num(c.nu);
  }
  return j;
}

ComponentSpec component_from(const json& j) {
  ComponentSpec c;
  c.family = family_from_string(j.at("family").get<std::string>());
  c.weight = get_num(j.at("weight"));
  if (c.family == Family::kUniformBox) {
    c.box_lo = vec_from(j.at("box_lo"));
    c.box_hi = vec_from(j.at("box_hi"));
  } else {
    c.location = vec_from(j.at("location"));
    c.shape = mat_from(j.at("shape"));
    if (c.family == Family::kStudentT) c.nu = get_num(j.at("nu"));
  }
  return c;
}

std::string dump(json j, const std::string& kind) {
  json out{{"schema_version", kSchemaVersion}, {"kind", kind}};
  out.update(j);
  return out.dump(2) + "\n";
}

json load(const std::string& text, const std::string& kind) {
  json j;
  try {
    j = json::parse(text);
  } catch (const json::parse_error& e) {
    throw Error(ErrorKind::kParse, std::string("malformed ") + kind + " file: " + e.what());
  }
  if (!j.is_object() || !j.contains("schema_version")) throw Error(ErrorKind::kParse, kind + " file has no schema_version");
  if (j.at("schema_version").get<int>() != kSchemaVersion) {
    throw Error(ErrorKind::kParse, "unsupported schema_version " + j.at("schema_version").dump());
  }
  if (j.value("kind", std::string()) != kind) throw Error(ErrorKind::kParse, "expected a " + kind + " file");
  return j;
}

template <typename F>
auto guarded(const std::string& kind, F&& f) {
  try {
    return f();
  } catch (const json::exception& e) {
    throw Error(ErrorKind::kParse, "invalid " + kind + " file: " + e.what());
  }
}

}  // namespace

Dataset parse_table(std::istream& in, const std::string& source) {
  std::vector<double> values;
  std::string line;
  int line_no = 0;
  int cols = -1;
  char delim = 0;
  bool seen_first = false;
  while (std::getline(in, line)) {
    ++line_no;
    const std::string t = trim(line);
    if (t.empty() || t.front() == '#') continue;
    if (delim == 0) delim = detect_delimiter(t);
    const std::vector<std::string> fields = split(t, delim);
    std::vector<double> row(fields.size());
    bool numeric = true;
    for (std::size_t k = 0; k < fields.size() && numeric; ++k) numeric = parse_double(fields[k], row[k]);
    if (!seen_first) {
      seen_first = true;
      cols = static_cast<int>(fields.size());
      if (!numeric) continue;  // header row
    }
    if (static_cast<int>(fields.size()) != cols) {
      parse_error(source, line_no, "expected " + std::to_string(cols) + " fields, found " + std::to_string(fields.size()));
    }
    if (!numeric) parse_error(source, line_no, "non-numeric value");
    for (double v : row) {
      if (!std::isfinite(v)) parse_error(source, line_no, "non-finite value");
    }
    values.insert(values.end(), row.begin(), row.end());
  }
  if (values.empty()) throw Error(ErrorKind::kParse, source + ": no data rows");
  const auto n = static_cast<Eigen::Index>(values.size() / cols);
  Matrix m(n, cols);
  for (Eigen::Index i = 0; i < n; ++i)
    for (int k = 0; k < cols; ++k) m(i, k) = values[static_cast<std::size_t>(i * cols + k)];
  return Dataset(std::move(m));
}

Dataset read_table(const std::string& path) {
  std::ifstream in = open_in(path);
  return parse_table(in, path);
}

void write_table(const std::string& path, const Dataset& data) {
  std::ofstream out = open_out(path);
  for (int k = 0; k < data.p(); ++k) out << (k ? "," : "") << "x" << (k + 1);
  out << "\n";
  for (int i = 0; i < data.n(); ++i) {
    for (int k = 0; k < data.p(); ++k) out << (k ? "," : "") << format_double(data.points()(i, k));
    out << "\n";
  }
}

Labeling parse_labels(std::istream& in, const std::string& source) {
  Labeling labels;
  std::string line;
  int line_no = 0;
  bool seen_first = false;
  while (std::getline(in, line)) {
    ++line_no;
    const std::string t = trim(line);
    if (t.empty() || t.front() == '#') continue;
    int v = 0;
    const auto [ptr, ec] = std::from_chars(t.data(), t.data() + t.size(), v);
    const bool ok = ec == std::errc() && ptr == t.data() + t.size();
    if (!seen_first) {
      seen_first = true;
      if (!ok) continue;  // header row
    }
    if (!ok) parse_error(source, line_no, "expected an integer label");
    if (v < 0) parse_error(source, line_no, "labels must be >= 0");
    labels.push_back(v);
  }
  if (labels.empty()) throw Error(ErrorKind::kParse, source + ": no labels");
  return labels;
}

Labeling read_labels(const std::string& path) {
  std::ifstream in = open_in(path);
  return parse_labels(in, path);
}

void write_labels(const std::string& path, const Labeling& labels) {
  std::ofstream out = open_out(path);
  out << "label\n";
  for (int l : labels) out << l << "\n";
}

std::string fit_result_to_text(const FitResult& r) {
  json j;
  j["method"] = r.method;
  j["g"] = r.g;
  j["p"] = r.p;
  j["params"] = params_json(r.params);
  j["clusters"] = triples_json(r.triples);
  j["labels"] = r.labels;
  j["pi0"] = num(r.pi0);
  j["delta"] = num(r.delta);
  j["trim"] = num(r.trim);
  j["beta"] = num(r.beta);
  j["nu"] = num(r.nu);
  j["trace"] = doubles_json(r.trace);
  j["projected"] = r.projected;
  j["converged"] = r.converged;
  j["iterations"] = r.iterations;
  json dt = json::array();
  for (const auto& e : r.delta_tuning) {
    dt.push_back({{"delta", num(e.delta)},
                  {"criterion", num(e.criterion)},
                  {"pi0", num(e.pi0)},
                  {"objective", num(e.objective)},
                  {"boundary", e.boundary},
                  {"failed", e.failed}});
  }
  j["delta_tuning"] = dt;
  json tt = json::array();
  for (const auto& e : r.trim_tuning) {
    tt.push_back({{"trim", num(e.trim)}, {"criterion", num(e.criterion)}, {"objective", num(e.objective)}, {"failed", e.failed}});
  }
  j["trim_tuning"] = tt;
  return dump(j, "fit_result");
}

FitResult fit_result_from_text(const std::string& text) {
  const json j = load(text, "fit_result");
  return guarded("fit_result", [&] {
    FitResult r;
    r.method = j.at("method").get<std::string>();
    r.g = j.at("g").get<int>();
    r.p = j.at("p").get<int>();
    r.params = params_from(j.at("params"));
    r.triples = triples_from(j.at("clusters"));
    r.labels = j.at("labels").get<Labeling>();
    r.pi0 = get_num(j.at("pi0"));
    r.delta = get_num(j.at("delta"));
    r.trim = get_num(j.at("trim"));
    r.beta = get_num(j.at("beta"));
    r.nu = get_num(j.at("nu"));
    r.trace = doubles_from(j.at("trace"));
    r.projected = j.at("projected").get<std::vector<bool>>();
    r.converged = j.at("converged").get<bool>();
    r.iterations = j.at("iterations").get<int>();
    for (const auto& e : j.at("delta_tuning")) {
      r.delta_tuning.push_back({get_num(e.at("delta")), get_num(e.at("criterion")), get_num(e.at("pi0")),
                                get_num(e.at("objective")), e.at("boundary").get<bool>(), e.at("failed").get<bool>()});
    }
    for (const auto& e : j.at("trim_tuning")) {
      r.trim_tuning.push_back(
          {get_num(e.at("trim")), get_num(e.at("criterion")), get_num(e.at("objective")), e.at("failed").get<bool>()});
    }
    return r;
  });
}

std::string truth_to_text(const TruthParams& truth) {
  return dump({{"alpha", num(truth.alpha)}, {"clusters", triples_json(truth.triples)}}, "truth");
}

TruthParams truth_from_text(const std::string& text) {
  const json j = load(text, "truth");
  return guarded("truth", [&] {
    TruthParams t;
    t.alpha = get_num(j.at("alpha"));
    t.triples = triples_from(j.at("clusters"));
    t.validate();
    return t;
  });
}

std::string spec_to_text(const DgpSpec& spec) {
  json j;
  j["name"] = spec.name;
  j["description"] = spec.description;
  j["g"] = spec.g;
  j["p"] = spec.p;
  j["informative_dims"] = spec.informative_dims;
  j["n"] = spec.n;
  j["components"] = json::array();
  for (const auto& c : spec.components) j["components"].push_back(component_json(c));
  j["noise"] = spec.noise ? component_json(*spec.noise) : json(nullptr);
  j["uninformative"] = json::array();
  for (const auto& m : spec.uninformative) {
    json mj{{"family", to_string(m.family)}};
    if (m.family == Family::kStudentT) mj["nu"] = num(m.nu);
    j["uninformative"].push_back(mj);
  }
  return dump(j, "dgp_spec");
}

DgpSpec spec_from_text(const std::string& text) {
  const json j = load(text, "dgp_spec");
  return guarded("dgp_spec", [&] {
    DgpSpec s;
    s.name = j.at("name").get<std::string>();
    s.description = j.value("description", std::string());
    s.g = j.at("g").get<int>();
    s.p = j.at("p").get<int>();
    s.informative_dims = j.at("informative_dims").get<int>();
    s.n = j.at("n").get<int>();
    for (const auto& c : j.at("components")) s.components.push_back(component_from(c));
    if (j.contains("noise") && !j.at("noise").is_null()) s.noise = component_from(j.at("noise"));
    for (const auto& m : j.at("uninformative")) {
      Marginal mg;
      mg.family = family_from_string(m.at("family").get<std::string>());
      if (m.contains("nu")) mg.nu = get_num(m.at("nu"));
      s.uninformative.push_back(mg);
    }
    s.validate();
    return s;
  });
}

std::string read_text_file(const std::string& path) {
  std::ifstream in = open_in(path);
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

void write_text_file(const std::string& path, const std::string& text) {
  std::ofstream out = open_out(path);
  out << text;
}

}  // namespace otrimle
