#pragma once

#include <chrono>
#include <cstdio>
#include <ctime>
#include <fstream>
#include <functional>
#include <map>
#include <optional>
#include <set>
#include <sstream>
#include <string>
#include <vector>

#include "json.hpp"
#include "vnlab/adversarial.hpp"
#include "vnlab/bayes.hpp"
#include "vnlab/eval.hpp"
#include "vnlab/matching.hpp"
#include "vnlab/schemes.hpp"

namespace vnlab {

using Json = nlohmann::ordered_json;

// ------------------------------------------------------------ config --

/// Typed access to one JSON object. Every read is recorded (defaults
/// included) into `resolved`; finish() rejects keys that were never read.
class ConfigFields {
 public:
  ConfigFields(const Json& obj, std::string path, Json& resolved) : obj_(obj), path_(std::move(path)), out_(resolved) {
    if (!obj_.is_object()) fail(path_, "expected an object");
    out_ = Json::object();
  }

  [[noreturn]] static void fail(const std::string& field, const std::string& what) {
    throw InvalidInput("config field '" + field + "': " + what);
  }

  std::string field(const std::string& key) const { return path_.empty() ? key : path_ + "." + key; }

  bool has(const std::string& key) const { return obj_.contains(key); }

  const Json* raw(const std::string& key) {
    seen_.insert(key);
    auto it = obj_.find(key);
    return it == obj_.end() ? nullptr : &*it;
  }

  double real(const std::string& key, std::optional<double> def = {}) {
    const Json* v = raw(key);
    double x;
    if (!v) {
      if (!def) fail(field(key), "required");
      x = *def;
    } else {
      if (!v->is_number()) fail(field(key), "expected a number");
      x = v->get<double>();
    }
    out_[key] = x;
    return x;
  }

  std::uint64_t integer(const std::string& key, std::optional<std::uint64_t> def = {}) {
    const Json* v = raw(key);
    std::uint64_t x;
    if (!v) {
      if (!def) fail(field(key), "required");
      x = *def;
    } else {
      if (!v->is_number_integer() || (v->is_number_integer() && v->get<long long>() < 0))
        fail(field(key), "expected a nonnegative integer");
      x = v->get<std::uint64_t>();
    }
    out_[key] = x;
    return x;
  }

  std::string text(const std::string& key, std::optional<std::string> def = {}) {
    const Json* v = raw(key);
    std::string x;
    if (!v) {
      if (!def) fail(field(key), "required");
      x = *def;
    } else {
      if (!v->is_string()) fail(field(key), "expected a string");
      x = v->get<std::string>();
    }
    out_[key] = x;
    return x;
  }

  std::string choice(const std::string& key, const std::vector<std::string>& allowed,
                     std::optional<std::string> def = {}) {
    const std::string x = text(key, std::move(def));
    if (std::find(allowed.begin(), allowed.end(), x) == allowed.end()) {
      std::string list;
      for (const auto& a : allowed) list += (list.empty() ? "" : ", ") + a;
      fail(field(key), "'" + x + "' is not one of " + list);
    }
    return x;
  }

  bool flag(const std::string& key, bool def) {
    const Json* v = raw(key);
    bool x = def;
    if (v) {
      if (!v->is_boolean()) fail(field(key), "expected true or false");
      x = v->get<bool>();
    }
    out_[key] = x;
    return x;
  }

  std::vector<std::uint64_t> integers(const std::string& key, std::optional<std::vector<std::uint64_t>> def = {}) {
    const Json* v = raw(key);
    std::vector<std::uint64_t> x;
    if (!v) {
      if (!def) fail(field(key), "required");
      x = *def;
    } else {
      if (!v->is_array() || v->empty()) fail(field(key), "expected a nonempty array of integers");
      for (const auto& e : *v) {
        if (!e.is_number_integer() || e.get<long long>() < 0) fail(field(key), "expected nonnegative integers");
        x.push_back(e.get<std::uint64_t>());
      }
    }
    out_[key] = x;
    return x;
  }

  std::vector<double> reals(const std::string& key, std::optional<std::vector<double>> def = {}) {
    const Json* v = raw(key);
    std::vector<double> x;
    if (!v) {
      if (!def) fail(field(key), "required");
      x = *def;
    } else {
      if (!v->is_array() || v->empty()) fail(field(key), "expected a nonempty array of numbers");
      for (const auto& e : *v) {
        if (!e.is_number()) fail(field(key), "expected numbers");
        x.push_back(e.get<double>());
      }
    }
    out_[key] = x;
    return x;
  }

  Eigen::MatrixXd matrix(const std::string& key, std::optional<Eigen::MatrixXd> def = {}) {
    const Json* v = raw(key);
    Eigen::MatrixXd M;
    if (!v) {
      if (!def) fail(field(key), "required");
      M = *def;
    } else {
      if (!v->is_array() || v->empty()) fail(field(key), "expected a square array of rows");
      const auto K = static_cast<Eigen::Index>(v->size());
      M.resize(K, K);
      for (Eigen::Index i = 0; i < K; ++i) {
        const auto& row = (*v)[static_cast<std::size_t>(i)];
        if (!row.is_array() || static_cast<Eigen::Index>(row.size()) != K) fail(field(key), "expected a square array");
        for (Eigen::Index j = 0; j < K; ++j) {
          const auto& e = row[static_cast<std::size_t>(j)];
          if (!e.is_number()) fail(field(key), "expected numbers");
          M(i, j) = e.get<double>();
        }
      }
    }
    Json rows = Json::array();
    for (Eigen::Index i = 0; i < M.rows(); ++i) {
      Json row = Json::array();
      for (Eigen::Index j = 0; j < M.cols(); ++j) row.push_back(M(i, j));
      rows.push_back(row);
    }
    out_[key] = rows;
    return M;
  }

  /// Nested object; `fn` reads it through a child reader.
  template <class Fn>
  auto child(const std::string& key, Fn&& fn) {
    const Json* v = raw(key);
    if (!v) fail(field(key), "required");
    ConfigFields sub(*v, field(key), out_[key]);
    auto r = fn(sub);
    sub.finish();
    return r;
  }

  /// Array of objects.
  template <class Fn>
  void each(const std::string& key, Fn&& fn, bool required = true) {
    const Json* v = raw(key);
    if (!v) {
      if (required) fail(field(key), "required");
      return;
    }
    if (!v->is_array()) fail(field(key), "expected an array");
    out_[key] = Json::array();
    for (std::size_t i = 0; i < v->size(); ++i) {
      Json slot;
      ConfigFields sub((*v)[i], field(key) + "[" + std::to_string(i) + "]", slot);
      fn(sub);
      sub.finish();
      out_[key].push_back(slot);
    }
  }

  void finish() const {
    for (auto it = obj_.begin(); it != obj_.end(); ++it)
      if (!seen_.count(it.key())) fail(field(it.key()), "unknown key");
  }

 private:
  const Json& obj_;
  std::string path_;
  Json& out_;
  std::set<std::string> seen_;
};

/// "p/q" or an integer string.
inline Rational parse_rational(const std::string& s, const std::string& field) {
  try {
    const auto slash = s.find('/');
    std::size_t used = 0;
    if (slash == std::string::npos) {
      const long long v = std::stoll(s, &used);
      if (used != s.size()) throw std::invalid_argument(s);
      return Rational(v);
    }
    const long long a = std::stoll(s.substr(0, slash), &used);
    if (used != slash) throw std::invalid_argument(s);
    const std::string rest = s.substr(slash + 1);
    const long long b = std::stoll(rest, &used);
    if (used != rest.size() || b == 0) throw std::invalid_argument(s);
    return Rational(a, b);
  } catch (const std::logic_error&) {
    ConfigFields::fail(field, "expected a fraction such as \"1/10\"");
  }
}

// ------------------------------------------------------------ schemes --

inline Scheme scheme_from_config(ConfigFields& f) {
  const std::string kind = f.choice("kind", {"random", "gm", "spectral", "features", "reversal"});
  if (kind == "random") return random_baseline_scheme(f.integer("seed", 0));
  if (kind == "gm") {
    GmOptions opt;
    const std::string mode = f.choice("mode", {"exact", "relaxed", "auto"}, "auto");
    opt.mode = mode == "exact" ? GmMode::Exact : mode == "relaxed" ? GmMode::Relaxed : GmMode::Auto;
    opt.relaxed.max_iterations = f.integer("max_iterations", opt.relaxed.max_iterations);
    const std::string init = f.choice("init", {"barycenter", "identity"}, "barycenter");
    opt.relaxed.init = init == "identity" ? RelaxedMatchConfig::Init::Identity : RelaxedMatchConfig::Init::Barycenter;
    return gm_scheme(opt);
  }
  if (kind == "spectral") {
    const std::size_t d = f.integer("d", 2);
    if (d < 1) ConfigFields::fail(f.field("d"), "must be at least 1");
    const std::string a = f.choice("align", {"none", "density", "anti-density", "seedless-procrustes"}, "density");
    const SpectralAlignment align = a == "none"              ? SpectralAlignment::None
                                    : a == "density"         ? SpectralAlignment::Density
                                    : a == "anti-density"    ? SpectralAlignment::AntiDensity
                                                             : SpectralAlignment::SeedlessProcrustes;
    return spectral_scheme(d, align);
  }
  auto base = f.child("base", [](ConfigFields& b) { return scheme_from_config(b); });
  return kind == "features" ? feature_scheme(base) : reversal_scheme(base);
}

inline std::vector<Scheme> schemes_from_config(ConfigFields& f) {
  std::vector<Scheme> out;
  f.each("schemes", [&](ConfigFields& s) { out.push_back(scheme_from_config(s)); });
  if (out.empty()) ConfigFields::fail(f.field("schemes"), "needs at least one scheme");
  return out;
}

// ------------------------------------------------------------- models --

struct ModelSpec {
  std::string label;
  std::function<PairSampler(std::size_t n)> sampler_for;
};

inline std::vector<std::size_t> block_sizes(std::size_t n, const std::vector<double>& fractions) {
  std::vector<std::size_t> sizes;
  std::size_t used = 0;
  for (std::size_t b = 0; b + 1 < fractions.size(); ++b) {
    sizes.push_back(static_cast<std::size_t>(std::floor(fractions[b] * static_cast<double>(n) + 1e-9)));
    used += sizes.back();
  }
  if (used > n) throw InvalidInput("block fractions exceed the vertex count");
  sizes.push_back(n - used);
  return sizes;
}

inline std::string format_number(double x) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.10g", x);
  return buf;
}

inline ModelSpec model_from_config(ConfigFields& f) {
  const std::string kind = f.choice("kind", {"indep-er", "correlated-er", "sbm-pair"});
  const bool has_label = f.has("label");
  std::string label = has_label ? f.text("label") : "";
  ModelSpec spec;
  if (kind == "indep-er") {
    const double p = f.real("p", 0.5);
    detail::require_probability(p, "p");
    spec.label = has_label ? label : "indep-er(" + format_number(p) + ")";
    spec.sampler_for = [p](std::size_t n) -> PairSampler {
      return [n, p](Rng& r) {
        auto g1 = sample_er(n, p, r);
        auto g2 = sample_er(n, p, r, Namespace::V2);
        return NominatablePair(std::move(g1), std::move(g2), n, "indep-er");
      };
    };
    return spec;
  }
  if (kind == "correlated-er") {
    const double p = f.real("p", 0.5), rho = f.real("rho");
    const bool asym = f.flag("asymmetric", false);
    CorrelatedErParams::constant(2, p, rho).validate();
    spec.label = has_label ? label : "correlated-er(" + format_number(p) + "," + format_number(rho) + ")";
    spec.sampler_for = [p, rho, asym](std::size_t n) -> PairSampler {
      const auto params = CorrelatedErParams::constant(n, p, rho);
      return [params, n, asym](Rng& r) {
        for (std::size_t t = 0; t < 10000; ++t) {
          auto [g1, g2] = sample_correlated_er(params, r);
          if (!asym || (is_asymmetric(g1) && is_asymmetric(g2)))
            return NominatablePair(std::move(g1), std::move(g2), n, "correlated-er");
        }
        throw InvalidInput("no asymmetric correlated pair within the retry budget");
      };
    };
    return spec;
  }
  const Eigen::MatrixXd B1 = f.matrix("B1");
  const Eigen::MatrixXd B2 = f.matrix("B2", B1);
  if (B1.rows() != B2.rows()) ConfigFields::fail(f.field("B2"), "must have the same size as B1");
  const auto K = static_cast<std::size_t>(B1.rows());
  const std::vector<double> fractions = f.reals("block_fractions", std::vector<double>(K, 1.0 / static_cast<double>(K)));
  if (fractions.size() != K) ConfigFields::fail(f.field("block_fractions"), "needs one entry per block");
  const bool asym = f.flag("asymmetric", false);
  std::optional<std::vector<std::uint64_t>> positive;
  if (f.has("feature_positive_blocks")) {
    positive = f.integers("feature_positive_blocks");
    for (auto b : *positive)
      if (b >= K) ConfigFields::fail(f.field("feature_positive_blocks"), "block index out of range");
  }
  SbmParams{B1, {}}.validate();
  SbmParams{B2, {}}.validate();
  spec.label = has_label ? label : "sbm-pair";
  spec.sampler_for = [B1, B2, fractions, asym, positive](std::size_t n) -> PairSampler {
    const auto blocks = contiguous_blocks(block_sizes(n, fractions));
    const SbmParams s1{B1, blocks}, s2{B2, blocks};
    std::vector<FeatureRow> x;
    if (positive)
      for (auto b : blocks)
        x.push_back({std::find(positive->begin(), positive->end(), b) != positive->end() ? 1.0 : -1.0});
    return [s1, s2, asym, x, n](Rng& r) {
      auto draw = [&](const SbmParams& s, Namespace ns) {
        if (!asym) return sample_sbm(s, r, ns);
        return sample_asymmetric([&](Rng& rr) { return sample_sbm(s, rr, ns); }, r);
      };
      auto g1 = draw(s1, Namespace::V1);
      auto g2 = draw(s2, Namespace::V2);
      if (!x.empty()) {
        g1 = with_features(g1, x);
        g2 = with_features(g2, x);
      }
      return NominatablePair(std::move(g1), std::move(g2), n, "sbm-pair");
    };
  };
  return spec;
}

inline std::vector<ModelSpec> models_from_config(ConfigFields& f) {
  std::vector<ModelSpec> out;
  f.each("models", [&](ConfigFields& m) { out.push_back(model_from_config(m)); });
  if (out.empty()) ConfigFields::fail(f.field("models"), "needs at least one model");
  std::set<std::string> labels;
  for (const auto& m : out)
    if (!labels.insert(m.label).second) ConfigFields::fail(f.field("models"), "duplicate model label " + m.label);
  return out;
}

inline KRule k_rule_from_config(ConfigFields& f) {
  return f.child("k_rule", [](ConfigFields& k) {
    const std::string kind = k.choice("kind", {"constant", "fraction", "divisor"});
    if (kind != "fraction") {
      const std::size_t v = k.integer("value");
      if (v < 1) ConfigFields::fail(k.field("value"), "must be at least 1");
      if (kind == "constant") return KRule::fixed(v);
      return KRule::custom([v](std::size_t n) { return std::max<std::size_t>(1, n / v); });
    }
    const double v = k.real("value");
    if (!(v > 0.0 && v < 1.0)) ConfigFields::fail(k.field("value"), "must lie in (0, 1)");
    return KRule::of_n(v);
  });
}

// ------------------------------------------------------------ results --

struct CsvRow {
  std::string scenario, model, scheme;
  std::size_t n = 0, m = 0, c = 0, k = 0, trials = 0;
  std::uint64_t seed = 0;
  double loss = 0.0, ci_low = 0.0, ci_high = 0.0;
  std::optional<double> bayes_ref;
};

inline const char* kCsvHeader = "scenario,model,scheme,n,m,c,k,trials,seed,loss,ci_low,ci_high,bayes_ref";

inline std::string csv_field(const std::string& s) {
  if (s.find_first_of(",\"\n") == std::string::npos) return s;
  std::string out = "\"";
  for (char ch : s) {
    if (ch == '"') out += '"';
    out += ch;
  }
  return out + '"';
}

inline std::string to_csv_line(const CsvRow& r) {
  std::ostringstream os;
  os << csv_field(r.scenario) << ',' << csv_field(r.model) << ',' << csv_field(r.scheme) << ',' << r.n << ',' << r.m
     << ',' << r.c << ',' << r.k << ',' << r.trials << ',' << r.seed << ',' << format_number(r.loss) << ','
     << format_number(r.ci_low) << ',' << format_number(r.ci_high) << ','
     << (r.bayes_ref ? format_number(*r.bayes_ref) : std::string());
  return os.str();
}

struct RunOptions {
  std::optional<std::uint64_t> seed;
  std::size_t jobs = 1;
  std::optional<std::size_t> trials_override;
  bool deterministic = false;
};

struct ScenarioResult {
  std::string name;
  Json resolved;
  std::vector<CsvRow> rows;
  std::vector<std::string> summary;
  std::vector<std::string> failures;

  bool ok() const { return failures.empty(); }

  std::string csv(bool deterministic) const {
    std::ostringstream os;
    os << "# scenario: " << name << '\n';
    if (!deterministic) {
      const std::time_t now = std::chrono::system_clock::to_time_t(std::chrono::system_clock::now());
      char buf[64];
      std::strftime(buf, sizeof buf, "%Y-%m-%dT%H:%M:%SZ", std::gmtime(&now));
      os << "# generated: " << buf << '\n';
    }
    os << "# config: " << resolved.dump() << '\n';
    os << kCsvHeader << '\n';
    for (const auto& r : rows) os << to_csv_line(r) << '\n';
    return os.str();
  }
};

/// Row filters with loss bounds, checked after a scenario runs. A trend
/// constrains loss along n within each matched (model, scheme) series.
struct RowAssertion {
  std::optional<std::string> scheme, model;
  std::optional<std::size_t> n;
  std::optional<double> max_loss, min_loss;
  bool ref_in_ci = false;
  std::string trend = "none";
};

inline std::vector<RowAssertion> assertions_from_config(ConfigFields& f) {
  std::vector<RowAssertion> out;
  f.each(
      "assert",
      [&](ConfigFields& a) {
        RowAssertion r;
        if (a.has("scheme")) r.scheme = a.text("scheme");
        if (a.has("model")) r.model = a.text("model");
        if (a.has("n")) r.n = a.integer("n");
        if (a.has("max_loss")) r.max_loss = a.real("max_loss");
        if (a.has("min_loss")) r.min_loss = a.real("min_loss");
        r.ref_in_ci = a.flag("ref_in_ci", false);
        if (a.has("trend")) r.trend = a.choice("trend", {"decreasing", "nonincreasing", "nondecreasing"});
        out.push_back(r);
      },
      false);
  return out;
}

inline void check_assertions(const std::vector<RowAssertion>& asserts, ScenarioResult& res) {
  for (std::size_t i = 0; i < asserts.size(); ++i) {
    const auto& a = asserts[i];
    std::size_t matched = 0;
    for (const auto& r : res.rows) {
      if ((a.scheme && *a.scheme != r.scheme) || (a.model && *a.model != r.model) || (a.n && *a.n != r.n)) continue;
      ++matched;
      const std::string where = "assert[" + std::to_string(i) + "] " + r.model + " / " + r.scheme + " n=" +
                                std::to_string(r.n) + " k=" + std::to_string(r.k) + ": loss " + format_number(r.loss);
      if (a.max_loss && r.loss > *a.max_loss) res.failures.push_back(where + " > " + format_number(*a.max_loss));
      if (a.min_loss && r.loss < *a.min_loss) res.failures.push_back(where + " < " + format_number(*a.min_loss));
      if (a.ref_in_ci) {
        if (!r.bayes_ref)
          res.failures.push_back(where + " has no reference value");
        else if (*r.bayes_ref < r.ci_low || *r.bayes_ref > r.ci_high)
          res.failures.push_back(where + ": reference " + format_number(*r.bayes_ref) + " outside [" +
                                 format_number(r.ci_low) + ", " + format_number(r.ci_high) + "]");
      }
    }
    if (matched == 0) res.failures.push_back("assert[" + std::to_string(i) + "] matched no rows");
    if (a.trend == "none") continue;
    std::map<std::pair<std::string, std::string>, std::vector<const CsvRow*>> series;
    for (const auto& r : res.rows)
      if ((!a.scheme || *a.scheme == r.scheme) && (!a.model || *a.model == r.model) && (!a.n || *a.n == r.n))
        series[{r.model, r.scheme}].push_back(&r);
    for (auto& [key, rows] : series) {
      std::stable_sort(rows.begin(), rows.end(), [](const CsvRow* x, const CsvRow* y) { return x->n < y->n; });
      for (std::size_t j = 1; j < rows.size(); ++j) {
        const double prev = rows[j - 1]->loss, cur = rows[j]->loss;
        const bool ok = a.trend == "decreasing" ? cur < prev : a.trend == "nonincreasing" ? cur <= prev : cur >= prev;
        if (!ok)
          res.failures.push_back("assert[" + std::to_string(i) + "] " + key.first + " / " + key.second + ": loss " +
                                 format_number(prev) + " at n=" + std::to_string(rows[j - 1]->n) + " then " +
                                 format_number(cur) + " at n=" + std::to_string(rows[j]->n) + " is not " + a.trend);
      }
    }
  }
}

// ------------------------------------------------ finite distributions --

/// Hand-built distributions over the 720 relabelings of the 6-vertex
/// asymmetric graph, g1 fixed. Names: uniform, linear, position-weighted,
/// random-weights, adversarial-random, adversarial-gm.
inline std::vector<std::pair<std::string, FiniteDistribution>> reference_distributions(std::uint64_t seed = 0) {
  const VertexLabel v{Namespace::V1, 1};
  const LabeledGraph g1 = asymmetric_graph(6);
  const LabeledGraph g2 = with_labels(g1, sequential_labels(6, Namespace::V2));
  const auto members = enumerate_iso_class(g2);
  auto weighted = [&](const std::function<long long(std::size_t, const LabeledGraph&)>& w) {
    std::vector<long long> ws;
    long long total = 0;
    for (std::size_t i = 0; i < members.size(); ++i) {
      ws.push_back(w(i, members[i]));
      total += ws.back();
    }
    std::vector<Atom> atoms;
    for (std::size_t i = 0; i < members.size(); ++i)
      atoms.push_back({NominatablePair(g1, members[i], 6, "asym6"), Rational(ws[i], total)});
    return FiniteDistribution(std::move(atoms), v);
  };
  std::vector<std::pair<std::string, FiniteDistribution>> out;
  out.emplace_back("uniform", weighted([](std::size_t, const LabeledGraph&) { return 1LL; }));
  out.emplace_back("linear", weighted([](std::size_t i, const LabeledGraph&) { return static_cast<long long>(i + 1); }));
  out.emplace_back("position-weighted", weighted([](std::size_t, const LabeledGraph& h) {
                     const auto w = static_cast<long long>(canonical_form(h).witness(h.require_index({Namespace::V2, 1})));
                     return 1 + w * w;
                   }));
  Rng rng(RngState{seed, 0xd157});
  std::vector<long long> rw;
  for (std::size_t i = 0; i < members.size(); ++i) rw.push_back(1 + static_cast<long long>(rng.below(9)));
  out.emplace_back("random-weights", weighted([&](std::size_t i, const LabeledGraph&) { return rw[i]; }));
  const auto eps = EpsilonSequence::standard(6);
  out.emplace_back("adversarial-random",
                   build_adversarial(random_baseline_scheme(0), g1, g2, positional_obfuscation(g2), v, eps).dist);
  out.emplace_back("adversarial-gm",
                   build_adversarial(gm_scheme({GmMode::Exact}), g1, g2, positional_obfuscation(g2), v, eps).dist);
  return out;
}

// ---------------------------------------------------------- gm recovery --

struct RecoveryCount {
  std::size_t hits = 0, trials = 0, enumeration_disagreements = 0;
};

/// Trials in which the identity is the unique minimizer of the matching
/// objective on a correlated pair. Trial t uses seed.substream(t).
inline RecoveryCount gm_recovery_count(std::size_t n, double p, double rho, std::size_t trials, RngState seed,
                                       std::size_t jobs, bool asymmetric, bool enumerate) {
  const auto params = CorrelatedErParams::constant(n, p, rho);
  std::vector<char> hit(trials, 0), disagree(trials, 0);
  parallel_trials(trials, jobs, [&](std::size_t t) {
    Rng rng(seed.substream(t));
    for (std::size_t tries = 0;; ++tries) {
      if (tries == 10000) throw InvalidInput("no asymmetric correlated pair within the retry budget");
      auto [a, b] = sample_correlated_er(params, rng);
      if (asymmetric && (!is_asymmetric(a) || !is_asymmetric(b))) continue;
      const bool u = identity_is_unique_minimizer(a, b);
      hit[t] = u;
      if (enumerate) disagree[t] = u != identity_is_unique_minimizer_enumerated(a, b);
      return;
    }
  });
  RecoveryCount c;
  c.trials = trials;
  for (std::size_t t = 0; t < trials; ++t) {
    c.hits += static_cast<std::size_t>(hit[t]);
    c.enumeration_disagreements += static_cast<std::size_t>(disagree[t]);
  }
  return c;
}

// ---------------------------------------------------------- scenario kinds --

namespace scenario_detail {

inline CsvRow exact_row(const std::string& scenario, const std::string& model, const std::string& scheme,
                        std::size_t n, std::size_t m, std::size_t c, std::size_t k, std::uint64_t seed,
                        const Rational& loss, std::optional<Rational> ref) {
  CsvRow r{scenario, model, scheme, n, m, c, k, 0, seed, to_double(loss), to_double(loss), to_double(loss), {}};
  if (ref) r.bayes_ref = to_double(*ref);
  return r;
}

inline void run_mc_curve(ConfigFields& f, const RunOptions& opt, std::uint64_t seed, ScenarioResult& res) {
  const auto models = models_from_config(f);
  const auto schemes = schemes_from_config(f);
  const KRule k_rule = k_rule_from_config(f);
  const auto n_values = f.integers("n_values");
  std::size_t trials = f.integer("trials", 200);
  if (opt.trials_override) trials = *opt.trials_override;
  if (trials < 1) ConfigFields::fail(f.field("trials"), "must be at least 1");
  const double confidence = f.real("confidence", 0.95);
  if (!(confidence > 0.0 && confidence < 1.0)) ConfigFields::fail(f.field("confidence"), "must lie in (0, 1)");
  const std::string ref = f.choice("bayes_ref", {"none", "indep-er", "iid-sbm"}, "none");
  const auto asserts = assertions_from_config(f);
  for (std::size_t mi = 0; mi < models.size(); ++mi) {
    for (const auto& scheme : schemes) {
      CurveSpec spec;
      spec.scheme_for = [&scheme](std::size_t) { return scheme; };
      spec.sampler_for = models[mi].sampler_for;
      spec.k_rule = k_rule;
      spec.n_values.assign(n_values.begin(), n_values.end());
      spec.trials = trials;
      spec.seed = RngState{seed, static_cast<std::uint64_t>(mi) << 20};
      spec.jobs = opt.jobs;
      spec.confidence = confidence;
      if (ref == "indep-er") spec.bayes_ref = [](std::size_t n, std::size_t k) { return indep_er_bayes_error(n, k); };
      if (ref == "iid-sbm") spec.bayes_ref = [](std::size_t n, std::size_t k) { return iid_sbm_bayes_error(n, k); };
      const auto curve = consistency_curve(spec);
      for (const auto& pt : curve.per_n)
        res.rows.push_back({res.name, models[mi].label, scheme.name(), pt.n, pt.m, pt.c, pt.k, pt.estimate.trials, seed,
                            pt.estimate.point, pt.estimate.ci_low, pt.estimate.ci_high, pt.bayes_ref});
    }
  }
  res.summary.push_back("model / scheme / n / k: loss [ci]");
  for (const auto& r : res.rows)
    res.summary.push_back("  " + r.model + " / " + r.scheme + " / " + std::to_string(r.n) + " / " +
                          std::to_string(r.k) + ": " + format_number(r.loss) + " [" + format_number(r.ci_low) + ", " +
                          format_number(r.ci_high) + "]" + (r.bayes_ref ? " ref " + format_number(*r.bayes_ref) : ""));
  check_assertions(asserts, res);
}

inline void run_adversarial(ConfigFields& f, std::uint64_t seed, ScenarioResult& res) {
  const std::size_t n = f.integer("n", 6);
  const auto schemes = schemes_from_config(f);
  const auto asserts = assertions_from_config(f);
  if (n < 6 || n > kAdversarialEnumerationCap + 1) ConfigFields::fail(f.field("n"), "must lie in [6, 8]");
  const LabeledGraph g1 = asymmetric_graph(n);
  const LabeledGraph g2 = with_labels(g1, sequential_labels(n, Namespace::V2));
  const Obfuscation o = positional_obfuscation(g2);
  const VertexLabel v{Namespace::V1, 1};
  const auto eps = EpsilonSequence::standard(n);
  const std::string model = "adversarial(" + std::to_string(n) + ")";
  for (const auto& phi : schemes) {
    const auto adv = build_adversarial(phi, g1, g2, o, v, eps, kAdversarialEnumerationCap + 1);
    auto obf = [&o](const Atom&) { return o; };
    const auto err = exact_errors(phi, adv.dist, obf);
    const Scheme rev = reversal_scheme(phi);
    const auto rerr = exact_errors(rev, adv.dist, obf);
    const auto bayes = bayes_errors(adv.dist);
    res.summary.push_back(phi.name() + ": k | 1-eps_k | L_k(scheme) | chance | eps_(m-k) | L_k(reversal) | L*_k");
    for (std::size_t k = 1; k < n; ++k) {
      res.rows.push_back(exact_row(res.name, model, phi.name(), n, n, n, k, seed, err[k], bayes[k]));
      res.rows.push_back(exact_row(res.name, model, rev.name(), n, n, n, k, seed, rerr[k], bayes[k]));
      const Rational chance = chance_line(n, k);
      res.summary.push_back("  " + std::to_string(k) + " | " + to_string(1 - eps.eps(k)) + " | " + to_string(err[k]) +
                            " | " + to_string(chance) + " | " + to_string(eps.eps(n - k)) + " | " +
                            to_string(rerr[k]) + " | " + to_string(bayes[k]));
      const std::string at = phi.name() + " k=" + std::to_string(k);
      if (err[k] != 1 - eps.eps(k)) res.failures.push_back(at + ": scheme error differs from 1 - eps_k");
      if (rerr[k] != eps.eps(n - k)) res.failures.push_back(at + ": reversal error differs from eps_(m-k)");
      if (!(bayes[k] <= eps.eps(n - k) && eps.eps(n - k) < chance && chance < 1 - eps.eps(k)))
        res.failures.push_back(at + ": sandwich violated");
    }
  }
  check_assertions(asserts, res);
}

inline void run_universal(ConfigFields& f, std::uint64_t seed, ScenarioResult& res) {
  const auto schemes = schemes_from_config(f);
  const auto n_values = f.integers("n_values");
  const KRule k_rule = k_rule_from_config(f);
  const Rational target = parse_rational(f.text("eps_target", "1/10"), f.field("eps_target"));
  const auto asserts = assertions_from_config(f);
  std::vector<std::size_t> ns(n_values.begin(), n_values.end());
  for (auto n : ns)
    if (n < 6 || n > kDefaultEnumerationCap) ConfigFields::fail(f.field("n_values"), "entries must lie in [6, 8]");
  for (const auto& phi : schemes) {
    const auto rows = universal_inconsistency_sequence([&phi](std::size_t) { return phi; }, ns, target, k_rule);
    res.summary.push_back(phi.name() + ": n | k | L_k(scheme) | eps bound | L_k(reversal) | L*_k");
    for (const auto& r : rows) {
      const std::string model = "adversarial(" + std::to_string(r.n) + ")";
      res.rows.push_back(exact_row(res.name, model, phi.name(), r.n, r.m, r.n, r.k, seed, r.scheme_error, r.bayes_error));
      res.rows.push_back(exact_row(res.name, model, "reversal(" + phi.name() + ")", r.n, r.m, r.n, r.k, seed,
                                   r.reversal_error, r.bayes_error));
      res.summary.push_back("  " + std::to_string(r.n) + " | " + std::to_string(r.k) + " | " + to_string(r.scheme_error) +
                            " | " + to_string(r.eps_bound) + " | " + to_string(r.reversal_error) + " | " +
                            to_string(r.bayes_error));
      if (r.bayes_error > r.eps_bound) res.failures.push_back("n=" + std::to_string(r.n) + ": oracle above eps bound");
    }
  }
  check_assertions(asserts, res);
}

inline void run_bayes_oracle(ConfigFields& f, std::uint64_t seed, ScenarioResult& res) {
  const std::size_t n_random = f.integer("random_schemes", 20);
  const auto rep_seeds = f.integers("representative_seeds", std::vector<std::uint64_t>{1, 2, 3});
  const auto asserts = assertions_from_config(f);
  const auto dists = reference_distributions(seed);
  const std::size_t m = 6;
  for (const auto& [label, F] : dists) {
    const auto oracle = bayes_errors(F);
    const auto bayes = exact_errors(bayes_optimal_scheme(F), F);
    const auto orbit = exact_errors(bayes_optimal_orbit_scheme(F), F);
    const auto gm = exact_errors(gm_scheme({GmMode::Exact}), F);
    std::vector<Rational> best_random(m, Rational(1));
    for (std::size_t s = 0; s < n_random; ++s) {
      const auto e = exact_errors(random_baseline_scheme(s), F);
      for (std::size_t k = 1; k < m; ++k) {
        best_random[k] = std::min(best_random[k], e[k]);
        if (bayes[k] > e[k]) res.failures.push_back(label + ": bayes above random(" + std::to_string(s) + ")");
      }
    }
    for (auto rs : rep_seeds)
      if (exact_errors(bayes_optimal_scheme(F, {kDefaultEnumerationCap, rs, {}}), F) != bayes)
        res.failures.push_back(label + ": representative seed " + std::to_string(rs) + " changes the errors");
    for (std::size_t k = 1; k < m; ++k) {
      res.rows.push_back(exact_row(res.name, label, "bayes", m, m, m, k, seed, bayes[k], oracle[k]));
      res.rows.push_back(exact_row(res.name, label, "bayes-orbit", m, m, m, k, seed, orbit[k], oracle[k]));
      res.rows.push_back(exact_row(res.name, label, "gm-exact", m, m, m, k, seed, gm[k], oracle[k]));
      res.rows.push_back(exact_row(res.name, label, "best-of-random(" + std::to_string(n_random) + ")", m, m, m, k, seed,
                                   best_random[k], oracle[k]));
      const std::string at = label + " k=" + std::to_string(k);
      if (bayes[k] != oracle[k]) res.failures.push_back(at + ": bayes scheme differs from the oracle");
      if (orbit[k] != oracle[k]) res.failures.push_back(at + ": orbit scheme differs from the oracle");
      if (bayes[k] > gm[k]) res.failures.push_back(at + ": bayes above gm");
    }
    res.summary.push_back(label + ": L*_1.." + std::to_string(m - 1) + " =");
    std::string line = " ";
    for (std::size_t k = 1; k < m; ++k) line += " " + to_string(oracle[k]);
    res.summary.push_back(line);
  }
  check_assertions(asserts, res);
}

inline void run_gm_recovery(ConfigFields& f, const RunOptions& opt, std::uint64_t seed, ScenarioResult& res) {
  const std::size_t n = f.integer("n", 8);
  const double p = f.real("p", 0.5);
  const auto rhos = f.reals("rho_values");
  std::size_t trials = f.integer("trials", 200);
  if (opt.trials_override) trials = *opt.trials_override;
  if (trials < 1) ConfigFields::fail(f.field("trials"), "must be at least 1");
  const bool asym = f.flag("asymmetric", true);
  const bool enumerate = f.flag("enumerate", false);
  const bool monotone = f.flag("assert_monotone", true);
  const auto asserts = assertions_from_config(f);
  if (n > kExactMatchCap) ConfigFields::fail(f.field("n"), "exceeds the exact matching cap");
  std::optional<double> prev;
  res.summary.push_back("rho: identity is the unique minimizer in hits / trials");
  for (std::size_t i = 0; i < rhos.size(); ++i) {
    const RngState s{seed, 0x6d00 + i};
    const auto c = gm_recovery_count(n, p, rhos[i], trials, s, opt.jobs, asym, enumerate);
    const auto est = make_estimate(c.trials - c.hits, c.trials, s);
    res.rows.push_back({res.name, "correlated-er(" + format_number(p) + "," + format_number(rhos[i]) + ")",
                        "gm-exact-unique-identity", n, n, n, 1, trials, seed, est.point, est.ci_low, est.ci_high, {}});
    const double freq = static_cast<double>(c.hits) / static_cast<double>(trials);
    res.summary.push_back("  " + format_number(rhos[i]) + ": " + std::to_string(c.hits) + " / " + std::to_string(trials));
    if (enumerate && c.enumeration_disagreements)
      res.failures.push_back("rho=" + format_number(rhos[i]) + ": branch and bound disagrees with enumeration");
    if (monotone && prev && !(freq > *prev))
      res.failures.push_back("recovery frequency not strictly increasing at rho=" + format_number(rhos[i]));
    prev = freq;
  }
  check_assertions(asserts, res);
}

}  // namespace scenario_detail

/// Runs a parsed scenario config. Validation errors throw InvalidInput;
/// failed assertions are collected in the result.
inline ScenarioResult run_scenario(const Json& config, const RunOptions& opt = {}) {
  ScenarioResult res;
  ConfigFields f(config, "", res.resolved);
  res.name = f.text("name");
  f.text("description", "");
  const std::string kind = f.choice("kind", {"mc-curve", "adversarial", "universal", "bayes-oracle", "gm-recovery"});
  std::uint64_t seed = f.integer("seed", 1);
  if (opt.seed) {
    seed = *opt.seed;
    res.resolved["seed"] = seed;
  }
  if (kind == "mc-curve") scenario_detail::run_mc_curve(f, opt, seed, res);
  if (kind == "adversarial") scenario_detail::run_adversarial(f, seed, res);
  if (kind == "universal") scenario_detail::run_universal(f, seed, res);
  if (kind == "bayes-oracle") scenario_detail::run_bayes_oracle(f, seed, res);
  if (kind == "gm-recovery") scenario_detail::run_gm_recovery(f, opt, seed, res);
  f.finish();
  if (opt.trials_override && res.resolved.contains("trials")) res.resolved["trials"] = *opt.trials_override;
  return res;
}

// ------------------------------------------------------------ builtins --

struct BuiltinScenario {
  const char* name;
  const char* description;
  const char* config;
};

inline const std::vector<BuiltinScenario>& builtin_scenarios() {
  static const std::vector<BuiltinScenario> list = {
      {"indep-er-chance", "independent ER pairs: every scheme sits at the chance line 1 - k/n",
       R"json({"name": "indep-er-chance", "kind": "mc-curve",
           "models": [{"kind": "indep-er", "p": 0.5}],
           "schemes": [{"kind": "random"}, {"kind": "gm", "mode": "auto"}, {"kind": "spectral", "d": 2, "align": "density"}],
           "k_rule": {"kind": "fraction", "value": 0.25}, "n_values": [8, 12, 20, 40],
           "trials": 400, "seed": 1, "confidence": 0.999, "bayes_ref": "indep-er",
           "assert": [{"ref_in_ci": true}]})json"},
      {"sbm-iid", "i.i.d. two-block SBM pair: Bayes error max(1 - 2k/n, 0); spectral approaches it",
       R"json({"name": "sbm-iid", "kind": "mc-curve",
           "models": [{"kind": "sbm-pair", "B1": [[0.7, 0.1], [0.1, 0.3]]}],
           "schemes": [{"kind": "spectral", "d": 2, "align": "density"}, {"kind": "random"}],
           "k_rule": {"kind": "fraction", "value": 0.25}, "n_values": [20, 40, 80, 160],
           "trials": 300, "seed": 1, "bayes_ref": "iid-sbm",
           "assert": [{"scheme": "random(0)", "min_loss": 0.6}]})json"},
      {"correlated-er-curve", "correlated ER pairs at n = 8: level-1 error of graph matching falls as rho grows",
       R"json({"name": "correlated-er-curve", "kind": "mc-curve",
           "models": [{"kind": "correlated-er", "p": 0.5, "rho": 0.0, "label": "rho=0"},
                      {"kind": "correlated-er", "p": 0.5, "rho": 0.5, "label": "rho=0.5"},
                      {"kind": "correlated-er", "p": 0.5, "rho": 0.9, "label": "rho=0.9"}],
           "schemes": [{"kind": "gm", "mode": "exact"}, {"kind": "random"}],
           "k_rule": {"kind": "constant", "value": 1}, "n_values": [8], "trials": 500, "seed": 1,
           "assert": [{"model": "rho=0.9", "scheme": "gm-exact", "max_loss": 0.5}]})json"},
      {"adversarial-demo", "worse-than-chance construction against random and graph matching schemes at m = 6",
       R"json({"name": "adversarial-demo", "kind": "adversarial", "n": 6,
           "schemes": [{"kind": "random", "seed": 0}, {"kind": "gm", "mode": "exact"}]})json"},
      {"universal-inconsistency", "adversarial sequence n = 6, 7, 8 with k = 1: scheme error near 1, Bayes below 0.1",
       R"json({"name": "universal-inconsistency", "kind": "universal", "n_values": [6, 7, 8],
           "k_rule": {"kind": "constant", "value": 1}, "eps_target": "1/10",
           "schemes": [{"kind": "random", "seed": 1}],
           "assert": [{"scheme": "random(1)", "min_loss": 0.99}, {"scheme": "reversal(random(1))", "max_loss": 0.1}]})json"},
      {"bayes-oracle-check", "Bayes scheme against the majorization oracle and consistent competitors, exact",
       R"json({"name": "bayes-oracle-check", "kind": "bayes-oracle", "random_schemes": 20, "seed": 0})json"},
      {"gm-recovery", "identity as the unique graph matching minimizer at n = 8 across rho",
       R"json({"name": "gm-recovery", "kind": "gm-recovery", "n": 8, "p": 0.5,
           "rho_values": [0.0, 0.5, 0.9, 1.0], "trials": 200, "seed": 1, "asymmetric": true})json"},
      {"behavior-flip", "two-block SBM where the target block keeps or swaps its density across graphs",
       R"json({"name": "behavior-flip", "kind": "mc-curve",
           "models": [{"kind": "sbm-pair", "label": "case1", "asymmetric": true,
                       "B1": [[0.7, 0.1], [0.1, 0.3]], "B2": [[0.7, 0.1], [0.1, 0.3]]},
                      {"kind": "sbm-pair", "label": "case2", "asymmetric": true,
                       "B1": [[0.7, 0.1], [0.1, 0.3]], "B2": [[0.3, 0.1], [0.1, 0.7]]}],
           "schemes": [{"kind": "spectral", "d": 2, "align": "density"},
                       {"kind": "spectral", "d": 2, "align": "anti-density"}],
           "k_rule": {"kind": "fraction", "value": 0.5}, "n_values": [200], "trials": 500, "seed": 1,
           "assert": [{"model": "case1", "scheme": "spectral(2,density)", "max_loss": 0.05},
                      {"model": "case2", "scheme": "spectral(2,density)", "min_loss": 0.95},
                      {"model": "case1", "scheme": "spectral(2,anti-density)", "min_loss": 0.95},
                      {"model": "case2", "scheme": "spectral(2,anti-density)", "max_loss": 0.05}]})json"},
      {"correlated-er-growth", "graph matching on rho = 0.9 correlated ER pairs: level-1 error falls as n grows",
       R"json({"name": "correlated-er-growth", "kind": "mc-curve",
           "models": [{"kind": "correlated-er", "p": 0.5, "rho": 0.9}],
           "schemes": [{"kind": "gm", "mode": "auto"}],
           "k_rule": {"kind": "constant", "value": 1}, "n_values": [4, 6, 8, 10, 20, 40], "trials": 400, "seed": 1,
           "assert": [{"scheme": "gm-auto", "trend": "decreasing"}]})json"},
      {"spectral-sbm-trend", "density-aligned spectral scheme on both SBM cases through n = 50, 100, 200",
       R"json({"name": "spectral-sbm-trend", "kind": "mc-curve",
           "models": [{"kind": "sbm-pair", "label": "case1", "asymmetric": true, "B1": [[0.7, 0.1], [0.1, 0.3]]},
                      {"kind": "sbm-pair", "label": "case2", "asymmetric": true,
                       "B1": [[0.7, 0.1], [0.1, 0.3]], "B2": [[0.3, 0.1], [0.1, 0.7]]}],
           "schemes": [{"kind": "spectral", "d": 2, "align": "density"}],
           "k_rule": {"kind": "fraction", "value": 0.5}, "n_values": [50, 100, 200], "trials": 100, "seed": 1,
           "assert": [{"model": "case1", "trend": "nonincreasing"}, {"model": "case2", "trend": "nondecreasing"},
                      {"model": "case1", "n": 200, "max_loss": 0.05}, {"model": "case2", "n": 200, "min_loss": 0.95}]})json"},
      {"features-flip", "three-block SBM with sign features: block-1 features rescue both cases, block-1/2 features do not",
       R"json({"name": "features-flip", "kind": "mc-curve",
           "models": [{"kind": "sbm-pair", "label": "a-case1", "asymmetric": true, "feature_positive_blocks": [0],
                       "B1": [[0.7, 0.1, 0.1], [0.1, 0.3, 0.1], [0.1, 0.1, 0.7]]},
                      {"kind": "sbm-pair", "label": "a-case2", "asymmetric": true, "feature_positive_blocks": [0],
                       "B1": [[0.7, 0.1, 0.1], [0.1, 0.3, 0.1], [0.1, 0.1, 0.7]],
                       "B2": [[0.3, 0.1, 0.1], [0.1, 0.7, 0.1], [0.1, 0.1, 0.7]]},
                      {"kind": "sbm-pair", "label": "b-case1", "asymmetric": true, "feature_positive_blocks": [0, 1],
                       "B1": [[0.7, 0.1, 0.1], [0.1, 0.3, 0.1], [0.1, 0.1, 0.7]]},
                      {"kind": "sbm-pair", "label": "b-case2", "asymmetric": true, "feature_positive_blocks": [0, 1],
                       "B1": [[0.7, 0.1, 0.1], [0.1, 0.3, 0.1], [0.1, 0.1, 0.7]],
                       "B2": [[0.3, 0.1, 0.1], [0.1, 0.7, 0.1], [0.1, 0.1, 0.7]]}],
           "schemes": [{"kind": "features", "base": {"kind": "spectral", "d": 2, "align": "density"}}],
           "k_rule": {"kind": "divisor", "value": 3}, "n_values": [150], "trials": 200, "seed": 1,
           "assert": [{"model": "a-case1", "max_loss": 0.05}, {"model": "a-case2", "max_loss": 0.05},
                      {"model": "b-case1", "max_loss": 0.05}, {"model": "b-case2", "min_loss": 0.95}]})json"},
  };
  return list;
}

inline const BuiltinScenario* find_builtin(const std::string& name) {
  for (const auto& b : builtin_scenarios())
    if (name == b.name) return &b;
  return nullptr;
}

inline Json parse_config_text(const std::string& text, const std::string& origin) {
  try {
    return Json::parse(text);
  } catch (const Json::parse_error& e) {
    throw InvalidInput(origin + ": " + e.what());
  }
}

/// A builtin name or a path to a JSON config file.
inline Json load_config(const std::string& name_or_path) {
  if (const auto* b = find_builtin(name_or_path)) return parse_config_text(b->config, name_or_path);
  std::ifstream in(name_or_path);
  if (!in) throw InvalidInput("no builtin scenario or readable file named " + name_or_path);
  std::stringstream ss;
  ss << in.rdbuf();
  return parse_config_text(ss.str(), name_or_path);
}

}  // namespace vnlab
