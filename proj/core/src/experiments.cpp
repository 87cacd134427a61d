#include "qprlab/experiments.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <fstream>
#include <iostream>
#include <numeric>
#include <set>
#include <sstream>

#include <json.hpp>

#include "qprlab/clifford.hpp"
#include "qprlab/ensembles.hpp"
#include "qprlab/hierarchy.hpp"
#include "qprlab/learnlab.hpp"
#include "qprlab/parallel.hpp"
#include "qprlab/pseudo.hpp"
#include "qprlab/rng.hpp"

namespace qprlab {

using nlohmann::json;

double ExperimentConfig::get_double(const std::string& key,
                                    double fallback) const {
  auto it = params.find(key);
  if (it == params.end()) return fallback;
  try {
    std::size_t pos = 0;
    double v = std::stod(it->second, &pos);
    if (pos != it->second.size()) throw std::invalid_argument("trailing");
    return v;
  } catch (const std::exception&) {
    throw ValidationError("parameter '" + key + "' is not a number");
  }
}

std::int64_t ExperimentConfig::get_int(const std::string& key,
                                       std::int64_t fallback) const {
  auto it = params.find(key);
  if (it == params.end()) return fallback;
  try {
    std::size_t pos = 0;
    std::int64_t v = std::stoll(it->second, &pos);
    if (pos != it->second.size()) throw std::invalid_argument("trailing");
    return v;
  } catch (const std::exception&) {
    throw ValidationError("parameter '" + key + "' is not an integer");
  }
}

std::string ExperimentConfig::get_string(const std::string& key,
                                         const std::string& fallback) const {
  auto it = params.find(key);
  return it == params.end() ? fallback : it->second;
}

ExperimentConfig load_config_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot open config file: " + path);
  json j;
  try {
    in >> j;
  } catch (const json::exception& e) {
    throw ValidationError(std::string("config file is not valid JSON: ") +
                          e.what());
  }
  if (!j.is_object()) throw ValidationError("config must be a JSON object");
  const std::set<std::string> allowed = {"schema_version", "experiment",
                                         "seed",           "params",
                                         "out",            "format"};
  for (auto it = j.begin(); it != j.end(); ++it)
    if (!allowed.count(it.key()))
      throw ValidationError("unknown config key '" + it.key() + "'");
  ExperimentConfig cfg;
  if (j.contains("schema_version")) {
    cfg.schema_version = j["schema_version"].get<int>();
    if (cfg.schema_version != kConfigSchemaVersion)
      throw ValidationError("unsupported config schema_version");
  }
  if (j.contains("experiment")) cfg.experiment = j["experiment"].get<std::string>();
  if (j.contains("seed")) {
    cfg.seed = j["seed"].get<std::uint64_t>();
    cfg.seed_set = true;
  }
  if (j.contains("out")) cfg.out_path = j["out"].get<std::string>();
  if (j.contains("format")) cfg.format = j["format"].get<std::string>();
  if (j.contains("params")) {
    if (!j["params"].is_object())
      throw ValidationError("config 'params' must be an object");
    for (auto it = j["params"].begin(); it != j["params"].end(); ++it) {
      const json& v = it.value();
      if (v.is_string())
        cfg.params[it.key()] = v.get<std::string>();
      else if (v.is_number_integer())
        cfg.params[it.key()] = std::to_string(v.get<std::int64_t>());
      else if (v.is_number_float()) {
        std::ostringstream os;
        os.precision(17);
        os << v.get<double>();
        cfg.params[it.key()] = os.str();
      } else if (v.is_boolean())
        cfg.params[it.key()] = v.get<bool>() ? "1" : "0";
      else
        throw ValidationError("parameter '" + it.key() +
                              "' must be scalar");
    }
  }
  return cfg;
}

namespace {

void require_known_params(const ExperimentConfig& cfg,
                          const std::set<std::string>& allowed) {
  for (const auto& [key, value] : cfg.params)
    if (!allowed.count(key))
      throw ValidationError("unknown parameter '" + key + "' for experiment '" +
                            cfg.experiment + "'");
}

std::string timestamp_now() {
  auto now = std::chrono::system_clock::now();
  std::time_t t = std::chrono::system_clock::to_time_t(now);
  char buf[32];
  std::strftime(buf, sizeof(buf), "%FT%TZ", std::gmtime(&t));
  return buf;
}

std::vector<std::uint8_t> key_bytes_for(std::uint64_t seed, std::uint64_t index) {
  Rng rng(seed, 42, index);
  std::vector<std::uint8_t> key(16);
  for (int half = 0; half < 2; ++half) {
    std::uint64_t w = rng.next_u64();
    for (int b = 0; b < 8; ++b)
      key[static_cast<std::size_t>(half * 8 + b)] =
          static_cast<std::uint8_t>(w >> (8 * b));
  }
  return key;
}

// --- individual experiments --------------------------------------------------

void run_phase_vs_haar(const ExperimentConfig& cfg, ResultRecord& rec) {
  require_known_params(cfg, {"l", "m"});
  int ell = static_cast<int>(cfg.get_int("l", 5));
  int m = static_cast<int>(cfg.get_int("m", 2));
  double td = phase_vs_haar_distance(ell, m);
  double bound = phase_vs_haar_bound(ell, m);
  rec.metrics["td"] = td;
  rec.metrics["bound"] = bound;
  rec.metrics["bound_ok"] = td <= bound ? 1.0 : 0.0;
  if (td > bound) rec.bound_violation = true;
}

Learner learner_by_name(const std::string& name, int n) {
  if (name == "exact-zero") return exact_zero_learner();
  if (name == "basis-majority") return basis_majority_learner(n);
  if (name == "trivial-stabilizer") return trivial_stabilizer_learner_fn(n);
  throw ValidationError("unknown learner '" + name + "'");
}

void run_swap_advantage(const ExperimentConfig& cfg, ResultRecord& rec) {
  require_known_params(cfg, {"learner", "n", "m", "trials", "alpha"});
  int n = static_cast<int>(cfg.get_int("n", 4));
  std::size_t m = static_cast<std::size_t>(cfg.get_int("m", 2));
  std::size_t trials = static_cast<std::size_t>(cfg.get_int("trials", 10000));
  double alpha = cfg.get_double("alpha", 0.01);
  std::string learner_name = cfg.get_string("learner", "exact-zero");
  Learner learner = learner_by_name(learner_name, n);
  Distinguisher dist = distinguisher_from_learner(learner, m, n);

  ConceptSampler concept_sampler;
  if (learner_name == "basis-majority") {
    int nq = n;
    concept_sampler = [nq](std::uint64_t s) {
      Rng rng(s);
      return Statevector::computational_basis(
          nq, static_cast<std::int64_t>(rng.next_below(
                  static_cast<std::uint64_t>(dim_of(nq)))));
    };
  } else {
    int nq = n;
    concept_sampler = [nq](std::uint64_t) {
      return Statevector::zero_state(nq);
    };
  }

  DistinguishingReport report =
      estimate_advantage(dist, concept_sampler, n, m + 1, trials, alpha,
                         cfg.seed);
  rec.metrics["advantage"] = report.advantage;
  rec.metrics["ci"] = report.ci_halfwidth;
  rec.metrics["accept_rate_concept"] =
      static_cast<double>(report.accepts_concept) / trials;
  rec.metrics["accept_rate_haar"] =
      static_cast<double>(report.accepts_haar) / trials;
  rec.metrics["learner_failures"] = static_cast<double>(
      report.failures_concept + report.failures_haar);
}

void run_bru_check(const ExperimentConfig& cfg, ResultRecord& rec) {
  require_known_params(cfg, {"learner", "n", "m", "trials", "alpha"});
  int n = static_cast<int>(cfg.get_int("n", 2));
  std::size_t m = static_cast<std::size_t>(cfg.get_int("m", 3));
  std::size_t trials = static_cast<std::size_t>(cfg.get_int("trials", 1000));
  double alpha = cfg.get_double("alpha", 0.01);
  std::string learner_name = cfg.get_string("learner", "trivial-stabilizer");
  Learner learner = learner_by_name(learner_name, n);
  MeanFidelityReport report =
      mean_fidelity_on_haar(learner, n, m, trials, alpha, cfg.seed);
  double bound = bru_bound(n, m);
  double var = 0.0;
  for (double x : report.samples) var += (x - report.mean) * (x - report.mean);
  var /= std::max<std::size_t>(1, report.samples.size() - 1);
  double sigma_mean = std::sqrt(var / static_cast<double>(trials));
  rec.metrics["mean_fidelity"] = report.mean;
  rec.metrics["ci"] = report.ci_halfwidth;
  rec.metrics["sigma_mean"] = sigma_mean;
  rec.metrics["bound"] = bound;
  bool ok = report.mean <= bound + 3.0 * sigma_mean;
  rec.metrics["bound_ok"] = ok ? 1.0 : 0.0;
  if (!ok) rec.bound_violation = true;
}

void run_stabilizer_moments(const ExperimentConfig& cfg, ResultRecord& rec) {
  require_known_params(cfg, {"n", "targets"});
  int n = static_cast<int>(cfg.get_int("n", 1));
  std::size_t targets = static_cast<std::size_t>(cfg.get_int("targets", 20));
  auto stabilizers = enumerate_stabilizer_states(n);
  double d = std::pow(2.0, n);
  double expected2 = 1.0 / d;
  double expected4 = 2.0 / (d * (d + 1.0));
  double err2 = 0.0, err4 = 0.0;
  for (std::size_t t = 0; t < targets; ++t) {
    Statevector psi = sample_haar_state(n, derive_seed(cfg.seed, 7, t));
    double m2 = 0.0, m4 = 0.0;
    for (const Statevector& phi : stabilizers) {
      Complex ov = psi.amplitudes().adjoint() * phi.amplitudes();
      double f = std::norm(ov);
      m2 += f;
      m4 += f * f;
    }
    m2 /= static_cast<double>(stabilizers.size());
    m4 /= static_cast<double>(stabilizers.size());
    err2 = std::max(err2, std::abs(m2 - expected2));
    err4 = std::max(err4, std::abs(m4 - expected4));
  }
  rec.metrics["states"] = static_cast<double>(stabilizers.size());
  rec.metrics["first_moment"] = expected2;
  rec.metrics["second_moment"] = expected4;
  rec.metrics["first_moment_max_err"] = err2;
  rec.metrics["second_moment_max_err"] = err4;
  bool ok = err2 <= 1e-10 && err4 <= 1e-10;
  rec.metrics["bound_ok"] = ok ? 1.0 : 0.0;
  if (!ok) rec.bound_violation = true;
}

void run_trivial_learner(const ExperimentConfig& cfg, ResultRecord& rec) {
  require_known_params(cfg, {"n", "theta", "draws"});
  int n = static_cast<int>(cfg.get_int("n", 2));
  double theta = cfg.get_double("theta", 0.5);
  std::size_t draws = static_cast<std::size_t>(cfg.get_int("draws", 10000));
  Statevector target = sample_haar_state(n, derive_seed(cfg.seed, 5, 0));
  std::size_t hits = 0;
  double d = std::pow(2.0, n);
  double threshold = theta / d;
  for (std::size_t t = 0; t < draws; ++t) {
    LearnerOutput out =
        trivial_stabilizer_learner(n, derive_seed(cfg.seed, 6, t));
    Statevector hyp = apply_described(out.desc, out.circuit_size,
                                      Statevector::zero_state(n));
    Complex ov = hyp.amplitudes().adjoint() * target.amplitudes();
    if (std::norm(ov) >= threshold) ++hits;
  }
  double prob = static_cast<double>(hits) / static_cast<double>(draws);
  double rhs = (1.0 - theta) * (1.0 - theta) * (0.5 + 1.0 / (2.0 * d));
  double sigma =
      std::sqrt(std::max(prob * (1.0 - prob), 1.0 / draws) / draws);
  rec.metrics["empirical_prob"] = prob;
  rec.metrics["guarantee"] = rhs;
  rec.metrics["sigma"] = sigma;
  bool ok = prob >= rhs - 3.0 * sigma;
  rec.metrics["bound_ok"] = ok ? 1.0 : 0.0;
  if (!ok) rec.bound_violation = true;
}

void run_packing(const ExperimentConfig& cfg, ResultRecord& rec) {
  require_known_params(cfg, {"n", "count", "epsilon", "exact", "r", "c", "s"});
  int n = static_cast<int>(cfg.get_int("n", 1));
  std::size_t count = static_cast<std::size_t>(cfg.get_int("count", 12));
  double epsilon = cfg.get_double("epsilon", 0.5);
  bool exact = cfg.get_int("exact", count <= 18 ? 1 : 0) != 0;
  std::vector<Statevector> states;
  states.reserve(count);
  for (std::size_t i = 0; i < count; ++i)
    states.push_back(sample_haar_state(n, derive_seed(cfg.seed, 8, i)));
  PackingResult greedy = greedy_packing(states, epsilon);
  rec.metrics["greedy_count"] = static_cast<double>(greedy.count);
  if (exact) {
    PackingResult best = exact_packing(states, epsilon);
    rec.metrics["exact_count"] = static_cast<double>(best.count);
  }
  PackingFormulaParams fp;
  fp.n = n;
  fp.r = cfg.get_double("r", 1.0);
  fp.eps = std::min(epsilon, 0.499999);
  fp.c = cfg.get_double("c", 1.0);
  rec.metrics["lower_formula"] = packing_lower_formula(fp);
  rec.metrics["alpha"] = packing_alpha(fp);
  std::size_t s = static_cast<std::size_t>(cfg.get_int("s", 4));
  rec.metrics["counting_log2"] = counting_upper_bound_log2(s);
}

void run_diagonalize(const ExperimentConfig& cfg, ResultRecord& rec) {
  require_known_params(
      cfg, {"n", "s", "s_prime", "gap", "tol", "max_candidates", "max_inner"});
  DiagonalizationParams p;
  p.n = static_cast<int>(cfg.get_int("n", 1));
  p.s = static_cast<std::size_t>(cfg.get_int("s", 0));
  p.s_prime = static_cast<std::size_t>(cfg.get_int("s_prime", 1));
  p.gap = cfg.get_double("gap", 0.4925);
  p.tol = cfg.get_double("tol", 0.025);
  p.max_candidates =
      static_cast<std::uint64_t>(cfg.get_int("max_candidates", 1 << 20));
  p.max_inner = static_cast<std::uint64_t>(cfg.get_int("max_inner", 1 << 20));
  DiagonalizationResult result = diagonalization_search(p);
  rec.metrics["found"] = result.found ? 1.0 : 0.0;
  rec.metrics["candidates_scanned"] =
      static_cast<double>(result.candidates_scanned);
  rec.metrics["inner_circuits"] = static_cast<double>(result.inner_circuits);
  if (result.found) {
    rec.metrics["min_distance"] = result.witness_min_distance;
    rec.metrics["witness_index"] = static_cast<double>(result.witness_index);
    rec.text_metrics["witness"] = encode(*result.witness).to_string();
  } else {
    rec.text_metrics["status"] = "exhausted";
    rec.metrics["best_min_distance"] = result.best_min_distance;
    if (result.best_candidate)
      rec.text_metrics["best_candidate"] =
          encode(*result.best_candidate).to_string();
  }
  std::ostringstream csv;
  csv << "circuit_index,distance\n";
  for (const auto& r : result.records)
    csv << r.candidate_index << "," << r.min_distance << "\n";
  rec.text_metrics["distance_records_csv"] = csv.str();
}

void run_pru_moments(const ExperimentConfig& cfg, ResultRecord& rec) {
  require_known_params(cfg, {"l", "keys", "variant"});
  int ell = static_cast<int>(cfg.get_int("l", 2));
  std::string variant = cfg.get_string("variant", "keyed");
  const std::int64_t d = dim_of(ell);

  if (variant == "keyed") {
    std::size_t keys = static_cast<std::size_t>(cfg.get_int("keys", 10000));
    Matrix sum = Matrix::Zero(d, d);
    Eigen::MatrixXd sum_sq_re = Eigen::MatrixXd::Zero(d, d);
    Eigen::MatrixXd sum_sq_im = Eigen::MatrixXd::Zero(d, d);
    for (std::size_t k = 0; k < keys; ++k) {
      KeyedExpander key(key_bytes_for(cfg.seed, k));
      Matrix u = pru_unitary(key, ell).entries();
      Matrix rho = u.col(0) * u.col(0).adjoint();
      sum += rho;
      sum_sq_re.array() += rho.real().array().square();
      sum_sq_im.array() += rho.imag().array().square();
    }
    Matrix mean = sum / static_cast<double>(keys);
    Matrix target = Matrix::Identity(d, d) / static_cast<double>(d);
    double worst_ratio = 0.0;
    for (std::int64_t i = 0; i < d; ++i)
      for (std::int64_t j = 0; j < d; ++j) {
        double var_re =
            sum_sq_re(i, j) / keys - mean(i, j).real() * mean(i, j).real();
        double var_im =
            sum_sq_im(i, j) / keys - mean(i, j).imag() * mean(i, j).imag();
        double sig_re = std::sqrt(std::max(var_re, 1e-24) / keys);
        double sig_im = std::sqrt(std::max(var_im, 1e-24) / keys);
        double dev_re = std::abs(mean(i, j).real() - target(i, j).real());
        double dev_im = std::abs(mean(i, j).imag() - target(i, j).imag());
        worst_ratio = std::max(worst_ratio, dev_re / sig_re);
        worst_ratio = std::max(worst_ratio, dev_im / sig_im);
      }
    rec.metrics["keys"] = static_cast<double>(keys);
    rec.metrics["max_sigma_ratio"] = worst_ratio;
    bool ok = worst_ratio <= 3.0;
    rec.metrics["bound_ok"] = ok ? 1.0 : 0.0;
    if (!ok) rec.bound_violation = true;
    return;
  }

  if (variant != "exact")
    throw ValidationError("parameter 'variant' must be 'keyed' or 'exact'");
  if (ell != 2)
    throw ValidationError("exact variant is enumerable only at l = 2");

  // Independence of p, f, C factorizes the average of the two-copy channel:
  // E[S] = E[S_p] E[S_F] E[S_C], each factor enumerated exhaustively.
  const std::int64_t d2 = d * d;        // two-copy dimension
  const std::int64_t sd = d2 * d2;      // superoperator dimension
  auto super_of = [](const Matrix& w) { return kronecker(w.conjugate(), w); };

  Matrix sp = Matrix::Zero(sd, sd);
  {
    std::vector<std::uint32_t> perm{0, 1, 2, 3};
    std::size_t count = 0;
    do {
      Matrix u = Matrix::Zero(d, d);
      for (std::int64_t x = 0; x < d; ++x) u(perm[x], x) = 1.0;
      sp += super_of(kronecker(u, u));
      ++count;
    } while (std::next_permutation(perm.begin(), perm.end()));
    sp /= static_cast<double>(count);
  }

  Matrix sf = Matrix::Zero(sd, sd);
  for (std::uint32_t f = 0; f < (1u << d); ++f) {
    Matrix u = Matrix::Identity(d, d);
    for (std::int64_t x = 0; x < d; ++x)
      if ((f >> x) & 1) u(x, x) = -1.0;
    sf += super_of(kronecker(u, u));
  }
  sf /= static_cast<double>(1u << d);

  Matrix sc = Matrix::Zero(sd, sd);
  {
    auto tableaus = enumerate_clifford_tableaus(ell);
    for (const auto& t : tableaus) {
      Matrix u = tableau_to_unitary(t).entries();
      sc += super_of(kronecker(u, u));
    }
    sc /= static_cast<double>(tableaus.size());
    rec.metrics["clifford_group_size"] = static_cast<double>(tableaus.size());
  }

  Matrix avg = sp * sf * sc;

  // Haar two-copy twirl from the symmetric/antisymmetric projectors.
  Matrix swap = Matrix::Zero(d2, d2);
  for (std::int64_t i = 0; i < d; ++i)
    for (std::int64_t j = 0; j < d; ++j) swap(i * d + j, j * d + i) = 1.0;
  Matrix proj_s = 0.5 * (Matrix::Identity(d2, d2) + swap);
  Matrix proj_a = 0.5 * (Matrix::Identity(d2, d2) - swap);
  Matrix haar = Matrix::Zero(sd, sd);
  for (const Matrix* proj : {&proj_s, &proj_a}) {
    Eigen::Map<const Vector> v(proj->data(), sd);
    double dim = proj->trace().real();
    haar += (v * v.adjoint()) / dim;
  }

  Matrix diff = avg - haar;
  Eigen::SelfAdjointEigenSolver<Matrix> es(diff.adjoint() * diff,
                                           Eigen::EigenvaluesOnly);
  double opnorm = std::sqrt(std::max(0.0, es.eigenvalues().maxCoeff()));
  rec.metrics["op_norm_dev"] = opnorm;
  bool ok = opnorm <= 1e-2;
  rec.metrics["bound_ok"] = ok ? 1.0 : 0.0;
  if (!ok) rec.bound_violation = true;
}

void run_charpoly_td(const ExperimentConfig& cfg, ResultRecord& rec) {
  require_known_params(cfg, {"n", "pairs", "s"});
  int n = static_cast<int>(cfg.get_int("n", 2));
  std::size_t pairs = static_cast<std::size_t>(cfg.get_int("pairs", 50));
  std::size_t s = static_cast<std::size_t>(cfg.get_int("s", 3));
  auto circuits = enumerate_circuits(static_cast<std::uint32_t>(n), s);
  if (circuits.size() < 2)
    throw ValidationError("charpoly-td: not enough circuits at this size");
  double max_diff = 0.0;
  Rng rng(cfg.seed, 9, 0);
  for (std::size_t t = 0; t < pairs; ++t) {
    const auto& a = circuits[rng.next_below(circuits.size())];
    const auto& b = circuits[rng.next_below(circuits.size())];
    DensityMatrix ra = simulate(a);
    DensityMatrix rb = simulate(b);
    double d1 = trace_distance_charpoly(ra, rb);
    double d2 = trace_distance(ra, rb);
    max_diff = std::max(max_diff, std::abs(d1 - d2));
  }
  rec.metrics["pairs"] = static_cast<double>(pairs);
  rec.metrics["max_abs_diff"] = max_diff;
  bool ok = max_diff <= 1e-8;
  rec.metrics["bound_ok"] = ok ? 1.0 : 0.0;
  if (!ok) rec.bound_violation = true;
}

}  // namespace

ResultRecord run(const ExperimentConfig& config) {
  if (config.experiment.empty())
    throw ValidationError("field 'experiment' is required");
  if (!config.seed_set) throw ValidationError("field 'seed' is required");
  if (config.format != "json" && config.format != "csv")
    throw ValidationError("field 'format' must be json or csv");

  ResultRecord rec;
  rec.experiment = config.experiment;
  rec.resolved_config = config;
  rec.version = kArtifactVersion;
  rec.timestamp = timestamp_now();

  if (config.experiment == "phase-vs-haar")
    run_phase_vs_haar(config, rec);
  else if (config.experiment == "swap-advantage")
    run_swap_advantage(config, rec);
  else if (config.experiment == "bru-check")
    run_bru_check(config, rec);
  else if (config.experiment == "stabilizer-moments")
    run_stabilizer_moments(config, rec);
  else if (config.experiment == "trivial-learner")
    run_trivial_learner(config, rec);
  else if (config.experiment == "packing")
    run_packing(config, rec);
  else if (config.experiment == "diagonalize")
    run_diagonalize(config, rec);
  else if (config.experiment == "pru-moments")
    run_pru_moments(config, rec);
  else if (config.experiment == "charpoly-td")
    run_charpoly_td(config, rec);
  else
    throw ValidationError("unknown experiment '" + config.experiment + "'");
  return rec;
}

namespace {

json record_to_json(const ResultRecord& rec) {
  json cfg;
  cfg["schema_version"] = rec.resolved_config.schema_version;
  cfg["experiment"] = rec.resolved_config.experiment;
  cfg["seed"] = rec.resolved_config.seed;
  cfg["format"] = rec.resolved_config.format;
  cfg["out"] = rec.resolved_config.out_path;
  cfg["params"] = json::object();
  for (const auto& [k, v] : rec.resolved_config.params) cfg["params"][k] = v;

  json j;
  j["experiment"] = rec.experiment;
  j["config"] = cfg;
  j["metrics"] = json::object();
  for (const auto& [k, v] : rec.metrics) j["metrics"][k] = v;
  for (const auto& [k, v] : rec.text_metrics) j["metrics"][k] = v;
  j["version"] = rec.version;
  j["timestamp"] = rec.timestamp;
  return j;
}

void flatten(const json& j, const std::string& prefix,
             std::map<std::string, std::string>& out) {
  if (j.is_object()) {
    for (auto it = j.begin(); it != j.end(); ++it)
      flatten(it.value(), prefix.empty() ? it.key() : prefix + "." + it.key(),
              out);
  } else if (j.is_string()) {
    out[prefix] = j.get<std::string>();
  } else {
    out[prefix] = j.dump();
  }
}

std::string csv_escape(const std::string& s) {
  if (s.find_first_of(",\"\n") == std::string::npos) return s;
  std::string q = "\"";
  for (char c : s) {
    if (c == '"') q += "\"\"";
    else q += c;
  }
  q += "\"";
  return q;
}

}  // namespace

void emit(const ResultRecord& record, const std::string& format,
          std::ostream& os) {
  json j = record_to_json(record);
  if (format == "json") {
    os << j.dump(2) << "\n";
    return;
  }
  if (format == "csv") {
    std::map<std::string, std::string> flat;
    flatten(j, "", flat);
    bool first = true;
    for (const auto& [k, v] : flat) {
      os << (first ? "" : ",") << csv_escape(k);
      first = false;
    }
    os << "\n";
    first = true;
    for (const auto& [k, v] : flat) {
      os << (first ? "" : ",") << csv_escape(v);
      first = false;
    }
    os << "\n";
    return;
  }
  throw ValidationError("field 'format' must be json or csv");
}

void emit_to_path(const ResultRecord& record) {
  const std::string& path = record.resolved_config.out_path;
  if (path.empty()) {
    emit(record, record.resolved_config.format, std::cout);
    return;
  }
  std::ofstream out(path);
  if (!out) throw std::runtime_error("cannot open output path: " + path);
  emit(record, record.resolved_config.format, out);
  out.flush();
  if (!out) throw std::runtime_error("write failed for path: " + path);
}

}  // namespace qprlab
