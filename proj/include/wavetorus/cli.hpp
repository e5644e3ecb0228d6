#pragma once

// Configuration parsing and command orchestration for the wavetorus tool.
//
// Config files are JSON objects; unknown keys are rejected with their path.
//   { "M": 24, "sigma": 1, "oversample": 4, "seed": 12345,
//     "beta": 0.1 | {"start": 0.1, "factor": 0.5, "floor": 1e-6},
//     "newton": {"tol": 1e-10, "max_iter": 40, "line_search": true},
//     "nl": {"s": 3, "a": [{"j": 0, "c": 1}, {"j": 1, "c_sin": 0.5}],
//            "m": {"kind": "tanh", "alpha": 1, "bound": 1}, "b": [...]},
//     "initial": "field.json", "forcing": "field.json",
//     "multi": {...}, "verify": {...}, "norms": {...}, "mms": {...},
//     "linking": {...}, "apriori_bound": 10 }

#include <cstdint>
#include <filesystem>
#include <fstream>
#include <iomanip>
#include <iostream>
#include <utility>
#include <optional>
#include <set>
#include <sstream>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

#include "wavetorus/continuation.hpp"
#include "wavetorus/field_io.hpp"
#include "wavetorus/linking.hpp"
#include "wavetorus/multiplicity.hpp"
#include "wavetorus/nonlinearity.hpp"
#include "wavetorus/solver.hpp"
#include "wavetorus/verify.hpp"

namespace wavetorus::cli {

inline constexpr const char* kVersion = "0.1.0";

enum ExitCode : int { kOk = 0, kConfigError = 2, kSolverFailure = 3, kViolation = 4 };

inline const std::vector<std::string>& commands() {
  static const std::vector<std::string> names{"solve", "continue", "multi", "verify", "norms", "mms", "linking"};
  return names;
}

inline bool is_randomized(const std::string& command) {
  return command == "multi" || command == "verify" || command == "mms" || command == "linking";
}

struct MultiConfig {
  int n_seeds = 32;
  double dedup_threshold = 0.99;
};

struct VerifyConfig {
  std::vector<std::string> suites{"hy", "gn", "embedding", "holder", "box", "roundtrip", "h1", "tail"};
  int size = 1000;
  int M = 32;
  double decay = 0.25;
  std::vector<double> hy_p{4.0 / 3.0, 1.5, 2.0};
  std::vector<double> gn_p{3.0, 4.0};
  std::vector<double> embedding_s{0.5, 2.0 / 3.0};
  double gamma = 0.6, gamma_prime = 0.5;
  double box_p = 2.0, box_gamma = 0.45;
  std::vector<int> tail_T{8, 16, 32, 64};
};

struct NormsConfig {
  std::string field;
  std::vector<double> p{2, 4};
  std::vector<double> s{0.5, 1.0};
  std::vector<double> q{1, 2};
  std::vector<double> gamma{0.5};
};

struct MmsConfig {
  double decay = 0.5;
  std::vector<int> M{8, 12, 16, 20, 24};
  double beta = 1e-3;
  double amplitude = 0.25;
};

struct LinkingConfig {
  std::vector<int> l{4, 8, 12, 16};
  int n_starts = 8;
  std::vector<double> rho{0.05, 0.1, 0.2};
  int sphere_samples = 64;
};

struct RunConfig {
  std::string command;
  int M = 24;
  int sigma = 1;
  double oversample = kDefaultOversample;
  BetaSchedule beta;
  NewtonOptions newton;
  NonlinearitySpec nl = default_cubic_spec();
  std::optional<std::uint64_t> seed;
  std::optional<std::string> initial;
  std::optional<std::string> forcing;
  MultiConfig multi;
  VerifyConfig verify;
  NormsConfig norms;
  MmsConfig mms;
  LinkingConfig linking;
  double apriori_bound = 10;
  std::string out_dir = "out";
  nlohmann::json source;  ///< the parsed document, hashed for provenance
};

namespace detail {

using nlohmann::json;

inline Error parse_error(const std::string& path, const std::string& what) {
  return Error(ErrorCode::ParseError, path + ": " + what);
}

inline void allow_keys(const json& obj, const std::string& path, std::initializer_list<const char*> keys) {
  if (!obj.is_object()) throw parse_error(path, "expected an object");
  for (auto it = obj.begin(); it != obj.end(); ++it) {
    bool known = false;
    for (const char* k : keys) known = known || it.key() == k;
    if (!known) throw parse_error(path.empty() ? it.key() : path + "." + it.key(), "unknown key");
  }
}

template <class T>
void read(const json& obj, const char* key, const std::string& path, T& out) {
  if (!obj.contains(key)) return;
  const std::string where = path.empty() ? key : path + "." + key;
  try {
    out = obj.at(key).get<T>();
  } catch (const json::exception&) {
    throw parse_error(where, "wrong type");
  }
}

inline TrigPolynomial read_trig(const json& arr, const std::string& path) {
  if (!arr.is_array()) throw parse_error(path, "expected an array of terms");
  std::vector<TrigTerm> terms;
  for (std::size_t i = 0; i < arr.size(); ++i) {
    const std::string where = path + "[" + std::to_string(i) + "]";
    allow_keys(arr[i], where, {"j", "c", "c_sin"});
    TrigTerm t;
    read(arr[i], "j", where, t.j);
    read(arr[i], "c", where, t.c);
    read(arr[i], "c_sin", where, t.c_sin);
    if (t.j < 0) throw parse_error(where + ".j", "must be >= 0");
    terms.push_back(t);
  }
  return TrigPolynomial(std::move(terms));
}

inline NonlinearitySpec read_nl(const json& obj, const std::string& path) {
  allow_keys(obj, path, {"s", "a", "m", "b"});
  NonlinearitySpec spec = default_cubic_spec();
  read(obj, "s", path, spec.s);
  if (obj.contains("a")) spec.a = read_trig(obj["a"], path + ".a");
  if (obj.contains("b")) spec.b = read_trig(obj["b"], path + ".b");
  if (obj.contains("m")) {
    const auto& m = obj["m"];
    const std::string where = path + ".m";
    if (m.is_null()) {
      spec.m.reset();
    } else {
      allow_keys(m, where, {"kind", "alpha", "bound"});
      std::string kind = "tanh";
      read(m, "kind", where, kind);
      if (kind == "none") {
        spec.m.reset();
      } else if (kind == "tanh") {
        TanhPart part;
        read(m, "alpha", where, part.alpha);
        read(m, "bound", where, part.bound);
        spec.m = part;
      } else {
        throw parse_error(where + ".kind", "unknown kind '" + kind + "' (tanh or none)");
      }
    }
  }
  return spec;
}

}  // namespace detail

/// Parses and validates a config document. `command` (from the command line)
/// wins over a "command" key in the file, but the two may not disagree.
inline RunConfig parse_config(const std::string& text, const std::string& command = "") {
  using detail::read;
  nlohmann::json doc;
  try {
    doc = nlohmann::json::parse(text);
  } catch (const nlohmann::json::parse_error& e) {
    throw Error(ErrorCode::ParseError, std::string("config: ") + e.what());
  }
  detail::allow_keys(doc, "", {"command", "M", "sigma", "oversample", "beta", "newton", "nl", "seed", "initial",
                               "forcing", "multi", "verify", "norms", "mms", "linking", "apriori_bound", "out"});
  RunConfig cfg;
  cfg.source = doc;
  read(doc, "command", "", cfg.command);
  if (!command.empty()) {
    if (!cfg.command.empty() && cfg.command != command)
      throw detail::parse_error("command", "config says '" + cfg.command + "' but '" + command + "' was requested");
    cfg.command = command;
  }
  if (cfg.command.empty()) throw detail::parse_error("command", "missing");
  if (std::find(commands().begin(), commands().end(), cfg.command) == commands().end())
    throw detail::parse_error("command", "unknown command '" + cfg.command + "'");

  read(doc, "M", "", cfg.M);
  read(doc, "sigma", "", cfg.sigma);
  read(doc, "oversample", "", cfg.oversample);
  read(doc, "apriori_bound", "", cfg.apriori_bound);
  read(doc, "out", "", cfg.out_dir);
  if (doc.contains("seed")) {
    std::uint64_t seed = 0;
    read(doc, "seed", "", seed);
    cfg.seed = seed;
  }
  for (auto [key, slot] : {std::pair{"initial", &cfg.initial}, std::pair{"forcing", &cfg.forcing}}) {
    if (!doc.contains(key)) continue;
    std::string path;
    read(doc, key, "", path);
    *slot = path;
  }

  if (doc.contains("beta")) {
    const auto& b = doc["beta"];
    if (b.is_number()) {
      cfg.beta.start = b.get<double>();
    } else {
      detail::allow_keys(b, "beta", {"start", "factor", "floor"});
      read(b, "start", "beta", cfg.beta.start);
      read(b, "factor", "beta", cfg.beta.factor);
      read(b, "floor", "beta", cfg.beta.floor);
    }
  }
  if (doc.contains("newton")) {
    const auto& n = doc["newton"];
    detail::allow_keys(n, "newton", {"tol", "max_iter", "line_search", "dense_max_dof"});
    read(n, "tol", "newton", cfg.newton.tol);
    read(n, "max_iter", "newton", cfg.newton.max_iter);
    read(n, "line_search", "newton", cfg.newton.line_search);
    read(n, "dense_max_dof", "newton", cfg.newton.dense_max_dof);
  }
  if (doc.contains("nl")) cfg.nl = detail::read_nl(doc["nl"], "nl");
  if (doc.contains("multi")) {
    const auto& m = doc["multi"];
    detail::allow_keys(m, "multi", {"n_seeds", "dedup_threshold"});
    read(m, "n_seeds", "multi", cfg.multi.n_seeds);
    read(m, "dedup_threshold", "multi", cfg.multi.dedup_threshold);
  }
  if (doc.contains("verify")) {
    const auto& v = doc["verify"];
    detail::allow_keys(v, "verify", {"suites", "size", "M", "decay", "hy_p", "gn_p", "embedding_s", "gamma",
                                     "gamma_prime", "box_p", "box_gamma", "tail_T"});
    auto& c = cfg.verify;
    read(v, "suites", "verify", c.suites);
    read(v, "size", "verify", c.size);
    read(v, "M", "verify", c.M);
    read(v, "decay", "verify", c.decay);
    read(v, "hy_p", "verify", c.hy_p);
    read(v, "gn_p", "verify", c.gn_p);
    read(v, "embedding_s", "verify", c.embedding_s);
    read(v, "gamma", "verify", c.gamma);
    read(v, "gamma_prime", "verify", c.gamma_prime);
    read(v, "box_p", "verify", c.box_p);
    read(v, "box_gamma", "verify", c.box_gamma);
    read(v, "tail_T", "verify", c.tail_T);
    static const std::set<std::string> known{"hy", "gn", "embedding", "holder", "box", "roundtrip", "h1", "tail"};
    for (std::size_t i = 0; i < c.suites.size(); ++i)
      if (!known.count(c.suites[i]))
        throw detail::parse_error("verify.suites[" + std::to_string(i) + "]", "unknown suite '" + c.suites[i] + "'");
  }
  if (doc.contains("norms")) {
    const auto& n = doc["norms"];
    detail::allow_keys(n, "norms", {"field", "p", "s", "q", "gamma"});
    read(n, "field", "norms", cfg.norms.field);
    read(n, "p", "norms", cfg.norms.p);
    read(n, "s", "norms", cfg.norms.s);
    read(n, "q", "norms", cfg.norms.q);
    read(n, "gamma", "norms", cfg.norms.gamma);
  }
  if (doc.contains("mms")) {
    const auto& m = doc["mms"];
    detail::allow_keys(m, "mms", {"decay", "M", "beta", "amplitude"});
    read(m, "decay", "mms", cfg.mms.decay);
    read(m, "M", "mms", cfg.mms.M);
    read(m, "beta", "mms", cfg.mms.beta);
    read(m, "amplitude", "mms", cfg.mms.amplitude);
  }
  if (doc.contains("linking")) {
    const auto& l = doc["linking"];
    detail::allow_keys(l, "linking", {"l", "n_starts", "rho", "sphere_samples"});
    read(l, "l", "linking", cfg.linking.l);
    read(l, "n_starts", "linking", cfg.linking.n_starts);
    read(l, "rho", "linking", cfg.linking.rho);
    read(l, "sphere_samples", "linking", cfg.linking.sphere_samples);
  }

  if (cfg.M < 1) throw detail::parse_error("M", "must be >= 1");
  if (cfg.sigma != 1 && cfg.sigma != -1) throw detail::parse_error("sigma", "must be +1 or -1");
  if (!(cfg.oversample >= 2)) throw detail::parse_error("oversample", "must be >= 2");
  if (cfg.command == "continue") cfg.beta.validate();
  if (!(cfg.beta.start > 0)) throw detail::parse_error("beta.start", "must be > 0");
  if (is_randomized(cfg.command) && !cfg.seed)
    throw detail::parse_error("seed", "required for the randomized command '" + cfg.command + "'");
  if (cfg.command == "norms" && cfg.norms.field.empty()) throw detail::parse_error("norms.field", "missing");
  return cfg;
}

/// 64-bit FNV-1a of the compact JSON dump.
inline std::string config_hash(const nlohmann::json& doc) {
  std::uint64_t h = 0xcbf29ce484222325ull;
  for (unsigned char c : doc.dump()) {
    h ^= c;
    h *= 0x100000001b3ull;
  }
  std::ostringstream os;
  os << std::hex << std::setw(16) << std::setfill('0') << h;
  return os.str();
}

inline nlohmann::json provenance(const RunConfig& cfg) {
  return {{"config_hash", config_hash(cfg.source)},
          {"seed", cfg.seed ? nlohmann::json(*cfg.seed) : nlohmann::json(nullptr)},
          {"version", kVersion},
          {"command", cfg.command}};
}

namespace detail {

inline void write_text(const std::filesystem::path& path, const std::string& text) {
  std::ofstream out(path);
  if (!out) throw Error(ErrorCode::Io, "cannot open " + path.string() + " for writing");
  out << text;
}

inline void write_json(const std::filesystem::path& path, const json& doc) { write_text(path, doc.dump(2) + "\n"); }

inline std::string trace_csv(const ContinuationTrace& trace) {
  std::ostringstream os;
  os << std::setprecision(17) << "beta,residual_norm,I,v_c0,v_t_l2,v_tt_l2,w_h1,w_h2\n";
  for (const auto& r : trace.rows)
    os << r.beta << ',' << r.residual_norm << ',' << r.I_value << ',' << r.v_c0 << ',' << r.v_t_l2 << ','
       << r.v_tt_l2 << ',' << r.w_h1 << ',' << r.w_h2 << '\n';
  return os.str();
}

inline json solution_json(const PenalizedProblem<>& p, const SolutionState& s) {
  return {{"residual_norm", s.residual_norm},
          {"I", s.I_value},
          {"newton_iters", s.newton_iters},
          {"critical_identity_gap", critical_identity_gap(p, s.u)},
          {"residual_trace", s.residual_trace}};
}

inline PenalizedProblem<> make_problem(const RunConfig& cfg) {
  PenalizedProblem<> p{cfg.M, cfg.beta.start, cfg.sigma, make_nonlinearity(cfg.nl), std::nullopt, cfg.oversample};
  if (cfg.forcing) p.forcing = read_field(*cfg.forcing).resized(cfg.M);
  p.validate();
  return p;
}

inline SpectralField initial_field(const RunConfig& cfg) {
  return cfg.initial ? read_field(*cfg.initial).resized(cfg.M) : SpectralField(cfg.M);
}

inline int run_solve(const RunConfig& cfg, const std::filesystem::path& out, json& report) {
  const auto p = make_problem(cfg);
  try {
    const auto s = newton_solve(p, initial_field(cfg), cfg.newton);
    write_field(out / "solution.json", s.u);
    report["solution"] = solution_json(p, s);
    return kOk;
  } catch (const NewtonFailure& e) {
    write_field(out / "best.json", e.best().u);
    report["solution"] = solution_json(p, e.best());
    throw;
  }
}

inline int run_continue(const RunConfig& cfg, const std::filesystem::path& out, json& report) {
  const auto p = make_problem(cfg);
  const auto trace = continuation_beta(p, cfg.beta, initial_field(cfg), cfg.newton);
  write_text(out / "trace.csv", trace_csv(trace));
  if (!trace.solutions.empty()) write_field(out / "final.json", trace.solutions.back());
  report["rows"] = trace.rows.size();
  if (!trace.rows.empty()) report["apriori"] = to_json(apriori_monitor(trace, cfg.apriori_bound, cfg.oversample));
  if (!trace.completed()) {
    report["stalled_at"] = *trace.stalled_at;
    throw Error(ErrorCode::StallAt, trace.failure);
  }
  return kOk;
}

inline int run_multi(const RunConfig& cfg, const std::filesystem::path& out, json& report) {
  const auto p = make_problem(cfg);
  MultiSeedOptions opt;
  opt.n_seeds = cfg.multi.n_seeds;
  opt.dedup_threshold = cfg.multi.dedup_threshold;
  opt.seed = *cfg.seed;
  opt.newton = cfg.newton;
  if (cfg.initial) opt.extra_seeds.push_back(initial_field(cfg));
  const auto sols = multi_seed_search(p, opt);
  json list = json::array();
  for (std::size_t i = 0; i < sols.size(); ++i) {
    const std::string name = "solution_" + std::to_string(i) + ".json";
    write_field(out / name, sols[i].u);
    auto entry = solution_json(p, sols[i]);
    entry["file"] = name;
    entry["l2_norm"] = sols[i].u.l2_norm();
    list.push_back(entry);
  }
  report["solutions"] = list;
  return sols.empty() ? kSolverFailure : kOk;
}

inline int run_verify(const RunConfig& cfg, const std::filesystem::path& out, json& report) {
  const auto& v = cfg.verify;
  EnsembleSpec spec;
  spec.size = v.size;
  spec.M = v.M;
  spec.decay = v.decay;
  spec.seed = *cfg.seed;
  spec.oversample = cfg.oversample;
  json reports = json::array();
  int status = kOk;
  auto emit = [&](const InequalityReport& r, const std::string& tag) {
    reports.push_back(to_json(r));
    write_text(out / (tag + ".csv"), per_trial_csv(r));
    if (r.violation_count > 0) status = kViolation;
  };
  auto fmt = [](double x) {
    std::ostringstream os;
    os << x;
    return os.str();
  };
  for (const auto& suite : v.suites) {
    if (suite == "hy") {
      for (double p : v.hy_p) emit(check_hausdorff_young(spec, p), "hy_p" + fmt(p));
    } else if (suite == "gn") {
      for (double p : v.gn_p) emit(check_gn(spec, p), "gn_p" + fmt(p));
    } else if (suite == "embedding") {
      for (double s : v.embedding_s) emit(check_embedding(spec, s), "embedding_s" + fmt(s));
    } else if (suite == "holder") {
      emit(check_holder_to_sobolev(spec, v.gamma, v.gamma_prime), "holder");
    } else if (suite == "box") {
      emit(check_box_regularity(spec, v.box_p, v.box_gamma), "box");
    } else if (suite == "roundtrip") {
      emit(check_box_roundtrip(spec), "roundtrip");
    } else if (suite == "h1") {
      emit(check_h1_bound(spec), "h1");
    } else if (suite == "tail") {
      for (double s : v.embedding_s) {
        const auto t = embedding_tail_study(spec, s, v.tail_T);
        reports.push_back({{"name", "embedding_tail"}, {"study", to_json(t)}});
        if (!t.strictly_decreasing) status = kViolation;
      }
    }
  }
  report["reports"] = reports;
  return status;
}

inline int run_norms(const RunConfig& cfg, const std::filesystem::path&, json& report) {
  const auto u = read_field(cfg.norms.field);
  const auto& n = cfg.norms;
  std::vector<NormReport> rows;
  rows.push_back({"E", norm_E(u), {}, ""});
  const bool perp = relative_mass(u, SubspaceTag::Kernel) <= 1e-12;
  for (double s : n.s) {
    if (perp) rows.push_back({"Es", norm_Es(u, s), {{"s", s}}, ""});
    rows.push_back({"sobolev", sobolev_norm(u, s, SobolevConvention::Aniso), {{"s", s}}, "aniso"});
    rows.push_back({"sobolev", sobolev_norm(u, s, SobolevConvention::Ell1), {{"s", s}}, "ell1"});
  }
  for (double p : n.p) {
    rows.push_back({"Lp", norm_Lp(u, p, cfg.oversample), {{"p", p}}, "lebesgue"});
    rows.push_back({"Lp", norm_Lp(u, p, cfg.oversample, Measure::Normalized), {{"p", p}}, "normalized"});
  }
  rows.push_back({"C0", norm_C0(u, cfg.oversample), {}, ""});
  for (double q : n.q) rows.push_back({"lq", norm_lq(u, q), {{"q", q}}, ""});
  for (double g : n.gamma) rows.push_back({"holder", holder_estimate(u, g, cfg.oversample), {{"gamma", g}}, ""});
  json list = json::array();
  for (const auto& r : rows) list.push_back(to_json(r));
  report["norms"] = list;
  if (!perp) report["note"] = "field has kernel content; E^s norms skipped";
  return kOk;
}

inline int run_mms(const RunConfig& cfg, const std::filesystem::path& out, json& report) {
  MmsOptions opt;
  opt.amplitude = cfg.mms.amplitude;
  opt.sigma = cfg.sigma;
  opt.seed = *cfg.seed;
  opt.oversample = cfg.oversample;
  opt.newton = cfg.newton;
  const auto table = mms_run(make_nonlinearity(cfg.nl), cfg.mms.decay, cfg.mms.M, cfg.mms.beta, opt);
  report["mms"] = to_json(table);
  std::ostringstream csv;
  csv << std::setprecision(17) << "M,error_l2,residual_norm,newton_iters\n";
  for (const auto& r : table.rows)
    csv << r.M << ',' << r.error_l2 << ',' << r.residual_norm << ',' << r.newton_iters << '\n';
  write_text(out / "mms.csv", csv.str());
  for (const auto& r : table.rows)
    if (!r.failure.empty()) return kSolverFailure;
  for (std::size_t i = 1; i < table.rows.size(); ++i)
    if (!(table.rows[i].error_l2 < table.rows[i - 1].error_l2)) return kViolation;
  return kOk;
}

inline int run_linking(const RunConfig& cfg, const std::filesystem::path&, json& report) {
  const auto p = make_problem(cfg);
  LinkingOptions opt;
  opt.n_starts = cfg.linking.n_starts;
  opt.seed = *cfg.seed;
  opt.rho_values = cfg.linking.rho;
  opt.sphere_samples = cfg.linking.sphere_samples;
  const auto rep = linking_report(p, cfg.linking.l, opt);
  json rows = json::array();
  for (const auto& r : rep.rows) {
    json sphere = json::array();
    for (const auto& s : r.sphere) sphere.push_back({{"rho", s.rho}, {"inf", s.inf_value}});
    rows.push_back({{"l", r.l}, {"max", r.max_value}, {"grad_norm", r.ascent_grad_norm}, {"sphere", sphere}});
  }
  report["linking"] = {{"rows", rows}, {"nondecreasing", rep.nondecreasing}};
  return rep.nondecreasing ? kOk : kViolation;
}

inline int exit_code_for(ErrorCode code) {
  switch (code) {
    case ErrorCode::NoConvergence:
    case ErrorCode::SingularJacobian:
    case ErrorCode::StallAt:
      return kSolverFailure;
    default:
      return kConfigError;
  }
}

}  // namespace detail

/// Runs a parsed config, writing report.json (with a provenance block) and the
/// command's artifacts into cfg.out_dir. Failures also land in report.json
/// under "failure" as {code, message}.
inline int run(const RunConfig& cfg, std::ostream& log = std::cerr) {
  namespace fs = std::filesystem;
  const fs::path out(cfg.out_dir);
  std::error_code ec;
  fs::create_directories(out, ec);
  if (ec) {
    log << "error: Io: cannot create " << out << ": " << ec.message() << '\n';
    return kConfigError;
  }
  nlohmann::json report{{"provenance", provenance(cfg)}};
  int status = kOk;
  try {
    if (cfg.command == "solve") status = detail::run_solve(cfg, out, report);
    else if (cfg.command == "continue") status = detail::run_continue(cfg, out, report);
    else if (cfg.command == "multi") status = detail::run_multi(cfg, out, report);
    else if (cfg.command == "verify") status = detail::run_verify(cfg, out, report);
    else if (cfg.command == "norms") status = detail::run_norms(cfg, out, report);
    else if (cfg.command == "mms") status = detail::run_mms(cfg, out, report);
    else if (cfg.command == "linking") status = detail::run_linking(cfg, out, report);
  } catch (const Error& e) {
    report["failure"] = {{"code", to_string(e.code())}, {"message", e.what()}};
    log << "error: " << e.what() << '\n';
    status = detail::exit_code_for(e.code());
  } catch (const std::exception& e) {
    report["failure"] = {{"code", "Io"}, {"message", e.what()}};
    log << "error: " << e.what() << '\n';
    status = kConfigError;
  }
  report["exit_code"] = status;
  try {
    detail::write_json(out / "report.json", report);
  } catch (const Error& e) {
    log << "error: " << e.what() << '\n';
    return kConfigError;
  }
  return status;
}

}  // namespace wavetorus::cli
