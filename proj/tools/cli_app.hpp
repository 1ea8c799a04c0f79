#pragma once

// Command-line front end. run() parses arguments, dispatches one subcommand
// and writes a JSON run report. Exit codes: 0 all checks pass, 1 a check
// failed, 2 precondition violated, 3 parse or I/O error.

#include <openssl/evp.h>

#include <chrono>
#include <cstdio>
#include <fstream>
#include <iomanip>
#include <optional>
#include <ostream>
#include <sstream>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "json.hpp"
#include "transrad/io/matrix_file.hpp"
#include "transrad/transrad.hpp"

namespace transrad::cli {

using json = nlohmann::json;

enum Exit : int { kPass = 0, kChecksFailed = 1, kPrecondition = 2, kParseError = 3 };

inline int exit_code_for(ErrorCode code) {
  switch (code) {
    case ErrorCode::ParseError:
      return kParseError;
    case ErrorCode::NonConvergence:
    case ErrorCode::CertificateNotFound:
    case ErrorCode::NumericalFailure:
      return kChecksFailed;
    default:
      return kPrecondition;
  }
}

inline std::string sha256_hex(const std::string& bytes) {
  unsigned char digest[EVP_MAX_MD_SIZE];
  unsigned int len = 0;
  if (EVP_Digest(bytes.data(), bytes.size(), digest, &len, EVP_sha256(), nullptr) != 1) {
    throw Error(ErrorCode::NumericalFailure, "sha256 failed");
  }
  std::ostringstream hex;
  for (unsigned int i = 0; i < len; ++i) hex << std::hex << std::setw(2) << std::setfill('0') << int(digest[i]);
  return hex.str();
}

inline json complex_json(Complex z) { return json::array({z.real(), z.imag()}); }

struct Flags {
  std::string t_path;
  std::string a_path;
  double tol_identity = ToleranceSet{}.identity_tol;
  double tol_opt = ToleranceSet{}.opt_tol;
  int starts = 16;
  std::uint64_t seed = 0;
  int samples = 10000;
  int theta_steps = 512;
  bool oracle = false;
  bool tilde = false;
  bool williams = false;
  int max_iter = 500;
  std::string start_path;
  std::string dump_path;
  std::string output_path;
  bool quiet = false;
};

class Report {
 public:
  explicit Report(std::string command) { doc_["command"] = std::move(command); }

  void input(const std::string& name, const std::string& path, const std::string& bytes) {
    doc_["inputs"][name] = {{"path", path}, {"sha256", sha256_hex(bytes)}};
  }

  json& parameters() { return doc_["parameters"]; }
  json& results() { return doc_["results"]; }

  void check(const std::string& name, bool pass, double gap, double tolerance) {
    checks_.push_back({{"name", name}, {"status", pass ? "pass" : "fail"}, {"gap", gap}, {"tolerance", tolerance}});
    failed_ = failed_ || !pass;
  }

  void skip(const std::string& name, const std::string& reason) {
    checks_.push_back({{"name", name}, {"status", "skipped"}, {"reason", reason}});
  }

  void error(const Error& e) {
    doc_["error"] = {{"code", to_string(e.code())}, {"message", e.what()}};
    error_exit_ = exit_code_for(e.code());
  }

  void headline(double v) { headline_ = v; }

  [[nodiscard]] int exit_code() const {
    if (error_exit_) return *error_exit_;
    return failed_ ? kChecksFailed : kPass;
  }

  json finish(double wall_seconds) {
    doc_["checks"] = checks_;
    doc_["exit_code"] = exit_code();
    doc_["wall_clock_seconds"] = wall_seconds;
    return doc_;
  }

  [[nodiscard]] std::optional<double> headline() const { return headline_; }

 private:
  json doc_ = json::object();
  json checks_ = json::array();
  bool failed_ = false;
  std::optional<int> error_exit_;
  std::optional<double> headline_;
};

namespace detail {

inline RadiusOptions radius_options(const Flags& f) {
  RadiusOptions opt;
  opt.starts = f.starts;
  opt.seed = f.seed;
  return opt;
}

inline json radius_json(const RadiusResult& r) {
  return {{"value", r.value},
          {"maximizer", io::vector_to_json(gauge_fixed(r.maximizer.vec()))},
          {"lambda", complex_json(r.report.lambda)},
          {"stationary_residual", r.stationary_residual},
          {"starts_used", r.starts_used},
          {"converged_starts", r.converged_starts},
          {"converged", r.converged},
          {"variant", to_string(r.variant)}};
}

inline json certificate_json(const StationaryCertificate& c) {
  return {{"f", io::vector_to_json(gauge_fixed(c.f.vec()))},
          {"lambda", complex_json(c.lambda)},
          {"h_norm", c.h_norm},
          {"residual", c.residual},
          {"is_stationary", c.is_stationary},
          {"iterations", c.iterations}};
}

inline void stationarity_check(Report& rep, const OperatorPair& pair, const StationaryCertificate& c) {
  rep.check("stationarity", c.is_stationary, c.residual, pair.tol().opt_tol * std::max(1.0, c.h_norm * c.h_norm));
}

inline UnitVector start_vector(const Flags& f, const OperatorPair& pair, Report& rep) {
  if (!f.start_path.empty()) {
    const std::string bytes = io::read_text(f.start_path);
    rep.input("start", f.start_path, bytes);
    Vector v = io::parse_vector(bytes);
    if (v.size() != pair.n()) throw Error(ErrorCode::DimensionMismatch, "start vector differs in dimension");
    return UnitVector(std::move(v));
  }
  return radius(pair, radius_options(f)).maximizer;
}

inline void cmd_radius(const Flags& f, const OperatorPair& pair, Report& rep) {
  rep.parameters()["oracle"] = f.oracle;
  rep.parameters()["tilde"] = f.tilde;
  const RadiusOptions opt = radius_options(f);
  const RadiusResult r = f.tilde ? radius_tilde(pair, opt) : radius(pair, opt);
  rep.results() = radius_json(r);
  rep.headline(r.value);
  rep.check("converged", r.converged, 0.0, 0.0);
  if (!f.tilde) stationarity_check(rep, pair, stationarity_certificate(pair, r.maximizer));
  if (f.oracle) {
    if (pair.n() != 2) {
      rep.skip("oracle", "UnsupportedDimension: the grid oracle needs n = 2");
    } else {
      OracleConfig cfg;
      cfg.seed = f.seed;
      const OracleResult o = oracle_radius(pair, f.tilde ? Variant::Tilde : Variant::Standard, cfg);
      const double gap = std::abs(r.value - o.value);
      rep.results()["oracle"] = {{"value", o.value}, {"gap", gap}, {"excluded", o.excluded}};
      rep.check("oracle", gap <= 5e-3, gap, 5e-3);
    }
  }
}

inline void cmd_translate(const Flags& f, const OperatorPair& pair, Report& rep) {
  TranslationOptions opt;
  opt.seed = f.seed;
  const TranslationResult t = minimal_translation(pair, opt);
  rep.results() = {{"lambda0", complex_json(t.lambda0)},
                   {"min_norm", t.min_norm},
                   {"probe_gap", t.probe_gap},
                   {"search_radius", t.search_radius},
                   {"evaluations", t.iterations}};
  rep.headline(t.min_norm);
  const double tol = pair.tol().identity_tol * std::max(1.0, t.min_norm);
  rep.check("probe_optimality", t.probe_gap <= tol, t.probe_gap, tol);
}

inline void cmd_stationary(const Flags& f, const OperatorPair& pair, Report& rep) {
  rep.parameters()["max_iter"] = f.max_iter;
  const UnitVector start = start_vector(f, pair, rep);
  const StationaryCertificate c = find_stationary(pair, start, f.max_iter);
  rep.results() = certificate_json(c);
  rep.headline(c.h_norm);
  stationarity_check(rep, pair, c);
}

inline void cmd_decompose(const Flags& f, const OperatorPair& pair, Report& rep) {
  rep.parameters()["max_iter"] = f.max_iter;
  const UnitVector start = start_vector(f, pair, rep);
  // The eigen-relation errors equal the stationarity residual, so certify
  // well below identity_tol.
  const StationaryCertificate c = find_stationary(pair, start, f.max_iter, 1e-3 * pair.tol().identity_tol);
  rep.results()["stationary"] = certificate_json(c);
  const Decomposition d = selfadjoint_decomposition(pair, c);
  rep.results()["decomposition"] = {{"g1", io::vector_to_json(d.g1)},
                                    {"g2", io::vector_to_json(d.g2)},
                                    {"lambda", complex_json(d.lambda)},
                                    {"h_norm", d.h_norm},
                                    {"eigen_error1", d.eigen_error1},
                                    {"eigen_error2", d.eigen_error2},
                                    {"reconstruction_error", d.reconstruction_error},
                                    {"scale", d.scale}};
  rep.headline(d.h_norm);
  const double tol = pair.tol().identity_tol * d.scale;
  rep.check("eigen_relations", d.verified, std::max(d.eigen_error1, d.eigen_error2), tol);
  rep.check("reconstruction", d.reconstruction_error <= 1e-10, d.reconstruction_error, 1e-10);
}

inline void cmd_states(const Flags& f, const OperatorPair& pair, Report& rep) {
  rep.parameters()["williams"] = f.williams;
  StateSupremumOptions opt;
  opt.starts = f.starts;
  opt.seed = f.seed;
  const StateSupremumResult s = state_supremum(pair, opt);
  const double m2 = s.radius_value * s.radius_value;
  const double gap = std::abs(s.best.value - m2);
  rep.results() = {{"supremum", s.best.value},
                   {"supremum_unseeded", s.best_unseeded},
                   {"radius_squared", m2},
                   {"rho", io::matrix_to_json(s.best.rho.matrix())},
                   {"starts_used", s.starts_used},
                   {"converged_starts", s.converged_starts}};
  rep.headline(s.best.value);
  const double tol = 1e-4 * std::max(1.0, m2);
  rep.check("supremum_equals_radius_squared", gap <= tol, gap, tol);
  if (f.williams) {
    const WilliamsResult w = williams_certificate(pair.T(), pair.tol());
    json wj = {{"holds", w.holds}, {"lambda0", complex_json(w.lambda0)}, {"norm_tt", w.norm_tt}};
    if (w.rho) {
      wj["rho"] = io::matrix_to_json(w.rho->matrix());
      wj["trace_rho_t"] = complex_json(w.trace_rho_t);
      wj["trace_rho_tt"] = w.trace_rho_tt;
    }
    rep.results()["williams"] = wj;
    if (!w.holds) rep.skip("williams", "lambda0 differs from 0: T is not at its minimal translation");
    else rep.check("williams", true, std::abs(w.trace_rho_t), pair.tol().opt_tol * std::max(1.0, pair.norm_T()));
  }
}

inline void cmd_wrange(const Flags& f, const OperatorPair& pair, Report& rep) {
  rep.parameters()["dump"] = f.dump_path;
  const WrangeDistance w = wrange_distance(pair.A(), f.theta_steps, pair.tol().opt_tol);
  rep.results()["wrange_distance"] = {{"distance", w.distance}, {"signed_value", w.signed_value}, {"theta", w.theta}};
  rep.headline(w.distance);
  const Circle spec = spectrum_radius(pair.T());
  rep.results()["spectrum_circle"] = {{"center", complex_json(spec.center)}, {"radius", spec.radius}};
  if (!pair.invertible()) {
    rep.skip("generalized_range", "SingularDirection: A is singular");
    return;
  }
  const PointCloud cloud = sample_generalized_range(pair, f.samples, f.seed);
  const Circle c = enclosing_circle(cloud);
  rep.results()["generalized_range"] = {
      {"points", cloud.points.size()}, {"center", complex_json(c.center)}, {"radius", c.radius}};
  if (!f.dump_path.empty()) {
    std::ofstream out(f.dump_path);
    if (!out) throw Error(ErrorCode::ParseError, "cannot write " + f.dump_path);
    out << "re,im\n" << std::setprecision(17);
    for (const Complex& z : cloud.points) out << z.real() << ',' << z.imag() << '\n';
  }
}

inline void cmd_chain(const Flags& f, const OperatorPair& pair, Report& rep) {
  ChainOptions opt;
  opt.samples = f.samples;
  opt.seed = f.seed;
  opt.starts = f.starts;
  const ChainReport c = chain_check(pair, opt);
  rep.results() = {{"standard", c.standard},
                   {"lower", c.lower},
                   {"m_sampled", c.m_sampled},
                   {"wrange_distance", c.wrange_distance},
                   {"tilde_applicable", c.tilde_applicable}};
  if (c.tilde) rep.results()["tilde"] = *c.tilde;
  rep.headline(c.standard);
  rep.check("lower_link", c.lower_gap <= c.tolerance, c.lower_gap, c.tolerance);
  if (c.tilde_applicable) rep.check("upper_link", c.upper_gap <= c.tolerance, c.upper_gap, c.tolerance);
  else rep.skip("upper_link", "NumericalRangeZero: 0 lies in W(A)");
}

inline void cmd_suite(const Flags& f, const OperatorPair& pair, Report& rep) {
  require_invertible(pair);
  const ToleranceSet& tol = pair.tol();
  const RadiusOptions opt = radius_options(f);
  const RadiusResult r = radius(pair, opt);
  json& res = rep.results();
  res["radius"] = radius_json(r);
  rep.headline(r.value);
  rep.check("radius_converged", r.converged, 0.0, 0.0);
  const double scale = std::max(1.0, r.value);

  if (pair.wrange_distance() > tol.rank_tol) {
    const RadiusResult rt = radius_tilde(pair, opt);
    res["radius_tilde"] = radius_json(rt);
    const double gap = r.value - rt.value;
    rep.check("tilde_dominates", gap <= 10.0 * tol.opt_tol * scale, gap, 10.0 * tol.opt_tol * scale);
    if (pair.A() == Matrix::Identity(pair.n(), pair.n())) {
      const double eq = std::abs(gap);
      rep.check("tilde_equals_standard", eq <= 1e-6 * scale, eq, 1e-6 * scale);
    }
  } else {
    rep.skip("tilde_dominates", "NumericalRangeZero: 0 lies in W(A)");
  }

  TranslationOptions topt;
  topt.seed = f.seed;
  const TranslationResult t = minimal_translation(pair, topt);
  res["translation"] = {{"lambda0", complex_json(t.lambda0)}, {"min_norm", t.min_norm}, {"probe_gap", t.probe_gap}};
  const double eq = translation_radius_equality(t, r);
  rep.check("translation_equals_radius", eq <= 1e-5 * scale, eq, 1e-5 * scale);

  const StationaryCertificate c = stationarity_certificate(pair, r.maximizer);
  res["stationarity"] = certificate_json(c);
  stationarity_check(rep, pair, c);

  if (r.report.h.norm() > tol.rank_tol) {
    const DualityReport d = adjoint_duality_check(pair, r, opt);
    res["duality"] = {{"gap", d.gap},
                      {"adjoint_radius", d.adjoint_radius},
                      {"deviation_at_h", d.deviation_at_h},
                      {"lambda_gap", d.lambda_gap}};
    rep.check("adjoint_duality", d.gap <= 10.0 * tol.opt_tol * scale, d.gap, 10.0 * tol.opt_tol * scale);
  } else {
    rep.skip("adjoint_duality", "DegenerateMaximizer: T is a multiple of A");
  }

  ChainOptions copt;
  copt.samples = f.samples;
  copt.seed = f.seed;
  copt.starts = f.starts;
  const ChainReport ch = chain_check(pair, copt);
  res["chain"] = {{"lower", ch.lower}, {"m_sampled", ch.m_sampled}, {"wrange_distance", ch.wrange_distance}};
  rep.check("chain_lower_link", ch.lower_gap <= ch.tolerance, ch.lower_gap, ch.tolerance);
  if (ch.tilde_applicable) rep.check("chain_upper_link", ch.upper_gap <= ch.tolerance, ch.upper_gap, ch.tolerance);
  else rep.skip("chain_upper_link", "NumericalRangeZero: 0 lies in W(A)");

  StateSupremumOptions sopt;
  sopt.starts = f.starts;
  sopt.seed = f.seed;
  const StateSupremumResult s = state_supremum(pair, sopt);
  const double m2 = s.radius_value * s.radius_value;
  const double sgap = std::abs(s.best.value - m2);
  res["states"] = {{"supremum", s.best.value}, {"radius_squared", m2}};
  rep.check("state_supremum", sgap <= 1e-4 * std::max(1.0, m2), sgap, 1e-4 * std::max(1.0, m2));
}

}  // namespace detail

/// Runs one command. `args` excludes the program name.
inline int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  CLI::App app{"Translatable radius toolkit", "transrad"};
  app.require_subcommand(1);
  Flags f;
  const auto start_time = std::chrono::steady_clock::now();

  struct Command {
    const char* name;
    const char* help;
    void (*fn)(const Flags&, const OperatorPair&, Report&);
  };
  const std::vector<Command> commands = {
      {"radius", "M_T(A) by multi-start ascent", detail::cmd_radius},
      {"suite", "all checks on one pair", detail::cmd_suite},
      {"translate", "minimal-norm translation", detail::cmd_translate},
      {"stationary", "find a stationary distance vector", detail::cmd_stationary},
      {"decompose", "eigenvector decomposition for selfadjoint pairs", detail::cmd_decompose},
      {"states", "supremum over density matrices", detail::cmd_states},
      {"wrange", "numerical and generalized ranges", detail::cmd_wrange},
      {"chain", "chain inequality", detail::cmd_chain},
  };
  std::vector<CLI::App*> subs;
  for (const Command& c : commands) {
    CLI::App* sub = app.add_subcommand(c.name, c.help);
    sub->add_option("T", f.t_path, "matrix file for T")->required();
    sub->add_option("A", f.a_path, "matrix file for A")->required();
    sub->add_option("--tol-identity", f.tol_identity, "identity tolerance")->capture_default_str();
    sub->add_option("--tol-opt", f.tol_opt, "optimization tolerance")->capture_default_str();
    sub->add_option("--starts", f.starts, "random starts")->capture_default_str();
    sub->add_option("--seed", f.seed, "seed")->capture_default_str();
    sub->add_option("--samples", f.samples, "range samples")->capture_default_str();
    sub->add_option("--theta-steps", f.theta_steps, "angle grid for W(A)")->capture_default_str();
    sub->add_option("--output", f.output_path, "write the report here");
    sub->add_flag("--quiet", f.quiet, "print only the headline value");
    if (std::string(c.name) == "radius") {
      sub->add_flag("--oracle", f.oracle, "compare with the n = 2 grid oracle");
      sub->add_flag("--tilde", f.tilde, "use the (Tf,f)/(Af,f) coefficient");
    }
    if (std::string(c.name) == "stationary" || std::string(c.name) == "decompose") {
      sub->add_option("--start", f.start_path, "vector file for the start (default: radius maximizer)");
      sub->add_option("--max-iter", f.max_iter, "iteration cap")->capture_default_str();
    }
    if (std::string(c.name) == "states") sub->add_flag("--williams", f.williams, "Williams certificate for T");
    if (std::string(c.name) == "wrange") sub->add_option("--dump", f.dump_path, "CSV of sampled points");
    subs.push_back(sub);
  }

  std::vector<std::string> argv_store{"transrad"};
  argv_store.insert(argv_store.end(), args.begin(), args.end());
  std::vector<char*> argv;
  for (std::string& s : argv_store) argv.push_back(s.data());
  try {
    app.parse(static_cast<int>(argv.size()), argv.data());
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e, out, err);
  } catch (const CLI::ParseError& e) {
    app.exit(e, out, err);
    return kParseError;
  }

  std::size_t which = 0;
  while (!subs[which]->parsed()) ++which;
  Report rep(commands[which].name);
  json& p = rep.parameters();
  p = {{"tol_identity", f.tol_identity}, {"tol_opt", f.tol_opt}, {"starts", f.starts}, {"seed", f.seed},
       {"samples", f.samples}, {"theta_steps", f.theta_steps}};

  try {
    const std::string t_bytes = io::read_text(f.t_path);
    const std::string a_bytes = io::read_text(f.a_path);
    rep.input("T", f.t_path, t_bytes);
    rep.input("A", f.a_path, a_bytes);
    ToleranceSet tol;
    tol.identity_tol = f.tol_identity;
    tol.opt_tol = f.tol_opt;
    const OperatorPair pair(io::parse_matrix(t_bytes), io::parse_matrix(a_bytes), tol);
    commands[which].fn(f, pair, rep);
  } catch (const Error& e) {
    rep.error(e);
  }

  const double wall = std::chrono::duration<double>(std::chrono::steady_clock::now() - start_time).count();
  const json doc = rep.finish(wall);
  const std::string text = doc.dump(2);
  if (!f.output_path.empty()) {
    std::ofstream file(f.output_path);
    if (!file) {
      err << "cannot write " << f.output_path << '\n';
      return kParseError;
    }
    file << text << '\n';
  }
  if (f.quiet) {
    if (rep.headline()) out << std::setprecision(17) << *rep.headline() << '\n';
    else if (doc.contains("error")) err << doc["error"]["message"].get<std::string>() << '\n';
  } else {
    out << text << '\n';
  }
  return rep.exit_code();
}

}  // namespace transrad::cli
