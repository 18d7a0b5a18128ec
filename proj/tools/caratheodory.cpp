#include <cstdlib>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>

#include <CLI11.hpp>
#include <Eigen/Core>

#include "carath/herglotz.hpp"
#include "carath/kernel.hpp"
#include "carath/realization.hpp"
#include "carath/selftest.hpp"
#include "carath/serialize.hpp"

namespace {

using namespace carath;

constexpr const char* kVersion = "0.1.0";

enum Exit { kPass = 0, kFail = 1, kError = 2 };

struct Report {
  json j;
  std::string report_path;
  Report(const std::string& command, std::uint64_t seed) {
    j["command"] = command;
    j["inputs_digest"] = nullptr;
    j["outcome"] = "ERROR";
    j["metrics"] = json::object();
    j["artifacts"] = json::array();
    j["version"] = kVersion;
    j["seed"] = seed;
  }
  void metric(const std::string& k, double v) { j["metrics"][k] = v; }
  int finish(int code) {
    j["outcome"] = code == kPass ? "PASS" : (code == kFail ? "FAIL" : "ERROR");
    if (!report_path.empty()) {
      std::ofstream out(report_path);
      out << j.dump(2) << "\n";
    }
    std::cout << (code == kPass ? "PASS" : (code == kFail ? "FAIL" : "ERROR")) << "\n";
    return code;
  }
};

std::string read_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw std::runtime_error("cannot open: " + path);
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

std::uint64_t fnv1a(const std::string& s) {
  std::uint64_t h = 1469598103934665603ull;
  for (unsigned char c : s) {
    h ^= c;
    h *= 1099511628211ull;
  }
  return h;
}

json load_json(const std::string& path, std::uint64_t* digest) {
  const std::string body = read_file(path);
  if (digest) *digest ^= fnv1a(body);
  return json::parse(body);
}

void write_artifact(Report& rep, const std::string& path, const json& j) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw std::runtime_error("cannot write: " + path);
  out << j.dump(2) << "\n";
  rep.j["artifacts"].push_back(path);
}

std::string fmt_entry(Complex v) {
  std::ostringstream ss;
  if (std::abs(v.imag()) <= 1e-12 * (1.0 + std::abs(v.real()))) {
    ss << v.real();
  } else {
    ss << v.real() << (v.imag() < 0 ? "-" : "+") << std::abs(v.imag()) << "i";
  }
  return ss.str();
}

int cmd_check_kernel(const std::string& spec_path, const std::string& samples_path,
                     int random_sets, std::uint64_t seed, const std::string& report_path) {
  Report rep("check-kernel", seed);
  rep.report_path = report_path;
  std::uint64_t digest = 0;
  FunctionSpec phi = function_from_json(load_json(spec_path, &digest));

  std::vector<SampleSet> family;
  if (!samples_path.empty()) {
    family.push_back(samples_from_json(load_json(samples_path, &digest)).samples);
  } else {
    Rng rng(seed);
    for (int i = 0; i < random_sets; ++i) {
      SampleSet s;
      for (int p = 0; p < 6; ++p) s.points.push_back(rng.disk_point(0.9));
      family.push_back(std::move(s));
    }
  }
  rep.j["inputs_digest"] = digest;

  auto report = certify_positive_kernel(phi, family);
  const int nneg = negative_squares_estimate(phi, family);
  rep.metric("worst_eigenvalue", report.worst_eigenvalue);
  rep.metric("n_negative", nneg);
  std::cout << "worst eigenvalue " << report.worst_eigenvalue << ", negative squares >= "
            << nneg << "\n";
  if (!report.pass) {
    rep.j["witness"] = to_json(report.witness);
    return rep.finish(kFail);
  }
  return rep.finish(kPass);
}

int cmd_realize(const std::string& samples_path, const std::string& holdout_path,
                const std::string& out_path, const std::string& report_path) {
  Report rep("realize", 0);
  rep.report_path = report_path;
  std::uint64_t digest = 0;
  SamplesFile sf = samples_from_json(load_json(samples_path, &digest));
  if (sf.values.empty())
    throw std::runtime_error("realize: samples file must carry \"values\"");
  if (!sf.samples.contains_origin())
    throw std::runtime_error(
        "realize: the sample set must contain the origin (z = 0); C and D are "
        "built from the section at 0");
  rep.j["inputs_digest"] = digest;

  SynthesisResult syn;
  try {
    syn = synthesize(sf.samples, sf.values, DualityTag::BToDual, {});
  } catch (const std::domain_error& e) {
    std::cout << e.what() << "\n";
    rep.j["witness"] = e.what();
    GramMatrix g = gram_assemble(table_function(sf.samples.points, sf.values), sf.samples);
    rep.metric("n_negative", g.n_negative);
    std::cout << "negative squares >= " << g.n_negative << "\n";
    return rep.finish(kFail);
  }
  rep.metric("isometry_defect", syn.realization.isometry_defect);
  rep.metric("relation_defect", syn.relation_defect);

  FunctionSpec phi = as_function(syn.realization);
  std::vector<Complex> holdout;
  std::vector<Matrix> holdout_ref;
  if (!holdout_path.empty()) {
    SamplesFile hf = samples_from_json(load_json(holdout_path, &digest));
    holdout = hf.samples.points;
    holdout_ref = hf.values;
  }
  double herr = 0.0;
  for (std::size_t i = 0; i < holdout_ref.size(); ++i) {
    const Matrix ref = holdout_ref[i];
    herr = std::max(herr, spectral_norm(phi(holdout[i]) - ref) / (1.0 + spectral_norm(ref)));
  }
  rep.metric("holdout_max_rel_error", herr);

  if (!out_path.empty()) write_artifact(rep, out_path, to_json(syn.realization));
  std::cout << "isometry defect " << syn.realization.isometry_defect << ", relation defect "
            << syn.relation_defect << ", holdout error " << herr << "\n";
  return rep.finish(kPass);
}

int cmd_herglotz(const std::string& mode, const std::string& input_path, Complex z,
                 int n_min, int n_max, int grid_depth, int order, double tol,
                 const std::string& out_path, const std::string& report_path) {
  Report rep("herglotz-" + mode, 0);
  rep.report_path = report_path;
  std::uint64_t digest = 0;

  if (mode == "eval") {
    HerglotzMeasure mu = measure_from_json(load_json(input_path, &digest));
    rep.j["inputs_digest"] = digest;
    validate(mu);
    const Matrix v = herglotz_eval(mu, z);
    for (Eigen::Index i = 0; i < v.rows(); ++i) {
      for (Eigen::Index c = 0; c < v.cols(); ++c)
        std::cout << (c ? " " : "") << fmt_entry(v(i, c));
      std::cout << "\n";
    }
    return rep.finish(kPass);
  }

  RecoveryOptions opt;
  opt.n_min = n_min;
  opt.n_max = n_max;
  opt.grid_depth = grid_depth;

  if (mode == "recover") {
    FunctionSpec phi = function_from_json(load_json(input_path, &digest));
    rep.j["inputs_digest"] = digest;
    RecoveryResult rr;
    try {
      rr = recover(phi, opt);
    } catch (const std::domain_error& e) {
      std::cout << e.what() << "\n";
      rep.j["witness"] = e.what();
      return rep.finish(kFail);
    }
    rep.metric("validation_error", rr.validation_error);
    rep.metric("clip_magnitude", rr.clip_magnitude);
    rep.metric("atoms", static_cast<double>(rr.measure.atoms.size()));
    if (!out_path.empty()) write_artifact(rep, out_path, to_json(rr.measure));
    std::cout << "atoms " << rr.measure.atoms.size() << ", validation error "
              << rr.validation_error << "\n";
    return rep.finish(kPass);
  }

  if (mode == "roundtrip") {
    HerglotzMeasure mu = measure_from_json(load_json(input_path, &digest));
    rep.j["inputs_digest"] = digest;
    validate(mu);
    RecoveryResult rr;
    try {
      rr = recover(as_function(mu), opt);
    } catch (const std::domain_error& e) {
      std::cout << e.what() << "\n";
      rep.j["witness"] = e.what();
      return rep.finish(kFail);
    }
    auto ref = trig_moments(mu, order);
    auto got = trig_moments(rr.measure, order);
    double worst = 0.0;
    std::cout << "k  moment_dev\n";
    for (int k = 0; k <= order; ++k) {
      const double dev = spectral_norm(ref[k] - got[k]);
      worst = std::max(worst, dev);
      std::cout << k << "  " << dev << "\n";
    }
    rep.metric("max_moment_dev", worst);
    if (!out_path.empty()) write_artifact(rep, out_path, to_json(rr.measure));
    return rep.finish(worst <= tol ? kPass : kFail);
  }
  throw std::runtime_error("unknown herglotz mode: " + mode);
}

int cmd_selftest(const std::string& suite, std::uint64_t seed,
                 const std::string& report_path) {
  Report rep("selftest", seed);
  rep.report_path = report_path;
  rep.j["inputs_digest"] = fnv1a(suite);
  auto res = run_selftest(suite, seed);
  rep.metric("passed", res.passed);
  rep.metric("failed", res.failed);
  std::cout << "suite      passed  failed\n";
  std::cout << res.suite << "  " << res.passed << "  " << res.failed << "\n";
  for (const auto& f : res.failures) std::cout << "  FAIL " << f << "\n";
  return rep.finish(res.ok() ? kPass : kFail);
}

}  // namespace

int main(int argc, char** argv) {
  if (const char* nt = std::getenv("CARATHEODORY_NUM_THREADS"))
    Eigen::setNbThreads(std::max(1, std::atoi(nt)));

  CLI::App app{"Caratheodory function toolkit"};
  app.require_subcommand(1);
  app.set_version_flag("--version", kVersion);

  std::string spec_path, samples_path, holdout_path, out_path, report_path;
  std::string suite = "full", herglotz_mode;
  int random_sets = 20, n_min = 3, n_max = 12, grid_depth = 10, order = 8;
  std::uint64_t seed = 0;
  double zr = 0.0, zi = 0.0, tol = 1e-3;

  auto* ck = app.add_subcommand("check-kernel", "Certify kernel positivity on sample sets");
  ck->add_option("spec", spec_path, "function spec JSON")->required();
  ck->add_option("samples", samples_path, "sample set JSON");
  ck->add_option("--random", random_sets, "number of random sample sets");
  ck->add_option("--seed", seed, "RNG seed");
  ck->add_option("--report", report_path, "write RunReport JSON here");

  auto* rz = app.add_subcommand("realize", "Synthesize an isometric realization from samples");
  rz->add_option("samples", samples_path, "samples-with-values JSON")->required();
  rz->add_option("--holdout", holdout_path, "held-out samples-with-values JSON");
  rz->add_option("--out", out_path, "write realization JSON here");
  rz->add_option("--report", report_path, "write RunReport JSON here");

  auto* hg = app.add_subcommand("herglotz", "Measure representation: eval | recover | roundtrip");
  hg->add_option("mode", herglotz_mode, "eval | recover | roundtrip")->required();
  hg->add_option("input", spec_path, "measure or function JSON")->required();
  hg->add_option("--re", zr, "evaluation point, real part");
  hg->add_option("--im", zi, "evaluation point, imaginary part");
  hg->add_option("--radii", n_max, "finest radius 1 - 2^-n");
  hg->add_option("--grid", grid_depth, "dyadic grid depth");
  hg->add_option("--order", order, "moment order for roundtrip");
  hg->add_option("--tol", tol, "roundtrip moment tolerance");
  hg->add_option("--out", out_path, "write measure JSON here");
  hg->add_option("--report", report_path, "write RunReport JSON here");

  auto* st = app.add_subcommand("selftest", "Run property suites");
  st->add_option("--suite", suite, "core | stieltjes | helly | full");
  st->add_option("--seed", seed, "RNG seed");
  st->add_option("--report", report_path, "write RunReport JSON here");

  CLI11_PARSE(app, argc, argv);

  try {
    if (ck->parsed())
      return cmd_check_kernel(spec_path, samples_path, random_sets, seed, report_path);
    if (rz->parsed()) return cmd_realize(samples_path, holdout_path, out_path, report_path);
    if (hg->parsed())
      return cmd_herglotz(herglotz_mode, spec_path, Complex(zr, zi), n_min, n_max,
                          grid_depth, order, tol, out_path, report_path);
    if (st->parsed()) return cmd_selftest(suite, seed, report_path);
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kError;
  }
  return kError;
}
