#include "augsc/augment.hpp"
#include "augsc/geometry.hpp"
#include "augsc/io.hpp"
#include "augsc/metrics.hpp"
#include "augsc/parallel.hpp"
#include "augsc/rng.hpp"
#include "augsc/semi.hpp"
#include "augsc/solvers.hpp"
#include "augsc/spectral.hpp"
#include "augsc/sweep.hpp"
#include "augsc/synth.hpp"
#include "augsc/types.hpp"
#include "augsc/version.hpp"

#include "CLI11.hpp"
#include "json.hpp"

#include <cmath>
#include <cstdint>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <limits>
#include <string>
#include <vector>

namespace fs = std::filesystem;
using nlohmann::json;
using namespace augsc;

namespace {

std::string fnv1a_hex(const std::string& s) {
  std::uint64_t h = 1469598103934665603ULL;
  for (unsigned char c : s) {
    h ^= c;
    h *= 1099511628211ULL;
  }
  char buf[17];
  std::snprintf(buf, sizeof buf, "%016llx", static_cast<unsigned long long>(h));
  return buf;
}

json read_config(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw Error(Errc::UsageError, "cannot open config file " + path);
  try {
    return json::parse(in, nullptr, true, true);  // allow comments
  } catch (const json::exception& e) {
    throw Error(Errc::ParseError, "config " + path + ": " + e.what());
  }
}

void ensure_dir(const std::string& dir) {
  std::error_code ec;
  fs::create_directories(dir, ec);
  if (ec) throw Error(Errc::UsageError, "cannot create output directory " + dir);
}

void write_manifest(const std::string& dir, const std::string& command, const json& config,
                    const json& details) {
  json m;
  m["tool"] = "augsc";
  m["version"] = kVersion;
  m["command"] = command;
  m["config"] = config;
  m["config_hash"] = fnv1a_hex(config.dump());
  m["details"] = details;
  std::ofstream out(dir + "/manifest.json");
  if (!out) throw Error(Errc::UsageError, "cannot write manifest in " + dir);
  out << m.dump(2) << "\n";
}

SolverConfig parse_solver(const json& cfg) {
  SolverConfig out;
  try {
    const json s = cfg.value("solver", json::object());
    out.regularizer = regularizer_from_string(s.value("regularizer", std::string("l1")));
    out.mu_base = s.value("mu", 50.0);
    out.lambda2 = s.value("lambda2", 1.0);
    out.gamma1 = s.value("gamma1", 1000.0);
    out.gamma2 = s.value("gamma2", 1000.0);
    out.k = s.value("k", 0);
    out.admm_eps = s.value("admm_eps", 2e-4);
    out.admm_max_iter = s.value("admm_max_iter", 200);
    out.outer_max_iter = s.value("outer_max_iter", 10);
    out.outer_f_tol = s.value("outer_f_tol", 1e-3);
    out.seed = s.value("seed", std::uint64_t{0});
  } catch (const json::exception& e) {
    throw Error(Errc::UsageError, std::string("solver section: ") + e.what());
  }
  out.validate();
  return out;
}

struct Dataset {
  DataMatrix x;
  std::vector<int> truth;
  std::vector<int> given;
  int height = 0;
  int width = 0;
  json meta;
};

Dataset load_dataset(const json& cfg) {
  Dataset out;
  json d;
  try {
    d = cfg.value("dataset", json::object());
    const std::string source = d.value("source", std::string("synthetic"));
    const bool normalize = d.value("normalize", true);
    if (source == "synthetic") {
      const json s = cfg.value("synthetic", json::object());
      const double theta = s.value("theta_deg", 10.0);
      const int n_per = s.value("n_per", 20);
      const std::uint64_t seed = s.value("seed", std::uint64_t{1});
      const SyntheticSample sample = sample_union(make_bases(theta), n_per, seed);
      out.x = sample.x;
      out.truth = sample.labels;
      out.meta = {{"source", "synthetic"}, {"theta_deg", theta}, {"n_per", n_per}, {"seed", seed}};
    } else {
      const std::string format = d.value("format", std::string("auto"));
      if (format == "idx") {
        int h = 0, w = 0;
        out.x = load_idx_images(source, &h, &w);
        out.height = h;
        out.width = w;
      } else if (format == "pgm") {
        const int th = d.value("height", 0);
        const int tw = d.value("width", 0);
        if (th <= 0 || tw <= 0)
          throw Error(Errc::UsageError, "pgm datasets need positive height and width");
        out.x = load_pgm_dir(source, th, tw);
        out.height = th;
        out.width = tw;
      } else {
        out.x = load_matrix_auto(source);
        out.height = d.value("height", 0);
        out.width = d.value("width", 0);
      }
      out.meta = {{"source", source}, {"format", format}};
      if (normalize) out.x = normalize_columns(out.x);
    }
    if (d.contains("truth")) out.truth = load_labels(d["truth"].get<std::string>());
    if (d.contains("labels")) out.given = load_labels(d["labels"].get<std::string>());
  } catch (const json::exception& e) {
    throw Error(Errc::UsageError, std::string("dataset section: ") + e.what());
  }
  const int n = out.x.count();
  if (!out.truth.empty() && static_cast<int>(out.truth.size()) != n)
    throw Error(Errc::LengthMismatch, "truth labels count " + std::to_string(out.truth.size()) +
                                          " does not match sample count " + std::to_string(n));
  if (!out.given.empty() && static_cast<int>(out.given.size()) != n)
    throw Error(Errc::LengthMismatch, "given labels count " + std::to_string(out.given.size()) +
                                          " does not match sample count " + std::to_string(n));
  return out;
}

int resolve_p(const json& cfg, const Dataset& ds) {
  const json c = cfg.value("clustering", json::object());
  int p = c.value("p", 0);
  if (p <= 0) {
    for (int t : ds.truth) p = std::max(p, t + 1);
    for (int t : ds.given) p = std::max(p, t + 1);
  }
  if (p <= 0)
    throw Error(Errc::UsageError, "cluster count p not given and no labels to infer it from");
  return p;
}

AugmentedDictionary build_dictionary(const Dataset& ds, const json& cfg, int p, json* provenance) {
  json a;
  std::string mode;
  try {
    a = cfg.value("augmentation", json::object());
    mode = a.value("mode", std::string("none"));
  } catch (const json::exception& e) {
    throw Error(Errc::UsageError, std::string("augmentation section: ") + e.what());
  }
  if (mode == "none") {
    *provenance = {{"mode", "none"}};
    return AugmentedDictionary::plain(ds.x);
  }
  if (mode == "instance") {
    if (ds.height <= 0 || ds.width <= 0)
      throw Error(Errc::UsageError,
                  "instance augmentation needs image height and width in the dataset section");
    ImageGeometry geom{ds.height, ds.width};
    std::vector<AugmentStrategy> strategies;
    json strat_echo = json::array();
    for (const json& s : a.value("strategies", json::array())) {
      AugmentStrategy st;
      const std::string kind = s.is_string() ? s.get<std::string>() : s.value("kind", std::string());
      if (kind == "flip") {
        st.kind = TransformKind::Flip;
      } else if (kind == "rotate") {
        st.kind = TransformKind::Rotate;
        st.lo = s.is_object() ? s.value("lo", -10.0) : -10.0;
        st.hi = s.is_object() ? s.value("hi", 10.0) : 10.0;
      } else if (kind == "scale") {
        st.kind = TransformKind::Scale;
        st.lo = s.is_object() ? s.value("lo", 0.9) : 0.9;
        st.hi = s.is_object() ? s.value("hi", 1.1) : 1.1;
      } else {
        throw Error(Errc::UsageError, "unknown augmentation strategy '" + kind + "'");
      }
      strategies.push_back(st);
      strat_echo.push_back({{"kind", kind}, {"lo", st.lo}, {"hi", st.hi}});
    }
    if (strategies.empty())
      throw Error(Errc::UsageError, "instance augmentation needs a non-empty strategies list");
    const int reps = a.value("reps", 1);
    const std::uint64_t seed = a.value("seed", std::uint64_t{0});
    const bool norm = a.value("normalize", true);
    *provenance = {{"mode", "instance"}, {"strategies", strat_echo}, {"reps", reps},
                   {"seed", seed},       {"normalize", norm}};
    return random_instance_augment(ds.x, geom, strategies, reps, seed, norm);
  }
  if (mode == "interpolation") {
    if (ds.given.empty())
      throw Error(Errc::UsageError, "interpolation augmentation needs a dataset.labels file");
    InterpolationSpec spec;
    spec.n_a = a.value("n_aug", 10);
    spec.q = a.value("q", 2);
    const std::string w = a.value("weights", std::string("gaussian"));
    if (w == "gaussian")
      spec.weights = WeightMode::Gaussian;
    else if (w == "uniform")
      spec.weights = WeightMode::UniformL1;
    else
      throw Error(Errc::UsageError, "unknown interpolation weights '" + w + "'");
    spec.seed = a.value("seed", std::uint64_t{0});
    spec.normalize = a.value("normalize", true);
    *provenance = {{"mode", "interpolation"}, {"n_aug", spec.n_a},          {"q", spec.q},
                   {"weights", w},            {"seed", spec.seed},          {"normalize", spec.normalize}};
    return linear_interpolation_augment(ds.x, ds.given, p, spec);
  }
  throw Error(Errc::UsageError, "unknown augmentation mode '" + mode + "'");
}

void save_matrix_fmt(const std::string& dir, const std::string& stem, const std::string& fmt,
                     const Matrix& m) {
  DataMatrix wrapped{m};
  if (fmt == "bin")
    save_matrix_bin(dir + "/" + stem + ".bin", wrapped);
  else
    save_matrix_csv(dir + "/" + stem + ".csv", wrapped);
}

json metrics_json(const std::vector<int>& truth, const std::vector<int>& pred, const Matrix& cf) {
  json out;
  out["error_percent"] = error_rate(truth, pred);
  out["nmi_percent"] = nmi(truth, pred);
  const PreservingRate pr = subspace_preserving_rate(cf, truth);
  out["preserving_percent"] = pr.value;
  out["preserving_zero_columns"] = pr.zero_columns;
  return out;
}

void write_json(const std::string& path, const json& j) {
  std::ofstream out(path);
  if (!out) throw Error(Errc::UsageError, "cannot write " + path);
  out << j.dump(2) << "\n";
}

// ---- subcommands ----------------------------------------------------------

int cmd_synth(double theta, int n_per, std::uint64_t seed, const std::string& out_dir,
              const std::string& fmt) {
  ensure_dir(out_dir);
  const SyntheticSample sample = sample_union(make_bases(theta), n_per, seed);
  save_matrix_fmt(out_dir, "X", fmt, sample.x.values);
  save_labels(out_dir + "/truth.txt", sample.labels);
  const json config = {{"theta_deg", theta}, {"n_per", n_per}, {"seed", seed}, {"format", fmt}};
  write_manifest(out_dir, "synth", config,
                 {{"dim", sample.x.dim()}, {"samples", sample.x.count()}, {"clusters", 3}});
  std::cout << "wrote " << sample.x.count() << " samples of dimension " << sample.x.dim() << " to "
            << out_dir << "\n";
  return 0;
}

int cmd_augment(const json& cfg, const std::string& out_override) {
  const Dataset ds = load_dataset(cfg);
  json out_sec = cfg.value("output", json::object());
  const std::string dir = out_override.empty()
                              ? out_sec.value("directory", std::string("out"))
                              : out_override;
  const std::string fmt = out_sec.value("format", std::string("csv"));
  ensure_dir(dir);
  int p = 0;
  try {
    p = resolve_p(cfg, ds);
  } catch (const Error&) {
    p = 0;  // instance augmentation does not need p
  }
  json prov;
  const AugmentedDictionary dict = build_dictionary(ds, cfg, p, &prov);
  save_matrix_fmt(dir, "dictionary", fmt, dict.columns);
  json structure;
  structure["n"] = dict.n;
  structure["total"] = dict.total();
  structure["omega"] = dict.omega;
  structure["parents"] = dict.parents;
  structure["strategy_tags"] = dict.strategy_tags;
  write_json(dir + "/provenance.json", structure);
  write_manifest(dir, "augment", cfg, {{"augmentation", prov}, {"dataset", ds.meta}});
  std::cout << "dictionary: " << dict.n << " originals + " << dict.augmented() << " augmented\n";
  return 0;
}

// A synthetic run may ask for a reproducible labeled subset instead of a file.
void apply_synthetic_label_fallback(Dataset& ds, const json& cfg) {
  if (!ds.given.empty()) return;
  const json s = cfg.value("synthetic", json::object());
  const int lpc = s.value("labels_per_cluster", 0);
  if (lpc > 0 && !ds.truth.empty()) {
    int p_truth = 0;
    for (int t : ds.truth) p_truth = std::max(p_truth, t + 1);
    ds.given = pick_labels(ds.truth, p_truth, lpc,
                           s.value("label_seed", std::uint64_t{1}));
  }
}

int cmd_cluster(const json& cfg, const std::string& out_override) {
  Dataset ds = load_dataset(cfg);
  apply_synthetic_label_fallback(ds, cfg);
  const SolverConfig solver = parse_solver(cfg);
  const json cl = cfg.value("clustering", json::object());
  const int p = resolve_p(cfg, ds);
  const std::uint64_t cl_seed = cl.value("seed", std::uint64_t{0});
  const int restarts = cl.value("restarts", 20);

  json out_sec = cfg.value("output", json::object());
  const std::string dir = out_override.empty()
                              ? out_sec.value("directory", std::string("out"))
                              : out_override;
  const std::string fmt = out_sec.value("format", std::string("csv"));
  ensure_dir(dir);

  json prov;
  const AugmentedDictionary dict = build_dictionary(ds, cfg, p, &prov);
  const CoefficientMatrix coeffs = solve_unsupervised(ds.x, dict, solver);
  const ClusteringResult clustering = spectral_cluster(coeffs.af, p, cl_seed, restarts);

  save_labels(dir + "/labels.txt", clustering.labels);
  if (out_sec.value("dump_affinity", false)) save_matrix_fmt(dir, "affinity", fmt, coeffs.af);
  if (out_sec.value("dump_coefficients", false))
    save_matrix_fmt(dir, "coefficients", fmt, coeffs.ctilde);
  if (out_sec.value("dump_embedding", false))
    save_matrix_fmt(dir, "embedding", fmt, clustering.embedding.transpose());

  json summary;
  summary["n"] = dict.n;
  summary["p"] = p;
  summary["dictionary_total"] = dict.total();
  summary["admm"] = {{"converged", coeffs.converged},
                     {"residual", coeffs.residual},
                     {"iterations", coeffs.iterations}};
  summary["zero_degree_nodes"] = clustering.zero_degree.size();
  summary["kmeans_inertia"] = clustering.inertia;
  summary["best_restart"] = clustering.best_restart;
  if (!ds.truth.empty()) summary["metrics"] = metrics_json(ds.truth, clustering.labels, coeffs.cf);
  write_json(dir + "/summary.json", summary);
  write_manifest(dir, "cluster", cfg, {{"augmentation", prov}, {"dataset", ds.meta}});
  if (!ds.truth.empty())
    std::cout << "error " << summary["metrics"]["error_percent"] << "%  nmi "
              << summary["metrics"]["nmi_percent"] << "%\n";
  std::cout << "labels written to " << dir << "/labels.txt\n";
  return 0;
}

int cmd_semi(const json& cfg, const std::string& out_override) {
  Dataset ds = load_dataset(cfg);
  apply_synthetic_label_fallback(ds, cfg);
  bool any_labeled = false;
  for (int g : ds.given) any_labeled = any_labeled || g >= 0;
  if (!any_labeled)
    throw Error(Errc::UsageError,
                "no labeled samples; provide dataset.labels (or synthetic.labels_per_cluster), "
                "or use the cluster subcommand for the unsupervised path");

  const SolverConfig solver = parse_solver(cfg);
  const int p = resolve_p(cfg, ds);
  json out_sec = cfg.value("output", json::object());
  const std::string dir = out_override.empty()
                              ? out_sec.value("directory", std::string("out"))
                              : out_override;
  const std::string fmt = out_sec.value("format", std::string("csv"));
  ensure_dir(dir);

  json prov;
  const AugmentedDictionary dict = build_dictionary(ds, cfg, p, &prov);
  const LabelState labels = LabelState::make(ds.given, p, dict.total());
  const SemiResult res =
      run_as_sc(ds.x, dict, labels, solver, ds.truth.empty() ? nullptr : &ds.truth);

  save_labels(dir + "/labels.txt", res.labels);
  if (out_sec.value("dump_soft_labels", true))
    save_matrix_fmt(dir, "soft_labels", fmt, res.f.transpose());
  if (out_sec.value("dump_affinity", false)) save_matrix_fmt(dir, "affinity", fmt, res.coeffs.af);
  if (out_sec.value("dump_coefficients", false))
    save_matrix_fmt(dir, "coefficients", fmt, res.coeffs.ctilde);

  {
    std::ofstream trace(dir + "/trace.csv");
    if (!trace) throw Error(Errc::UsageError, "cannot write trace.csv in " + dir);
    trace << "iteration,graph_error_percent,f_error_percent,rel_f,rel_c,admm_residual,"
             "admm_iterations,admm_converged\n";
    char line[256];
    for (const OuterTrace& row : res.trace) {
      std::snprintf(line, sizeof line, "%d,%.6g,%.6g,%.10g,%.10g,%.10g,%d,%d\n", row.iteration,
                    row.err, row.err_f, row.rel_f, row.rel_c, row.admm_residual,
                    row.admm_iterations, row.admm_converged ? 1 : 0);
      trace << line;
    }
  }

  json summary;
  summary["n"] = dict.n;
  summary["p"] = p;
  summary["dictionary_total"] = dict.total();
  summary["labeled"] = labels.labeled_count();
  summary["outer_iterations"] = res.outer_iterations;
  summary["outer_converged"] = res.converged;
  summary["free_nodes"] = res.free_nodes;
  if (!ds.truth.empty()) summary["metrics"] = metrics_json(ds.truth, res.labels, res.coeffs.cf);
  write_json(dir + "/summary.json", summary);
  write_manifest(dir, "semi", cfg, {{"augmentation", prov}, {"dataset", ds.meta}});
  if (!ds.truth.empty())
    std::cout << "error " << summary["metrics"]["error_percent"] << "%  nmi "
              << summary["metrics"]["nmi_percent"] << "%  in " << res.outer_iterations
              << " outer iterations\n";
  std::cout << "labels written to " << dir << "/labels.txt\n";
  return 0;
}

int cmd_diag(const json& cfg, const std::string& out_override, int sample_idx) {
  const Dataset ds = load_dataset(cfg);
  if (ds.truth.empty())
    throw Error(Errc::UsageError, "diagnostics need ground truth labels (dataset.truth)");
  json out_sec = cfg.value("output", json::object());
  const std::string dir = out_override.empty()
                              ? out_sec.value("directory", std::string("out"))
                              : out_override;
  ensure_dir(dir);

  std::vector<int> targets;
  if (sample_idx >= 0)
    targets.push_back(sample_idx);
  else
    for (int j = 0; j < ds.x.count(); ++j) targets.push_back(j);

  std::ofstream csv(dir + "/geometry.csv");
  if (!csv) throw Error(Errc::UsageError, "cannot write geometry.csv in " + dir);
  csv << "sample,label,incoherence,inradius,satisfied\n";
  int satisfied = 0;
  double min_margin = std::numeric_limits<double>::infinity();
  char line[192];
  for (int j : targets) {
    const PreservingCheck chk = check_preserving_condition(ds.x, ds.truth, j);
    satisfied += chk.satisfied ? 1 : 0;
    min_margin = std::min(min_margin, chk.inradius - chk.incoherence);
    std::snprintf(line, sizeof line, "%d,%d,%.10g,%.10g,%d\n", j, ds.truth[j], chk.incoherence,
                  chk.inradius, chk.satisfied ? 1 : 0);
    csv << line;
  }
  json summary;
  summary["checked"] = targets.size();
  summary["satisfied"] = satisfied;
  summary["satisfied_fraction"] =
      targets.empty() ? 0.0 : static_cast<double>(satisfied) / targets.size();
  summary["min_margin"] = min_margin;
  write_json(dir + "/summary.json", summary);
  write_manifest(dir, "diag", cfg, {{"dataset", ds.meta}});
  std::cout << satisfied << "/" << targets.size() << " samples satisfy the preserving condition\n";
  return 0;
}

int cmd_eval(const std::string& truth_path, const std::string& pred_path,
             const std::string& out_dir) {
  const std::vector<int> truth = load_labels(truth_path);
  const std::vector<int> pred = load_labels(pred_path);
  const double err = error_rate(truth, pred);
  const double mi = nmi(truth, pred);
  std::cout << "error_percent=" << err << " nmi_percent=" << mi << "\n";
  if (!out_dir.empty()) {
    ensure_dir(out_dir);
    write_json(out_dir + "/metrics.json", {{"error_percent", err}, {"nmi_percent", mi}});
  }
  return 0;
}

int cmd_sweep(const json& cfg, const std::string& out_override) {
  json sw;
  std::vector<double> thetas;
  std::vector<int> label_counts, n_augs;
  int runs = 1, n_per = 20;
  std::uint64_t base_seed = 1;
  try {
    sw = cfg.value("sweep", json::object());
    thetas = sw.value("thetas", std::vector<double>{10.0, 30.0, 50.0});
    label_counts = sw.value("label_counts", std::vector<int>{2, 4, 6});
    n_augs = sw.value("n_augs", std::vector<int>{10, 20, 30});
    runs = sw.value("runs", 8);
    n_per = sw.value("n_per", 20);
    base_seed = sw.value("base_seed", std::uint64_t{1});
  } catch (const json::exception& e) {
    throw Error(Errc::UsageError, std::string("sweep section: ") + e.what());
  }
  if (runs < 1) throw Error(Errc::UsageError, "sweep.runs must be positive");
  const SolverConfig solver = parse_solver(cfg);
  json out_sec = cfg.value("output", json::object());
  const std::string dir = out_override.empty()
                              ? out_sec.value("directory", std::string("out"))
                              : out_override;
  ensure_dir(dir);

  std::ofstream csv(dir + "/grid.csv");
  if (!csv) throw Error(Errc::UsageError, "cannot write grid.csv in " + dir);
  csv << "theta,labels_per_cluster,n_aug,runs,first_mean,first_std,final_mean,final_std,"
         "first_f_mean,final_f_mean,mean_outer_iterations,converged_runs,zero_error_runs,"
         "final_rel_f_mean,final_rel_f_max\n";

  char line[384];
  int cell = 0;
  for (double theta : thetas) {
    for (int lpc : label_counts) {
      for (int aug : n_augs) {
        double first_sum = 0, first_sq = 0, final_sum = 0, final_sq = 0, iter_sum = 0;
        double first_f_sum = 0, final_f_sum = 0, rel_f_sum = 0, rel_f_max = 0;
        int converged = 0, zero_runs = 0;
        for (int r = 0; r < runs; ++r) {
          SyntheticSemiSetup setup;
          setup.theta_deg = theta;
          setup.n_per = n_per;
          setup.labels_per_cluster = lpc;
          setup.n_aug = aug;
          setup.solver = solver;
          const SemiRunStats stats =
              run_synthetic_semi(setup, derive_seed(base_seed, static_cast<std::uint64_t>(cell) * 10007u + r));
          first_sum += stats.first_err;
          first_sq += stats.first_err * stats.first_err;
          final_sum += stats.final_err;
          final_sq += stats.final_err * stats.final_err;
          first_f_sum += stats.err_f_per_iter.empty() ? 0.0 : stats.err_f_per_iter.front();
          final_f_sum += stats.final_err_f;
          rel_f_sum += stats.final_rel_f;
          rel_f_max = std::max(rel_f_max, stats.final_rel_f);
          iter_sum += stats.outer_iterations;
          converged += stats.outer_converged ? 1 : 0;
          zero_runs += stats.final_err <= 1e-12 ? 1 : 0;
        }
        const double fm = first_sum / runs;
        const double lm = final_sum / runs;
        const double fv = std::max(0.0, first_sq / runs - fm * fm);
        const double lv = std::max(0.0, final_sq / runs - lm * lm);
        std::snprintf(line, sizeof line,
                      "%.6g,%d,%d,%d,%.6g,%.6g,%.6g,%.6g,%.6g,%.6g,%.4g,%d,%d,%.6g,%.6g\n",
                      theta, lpc, aug, runs, fm, std::sqrt(fv), lm, std::sqrt(lv),
                      first_f_sum / runs, final_f_sum / runs, iter_sum / runs, converged, zero_runs,
                      rel_f_sum / runs, rel_f_max);
        csv << line;
        std::cout << "theta=" << theta << " labels=" << lpc << " aug=" << aug << ": first " << fm
                  << "% final " << lm << "%\n";
        ++cell;
      }
    }
  }
  write_manifest(dir, "sweep", cfg,
                 {{"cells", cell}, {"runs_per_cell", runs}});
  std::cout << "grid written to " << dir << "/grid.csv\n";
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"augmented self-expressive subspace clustering toolkit"};
  app.require_subcommand(1);
  int threads = 0;
  app.add_option("--threads", threads, "worker thread cap (0 = library default)");

  auto* synth = app.add_subcommand("synth", "generate the three-subspace synthetic set");
  double theta = 10.0;
  int n_per = 20;
  std::uint64_t seed = 1;
  std::string out_dir = "out";
  std::string fmt = "csv";
  synth->add_option("--theta", theta, "pairwise angle in degrees")->capture_default_str();
  synth->add_option("--n-per", n_per, "samples per subspace")->capture_default_str();
  synth->add_option("--seed", seed, "generator seed")->capture_default_str();
  synth->add_option("--out", out_dir, "output directory")->capture_default_str();
  synth->add_option("--format", fmt, "matrix format: csv or bin")->capture_default_str();

  std::string config_path, out_override;
  auto add_config = [&](CLI::App* sub, bool need_config = true) {
    auto* opt = sub->add_option("--config", config_path, "JSON config file");
    if (need_config) opt->required();
    sub->add_option("--out", out_override, "override output.directory");
  };
  auto* augment = app.add_subcommand("augment", "build an augmented dictionary");
  add_config(augment);
  auto* cluster = app.add_subcommand("cluster", "unsupervised clustering");
  add_config(cluster);
  auto* semi = app.add_subcommand("semi", "semi-supervised clustering with label propagation");
  add_config(semi);
  auto* diag = app.add_subcommand("diag", "per-sample geometric diagnostics");
  add_config(diag);
  int diag_sample = -1;
  diag->add_option("--sample", diag_sample, "restrict to one sample index");
  auto* sweep = app.add_subcommand("sweep", "synthetic grid experiment");
  add_config(sweep);

  auto* eval = app.add_subcommand("eval", "compare predictions against ground truth");
  std::string truth_path, pred_path, eval_out;
  eval->add_option("--truth", truth_path, "ground truth label file")->required();
  eval->add_option("--pred", pred_path, "predicted label file")->required();
  eval->add_option("--out", eval_out, "optional metrics output directory");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int rc = app.exit(e);
    return rc == 0 ? 0 : 1;
  }

  try {
    if (threads > 0) set_threads(threads);
    if (synth->parsed()) return cmd_synth(theta, n_per, seed, out_dir, fmt);
    const json cfg = config_path.empty() ? json::object() : read_config(config_path);
    if (augment->parsed()) return cmd_augment(cfg, out_override);
    if (cluster->parsed()) return cmd_cluster(cfg, out_override);
    if (semi->parsed()) return cmd_semi(cfg, out_override);
    if (diag->parsed()) return cmd_diag(cfg, out_override, diag_sample);
    if (sweep->parsed()) return cmd_sweep(cfg, out_override);
    if (eval->parsed()) return cmd_eval(truth_path, pred_path, eval_out);
  } catch (const Error& e) {
    std::cerr << "error: " << e.what() << "\n";
    return exit_category(e.code());
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 3;
  }
  return 0;
}
