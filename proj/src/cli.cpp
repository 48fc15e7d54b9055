#include "loewner/cli.hpp"

#include <cmath>
#include <filesystem>
#include <map>
#include <memory>
#include <ostream>
#include <set>

#include <CLI11.hpp>
#include <fmt/format.h>
#include <json.hpp>

#include "loewner/analysis.hpp"
#include "loewner/fem_model.hpp"
#include "loewner/io.hpp"
#include "loewner/loewner_core.hpp"
#include "loewner/svg.hpp"

namespace loewner::io {

namespace fs = std::filesystem;
using nlohmann::json;

namespace {

const char* kind_name(ErrorKind kind) {
  switch (kind) {
    case ErrorKind::kConfig: return "config";
    case ErrorKind::kData: return "data";
    case ErrorKind::kDomain: return "domain";
    case ErrorKind::kNumerical: return "numerical";
    case ErrorKind::kIo: return "io";
  }
  return "internal";
}

void report(std::ostream& err, const char* kind, int code, const std::string& message) {
  json j{{"error", kind}, {"exit_code", code}, {"message", message}};
  err << j.dump() << '\n';
}

struct Common {
  std::string config;
  std::string order;
  std::string tol;
  std::string out;
  std::string grid;
  std::string plant;
  std::string partition;
  std::string seed;
  bool svg = false;
};

void add_common(CLI::App* sub, Common& c) {
  sub->add_option("--config", c.config, "Experiment config (strict JSON)");
  sub->add_option("--order", c.order, "Reduction order r");
  sub->add_option("--tol", c.tol, "Automatic order: smallest r with sigma_{r+1}/sigma_1 < tol");
  sub->add_option("--out", c.out, "Output directory");
  sub->add_option("--grid", c.grid, "Frequency grid lo:hi:count (log10 of omega)");
  sub->add_option("--plant", c.plant, "beam | fem:N | modal:N | const:v | samples:path");
  sub->add_option("--partition", c.partition, "alternating | half-split");
  sub->add_option("--seed", c.seed, "Seed for randomized probes");
  sub->add_flag("--svg", c.svg, "Also write SVG plots");
}

int to_int(const std::string& s, const char* what) {
  try {
    std::size_t pos = 0;
    const long long v = std::stoll(s, &pos);
    if (pos != s.size()) throw std::invalid_argument(s);
    return static_cast<int>(v);
  } catch (const std::exception&) {
    throw ConfigError(fmt::format("{}: '{}' is not an integer", what, s));
  }
}

double to_double(const std::string& s, const char* what) {
  try {
    std::size_t pos = 0;
    const double v = std::stod(s, &pos);
    if (pos != s.size()) throw std::invalid_argument(s);
    return v;
  } catch (const std::exception&) {
    throw ConfigError(fmt::format("{}: '{}' is not a number", what, s));
  }
}

ExperimentConfig resolve(const Common& c) {
  ExperimentConfig cfg = c.config.empty() ? ExperimentConfig{} : load_config(c.config);
  if (!c.plant.empty()) cfg.plant = parse_plant(c.plant);
  if (!c.grid.empty()) cfg.grid = parse_grid(c.grid);
  if (!c.partition.empty()) cfg.partition = parse_partition(c.partition);
  if (!c.order.empty() && !c.tol.empty()) throw ConfigError("give either --order or --tol, not both");
  if (!c.order.empty()) cfg.order = to_int(c.order, "--order");
  if (!c.tol.empty()) {
    cfg.tol = to_double(c.tol, "--tol");
    cfg.order.reset();
  }
  if (!c.out.empty()) cfg.output_dir = c.out;
  if (!c.seed.empty()) {
    if (c.seed.front() == '-') throw ConfigError("--seed must be non-negative");
    try {
      cfg.seed = std::stoull(c.seed);
    } catch (const std::exception&) {
      throw ConfigError(fmt::format("--seed: '{}' is not an integer", c.seed));
    }
  }
  cfg.validate();
  return cfg;
}

json beam_json(const beam::BeamParams& p) {
  return {{"length", p.length()},   {"youngs", p.youngs()},   {"inertia", p.inertia()},
          {"damping", p.damping()}, {"EI", p.stiffness()}, {"cdI", p.damping_inertia()}};
}

json provenance(const ExperimentConfig& cfg, const std::string& command,
                const std::string& method) {
  json canon = config_to_json(cfg);
  canon.erase("output_dir");
  return {{"tool_version", kToolVersion},
          {"command", command},
          {"method", method},
          {"config", canon},
          {"config_hash", hash_hex(canon)},
          {"parameters", beam_json(cfg.beam)},
          {"reference_convention",
           "relative errors are |H_ref - H_model| / |H_ref|; absolute where H_ref = 0"}};
}

fs::path output(const ExperimentConfig& cfg, const std::string& name) {
  return fs::path(cfg.output_dir) / name;
}

void write_json(const fs::path& path, const json& j) { write_file_atomic(path, j.dump(2) + "\n"); }

struct Dataset {
  SampleSet samples;
  analysis::FrequencyGrid grid;
  std::string method;
};

analysis::FrequencyGrid grid_of(const SampleSet& samples) {
  analysis::FrequencyGrid g;
  for (const auto& s : samples) g.points.push_back(s.s);
  g.count = static_cast<int>(samples.size());
  if (!samples.empty()) {
    g.lo_exp = std::log10(samples.front().s.imag());
    g.hi_exp = std::log10(samples.back().s.imag());
  }
  return g;
}

bool same_points(const std::vector<Complex>& a, const std::vector<Complex>& b) {
  if (a.size() != b.size()) return false;
  for (std::size_t k = 0; k < a.size(); ++k) {
    if (std::abs(a[k] - b[k]) > 1e-12 * std::max(1.0, std::abs(a[k]))) return false;
  }
  return true;
}

SampleSet load_samples(const std::string& path) { return samples_from_csv(read_file(path)); }

Dataset acquire(const ExperimentConfig& cfg, bool grid_explicit) {
  Dataset d;
  if (cfg.plant.kind == PlantKind::kSamples) {
    d.samples = load_samples(cfg.plant.path);
    d.grid = grid_of(d.samples);
    d.method = "imported samples";
    if (grid_explicit) {
      const auto g = analysis::log_grid(cfg.grid.lo_exp, cfg.grid.hi_exp, cfg.grid.count);
      if (!same_points(g.points, d.grid.points)) {
        throw DataError(fmt::format("grid/model mismatch: {} does not lie on the requested grid",
                                    cfg.plant.path));
      }
    }
    return d;
  }
  d.grid = analysis::log_grid(cfg.grid.lo_exp, cfg.grid.hi_exp, cfg.grid.count);
  d.samples = analysis::sample(make_evaluator(cfg.plant, cfg.beam), d.grid);
  d.method = plant_label(cfg.plant);
  return d;
}

void add_grid_meta(json& meta, const analysis::FrequencyGrid& g) {
  meta["grid"] = {{"lo_exp", g.lo_exp}, {"hi_exp", g.hi_exp}, {"count", g.count}};
}

std::vector<double> abs_values(const SampleSet& s) {
  std::vector<double> out;
  for (const auto& x : s) out.push_back(std::abs(x.value));
  return out;
}

int cmd_sample(const Common& c, std::ostream& out) {
  const auto cfg = resolve(c);
  const auto d = acquire(cfg, !c.grid.empty());
  const auto csv = output(cfg, "samples.csv");
  write_file_atomic(csv, samples_to_csv(d.samples));
  json meta = provenance(cfg, "sample", d.method);
  add_grid_meta(meta, d.grid);
  write_json(output(cfg, "samples.meta.json"), meta);
  if (c.svg) {
    LogLogPlot plot("|H(j omega)|", "omega [rad/s]", "|H|");
    plot.add({d.method, d.grid.omegas(), abs_values(d.samples), ""});
    write_file_atomic(output(cfg, "samples.svg"), plot.render());
  }
  out << fmt::format("wrote {} samples to {}\n", d.samples.size(), csv.string());
  return 0;
}

void write_sv(const ExperimentConfig& cfg, const SingularValueDecay& decay, const json& meta,
              bool svg) {
  write_file_atomic(output(cfg, "singular_values.csv"), singular_values_to_csv(decay));
  write_json(output(cfg, "singular_values.meta.json"), meta);
  if (svg) {
    LogLogPlot plot("Normalized singular values", "index", "sigma_k / sigma_1");
    std::vector<double> idx;
    for (std::size_t k = 0; k < decay.row_normalized.size(); ++k) idx.push_back(double(k + 1));
    plot.add({"[LL LLs]", idx, decay.row_normalized, ""});
    plot.add({"[LL; LLs]", idx, decay.col_normalized, ""});
    write_file_atomic(output(cfg, "singular_values.svg"), plot.render());
  }
}

int cmd_sv(const Common& c, std::ostream& out) {
  const auto cfg = resolve(c);
  const auto d = acquire(cfg, !c.grid.empty());
  const auto pencil =
      realify(build_pencil(close_under_conjugation(partition_samples(d.samples, cfg.partition))));
  const auto decay = sv_analysis(pencil);
  json meta = provenance(cfg, "sv", d.method);
  add_grid_meta(meta, d.grid);
  meta["partition"] = partition_name(cfg.partition);
  meta["pencil_size"] = {pencil.loewner.rows(), pencil.loewner.cols()};
  const int suggested = select_order(decay, cfg.tol);
  meta["suggested_order"] = suggested;
  write_sv(cfg, decay, meta, c.svg);
  out << fmt::format("pencil {}x{}; suggested order {} at tol {}\n", pencil.loewner.rows(),
                     pencil.loewner.cols(), suggested, cfg.tol);
  return 0;
}

int cmd_reduce(const Common& c, const std::string& samples_path, std::ostream& out) {
  Common cc = c;
  if (!samples_path.empty()) cc.plant = "samples:" + samples_path;
  const auto cfg = resolve(cc);
  const auto d = acquire(cfg, !c.grid.empty());

  const auto n = static_cast<int>(d.samples.size());
  if (cfg.order && n < 2 * *cfg.order) {
    throw DataError(fmt::format("insufficient data: order {} needs at least {} samples, got {}",
                                *cfg.order, 2 * *cfg.order, n));
  }
  ReduceOptions opts;
  opts.probe_seed = cfg.seed;
  auto pencil =
      realify(build_pencil(close_under_conjugation(partition_samples(d.samples, cfg.partition))));
  const auto decay = sv_analysis(pencil);
  const int r = cfg.order ? *cfg.order : select_order(decay, cfg.tol);
  if (n < 2 * r) {
    throw DataError(fmt::format("insufficient data: order {} needs at least {} samples, got {}", r,
                                2 * r, n));
  }
  ModelArchive archive;
  archive.model = reduce(pencil, r, opts);
  archive.right_points = pencil.source.right_points;
  archive.left_points = pencil.source.left_points;
  json meta = provenance(cfg, "reduce", "loewner");
  add_grid_meta(meta, d.grid);
  meta["data_source"] = d.method;
  meta["partition"] = partition_name(cfg.partition);
  meta["order"] = r;
  meta["order_selection"] = cfg.order ? "explicit" : fmt::format("tol {}", cfg.tol);
  meta["sample_count"] = n;
  archive.metadata = meta;

  const auto path = output(cfg, "model.json");
  save_archive(path, archive);
  write_sv(cfg, decay, meta, c.svg);
  for (const auto& w : archive.model.warnings) out << "warning: " << w << '\n';
  out << fmt::format("order {} model from {} samples written to {}\n", r, n, path.string());
  return 0;
}

struct Candidate {
  std::string name;
  SampleSet values;
};

int cmd_compare(const Common& c, const std::vector<std::string>& models, std::ostream& out) {
  const auto cfg = resolve(c);
  const bool grid_explicit = !c.grid.empty();
  const auto ref = acquire(cfg, grid_explicit);

  std::vector<Candidate> cands;
  std::set<std::string> used;
  for (const auto& m : models) {
    const PlantSpec spec = parse_plant(m);
    Candidate cand;
    cand.name = plant_label(spec);
    for (int k = 2; used.count(cand.name) != 0; ++k) {
      cand.name = fmt::format("{}_{}", plant_label(spec), k);
    }
    used.insert(cand.name);
    if (spec.kind == PlantKind::kSamples) {
      cand.values = load_samples(spec.path);
      std::vector<Complex> pts;
      for (const auto& s : cand.values) pts.push_back(s.s);
      if (!same_points(pts, ref.grid.points)) {
        throw DataError(fmt::format("grid/model mismatch: {} is not sampled on the reference grid",
                                    spec.path));
      }
    } else if (spec.kind == PlantKind::kArchive) {
      const auto archive = std::make_shared<ModelArchive>(load_archive(spec.path));
      cand.values = analysis::sample(
          [archive](Complex s) { return eval_reduced(archive->model, s); }, ref.grid);
    } else {
      ExperimentConfig tmp = cfg;
      tmp.plant = spec;
      tmp.validate();
      cand.values = analysis::sample(make_evaluator(spec, cfg.beam), ref.grid);
    }
    cands.push_back(std::move(cand));
  }

  std::vector<NamedProfile> profiles;
  json meta = provenance(cfg, "compare", "error_profile");
  add_grid_meta(meta, ref.grid);
  meta["reference"] = ref.method;
  meta["models"] = json::array();
  for (auto& cand : cands) {
    auto prof = analysis::error_profile(ref.samples, cand.values, ref.grid);
    meta["models"].push_back({{"name", cand.name},
                              {"max_rel_err", prof.max_rel},
                              {"median_rel_err", prof.median_rel}});
    out << fmt::format("{}: max rel err {:.3e}, median rel err {:.3e}\n", cand.name, prof.max_rel,
                       prof.median_rel);
    profiles.push_back({cand.name, std::move(cand.values), std::move(prof)});
  }
  write_file_atomic(output(cfg, "compare.csv"), comparison_to_csv(ref.samples, profiles));
  write_json(output(cfg, "compare.meta.json"), meta);
  if (c.svg) {
    const auto w = ref.grid.omegas();
    LogLogPlot mag("Frequency response magnitude", "omega [rad/s]", "|H|");
    mag.add({ref.method + " (reference)", w, abs_values(ref.samples), "#000000"});
    LogLogPlot err("Relative error", "omega [rad/s]", "|H_ref - H| / |H_ref|");
    for (const auto& p : profiles) {
      mag.add({p.name, w, abs_values(p.candidate), ""});
      err.add({p.name, w, p.profile.rel_err, ""});
    }
    write_file_atomic(output(cfg, "compare_magnitude.svg"), mag.render());
    write_file_atomic(output(cfg, "compare_error.svg"), err.render());
  }
  return 0;
}

int cmd_spectrum(const Common& c, const std::string& target, int count, bool zeros, bool overlay,
                 std::ostream& out) {
  Common cc = c;
  if (!target.empty()) cc.plant = target;
  const auto cfg = resolve(cc);
  if (count < 1) throw ConfigError(fmt::format("--count must be >= 1, got {}", count));

  std::vector<SpectrumRow> rows;
  std::vector<Complex> reduced;
  auto analytic_rows = [&](const beam::BeamSpectrum& sp) {
    for (const auto& p : sp.pole_list()) rows.push_back({"pole", p, "analytic"});
    rows.push_back({"pole", {sp.real_pole, 0.0}, "analytic"});
    if (zeros) {
      for (const auto& z : sp.zero_list()) rows.push_back({"zero", z, "analytic"});
    }
  };
  std::string method;
  switch (cfg.plant.kind) {
    case PlantKind::kBeamExact:
      analytic_rows(beam::spectrum(count, cfg.beam));
      method = "analytic beam spectrum";
      break;
    case PlantKind::kModal: {
      if (zeros) throw ConfigError("zeros are not available for the modal plant");
      const auto alphas = beam::alpha_roots(cfg.plant.n, cfg.beam.length());
      for (double a : alphas) {
        const Complex p = beam::modal_quadratic_root(a, cfg.beam);
        rows.push_back({"pole", p, "analytic"});
        rows.push_back({"pole", std::conj(p), "analytic"});
      }
      method = "modal poles";
      break;
    }
    case PlantKind::kArchive: {
      const auto archive = load_archive(cfg.plant.path);
      reduced = analysis::reduced_poles(archive.model);
      for (const auto& p : reduced) rows.push_back({"pole", p, "reduced"});
      if (zeros) {
        for (const auto& z : analysis::reduced_zeros(archive.model).finite) {
          rows.push_back({"zero", z, "reduced"});
        }
      }
      if (overlay) analytic_rows(beam::spectrum(count, cfg.beam));
      method = "reduced model eigenvalues";
      break;
    }
    default:
      throw ConfigError(fmt::format("spectrum needs beam, modal:N or a model archive, got '{}'",
                                    plant_label(cfg.plant)));
  }

  write_file_atomic(output(cfg, "spectrum.csv"), spectrum_to_csv(rows));
  json meta = provenance(cfg, "spectrum", method);
  meta["count_pairs"] = count;
  meta["zeros"] = zeros;
  if (overlay && cfg.plant.kind == PlantKind::kArchive) {
    const auto sp = beam::spectrum(count, cfg.beam);
    const auto matches = analysis::match_poles(sp.poles, reduced);
    int within = 0;
    for (const auto& m : matches) within += m.rel_dist < 1e-4 ? 1 : 0;
    write_file_atomic(output(cfg, "pole_matching.csv"), pole_matching_to_csv(matches));
    meta["pairs_matched_1e-4"] = within;
    out << fmt::format("{} of {} analytic pole pairs matched within 1e-4\n", within, count);
  }
  write_json(output(cfg, "spectrum.meta.json"), meta);
  out << fmt::format("wrote {} spectrum rows\n", rows.size());
  return 0;
}

int cmd_fem(const Common& c, bool first_order, std::ostream& out) {
  const auto cfg = resolve(c);
  if (cfg.plant.kind != PlantKind::kBeamFem) {
    throw ConfigError("fem-assemble needs --plant fem:N");
  }
  const auto sys = fem::assemble_second_order(cfg.plant.n, cfg.beam);
  json j = provenance(cfg, "fem-assemble", "finite differences");
  if (first_order) {
    const auto fo = fem::to_first_order(sys);
    j["system"] = fem_to_json(sys, &fo);
  } else {
    j["system"] = fem_to_json(sys, nullptr);
  }
  const auto path = output(cfg, fmt::format("fem_{}.json", cfg.plant.n));
  write_file_atomic(path, j.dump() + "\n");
  out << fmt::format("assembled N = {} ({} unknowns) to {}\n", cfg.plant.n, sys.dim(),
                     path.string());
  return 0;
}

}  // namespace

int exit_code_for(ErrorKind kind) {
  switch (kind) {
    case ErrorKind::kNumerical: return 3;
    case ErrorKind::kIo: return 4;
    default: return 2;
  }
}

Evaluator make_evaluator(const PlantSpec& plant, const beam::BeamParams& params) {
  switch (plant.kind) {
    case PlantKind::kBeamExact:
      return [params](Complex s) { return beam::eval_H_orig(s, params); };
    case PlantKind::kBeamFem: {
      auto sys = std::make_shared<const fem::SecondOrderSystem>(
          fem::assemble_second_order(plant.n, params));
      return [sys, params](Complex s) { return fem::eval_H_fem(s, *sys, params); };
    }
    case PlantKind::kModal: {
      auto alphas = std::make_shared<const std::vector<double>>(
          beam::alpha_roots(plant.n, params.length()));
      const int n = plant.n;
      return [alphas, params, n](Complex s) { return beam::eval_H_modal(s, params, *alphas, n); };
    }
    case PlantKind::kConstant: {
      const double v = plant.value;
      return [v](Complex) { return Complex(v, 0.0); };
    }
    case PlantKind::kArchive: {
      auto archive = std::make_shared<const ModelArchive>(load_archive(plant.path));
      return [archive](Complex s) { return eval_reduced(archive->model, s); };
    }
    case PlantKind::kSamples:
      break;
  }
  throw ConfigError("imported samples cannot be evaluated off their own grid");
}

int run_cli(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  CLI::App app{"Loewner-framework model reduction for the damped cantilever beam", "loewner"};
  app.require_subcommand(1);
  app.set_version_flag("--version", kToolVersion);

  Common common;
  std::string samples_path, target;
  std::vector<std::string> models;
  int count = 16;
  bool zeros = false, overlay = false, first_order = false;

  auto* sample = app.add_subcommand("sample", "Sample a plant on a frequency grid");
  auto* reduce = app.add_subcommand("reduce", "Build a reduced model from samples");
  auto* compare = app.add_subcommand("compare", "Error profiles of models against a reference");
  auto* spectrum = app.add_subcommand("spectrum", "Poles (and zeros) of a plant or archive");
  auto* fem_cmd = app.add_subcommand("fem-assemble", "Export finite-difference matrices");
  auto* sv = app.add_subcommand("sv", "Singular-value decay of the Loewner pencil");
  for (auto* sub : {sample, reduce, compare, spectrum, fem_cmd, sv}) add_common(sub, common);
  for (auto* sub : {reduce, sv}) {
    sub->add_option("--samples", samples_path, "Samples CSV (omega,re_H,im_H,abs_H)");
  }
  compare->add_option("models", models, "Model archives (.json), sample CSVs or plant specs")
      ->required();
  spectrum->add_option("target", target, "Plant spec or model archive");
  spectrum->add_option("--count", count, "Number of analytic pole pairs");
  spectrum->add_flag("--zeros", zeros, "Include zeros");
  spectrum->add_flag("--overlay", overlay, "With an archive: add analytic rows and pole matching");
  fem_cmd->add_flag("--first-order", first_order, "Include the first-order descriptor form");

  std::vector<std::string> argv_store{"loewner"};
  argv_store.insert(argv_store.end(), args.begin(), args.end());
  std::vector<const char*> argv;
  for (const auto& a : argv_store) argv.push_back(a.c_str());

  try {
    app.parse(static_cast<int>(argv.size()), argv.data());
  } catch (const CLI::CallForHelp&) {
    out << app.help();
    return 0;
  } catch (const CLI::CallForVersion&) {
    out << kToolVersion << '\n';
    return 0;
  } catch (const CLI::ParseError& e) {
    report(err, "config", 2, e.what());
    return 2;
  }

  try {
    if (*sample) return cmd_sample(common, out);
    if (*reduce) return cmd_reduce(common, samples_path, out);
    if (*sv) {
      Common cc = common;
      if (!samples_path.empty()) cc.plant = "samples:" + samples_path;
      return cmd_sv(cc, out);
    }
    if (*compare) return cmd_compare(common, models, out);
    if (*spectrum) return cmd_spectrum(common, target, count, zeros, overlay, out);
    if (*fem_cmd) return cmd_fem(common, first_order, out);
  } catch (const Error& e) {
    const int code = exit_code_for(e.kind());
    report(err, kind_name(e.kind()), code, e.what());
    return code;
  } catch (const fs::filesystem_error& e) {
    report(err, "io", 4, e.what());
    return 4;
  } catch (const json::exception& e) {
    report(err, "data", 2, e.what());
    return 2;
  } catch (const std::exception& e) {
    report(err, "internal", 3, e.what());
    return 3;
  }
  return 2;
}

}  // namespace loewner::io
