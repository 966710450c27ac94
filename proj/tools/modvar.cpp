// modvar: simulate D-slit two-photon states, ingest coincidence maps, and
// evaluate modular-variable entanglement / EPR-steering criteria.

#include <CLI11.hpp>
#include <cmath>
#include <cstdio>
#include <iostream>
#include <optional>
#include <string>
#include <vector>

#include "modvar/counts.hpp"
#include "modvar/entropy.hpp"
#include "modvar/report.hpp"
#include "modvar/spectral.hpp"
#include "modvar/states.hpp"
#include "modvar/svgplot.hpp"
#include "modvar/witnesses.hpp"

namespace {

using namespace modvar;

struct OutputOptions {
  std::string format{"json"};
  std::string out_path;  // empty = stdout
  bool timestamp{false};
};

void add_output_flags(CLI::App* cmd, OutputOptions& o) {
  cmd->add_option("--format", o.format, "Report format")
      ->check(CLI::IsMember({"json", "csv"}))
      ->capture_default_str();
  cmd->add_option("--out", o.out_path, "Write the report to a file instead of stdout");
  cmd->add_flag("--timestamp", o.timestamp,
                "Stamp the report with wall-clock time (breaks byte-reproducibility)");
}

void emit(const RunReport& report, const OutputOptions& o) {
  RunReport stamped = report;
  if (o.timestamp) stamped.timestamp = current_timestamp_utc();
  const std::string text =
      o.format == "csv" ? to_csv(stamped.results) : to_json(stamped).dump(2) + "\n";
  if (o.out_path.empty())
    std::cout << text;
  else
    write_text_atomic(o.out_path, text);
}

void warn_if_incommensurate(const ModularJoint& m, const char* which) {
  if (m.step_period_mismatch > 0.01)
    std::cerr << "warning: " << which << " grid step does not divide the modular period (rel. dev. "
              << m.step_period_mismatch << "); witness-grade runs want a commensurate grid\n";
}

Pairing parse_pairing(const std::string& s) {
  return s == "n-plus-s-minus" ? Pairing::n_plus_s_minus : Pairing::n_minus_s_plus;
}

SteeringDirection parse_direction(const std::string& s) {
  return s == "2from1" ? SteeringDirection::infer_second_from_first
                       : SteeringDirection::infer_first_from_second;
}

// ---------------------------------------------------------------- simulate

struct SimulateOptions {
  int slits{2};
  double width{0.0};  // 0 = reference geometry for the slit count
  double sep{0.0};
  std::string mode{"comb"};
  int cells_per_period{128};
  int far_periods{9};
  double noise{0.0};
  std::int64_t shots{2'000'000'000};
  OpticsConfig optics{};
  std::string out_near, out_far;
};

SlitSpec resolve_slit_spec(int slits, double width, double sep) {
  SlitSpec spec;
  if (slits >= 2 && slits <= 4 && (width <= 0.0 || sep <= 0.0)) spec = reference_slit_spec(slits);
  spec.slit_count = slits;
  if (width > 0.0) spec.width_mm = width;
  if (sep > 0.0) spec.separation_mm = sep;
  spec.validate();
  return spec;
}

int run_simulate(const SimulateOptions& o, const OutputOptions& out) {
  const SlitSpec spec = resolve_slit_spec(o.slits, o.width, o.sep);
  const FarFieldMode mode =
      o.mode == "physical" ? FarFieldMode::physical : FarFieldMode::comb;

  JointDistribution near = ideal_near_field(spec, default_near_axis(spec, o.cells_per_period));
  if (o.noise > 0.0) near = add_background(near, o.noise);
  const JointDistribution far =
      ideal_far_field(spec, default_far_axis(spec, o.cells_per_period, o.far_periods), mode);

  save_coincidence_csv(to_counts(near, o.optics, o.shots), o.out_near);
  save_coincidence_csv(to_counts(far, o.optics, o.shots), o.out_far);

  RunReport report;
  report.command = "simulate";
  report.config = {{"slits", spec.slit_count},
                   {"width_mm", spec.width_mm},
                   {"separation_mm", spec.separation_mm},
                   {"mode", o.mode},
                   {"grid_cells_per_period", o.cells_per_period},
                   {"far_periods", o.far_periods},
                   {"noise", o.noise},
                   {"shots", o.shots},
                   {"magnification", o.optics.magnification},
                   {"focal_mm", o.optics.focal_mm},
                   {"wavelength_nm", o.optics.wavelength_nm},
                   {"out_near", o.out_near},
                   {"out_far", o.out_far}};
  emit(report, out);
  return 0;
}

// ----------------------------------------------------- witness and steer

struct EvalOptions {
  std::string near_path, far_path;
  double ell{0.0};
  int bins{64};
  std::string pairing{"n-minus-s-plus"};
  std::string criterion;
  std::string direction{"1from2"};
  double sep{0.0};  // coarse-grained witness needs the slit separation
  int n_max{64};
  std::string svg_path;
};

std::pair<ModularJoint, ModularJoint> load_and_fold(const EvalOptions& o) {
  const ModularConfig cfg{o.ell, o.bins};
  cfg.validate();
  const JointDistribution near = normalize_counts(load_coincidence_csv(o.near_path));
  const JointDistribution far = normalize_counts(load_coincidence_csv(o.far_path));
  ModularJoint near_mod = fold_joint(near, cfg);
  ModularJoint far_mod = fold_joint(far, cfg);
  warn_if_incommensurate(near_mod, "near");
  warn_if_incommensurate(far_mod, "far");
  return {std::move(near_mod), std::move(far_mod)};
}

nlohmann::ordered_json eval_config(const EvalOptions& o, const char* direction_or_null) {
  nlohmann::ordered_json config = {{"near", o.near_path},
                                   {"far", o.far_path},
                                   {"ell", o.ell},
                                   {"bins", o.bins},
                                   {"n_max", o.n_max}};
  if (direction_or_null)
    config["direction"] = direction_or_null;
  else
    config["pairing"] = o.pairing;
  return config;
}

int run_witness(const EvalOptions& o, const OutputOptions& out) {
  const auto [near_mod, far_mod] = load_and_fold(o);
  const Pairing pairing = parse_pairing(o.pairing);

  RunReport report;
  report.command = "witness";
  report.config = eval_config(o, nullptr);

  if (o.criterion == "var-ent" || o.criterion == "both") {
    const double c = constant_c(o.n_max).c_value;
    report.results.push_back(variance_entanglement(near_mod, far_mod, o.ell, c, pairing));
  }
  if (o.criterion == "ent-ent" || o.criterion == "both")
    report.results.push_back(entropic_entanglement(near_mod, far_mod, o.ell, pairing));
  if (o.criterion == "coarse-grained") {
    if (!(o.sep > 0.0))
      throw std::invalid_argument("witness: --sep is required for the coarse-grained criterion");
    report.results.push_back(coarse_grained_entropic(near_mod, far_mod, o.ell, o.sep,
                                                     far_mod.remainder_bin_width(), pairing));
    report.config["sep"] = o.sep;
  }

  if (!o.svg_path.empty()) {
    std::vector<std::string> labels;
    std::vector<double> values;
    for (const auto& r : report.results) {
      labels.push_back(criterion_name(r.criterion));
      values.push_back(r.violation);
    }
    write_svg_bar_chart(o.svg_path, labels, values, "witness violations (negative = detected)");
  }
  emit(report, out);
  return 0;
}

int run_steer(const EvalOptions& o, const OutputOptions& out) {
  const auto [near_mod, far_mod] = load_and_fold(o);
  const SteeringDirection dir = parse_direction(o.direction);

  RunReport report;
  report.command = "steer";
  report.config = eval_config(o, o.direction.c_str());

  if (o.criterion == "var-steer" || o.criterion == "both") {
    const double c = constant_c(o.n_max).c_value;
    report.results.push_back(variance_steering(near_mod, far_mod, o.ell, c, dir));
  }
  if (o.criterion == "ent-steer" || o.criterion == "both")
    report.results.push_back(entropic_steering(near_mod, far_mod, o.ell, dir));
  emit(report, out);
  return 0;
}

// ------------------------------------------------------------- constant-c

int run_constant_c(int n_max, const OutputOptions& out) {
  const EigenReport r = constant_c(n_max);
  RunReport report;
  report.command = "constant-c";
  report.config = {{"n_max", r.n_max}};
  nlohmann::ordered_json j = to_json(report);
  j["c_value"] = r.c_value;
  j["convergence_delta"] = r.convergence_delta;
  if (out.timestamp) j["provenance"]["timestamp"] = current_timestamp_utc();
  const std::string text = j.dump(2) + "\n";
  if (out.out_path.empty())
    std::cout << text;
  else
    write_text_atomic(out.out_path, text);
  return 0;
}

// --------------------------------------------------------------- scan-ell

struct ScanOptions {
  std::string near_path, far_path;  // empty = simulate internally
  int slits{2};
  double width{0.0}, sep{0.0};
  int cells_per_period{256};
  int far_periods{9};
  double ratio_min{0.5}, ratio_max{2.0}, ratio_step{0.025};
  int bins{32};
  std::string curve_path, svg_path;
};

int run_scan(const ScanOptions& o, const OutputOptions& out) {
  JointDistribution near, far;
  double sep = o.sep;
  if (o.near_path.empty() != o.far_path.empty())
    throw std::invalid_argument("scan-ell: --near and --far must be given together");
  if (!o.near_path.empty() && !o.far_path.empty()) {
    if (!(sep > 0.0)) throw std::invalid_argument("scan-ell: --sep is required with input files");
    near = normalize_counts(load_coincidence_csv(o.near_path));
    far = normalize_counts(load_coincidence_csv(o.far_path));
  } else {
    const SlitSpec spec = resolve_slit_spec(o.slits, o.width, o.sep);
    sep = spec.separation_mm;
    near = ideal_near_field(spec, default_near_axis(spec, o.cells_per_period));
    far = ideal_far_field(spec, default_far_axis(spec, o.cells_per_period, o.far_periods),
                          FarFieldMode::comb);
  }

  std::vector<double> ratios;
  for (double r = o.ratio_min; r <= o.ratio_max + 1e-12; r += o.ratio_step) ratios.push_back(r);
  const ScanCurve curve = scan_ell(near, far, sep, ratios, o.bins);

  if (!o.curve_path.empty()) {
    std::string csv = "ratio,violation\n";
    for (std::size_t i = 0; i < curve.ratios.size(); ++i) {
      char buf[64];
      std::snprintf(buf, sizeof(buf), "%.17g,%.17g\n", curve.ratios[i], curve.violations[i]);
      csv += buf;
    }
    write_text_atomic(o.curve_path, csv);
  }
  if (!o.svg_path.empty())
    write_svg_line_chart(o.svg_path, curve.ratios, curve.violations,
                         "coarse-grained entropic violation", "ell / separation", "violation");

  RunReport report;
  report.command = "scan-ell";
  report.config = {{"slits", o.slits},
                   {"separation_mm", sep},
                   {"bins", o.bins},
                   {"grid_cells_per_period", o.cells_per_period},
                   {"ratio_min", o.ratio_min},
                   {"ratio_max", o.ratio_max},
                   {"ratio_step", o.ratio_step}};
  nlohmann::ordered_json j = to_json(report);
  j["argmin_ratio"] = curve.argmin_ratio;
  j["curve"] = nlohmann::ordered_json::array();
  for (std::size_t i = 0; i < curve.ratios.size(); ++i)
    j["curve"].push_back({{"ratio", curve.ratios[i]}, {"violation", curve.violations[i]}});
  if (out.timestamp) j["provenance"]["timestamp"] = current_timestamp_utc();
  const std::string text = j.dump(2) + "\n";
  if (out.out_path.empty())
    std::cout << text;
  else
    write_text_atomic(out.out_path, text);
  return 0;
}

// --------------------------------------------------------------- resample

struct ResampleOptions {
  std::string near_path, far_path;
  double ell{0.0};
  int bins{64};
  std::string criterion{"ent-ent"};
  std::string pairing{"n-minus-s-plus"};
  std::string direction{"1from2"};
  double sep{0.0};
  int n_max{64};
  int trials{500};
  std::uint64_t seed{1};
};

int run_resample(const ResampleOptions& o, const OutputOptions& out) {
  const CountsMap near = load_coincidence_csv(o.near_path);
  const CountsMap far = load_coincidence_csv(o.far_path);

  WitnessSettings s;
  s.ell = o.ell;
  s.bins_per_period = o.bins;
  s.pairing = parse_pairing(o.pairing);
  s.direction = parse_direction(o.direction);
  if (o.criterion == "var-ent") s.criterion = Criterion::var_ent;
  else if (o.criterion == "ent-ent") s.criterion = Criterion::ent_ent;
  else if (o.criterion == "var-steer") s.criterion = Criterion::var_steer;
  else if (o.criterion == "ent-steer") s.criterion = Criterion::ent_steer;
  else if (o.criterion == "coarse-grained") s.criterion = Criterion::coarse_grained;
  else throw std::invalid_argument("resample: unknown criterion " + o.criterion);
  if (s.criterion == Criterion::var_ent || s.criterion == Criterion::var_steer)
    s.c_value = constant_c(o.n_max).c_value;
  if (s.criterion == Criterion::coarse_grained) {
    if (!(o.sep > 0.0))
      throw std::invalid_argument("resample: --sep is required for the coarse-grained criterion");
    s.coarse_separation = o.sep;
  }

  const ModularConfig cfg{o.ell, o.bins};
  const ModularJoint near_mod = fold_joint(normalize_counts(near), cfg);
  const ModularJoint far_mod = fold_joint(normalize_counts(far), cfg);
  WitnessResult observed = evaluate_criterion(near_mod, far_mod, s);

  const ResampleStats stats = poisson_uncertainty(near, far, s, o.trials, o.seed);
  observed.sd = stats.sd;

  RunReport report;
  report.command = "resample";
  report.config = {{"near", o.near_path}, {"far", o.far_path},   {"ell", o.ell},
                   {"bins", o.bins},      {"criterion", o.criterion}, {"pairing", o.pairing},
                   {"direction", o.direction}, {"trials", o.trials}, {"seed", o.seed}};
  report.results.push_back(observed);
  nlohmann::ordered_json j = to_json(report);
  j["resample"] = {{"mean_violation", stats.mean}, {"sd", stats.sd}};
  if (out.timestamp) j["provenance"]["timestamp"] = current_timestamp_utc();
  const std::string text = out.format == "csv" ? to_csv(report.results) : j.dump(2) + "\n";
  if (out.out_path.empty())
    std::cout << text;
  else
    write_text_atomic(out.out_path, text);
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"modular-variable entanglement and EPR-steering analysis"};
  app.require_subcommand(1);

  SimulateOptions sim;
  OutputOptions sim_out;
  CLI::App* simulate = app.add_subcommand("simulate", "Generate ideal D-slit coincidence maps");
  simulate->add_option("--slits", sim.slits, "Number of slits D")->check(CLI::Range(2, 64))
      ->capture_default_str();
  simulate->add_option("--width", sim.width, "Slit width a (mm); default: paper geometry");
  simulate->add_option("--sep", sim.sep, "Slit separation d (mm); default: paper geometry");
  simulate->add_option("--mode", sim.mode, "Far-field envelope")
      ->check(CLI::IsMember({"comb", "physical"}))->capture_default_str();
  simulate->add_option("--grid", sim.cells_per_period, "Grid cells per modular period")
      ->check(CLI::Range(8, 4096))->capture_default_str();
  simulate->add_option("--periods", sim.far_periods, "Momentum periods in the far-field window")
      ->check(CLI::Range(1, 64))->capture_default_str();
  simulate->add_option("--noise", sim.noise, "Uniform background fraction in the near field")
      ->check(CLI::Range(0.0, 1.0))->capture_default_str();
  simulate->add_option("--shots", sim.shots, "Total simulated coincidence counts per map")
      ->capture_default_str();
  simulate->add_option("--magnification", sim.optics.magnification, "Near-field magnification M")
      ->capture_default_str();
  simulate->add_option("--focal", sim.optics.focal_mm, "Far-field lens focal length (mm)")
      ->capture_default_str();
  simulate->add_option("--wavelength", sim.optics.wavelength_nm, "Photon wavelength (nm)")
      ->capture_default_str();
  simulate->add_option("--out-near", sim.out_near, "Near-field CSV path")->required();
  simulate->add_option("--out-far", sim.out_far, "Far-field CSV path")->required();
  add_output_flags(simulate, sim_out);

  EvalOptions wit;
  OutputOptions wit_out;
  CLI::App* witness = app.add_subcommand("witness", "Evaluate entanglement witnesses");
  witness->add_option("--near", wit.near_path, "Near-field coincidence CSV")->required();
  witness->add_option("--far", wit.far_path, "Far-field coincidence CSV")->required();
  witness->add_option("--ell", wit.ell, "Modular scale factor (mm)")->required();
  witness->add_option("--bins", wit.bins, "Remainder bins per period")->check(CLI::Range(4, 4096))
      ->capture_default_str();
  witness->add_option("--pairing", wit.pairing, "Global-variable pairing")
      ->check(CLI::IsMember({"n-minus-s-plus", "n-plus-s-minus"}))->capture_default_str();
  wit.criterion = "both";
  witness->add_option("--criterion", wit.criterion, "Which witness to evaluate")
      ->check(CLI::IsMember({"var-ent", "ent-ent", "coarse-grained", "both"}))
      ->capture_default_str();
  witness->add_option("--sep", wit.sep, "Slit separation d (mm), for coarse-grained");
  witness->add_option("--nmax", wit.n_max, "Uncertainty-constant truncation order")
      ->capture_default_str();
  witness->add_option("--svg", wit.svg_path, "Write an SVG bar chart of the violations");
  add_output_flags(witness, wit_out);

  EvalOptions steer;
  OutputOptions steer_out;
  CLI::App* steer_cmd = app.add_subcommand("steer", "Evaluate EPR-steering criteria");
  steer_cmd->add_option("--near", steer.near_path, "Near-field coincidence CSV")->required();
  steer_cmd->add_option("--far", steer.far_path, "Far-field coincidence CSV")->required();
  steer_cmd->add_option("--ell", steer.ell, "Modular scale factor (mm)")->required();
  steer_cmd->add_option("--bins", steer.bins, "Remainder bins per period")
      ->check(CLI::Range(4, 4096))->capture_default_str();
  steer.criterion = "both";
  steer_cmd->add_option("--criterion", steer.criterion, "Which criterion to evaluate")
      ->check(CLI::IsMember({"var-steer", "ent-steer", "both"}))->capture_default_str();
  steer_cmd->add_option("--direction", steer.direction, "Inference direction")
      ->check(CLI::IsMember({"1from2", "2from1"}))->capture_default_str();
  steer_cmd->add_option("--nmax", steer.n_max, "Uncertainty-constant truncation order")
      ->capture_default_str();
  add_output_flags(steer_cmd, steer_out);

  int cc_nmax = 64;
  OutputOptions cc_out;
  CLI::App* constc = app.add_subcommand("constant-c", "Compute the uncertainty constant C");
  constc->add_option("--nmax", cc_nmax, "Truncation order of the integer basis")
      ->check(CLI::Range(0, 100000))->capture_default_str();
  add_output_flags(constc, cc_out);

  ScanOptions scan;
  OutputOptions scan_out;
  CLI::App* scan_cmd =
      app.add_subcommand("scan-ell", "Scan the coarse-grained witness over ell/separation");
  scan_cmd->add_option("--near", scan.near_path, "Near-field coincidence CSV (optional)");
  scan_cmd->add_option("--far", scan.far_path, "Far-field coincidence CSV (optional)");
  scan_cmd->add_option("--slits", scan.slits, "Number of slits D for internal simulation")
      ->check(CLI::Range(2, 64))->capture_default_str();
  scan_cmd->add_option("--width", scan.width, "Slit width a (mm)");
  scan_cmd->add_option("--sep", scan.sep, "Slit separation d (mm)");
  scan_cmd->add_option("--grid", scan.cells_per_period, "Grid cells per modular period")
      ->check(CLI::Range(8, 4096))->capture_default_str();
  scan_cmd->add_option("--periods", scan.far_periods, "Momentum periods in the far-field window")
      ->check(CLI::Range(1, 64))->capture_default_str();
  scan_cmd->add_option("--ratio-min", scan.ratio_min, "Smallest ell/separation")
      ->capture_default_str();
  scan_cmd->add_option("--ratio-max", scan.ratio_max, "Largest ell/separation")
      ->capture_default_str();
  scan_cmd->add_option("--ratio-step", scan.ratio_step, "Scan step")->capture_default_str();
  scan_cmd->add_option("--bins", scan.bins, "Remainder bins per period")
      ->check(CLI::Range(4, 4096))->capture_default_str();
  scan_cmd->add_option("--curve", scan.curve_path, "Write the curve as CSV plot data");
  scan_cmd->add_option("--svg", scan.svg_path, "Write an SVG line chart of the curve");
  add_output_flags(scan_cmd, scan_out);

  ResampleOptions res;
  OutputOptions res_out;
  CLI::App* resample =
      app.add_subcommand("resample", "Poisson-resampled error bars for a criterion");
  resample->add_option("--near", res.near_path, "Near-field coincidence CSV")->required();
  resample->add_option("--far", res.far_path, "Far-field coincidence CSV")->required();
  resample->add_option("--ell", res.ell, "Modular scale factor (mm)")->required();
  resample->add_option("--bins", res.bins, "Remainder bins per period")->check(CLI::Range(4, 4096))
      ->capture_default_str();
  resample->add_option("--criterion", res.criterion, "Criterion to resample")
      ->check(CLI::IsMember({"var-ent", "ent-ent", "var-steer", "ent-steer", "coarse-grained"}))
      ->capture_default_str();
  resample->add_option("--pairing", res.pairing, "Global-variable pairing")
      ->check(CLI::IsMember({"n-minus-s-plus", "n-plus-s-minus"}))->capture_default_str();
  resample->add_option("--direction", res.direction, "Steering inference direction")
      ->check(CLI::IsMember({"1from2", "2from1"}))->capture_default_str();
  resample->add_option("--sep", res.sep, "Slit separation d (mm), for coarse-grained");
  resample->add_option("--nmax", res.n_max, "Uncertainty-constant truncation order")
      ->capture_default_str();
  resample->add_option("--trials", res.trials, "Number of Poisson redraws")
      ->check(CLI::Range(2, 1000000))->capture_default_str();
  resample->add_option("--seed", res.seed, "Random seed")->capture_default_str();
  add_output_flags(resample, res_out);

  try {
    app.parse(argc, argv);
    if (simulate->parsed()) return run_simulate(sim, sim_out);
    if (witness->parsed()) return run_witness(wit, wit_out);
    if (steer_cmd->parsed()) return run_steer(steer, steer_out);
    if (constc->parsed()) return run_constant_c(cc_nmax, cc_out);
    if (scan_cmd->parsed()) return run_scan(scan, scan_out);
    if (resample->parsed()) return run_resample(res, res_out);
    return 1;
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : 1;
  } catch (const io_error& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  }
}
