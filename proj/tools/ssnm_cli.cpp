// Command-line front end: bound evaluation, Monte Carlo MSE, and the
// standard sweeps with CSV / SVG output.
//
// Exit codes: 0 success, 2 usage or validation error, 3 numerical error,
// 4 I/O error.

#include <unistd.h>

#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <iostream>
#include <optional>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "ssnm/ssnm.hpp"

namespace {

enum ExitCode { kOk = 0, kUsage = 2, kNumerical = 3, kIo = 4 };

void diagnose(const std::string& msg) {
  const bool color = std::getenv("NO_COLOR") == nullptr && ::isatty(STDERR_FILENO);
  std::cerr << (color ? "\033[1;31merror:\033[0m " : "error: ") << msg << '\n';
}

struct Options {
  std::optional<long> n, s;
  std::optional<double> sigma, t;
  std::optional<std::uint64_t> seed;
  std::optional<long> trials;
  std::string out, config, save_config, format = "csv";
  bool log_y = false;
  std::vector<double> x0, pattern, scales;
  std::string name;
  std::optional<double> snr_min, snr_max;
  std::optional<int> points;
  std::vector<std::string> bounds, estimators;
};

ssnm::ExperimentSpec build_spec(const Options& o, ssnm::ExperimentSpec base) {
  ssnm::ExperimentSpec spec = std::move(base);
  if (!o.config.empty())
    spec = ssnm::from_json(nlohmann::json::parse(ssnm::read_file(o.config), nullptr, true, true),
                           spec);
  long n = o.n.value_or(spec.model.n());
  if (!o.n && !o.x0.empty() && o.config.empty()) n = static_cast<long>(o.x0.size());
  spec.model = ssnm::ModelConfig(n, o.s.value_or(spec.model.s()), o.sigma.value_or(spec.model.sigma()));
  spec.mc = ssnm::McConfig(o.trials.value_or(spec.mc.trials), o.seed.value_or(spec.mc.seed));
  if (!o.name.empty()) spec.name = o.name;
  if (o.snr_min) spec.grid.min_db = *o.snr_min;
  if (o.snr_max) spec.grid.max_db = *o.snr_max;
  if (o.points) spec.grid.points = *o.points;
  if (!o.pattern.empty()) spec.families = {{"family", o.pattern, o.scales}};
  else if (!o.scales.empty() && !spec.families.empty()) spec.families.front().scales = o.scales;
  if (!o.bounds.empty()) spec.bounds = o.bounds;
  if (!o.estimators.empty()) spec.estimators = o.estimators;
  return spec;
}

ssnm::ParamVector parse_x0(const Options& o, const ssnm::ModelConfig& model) {
  if (o.x0.empty()) throw ssnm::InvalidArgument("--x0 is required");
  ssnm::ParamVector x0(Eigen::Map<const ssnm::Vector>(o.x0.data(), static_cast<ssnm::Index>(o.x0.size())));
  ssnm::require_admissible(x0, model);
  return x0;
}

void emit(const ssnm::ResultTable& table, const Options& o, const ssnm::SvgStyle& style) {
  const bool want_csv = o.format == "csv" || o.format == "both";
  const bool want_svg = o.format == "svg" || o.format == "both";
  if (o.out.empty()) {
    if (want_csv && want_svg) throw ssnm::InvalidArgument("--format both needs --out");
    std::cout << (want_csv ? ssnm::to_csv(table) : ssnm::to_svg(table, style));
    return;
  }
  std::filesystem::path base(o.out);
  if (base.extension() == ".csv" || base.extension() == ".svg") base.replace_extension();
  // Render both before writing either so a failure leaves no partial output.
  const std::string csv = want_csv ? ssnm::to_csv(table) : std::string();
  const std::string svg = want_svg ? ssnm::to_svg(table, style) : std::string();
  if (want_csv) ssnm::write_file_atomic(std::filesystem::path(base).concat(".csv"), csv);
  if (want_svg) ssnm::write_file_atomic(std::filesystem::path(base).concat(".svg"), svg);
}

void maybe_save_config(const Options& o, const ssnm::ExperimentSpec& spec) {
  if (!o.save_config.empty()) ssnm::write_file_atomic(o.save_config, ssnm::to_json(spec).dump(2) + "\n");
}

std::string fmt(double v) { return ssnm::format_number(v, 12); }

int run_bounds(const Options& o) {
  const auto spec = build_spec(o, ssnm::ExperimentSpec{});
  const auto x0 = parse_x0(o, spec.model);
  std::cout << "SNR_dB " << fmt(ssnm::snr_db(x0, spec.model)) << '\n'
            << "CRB " << fmt(ssnm::crb(x0, spec.model).value) << '\n'
            << "HCRB " << fmt(ssnm::hcrb_limit(x0, spec.model).value) << '\n'
            << "BB_c " << fmt(ssnm::bb_c(x0, spec.model).value) << '\n';
  if (o.t) {
    const double sigma = spec.model.sigma();
    std::cout << "HCRB_t " << fmt(ssnm::hcrb_finite(x0, ssnm::build_test_points_hcrb(x0, *o.t, spec.model), sigma).value) << '\n'
              << "CRB_t " << fmt(ssnm::hcrb_finite(x0, ssnm::build_test_points_crb(x0, *o.t, spec.model), sigma).value) << '\n';
  }
  return kOk;
}

int run_mse(const Options& o) {
  ssnm::ExperimentSpec base;
  base.estimators = {"LS", "ML", "HT", "ORACLE"};
  const auto spec = build_spec(o, base);
  const auto x0 = parse_x0(o, spec.model);
  std::vector<ssnm::Estimator> est;
  std::vector<std::string> names;
  for (const auto& e : spec.estimators) {
    names.push_back(ssnm::detail::canonical_estimator(e));
    est.push_back(ssnm::detail::make_estimator(names.back(), x0, spec.model));
  }
  const auto mse = ssnm::estimate_mse(est, x0, spec.model, spec.mc);
  std::cout << "estimator,mse,std_error,trials,seed\n";
  for (std::size_t i = 0; i < mse.size(); ++i)
    std::cout << names[i] << ',' << fmt(mse[i].mean) << ',' << fmt(mse[i].std_error) << ','
              << mse[i].trials << ',' << mse[i].seed << '\n';
  return kOk;
}

int run_table(const Options& o, const std::string& which) {
  ssnm::ExperimentSpec base = which == "fig1"   ? ssnm::default_fig1_spec()
                              : which == "fig2" ? ssnm::default_fig2_spec()
                                                : ssnm::ExperimentSpec{};
  if (which == "sweep") {
    base.bounds = {"CRB", "HCRB", "BB_c"};
    base.estimators = {"ML", "HT"};
  }
  const auto spec = build_spec(o, base);
  maybe_save_config(o, spec);
  ssnm::SvgStyle style;
  style.log_y = o.log_y;
  style.title = spec.name;
  ssnm::ResultTable table;
  if (which == "fig2") {
    style.y_label = "BB_c / HCRB";
    table = ssnm::run_fig2(spec);
  } else {
    table = which == "fig1" ? ssnm::run_fig1(spec) : ssnm::run_sweep(spec);
  }
  emit(table, o, style);
  return kOk;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Bounds and estimators for the sparse signal-in-noise model"};
  app.require_subcommand(1);
  app.fallthrough();
  Options o;

  app.add_option("--n", o.n, "Ambient dimension N");
  app.add_option("--s", o.s, "Sparsity S");
  app.add_option("--sigma", o.sigma, "Noise standard deviation");
  app.add_option("--seed", o.seed, "Monte Carlo seed");
  app.add_option("--trials", o.trials, "Monte Carlo trials per point");
  app.add_option("--out", o.out, "Output path (extension replaced per format)");
  app.add_option("--config", o.config, "JSON experiment config; flags override it")->check(CLI::ExistingFile);
  app.add_option("--format", o.format, "Output format")->check(CLI::IsMember({"csv", "svg", "both"}));
  app.add_option("--save-config", o.save_config, "Write the resolved experiment config as JSON");
  app.add_flag("--log-y", o.log_y, "Logarithmic y axis in SVG output");

  auto* bounds = app.add_subcommand("bounds", "Print CRB, HCRB and BB_c at x0");
  bounds->add_option("--x0", o.x0, "Parameter vector, comma separated")->delimiter(',')->required();
  bounds->add_option("--t", o.t, "Also print finite-t HCRBs for this step")->check(CLI::PositiveNumber);

  auto* mse = app.add_subcommand("mse", "Monte Carlo MSE of estimators at x0");
  mse->add_option("--x0", o.x0, "Parameter vector, comma separated")->delimiter(',')->required();
  mse->add_option("--estimators", o.estimators, "LS, ML, HT, ORACLE")->delimiter(',');

  auto* fig1 = app.add_subcommand("fig1", "ML/HT MSE against CRB, HCRB, BB_c on the all-equal family");
  auto* fig2 = app.add_subcommand("fig2", "BB_c / HCRB on three families");

  auto* sweep = app.add_subcommand("sweep", "Bounds and MSEs along a family c * pattern");
  sweep->add_option("--pattern", o.pattern, "Base pattern, comma separated")->delimiter(',');
  sweep->add_option("--scales", o.scales, "Explicit scale factors c (instead of the SNR grid)")->delimiter(',');
  sweep->add_option("--name", o.name, "Experiment name");
  sweep->add_option("--bounds", o.bounds, "CRB, HCRB, BB_c")->delimiter(',');
  sweep->add_option("--estimators", o.estimators, "LS, ML, HT, ORACLE")->delimiter(',');
  for (auto* sub : {fig1, fig2, sweep}) {
    sub->add_option("--snr-min", o.snr_min, "Lowest grid SNR (dB)");
    sub->add_option("--snr-max", o.snr_max, "Highest grid SNR (dB)");
    sub->add_option("--points", o.points, "Grid points");
  }

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return e.get_exit_code() == 0 ? kOk : kUsage;
  }

  try {
    if (*bounds) return run_bounds(o);
    if (*mse) return run_mse(o);
    if (*fig1) return run_table(o, "fig1");
    if (*fig2) return run_table(o, "fig2");
    return run_table(o, "sweep");
  } catch (const ssnm::Error& e) {
    diagnose(e.what());
    switch (e.category()) {
      case ssnm::Error::Category::Validation: return kUsage;
      case ssnm::Error::Category::Numerical: return kNumerical;
      case ssnm::Error::Category::Io: return kIo;
    }
  } catch (const nlohmann::json::exception& e) {
    diagnose(std::string("bad config: ") + e.what());
    return kUsage;
  } catch (const std::exception& e) {
    diagnose(e.what());
  }
  return 1;
}
