#pragma once

/** @file
 * Parameter sweeps over families {c * pattern : c > 0} and the two standard
 * experiments: MSE of ML/HT against CRB, HCRB and BB_c on the all-equal
 * family, and BB_c / HCRB on three families. Every reported quantity is
 * divided by sigma^2.
 */

#include <algorithm>
#include <atomic>
#include <cctype>
#include <cmath>
#include <exception>
#include <string>
#include <thread>
#include <vector>

#include "json.hpp"
#include "ssnm/bounds.hpp"
#include "ssnm/core.hpp"
#include "ssnm/estimators.hpp"
#include "ssnm/montecarlo.hpp"
#include "ssnm/table.hpp"

namespace ssnm {

/// Evenly spaced SNR values in dB (equivalently, log-spaced scale factors c).
struct SnrGrid {
  double min_db = -20.0;
  double max_db = 20.0;
  int points = 50;

  std::vector<double> values() const {
    if (points < 1) throw InvalidArgument("SNR grid needs at least one point");
    if (points == 1) return {min_db};
    if (!(max_db > min_db)) throw InvalidArgument("SNR grid needs max > min");
    std::vector<double> v(static_cast<std::size_t>(points));
    for (int i = 0; i < points; ++i) v[static_cast<std::size_t>(i)] = min_db + (max_db - min_db) * i / (points - 1);
    return v;
  }
};

/// {c * pattern}; scales are either explicit or derived from an SNR grid.
struct Family {
  std::string name;
  std::vector<double> pattern;
  std::vector<double> scales;

  ParamVector at(double c) const {
    Vector v = Eigen::Map<const Vector>(pattern.data(), static_cast<Index>(pattern.size())) * c;
    return ParamVector(std::move(v));
  }
};

/// Scale c at which c * pattern has the given SNR under @p model.
inline double scale_for_snr(const std::vector<double>& pattern, const ModelConfig& model,
                            double snr_db) {
  double energy = 0.0;
  for (double p : pattern) energy += p * p;
  if (energy == 0.0) throw DegenerateInput("family pattern is the zero vector");
  return std::sqrt(std::pow(10.0, snr_db / 10.0) * static_cast<double>(model.n()) *
                   model.variance() / energy);
}

struct ExperimentSpec {
  std::string name = "sweep";
  ModelConfig model{10, 4, 1.0};
  std::vector<Family> families;
  SnrGrid grid;
  std::vector<std::string> bounds;
  std::vector<std::string> estimators;
  McConfig mc{100000, 42};

  /// Throws unless every family has the right length, positive scales and
  /// members in X_S.
  void validate() const {
    if (families.empty()) throw InvalidArgument("experiment '" + name + "' has no family");
    for (const auto& f : families) {
      if (static_cast<Index>(f.pattern.size()) != model.n())
        throw DimensionMismatch("family '" + f.name + "' has length " +
                                std::to_string(f.pattern.size()) + ", N=" +
                                std::to_string(model.n()));
      require_admissible(f.at(1.0), model);
      for (double c : f.scales)
        if (!(c > 0.0) || !std::isfinite(c))
          throw InvalidArgument("family '" + f.name + "' has a non-positive scale factor");
    }
  }

  /// Scale factors of @p f: explicit ones, else one per grid SNR.
  std::vector<double> scales(const Family& f) const {
    if (!f.scales.empty()) return f.scales;
    std::vector<double> out;
    for (double snr : grid.values()) out.push_back(scale_for_snr(f.pattern, model, snr));
    return out;
  }
};

inline const std::vector<double>& pattern_r() {
  static const std::vector<double> p{1, 1, 1, 1, 0, 0, 0, 0, 0, 0};
  return p;
}
inline const std::vector<double>& pattern_r2() {
  static const std::vector<double> p{0.1, 1, 1, 1, 0, 0, 0, 0, 0, 0};
  return p;
}
inline const std::vector<double>& pattern_r3() {
  static const std::vector<double> p{10, 1, 1, 1, 0, 0, 0, 0, 0, 0};
  return p;
}

inline ExperimentSpec default_fig1_spec() {
  ExperimentSpec spec;
  spec.name = "fig1";
  spec.families = {{"R", pattern_r(), {}}};
  spec.grid = {-20.0, 20.0, 50};
  spec.bounds = {"CRB", "HCRB", "BB_c"};
  spec.estimators = {"ML", "HT"};
  return spec;
}

inline ExperimentSpec default_fig2_spec() {
  ExperimentSpec spec;
  spec.name = "fig2";
  spec.families = {{"R", pattern_r(), {}}, {"R2", pattern_r2(), {}}, {"R3", pattern_r3(), {}}};
  spec.grid = {-20.0, 30.0, 50};
  return spec;
}

namespace detail {

inline std::string upper(std::string s) {
  for (auto& c : s) c = static_cast<char>(std::toupper(static_cast<unsigned char>(c)));
  return s;
}

inline std::string canonical_bound(const std::string& name) {
  const std::string u = upper(name);
  if (u == "CRB") return "CRB";
  if (u == "HCRB") return "HCRB";
  if (u == "BB_C" || u == "BBC") return "BB_c";
  throw InvalidArgument("unknown bound '" + name + "' (expected CRB, HCRB, BB_c)");
}

inline std::string canonical_estimator(const std::string& name) {
  const std::string u = upper(name);
  if (u == "LS" || u == "ML" || u == "HT" || u == "ORACLE") return u;
  throw InvalidArgument("unknown estimator '" + name + "' (expected LS, ML, HT, ORACLE)");
}

inline double bound_value(const std::string& kind, const ParamVector& x0, const ModelConfig& m) {
  if (kind == "CRB") return crb(x0, m).value;
  if (kind == "HCRB") return hcrb_limit(x0, m).value;
  return bb_c(x0, m).value;
}

inline Estimator make_estimator(const std::string& kind, const ParamVector& x0,
                                const ModelConfig& m) {
  if (kind == "LS") return [](const Observation& y) { return ls(y); };
  if (kind == "ML") return [s = m.s()](const Observation& y) { return ml(y, s); };
  if (kind == "HT")
    return [t = universal_threshold(m)](const Observation& y) { return ht(y, t); };
  return ConstrainedOracle(x0, m);
}

/// Runs fn(i) for i in [0, count) on a small worker pool; rethrows the
/// exception of the lowest failing index.
template <class Fn>
void parallel_for(std::size_t count, Fn&& fn) {
  const std::size_t workers =
      std::min<std::size_t>(count, std::max(1u, std::thread::hardware_concurrency()));
  std::vector<std::exception_ptr> errors(count);
  std::atomic<std::size_t> next{0};
  auto work = [&] {
    for (std::size_t i = next++; i < count; i = next++) {
      try {
        fn(i);
      } catch (...) {
        errors[i] = std::current_exception();
      }
    }
  };
  if (workers <= 1) {
    work();
  } else {
    std::vector<std::thread> pool;
    for (std::size_t w = 0; w < workers; ++w) pool.emplace_back(work);
    for (auto& t : pool) t.join();
  }
  for (auto& e : errors)
    if (e) std::rethrow_exception(e);
}

}  // namespace detail

/**
 * One row per scale factor of the first family: requested bounds and Monte
 * Carlo MSEs (with standard errors), all divided by sigma^2.
 */
inline ResultTable run_sweep(const ExperimentSpec& spec) {
  spec.validate();
  const Family& family = spec.families.front();
  std::vector<std::string> bound_kinds, est_kinds;
  for (const auto& b : spec.bounds) bound_kinds.push_back(detail::canonical_bound(b));
  for (const auto& e : spec.estimators) est_kinds.push_back(detail::canonical_estimator(e));

  const std::vector<double> scales = spec.scales(family);
  const std::size_t rows = scales.size();
  const double s2 = spec.model.variance();

  ResultTable table;
  table.snr_db.resize(rows);
  for (const auto& b : bound_kinds) table.series.push_back({b, std::vector<double>(rows), std::nullopt});
  for (const auto& e : est_kinds)
    table.series.push_back({e, std::vector<double>(rows), std::vector<double>(rows)});

  detail::parallel_for(rows, [&](std::size_t r) {
    const ParamVector x0 = family.at(scales[r]);
    table.snr_db[r] = snr_db(x0, spec.model);
    std::size_t col = 0;
    for (const auto& b : bound_kinds) table.series[col++].values[r] = detail::bound_value(b, x0, spec.model) / s2;
    if (est_kinds.empty()) return;
    std::vector<Estimator> est;
    for (const auto& e : est_kinds) est.push_back(detail::make_estimator(e, x0, spec.model));
    const auto mse = estimate_mse(est, x0, spec.model, spec.mc);
    for (std::size_t e = 0; e < mse.size(); ++e, ++col) {
      table.series[col].values[r] = mse[e].mean / s2;
      (*table.series[col].std_error)[r] = mse[e].std_error / s2;
    }
  });
  table.sort_rows();
  table.validate();
  return table;
}

/// CRB, HCRB, BB_c and the ML / HT Monte Carlo MSEs on the first family.
inline ResultTable run_fig1(const ExperimentSpec& spec) {
  ExperimentSpec s = spec;
  if (s.bounds.empty()) s.bounds = {"CRB", "HCRB", "BB_c"};
  if (s.estimators.empty()) s.estimators = {"ML", "HT"};
  return run_sweep(s);
}

/// BB_c / HCRB per family on the grid SNRs (closed form, no Monte Carlo).
inline ResultTable run_fig2(const ExperimentSpec& spec) {
  spec.validate();
  const std::vector<double> snrs = spec.grid.values();
  ResultTable table;
  table.snr_db = snrs;
  for (const auto& f : spec.families) {
    if (!f.scales.empty())
      throw InvalidArgument("the ratio experiment uses the SNR grid; family '" + f.name +
                            "' must not list explicit scales");
    table.series.push_back({f.name, std::vector<double>(snrs.size()), std::nullopt});
  }
  detail::parallel_for(snrs.size() * spec.families.size(), [&](std::size_t job) {
    const std::size_t fi = job / snrs.size(), r = job % snrs.size();
    const Family& f = spec.families[fi];
    const ParamVector x0 = f.at(scale_for_snr(f.pattern, spec.model, snrs[r]));
    table.series[fi].values[r] = bb_c(x0, spec.model).value / hcrb_limit(x0, spec.model).value;
  });
  table.validate();
  return table;
}

// JSON config ---------------------------------------------------------------

inline nlohmann::json to_json(const ExperimentSpec& spec) {
  nlohmann::json j;
  j["name"] = spec.name;
  j["n"] = spec.model.n();
  j["s"] = spec.model.s();
  j["sigma"] = spec.model.sigma();
  j["trials"] = spec.mc.trials;
  j["seed"] = spec.mc.seed;
  j["grid"] = {{"min_db", spec.grid.min_db}, {"max_db", spec.grid.max_db}, {"points", spec.grid.points}};
  j["families"] = nlohmann::json::array();
  for (const auto& f : spec.families) {
    nlohmann::json jf{{"name", f.name}, {"pattern", f.pattern}};
    if (!f.scales.empty()) jf["scales"] = f.scales;
    j["families"].push_back(jf);
  }
  j["bounds"] = spec.bounds;
  j["estimators"] = spec.estimators;
  return j;
}

/// Reads a config on top of @p base; absent keys keep the base values.
inline ExperimentSpec from_json(const nlohmann::json& j, ExperimentSpec base = {}) {
  try {
    ExperimentSpec spec = std::move(base);
    spec.name = j.value("name", spec.name);
    spec.model = ModelConfig(j.value("n", spec.model.n()), j.value("s", spec.model.s()),
                             j.value("sigma", spec.model.sigma()));
    spec.mc = McConfig(j.value("trials", spec.mc.trials), j.value("seed", spec.mc.seed));
    if (j.contains("grid")) {
      const auto& g = j.at("grid");
      spec.grid.min_db = g.value("min_db", spec.grid.min_db);
      spec.grid.max_db = g.value("max_db", spec.grid.max_db);
      spec.grid.points = g.value("points", spec.grid.points);
    }
    if (j.contains("families")) {
      spec.families.clear();
      for (const auto& jf : j.at("families"))
        spec.families.push_back({jf.value("name", std::string("family")),
                                 jf.at("pattern").get<std::vector<double>>(),
                                 jf.value("scales", std::vector<double>{})});
    }
    if (j.contains("bounds")) spec.bounds = j.at("bounds").get<std::vector<std::string>>();
    if (j.contains("estimators")) spec.estimators = j.at("estimators").get<std::vector<std::string>>();
    return spec;
  } catch (const nlohmann::json::exception& e) {
    throw InvalidArgument(std::string("bad experiment config: ") + e.what());
  }
}

}  // namespace ssnm
