#include "rootlaw/experiments.hpp"

#include <algorithm>
#include <atomic>
#include <charconv>
#include <chrono>
#include <cmath>
#include <fstream>
#include <limits>
#include <memory>
#include <numbers>
#include <sstream>
#include <stdexcept>
#include <thread>

#include <nlohmann/json.hpp>

#include "rootlaw/limits.hpp"

namespace rootlaw {

namespace {

constexpr double kNaN = std::numeric_limits<double>::quiet_NaN();

double ParseNumber(std::string_view text, std::string_view what) {
  double value = 0.0;
  const auto* end = text.data() + text.size();
  const auto [ptr, ec] = std::from_chars(text.data(), end, value);
  if (ec != std::errc() || ptr != end) {
    throw std::invalid_argument(std::string(what) + ": cannot parse number '" +
                                std::string(text) + "'");
  }
  return value;
}

// Numeric limit law: I_a of the profile (composed with u_a when a > 0),
// renormalized by 1 - a. Outside the s-grid the curve is held at its
// boundary values.
RadialCDF TransformTarget(const CoefficientProfile& profile, double a, std::string label) {
  const CoefficientProfile composed = a > 0.0 ? derived_profile_u_a(profile, a) : profile;
  auto transform = std::make_shared<const TransformResult>(legendre_fenchel(composed));
  const double mass_norm = a > 0.0 ? 1.0 - a : 1.0;
  const double r_lo = std::exp(transform->s_grid.front());
  const double r_hi = std::exp(transform->s_grid.back());
  return RadialCDF::theoretical(
      [transform, mass_norm, r_lo, r_hi](double r) {
        if (r <= 0.0) return 0.0;
        return limit_radial_cdf(*transform, std::clamp(r, r_lo, r_hi), mass_norm);
      },
      std::move(label));
}

ResidualStats Summarize(std::vector<double> values) {
  ResidualStats out;
  if (values.empty()) return out;
  std::sort(values.begin(), values.end());
  out.max = values.back();
  const std::size_t mid = values.size() / 2;
  out.median = values.size() % 2 == 1 ? values[mid] : 0.5 * (values[mid - 1] + values[mid]);
  return out;
}

nlohmann::json ConfigToJson(const ExperimentConfig& config) {
  nlohmann::json annuli = nlohmann::json::array();
  for (const auto& [lo, hi] : config.annuli) annuli.push_back({lo, hi});
  return {
      {"ensemble", config.ensemble},
      {"sampler", config.sampler.name()},
      {"n", config.n},
      {"derivative_rule", config.rule.describe()},
      {"rescale", config.rescale == RescaleMode::kAuto ? "auto" : "none"},
      {"trials", config.trials},
      {"seed", config.seed},
      {"target", config.target ? nlohmann::json(*config.target) : nlohmann::json(nullptr)},
      {"annuli", annuli},
      {"tol", config.root_options.tol},
      {"residual_tol", config.root_options.residual_tol},
      {"max_iterations", config.root_options.max_iterations},
  };
}

}  // namespace

int DerivativeRule::resolve(int n) const {
  if (n < 1) throw std::invalid_argument("derivative rule: n must be positive");
  double order = 0.0;
  switch (kind) {
    case Kind::kExplicit:
      order = value;
      break;
    case Kind::kRatio:
      if (!(value >= 0.0 && value < 1.0)) {
        throw std::invalid_argument("derivative rule: ratio must lie in [0, 1)");
      }
      order = std::floor(value * n);
      break;
    case Kind::kLogDegree:
      order = n - std::floor(std::log(static_cast<double>(n)));
      break;
    case Kind::kFixedDegree:
      order = n - value;
      break;
  }
  if (order != std::floor(order) || order < 0.0 || order >= n) {
    throw std::invalid_argument("derivative rule " + describe() + " gives N_n outside [0, n) for n = " +
                                std::to_string(n));
  }
  return static_cast<int>(order);
}

std::string DerivativeRule::describe() const {
  std::ostringstream out;
  switch (kind) {
    case Kind::kExplicit: out << "Nn=" << value; break;
    case Kind::kRatio: out << "ratio=" << value; break;
    case Kind::kLogDegree: out << "n-floor(log n)"; break;
    case Kind::kFixedDegree: out << "fixed-m=" << value; break;
  }
  return out.str();
}

ComparisonTarget parse_target(std::string_view label) {
  const std::string name(label);
  if (label == "kac-unit-circle") {
    return {name, RadialCDF::theoretical(
                      [](double r) { return closed_form_cdf(ClosedFormCase::kKacUnitCircle, r); },
                      name)};
  }
  if (label == "kac-rescaled") {
    return {name, RadialCDF::theoretical(
                      [](double r) { return closed_form_cdf(ClosedFormCase::kKacRescaled, r); },
                      name)};
  }
  if (label == "elliptic-rescaled") {
    return {name,
            RadialCDF::theoretical(
                [](double r) { return closed_form_cdf(ClosedFormCase::kEllipticRescaled, r); },
                name)};
  }
  if (label.starts_with("kac-a:")) {
    const double a = ParseNumber(label.substr(6), "kac-a");
    if (!(a > 0.0 && a < 1.0)) throw std::invalid_argument("kac-a: a must lie in (0, 1)");
    return {name, RadialCDF::theoretical(
                      [a](double r) { return closed_form_cdf(ClosedFormCase::kKacA, r, a); }, name)};
  }
  if (label.starts_with("lf:")) {
    std::string_view rest = label.substr(3);
    double a = 0.0;
    const auto colon = rest.rfind(':');
    // "lf:kac-case2:0.3" is a profile label with its own colon; only treat
    // the trailing field as `a` when what precedes it is a profile on its own.
    if (colon != std::string_view::npos) {
      const std::string_view head = rest.substr(0, colon);
      if (head != "kac-case2" && head != "profile") {
        a = ParseNumber(rest.substr(colon + 1), "lf target");
        rest = head;
      }
    }
    if (!(a >= 0.0 && a < 1.0)) throw std::invalid_argument("lf target: a must lie in [0, 1)");
    return {name, TransformTarget(parse_profile(rest), a, name)};
  }
  throw std::invalid_argument("unknown comparison target '" + name + "'");
}

std::vector<double> Report::per_trial_ks() const {
  std::vector<double> out;
  out.reserve(trials.size());
  for (const auto& trial : trials) out.push_back(trial.ks);
  return out;
}

Report run_trials(const ExperimentConfig& config) {
  const auto start = std::chrono::steady_clock::now();
  if (config.trials < 1) throw std::invalid_argument("run_trials: trials must be at least 1");
  if (config.threads < 1) throw std::invalid_argument("run_trials: threads must be at least 1");

  const EnsembleSpec ensemble = parse_ensemble(config.ensemble);
  const int order = config.rule.resolve(config.n);
  const DerivativePlan plan(config.n, order);
  const LogCoefficients base = make_log_coeffs(ensemble, config.n);
  const LogCoefficients derivative = differentiate(base, plan);

  Report report;
  report.config = config;
  report.derivative_order = order;
  report.derivative_degree = plan.result_degree();
  if (config.rescale == RescaleMode::kAuto) {
    report.log_rescale = recommended_rescale(ensemble.kind, plan, false);
  }
  const LogCoefficients prepared = rescale(derivative, report.log_rescale);

  std::optional<ComparisonTarget> target;
  if (config.target) target = parse_target(*config.target);

  report.trials.resize(config.trials);
  auto run_one = [&](int trial) {
    TrialResult& result = report.trials[trial];
    result.trial = trial;
    result.ks = kNaN;
    const SampledPolynomial poly =
        sample_polynomial(prepared, config.sampler, config.seed, static_cast<std::uint64_t>(trial));
    try {
      RootSet roots = find_roots(poly, config.root_options);
      result.residuals = roots.residual_stats;
      result.roots = std::move(roots.roots);
    } catch (const RootFindError& error) {
      result.failed = true;
      result.failure = error.what();
      result.residuals = error.partial().residual_stats;
      return;
    }
    const EmpiricalMeasure measure = empirical_measure(result.roots);
    if (target) result.ks = ks_distance(radial_cdf(measure), target->cdf);
    result.angular_discrepancy = measure.count() >= 2 ? angular_discrepancy(measure) : kNaN;
    for (const auto& [lo, hi] : config.annuli) {
      result.annulus_fractions.push_back(annulus_fraction(measure, lo, hi));
    }
  };

  const int workers = std::min(config.threads, config.trials);
  if (workers == 1) {
    for (int trial = 0; trial < config.trials; ++trial) run_one(trial);
  } else {
    std::atomic<int> next{0};
    std::vector<std::jthread> pool;
    pool.reserve(workers);
    for (int w = 0; w < workers; ++w) {
      pool.emplace_back([&] {
        for (int trial = next++; trial < config.trials; trial = next++) run_one(trial);
      });
    }
  }

  std::vector<double> max_residuals;
  std::vector<double> median_residuals;
  report.mean_annulus_fractions.assign(config.annuli.size(), 0.0);
  int succeeded = 0;
  for (const auto& trial : report.trials) {
    max_residuals.push_back(trial.residuals.max);
    median_residuals.push_back(trial.residuals.median);
    if (trial.failed) {
      ++report.failed_trials;
      continue;
    }
    ++succeeded;
    report.pooled_root_count += trial.roots.size();
    for (std::size_t i = 0; i < config.annuli.size(); ++i) {
      report.mean_annulus_fractions[i] += trial.annulus_fractions[i];
    }
  }
  report.residuals.max = Summarize(max_residuals).max;
  report.residuals.median = Summarize(median_residuals).median;
  report.pooled_ks = kNaN;
  report.angular_discrepancy = kNaN;
  if (succeeded > 0) {
    for (double& fraction : report.mean_annulus_fractions) fraction /= succeeded;
    const EmpiricalMeasure pooled = pooled_measure(report);
    if (target) report.pooled_ks = ks_distance(radial_cdf(pooled), target->cdf);
    if (pooled.count() >= 2) report.angular_discrepancy = angular_discrepancy(pooled);
  } else {
    std::fill(report.mean_annulus_fractions.begin(), report.mean_annulus_fractions.end(), kNaN);
  }
  report.runtime_seconds =
      std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
  return report;
}

EmpiricalMeasure pooled_measure(const Report& report) {
  std::vector<std::complex<double>> roots;
  roots.reserve(report.pooled_root_count);
  for (const auto& trial : report.trials) {
    if (!trial.failed) roots.insert(roots.end(), trial.roots.begin(), trial.roots.end());
  }
  return empirical_measure(roots);
}

FixedDegreeResult fixed_degree_convergence(EnsembleKind kind, int m, std::span<const int> n_list,
                                           std::span<const std::complex<double>> xi) {
  if (kind != EnsembleKind::kKac && kind != EnsembleKind::kElliptic) {
    throw std::invalid_argument("fixed_degree_convergence: only kac and elliptic");
  }
  FixedDegreeResult out;
  out.xi.assign(xi.begin(), xi.end());
  out.limit_roots = find_roots(fixed_degree_limit_poly(kind, m, xi)).roots;
  for (const int n : n_list) {
    if (n <= m) throw std::invalid_argument("fixed_degree_convergence: every n must exceed m");
    const DerivativePlan plan(n, n - m);
    const LogCoefficients derivative = differentiate(make_log_coeffs(kind, n), plan);
    const LogCoefficients scaled = rescale(derivative, recommended_rescale(kind, plan, true));
    SampledPolynomial poly;
    poly.log_mag = scaled.log_mag;
    poly.xi = out.xi;
    const RootSet roots = find_roots(poly);
    out.distances.push_back(match_roots(roots.roots, out.limit_roots).max_distance);
  }
  return out;
}

FixedDegreeResult fixed_degree_convergence(EnsembleKind kind, int m, std::span<const int> n_list,
                                           std::uint64_t seed, const SamplerSpec& sampler) {
  if (m < 1) throw std::invalid_argument("fixed_degree_convergence: m must be at least 1");
  LogCoefficients unit;
  unit.log_mag.assign(static_cast<std::size_t>(m) + 1, 0.0);
  const SampledPolynomial draw = sample_polynomial(unit, sampler, seed, 0);
  return fixed_degree_convergence(kind, m, n_list, draw.xi);
}

std::string format_double(double value) {
  char buffer[64];
  const auto [ptr, ec] =
      std::to_chars(buffer, buffer + sizeof(buffer), value, std::chars_format::general, 17);
  if (ec != std::errc()) throw std::runtime_error("format_double: conversion failed");
  return std::string(buffer, ptr);
}

void write_report(const Report& report, const ReportPaths& paths) {
  if (report.trials.empty()) throw std::invalid_argument("write_report: report has no trials");

  std::ofstream csv(paths.roots_csv, std::ios::binary);
  if (!csv) throw std::runtime_error("cannot open '" + paths.roots_csv.string() + "' for writing");
  csv << "trial,re,im,modulus,angle\n";
  for (const auto& trial : report.trials) {
    if (trial.failed) continue;
    for (const auto& z : trial.roots) {
      double angle = std::arg(z);
      if (angle < 0.0) angle += 2.0 * std::numbers::pi;
      csv << trial.trial << ',' << format_double(z.real()) << ',' << format_double(z.imag()) << ','
          << format_double(std::abs(z)) << ',' << format_double(angle) << '\n';
    }
  }
  csv.close();
  if (!csv) throw std::runtime_error("failed writing '" + paths.roots_csv.string() + "'");

  nlohmann::json per_trial = nlohmann::json::array();
  nlohmann::json failures = nlohmann::json::array();
  for (const auto& trial : report.trials) {
    per_trial.push_back(trial.ks);
    if (trial.failed) failures.push_back({{"trial", trial.trial}, {"reason", trial.failure}});
  }
  nlohmann::json summary = {
      {"config", ConfigToJson(report.config)},
      {"pooled_ks", report.pooled_ks},
      {"per_trial_ks", per_trial},
      {"angular_discrepancy", report.angular_discrepancy},
      {"failed_trials", report.failed_trials},
      {"failures", failures},
      {"runtime_seconds", report.runtime_seconds},
      {"derivative_order", report.derivative_order},
      {"derivative_degree", report.derivative_degree},
      {"log_rescale", report.log_rescale},
      {"pooled_root_count", report.pooled_root_count},
      {"mean_annulus_fractions", report.mean_annulus_fractions},
      {"residual_max", report.residuals.max},
      {"residual_median", report.residuals.median},
  };
  std::ofstream json(paths.summary_json, std::ios::binary);
  if (!json) {
    throw std::runtime_error("cannot open '" + paths.summary_json.string() + "' for writing");
  }
  json << summary.dump(2) << '\n';
  json.close();
  if (!json) throw std::runtime_error("failed writing '" + paths.summary_json.string() + "'");
}

}  // namespace rootlaw
