#include "rootlaw/ensembles.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <fstream>
#include <numbers>
#include <sstream>
#include <stdexcept>

#include "rootlaw/logspace.hpp"

namespace rootlaw {

namespace {

std::uint64_t SplitMix64(std::uint64_t x) {
  x += 0x9e3779b97f4a7c15ULL;
  x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
  x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
  return x ^ (x >> 31);
}

// Counter-based stream: the j-th uniform of coefficient k in a given trial.
class CounterStream {
 public:
  CounterStream(std::uint64_t seed, std::uint64_t trial, std::uint64_t index)
      : key_(SplitMix64(SplitMix64(SplitMix64(seed) ^ trial) ^ index)) {}

  // Uniform on the open interval (0, 1).
  double Uniform(std::uint64_t j) const {
    const std::uint64_t bits = SplitMix64(key_ + 0x632be59bd9b4e019ULL * (j + 1)) >> 11;
    return (static_cast<double>(bits) + 0.5) * 0x1.0p-53;
  }

 private:
  std::uint64_t key_;
};

std::pair<double, double> BoxMuller(double u1, double u2) {
  const double radius = std::sqrt(-2.0 * std::log(u1));
  const double angle = 2.0 * std::numbers::pi * u2;
  return {radius * std::cos(angle), radius * std::sin(angle)};
}

// log|xi| is capped so that exp() stays finite in double precision.
constexpr double kHeavyTailLogCap = 700.0;

std::complex<double> DrawXi(const SamplerSpec& sampler, const CounterStream& stream) {
  switch (sampler.kind) {
    case SamplerKind::kComplexGaussian: {
      const auto [x, y] = BoxMuller(stream.Uniform(0), stream.Uniform(1));
      return {x * std::numbers::sqrt2 / 2.0, y * std::numbers::sqrt2 / 2.0};
    }
    case SamplerKind::kRealGaussian:
      return {BoxMuller(stream.Uniform(0), stream.Uniform(1)).first, 0.0};
    case SamplerKind::kUniformUnitDisk: {
      const double radius = std::sqrt(stream.Uniform(0));
      return std::polar(radius, 2.0 * std::numbers::pi * stream.Uniform(1));
    }
    case SamplerKind::kRademacher:
      return {stream.Uniform(0) < 0.5 ? -1.0 : 1.0, 0.0};
    case SamplerKind::kHeavyTailLog: {
      const double alpha = sampler.parameters.empty() ? 1.0 : sampler.parameters[0];
      const double log_abs = std::min(std::pow(stream.Uniform(0), -1.0 / alpha), kHeavyTailLogCap);
      return std::polar(std::exp(log_abs), 2.0 * std::numbers::pi * stream.Uniform(1));
    }
  }
  throw std::logic_error("unhandled sampler kind");
}

double ParseDouble(std::string_view text, std::string_view what) {
  double value = 0.0;
  const auto* end = text.data() + text.size();
  const auto [ptr, ec] = std::from_chars(text.data(), end, value);
  if (ec != std::errc() || ptr != end) {
    throw std::invalid_argument(std::string(what) + ": cannot parse number '" +
                                std::string(text) + "'");
  }
  return value;
}

double LogEllipticProfile(double t) { return -0.5 * xlogx(t) - 0.5 * xlogx(1.0 - t); }

}  // namespace

CoefficientProfile::CoefficientProfile(std::function<double(double)> log_p, double support_end,
                                       std::string label)
    : log_p_(std::move(log_p)), support_end_(support_end), label_(std::move(label)) {
  if (!(support_end_ > 0.0) || !std::isfinite(support_end_)) {
    throw std::invalid_argument("profile support end must be positive and finite");
  }
  if (!log_p_) throw std::invalid_argument("profile function is empty");
}

double CoefficientProfile::operator()(double t) const {
  if (t < 0.0 || t > support_end_) return kLogZero;
  return log_p_(t);
}

double kac_case2_log_f1(double t, double a) {
  return xlogx(t + a) - xlogx(t) + xlogx(1.0 - a);
}

CoefficientProfile make_profile(ProfileKind kind, double a) {
  switch (kind) {
    case ProfileKind::kKac:
      return {[](double) { return 0.0; }, 1.0, "kac"};
    case ProfileKind::kElliptic:
      return {LogEllipticProfile, 1.0, "elliptic"};
    case ProfileKind::kKacCase2: {
      if (!(a > 0.0 && a < 1.0)) {
        throw std::invalid_argument("kac-case2: a must lie in (0, 1)");
      }
      std::ostringstream label;
      label << "kac-case2:" << a;
      return {[a](double t) { return kac_case2_log_f1(t, a); }, 1.0 - a, label.str()};
    }
    case ProfileKind::kKacCase3Rescaled:
      return {[](double t) { return t - 1.0 - xlogx(t); }, 1.0, "kac-case3-rescaled"};
    case ProfileKind::kEllipticRescaled:
      return {[](double t) { return 0.5 * (t - 1.0) - 0.5 * xlogx(1.0 - t) - xlogx(t); }, 1.0,
              "elliptic-rescaled"};
  }
  throw std::invalid_argument("unknown profile kind");
}

CoefficientProfile make_profile(std::span<const std::pair<double, double>> table,
                                std::string label) {
  if (table.size() < 2) throw std::invalid_argument("profile table needs at least two rows");
  if (table.front().first != 0.0) throw std::invalid_argument("profile table must start at t = 0");
  for (std::size_t i = 0; i < table.size(); ++i) {
    if (!std::isfinite(table[i].second)) {
      throw std::invalid_argument("profile table values must be finite on [0, T0]");
    }
    if (i > 0 && !(table[i].first > table[i - 1].first)) {
      throw std::invalid_argument("profile table t column must be strictly increasing");
    }
  }
  std::vector<std::pair<double, double>> rows(table.begin(), table.end());
  const double support_end = rows.back().first;
  auto log_p = [rows = std::move(rows)](double t) {
    auto upper = std::upper_bound(rows.begin(), rows.end(), t,
                                  [](double x, const auto& row) { return x < row.first; });
    if (upper == rows.end()) return rows.back().second;
    if (upper == rows.begin()) return rows.front().second;
    const auto& [t1, v1] = *upper;
    const auto& [t0, v0] = *(upper - 1);
    return v0 + (v1 - v0) * (t - t0) / (t1 - t0);
  };
  CoefficientProfile profile(std::move(log_p), support_end, std::move(label));
  validate_profile(profile);
  return profile;
}

CoefficientProfile load_profile_table(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot open profile table '" + path.string() + "'");
  std::vector<std::pair<double, double>> rows;
  std::string line;
  int line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    const auto first = line.find_first_not_of(" \t\r");
    if (first == std::string::npos || line[first] == '#') continue;
    std::istringstream fields(line);
    std::string t_text, v_text, extra;
    if (!(fields >> t_text >> v_text) || (fields >> extra)) {
      throw std::invalid_argument(path.string() + ":" + std::to_string(line_no) +
                                  ": expected two columns");
    }
    rows.emplace_back(ParseDouble(t_text, path.string()), ParseDouble(v_text, path.string()));
  }
  return make_profile(rows, "profile:" + path.string());
}

CoefficientProfile parse_profile(std::string_view label) {
  if (label == "kac") return make_profile(ProfileKind::kKac);
  if (label == "elliptic") return make_profile(ProfileKind::kElliptic);
  if (label == "kac-case3-rescaled") return make_profile(ProfileKind::kKacCase3Rescaled);
  if (label == "elliptic-rescaled") return make_profile(ProfileKind::kEllipticRescaled);
  if (label.starts_with("kac-case2:")) {
    return make_profile(ProfileKind::kKacCase2, ParseDouble(label.substr(10), "kac-case2"));
  }
  if (label.starts_with("profile:")) return load_profile_table(std::string(label.substr(8)));
  throw std::invalid_argument("unknown profile '" + std::string(label) + "'");
}

void validate_profile(const CoefficientProfile& profile, int grid_points) {
  if (grid_points < 2) throw std::invalid_argument("validate_profile: grid too small");
  const double end = profile.support_end();
  auto max_jump = [&](int points) {
    double worst = 0.0;
    double previous = profile(0.0);
    for (int i = 1; i <= points; ++i) {
      const double t = end * static_cast<double>(i) / points;
      const double value = profile(t);
      if (i < points && !std::isfinite(value)) {
        throw std::invalid_argument("profile '" + profile.label() +
                                    "' is not finite inside its support");
      }
      if (std::isfinite(value) && std::isfinite(previous)) {
        worst = std::max(worst, std::abs(value - previous));
      }
      previous = value;
    }
    return worst;
  };
  if (!std::isfinite(profile(0.0))) {
    throw std::invalid_argument("profile '" + profile.label() + "' is not finite at t = 0");
  }
  // A continuous profile's largest step at least roughly halves when the grid
  // is halved (about 0.54 for t log t near 0, 0.71 for a square-root cusp); a
  // jump keeps it fixed.
  const double coarse = max_jump(grid_points);
  const double fine = max_jump(2 * grid_points);
  if (coarse > 1e-9 && fine > 0.9 * coarse) {
    throw std::invalid_argument("profile '" + profile.label() +
                                "' looks discontinuous: jumps do not shrink under refinement");
  }
}

EnsembleSpec parse_ensemble(std::string_view label) {
  EnsembleSpec spec;
  spec.label = std::string(label);
  if (label == "kac") {
    spec.kind = EnsembleKind::kKac;
  } else if (label == "elliptic") {
    spec.kind = EnsembleKind::kElliptic;
  } else if (label == "counterexample") {
    spec.kind = EnsembleKind::kCounterexample;
  } else if (label.starts_with("profile:")) {
    spec.kind = EnsembleKind::kProfileDriven;
    spec.profile = load_profile_table(std::string(label.substr(8)));
  } else {
    throw std::invalid_argument("unknown ensemble '" + std::string(label) + "'");
  }
  return spec;
}

CoefficientProfile reference_profile(const EnsembleSpec& spec) {
  switch (spec.kind) {
    case EnsembleKind::kKac:
    case EnsembleKind::kCounterexample:
      return make_profile(ProfileKind::kKac);
    case EnsembleKind::kElliptic:
      return make_profile(ProfileKind::kElliptic);
    case EnsembleKind::kProfileDriven:
      return *spec.profile;
  }
  throw std::logic_error("unhandled ensemble kind");
}

int counterexample_default_degree(int n) {
  return static_cast<int>(std::floor(std::log(static_cast<double>(n))));
}

LogCoefficients make_log_coeffs(EnsembleKind kind, int n, std::optional<int> counterexample_degree) {
  if (n < 1) throw std::invalid_argument("make_log_coeffs: degree must be at least 1");
  LogCoefficients out;
  out.log_mag.assign(static_cast<std::size_t>(n) + 1, 0.0);
  switch (kind) {
    case EnsembleKind::kKac:
      out.ensemble_label = "kac";
      break;
    case EnsembleKind::kElliptic:
      out.ensemble_label = "elliptic";
      for (int k = 0; k <= n; ++k) out.log_mag[k] = 0.5 * log_binomial(n, k);
      break;
    case EnsembleKind::kCounterexample: {
      const int degree = counterexample_degree.value_or(counterexample_default_degree(n));
      if (degree < 1 || degree > n) {
        throw std::invalid_argument("counterexample: need 1 <= D_n <= n (n too small?)");
      }
      const int order = n - degree;
      out.ensemble_label = "counterexample";
      const double head = log_factorial(n) - log_factorial(degree);
      for (int k = order; k <= n; ++k) {
        out.log_mag[k] = head + log_factorial(k - order) - log_factorial(k);
      }
      break;
    }
    case EnsembleKind::kProfileDriven:
      throw std::invalid_argument("profile-driven coefficients need a profile");
  }
  return out;
}

LogCoefficients make_log_coeffs(const CoefficientProfile& profile, int n) {
  if (n < 1) throw std::invalid_argument("make_log_coeffs: degree must be at least 1");
  LogCoefficients out;
  out.ensemble_label = profile.label();
  out.log_mag.resize(static_cast<std::size_t>(n) + 1);
  for (int k = 0; k <= n; ++k) {
    out.log_mag[k] = n * profile(static_cast<double>(k) / n);
  }
  if (!std::isfinite(out.log_mag.back())) {
    throw std::invalid_argument("profile '" + profile.label() +
                                "' must be positive at t = 1 to define a degree-n polynomial");
  }
  return out;
}

LogCoefficients make_log_coeffs(const EnsembleSpec& spec, int n) {
  if (spec.kind == EnsembleKind::kProfileDriven) {
    if (!spec.profile) throw std::invalid_argument("profile-driven ensemble without profile");
    return make_log_coeffs(*spec.profile, n);
  }
  return make_log_coeffs(spec.kind, n);
}

std::string SamplerSpec::name() const {
  switch (kind) {
    case SamplerKind::kComplexGaussian: return "complex-gaussian";
    case SamplerKind::kRealGaussian: return "real-gaussian";
    case SamplerKind::kUniformUnitDisk: return "uniform-disk";
    case SamplerKind::kRademacher: return "rademacher";
    case SamplerKind::kHeavyTailLog: {
      if (parameters.empty()) return "heavy-tail-log";
      std::ostringstream out;
      out << "heavy-tail-log:" << parameters[0];
      return out.str();
    }
  }
  return "unknown";
}

SamplerSpec parse_sampler(std::string_view label) {
  SamplerSpec spec;
  if (label == "gaussian" || label == "complex-gaussian") {
    spec.kind = SamplerKind::kComplexGaussian;
  } else if (label == "real-gaussian") {
    spec.kind = SamplerKind::kRealGaussian;
  } else if (label == "uniform-disk" || label == "uniform-unit-disk") {
    spec.kind = SamplerKind::kUniformUnitDisk;
  } else if (label == "rademacher") {
    spec.kind = SamplerKind::kRademacher;
  } else if (label == "heavy-tail-log" || label.starts_with("heavy-tail-log:")) {
    spec.kind = SamplerKind::kHeavyTailLog;
    if (label.size() > 15) {
      const double alpha = ParseDouble(label.substr(15), "heavy-tail-log");
      if (!(alpha > 0.0 && alpha <= 1.0)) {
        throw std::invalid_argument("heavy-tail-log: alpha must lie in (0, 1]");
      }
      spec.parameters = {alpha};
    }
  } else {
    throw std::invalid_argument("unknown sampler '" + std::string(label) + "'");
  }
  return spec;
}

SampledPolynomial SampledPolynomial::from_coefficients(std::span<const std::complex<double>> coeffs) {
  SampledPolynomial out;
  out.log_mag.reserve(coeffs.size());
  out.xi.reserve(coeffs.size());
  for (const auto& c : coeffs) {
    if (c == 0.0) {
      out.log_mag.push_back(kLogZero);
      out.xi.emplace_back(1.0, 0.0);
    } else {
      out.log_mag.push_back(0.0);
      out.xi.push_back(c);
    }
  }
  return out;
}

SampledPolynomial sample_polynomial(const LogCoefficients& coeffs, const SamplerSpec& sampler,
                                    std::uint64_t master_seed, std::uint64_t trial) {
  if (sampler.kind == SamplerKind::kHeavyTailLog && !sampler.parameters.empty() &&
      !(sampler.parameters[0] > 0.0)) {
    throw std::invalid_argument("heavy-tail-log: alpha must be positive");
  }
  SampledPolynomial out;
  out.log_mag = coeffs.log_mag;
  out.seed_record = {master_seed, trial};
  out.xi.reserve(coeffs.log_mag.size());
  for (std::size_t k = 0; k < coeffs.log_mag.size(); ++k) {
    out.xi.push_back(DrawXi(sampler, CounterStream(master_seed, trial, k)));
  }
  return out;
}

namespace {

double LogDeviation(double lhs, double rhs) {
  if (is_log_zero(lhs) && is_log_zero(rhs)) return 0.0;
  return std::abs(lhs - rhs);
}

}  // namespace

std::vector<double> check_profile_fit(std::span<const LogCoefficients> coeffs_sequence,
                                      const CoefficientProfile& profile,
                                      std::span<const int> scale, std::span<const double> delta) {
  if (coeffs_sequence.size() != scale.size() || coeffs_sequence.size() != delta.size()) {
    throw std::invalid_argument("check_profile_fit: sequence lengths differ");
  }
  const double end = profile.support_end();
  std::vector<double> out;
  out.reserve(coeffs_sequence.size());
  for (std::size_t i = 0; i < coeffs_sequence.size(); ++i) {
    const auto& coeffs = coeffs_sequence[i];
    const int L = scale[i];
    if (L < 1) throw std::invalid_argument("check_profile_fit: L_n must be positive");
    const double upper = (end - delta[i]) * L;
    const double rounded = std::round(upper);
    if (std::abs(upper - rounded) > 1e-9 * std::max(1.0, std::abs(upper))) {
      throw std::invalid_argument("check_profile_fit: (T0 - delta_n) L_n is not an integer");
    }
    if (rounded < 0.0) throw std::invalid_argument("check_profile_fit: index range is empty");
    const int last = static_cast<int>(rounded);
    if (last > coeffs.degree()) {
      throw std::invalid_argument("check_profile_fit: index range exceeds the degree");
    }
    double worst = 0.0;
    for (int k = 0; k <= last; ++k) {
      const double t = std::min(static_cast<double>(k) / L, end);
      worst = std::max(worst, LogDeviation(coeffs.log_mag[k] / L, profile(t)));
    }
    out.push_back(worst);
  }
  return out;
}

EnsembleDiagnostics ensemble_diagnostics(const LogCoefficients& coeffs, int derivative_order,
                                         const CoefficientProfile& profile) {
  const int n = coeffs.degree();
  if (derivative_order < 0 || derivative_order > n) {
    throw std::invalid_argument("ensemble_diagnostics: need 0 <= N_n <= n");
  }
  EnsembleDiagnostics out{0.0, kLogZero};
  for (int k = derivative_order; k <= n; ++k) {
    const double value = coeffs.log_mag[k];
    out.eta = std::max(out.eta, LogDeviation(value / n, profile(static_cast<double>(k) / n)));
    out.log_b = std::max(out.log_b, value);
  }
  return out;
}

}  // namespace rootlaw
