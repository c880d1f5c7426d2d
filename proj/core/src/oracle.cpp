#include "flowtrap/oracle.hpp"

#include <cmath>
#include <cstdio>
#include <numbers>
#include <utility>

#include "flowtrap/errors.hpp"

namespace flowtrap {

QuadraticBowl::QuadraticBowl(std::vector<double> center, double lipschitz,
                             Domain domain)
    : center_(std::move(center)), lipschitz_(lipschitz), domain_(domain) {
  if (center_.empty()) throw ConfigError("quadratic: dimension must be positive");
  if (!(lipschitz_ > 0.0)) throw ConfigError("quadratic: lipschitz must be positive");
}

double QuadraticBowl::value(std::span<const double> x) const {
  double s = 0.0;
  for (std::size_t j = 0; j < center_.size(); ++j) {
    const double d = x[j] - center_[j];
    s += d * d;
  }
  return 0.5 * lipschitz_ * s;
}

bool QuadraticBowl::gradient(std::span<const double> x,
                             std::span<double> out) const {
  for (std::size_t j = 0; j < center_.size(); ++j) {
    out[j] = lipschitz_ * (x[j] - center_[j]);
  }
  return true;
}

SeparableCosine::SeparableCosine(std::vector<double> shift, double lipschitz,
                                 Domain domain)
    : shift_(std::move(shift)), lipschitz_(lipschitz), domain_(domain) {
  if (shift_.empty()) throw ConfigError("cosine: dimension must be positive");
  if (!(lipschitz_ > 0.0)) throw ConfigError("cosine: lipschitz must be positive");
}

double SeparableCosine::value(std::span<const double> x) const {
  constexpr double pi = std::numbers::pi;
  double s = 0.0;
  for (std::size_t j = 0; j < shift_.size(); ++j) {
    s += 1.0 - std::cos(pi * (x[j] - shift_[j]));
  }
  return lipschitz_ / (pi * pi) * s;
}

bool SeparableCosine::gradient(std::span<const double> x,
                               std::span<double> out) const {
  constexpr double pi = std::numbers::pi;
  for (std::size_t j = 0; j < shift_.size(); ++j) {
    out[j] = lipschitz_ / pi * std::sin(pi * (x[j] - shift_[j]));
  }
  return true;
}

void QueryLedger::record_round(std::uint64_t batch_size) {
  total_ += batch_size;
  RoundRecord rec;
  rec.round = static_cast<int>(rounds_.size()) + 1;
  rec.batch_size = batch_size;
  rec.cumulative = total_;
  rounds_.push_back(rec);
}

std::string QueryLedger::to_csv() const {
  std::string out = "# flowtrap.ledger.v1\nround,batch_size,cumulative_queries\n";
  char line[96];
  for (const auto& r : rounds_) {
    std::snprintf(line, sizeof(line), "%d,%llu,%llu\n", r.round,
                  static_cast<unsigned long long>(r.batch_size),
                  static_cast<unsigned long long>(r.cumulative));
    out += line;
  }
  return out;
}

BatchSession::BatchSession(const Objective& objective) : objective_(objective) {}

bool in_domain(const Objective& objective, std::span<const double> x) {
  if (static_cast<int>(x.size()) != objective.dim()) return false;
  for (double v : x) {
    if (!std::isfinite(v)) return false;
  }
  if (objective.domain() == Domain::unit_cube) {
    for (double v : x) {
      if (v < 0.0 || v > 1.0) return false;
    }
  }
  return true;
}

std::vector<double> BatchSession::batch_query(std::span<const double> flat_points,
                                              std::uint64_t count) {
  if (count == 0) throw ConfigError("batch_query: empty batch");
  const auto d = static_cast<std::uint64_t>(objective_.dim());
  if (flat_points.size() != count * d) {
    throw ConfigError("batch_query: flat point buffer has wrong length");
  }
  std::vector<double> values(count);
  for (std::uint64_t i = 0; i < count; ++i) {
    const auto pt = flat_points.subspan(i * d, d);
    if (!in_domain(objective_, pt)) {
      throw ConfigError("batch_query: point outside the objective's domain");
    }
    values[i] = objective_.value(pt);
  }
  ledger_.record_round(count);
  return values;
}

double BatchSession::single_query(std::span<const double> x) {
  return batch_query(x, 1)[0];
}

double BatchSession::verification_query(std::span<const double> x) {
  ++verification_queries_;
  return objective_.value(x);
}

double verify_gradient_max_rel(BatchSession& session,
                               std::span<const double> flat_points,
                               std::uint64_t count, double h) {
  const Objective& obj = session.objective();
  const auto d = static_cast<std::uint64_t>(obj.dim());
  if (flat_points.size() != count * d) {
    throw ConfigError("verify_gradient: flat point buffer has wrong length");
  }
  std::vector<double> analytic(d);
  std::vector<double> probe(d);
  double worst = 0.0;
  for (std::uint64_t i = 0; i < count; ++i) {
    const auto x = flat_points.subspan(i * d, d);
    if (!obj.gradient(x, analytic)) {
      throw ConfigError("verify_gradient: objective has no analytic gradient");
    }
    probe.assign(x.begin(), x.end());
    double g_inf = 0.0;
    double err = 0.0;
    for (std::uint64_t j = 0; j < d; ++j) {
      const double keep = probe[j];
      probe[j] = keep + h;
      const double up = session.verification_query(probe);
      probe[j] = keep - h;
      const double down = session.verification_query(probe);
      probe[j] = keep;
      const double fd = (up - down) / (2.0 * h);
      err = std::max(err, std::fabs(fd - analytic[j]));
      g_inf = std::max(g_inf, std::fabs(analytic[j]));
    }
    worst = std::max(worst, err / std::max(1.0, g_inf));
  }
  return worst;
}

GradientCheck verify_gradient(const Objective& objective,
                              std::span<const double> x, double h) {
  const int d = objective.dim();
  GradientCheck check;
  check.analytic.assign(d, 0.0);
  check.fd.assign(d, 0.0);
  check.has_analytic = objective.gradient(x, check.analytic);

  std::vector<double> probe(x.begin(), x.end());
  for (int j = 0; j < d; ++j) {
    const double keep = probe[j];
    probe[j] = keep + h;
    const double up = objective.value(probe);
    probe[j] = keep - h;
    const double down = objective.value(probe);
    probe[j] = keep;
    check.fd[j] = (up - down) / (2.0 * h);
  }

  double g_inf = 0.0;
  for (int j = 0; j < d; ++j) {
    g_inf = std::max(g_inf, std::fabs(check.analytic[j]));
    check.max_abs_err =
        std::max(check.max_abs_err, std::fabs(check.fd[j] - check.analytic[j]));
  }
  check.rel_err = check.max_abs_err / std::max(1.0, g_inf);
  return check;
}

std::unique_ptr<Objective> make_builtin(const std::string& name,
                                        std::vector<double> center,
                                        double lipschitz, Domain domain) {
  if (name == "quadratic") {
    return std::make_unique<QuadraticBowl>(std::move(center), lipschitz, domain);
  }
  if (name == "cosine") {
    return std::make_unique<SeparableCosine>(std::move(center), lipschitz, domain);
  }
  throw ConfigError("unknown objective name: " + name);
}

}  // namespace flowtrap
