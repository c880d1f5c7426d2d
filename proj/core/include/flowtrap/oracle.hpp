#pragma once

// Objective-function interface, built-in test objectives, and query
// accounting. The solver talks to objectives exclusively through
// BatchSession so that every evaluation lands in a ledger entry and the
// adaptivity of a run (number of batches) can be audited afterwards.

#include <cstdint>
#include <memory>
#include <span>
#include <string>
#include <vector>

namespace flowtrap {

enum class Domain {
  all_space,  // minimize over all of R^d; objective must be nonnegative
  unit_cube,  // minimize over [0,1]^d
};

// A smooth objective with gradient-Lipschitz constant `lipschitz()`.
// Implementations must be stateless with respect to evaluation: value()
// and gradient() are const and safe to call from multiple threads.
class Objective {
 public:
  virtual ~Objective() = default;

  virtual int dim() const = 0;
  virtual Domain domain() const = 0;

  // Lipschitz constant of the gradient that callers may rely on.
  virtual double lipschitz() const = 0;

  virtual double value(std::span<const double> x) const = 0;

  // Writes the analytic gradient into `out` and returns true, or returns
  // false when no closed form is available.
  virtual bool gradient(std::span<const double> x, std::span<double> out) const {
    (void)x;
    (void)out;
    return false;
  }

  virtual std::string name() const = 0;
};

// f(x) = (L/2) * ||x - center||^2. Nonnegative, gradient L-Lipschitz with
// the constant attained everywhere.
class QuadraticBowl final : public Objective {
 public:
  QuadraticBowl(std::vector<double> center, double lipschitz, Domain domain);

  int dim() const override { return static_cast<int>(center_.size()); }
  Domain domain() const override { return domain_; }
  double lipschitz() const override { return lipschitz_; }
  double value(std::span<const double> x) const override;
  bool gradient(std::span<const double> x, std::span<double> out) const override;
  std::string name() const override { return "quadratic"; }

  const std::vector<double>& center() const { return center_; }

 private:
  std::vector<double> center_;
  double lipschitz_;
  Domain domain_;
};

// f(x) = (L/pi^2) * sum_j (1 - cos(pi * (x_j - shift_j))). Nonnegative,
// separable, with second derivative bounded by L on every axis. On the
// unit cube with shift 0 the stationary points are exactly the corners.
class SeparableCosine final : public Objective {
 public:
  SeparableCosine(std::vector<double> shift, double lipschitz, Domain domain);

  int dim() const override { return static_cast<int>(shift_.size()); }
  Domain domain() const override { return domain_; }
  double lipschitz() const override { return lipschitz_; }
  double value(std::span<const double> x) const override;
  bool gradient(std::span<const double> x, std::span<double> out) const override;
  std::string name() const override { return "cosine"; }

 private:
  std::vector<double> shift_;
  double lipschitz_;
  Domain domain_;
};

// One parallel batch of queries.
struct RoundRecord {
  int round = 0;
  std::uint64_t batch_size = 0;
  std::uint64_t cumulative = 0;
};

// Append-only record of query rounds. Round indices start at 1.
class QueryLedger {
 public:
  void record_round(std::uint64_t batch_size);

  const std::vector<RoundRecord>& rounds() const { return rounds_; }
  int round_count() const { return static_cast<int>(rounds_.size()); }
  std::uint64_t total() const { return total_; }

  // CSV with a "# flowtrap.ledger.v1" header line followed by
  // round,batch_size,cumulative_queries rows.
  std::string to_csv() const;

 private:
  std::vector<RoundRecord> rounds_;
  std::uint64_t total_ = 0;
};

// Mediates all objective evaluations for one solve. Each batch_query call
// is a single parallel round no matter how many points it carries; answers
// within a batch cannot influence one another because the whole batch is
// submitted before any value is returned. Verification queries (gradient
// spot checks and the like) are tallied separately and do not appear in
// the round ledger.
class BatchSession {
 public:
  explicit BatchSession(const Objective& objective);

  const Objective& objective() const { return objective_; }

  // Evaluates `count` points packed row-major in `flat_points` as one
  // round and returns their values in order. Rejects empty batches and
  // points outside the objective's declared domain.
  std::vector<double> batch_query(std::span<const double> flat_points,
                                  std::uint64_t count);

  // Convenience for a round consisting of a single point.
  double single_query(std::span<const double> x);

  // Out-of-band evaluation for checking purposes.
  double verification_query(std::span<const double> x);

  const QueryLedger& ledger() const { return ledger_; }
  std::uint64_t verification_queries() const { return verification_queries_; }

 private:
  const Objective& objective_;
  QueryLedger ledger_;
  std::uint64_t verification_queries_ = 0;
};

// True when x lies in the objective's declared domain (all coordinates
// finite; inside [0,1]^d when the domain is the unit cube).
bool in_domain(const Objective& objective, std::span<const double> x);

// Result of comparing the analytic gradient against a central finite
// difference with step h.
struct GradientCheck {
  bool has_analytic = false;
  double max_abs_err = 0.0;  // max_j |fd_j - analytic_j|
  double rel_err = 0.0;      // max_abs_err / max(1, ||analytic||_inf)
  std::vector<double> analytic;
  std::vector<double> fd;
};

GradientCheck verify_gradient(const Objective& objective,
                              std::span<const double> x, double h);

// Max of GradientCheck::rel_err over `count` points packed row-major.
// Finite-difference evaluations go through the session as verification
// queries; the round ledger is untouched. Throws ConfigError when the
// objective has no analytic gradient.
double verify_gradient_max_rel(BatchSession& session,
                               std::span<const double> flat_points,
                               std::uint64_t count, double h);

// Builds one of the closed-form objectives by name ("quadratic" or
// "cosine") with the given shift/center. Throws ConfigError for unknown
// names.
std::unique_ptr<Objective> make_builtin(const std::string& name,
                                        std::vector<double> center,
                                        double lipschitz, Domain domain);

}  // namespace flowtrap
