#pragma once

// Adversarial chain objectives over random equipartitions. The potential
// couples consecutive partition sums X^1..X^{r+1} so that its gradient
// stays bounded away from zero until the links have been "unhooked" in
// order, while a uniformly random partition hides which coordinates feed
// which link. Includes the smooth-bump/CDF component pair the chain is
// assembled from, the squashing map that keeps everything bounded, the
// closed-form gradient, and the scaling that turns a target accuracy and
// initial gap into a concrete instance.

#include <cstdint>
#include <span>
#include <string>
#include <vector>

#include "flowtrap/oracle.hpp"

namespace flowtrap {

// Smooth step: 0 for x <= 1/2, exp(1 - 1/(2x-1)^2) for x > 1/2.
// Infinitely differentiable, 0 <= psi < e.
double psi(double x);
// Derivative of psi: 4*psi(x)/(2x-1)^3 for x > 1/2, else 0. Bounded by
// sqrt(54/e), attained at 2x-1 = sqrt(2/3).
double psi_prime(double x);

// Scaled Gaussian CDF: sqrt(e) * integral of exp(-t^2/2) from -inf to x.
// Strictly increasing from 0 to sqrt(2*pi*e).
double phi(double x);
// Derivative of phi: sqrt(e) * exp(-x^2/2), maximal at 0 with value
// sqrt(e).
double phi_prime(double x);

// Equipartition of the coordinates [0, d) into r+2 disjoint parts of size
// d0, where r = d/d0 - 2. Only parts 1..r+1 carry chain weight; the last
// part is inert padding that keeps the sizes equal.
struct ChainPartition {
  int d = 0;
  int d0 = 0;
  std::uint64_t seed = 0;
  std::vector<std::vector<int>> parts;

  int part_count() const { return static_cast<int>(parts.size()); }
  int r() const { return part_count() - 2; }
};

// Uniformly random equipartition: seeded Fisher-Yates shuffle of [0, d)
// sliced into consecutive blocks of d0. Requires d0 >= 1, d0 | d, and
// d/d0 >= 3.
ChainPartition sample_partition(int d, int d0, std::uint64_t seed);

// JSON round trip (fields d, d0, seed, parts) so instances replay
// byte-for-byte across runs and machines.
std::string partition_to_json(const ChainPartition& partition);
ChainPartition partition_from_json(const std::string& text);

// Chain sums at a point, and how far along the chain the point has
// visibly progressed.
struct ProgressVector {
  std::vector<double> X;  // X^1..X^{r+1}
  // Largest i >= 1 with |X^i - X^{i-1}| >= 1/2 (X^0 = 0); 0 if none.
  int index = 0;
};

// Default gradient-Lipschitz constant of the unscaled chain potential
// (order p = 1), estimated empirically; see the definition site for the
// estimation protocol.
double default_chain_l1();

// The chain objective f(x) = amplitude * [g(rho(x/sigma)) + |x/sigma|^2/5]
// where rho(z) = z / sqrt(1 + |z|^2/R^2), R = 230*sqrt(r+1), and g is the
// alternating psi*phi chain over X^0 = 0, X^1..X^{r+1}. The ambient
// dimension may exceed partition.d; trailing coordinates carry no chain
// weight but still enter |x|^2 and the squashing radius.
class ChainOracle final : public Objective {
 public:
  // Unscaled instance: sigma = amplitude = 1, p = 1.
  explicit ChainOracle(ChainPartition partition);

  ChainOracle(ChainPartition partition, int ambient_dim, int p, double sigma,
              double amplitude, double lipschitz_p, double l_p);

  int dim() const override { return ambient_dim_; }
  Domain domain() const override { return Domain::all_space; }
  double lipschitz() const override;
  double value(std::span<const double> x) const override;
  bool gradient(std::span<const double> x, std::span<double> out) const override;
  std::string name() const override { return "chain"; }

  // Unscaled evaluation (sigma and amplitude ignored).
  double raw_value(std::span<const double> x) const;
  void raw_gradient(std::span<const double> x, std::span<double> out) const;

  // Chain potential alone, without squashing or the quadratic term, at a
  // point already in squashed coordinates.
  double g_value(std::span<const double> y) const;
  void g_gradient(std::span<const double> y, std::span<double> out) const;

  // X vector and progress index at rho(x/sigma).
  ProgressVector progress(std::span<const double> x) const;

  // Squashed point rho(z) = z / sqrt(1 + |z|^2/R^2).
  std::vector<double> rho(std::span<const double> z) const;

  const ChainPartition& partition() const { return partition_; }
  double squash_radius() const { return R_; }
  int order() const { return p_; }
  double sigma() const { return sigma_; }
  double amplitude() const { return amplitude_; }
  double l_p() const { return l_p_; }

 private:
  ChainPartition partition_;
  int ambient_dim_ = 0;
  double R_ = 0.0;
  int p_ = 1;
  double sigma_ = 1.0;
  double amplitude_ = 1.0;
  double lipschitz_p_ = 0.0;  // declared L_p of the scaled instance
  double l_p_ = 0.0;
  std::vector<int> part_of_;  // coordinate -> part index (1-based), 0 = none
};

// Instance scale derived from a target accuracy eps, initial gap Delta,
// and smoothness budget L_p of order p:
//   sigma = (l_p * eps / (0.08 * L_p))^(1/p)
//   r     = floor((Delta / 1857) * (L_p/l_p)^(1/p) * eps^-((1+p)/p))
//   amplitude = L_p * sigma^(p+1) / l_p
struct ChainScaling {
  double sigma = 0.0;
  long long r = 0;
  double amplitude = 0.0;
};

ChainScaling theorem_scaling(double eps, double delta, double lipschitz_p,
                             int p, double l_p);

// Smallest dimension d satisfying the information-hiding gate
// 16^2 * 230^2 * (r+1)^2 * ln^2(d) <= d.
long long min_admissible_dim(long long r);

// Builds the fully scaled instance: theorem_scaling for sigma/r/amplitude,
// the dimension gate above, d0 = floor(d / (r+2)) with any remainder
// coordinates left inert, and a partition drawn from `seed`. Throws
// ConfigError when r < 1 (degenerate instance) or when d fails the gate
// (the message reports the minimal admissible dimension).
ChainOracle make_scaled_oracle(double eps, double delta, double lipschitz_p,
                               int p, double l_p, long long d,
                               std::uint64_t seed);

// Monte Carlo tail of the first chain sum of a fixed nonnegative weight
// vector under random equipartitions, next to the proven upper bound
//   2 * exp(-t^2 * d0 / (16 * sum of the d0 largest alpha_i^2)).
// The statistic is X^1(alpha) = sum of alpha over the first part / sqrt(d0),
// centered at its exact mean.
struct ConcentrationEstimate {
  double frequency = 0.0;
  double bound = 0.0;
};

ConcentrationEstimate concentration_probe(int d, int d0, int trials, double t,
                                          std::span<const double> alpha,
                                          std::uint64_t seed);

// Same probe with the uniform unit vector alpha = (1/sqrt(d), ...).
ConcentrationEstimate concentration_probe(int d, int d0, int trials, double t,
                                          std::uint64_t seed);

}  // namespace flowtrap
