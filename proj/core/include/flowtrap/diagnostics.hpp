#pragma once

// Runtime property suites. Everything the library promises about its
// mathematical components is restated here as an executable check: the
// smooth-step and CDF component bounds, squashing contraction, chain
// gradient bounds and value gaps, the large-gradient floor, analytic
// versus finite-difference agreement, net covering, path function shape,
// and the barrier schedule identities. The CLI verify command runs the
// whole battery and fails loudly if any suite breaks.

#include <cstdint>
#include <functional>
#include <string>
#include <vector>

namespace flowtrap {

struct CheckResult {
  std::string name;
  bool passed = false;
  std::string detail;  // measured values, mostly useful on failure
};

struct SuiteReport {
  std::string suite;
  bool passed = false;
  std::vector<CheckResult> checks;
  double millis = 0.0;
};

// Sample counts for the statistical checks. The defaults match the
// documented guarantees; tests shrink them for speed.
struct DiagnosticsOptions {
  int threshold_grid = 512;      // points for the left-of-threshold checks
  int bound_samples = 10000;     // points for the component bound checks
  int contraction_samples = 1000;
  int gradient_samples = 200;    // points for the chain gradient bound
  long long value_gap_samples = 1000000;
  int floor_samples = 1000;      // constructed large-gradient points
  int fd_samples = 20;
  std::uint64_t seed = 20260814;
};

using ScalarFn = std::function<double(double)>;

// Component bounds with injectable functions, so a deliberately tampered
// component can be shown to fail by name. The canonical overload checks
// the library's own psi / psi_prime / phi / phi_prime.
SuiteReport component_function_suite(const DiagnosticsOptions& options,
                                     const ScalarFn& psi_fn,
                                     const ScalarFn& psi_prime_fn,
                                     const ScalarFn& phi_fn,
                                     const ScalarFn& phi_prime_fn);
SuiteReport component_function_suite(const DiagnosticsOptions& options);

// rho(0) = 0 and |rho(x)| < min(|x|, R) for x != 0.
SuiteReport squash_contraction_suite(const DiagnosticsOptions& options);

// |grad g| <= 46 sqrt(r+1) and g >= g(0) - 12 r at sampled points.
SuiteReport chain_bound_suite(const DiagnosticsOptions& options);

// |grad f| >= 0.08 at points constructed so the last chain gap is < 1.
SuiteReport large_gradient_suite(const DiagnosticsOptions& options);

// Analytic gradients agree with central finite differences to 1e-5
// relative, for the chain and the closed-form objectives.
SuiteReport fd_agreement_suite(const DiagnosticsOptions& options);

// Axis count formula, covering radius, exact endpoints, and face
// restriction of nets.
SuiteReport net_suite(const DiagnosticsOptions& options);

// Path function shape: values fall by one per path step, the endpoint is
// the unique local minimum (brute force on small grids), square(v) boxes
// tile the cube, and the q = 1 frontier search uses exactly n rounds.
SuiteReport path_suite(const DiagnosticsOptions& options);

// Barrier exponents sum to one, counts stay >= 3, thresholds stay below
// 3 eps / 8, and compressed rectangles stay inside their parents with
// sides at most 3 cells.
SuiteReport schedule_suite(const DiagnosticsOptions& options);

std::vector<SuiteReport> run_all_checks(const DiagnosticsOptions& options = {});

bool all_passed(const std::vector<SuiteReport>& reports);

// One line per suite plus one per failed check.
std::string format_report(const std::vector<SuiteReport>& reports);

}  // namespace flowtrap
