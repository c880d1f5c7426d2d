#include <doctest.h>

#include <string>

#include "flowtrap/chain.hpp"
#include "flowtrap/diagnostics.hpp"

using namespace flowtrap;

namespace {

DiagnosticsOptions fast_options() {
  DiagnosticsOptions options;
  options.threshold_grid = 64;
  options.bound_samples = 500;
  options.contraction_samples = 100;
  options.gradient_samples = 40;
  options.value_gap_samples = 2000;
  options.floor_samples = 100;
  options.fd_samples = 5;
  return options;
}

}  // namespace

TEST_CASE("the full battery passes") {
  const auto reports = run_all_checks(fast_options());
  REQUIRE(reports.size() == 8);
  for (const SuiteReport& report : reports) {
    INFO(report.suite);
    CHECK(report.passed);
    CHECK(!report.checks.empty());
  }
  CHECK(all_passed(reports));

  const std::string text = format_report(reports);
  CHECK(text.find("[PASS]") != std::string::npos);
  CHECK(text.find("[FAIL]") == std::string::npos);
  CHECK(text.find("component-functions") != std::string::npos);
  CHECK(text.find("schedule") != std::string::npos);
}

TEST_CASE("a tampered component fails by name") {
  const auto leaky_psi = [](double x) { return psi(x) + 0.05; };
  const SuiteReport report = component_function_suite(
      fast_options(), leaky_psi, [](double x) { return psi_prime(x); },
      [](double x) { return phi(x); }, [](double x) { return phi_prime(x); });
  CHECK(report.suite == "component-functions");
  CHECK(!report.passed);
  bool vanish_failed = false;
  for (const CheckResult& check : report.checks) {
    if (check.name == "step vanishes left of 1/2" && !check.passed) {
      vanish_failed = true;
      CHECK(!check.detail.empty());
    }
  }
  CHECK(vanish_failed);

  const std::string text = format_report({report});
  CHECK(text.find("[FAIL]") != std::string::npos);
  CHECK(text.find("step vanishes left of 1/2") != std::string::npos);
  CHECK(!all_passed({report}));
}
