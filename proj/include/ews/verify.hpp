#pragma once

// Named, seeded check suites with machine-readable reports.

#include <cstdint>
#include <string>
#include <string_view>
#include <vector>

namespace ews {

struct SuiteParams {
  std::size_t m = 3;
  std::size_t n = 3;
  std::size_t samples = 0; ///< 0 selects the suite default
  std::uint64_t seed = 42;

  friend bool operator==(const SuiteParams &, const SuiteParams &) = default;
};

struct Check {
  std::string claim_id;
  std::string anchor; ///< the claim being tested, in words
  bool passed = false;
  bool gating = true; ///< non-gating checks are recorded but never fail a suite
  double measured = 0.0;
  double expected = 0.0;
  double tolerance = 0.0;
  std::string note;

  friend bool operator==(const Check &, const Check &) = default;
};

struct SuiteReport {
  std::string suite;
  SuiteParams params;
  std::vector<Check> checks;
  double wall_time = 0.0; ///< seconds; not part of the emitted report

  bool all_passed() const;
  const Check *find(std::string_view claim_id) const;
};

/// Registered suite names in a fixed order.
const std::vector<std::string> &suite_names();
std::size_t default_samples(std::string_view suite);

/// Throws UnknownSuite, or BadParam for dimensions a suite cannot use.
SuiteReport run_suite(std::string_view name, const SuiteParams &params);

enum class ReportFormat { json, csv };

/// Stable field order; CSV has a header and one row per check.
std::string emit_report(const SuiteReport &r, ReportFormat format);
/// Inverse of the JSON emitter (wall time is not restored). Throws ParseError.
SuiteReport parse_report_json(std::string_view text);

} // namespace ews
