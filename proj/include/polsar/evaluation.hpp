#pragma once

#include <cstddef>
#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

#include "polsar/grid.hpp"
#include "polsar/roi.hpp"

namespace polsar {

/// Per-class accuracy of one method, in percent.
struct MethodScores {
  std::string method;
  std::vector<double> accuracy;  ///< one entry per class
  double overall = 0.0;          ///< correct / total over all test pixels
  double seconds = 0.0;
};

/// Scores `predicted` on the test half of `split`. Throws OutOfBounds when
/// a test pixel lies outside the map.
MethodScores score_test_pixels(const std::string& method, const ClassMap& predicted,
                               const Split& split);

/// Scores against a full ground-truth map (label 0 pixels ignored).
MethodScores score_against_truth(const std::string& method, const ClassMap& predicted,
                                 const ClassMap& truth, std::size_t classes);

/// 100 (acc - baseline) / (100 - baseline); empty when baseline is 100
/// (nothing left to improve).
std::optional<double> improvement(double accuracy, double baseline);

/// Table of methods with the per-class improvement over the worst method
/// of that class.
struct AccuracyReport {
  std::vector<MethodScores> methods;
  std::vector<std::size_t> baseline;  ///< per class, index into methods
  /// improvements[method][class]; empty when the class baseline is 100.
  std::vector<std::vector<std::optional<double>>> improvements;

  std::size_t classes() const { return baseline.size(); }
};

/// Throws MissingBaseline with fewer than two methods and InvalidArgument
/// when class counts disagree. Ties for the worst method go to the first.
AccuracyReport compare_methods(std::vector<MethodScores> methods);

/// Text table laid out as: method, per-class "acc (impr%)", overall, seconds.
void write_report_table(std::ostream& os, const AccuracyReport& report,
                        const std::vector<std::string>& class_names = {});
/// CSV: method,acc_1..acc_M,impr_1..impr_M,overall,seconds
void write_report_csv(std::ostream& os, const AccuracyReport& report);

}  // namespace polsar
