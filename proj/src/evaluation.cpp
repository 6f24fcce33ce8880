#include "polsar/evaluation.hpp"

#include <algorithm>
#include <cstdio>
#include <ostream>
#include <sstream>

#include "polsar/error.hpp"

namespace polsar {

MethodScores score_test_pixels(const std::string& method, const ClassMap& predicted,
                               const Split& split) {
  MethodScores s;
  s.method = method;
  std::size_t correct_total = 0, total = 0;
  for (std::size_t m = 0; m < split.test.size(); ++m) {
    std::size_t correct = 0;
    for (const Pixel& p : split.test[m]) {
      if (p.x >= predicted.width() || p.y >= predicted.height())
        throw Error(ErrorCode::OutOfBounds, "test pixel outside the class map");
      correct += predicted.at(p.x, p.y) == m + 1;
    }
    const std::size_t n = split.test[m].size();
    s.accuracy.push_back(n == 0 ? 0.0 : 100.0 * static_cast<double>(correct) /
                                            static_cast<double>(n));
    correct_total += correct;
    total += n;
  }
  s.overall =
      total == 0 ? 0.0 : 100.0 * static_cast<double>(correct_total) / static_cast<double>(total);
  return s;
}

MethodScores score_against_truth(const std::string& method, const ClassMap& predicted,
                                 const ClassMap& truth, std::size_t classes) {
  if (!predicted.same_shape(truth))
    throw Error(ErrorCode::SizeMismatch, "prediction and truth differ in size");
  std::vector<std::size_t> correct(classes, 0), count(classes, 0);
  for (std::size_t i = 0; i < truth.size(); ++i) {
    const std::size_t t = truth[i];
    if (t == kUnclassified || t > classes) continue;
    ++count[t - 1];
    correct[t - 1] += predicted[i] == t;
  }
  MethodScores s;
  s.method = method;
  std::size_t c_all = 0, n_all = 0;
  for (std::size_t m = 0; m < classes; ++m) {
    s.accuracy.push_back(count[m] == 0 ? 0.0 : 100.0 * static_cast<double>(correct[m]) /
                                                   static_cast<double>(count[m]));
    c_all += correct[m];
    n_all += count[m];
  }
  s.overall = n_all == 0 ? 0.0 : 100.0 * static_cast<double>(c_all) / static_cast<double>(n_all);
  return s;
}

std::optional<double> improvement(double accuracy, double baseline) {
  if (baseline >= 100.0) return std::nullopt;
  return 100.0 * (accuracy - baseline) / (100.0 - baseline);
}

AccuracyReport compare_methods(std::vector<MethodScores> methods) {
  if (methods.size() < 2)
    throw Error(ErrorCode::MissingBaseline, "improvements need at least two methods to compare");
  const std::size_t classes = methods.front().accuracy.size();
  for (const auto& m : methods)
    if (m.accuracy.size() != classes)
      throw Error(ErrorCode::InvalidArgument, "methods report different class counts");

  AccuracyReport r;
  r.methods = std::move(methods);
  r.baseline.assign(classes, 0);
  for (std::size_t c = 0; c < classes; ++c)
    for (std::size_t i = 1; i < r.methods.size(); ++i)
      if (r.methods[i].accuracy[c] < r.methods[r.baseline[c]].accuracy[c]) r.baseline[c] = i;

  for (const auto& m : r.methods) {
    std::vector<std::optional<double>> row;
    for (std::size_t c = 0; c < classes; ++c)
      row.push_back(improvement(m.accuracy[c], r.methods[r.baseline[c]].accuracy[c]));
    r.improvements.push_back(std::move(row));
  }
  return r;
}

namespace {

std::string fixed(double v, int digits) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.*f", digits, v);
  return buf;
}

std::string cell(const AccuracyReport& r, std::size_t method, std::size_t c) {
  std::string s = fixed(r.methods[method].accuracy[c], 1);
  const auto& imp = r.improvements[method][c];
  if (!imp) return s;
  if (r.baseline[c] == method) return s + " (baseline)";
  return s + " (" + fixed(*imp, 1) + "%)";
}

}  // namespace

void write_report_table(std::ostream& os, const AccuracyReport& report,
                        const std::vector<std::string>& class_names) {
  std::vector<std::vector<std::string>> rows;
  std::vector<std::string> head{"Method"};
  for (std::size_t c = 0; c < report.classes(); ++c)
    head.push_back(c < class_names.size() ? class_names[c] : "Class " + std::to_string(c + 1));
  head.push_back("Overall");
  head.push_back("Time (s)");
  rows.push_back(head);
  for (std::size_t i = 0; i < report.methods.size(); ++i) {
    std::vector<std::string> row{report.methods[i].method};
    for (std::size_t c = 0; c < report.classes(); ++c) row.push_back(cell(report, i, c));
    row.push_back(fixed(report.methods[i].overall, 2));
    row.push_back(fixed(report.methods[i].seconds, 3));
    rows.push_back(std::move(row));
  }

  std::vector<std::size_t> width(head.size(), 0);
  for (const auto& row : rows)
    for (std::size_t j = 0; j < row.size(); ++j) width[j] = std::max(width[j], row[j].size());
  for (std::size_t i = 0; i < rows.size(); ++i) {
    for (std::size_t j = 0; j < rows[i].size(); ++j) {
      os << rows[i][j] << std::string(width[j] - rows[i][j].size(), ' ');
      os << (j + 1 < rows[i].size() ? "  " : "\n");
    }
    if (i == 0) {
      std::size_t total = 0;
      for (auto w : width) total += w + 2;
      os << std::string(total - 2, '-') << '\n';
    }
  }
}

void write_report_csv(std::ostream& os, const AccuracyReport& report) {
  os << "method";
  for (std::size_t c = 0; c < report.classes(); ++c) os << ",acc_" << (c + 1);
  for (std::size_t c = 0; c < report.classes(); ++c) os << ",impr_" << (c + 1);
  os << ",overall,seconds\n";
  for (std::size_t i = 0; i < report.methods.size(); ++i) {
    const auto& m = report.methods[i];
    os << m.method;
    for (double a : m.accuracy) os << ',' << fixed(a, 4);
    for (const auto& imp : report.improvements[i]) os << ',' << (imp ? fixed(*imp, 4) : "");
    os << ',' << fixed(m.overall, 4) << ',' << fixed(m.seconds, 6) << '\n';
  }
}

}  // namespace polsar
