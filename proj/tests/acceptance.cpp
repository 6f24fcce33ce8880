// Acceptance suite: one PASS/FAIL line per criterion with its runtime.
// Usage: acceptance <polsar cli> <table scores csv>

#include <algorithm>
#include <boost/math/special_functions/polygamma.hpp>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <functional>
#include <iostream>
#include <map>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include "polsar/classifier.hpp"
#include "polsar/diffusion_reaction.hpp"
#include "polsar/distances.hpp"
#include "polsar/error.hpp"
#include "polsar/estimation.hpp"
#include "polsar/experiment.hpp"
#include "polsar/weights.hpp"
#include "polsar/wishart.hpp"
#include "support.hpp"

using namespace polsar;
namespace fs = std::filesystem;

namespace {

struct Outcome {
  bool pass = true;
  std::string detail;
};

// Collects failed checks; the first few are reported.
struct Checks {
  Outcome o;
  int failures = 0;
  void expect(bool ok, const std::string& what) {
    if (ok) return;
    o.pass = false;
    if (++failures <= 3) o.detail += (o.detail.empty() ? "" : "; ") + what;
  }
};

std::string fmt(const char* f, double v) {
  char buf[64];
  std::snprintf(buf, sizeof buf, f, v);
  return buf;
}

HermitianMatrix3 sigma0() {
  return {0.30, 0.24, 0.33, {0.05, 0.02}, {0.2, 0.1}, {-0.03, 0.04}};
}

Outcome ac1() {
  Checks c;
  const auto i = HermitianMatrix3::identity();
  const double kl = kl_distance(i, 2.0 * i, 4);
  const double hd = hellinger_distance(i, 2.0 * i, 1);
  // 1 - |((I + I/2)/2)^-1| / sqrt(|I||2I|) = 1 - (64/27)/sqrt(8)
  const double hd_oracle = 1.0 - (64.0 / 27.0) / std::sqrt(8.0);
  c.expect(std::abs(kl - 3.0) <= 1e-12, "KL(I,2I,4) = " + fmt("%.15g", kl));
  c.expect(std::abs(hd - hd_oracle) <= 1e-5,
           "HD(I,2I,1) = " + fmt("%.8f", hd) + " vs " + fmt("%.8f", hd_oracle));
  Rng rng(2016);
  double worst = 0.0;
  for (int k = 0; k < 1000; ++k) {
    const auto s = test::random_pd(rng);
    for (auto kind : {DistanceKind::Euclidean, DistanceKind::Hellinger,
                      DistanceKind::Bhattacharyya, DistanceKind::KullbackLeibler})
      worst = std::max(worst, std::abs(distance(kind, s, s, 4.0)));
  }
  c.expect(worst <= 1e-12, "max d(S,S) = " + fmt("%.3g", worst));
  if (c.o.pass)
    c.o.detail = "KL=" + fmt("%.12f", kl) + " HD=" + fmt("%.7f", hd) + " (1-(64/27)/sqrt(8) = " +
                 fmt("%.7f", hd_oracle) + "; the listed 0.161884 is off by " +
                 fmt("%.1e", hd_oracle - 0.161884) + ") max d(S,S)=" + fmt("%.2g", worst);
  return c.o;
}

Outcome ac2() {
  Checks c;
  const WishartModel model(sigma0(), 4);
  int within = 0;
  double ml_err = 0.0, corr_err = 0.0, ml_signed = 0.0;
  for (int r = 0; r < 20; ++r) {
    Rng rng(derive_seed(4242, r));
    std::vector<HermitianMatrix3> z(5000);
    for (auto& v : z) v = sample(model, rng);
    const auto fit = fit_wishart(z);
    within += std::abs(fit.looks_ml - 4.0) < 0.2;
    ml_err += std::abs(fit.looks_ml - 4.0);
    ml_signed += fit.looks_ml - 4.0;
    corr_err += std::abs(fit.looks - 4.0);
  }
  c.expect(within >= 18, std::to_string(within) + "/20 within 0.2");
  c.expect(corr_err <= ml_err, "corrected error " + fmt("%.5f", corr_err / 20) + " > ML " +
                                   fmt("%.5f", ml_err / 20));
  const std::string summary = std::to_string(within) + "/20 within 0.2, mean|err| ML=" +
                              fmt("%.5f", ml_err / 20) + " corrected=" + fmt("%.5f", corr_err / 20) +
                              ", mean ML error " + fmt("%+.5f", ml_signed / 20) +
                              ", B(4,5000)=" + fmt("%.5f", box_snell_bias(4, 5000));
  c.o.detail = c.o.pass ? summary : c.o.detail + " [" + summary + "]";
  return c.o;
}

Outcome ac3() {
  Checks c;
  const double b = box_snell_bias(4, 100);
  double t1 = 0, t2 = 0;
  for (int i = 0; i < 3; ++i) {
    t1 += boost::math::polygamma(1, 4.0 - i);
    t2 += boost::math::polygamma(2, 4.0 - i);
  }
  const double oracle = (9.0 / 8.0 - 3.0 / 16.0 - t2 / 2.0) / (100.0 * (t1 - 0.75));
  c.expect(std::abs(b - 0.021905) <= 1e-5, "bias = " + fmt("%.8f", b));
  c.expect(std::abs(b - oracle) <= 1e-12, "oracle = " + fmt("%.12f", oracle));
  if (c.o.pass) c.o.detail = "B(4,100)=" + fmt("%.8f", b);
  return c.o;
}

Outcome ac4() {
  Checks c;
  EvolutionParams p;  // alpha 0.5, dt 0.01
  p.iterations = 100;
  std::size_t non_pd = 0;
  for (std::uint64_t seed = 1; seed <= 5; ++seed) {
    Rng rng(derive_seed(seed, 999));
    auto protos = make_prototypes({WishartModel(test::random_pd(rng), 4),
                                   WishartModel(test::random_pd(rng), 4),
                                   WishartModel(test::random_pd(rng), 4)},
                                  4.0);
    const auto field = test::random_field(150, 150, seed);
    evolve(field, protos, p, [&](int, const CovarianceField& f) {
      for (const auto& s : f.cells()) non_pd += !s.is_positive_definite();
    });
  }
  c.expect(non_pd == 0, std::to_string(non_pd) + " non-PD pixel-iterations");
  EvolutionParams bad = p;
  bad.alpha = 26.0;  // 1 - 4 * 26 * 0.01 < 0
  bool raised = false;
  try {
    evolve(test::random_field(8, 8, 1),
           make_prototypes({WishartModel(HermitianMatrix3::identity(), 4),
                            WishartModel(2.0 * HermitianMatrix3::identity(), 4)},
                           4.0),
           bad);
  } catch (const Error& e) {
    raised = e.code() == ErrorCode::StabilityViolation;
  }
  c.expect(raised, "no StabilityViolation for 1 - 4 alpha dt < 0");
  if (c.o.pass) c.o.detail = "5 seeds x 100 iterations at 150x150 stay PD; violation raised";
  return c.o;
}

// AC5 and AC7 share one default pipeline run.
struct PipelineRun {
  std::optional<PipelineResult> result;
  std::string error;
  double seconds = 0.0;
};

PipelineRun& default_run() {
  static PipelineRun run = [] {
    PipelineRun r;
    const auto t0 = std::chrono::steady_clock::now();
    try {
      std::istringstream none;
      auto cfg = ExperimentConfig::from(KeyValues::parse(none));
      cfg.out = fs::temp_directory_path() / "polsar_acceptance_run";
      fs::remove_all(cfg.out);
      r.result = run_pipeline(cfg);
      fs::remove_all(cfg.out);
    } catch (const std::exception& e) {
      r.error = e.what();
    }
    r.seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    return r;
  }();
  return run;
}

Outcome ac5() {
  Checks c;
  auto& run = default_run();
  if (!run.result) return {false, "pipeline failed: " + run.error};
  const auto& methods = run.result->report.methods;
  const MethodScores* dr = nullptr;
  const MethodScores* klow = nullptr;
  for (const auto& m : methods) {
    if (m.method == "DR+KL+OW+50") dr = &m;
    if (m.method == "KL+OW") klow = &m;
  }
  if (!dr || !klow) return {false, "missing DR+KL+OW+50 or KL+OW rows"};
  for (std::size_t k = 0; k < dr->accuracy.size(); ++k)
    c.expect(dr->accuracy[k] >= klow->accuracy[k],
             "class " + std::to_string(k + 1) + ": DR " + fmt("%.2f", dr->accuracy[k]) +
                 " < KL+OW " + fmt("%.2f", klow->accuracy[k]));
  c.expect(dr->overall >= 99.0, "DR overall " + fmt("%.2f", dr->overall));
  for (const auto& m : methods)
    c.expect(m.accuracy[0] == 100.0, m.method + " class 1 " + fmt("%.2f", m.accuracy[0]));
  if (c.o.pass) {
    c.o.detail = "DR per class";
    for (double a : dr->accuracy) c.o.detail += " " + fmt("%.1f", a);
    c.o.detail += ", KL+OW";
    for (double a : klow->accuracy) c.o.detail += " " + fmt("%.1f", a);
    c.o.detail += ", DR overall " + fmt("%.2f", dr->overall);
  }
  c.o.detail += " (pipeline " + fmt("%.1f", run.seconds) + " s)";
  return c.o;
}

Outcome ac6(const std::string& cli, const std::string& table) {
  Checks c;
  const fs::path csv = fs::temp_directory_path() / "polsar_acceptance_scores.csv";
  const std::string cmd =
      "\"" + cli + "\" evaluate --scores \"" + table + "\" --out \"" + csv.string() + "\" > /dev/null";
  if (std::system(cmd.c_str()) != 0) return {false, "evaluate command failed"};
  std::ifstream is(csv);
  std::string line;
  std::getline(is, line);
  std::map<std::string, std::vector<std::string>> rows;
  while (std::getline(is, line)) {
    std::vector<std::string> cells;
    std::stringstream ss(line);
    std::string cell;
    while (std::getline(ss, cell, ',')) cells.push_back(cell);
    rows[cells[0]] = cells;
  }
  fs::remove(csv);
  // columns: method, acc_1..3, impr_1..3, overall, seconds
  const std::vector<std::pair<std::string, std::pair<double, double>>> want{
      {"ML", {77.6, 87.3}},    {"HD", {98.5, 35.6}},          {"KL", {95.5, NAN}},
      {"KL+OW", {49.3, 74.2}}, {"DR+KL+OW+50", {95.5, 100.0}}, {"ED", {NAN, 36.7}}};
  int matched = 0;
  for (const auto& [method, impr] : want) {
    if (!rows.count(method)) {
      c.expect(false, "no row " + method);
      continue;
    }
    const auto& r = rows[method];
    for (int k = 0; k < 2; ++k) {
      const double w = k == 0 ? impr.first : impr.second;
      if (std::isnan(w)) continue;  // baseline cell
      const double got = std::round(std::stod(r.at(5 + k)) * 10.0) / 10.0;
      c.expect(got == w, method + " class " + std::to_string(k + 2) + " " + fmt("%.1f", got) +
                             " != " + fmt("%.1f", w));
      matched += got == w;
    }
  }
  if (c.o.pass) c.o.detail = std::to_string(matched) + "/10 improvements match to one decimal";
  return c.o;
}

Outcome ac7() {
  Checks c;
  auto& run = default_run();
  if (!run.result) return {false, "pipeline failed: " + run.error};
  const auto& rows = run.result->metrics.rows;
  if (rows.size() < 51) return {false, "fewer than 50 iterations"};
  int rises = 0;
  for (std::size_t i = 4; i < rows.size(); ++i)
    if (!(rows[i].mean_weighted_distance < rows[i - 1].mean_weighted_distance)) {
      c.expect(false, "mean distance not decreasing at iteration " + std::to_string(i));
      ++rises;
    }
  const double ratio = rows[50].mean_weighted_distance / rows[0].mean_weighted_distance;
  c.expect(ratio < 0.01, "distance ratio at 50 = " + fmt("%.4f", ratio));
  c.expect(rows[1].changed_fraction <= 0.05, "changed at 1 = " + fmt("%.4f", rows[1].changed_fraction));
  std::string increases;
  int n_inc = 0;
  for (std::size_t i = 6; i < rows.size(); ++i)
    if (rows[i].changed_fraction > rows[i - 1].changed_fraction) {
      ++n_inc;
      if (n_inc <= 4)
        increases += " " + std::to_string(i) + ":" + fmt("%.5f", rows[i - 1].changed_fraction) +
                     "->" + fmt("%.5f", rows[i].changed_fraction);
    }
  c.expect(n_inc == 0, "changed fraction rises " + std::to_string(n_inc) + " times after 5 (" +
                           increases.substr(1) + ")");
  const std::string summary = "ratio " + fmt("%.5f", ratio) + ", changed@1 " +
                              fmt("%.5f", rows[1].changed_fraction) + ", distance rises " +
                              std::to_string(rises);
  c.o.detail = c.o.pass ? summary : c.o.detail + " [" + summary + "]";
  return c.o;
}

Outcome ac8() {
  Checks c;
  const auto train = test::spread_training_set(8);
  const DistanceTable table(train, DistanceKind::KullbackLeibler, 4.0);
  // measured spread: mean own-prototype distance per class
  double spread[3] = {};
  for (std::size_t r = 0; r < table.rows(); ++r)
    spread[table.row_class(r)] += table.at(r, table.row_class(r)) / table.class_size(table.row_class(r));
  c.expect(spread[2] > 3.0 * spread[0] && spread[2] > 3.0 * spread[1],
           "spread ratio " + fmt("%.2f", spread[2] / std::max(spread[0], spread[1])));
  const auto res = optimize_weights(table);
  for (std::size_t i = 0; i < res.trace.size(); ++i) {
    c.expect(on_simplex(res.trace[i].weights), "off simplex at " + std::to_string(i));
    if (i > 0)
      c.expect(res.trace[i].energy <= res.trace[i - 1].energy,
               "energy rose at " + std::to_string(i));
  }
  const auto& w = res.weights;
  c.expect(w[2] < w[0] && w[2] < w[1], "weights " + fmt("%.3f", w[0]) + " " + fmt("%.3f", w[1]) +
                                           " " + fmt("%.3f", w[2]));
  if (c.o.pass)
    c.o.detail = "spread x" + fmt("%.2f", spread[2] / std::max(spread[0], spread[1])) +
                 ", weights (" + fmt("%.3f", w[0]) + ", " + fmt("%.3f", w[1]) + ", " +
                 fmt("%.3f", w[2]) + ") after " + std::to_string(res.iterations) + " steps";
  return c.o;
}

Outcome ac9() {
  Checks c;
  EvolutionParams p;
  double worst = 0.0;
  for (std::uint64_t seed = 0; seed < 10; ++seed) {
    const auto f = test::random_field(64, 64, 100 + seed);
    const auto g = diffusion_step(f, p);
    const long w = 64, h = 64;
    for (int k = 0; k < 9; ++k) {
      auto u = [&](long x, long y) {
        x = std::clamp(x, 0L, w - 1);
        y = std::clamp(y, 0L, h - 1);
        return f.at(std::size_t(x), std::size_t(y)).packed()[k];
      };
      for (long y = 0; y < h; ++y)
        for (long x = 0; x < w; ++x) {
          const double ref =
              u(x, y) + p.alpha * p.dt *
                            (u(x + 1, y) + u(x - 1, y) + u(x, y + 1) + u(x, y - 1) - 4 * u(x, y)) /
                            (p.h * p.h);
          worst = std::max(worst, std::abs(g.at(std::size_t(x), std::size_t(y)).packed()[k] - ref));
        }
    }
  }
  c.expect(worst <= 1e-12, "max deviation " + fmt("%.3g", worst));
  if (c.o.pass) c.o.detail = "max deviation " + fmt("%.2g", worst);
  return c.o;
}

}  // namespace

int main(int argc, char** argv) {
  if (argc < 3) {
    std::cerr << "usage: acceptance <polsar cli> <table scores csv>\n";
    return 2;
  }
  const std::string cli = argv[1], table = argv[2];
  struct Criterion {
    const char* id;
    const char* what;
    double limit;
    std::function<Outcome()> run;
  };
  const std::vector<Criterion> criteria{
      {"AC1", "distance hand values and d(S,S)=0", 1, ac1},
      {"AC2", "looks estimator consistency", 30, ac2},
      {"AC3", "bias formula regression", 1, ac3},
      {"AC4", "cone preservation and stability check", 60, ac4},
      {"AC5", "accuracy ordering on the default phantom", 120, ac5},
      {"AC6", "improvement arithmetic on published scores", 1, [&] { return ac6(cli, table); }},
      {"AC7", "evolution statistics shape", 120, ac7},
      {"AC8", "weight optimizer properties", 60, ac8},
      {"AC9", "diffusion step vs scalar stencil", 10, ac9},
  };
  int failed = 0;
  for (const auto& cr : criteria) {
    const auto t0 = std::chrono::steady_clock::now();
    Outcome o;
    try {
      o = cr.run();
    } catch (const std::exception& e) {
      o = {false, std::string("exception: ") + e.what()};
    }
    double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    // AC7 reuses the run timed under AC5; charge it the full pipeline time
    if (std::string(cr.id) == "AC7") secs += default_run().seconds;
    if (secs > cr.limit) {
      o.pass = false;
      o.detail += " [over the " + fmt("%.0f", cr.limit) + " s budget]";
    }
    failed += !o.pass;
    std::printf("%s %s %-45s %8.3f s  %s\n", cr.id, o.pass ? "PASS" : "FAIL", cr.what, secs,
                o.detail.c_str());
    std::fflush(stdout);
  }
  std::printf("%d/%zu criteria passed\n", static_cast<int>(criteria.size()) - failed,
              criteria.size());
  return failed == 0 ? 0 : 1;
}
