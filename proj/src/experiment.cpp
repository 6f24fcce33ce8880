#include "polsar/experiment.hpp"

#include <algorithm>
#include <cctype>
#include <charconv>
#include <chrono>
#include <cstdio>
#include <fstream>
#include <map>
#include <ostream>
#include <set>
#include <sstream>

#include "polsar/error.hpp"
#include "polsar/io.hpp"

namespace polsar {

namespace {

std::string exact(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

std::uint64_t parse_u64(const std::string& key, const std::string& text) {
  std::uint64_t v = 0;
  const char* end = text.data() + text.size();
  auto [p, ec] = std::from_chars(text.data(), end, v);
  if (ec != std::errc{} || p != end)
    throw Error(ErrorCode::InvalidSpec, key + " must be an unsigned integer");
  return v;
}

std::string class_key(std::size_t m, const char* field) {
  return "class" + std::to_string(m + 1) + "_" + field;
}

}  // namespace

WeightVector TrainedModel::weights() const {
  std::vector<double> w;
  for (const auto& c : classes) w.push_back(c.weight);
  return WeightVector(std::move(w));
}

void TrainedModel::set_weights(const WeightVector& w) {
  if (w.size() != classes.size())
    throw Error(ErrorCode::InvalidArgument, "weight count does not match the class count");
  for (std::size_t m = 0; m < classes.size(); ++m) classes[m].weight = w[m];
}

void write_model(const TrainedModel& model, std::ostream& os) {
  os << "# polsar model\n";
  os << "classes: " << model.classes.size() << '\n';
  os << "shared_looks: " << exact(model.shared_looks) << '\n';
  os << "per_class_looks: " << (model.per_class_looks ? "true" : "false") << '\n';
  os << "split_seed: " << model.split_seed << '\n';
  for (std::size_t m = 0; m < model.classes.size(); ++m) {
    const ClassModel& c = model.classes[m];
    os << '\n';
    os << class_key(m, "covariance") << ":";
    for (double v : c.sigma.packed()) os << ' ' << exact(v);
    os << '\n';
    os << class_key(m, "looks") << ": " << exact(c.looks) << '\n';
    os << class_key(m, "looks_ml") << ": " << exact(c.looks_ml) << '\n';
    os << class_key(m, "samples") << ": " << c.samples << '\n';
    os << class_key(m, "no_root") << ": " << (c.no_root ? "true" : "false") << '\n';
    os << class_key(m, "clamped_below") << ": " << (c.clamped_below ? "true" : "false") << '\n';
    os << class_key(m, "weight") << ": " << exact(c.weight) << '\n';
  }
}

void write_model(const TrainedModel& model, const fs::path& path) {
  std::ofstream os(path);
  if (!os) throw Error(ErrorCode::IoError, "cannot write " + path.string());
  write_model(model, os);
  if (!os) throw Error(ErrorCode::IoError, "failed writing " + path.string());
}

TrainedModel parse_model(std::istream& is) {
  const KeyValues kv = KeyValues::parse(is, ErrorCode::InvalidSpec);
  TrainedModel model;
  const long long classes = kv.require_int("classes");
  if (classes < 2 || classes > 255) throw Error(ErrorCode::InvalidSpec, "classes must be 2..255");
  model.shared_looks = kv.require_double("shared_looks");
  model.per_class_looks = kv.get_bool("per_class_looks", false);
  model.split_seed = parse_u64("split_seed", kv.get("split_seed").value_or("0"));
  for (std::size_t m = 0; m < static_cast<std::size_t>(classes); ++m) {
    ClassModel c;
    const auto v = kv.get_doubles(class_key(m, "covariance"));
    if (v.size() != 9)
      throw Error(ErrorCode::InvalidSpec, class_key(m, "covariance") + " needs 9 values");
    std::array<double, 9> packed{};
    std::copy(v.begin(), v.end(), packed.begin());
    c.sigma = HermitianMatrix3::from_packed(packed);
    c.looks = kv.require_double(class_key(m, "looks"));
    c.looks_ml = kv.get_double(class_key(m, "looks_ml"), c.looks);
    c.samples = static_cast<std::size_t>(kv.get_int(class_key(m, "samples"), 0));
    c.no_root = kv.get_bool(class_key(m, "no_root"), false);
    c.clamped_below = kv.get_bool(class_key(m, "clamped_below"), false);
    c.weight = kv.get_double(class_key(m, "weight"), 1.0 / static_cast<double>(classes));
    model.classes.push_back(c);
  }
  try {
    (void)model.weights();
  } catch (const Error& e) {
    throw Error(ErrorCode::InvalidSpec, "model weights: " + e.message());
  }
  return model;
}

TrainedModel read_model(const fs::path& path) {
  std::ifstream is(path);
  if (!is) throw Error(ErrorCode::IoError, "cannot open " + path.string());
  return parse_model(is);
}

PrototypeSet to_prototypes(const TrainedModel& model, HellingerForm form) {
  PrototypeSet p;
  for (const auto& c : model.classes) p.models.emplace_back(c.sigma, c.looks);
  p.weights = model.weights();
  p.shared_looks = model.shared_looks;
  p.per_class_looks = model.per_class_looks;
  p.hellinger_form = form;
  p.validate();
  return p;
}

namespace {

std::vector<HermitianMatrix3> gather(const CovarianceField& field, const std::vector<Pixel>& px) {
  std::vector<HermitianMatrix3> out;
  out.reserve(px.size());
  for (const Pixel& p : px) {
    if (p.x >= field.width() || p.y >= field.height())
      throw Error(ErrorCode::OutOfBounds, "ROI pixel outside the image");
    out.push_back(field.at(p.x, p.y));
  }
  return out;
}

}  // namespace

TrainedModel train_model(const CovarianceField& field, const Split& split, double shared_looks,
                         bool per_class_looks) {
  if (split.train.size() < 2)
    throw Error(ErrorCode::InvalidArgument, "training needs at least two classes");
  TrainedModel model;
  model.shared_looks = shared_looks;
  model.per_class_looks = per_class_looks;
  const double w = 1.0 / static_cast<double>(split.train.size());
  for (std::size_t m = 0; m < split.train.size(); ++m) {
    const std::string name = "class " + std::to_string(m + 1);
    if (split.train[m].empty())
      throw Error(ErrorCode::EmptySample, name + " has no training pixels");
    const auto sample = gather(field, split.train[m]);
    WishartFit fit;
    try {
      fit = fit_wishart(sample);
    } catch (const Error& e) {
      throw Error(e.code(), name + ": " + e.message());
    }
    model.classes.push_back(
        {fit.sigma, fit.looks, fit.looks_ml, fit.n, fit.no_root, fit.clamped_below, w});
  }
  return model;
}

std::vector<TrainingClass> training_set(const CovarianceField& field, const Split& split,
                                        const TrainedModel& model) {
  if (split.train.size() != model.classes.size())
    throw Error(ErrorCode::InvalidArgument, "ROI and model class counts differ");
  std::vector<TrainingClass> out;
  for (std::size_t m = 0; m < model.classes.size(); ++m)
    out.push_back({model.classes[m].sigma, gather(field, split.train[m])});
  return out;
}

std::vector<double> training_looks(const TrainedModel& model) {
  std::vector<double> looks;
  for (const auto& c : model.classes)
    looks.push_back(model.per_class_looks ? c.looks : model.shared_looks);
  return looks;
}

namespace {

bool is_phantom_key(const std::string& key) {
  static const std::set<std::string> plain{"width", "height", "seed", "looks", "classes"};
  if (plain.count(key)) return true;
  if (key.rfind("class", 0) != 0) return false;
  std::size_t i = 5;
  while (i < key.size() && std::isdigit(static_cast<unsigned char>(key[i]))) ++i;
  if (i == 5) return false;
  const std::string field = key.substr(i);
  return field == "_covariance" || field == "_region" || field == "_roi";
}

std::vector<std::string> split_list(const std::string& text) {
  std::vector<std::string> out;
  std::string cur;
  for (char ch : text) {
    if (ch == ',' || std::isspace(static_cast<unsigned char>(ch))) {
      if (!cur.empty()) out.push_back(cur);
      cur.clear();
    } else {
      cur += ch;
    }
  }
  if (!cur.empty()) out.push_back(cur);
  return out;
}

}  // namespace

ExperimentConfig ExperimentConfig::from(const KeyValues& kv) {
  static const std::set<std::string> known{
      "image",       "roi",    "truth",     "out",          "rules",
      "alpha",       "dt",     "h",         "iterations",   "lambda",
      "split_seed",  "shared_looks",        "per_class_looks",
      "hellinger_form",        "snapshots"};
  for (const auto& [key, value] : kv.entries())
    if (!known.count(key) && !is_phantom_key(key))
      throw Error(ErrorCode::InvalidSpec, "unknown config key '" + key + "'");

  ExperimentConfig c;
  if (auto v = kv.get("image")) c.image = *v;
  if (auto v = kv.get("roi")) c.roi = *v;
  if (auto v = kv.get("truth")) c.truth = *v;
  if (c.image && !c.roi) throw Error(ErrorCode::InvalidSpec, "an image needs an roi file");
  if (!c.image) c.phantom = phantom_spec_from(kv);
  if (auto v = kv.get("out")) c.out = *v;

  if (auto v = kv.get("rules")) {
    c.rules.clear();
    try {
      for (const auto& name : split_list(*v)) c.rules.push_back(parse_rule(name));
    } catch (const Error& e) {
      throw Error(ErrorCode::InvalidSpec, "rules: " + e.message());
    }
  }

  c.evolution.alpha = kv.get_double("alpha", c.evolution.alpha);
  c.evolution.dt = kv.get_double("dt", c.evolution.dt);
  c.evolution.h = kv.get_double("h", c.evolution.h);
  c.evolution.iterations = static_cast<int>(kv.get_int("iterations", c.evolution.iterations));
  check_stability(c.evolution);

  c.lambda = kv.get_double("lambda", c.lambda);
  if (!(c.lambda > 0.0)) throw Error(ErrorCode::InvalidSpec, "lambda must be positive");
  if (auto v = kv.get("split_seed")) c.split_seed = parse_u64("split_seed", *v);
  c.shared_looks = kv.get_double("shared_looks", static_cast<double>(kv.get_int("looks", 4)));
  if (!(c.shared_looks >= 3.0)) throw Error(ErrorCode::InvalidSpec, "shared_looks must be >= 3");
  c.per_class_looks = kv.get_bool("per_class_looks", false);

  const std::string form = kv.get("hellinger_form").value_or("corrected");
  if (form == "corrected") c.hellinger_form = HellingerForm::Corrected;
  else if (form == "as_printed") c.hellinger_form = HellingerForm::AsPrinted;
  else throw Error(ErrorCode::InvalidSpec, "hellinger_form must be corrected or as_printed");

  if (kv.has("snapshots")) {
    c.snapshots.clear();
    for (double s : kv.get_doubles("snapshots")) {
      if (s < 1 || s != static_cast<int>(s))
        throw Error(ErrorCode::InvalidSpec, "snapshots must be positive integers");
      c.snapshots.push_back(static_cast<int>(s));
    }
  } else {
    c.snapshots = {c.evolution.iterations / 2, c.evolution.iterations};
  }
  return c;
}

ExperimentConfig ExperimentConfig::load(const fs::path& path) {
  return from(KeyValues::load(path, ErrorCode::InvalidSpec));
}

std::string evolution_method_name(int iterations) {
  return "DR+KL+OW+" + std::to_string(iterations);
}

namespace {

using Clock = std::chrono::steady_clock;

double seconds_since(Clock::time_point t0) {
  return std::chrono::duration<double>(Clock::now() - t0).count();
}

std::string slug(std::string name) {
  for (char& ch : name) {
    if (ch == '+') ch = '_';
    ch = static_cast<char>(std::tolower(static_cast<unsigned char>(ch)));
  }
  return name;
}

void write_text_file(const fs::path& path, const std::string& text) {
  std::ofstream os(path);
  if (!os || !(os << text)) throw Error(ErrorCode::IoError, "cannot write " + path.string());
}

}  // namespace

PipelineResult run_pipeline(const ExperimentConfig& config, std::ostream* log) {
  PipelineResult r;
  auto note = [&](const std::string& line) {
    if (log) *log << line << std::endl;
  };
  auto timed = [&](const std::string& stage, auto&& body) {
    const auto t0 = Clock::now();
    auto value = run_stage(stage, body);
    r.stages.push_back({stage, seconds_since(t0)});
    return value;
  };
  const fs::path& out = config.out;
  run_stage("setup", [&] {
    fs::create_directories(out);
    return 0;
  });

  CovarianceField field;
  RoiSet roi;
  std::optional<ClassMap> truth;
  if (config.image) {
    timed("load", [&] {
      field = read_covariance_image(header_path_for(*config.image), *config.image).field;
      roi = read_roi(*config.roi);
      if (config.truth) truth = read_classmap(*config.truth);
      return 0;
    });
  } else {
    timed("simulate", [&] {
      Phantom p = generate_phantom(config.phantom);
      roi = phantom_roi(config.phantom);
      write_covariance_image(p.field, header_path_for(out / "phantom.cov"), out / "phantom.cov",
                             SampleType::F64, config.phantom.looks);
      write_classmap(p.truth, out / "truth.u8");
      write_roi(roi, out / "roi.txt");
      field = std::move(p.field);
      truth = std::move(p.truth);
      return 0;
    });
  }
  note("image " + std::to_string(field.width()) + "x" + std::to_string(field.height()));

  const Split split = run_stage("split", [&] {
    check_bounds(roi, field.width(), field.height());
    return split_roi(roi, config.split_seed);
  });

  r.model = timed("train", [&] {
    TrainedModel m = train_model(field, split, config.shared_looks, config.per_class_looks);
    m.split_seed = config.split_seed;
    return m;
  });

  r.weights = timed("weights", [&] {
    const auto train = training_set(field, split, r.model);
    const auto looks = training_looks(r.model);
    const DistanceTable table(train, DistanceKind::KullbackLeibler, looks);
    OptimizerOptions opts;
    opts.lambda = config.lambda;
    return optimize_weights(table, opts);
  });
  const double weight_seconds = r.stages.back().seconds;
  r.model.set_weights(r.weights.weights);
  run_stage("write model", [&] {
    write_model(r.model, out / "model.txt");
    std::ofstream trace(out / "weights_trace.csv");
    write_trace_csv(trace, r.weights);
    return 0;
  });
  {
    std::ostringstream w;
    w << "weights";
    for (double v : r.weights.weights.values()) w << ' ' << v;
    note(w.str());
  }

  const PrototypeSet protos =
      run_stage("prototypes", [&] { return to_prototypes(r.model, config.hellinger_form); });
  const auto palette = default_palette(protos.classes());
  std::vector<double> method_seconds;

  for (Rule rule : config.rules) {
    const std::string name(to_string(rule));
    ClassificationResult res = timed("classify " + name, [&] {
      return classify_image(field, protos, rule);
    });
    double secs = r.stages.back().seconds;
    if (rule == Rule::KLOW) secs += weight_seconds;
    if (!res.failed_pixels.empty())
      note(name + ": " + std::to_string(res.failed_pixels.size()) + " pixels unclassified");
    r.maps.emplace_back(name, std::move(res.labels));
    method_seconds.push_back(secs);
  }

  const int n = config.evolution.iterations;
  const std::string dr_name = evolution_method_name(n);
  std::vector<std::pair<int, CovarianceField>> snapshots;
  EvolutionResult evolved = timed("evolve", [&] {
    auto keep = [&](int it, const CovarianceField& f) {
      if (std::find(config.snapshots.begin(), config.snapshots.end(), it) !=
          config.snapshots.end())
        snapshots.emplace_back(it, f);
    };
    return evolve(field, protos, config.evolution, keep);
  });
  double dr_seconds = weight_seconds + r.stages.back().seconds;
  r.metrics = evolved.metrics;
  {
    ClassificationResult res = timed("classify " + dr_name, [&] {
      return classify_image(evolved.field, protos, Rule::KLOW);
    });
    dr_seconds += r.stages.back().seconds;
    r.maps.emplace_back(dr_name, std::move(res.labels));
    method_seconds.push_back(dr_seconds);
  }
  run_stage("metrics", [&] {
    std::ofstream os(out / "evolution_metrics.csv");
    write_metrics_csv(os, r.metrics);
    return 0;
  });

  timed("evaluate", [&] {
    std::vector<MethodScores> scores;
    for (std::size_t i = 0; i < r.maps.size(); ++i) {
      scores.push_back(score_test_pixels(r.maps[i].first, r.maps[i].second, split));
      scores.back().seconds = method_seconds[i];
    }
    r.report = compare_methods(std::move(scores));
    std::ostringstream table;
    table << "Accuracy on test pixels (improvement over the worst method per class)\n";
    write_report_table(table, r.report);
    if (truth) {
      std::vector<MethodScores> all;
      for (std::size_t i = 0; i < r.maps.size(); ++i) {
        all.push_back(score_against_truth(r.maps[i].first, r.maps[i].second, *truth,
                                          protos.classes()));
        all.back().seconds = method_seconds[i];
      }
      r.truth_report = compare_methods(std::move(all));
      table << "\nAccuracy on every pixel of the ground truth\n";
      write_report_table(table, *r.truth_report);
    }
    table << "\nStage wall-clock seconds (compute and I/O of each stage)\n";
    for (const auto& s : r.stages) table << "  " << s.stage << ": " << s.seconds << '\n';
    write_text_file(out / "report.txt", table.str());
    std::ofstream csv(out / "report.csv");
    write_report_csv(csv, r.report);
    note(table.str());
    return 0;
  });

  timed("render", [&] {
    render_rgb(field, protos, out / "original.ppm");
    for (const auto& [it, f] : snapshots)
      render_rgb(f, protos, out / ("evolution_" + std::to_string(it) + ".ppm"));
    if (std::find(config.snapshots.begin(), config.snapshots.end(), n) == config.snapshots.end())
      render_rgb(evolved.field, protos, out / ("evolution_" + std::to_string(n) + ".ppm"));
    for (const auto& [name, map] : r.maps) {
      write_classmap(map, out / ("classmap_" + slug(name) + ".u8"));
      write_ppm(render_classmap(map, palette), out / ("classmap_" + slug(name) + ".ppm"));
    }
    return 0;
  });
  return r;
}

}  // namespace polsar
