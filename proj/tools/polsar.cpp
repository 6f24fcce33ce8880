// Command-line driver: simulate, train, weights, classify, evolve, evaluate,
// render and the full pipeline.
#include <CLI11.hpp>

#include <cstdint>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include "polsar/classifier.hpp"
#include "polsar/diffusion_reaction.hpp"
#include "polsar/error.hpp"
#include "polsar/evaluation.hpp"
#include "polsar/experiment.hpp"
#include "polsar/io.hpp"
#include "polsar/phantom.hpp"
#include "polsar/roi.hpp"
#include "polsar/weights.hpp"

namespace {

using namespace polsar;

CovarianceField load_field(const fs::path& image) {
  return read_covariance_image(header_path_for(image), image).field;
}

std::ofstream open_out(const fs::path& path) {
  std::ofstream os(path);
  if (!os) throw Error(ErrorCode::IoError, "cannot write " + path.string());
  return os;
}

struct SimulateArgs {
  std::string config;
  std::optional<std::uint64_t> seed;
  std::string out = ".";
};

void simulate(const SimulateArgs& a) {
  PhantomSpec spec = a.config.empty() ? default_phantom_spec() : load_phantom_spec(a.config);
  if (a.seed) spec.seed = *a.seed;
  const Phantom p = generate_phantom(spec);
  const fs::path out(a.out);
  fs::create_directories(out);
  write_covariance_image(p.field, header_path_for(out / "phantom.cov"), out / "phantom.cov",
                         SampleType::F64, spec.looks);
  write_classmap(p.truth, out / "truth.u8");
  write_roi(phantom_roi(spec), out / "roi.txt");
  std::cout << "wrote " << (out / "phantom.cov").string() << ", truth.u8 and roi.txt\n";
}

struct TrainArgs {
  std::string image, roi, out = "model.txt";
  std::uint64_t seed = 1;
  double looks = 4.0;
  bool per_class_looks = false;
};

void train(const TrainArgs& a) {
  const CovarianceField field = load_field(a.image);
  const RoiSet roi = read_roi(a.roi);
  check_bounds(roi, field.width(), field.height());
  TrainedModel model = train_model(field, split_roi(roi, a.seed), a.looks, a.per_class_looks);
  model.split_seed = a.seed;
  write_model(model, fs::path(a.out));
  for (std::size_t m = 0; m < model.classes.size(); ++m) {
    const auto& c = model.classes[m];
    std::cout << "class " << m + 1 << ": n=" << c.samples << " L_ml=" << c.looks_ml
              << " L=" << c.looks << (c.no_root ? " (no root)" : "")
              << (c.clamped_below ? " (clamped)" : "") << '\n';
  }
}

struct WeightsArgs {
  std::string image, roi, model, out, metrics;
  double lambda = 1.0;
};

void weights(const WeightsArgs& a) {
  TrainedModel model = read_model(a.model);
  const CovarianceField field = load_field(a.image);
  const RoiSet roi = read_roi(a.roi);
  check_bounds(roi, field.width(), field.height());
  const Split split = split_roi(roi, model.split_seed);
  const DistanceTable table(training_set(field, split, model), DistanceKind::KullbackLeibler,
                            training_looks(model));
  OptimizerOptions opts;
  opts.lambda = a.lambda;
  const OptimizerResult res = optimize_weights(table, opts);
  model.set_weights(res.weights);
  write_model(model, fs::path(a.out.empty() ? a.model : a.out));
  if (!a.metrics.empty()) {
    auto os = open_out(a.metrics);
    write_trace_csv(os, res);
  }
  std::cout << "energy " << res.initial_energy << " -> " << res.energy << " in " << res.iterations
            << " iterations; weights";
  for (double w : res.weights.values()) std::cout << ' ' << w;
  std::cout << '\n';
}

struct ClassifyArgs {
  std::string image, model, rule = "kl+ow", out = "classmap.u8";
  bool as_printed = false;
};

void classify(const ClassifyArgs& a) {
  const PrototypeSet protos = to_prototypes(
      read_model(a.model), a.as_printed ? HellingerForm::AsPrinted : HellingerForm::Corrected);
  const ClassificationResult res = classify_image(load_field(a.image), protos, parse_rule(a.rule));
  write_classmap(res.labels, a.out);
  std::cout << "wrote " << a.out;
  if (!res.failed_pixels.empty()) std::cout << " (" << res.failed_pixels.size() << " unclassified)";
  std::cout << '\n';
}

struct EvolveArgs {
  std::string image, model, out = "evolved.cov", metrics;
  EvolutionParams params;
};

void evolve_cmd(const EvolveArgs& a) {
  const PrototypeSet protos = to_prototypes(read_model(a.model));
  check_stability(a.params);
  const CovarianceImage input = read_covariance_image(header_path_for(a.image), a.image);
  const EvolutionResult res = evolve(input.field, protos, a.params);
  write_covariance_image(res.field, header_path_for(a.out), a.out, input.dtype, input.looks);
  if (!a.metrics.empty()) {
    auto os = open_out(a.metrics);
    write_metrics_csv(os, res.metrics);
  }
  std::cout << "wrote " << a.out << '\n';
}

struct EvaluateArgs {
  std::string roi, scores, out;
  std::vector<std::string> maps;
  std::uint64_t seed = 1;
};

// CSV rows: method,acc_1,...,acc_M[,seconds]; a header line starting with
// "method" is skipped.
std::vector<MethodScores> read_scores(const fs::path& path, std::size_t& classes) {
  std::ifstream is(path);
  if (!is) throw Error(ErrorCode::IoError, "cannot open " + path.string());
  std::vector<MethodScores> out;
  std::string line;
  bool has_seconds = false;
  while (std::getline(is, line)) {
    if (line.empty() || line[0] == '#') continue;
    std::vector<std::string> cells;
    std::stringstream ss(line);
    std::string cell;
    while (std::getline(ss, cell, ',')) cells.push_back(cell);
    if (cells.at(0) == "method") {
      has_seconds = cells.back() == "seconds";
      continue;
    }
    MethodScores s;
    s.method = cells[0];
    const std::size_t end = cells.size() - (has_seconds ? 1 : 0);
    try {
      for (std::size_t i = 1; i < end; ++i) s.accuracy.push_back(std::stod(cells[i]));
      if (has_seconds) s.seconds = std::stod(cells.back());
    } catch (const std::exception&) {
      throw Error(ErrorCode::InvalidArgument, "bad number in " + path.string() + ": " + line);
    }
    out.push_back(std::move(s));
  }
  classes = out.empty() ? 0 : out.front().accuracy.size();
  return out;
}

void evaluate(const EvaluateArgs& a) {
  std::vector<MethodScores> scores;
  if (!a.scores.empty()) {
    std::size_t classes = 0;
    scores = read_scores(a.scores, classes);
  } else {
    if (a.roi.empty()) throw Error(ErrorCode::InvalidArgument, "--roi is required with --map");
    const Split split = split_roi(read_roi(a.roi), a.seed);
    for (const std::string& spec : a.maps) {
      const auto eq = spec.find('=');
      const std::string name = eq == std::string::npos ? spec : spec.substr(0, eq);
      const std::string path = eq == std::string::npos ? spec : spec.substr(eq + 1);
      scores.push_back(score_test_pixels(name, read_classmap(path), split));
    }
  }
  const AccuracyReport report = compare_methods(std::move(scores));
  write_report_table(std::cout, report);
  if (!a.out.empty()) {
    auto os = open_out(a.out);
    write_report_csv(os, report);
  }
}

struct RenderArgs {
  std::string image, model, classmap, out = "render.ppm";
  std::size_t classes = 0;
};

void render(const RenderArgs& a) {
  if (!a.classmap.empty()) {
    const ClassMap map = read_classmap(a.classmap);
    std::size_t classes = a.classes;
    if (classes == 0)
      for (auto v : map.cells()) classes = std::max<std::size_t>(classes, v);
    write_ppm(render_classmap(map, default_palette(classes)), a.out);
  } else {
    if (a.image.empty() || a.model.empty())
      throw Error(ErrorCode::InvalidArgument, "render needs --classmap or --image with --model");
    render_rgb(load_field(a.image), to_prototypes(read_model(a.model)), a.out);
  }
  std::cout << "wrote " << a.out << '\n';
}

struct PipelineArgs {
  std::string config, out;
  std::optional<std::uint64_t> seed;
  bool quiet = false;
};

void pipeline(const PipelineArgs& a) {
  std::istringstream none;
  ExperimentConfig cfg = a.config.empty() ? ExperimentConfig::from(KeyValues::parse(none))
                                          : ExperimentConfig::load(a.config);
  if (!a.out.empty()) cfg.out = a.out;
  if (a.seed) cfg.phantom.seed = *a.seed;
  run_pipeline(cfg, a.quiet ? nullptr : &std::cout);
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Polarimetric SAR classification by weighted stochastic distances and "
               "diffusion-reaction evolution"};
  app.require_subcommand(1);
  std::string stage;

  SimulateArgs sim;
  auto* s = app.add_subcommand("simulate", "generate the phantom image, truth map and ROIs");
  s->add_option("--config", sim.config, "phantom spec (key: value)");
  s->add_option("--seed", sim.seed, "phantom RNG seed");
  s->add_option("--out", sim.out, "output directory");
  s->callback([&] { stage = "simulate"; simulate(sim); });

  TrainArgs tr;
  auto* t = app.add_subcommand("train", "fit per-class Wishart models on the ROI train half");
  t->add_option("--image", tr.image, "covariance data file")->required();
  t->add_option("--roi", tr.roi, "ROI file")->required();
  t->add_option("--seed", tr.seed, "train/test split seed");
  t->add_option("--looks", tr.looks, "shared number of looks");
  t->add_flag("--per-class-looks", tr.per_class_looks, "use each class's estimated looks");
  t->add_option("--out", tr.out, "model file");
  t->callback([&] { stage = "train"; train(tr); });

  WeightsArgs wa;
  auto* w = app.add_subcommand("weights", "optimize class weights and store them in the model");
  w->add_option("--image", wa.image)->required();
  w->add_option("--roi", wa.roi)->required();
  w->add_option("--model", wa.model)->required();
  w->add_option("--lambda", wa.lambda, "energy scale");
  w->add_option("--out", wa.out, "model file to write (default: --model)");
  w->add_option("--metrics", wa.metrics, "optimizer trace CSV");
  w->callback([&] { stage = "weights"; weights(wa); });

  ClassifyArgs ca;
  auto* c = app.add_subcommand("classify", "pointwise classification");
  c->add_option("--image", ca.image)->required();
  c->add_option("--model", ca.model)->required();
  c->add_option("--rule", ca.rule, "ml | ed | hd | kl | kl+ow");
  c->add_option("--out", ca.out, "class map file");
  c->add_flag("--hellinger-as-printed", ca.as_printed, "use the uncorrected Hellinger form");
  c->callback([&] { stage = "classify"; classify(ca); });

  EvolveArgs ea;
  auto* e = app.add_subcommand("evolve", "run the diffusion-reaction evolution");
  e->add_option("--image", ea.image)->required();
  e->add_option("--model", ea.model)->required();
  e->add_option("--alpha", ea.params.alpha);
  e->add_option("--dt", ea.params.dt);
  e->add_option("--iters", ea.params.iterations);
  e->add_option("--out", ea.out, "evolved covariance data file");
  e->add_option("--metrics", ea.metrics, "per-iteration statistics CSV");
  e->callback([&] { stage = "evolve"; evolve_cmd(ea); });

  EvaluateArgs va;
  auto* v = app.add_subcommand("evaluate", "accuracy and improvement table");
  v->add_option("--roi", va.roi);
  v->add_option("--seed", va.seed, "train/test split seed");
  v->add_option("--map", va.maps, "NAME=classmap (repeatable)");
  v->add_option("--scores", va.scores, "CSV of method,acc_1..acc_M instead of maps");
  v->add_option("--out", va.out, "report CSV");
  v->callback([&] { stage = "evaluate"; evaluate(va); });

  RenderArgs ra;
  auto* r = app.add_subcommand("render", "write a PPM of a field or class map");
  r->add_option("--image", ra.image);
  r->add_option("--model", ra.model);
  r->add_option("--classmap", ra.classmap);
  r->add_option("--classes", ra.classes, "palette size for --classmap");
  r->add_option("--out", ra.out);
  r->callback([&] { stage = "render"; render(ra); });

  PipelineArgs pa;
  auto* p = app.add_subcommand("pipeline", "end-to-end experiment");
  p->add_option("--config", pa.config, "experiment config (key: value)");
  p->add_option("--out", pa.out, "output directory");
  p->add_option("--seed", pa.seed, "phantom RNG seed");
  p->add_flag("--quiet", pa.quiet);
  p->callback([&] { stage = "pipeline"; pipeline(pa); });

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& err) {
    return app.exit(err);
  } catch (const Error& err) {
    std::cerr << "polsar " << stage << ": " << to_string(err.code()) << ": " << err.message()
              << '\n';
    return 1;
  } catch (const std::exception& err) {
    std::cerr << "polsar " << stage << ": " << err.what() << '\n';
    return 1;
  }
  return 0;
}
