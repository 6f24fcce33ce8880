#include "polsar/weights.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <ostream>
#include <string>

#include "polsar/error.hpp"

namespace polsar {

WeightVector::WeightVector(std::vector<double> w) : w_(std::move(w)) {
  if (!on_simplex(w_)) throw Error(ErrorCode::InvalidArgument, "weights are not on the simplex");
}

WeightVector WeightVector::uniform(std::size_t classes) {
  if (classes == 0) throw Error(ErrorCode::InvalidArgument, "no classes");
  return WeightVector(std::vector<double>(classes, 1.0 / static_cast<double>(classes)));
}

bool on_simplex(std::span<const double> w, double tol) {
  if (w.empty()) return false;
  double sum = 0.0;
  for (double x : w) {
    if (!(x >= 0.0) || !std::isfinite(x)) return false;
    sum += x;
  }
  return std::abs(sum - 1.0) < tol;
}

std::vector<double> project_to_simplex(std::span<const double> v) {
  // Sort-based projection: find tau with sum max(v_i - tau, 0) = 1.
  std::vector<double> sorted(v.begin(), v.end());
  std::sort(sorted.begin(), sorted.end(), std::greater<>());
  double cumulative = 0.0;
  double tau = 0.0;
  for (std::size_t i = 0; i < sorted.size(); ++i) {
    cumulative += sorted[i];
    const double candidate = (cumulative - 1.0) / static_cast<double>(i + 1);
    if (sorted[i] - candidate > 0.0) tau = candidate;
  }
  std::vector<double> out(v.size());
  for (std::size_t i = 0; i < v.size(); ++i) out[i] = std::max(v[i] - tau, 0.0);
  // Renormalize away the rounding left by the threshold.
  const double sum = std::accumulate(out.begin(), out.end(), 0.0);
  for (double& x : out) x /= sum;
  return out;
}

double phi(double s, double lambda) { return s / (1.0 + lambda * std::abs(s)); }

void validate_training_set(std::span<const TrainingClass> train) {
  if (train.size() < 2)
    throw Error(ErrorCode::InvalidArgument, "training set needs at least two classes");
  for (std::size_t m = 0; m < train.size(); ++m)
    if (train[m].samples.empty())
      throw Error(ErrorCode::EmptySample,
                  "training class " + std::to_string(m + 1) + " has no samples");
}

DistanceTable::DistanceTable(std::span<const TrainingClass> train, DistanceKind kind,
                             std::span<const double> looks) {
  validate_training_set(train);
  const std::size_t classes = train.size();
  if (looks.size() != classes)
    throw Error(ErrorCode::InvalidArgument, "one looks value per class is required");

  std::vector<const HermitianMatrix3*> samples;
  for (std::size_t m = 0; m < classes; ++m) {
    class_sizes_.push_back(train[m].samples.size());
    for (const auto& z : train[m].samples) {
      samples.push_back(&z);
      row_class_.push_back(m);
    }
  }
  rows_ = samples.size();

  std::vector<PreparedCovariance> protos;
  protos.reserve(classes);
  for (const auto& c : train) protos.push_back(PreparedCovariance::from(c.prototype));

  values_.assign(rows_ * classes, 0.0);
  const auto n = static_cast<std::ptrdiff_t>(rows_);
  bool failed = false;
#pragma omp parallel for schedule(static)
  for (std::ptrdiff_t r = 0; r < n; ++r) {
    try {
      const HermitianMatrix3& z = *samples[static_cast<std::size_t>(r)];
      if (kind == DistanceKind::Euclidean) {
        for (std::size_t m = 0; m < classes; ++m)
          values_[static_cast<std::size_t>(r) * classes + m] =
              euclidean_distance(z, protos[m].sigma);
      } else {
        const auto pz = PreparedCovariance::from(z);
        for (std::size_t m = 0; m < classes; ++m)
          values_[static_cast<std::size_t>(r) * classes + m] =
              distance(kind, pz, protos[m], looks[m]);
      }
    } catch (const Error&) {
#pragma omp atomic write
      failed = true;
    }
  }
  if (failed) throw Error(ErrorCode::SingularMatrix, "degenerate training sample");
}

DistanceTable::DistanceTable(std::span<const TrainingClass> train, DistanceKind kind,
                             double shared_looks)
    : DistanceTable(train, kind, std::vector<double>(train.size(), shared_looks)) {}

namespace {

double row_term(std::span<const double> w, const DistanceTable& table, std::size_t r,
                double lambda) {
  const std::size_t m = table.row_class(r);
  const double own = w[m] * table.at(r, m);
  double s = 0.0;
  for (std::size_t other = 0; other < table.classes(); ++other) {
    if (other == m) continue;
    s += phi(own - w[other] * table.at(r, other), lambda);
  }
  return s;
}

double reduce_rows(std::span<const double> terms, const DistanceTable& table) {
  double total = 0.0;
  std::size_t r = 0;
  for (std::size_t m = 0; m < table.classes(); ++m) {
    double class_sum = 0.0;
    for (std::size_t k = 0; k < table.class_size(m); ++k, ++r) class_sum += terms[r];
    total += class_sum / static_cast<double>(table.class_size(m));
  }
  return total;
}

void check_weights(std::span<const double> w, const DistanceTable& table) {
  if (w.size() != table.classes())
    throw Error(ErrorCode::InvalidArgument, "weight count does not match class count");
}

}  // namespace

double energy(std::span<const double> w, const DistanceTable& table, double lambda) {
  check_weights(w, table);
  std::vector<double> terms(table.rows());
  const auto n = static_cast<std::ptrdiff_t>(table.rows());
#pragma omp parallel for schedule(static)
  for (std::ptrdiff_t r = 0; r < n; ++r)
    terms[static_cast<std::size_t>(r)] = row_term(w, table, static_cast<std::size_t>(r), lambda);
  return reduce_rows(terms, table);
}

namespace serial {
double energy(std::span<const double> w, const DistanceTable& table, double lambda) {
  check_weights(w, table);
  std::vector<double> terms(table.rows());
  for (std::size_t r = 0; r < table.rows(); ++r) terms[r] = row_term(w, table, r, lambda);
  return reduce_rows(terms, table);
}
}  // namespace serial

double energy(const WeightVector& w, std::span<const TrainingClass> train, DistanceKind kind,
              double shared_looks, double lambda) {
  return energy(w.values(), DistanceTable(train, kind, shared_looks), lambda);
}

std::vector<double> energy_gradient(std::span<const double> w, const DistanceTable& table,
                                    double lambda, double h) {
  std::vector<double> g(w.size());
  std::vector<double> probe(w.begin(), w.end());
  for (std::size_t m = 0; m < w.size(); ++m) {
    probe[m] = w[m] + h;
    const double up = energy(probe, table, lambda);
    probe[m] = w[m] - h;
    const double down = energy(probe, table, lambda);
    probe[m] = w[m];
    g[m] = (up - down) / (2.0 * h);
  }
  const double mean = std::accumulate(g.begin(), g.end(), 0.0) / static_cast<double>(g.size());
  for (double& x : g) x -= mean;
  return g;
}

OptimizerResult optimize_weights(const DistanceTable& table, const OptimizerOptions& opts) {
  if (!(opts.lambda > 0.0)) throw Error(ErrorCode::InvalidArgument, "lambda must be positive");
  const std::size_t classes = table.classes();
  std::vector<double> w(classes, 1.0 / static_cast<double>(classes));

  auto checked_energy = [&](std::span<const double> x) {
    const double e = energy(x, table, opts.lambda);
    if (!std::isfinite(e)) throw Error(ErrorCode::NonFinite, "energy is not finite");
    return e;
  };

  OptimizerResult result;
  double current = checked_energy(w);
  result.initial_energy = current;
  result.trace.push_back({0, current, 0.0, w});

  int iter = 0;
  while (iter < opts.max_iters) {
    const auto g = energy_gradient(w, table, opts.lambda, opts.fd_step);
    double step = opts.initial_step;
    bool accepted = false;
    std::vector<double> candidate;
    double candidate_energy = current;
    for (int halving = 0; halving <= opts.max_halvings; ++halving, step *= 0.5) {
      std::vector<double> moved(classes);
      for (std::size_t m = 0; m < classes; ++m) moved[m] = w[m] - step * g[m];
      candidate = project_to_simplex(moved);
      candidate_energy = checked_energy(candidate);
      if (candidate_energy < current) {
        accepted = true;
        break;
      }
    }
    if (!accepted) break;

    ++iter;
    const double improvement = current - candidate_energy;
    w = std::move(candidate);
    current = candidate_energy;
    result.trace.push_back({iter, current, step, w});
    if (improvement < opts.min_improvement) break;
  }

  result.weights = WeightVector(w);
  result.energy = current;
  result.iterations = iter;
  return result;
}

OptimizerResult optimize_weights(std::span<const TrainingClass> train, DistanceKind kind,
                                 double shared_looks, const OptimizerOptions& opts) {
  return optimize_weights(DistanceTable(train, kind, shared_looks), opts);
}

void write_trace_csv(std::ostream& os, const OptimizerResult& result) {
  const auto prec = os.precision(17);
  os << "iteration,energy,step";
  const std::size_t classes = result.weights.size();
  for (std::size_t m = 0; m < classes; ++m) os << ",w" << (m + 1);
  os << '\n';
  for (const auto& e : result.trace) {
    os << e.iteration << ',' << e.energy << ',' << e.step;
    for (double x : e.weights) os << ',' << x;
    os << '\n';
  }
  os.precision(prec);
}

}  // namespace polsar
