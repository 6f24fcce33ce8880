#include "polsar/diffusion_reaction.hpp"

#include <algorithm>
#include <cmath>
#include <exception>
#include <ostream>
#include <string>

#include "polsar/error.hpp"

namespace polsar {

double stability_margin(const EvolutionParams& p) {
  return 1.0 - 4.0 * p.alpha * p.dt / (p.h * p.h);
}

void check_stability(const EvolutionParams& p) {
  if (!(p.alpha >= 0.0)) throw Error(ErrorCode::InvalidArgument, "alpha must be >= 0");
  if (!(p.dt > 0.0)) throw Error(ErrorCode::InvalidArgument, "dt must be > 0");
  if (!(p.h > 0.0)) throw Error(ErrorCode::InvalidArgument, "h must be > 0");
  if (p.iterations < 0) throw Error(ErrorCode::InvalidArgument, "iterations must be >= 0");
  if (stability_margin(p) < 0.0)
    throw Error(ErrorCode::StabilityViolation,
                "1 - 4 alpha dt / h^2 = " + std::to_string(stability_margin(p)) + " < 0");
}

namespace {

void diffuse_row(const CovarianceField& in, CovarianceField& out, double k, std::size_t y) {
  const std::size_t w = in.width();
  const std::size_t h = in.height();
  const std::size_t up = y == 0 ? 0 : y - 1;
  const std::size_t down = y + 1 == h ? y : y + 1;
  for (std::size_t x = 0; x < w; ++x) {
    const std::size_t left = x == 0 ? 0 : x - 1;
    const std::size_t right = x + 1 == w ? x : x + 1;
    const HermitianMatrix3& c = in.at(x, y);
    HermitianMatrix3 lap = in.at(right, y) + in.at(left, y) + in.at(x, down) + in.at(x, up);
    lap -= 4.0 * c;
    out.at(x, y) = c + k * lap;
  }
}

void react_row(const CovarianceField& in, CovarianceField& out, const PrototypeBank& bank,
               double dt, std::size_t y) {
  for (std::size_t x = 0; x < in.width(); ++x) {
    const HermitianMatrix3& s = in.at(x, y);
    const Nearest n = bank.nearest(s);
    const HermitianMatrix3& target = bank.sigma(n.index);
    const double factor = std::exp(dt * (n.best - n.runner_up));
    out.at(x, y) = target + factor * (s - target);
  }
}

double diffusion_coefficient(const EvolutionParams& params) {
  check_stability(params);
  return params.alpha * params.dt / (params.h * params.h);
}

// Runs `row_fn(y)` over all rows in parallel; rethrows the first exception.
template <typename RowFn>
void parallel_rows(std::size_t rows, RowFn&& row_fn) {
  std::exception_ptr error;
  const auto n = static_cast<std::ptrdiff_t>(rows);
#pragma omp parallel for schedule(static)
  for (std::ptrdiff_t y = 0; y < n; ++y) {
    try {
      row_fn(static_cast<std::size_t>(y));
    } catch (...) {
#pragma omp critical(polsar_row_error)
      if (!error) error = std::current_exception();
    }
  }
  if (error) std::rethrow_exception(error);
}

}  // namespace

CovarianceField diffusion_step(const CovarianceField& field, const EvolutionParams& params) {
  const double k = diffusion_coefficient(params);
  CovarianceField out(field.width(), field.height());
  parallel_rows(field.height(), [&](std::size_t y) { diffuse_row(field, out, k, y); });
  return out;
}

CovarianceField reaction_step(const CovarianceField& field, const PrototypeBank& bank, double dt) {
  if (!(dt > 0.0)) throw Error(ErrorCode::InvalidArgument, "dt must be > 0");
  CovarianceField out(field.width(), field.height());
  parallel_rows(field.height(), [&](std::size_t y) { react_row(field, out, bank, dt, y); });
  return out;
}

CovarianceField reaction_step(const CovarianceField& field, const PrototypeSet& protos, double dt,
                              DistanceKind kind) {
  return reaction_step(field, PrototypeBank(protos, kind, true), dt);
}

namespace serial {

CovarianceField diffusion_step(const CovarianceField& field, const EvolutionParams& params) {
  const double k = diffusion_coefficient(params);
  CovarianceField out(field.width(), field.height());
  for (std::size_t y = 0; y < field.height(); ++y) diffuse_row(field, out, k, y);
  return out;
}

CovarianceField reaction_step(const CovarianceField& field, const PrototypeBank& bank, double dt) {
  if (!(dt > 0.0)) throw Error(ErrorCode::InvalidArgument, "dt must be > 0");
  CovarianceField out(field.width(), field.height());
  for (std::size_t y = 0; y < field.height(); ++y) react_row(field, out, bank, dt, y);
  return out;
}

}  // namespace serial

NearestMap nearest_prototypes(const CovarianceField& field, const PrototypeBank& bank) {
  NearestMap out{ClassMap(field.width(), field.height()), std::vector<double>(field.size())};
  parallel_rows(field.height(), [&](std::size_t y) {
    for (std::size_t x = 0; x < field.width(); ++x) {
      const std::size_t i = y * field.width() + x;
      const Nearest n = bank.nearest(field[i]);
      out.labels[i] = static_cast<std::uint8_t>(n.index + 1);
      out.best[i] = n.best;
    }
  });
  return out;
}

namespace {

double mean(const std::vector<double>& v) {
  double s = 0.0;
  for (double x : v) s += x;
  return v.empty() ? 0.0 : s / static_cast<double>(v.size());
}

double changed_fraction(const ClassMap& a, const ClassMap& b) {
  std::size_t changed = 0;
  for (std::size_t i = 0; i < a.size(); ++i) changed += a[i] != b[i];
  return a.size() == 0 ? 0.0 : static_cast<double>(changed) / static_cast<double>(a.size());
}

}  // namespace

EvolutionResult evolve(const CovarianceField& field, const PrototypeSet& protos,
                       const EvolutionParams& params, const IterationCallback& callback) {
  check_stability(params);
  const PrototypeBank bank(protos, params.kind, true);

  EvolutionResult result{field, {}};
  NearestMap previous = nearest_prototypes(result.field, bank);
  result.metrics.rows.push_back({0, mean(previous.best), 0.0});

  for (int it = 1; it <= params.iterations; ++it) {
    const CovarianceField diffused = diffusion_step(result.field, params);
    result.field = reaction_step(diffused, bank, params.dt);

    NearestMap current = nearest_prototypes(result.field, bank);
    result.metrics.rows.push_back(
        {it, mean(current.best), changed_fraction(previous.labels, current.labels)});
    previous = std::move(current);
    if (callback) callback(it, result.field);
  }
  return result;
}

void write_metrics_csv(std::ostream& os, const EvolutionMetrics& metrics) {
  const auto prec = os.precision(17);
  os << "iteration,mean_weighted_distance,changed_fraction\n";
  for (const auto& r : metrics.rows)
    os << r.iteration << ',' << r.mean_weighted_distance << ',' << r.changed_fraction << '\n';
  os.precision(prec);
}

}  // namespace polsar
