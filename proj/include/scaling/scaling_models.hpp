#pragma once

#include <array>
#include <cstddef>
#include <string>
#include <string_view>
#include <utility>
#include <variant>
#include <vector>

#include "scaling/data_ingest.hpp"

namespace scaling {

enum class ModelKind { PowerLaw, Exponential };

std::string_view to_string(ModelKind kind);
/// Accepts "power_law"/"power"/"pow" and "exponential"/"exp".
ModelKind parse_model_kind(std::string_view text);

/// f(x) = A * x^alpha + B for x >= 0.
struct PowerLawParams {
  double A = 0.0;
  double alpha = 0.0;
  double B = 0.0;

  friend bool operator==(const PowerLawParams&, const PowerLawParams&) = default;
};

/// f(x) = C * exp(beta * x) + D for x >= 0; beta is a rate per billion parameters.
struct ExpParams {
  double C = 0.0;
  double beta = 0.0;
  double D = 0.0;

  friend bool operator==(const ExpParams&, const ExpParams&) = default;
};

using ModelParams = std::variant<PowerLawParams, ExpParams>;

/// Both evaluators return 0 for x < 0. eval_power throws DomainError at the
/// pole x == 0 with alpha < 0.
double eval_power(const PowerLawParams& p, double x);
double eval_exp(const ExpParams& p, double x);
double evaluate(const ModelParams& p, double x);

ModelKind kind_of(const ModelParams& p);

/// Packs (amplitude, exponent/rate, offset) in a fixed order for optimizers.
std::array<double, 3> to_vector(const ModelParams& p);
ModelParams from_vector(ModelKind kind, const std::array<double, 3>& v);
/// B for the power law, D for the exponential.
double offset_of(const ModelParams& p);

struct Linearized {
  std::vector<std::pair<double, double>> pairs;  // (u, v)
  std::size_t dropped = 0;
};

inline constexpr double kLogGuard = 1e-9;

/// Log-linear form with a fixed offset:
///   power law:   (ln x, ln(y - offset))
///   exponential: (x,    ln(y - offset))
/// Points with y - offset <= eps are dropped and counted. Throws DataError
/// ("linearization failed") when fewer than `min_points` points survive.
Linearized linearize(const ScoreSeries& series, ModelKind kind, double offset,
                     double eps = kLogGuard, std::size_t min_points = 3);

}  // namespace scaling
