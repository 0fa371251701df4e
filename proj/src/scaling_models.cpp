#include "scaling/scaling_models.hpp"

#include <cmath>

#include "scaling/errors.hpp"

namespace scaling {

std::string_view to_string(ModelKind kind) {
  return kind == ModelKind::PowerLaw ? "power_law" : "exponential";
}

ModelKind parse_model_kind(std::string_view text) {
  if (text == "power_law" || text == "power" || text == "pow") return ModelKind::PowerLaw;
  if (text == "exponential" || text == "exp") return ModelKind::Exponential;
  throw ParseError("unknown model kind '" + std::string(text) + "'");
}

double eval_power(const PowerLawParams& p, double x) {
  if (x < 0.0) return 0.0;
  if (x == 0.0 && p.alpha < 0.0) {
    throw DomainError("power law has a pole at x = 0 for alpha < 0");
  }
  return p.A * std::pow(x, p.alpha) + p.B;
}

double eval_exp(const ExpParams& p, double x) {
  if (x < 0.0) return 0.0;
  return p.C * std::exp(p.beta * x) + p.D;
}

double evaluate(const ModelParams& p, double x) {
  return std::visit(
      [x](const auto& q) {
        if constexpr (std::is_same_v<std::decay_t<decltype(q)>, PowerLawParams>) {
          return eval_power(q, x);
        } else {
          return eval_exp(q, x);
        }
      },
      p);
}

ModelKind kind_of(const ModelParams& p) {
  return std::holds_alternative<PowerLawParams>(p) ? ModelKind::PowerLaw
                                                   : ModelKind::Exponential;
}

std::array<double, 3> to_vector(const ModelParams& p) {
  if (const auto* q = std::get_if<PowerLawParams>(&p)) return {q->A, q->alpha, q->B};
  const auto& e = std::get<ExpParams>(p);
  return {e.C, e.beta, e.D};
}

ModelParams from_vector(ModelKind kind, const std::array<double, 3>& v) {
  if (kind == ModelKind::PowerLaw) return PowerLawParams{v[0], v[1], v[2]};
  return ExpParams{v[0], v[1], v[2]};
}

double offset_of(const ModelParams& p) { return to_vector(p)[2]; }

Linearized linearize(const ScoreSeries& series, ModelKind kind, double offset, double eps,
                     std::size_t min_points) {
  if (!(eps > 0.0)) throw DomainError("linearize: eps must be positive");
  Linearized out;
  for (const auto& obs : series.points) {
    const double shifted = obs.inconsistency - offset;
    if (!(shifted > eps)) {
      ++out.dropped;
      continue;
    }
    const double u = kind == ModelKind::PowerLaw ? std::log(obs.size_b) : obs.size_b;
    out.pairs.emplace_back(u, std::log(shifted));
  }
  if (out.pairs.size() < min_points) {
    throw DataError("linearization failed: " + std::to_string(out.pairs.size()) +
                    " points above the fitted offset, need " + std::to_string(min_points));
  }
  return out;
}

}  // namespace scaling
