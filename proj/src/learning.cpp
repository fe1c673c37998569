#include "lmdpp/learning.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>

namespace lmdpp {

std::string to_string(StepDecay d) {
  switch (d) {
    case StepDecay::inv_sqrt: return "inv_sqrt";
    case StepDecay::constant: return "constant";
  }
  return "inv_sqrt";
}

StepDecay step_decay_from_string(const std::string& s) {
  if (s == "inv_sqrt") return StepDecay::inv_sqrt;
  if (s == "constant") return StepDecay::constant;
  throw DomainError("unknown step decay '" + s + "' (expected inv_sqrt or constant)");
}

void TrainConfig::validate() const {
  if (!(lambda >= 0.0) || !std::isfinite(lambda)) throw DomainError("lambda must be >= 0");
  if (!(step_size > 0.0)) throw DomainError("step_size must be > 0");
  if (!(rel_tolerance > 0.0)) throw DomainError("rel_tolerance must be > 0");
  if (max_outer_iterations < 0) throw DomainError("max_outer_iterations must be >= 0");
  if (alternation_block < 1) throw DomainError("alternation_block must be >= 1");
  if (!(theta_l2 >= 0.0)) throw DomainError("theta_l2 must be >= 0");
  if (!(max_update_norm > 0.0)) throw DomainError("max_update_norm must be > 0");
  LossWeights check(omega.omega);
  (void)check;
}

PreparedInstance prepare_instance(const GroundSetInstance& instance,
                                  const SimilarityConfig& similarity) {
  instance.validate();
  return {instance.quality_features, base_similarity_grams(instance, similarity),
          instance.label.value_or(Subset{})};
}

namespace {

void check_params(const PreparedInstance& instance, const ModelParams& params) {
  if (params.theta.size() != instance.quality_features.cols())
    throw DimensionError("theta has dimension " + std::to_string(params.theta.size()) +
                         " but quality features have dimension " +
                         std::to_string(instance.quality_features.cols()));
  if (params.kernel_weights.size() != static_cast<Index>(instance.grams.size()))
    throw DimensionError("expected " + std::to_string(instance.grams.size()) +
                         " kernel weights, got " + std::to_string(params.kernel_weights.size()));
}

Vector quality(const PreparedInstance& instance, const ModelParams& params) {
  return (instance.quality_features * params.theta).array().exp().matrix();
}

Matrix similarity(const PreparedInstance& instance, const ModelParams& params) {
  Matrix s = Matrix::Zero(instance.n_items(), instance.n_items());
  for (std::size_t k = 0; k < instance.grams.size(); ++k)
    s += params.kernel_weights(static_cast<Index>(k)) * instance.grams[k];
  return s;
}

ParamGradient zero_gradient(const ModelParams& params) {
  return {Vector::Zero(params.theta.size()), Vector::Zero(params.kernel_weights.size())};
}

}  // namespace

EnsembleKernel<double> build_kernel(const PreparedInstance& instance, const ModelParams& params) {
  check_params(instance, params);
  return assemble_L(quality(instance, params), similarity(instance, params));
}

ParamGradient chain_L_to_params(const PreparedInstance& instance, const ModelParams& params,
                                const Matrix& upstream) {
  check_params(instance, params);
  const Index n = instance.n_items();
  if (upstream.rows() != n || upstream.cols() != n)
    throw DimensionError("upstream gradient must be " + std::to_string(n) + "x" +
                         std::to_string(n));
  const Vector q = quality(instance, params);
  const Matrix qq = q * q.transpose();
  const Matrix l = qq.cwiseProduct(similarity(instance, params));
  const Matrix m = upstream.cwiseProduct(l);
  ParamGradient g;
  g.theta = instance.quality_features.transpose() *
            (m.rowwise().sum() + m.colwise().sum().transpose());
  g.kernel_weights.resize(params.kernel_weights.size());
  const Matrix gq = upstream.cwiseProduct(qq);
  for (std::size_t k = 0; k < instance.grams.size(); ++k)
    g.kernel_weights(static_cast<Index>(k)) = gq.cwiseProduct(instance.grams[k]).sum();
  return g;
}

ParamGradient chain_L_to_params(const GroundSetInstance& instance,
                                const SimilarityConfig& similarity, const ModelParams& params,
                                const Matrix& upstream) {
  return chain_L_to_params(prepare_instance(instance, similarity), params, upstream);
}

InstanceEvaluation evaluate_instance(const PreparedInstance& instance, const ModelParams& params,
                                     const TrainConfig& config, EvaluationOptions options) {
  check_params(instance, params);
  const Vector q = quality(instance, params);
  const Matrix s = similarity(instance, params);
  const EnsembleKernel<double> l = assemble_L(q, s);
  const Subset& y = instance.label;
  y.check_range(l.size());

  // L_y* = D S_y* D with D = diag(q_y*): log det and inverse go through S_y*,
  // which keeps large or tiny qualities from under- or overflowing.
  InstanceEvaluation eval;
  Eigen::SelfAdjointEigenSolver<Matrix> label_es;  // Eigen's solver rejects 0x0
  double log_det_y = 0.0;
  Vector q_y(static_cast<Index>(y.size()));
  for (std::size_t a = 0; a < y.size(); ++a) q_y(static_cast<Index>(a)) = q(y[a]);
  if (!y.empty()) {
    label_es.compute(principal_submatrix(s, y));
    const Vector& ev = label_es.eigenvalues();
    eval.degenerate_label = !(ev.minCoeff() > kLabelRankTolerance * std::max(ev.maxCoeff(), 0.0));
    if (!eval.degenerate_label) log_det_y = ev.array().log().sum() + 2.0 * q_y.array().log().sum();
  }
  eval.log_likelihood =
      eval.degenerate_label ? negative_infinity<double>() : log_det_y - l.log_normalizer();

  const Matrix r = l.resolvent();
  const Vector r_diag = r.diagonal();
  const Vector k_diag = (1.0 - r_diag.array()).matrix();
  double mass = 0.0;
  eval.margin_term = negative_infinity<double>();
  if (config.lambda > 0.0) {
    mass = margin_mass(k_diag, r_diag, y, config.omega);
    if (mass > kDetFloor) eval.margin_term = std::log(mass);
  }
  const bool use_margin = config.lambda > 0.0 && std::isfinite(eval.margin_term);
  const double margin_part = use_margin ? config.lambda * eval.margin_term : 0.0;

  if (eval.degenerate_label) {
    eval.hinge_active = true;
    if (!options.tolerate_singular_label) {
      eval.value = std::numeric_limits<double>::infinity();
      if (options.with_gradient) eval.gradient = zero_gradient(params);
      return eval;
    }
    eval.value = margin_part;
  } else {
    const double bracket = -eval.log_likelihood + margin_part;
    eval.hinge_active = bracket > 0.0;
    eval.value = eval.hinge_active ? bracket : 0.0;
  }

  if (!options.with_gradient) return eval;
  if (!eval.hinge_active) {
    eval.gradient = zero_gradient(params);
    return eval;
  }
  // upstream = -(<L_y*^{-1}> - R) + lambda / A * R D R
  Matrix upstream = Matrix::Zero(l.size(), l.size());
  if (!eval.degenerate_label) {
    upstream = r;
    if (!y.empty()) {
      const Vector inv_q = q_y.cwiseInverse();
      const Matrix inv = inv_q.asDiagonal() *
                         (label_es.eigenvectors() * label_es.eigenvalues().cwiseInverse().asDiagonal() *
                          label_es.eigenvectors().transpose()) *
                         inv_q.asDiagonal();
      upstream -= pad_submatrix(inv, y, l.size());
    }
  }
  if (use_margin) {
    Vector d = Vector::Ones(l.size());
    for (Index i : y) d(i) = -config.omega.omega;
    upstream += (config.lambda / mass) * (r * d.asDiagonal() * r);
  }
  const Matrix m = upstream.cwiseProduct(l.matrix());
  eval.gradient.theta =
      instance.quality_features.transpose() * (m.rowwise().sum() + m.colwise().sum().transpose());
  eval.gradient.kernel_weights.resize(params.kernel_weights.size());
  const Matrix gq = upstream.cwiseProduct(q * q.transpose());
  for (std::size_t k = 0; k < instance.grams.size(); ++k)
    eval.gradient.kernel_weights(static_cast<Index>(k)) = gq.cwiseProduct(instance.grams[k]).sum();
  return eval;
}

double instance_objective(const ModelParams& params, const GroundSetInstance& instance,
                          const SimilarityConfig& similarity, const TrainConfig& config) {
  config.validate();
  instance.require_label();
  if (!on_simplex(params.kernel_weights))
    throw DomainError("kernel weights must lie on the probability simplex");
  return evaluate_instance(prepare_instance(instance, similarity), params, config).value;
}

double total_objective(const ModelParams& params, const std::vector<GroundSetInstance>& dataset,
                       const SimilarityConfig& similarity, const TrainConfig& config) {
  double total = 0.0;
  for (const auto& instance : dataset)
    total += instance_objective(params, instance, similarity, config);
  return total + 0.5 * config.theta_l2 * params.theta.squaredNorm();
}

Vector project_to_simplex(const Vector& v) {
  if (v.size() == 0) throw DimensionError("cannot project an empty vector onto the simplex");
  std::vector<double> u(v.data(), v.data() + v.size());
  std::sort(u.begin(), u.end(), std::greater<>());
  double cumulative = 0.0;
  double tau = 0.0;
  for (std::size_t j = 0; j < u.size(); ++j) {
    cumulative += u[j];
    const double candidate = (cumulative - 1.0) / static_cast<double>(j + 1);
    if (u[j] - candidate > 0.0) tau = candidate;
  }
  return (v.array() - tau).cwiseMax(0.0).matrix();
}

Vector flatten(const ModelParams& params) {
  Vector flat(params.theta.size() + params.kernel_weights.size());
  flat << params.theta, params.kernel_weights;
  return flat;
}

ModelParams unflatten(const Vector& flat, Index quality_dim) {
  if (quality_dim > flat.size()) throw DimensionError("flat parameter vector too short");
  return {flat.head(quality_dim), flat.tail(flat.size() - quality_dim)};
}

namespace {

struct DatasetEvaluation {
  double objective = 0.0;
  int degenerate = 0;
  ParamGradient gradient;
};

// Mean gradient over instances; objective is the plain sum (plus penalty).
DatasetEvaluation evaluate_dataset(const std::vector<PreparedInstance>& data,
                                   const ModelParams& params, const TrainConfig& config,
                                   bool with_gradient, int iteration) {
  DatasetEvaluation out;
  out.gradient = zero_gradient(params);
  const EvaluationOptions options{with_gradient, true};  // singular labels: margin term only
  for (std::size_t n = 0; n < data.size(); ++n) {
    InstanceEvaluation eval;
    try {
      eval = evaluate_instance(data[n], params, config, options);
    } catch (const NumericalError& e) {
      throw NumericalError("training instance " + std::to_string(n) + ", iteration " +
                           std::to_string(iteration) + ": " + e.what());
    } catch (const DomainError& e) {
      throw DomainError("training instance " + std::to_string(n) + ", iteration " +
                        std::to_string(iteration) + ": " + e.what());
    }
    out.objective += eval.value;
    out.degenerate += eval.degenerate_label ? 1 : 0;
    if (with_gradient && eval.hinge_active) {
      out.gradient.theta += eval.gradient.theta;
      out.gradient.kernel_weights += eval.gradient.kernel_weights;
    }
  }
  out.objective += 0.5 * config.theta_l2 * params.theta.squaredNorm();
  if (with_gradient) {
    const double inv_n = 1.0 / static_cast<double>(data.size());
    out.gradient.theta *= inv_n;
    out.gradient.kernel_weights *= inv_n;
    out.gradient.theta += config.theta_l2 * inv_n * params.theta;
  }
  return out;
}

Vector capped_update(Vector update, double max_norm) {
  const double norm = update.norm();
  if (norm > max_norm) update *= max_norm / norm;
  return update;
}

}  // namespace

TrainResult train(const std::vector<GroundSetInstance>& dataset,
                  const SimilarityConfig& similarity, const TrainConfig& config,
                  std::optional<ModelParams> initial) {
  config.validate();
  similarity.validate();
  if (dataset.empty()) throw DataError("training set is empty");

  std::vector<PreparedInstance> data;
  data.reserve(dataset.size());
  for (std::size_t n = 0; n < dataset.size(); ++n) {
    if (!dataset[n].label) throw DataError("training instance " + std::to_string(n) + " has no label");
    data.push_back(prepare_instance(dataset[n], similarity));
  }

  ModelParams params = initial.value_or(ModelParams::initial(dataset.front().quality_dim(), similarity));
  if (!on_simplex(params.kernel_weights))
    throw DomainError("initial kernel weights are not on the simplex");

  const bool learn_weights = config.learn_kernel_weights && params.kernel_weights.size() > 1;

  TrainResult result;
  const auto start = evaluate_dataset(data, params, config, false, 0);
  double previous = start.objective;
  result.initial_objective = previous;
  result.degenerate_labels = start.degenerate;
  result.params = params;
  result.final_objective = previous;

  for (int t = 1; t <= config.max_outer_iterations; ++t) {
    const double step = config.step_decay == StepDecay::inv_sqrt
                            ? config.step_size / std::sqrt(static_cast<double>(t))
                            : config.step_size;
    if (config.learn_theta) {
      for (int b = 0; b < config.alternation_block; ++b) {
        const auto eval = evaluate_dataset(data, params, config, true, t);
        params.theta -= capped_update(step * eval.gradient.theta, config.max_update_norm);
      }
    }
    if (learn_weights) {
      for (int b = 0; b < config.alternation_block; ++b) {
        const auto eval = evaluate_dataset(data, params, config, true, t);
        params.kernel_weights =
            project_to_simplex(params.kernel_weights -
                               capped_update(step * eval.gradient.kernel_weights,
                                             config.max_update_norm));
      }
    }
    const double current = evaluate_dataset(data, params, config, false, t).objective;
    if (!std::isfinite(current))
      throw NumericalError("objective became non-finite at iteration " + std::to_string(t));
    result.objective_trace.push_back(current);
    result.iterations_used = t;
    if (current <= result.final_objective) {
      result.final_objective = current;
      result.params = params;
    }
    const double decrease = (previous - current) / std::max(std::abs(previous), 1e-300);
    if (current == 0.0 || (decrease >= 0.0 && decrease < config.rel_tolerance)) {
      result.converged = true;
      break;
    }
    previous = current;
  }
  return result;
}

FiniteDifferenceReport finite_difference_check(const std::function<double(const Vector&)>& f,
                                               const Vector& point, const Vector& analytic,
                                               double step, double tolerance) {
  if (analytic.size() != point.size())
    throw DimensionError("analytic gradient size does not match the point");
  FiniteDifferenceReport report;
  Vector p = point;
  for (Index i = 0; i < point.size(); ++i) {
    p(i) = point(i) + step;
    const double up = f(p);
    p(i) = point(i) - step;
    const double down = f(p);
    p(i) = point(i);
    if (!std::isfinite(up) || !std::isfinite(down))
      throw NumericalError("function is not finite near coordinate " + std::to_string(i));
    const double numeric = (up - down) / (2.0 * step);
    const double a = analytic(i);
    const double denom = std::max({std::abs(a), std::abs(numeric), 1e-8});
    const double rel = std::abs(a - numeric) / denom;
    report.analytic.push_back(a);
    report.numeric.push_back(numeric);
    report.relative_errors.push_back(rel);
    report.max_relative_error = std::max(report.max_relative_error, rel);
  }
  report.passed = report.max_relative_error < tolerance;
  return report;
}

}  // namespace lmdpp
