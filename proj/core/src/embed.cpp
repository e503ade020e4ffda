#include "mlgc/embed.hpp"

#include <cmath>
#include <fstream>
#include <random>
#include <sstream>
#include <utility>

#include <json.hpp>

#include "mlgc/errors.hpp"

namespace mlgc {

namespace {

using nlohmann::json;

double prelu_scalar(double z, double slope) {
  return z > 0.0 ? z : slope * z;
}

// Everything backprop needs from one forward pass: the input of every dense
// layer and every pre-activation.
struct ForwardTrace {
  std::vector<Eigen::MatrixXd> inputs;    // inputs[l] feeds dense layer l
  std::vector<Eigen::MatrixXd> preacts;   // preacts[l] = inputs[l] W_l + b_l
};

ForwardTrace forward_trace(const EmbedderModel& model, const Eigen::MatrixXd& x) {
  if (x.cols() != model.input_dim()) {
    std::ostringstream msg;
    msg << "forward: input has " << x.cols() << " columns, model expects "
        << model.input_dim();
    throw ArgumentError(msg.str());
  }
  const int num_layers = model.num_dense_layers();
  ForwardTrace trace;
  trace.inputs.reserve(static_cast<std::size_t>(num_layers) + 1);
  trace.preacts.reserve(static_cast<std::size_t>(num_layers));
  trace.inputs.push_back(x);
  for (int l = 0; l < num_layers; ++l) {
    Eigen::MatrixXd z =
        (trace.inputs.back() * model.weight(l)).rowwise() +
        model.bias(l).transpose();
    trace.preacts.push_back(z);
    if (l + 1 < num_layers) {
      const double slope = model.prelu_slope(l);
      trace.inputs.push_back(
          z.unaryExpr([slope](double v) { return prelu_scalar(v, slope); }));
    } else {
      trace.inputs.push_back(std::move(z));  // linear output layer
    }
  }
  return trace;
}

// Parameter gradient from a recorded forward pass; shares the flattening
// order of EmbedderModel::parameters().
Eigen::VectorXd backprop_trace(const EmbedderModel& model,
                               const ForwardTrace& trace,
                               const Eigen::MatrixXd& upstream) {
  const int num_layers = model.num_dense_layers();
  if (upstream.rows() != trace.inputs.back().rows() ||
      upstream.cols() != model.output_dim()) {
    throw ArgumentError("backprop: upstream gradient shape does not match output");
  }

  std::vector<Eigen::MatrixXd> grad_w(static_cast<std::size_t>(num_layers));
  std::vector<Eigen::VectorXd> grad_b(static_cast<std::size_t>(num_layers));
  std::vector<double> grad_slope(static_cast<std::size_t>(num_layers) - 1, 0.0);

  Eigen::MatrixXd dz = upstream;  // d loss / d preacts[num_layers-1]
  for (int l = num_layers - 1; l >= 0; --l) {
    grad_w[static_cast<std::size_t>(l)] =
        trace.inputs[static_cast<std::size_t>(l)].transpose() * dz;
    grad_b[static_cast<std::size_t>(l)] = dz.colwise().sum();
    if (l == 0) break;

    // Gradient wrt the PReLU output feeding this layer...
    Eigen::MatrixXd da = dz * model.weight(l).transpose();
    // ...then through the PReLU of hidden layer l-1.
    const Eigen::MatrixXd& z = trace.preacts[static_cast<std::size_t>(l - 1)];
    const double slope = model.prelu_slope(l - 1);
    grad_slope[static_cast<std::size_t>(l - 1)] =
        ((z.array() > 0.0).select(0.0, z.array()) * da.array()).sum();
    dz = (z.array() > 0.0).select(da.array(), slope * da.array()).matrix();
  }

  Eigen::VectorXd flat(model.num_parameters());
  Eigen::Index offset = 0;
  for (int l = 0; l < num_layers; ++l) {
    const auto& gw = grad_w[static_cast<std::size_t>(l)];
    flat.segment(offset, gw.size()) =
        Eigen::Map<const Eigen::VectorXd>(gw.data(), gw.size());
    offset += gw.size();
    const auto& gb = grad_b[static_cast<std::size_t>(l)];
    flat.segment(offset, gb.size()) = gb;
    offset += gb.size();
  }
  for (double gs : grad_slope) {
    flat[offset++] = gs;
  }
  return flat;
}

// Q = Y R^{-T} row by row via one triangular solve.
Eigen::MatrixXd whiten_rows(const Eigen::MatrixXd& y, const Eigen::MatrixXd& r) {
  return r.triangularView<Eigen::Lower>()
      .solve(y.transpose())
      .transpose();
}

json matrix_rows(const Eigen::MatrixXd& m) {
  json rows = json::array();
  for (Eigen::Index i = 0; i < m.rows(); ++i) {
    json row = json::array();
    for (Eigen::Index j = 0; j < m.cols(); ++j) {
      row.push_back(m(i, j));
    }
    rows.push_back(std::move(row));
  }
  return rows;
}

Eigen::MatrixXd rows_to_matrix(const json& rows, const char* field) {
  if (!rows.is_array() || rows.empty() || !rows.front().is_array()) {
    throw IoError(std::string("model file: field '") + field +
                  "' must be a non-empty array of rows");
  }
  const std::size_t ncols = rows.front().size();
  Eigen::MatrixXd m(static_cast<Eigen::Index>(rows.size()),
                    static_cast<Eigen::Index>(ncols));
  for (std::size_t i = 0; i < rows.size(); ++i) {
    if (!rows[i].is_array() || rows[i].size() != ncols) {
      throw IoError(std::string("model file: ragged rows in field '") + field +
                    "'");
    }
    for (std::size_t j = 0; j < ncols; ++j) {
      m(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(j)) =
          rows[i][j].get<double>();
    }
  }
  return m;
}

}  // namespace

std::vector<int> EmbedderModel::default_layer_sizes(int input_dim, int output_dim) {
  return {input_dim, 400, 200, 100, output_dim};
}

EmbedderModel::EmbedderModel(std::vector<int> layer_sizes, std::uint64_t seed)
    : layer_sizes_(std::move(layer_sizes)) {
  if (layer_sizes_.size() < 2) {
    throw ArgumentError("EmbedderModel: need at least input and output sizes");
  }
  const std::size_t num_layers = layer_sizes_.size() - 1;
  weights_.reserve(num_layers);
  biases_.reserve(num_layers);
  prelu_slopes_.assign(num_layers - 1, 0.25);

  std::mt19937_64 rng(seed);
  for (std::size_t l = 0; l < num_layers; ++l) {
    const int fan_in = layer_sizes_[l];
    const int fan_out = layer_sizes_[l + 1];
    if (fan_in <= 0 || fan_out <= 0) {
      throw ArgumentError("EmbedderModel: layer sizes must be positive");
    }
    const double bound = 1.0 / std::sqrt(static_cast<double>(fan_in));
    std::uniform_real_distribution<double> dist(-bound, bound);
    Eigen::MatrixXd w(fan_in, fan_out);
    for (Eigen::Index i = 0; i < w.size(); ++i) {
      w.data()[i] = dist(rng);  // storage (column-major) order
    }
    weights_.push_back(std::move(w));
    biases_.push_back(Eigen::VectorXd::Zero(fan_out));
  }
}

EmbedderModel::EmbedderModel(std::vector<int> layer_sizes,
                             std::vector<Eigen::MatrixXd> weights,
                             std::vector<Eigen::VectorXd> biases,
                             std::vector<double> prelu_slopes)
    : layer_sizes_(std::move(layer_sizes)),
      weights_(std::move(weights)),
      biases_(std::move(biases)),
      prelu_slopes_(std::move(prelu_slopes)) {
  validate_shapes();
}

void EmbedderModel::validate_shapes() const {
  if (layer_sizes_.size() < 2) {
    throw ArgumentError("EmbedderModel: need at least input and output sizes");
  }
  const std::size_t num_layers = layer_sizes_.size() - 1;
  if (weights_.size() != num_layers || biases_.size() != num_layers ||
      prelu_slopes_.size() != num_layers - 1) {
    throw ArgumentError("EmbedderModel: component counts do not match layer_sizes");
  }
  for (std::size_t l = 0; l < num_layers; ++l) {
    if (layer_sizes_[l] <= 0 || layer_sizes_[l + 1] <= 0) {
      throw ArgumentError("EmbedderModel: layer sizes must be positive");
    }
    if (weights_[l].rows() != layer_sizes_[l] ||
        weights_[l].cols() != layer_sizes_[l + 1] ||
        biases_[l].size() != layer_sizes_[l + 1]) {
      std::ostringstream msg;
      msg << "EmbedderModel: layer " << l << " has shape " << weights_[l].rows()
          << "x" << weights_[l].cols() << ", expected " << layer_sizes_[l] << "x"
          << layer_sizes_[l + 1];
      throw ArgumentError(msg.str());
    }
  }
}

Eigen::Index EmbedderModel::num_parameters() const {
  Eigen::Index count = 0;
  for (std::size_t l = 0; l < weights_.size(); ++l) {
    count += weights_[l].size() + biases_[l].size();
  }
  return count + static_cast<Eigen::Index>(prelu_slopes_.size());
}

Eigen::VectorXd EmbedderModel::parameters() const {
  Eigen::VectorXd flat(num_parameters());
  Eigen::Index offset = 0;
  for (std::size_t l = 0; l < weights_.size(); ++l) {
    const auto& w = weights_[l];
    flat.segment(offset, w.size()) =
        Eigen::Map<const Eigen::VectorXd>(w.data(), w.size());
    offset += w.size();
    flat.segment(offset, biases_[l].size()) = biases_[l];
    offset += biases_[l].size();
  }
  for (double s : prelu_slopes_) {
    flat[offset++] = s;
  }
  return flat;
}

void EmbedderModel::set_parameters(const Eigen::VectorXd& flat) {
  if (flat.size() != num_parameters()) {
    std::ostringstream msg;
    msg << "set_parameters: got " << flat.size() << " values, model has "
        << num_parameters();
    throw ArgumentError(msg.str());
  }
  Eigen::Index offset = 0;
  for (std::size_t l = 0; l < weights_.size(); ++l) {
    auto& w = weights_[l];
    Eigen::Map<Eigen::VectorXd>(w.data(), w.size()) =
        flat.segment(offset, w.size());
    offset += w.size();
    biases_[l] = flat.segment(offset, biases_[l].size());
    offset += biases_[l].size();
  }
  for (double& s : prelu_slopes_) {
    s = flat[offset++];
  }
}

Eigen::MatrixXd forward(const EmbedderModel& model, const Eigen::MatrixXd& x) {
  return forward_trace(model, x).inputs.back();
}

LossValue spectral_loss(const Eigen::MatrixXd& y, const SpdMatrix& lap,
                        double jitter) {
  const Eigen::Index n = y.rows();
  const Eigen::Index k = y.cols();
  if (k < 1) {
    throw ArgumentError("spectral_loss: embedding has no columns");
  }
  if (n != lap.dim()) {
    std::ostringstream msg;
    msg << "spectral_loss: embedding has " << n << " rows but the Laplacian dim is "
        << lap.dim();
    throw ArgumentError(msg.str());
  }
  if (n < k) {
    std::ostringstream msg;
    msg << "spectral_loss: need at least " << k << " rows, got " << n;
    throw ArgumentError(msg.str());
  }

  Eigen::MatrixXd gram = y.transpose() * y;
  gram = 0.5 * (gram + gram.transpose()).eval();
  const double scale = gram.trace() / static_cast<double>(k);

  Eigen::MatrixXd r;
  bool factored = false;
  for (int attempt = 0; attempt <= 3 && !factored; ++attempt) {
    Eigen::MatrixXd shifted = gram;
    if (attempt > 0) {
      shifted.diagonal().array() +=
          jitter * std::pow(10.0, attempt - 1) * scale;
    }
    Eigen::LLT<Eigen::MatrixXd> llt(shifted);
    if (llt.info() == Eigen::Success) {
      r = llt.matrixL();
      factored = true;
    }
  }
  if (!factored) {
    const double smallest = sym_eig(gram).eigenvalues.minCoeff();
    std::ostringstream msg;
    msg << "spectral_loss: Gram matrix is rank deficient even after jitter "
           "escalation (smallest eigenvalue "
        << smallest << ")";
    throw RankDeficiencyError(msg.str(), smallest);
  }

  Eigen::MatrixXd quad = y.transpose() * (lap.matrix() * y);
  quad = 0.5 * (quad + quad.transpose()).eval();
  //   Tr(R^{-1} M R^{-T})  via two triangular solves.
  const Eigen::MatrixXd t1 = r.triangularView<Eigen::Lower>().solve(quad);
  const Eigen::MatrixXd t2 =
      r.triangularView<Eigen::Lower>().solve(t1.transpose());
  return LossValue{t2.trace(), std::move(r)};
}

Eigen::MatrixXd loss_jacobian(const Eigen::MatrixXd& y, const SpdMatrix& lap,
                              const Eigen::MatrixXd& cholesky_factor) {
  const Eigen::Index k = y.cols();
  if (cholesky_factor.rows() != k || cholesky_factor.cols() != k) {
    throw ArgumentError("loss_jacobian: Cholesky factor shape does not match Y");
  }
  if (y.rows() != lap.dim()) {
    throw ArgumentError("loss_jacobian: Y rows do not match the Laplacian dim");
  }
  const Eigen::MatrixXd r_inv =
      cholesky_factor.triangularView<Eigen::Lower>().solve(
          Eigen::MatrixXd::Identity(k, k));
  const Eigen::MatrixXd dbar = r_inv.transpose() * r_inv;  // (Y^T Y)^{-1}

  const Eigen::MatrixXd ly = lap.matrix() * y;
  const Eigen::MatrixXd yd = y * dbar;
  return 2.0 * (ly * dbar - yd * ((y.transpose() * ly) * dbar));
}

Eigen::VectorXd backprop(const EmbedderModel& model, const Eigen::MatrixXd& x,
                         const Eigen::MatrixXd& upstream) {
  return backprop_trace(model, forward_trace(model, x), upstream);
}

EmbeddingResult train(EmbedderModel& model, const Eigen::MatrixXd& x,
                      const SpdMatrix& lap, const TrainConfig& config,
                      const std::function<void(int, double)>& progress) {
  if (x.rows() != lap.dim()) {
    std::ostringstream msg;
    msg << "train: " << x.rows() << " feature rows vs Laplacian dim "
        << lap.dim();
    throw ArgumentError(msg.str());
  }
  if (!(config.learning_rate > 0.0)) {
    throw ArgumentError("train: learning_rate must be positive");
  }
  if (config.beta1 < 0.0 || config.beta1 >= 1.0 || config.beta2 < 0.0 ||
      config.beta2 >= 1.0) {
    throw ArgumentError("train: beta1 and beta2 must lie in [0, 1)");
  }
  if (config.max_steps < 1) {
    throw ArgumentError("train: max_steps must be >= 1");
  }

  Eigen::VectorXd params = model.parameters();
  // AmsGrad state: first moment, second moment, and the running max of the
  // second moment that makes the effective step size non-increasing.
  Eigen::VectorXd m = Eigen::VectorXd::Zero(params.size());
  Eigen::VectorXd v = Eigen::VectorXd::Zero(params.size());
  Eigen::VectorXd v_max = Eigen::VectorXd::Zero(params.size());

  EmbeddingResult result;
  result.loss_history.reserve(static_cast<std::size_t>(config.max_steps) + 1);

  auto finalize = [&](const Eigen::MatrixXd& y, LossValue&& lv, int steps) {
    result.output = y;
    result.whitened = whiten_rows(y, lv.cholesky_factor);
    result.cholesky_factor = std::move(lv.cholesky_factor);
    result.final_loss = lv.value;
    result.steps_run = steps;
    return std::move(result);
  };

  for (int step = 0; step < config.max_steps; ++step) {
    ForwardTrace trace = forward_trace(model, x);
    const Eigen::MatrixXd& y = trace.inputs.back();
    if (!y.allFinite()) {
      std::ostringstream msg;
      msg << "train: embedding became non-finite at step " << step;
      throw TrainingError(msg.str(), step);
    }
    LossValue lv = spectral_loss(y, lap, config.cholesky_jitter);
    if (!std::isfinite(lv.value)) {
      std::ostringstream msg;
      msg << "train: loss became non-finite at step " << step;
      throw TrainingError(msg.str(), step);
    }
    result.loss_history.push_back(lv.value);
    if (progress) progress(step, lv.value);

    // Plateau stop: relative change across the window fell below tolerance.
    if (config.plateau_window > 0 && step >= config.plateau_window) {
      const double before =
          result.loss_history[static_cast<std::size_t>(step - config.plateau_window)];
      const double change = std::abs(before - lv.value);
      if (change <= config.plateau_tol * std::max(std::abs(before), 1e-30)) {
        return finalize(y, std::move(lv), step);
      }
    }

    const Eigen::MatrixXd upstream = loss_jacobian(y, lap, lv.cholesky_factor);
    const Eigen::VectorXd grad = backprop_trace(model, trace, upstream);
    if (!grad.allFinite()) {
      std::ostringstream msg;
      msg << "train: gradient became non-finite at step " << step;
      throw TrainingError(msg.str(), step);
    }

    const double t = static_cast<double>(step + 1);
    m = config.beta1 * m + (1.0 - config.beta1) * grad;
    v = config.beta2 * v + (1.0 - config.beta2) * grad.cwiseProduct(grad);
    v_max = v_max.cwiseMax(v);
    const double bias1 = 1.0 - std::pow(config.beta1, t);
    const double bias2 = 1.0 - std::pow(config.beta2, t);
    params -= (config.learning_rate / bias1) *
              (m.array() / (v_max.array().sqrt() / std::sqrt(bias2) +
                            config.epsilon))
                  .matrix();
    model.set_parameters(params);
  }

  // Ran out of steps: evaluate the final state once more.
  ForwardTrace trace = forward_trace(model, x);
  const Eigen::MatrixXd y = trace.inputs.back();
  LossValue lv = spectral_loss(y, lap, config.cholesky_jitter);
  result.loss_history.push_back(lv.value);
  return finalize(y, std::move(lv), config.max_steps);
}

void save_model(const EmbedderModel& model, const Eigen::MatrixXd& cholesky_factor,
                const std::string& path) {
  const int k = model.output_dim();
  if (cholesky_factor.rows() != k || cholesky_factor.cols() != k) {
    throw ArgumentError("save_model: Cholesky factor shape does not match the model output");
  }
  json j;
  j["version"] = 1;
  j["layer_sizes"] = model.layer_sizes();
  json weights = json::array();
  json biases = json::array();
  for (int l = 0; l < model.num_dense_layers(); ++l) {
    weights.push_back(matrix_rows(model.weight(l)));
    json b = json::array();
    for (Eigen::Index i = 0; i < model.bias(l).size(); ++i) {
      b.push_back(model.bias(l)[i]);
    }
    biases.push_back(std::move(b));
  }
  j["weights"] = std::move(weights);
  j["biases"] = std::move(biases);
  json slopes = json::array();
  for (int l = 0; l + 1 < model.num_dense_layers(); ++l) {
    slopes.push_back(model.prelu_slope(l));
  }
  j["prelu_slopes"] = std::move(slopes);
  j["cholesky_factor"] = matrix_rows(cholesky_factor);

  std::ofstream out(path);
  if (!out) {
    throw IoError("save_model: cannot open '" + path + "' for writing");
  }
  out << j.dump(2) << '\n';
  if (!out) {
    throw IoError("save_model: write to '" + path + "' failed");
  }
}

LoadedModel load_model(const std::string& path) {
  std::ifstream in(path);
  if (!in) {
    throw IoError("load_model: cannot open '" + path + "'");
  }
  json j;
  try {
    in >> j;
  } catch (const json::exception& e) {
    throw IoError("load_model: '" + path + "' is not valid JSON: " + e.what());
  }

  try {
    const auto layer_sizes = j.at("layer_sizes").get<std::vector<int>>();
    const auto& jw = j.at("weights");
    const auto& jb = j.at("biases");
    const auto slopes = j.at("prelu_slopes").get<std::vector<double>>();

    std::vector<Eigen::MatrixXd> weights;
    std::vector<Eigen::VectorXd> biases;
    for (std::size_t l = 0; l < jw.size(); ++l) {
      weights.push_back(rows_to_matrix(jw[l], "weights"));
      const auto b = jb.at(l).get<std::vector<double>>();
      biases.push_back(Eigen::Map<const Eigen::VectorXd>(
          b.data(), static_cast<Eigen::Index>(b.size())));
    }

    EmbedderModel model(layer_sizes, std::move(weights), std::move(biases), slopes);
    Eigen::MatrixXd r = rows_to_matrix(j.at("cholesky_factor"), "cholesky_factor");
    if (r.rows() != model.output_dim() || r.cols() != model.output_dim()) {
      throw IoError("load_model: cholesky_factor shape does not match the model output");
    }
    return LoadedModel{std::move(model), std::move(r)};
  } catch (const json::exception& e) {
    throw IoError("load_model: '" + path + "' is missing fields: " + e.what());
  } catch (const ArgumentError& e) {
    throw IoError("load_model: '" + path + "' is inconsistent: " + e.what());
  }
}

Eigen::MatrixXd embed_points(const EmbedderModel& model,
                             const Eigen::MatrixXd& cholesky_factor,
                             const Eigen::MatrixXd& x) {
  const int k = model.output_dim();
  if (cholesky_factor.rows() != k || cholesky_factor.cols() != k) {
    throw ArgumentError("embed_points: Cholesky factor shape does not match the model output");
  }
  return whiten_rows(forward(model, x), cholesky_factor);
}

}  // namespace mlgc
