#ifndef JENSEN_LATENT_MODEL_HPP
#define JENSEN_LATENT_MODEL_HPP

#include <Eigen/Cholesky>
#include <Eigen/Dense>
#include <Eigen/QR>

#include <array>
#include <cmath>
#include <cstdint>
#include <memory>
#include <numbers>
#include <random>
#include <string>
#include <vector>

#include "jensen/error.hpp"
#include "jensen/random.hpp"

namespace jensen {

/// z ~ N(0, I_d), x | z ~ N(W z + bias, noise_var I_D), with a Gaussian
/// encoder q(z | x) = N(A x + c, diag(encoder_var)).
struct LatentGaussianModel {
  Eigen::MatrixXd decoder_weight;  // D x d
  Eigen::VectorXd decoder_bias;    // D
  double decoder_noise_var = 0.3;
  Eigen::MatrixXd encoder_weight;  // d x D
  Eigen::VectorXd encoder_bias;    // d
  Eigen::VectorXd encoder_var;     // d
  std::uint64_t seed = 0;

  int latent_dim() const { return static_cast<int>(decoder_weight.cols()); }
  int data_dim() const { return static_cast<int>(decoder_weight.rows()); }

  void validate() const {
    const auto d = decoder_weight.cols(), D = decoder_weight.rows();
    if (d < 1 || D < 1) throw ModelError("latent model: empty decoder weight");
    if (decoder_bias.size() != D) throw ModelError("latent model: decoder bias size");
    if (encoder_weight.rows() != d || encoder_weight.cols() != D) {
      throw ModelError("latent model: encoder weight must be d x D");
    }
    if (encoder_bias.size() != d || encoder_var.size() != d) {
      throw ModelError("latent model: encoder bias/variance size");
    }
    if (!(decoder_noise_var > 0.0)) throw ModelError("latent model: decoder noise variance <= 0");
    if (!(encoder_var.array() > 0.0).all()) throw ModelError("latent model: encoder variance <= 0");
  }

  Eigen::MatrixXd marginal_covariance() const {
    const auto D = data_dim();
    return decoder_weight * decoder_weight.transpose() +
           decoder_noise_var * Eigen::MatrixXd::Identity(D, D);
  }
};

/// log p(x) = log N(x; bias, W W^T + noise_var I), via Cholesky.
inline double log_marginal_oracle(const LatentGaussianModel& model, const Eigen::VectorXd& x) {
  model.validate();
  if (x.size() != model.data_dim()) throw ArgumentError("log_marginal_oracle: x has wrong size");
  const Eigen::LLT<Eigen::MatrixXd> llt(model.marginal_covariance());
  if (llt.info() != Eigen::Success) {
    throw ModelError("log_marginal_oracle: marginal covariance not positive definite");
  }
  const Eigen::VectorXd white = llt.matrixL().solve(x - model.decoder_bias);
  const Eigen::MatrixXd& l = llt.matrixLLT();
  double log_det_half = 0.0;
  for (Eigen::Index i = 0; i < l.rows(); ++i) log_det_half += std::log(l(i, i));
  const double D = static_cast<double>(model.data_dim());
  return -0.5 * D * std::log(2.0 * std::numbers::pi) - log_det_half - 0.5 * white.squaredNorm();
}

/// Replaces the encoder with the exact posterior mean map and the diagonal
/// of the posterior covariance (I + W^T W / s2)^-1. The encoder is the exact
/// posterior iff W^T W is diagonal.
inline LatentGaussianModel with_posterior_encoder(LatentGaussianModel model) {
  const auto d = model.decoder_weight.cols();
  const double s2 = model.decoder_noise_var;
  const Eigen::MatrixXd& w = model.decoder_weight;
  const Eigen::MatrixXd precision =
      Eigen::MatrixXd::Identity(d, d) + w.transpose() * w / s2;
  const Eigen::MatrixXd cov = precision.llt().solve(Eigen::MatrixXd::Identity(d, d));
  model.encoder_weight = cov * w.transpose() / s2;
  model.encoder_bias = -model.encoder_weight * model.decoder_bias;
  model.encoder_var = cov.diagonal();
  return model;
}

inline LatentGaussianModel with_encoder_variance_scale(LatentGaussianModel model, double c) {
  if (!(c > 0.0)) throw ArgumentError("encoder variance scale must be positive");
  model.encoder_var *= c;
  return model;
}

/// Draws R_x(Z) = p(x|Z) p(Z) / q(Z|x) for Z ~ q(.|x), in log space until the
/// final exponentiation.
class ImportanceRatioSampler {
 public:
  ImportanceRatioSampler(const LatentGaussianModel& model, const Eigen::VectorXd& x)
      : model_(std::make_shared<const LatentGaussianModel>(model)), x_(x) {
    model.validate();
    if (x.size() != model.data_dim()) throw ArgumentError("importance ratio: x has wrong size");
    q_mean_ = model.encoder_weight * x + model.encoder_bias;
    q_sd_ = model.encoder_var.array().sqrt();
    const double D = model.data_dim();
    const double log2pi = std::log(2.0 * std::numbers::pi);
    // The q normaliser cancels the prior's 2 pi factor.
    constant_ = -0.5 * D * (log2pi + std::log(model.decoder_noise_var)) +
                0.5 * model.encoder_var.array().log().sum();
  }

  double log_ratio(Rng& rng) const {
    std::normal_distribution<double> normal(0.0, 1.0);
    const auto d = q_mean_.size();
    Eigen::VectorXd eps(d);
    for (Eigen::Index i = 0; i < d; ++i) eps[i] = normal(rng);
    const Eigen::VectorXd z = q_mean_ + q_sd_.cwiseProduct(eps);
    const Eigen::VectorXd resid = x_ - model_->decoder_weight * z - model_->decoder_bias;
    return constant_ - 0.5 * resid.squaredNorm() / model_->decoder_noise_var -
           0.5 * z.squaredNorm() + 0.5 * eps.squaredNorm();
  }

  double operator()(Rng& rng) const {
    const double lr = log_ratio(rng);
    if (lr > 700.0) {
      throw NumericalError("importance ratio overflow: log ratio " + std::to_string(lr), lr);
    }
    return std::exp(lr);
  }

  const LatentGaussianModel& model() const { return *model_; }
  const Eigen::VectorXd& x() const { return x_; }

 private:
  std::shared_ptr<const LatentGaussianModel> model_;
  Eigen::VectorXd x_;
  Eigen::VectorXd q_mean_;
  Eigen::VectorXd q_sd_;
  double constant_ = 0.0;
};

inline ImportanceRatioSampler importance_ratio_sampler(const LatentGaussianModel& model,
                                                       const Eigen::VectorXd& x) {
  return ImportanceRatioSampler(model, x);
}

struct BenchmarkPair {
  LatentGaussianModel model;
  Eigen::VectorXd x;
  /// Factor applied to the exact posterior variances (1 = perfect proposal).
  double variance_multiplier = 1.0;
};

inline constexpr std::array<double, 4> benchmark_multipliers = {1.0, 2.0, 4.0, 8.0};

/// Deterministic family of toy models. Pair i has latent dim 1 + i % 4,
/// encoder-variance multiplier benchmark_multipliers[(i / 4) % 4], and data dim
/// d + 1 + (i / 16) % 4. Decoder columns are orthogonal, so the posterior is
/// diagonal and multiplier 1 is the exact posterior. x is drawn from the model.
inline std::vector<BenchmarkPair> make_benchmark_suite(std::uint64_t seed, int count,
                                                       double noise_var = 0.3) {
  if (count < 1) throw ArgumentError("make_benchmark_suite: count must be >= 1");
  std::vector<BenchmarkPair> out;
  out.reserve(static_cast<std::size_t>(count));
  for (int i = 0; i < count; ++i) {
    Rng rng = make_stream(seed, 0x6c6174656e74ULL, static_cast<std::uint64_t>(i));
    std::normal_distribution<double> normal(0.0, 1.0);
    std::uniform_real_distribution<double> column_scale(0.5, 2.0);
    const int d = 1 + i % 4;
    const int D = d + 1 + (i / 16) % 4;
    const double multiplier = benchmark_multipliers[static_cast<std::size_t>((i / 4) % 4)];

    Eigen::MatrixXd g(D, d);
    for (int r = 0; r < D; ++r)
      for (int c = 0; c < d; ++c) g(r, c) = normal(rng);
    const Eigen::HouseholderQR<Eigen::MatrixXd> qr(g);
    const Eigen::MatrixXd q = qr.householderQ() * Eigen::MatrixXd::Identity(D, d);
    Eigen::VectorXd scales(d);
    for (int c = 0; c < d; ++c) scales[c] = column_scale(rng);

    LatentGaussianModel model;
    model.decoder_weight = q * scales.asDiagonal();
    model.decoder_bias.resize(D);
    for (int r = 0; r < D; ++r) model.decoder_bias[r] = normal(rng);
    model.decoder_noise_var = noise_var;
    model.seed = seed;
    model = with_encoder_variance_scale(with_posterior_encoder(std::move(model)), multiplier);

    Eigen::VectorXd z(d), eps(D);
    for (int c = 0; c < d; ++c) z[c] = normal(rng);
    for (int r = 0; r < D; ++r) eps[r] = normal(rng);
    Eigen::VectorXd x =
        model.decoder_weight * z + model.decoder_bias + std::sqrt(noise_var) * eps;
    out.push_back({std::move(model), std::move(x), multiplier});
  }
  return out;
}

}  // namespace jensen

#endif  // JENSEN_LATENT_MODEL_HPP
