#include "swipt/model.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "swipt/errors.hpp"
#include "swipt/rng.hpp"

namespace swipt {

void SystemConfig::validate() const {
  require(nTx >= 1 && nStreams >= 1 && nId >= 1 && nEh >= 1, ErrorCode::InvalidArgument,
          "antenna and stream counts must be >= 1");
  require(nStreams <= std::min(nTx, nId), ErrorCode::InvalidArgument,
          "stream count exceeds min(nTx, nId)");
  require(powerBudget > 0.0 && std::isfinite(powerBudget), ErrorCode::InvalidArgument,
          "power budget must be positive");
  require(efficiency > 0.0 && efficiency <= 1.0, ErrorCode::InvalidArgument,
          "efficiency must lie in (0, 1]");
  require(weights.size() == nStreams, ErrorCode::InvalidArgument,
          "weights must have one entry per stream");
  require((weights.array() >= 0.0).all() && weights.maxCoeff() > 0.0,
          ErrorCode::InvalidArgument, "weights must be nonnegative with one positive entry");
  require(targetEnergy >= 0.0 && std::isfinite(targetEnergy), ErrorCode::InvalidArgument,
          "target energy must be nonnegative");
}

SystemConfig SystemConfig::square(int n, double powerBudget, double targetEnergy) {
  SystemConfig cfg;
  cfg.nTx = cfg.nStreams = cfg.nId = cfg.nEh = n;
  cfg.powerBudget = powerBudget;
  cfg.weights = RVector::Ones(n);
  cfg.targetEnergy = targetEnergy;
  return cfg;
}

ChannelPair generate_channels(const SystemConfig& cfg, double distId, double distEh,
                              std::uint64_t seed, double pathlossExponent) {
  require(distId > 0.0 && distEh > 0.0, ErrorCode::InvalidArgument,
          "distances must be positive");
  Rng rng(seed);
  ChannelPair ch;
  ch.H = rng.complex_gaussian_matrix(cfg.nId, cfg.nTx) * std::pow(distId, -pathlossExponent / 2);
  ch.G = rng.complex_gaussian_matrix(cfg.nEh, cfg.nTx) * std::pow(distEh, -pathlossExponent / 2);
  ch.distId = distId;
  ch.distEh = distEh;
  ch.seed = seed;
  return ch;
}

double received_power(const CMatrix& G, const CMatrix& F) {
  require(G.cols() == F.rows(), ErrorCode::DimensionMismatch, "G and F do not conform");
  return (G * F).squaredNorm();
}

double harvested_energy(const SystemConfig& cfg, const CMatrix& G, const CMatrix& F) {
  return cfg.efficiency * received_power(G, F);
}

double weighted_mse(const SystemConfig& cfg, const CMatrix& H, const Transceiver& t) {
  const auto& F = t.precoder;
  const auto& L = t.receiver;
  require(t.scale > 0.0, ErrorCode::InvalidArgument, "scale must be positive");
  require(H.cols() == F.rows() && L.cols() == H.rows() && L.rows() == F.cols() &&
              F.cols() == cfg.weights.size(),
          ErrorCode::DimensionMismatch, "transceiver does not conform to H and W");
  const double inv = 1.0 / t.scale;
  const CMatrix e = inv * (L * H * F) - CMatrix::Identity(F.cols(), F.cols());
  const auto w = cfg.weights;
  double mse = 0.0;
  for (Eigen::Index k = 0; k < w.size(); ++k) {
    mse += w(k) * (e.row(k).squaredNorm() + inv * inv * L.row(k).squaredNorm());
  }
  return mse;
}

MseRate mmse_and_rate(const SystemConfig& cfg, const CMatrix& H, const CMatrix& F) {
  require(H.cols() == F.rows() && F.cols() == cfg.weights.size(), ErrorCode::DimensionMismatch,
          "F does not conform to H and W");
  const auto ns = F.cols();
  const CMatrix hf = H * F;
  const CMatrix gram = linalg::hermitian_part(hf.adjoint() * hf) + CMatrix::Identity(ns, ns);
  Eigen::LLT<CMatrix> llt(gram);
  const CMatrix inv = llt.solve(CMatrix::Identity(ns, ns));
  MseRate out;
  for (Eigen::Index k = 0; k < ns; ++k) out.mse += cfg.weights(k) * inv(k, k).real();
  const CMatrix lower = llt.matrixL();
  double logdet = 0.0;
  for (Eigen::Index k = 0; k < ns; ++k) logdet += 2.0 * std::log2(lower(k, k).real());
  out.rateBits = logdet;
  return out;
}

double snr_budget_db(double noisePsdDbmHz, double bandwidthHz, double txPowerDbm,
                     double pathlossDb) {
  require(bandwidthHz > 0.0, ErrorCode::InvalidArgument, "bandwidth must be positive");
  return txPowerDbm - pathlossDb - (noisePsdDbmHz + 10.0 * std::log10(bandwidthHz));
}

double max_energy(const SystemConfig& cfg, const CMatrix& G) {
  return cfg.powerBudget * linalg::top_eigen(G.adjoint() * G).value;
}

void check_channel_dims(const SystemConfig& cfg, const CMatrix& H, const CMatrix& G) {
  if (H.rows() != cfg.nId || H.cols() != cfg.nTx || G.rows() != cfg.nEh || G.cols() != cfg.nTx) {
    fail(ErrorCode::DimensionMismatch,
         "channel sizes H " + std::to_string(H.rows()) + "x" + std::to_string(H.cols()) + ", G " +
             std::to_string(G.rows()) + "x" + std::to_string(G.cols()) +
             " do not match the configuration");
  }
}

}  // namespace swipt
