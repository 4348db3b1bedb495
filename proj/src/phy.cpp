#include "scnet/phy.hpp"

#include <cmath>
#include <stdexcept>

namespace scnet::phy {

namespace {

// TS 36.211 Table 6.3.4.2.3-2 generator vectors u_0..u_15.
std::vector<VectorC> householder_generators() {
  const Complex j(0.0, 1.0);
  const double s = 1.0 / std::sqrt(2.0);
  std::vector<VectorC> u(16, VectorC(4));
  u[0] << 1, -1, -1, -1;
  u[1] << 1, -j, 1, j;
  u[2] << 1, 1, -1, 1;
  u[3] << 1, j, 1, -j;
  u[4] << 1, s * Complex(-1, -1), -j, s * Complex(1, -1);
  u[5] << 1, s * Complex(1, -1), j, s * Complex(-1, -1);
  u[6] << 1, s * Complex(1, 1), -j, s * Complex(-1, 1);
  u[7] << 1, s * Complex(-1, 1), j, s * Complex(1, 1);
  u[8] << 1, -1, 1, 1;
  u[9] << 1, -j, -1, -j;
  u[10] << 1, 1, 1, -1;
  u[11] << 1, j, -1, j;
  u[12] << 1, -1, -1, 1;
  u[13] << 1, -1, 1, -1;
  u[14] << 1, 1, -1, -1;
  u[15] << 1, 1, 1, 1;
  return u;
}

std::vector<Precoder> build_codebook() {
  std::vector<Precoder> cb;
  cb.reserve(16);
  const auto gens = householder_generators();
  for (int n = 0; n < 16; ++n) {
    const VectorC& u = gens[n];
    MatrixC w = MatrixC::Identity(4, 4) -
                2.0 * (u * u.adjoint()) / u.squaredNorm();
    VectorC col = w.col(0);
    col /= col.norm();
    cb.push_back(Precoder{col, n});
  }
  return cb;
}

}  // namespace

const std::vector<Precoder>& rel8_codebook_4tx() {
  static const std::vector<Precoder> cb = build_codebook();
  return cb;
}

int select_wideband_pmi(const std::vector<ChannelMatrix>& channels,
                        const std::vector<Precoder>& codebook,
                        double noise_var) {
  if (channels.empty()) throw std::invalid_argument("no channel samples");
  if (noise_var <= 0.0) throw std::invalid_argument("noise_var must be > 0");
  int best = 0;
  double best_metric = -1.0;
  for (std::size_t n = 0; n < codebook.size(); ++n) {
    double metric = 0.0;
    for (const auto& ch : channels) {
      const double gain = (ch.entries * codebook[n].vector).squaredNorm();
      metric += std::log2(1.0 + gain / noise_var);
    }
    if (metric > best_metric) {
      best_metric = metric;
      best = static_cast<int>(n);
    }
  }
  return best;
}

namespace {

MatrixC interference_covariance(const ChannelMatrix& desired,
                                const std::optional<Precoder>& co_sched,
                                const InterfererSet& interferers,
                                double noise_var) {
  const auto n_r = desired.entries.rows();
  MatrixC r = noise_var * MatrixC::Identity(n_r, n_r);
  if (co_sched) {
    VectorC h_j = desired.entries * co_sched->vector;
    r += h_j * h_j.adjoint();
  }
  for (const auto& intf : interferers) {
    if (!intf.active) continue;
    VectorC h_l = intf.channel * intf.precoder;
    r += intf.power * (h_l * h_l.adjoint());
  }
  return r;
}

}  // namespace

ReceiveFilter mmse_irc_filter(const ChannelMatrix& desired, const Precoder& w_k,
                              const std::optional<Precoder>& co_sched,
                              const InterfererSet& interferers,
                              double noise_var) {
  if (noise_var <= 0.0) throw std::invalid_argument("noise_var must be > 0");
  MatrixC r = interference_covariance(desired, co_sched, interferers, noise_var);
  VectorC h_eff = desired.entries * w_k.vector;
  // R is Hermitian positive definite (noise_var > 0), LLT applies
  RowVectorC g = h_eff.adjoint() * r.llt().solve(
                     MatrixC::Identity(r.rows(), r.cols()));
  return ReceiveFilter{g};
}

double post_sinr(const ReceiveFilter& g, const ChannelMatrix& desired,
                 const Precoder& w_k, const std::optional<Precoder>& co_sched,
                 const InterfererSet& interferers, double noise_var) {
  if (noise_var <= 0.0) throw std::invalid_argument("noise_var must be > 0");
  const double signal = std::norm((g.vector * desired.entries * w_k.vector)(0));
  double denom = noise_var * g.vector.squaredNorm();
  if (co_sched) {
    denom += std::norm((g.vector * desired.entries * co_sched->vector)(0));
  }
  for (const auto& intf : interferers) {
    if (!intf.active) continue;
    denom += intf.power *
             std::norm((g.vector * intf.channel * intf.precoder)(0));
  }
  return signal / denom;
}

RowVectorC quantized_channel_vector(const Precoder& p) {
  return p.vector.adjoint();
}

double correlation(const RowVectorC& v1, const RowVectorC& v2) {
  const double n1 = v1.norm();
  const double n2 = v2.norm();
  if (n1 == 0.0 || n2 == 0.0) throw std::invalid_argument("degenerate vector");
  return std::abs((v1 * v2.adjoint())(0)) / (n1 * n2);
}

}  // namespace scnet::phy
