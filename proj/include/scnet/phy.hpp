#ifndef SCNET_PHY_HPP
#define SCNET_PHY_HPP

#include <optional>
#include <vector>

#include "scnet/types.hpp"

namespace scnet::phy {

// Complex N_r x N_t channel between one UE and one eNB for one RB.
// Entries are linear amplitude gains with pathloss/shadowing/fading and
// transmit power folded in.
struct ChannelMatrix {
  MatrixC entries;
  int ue_id = -1;
  int enb_id = -1;
  int rb_index = 0;
};

// Rank-1 codebook precoder, unit Euclidean norm.
struct Precoder {
  VectorC vector;
  int codebook_index = -1;
};

struct ReceiveFilter {
  RowVectorC vector;
};

struct Interferer {
  MatrixC channel;   // H_{k,l}
  VectorC precoder;  // W_l (rank-1 column)
  bool active = true;
  double power = 1.0;  // P_l, watts; 1 when the channel already carries power
};

using InterfererSet = std::vector<Interferer>;

// LTE Release-8 4-Tx rank-1 codebook: 16 unit-norm constant-modulus vectors
// from the Householder construction.
const std::vector<Precoder>& rel8_codebook_4tx();

// Wideband PMI: argmax over the codebook of the mutual information summed
// over all RBs, using the matched-filter SINR |Hw|^2 / noise_var.
// Ties break to the lowest index. Throws on an empty channel list.
int select_wideband_pmi(const std::vector<ChannelMatrix>& channels,
                        const std::vector<Precoder>& codebook,
                        double noise_var);

// MMSE-IRC filter g = (H w_k)^H R^{-1}, with R the covariance of the
// co-scheduled layer, active inter-cell interference and noise.
ReceiveFilter mmse_irc_filter(const ChannelMatrix& desired, const Precoder& w_k,
                              const std::optional<Precoder>& co_sched,
                              const InterfererSet& interferers,
                              double noise_var);

// Post-reception SINR for a given receive filter.
double post_sinr(const ReceiveFilter& g, const ChannelMatrix& desired,
                 const Precoder& w_k, const std::optional<Precoder>& co_sched,
                 const InterfererSet& interferers, double noise_var);

// Quantised channel vector of a fed-back precoder: the pseudo-inverse of a
// unit-norm column, i.e. its conjugate transpose.
RowVectorC quantized_channel_vector(const Precoder& p);

// Normalised spatial correlation |v1 v2^H| / (|v1||v2|), in [0, 1].
// Throws on a zero vector.
double correlation(const RowVectorC& v1, const RowVectorC& v2);

}  // namespace scnet::phy

#endif
