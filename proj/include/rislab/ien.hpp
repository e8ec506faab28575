#pragma once

#include <cstddef>
#include <iosfwd>
#include <string>
#include <vector>

#include "rislab/channel.hpp"
#include "rislab/env.hpp"
#include "rislab/mlp.hpp"

namespace rislab {

// Imitation environment network: two coordinate-to-channel MLPs whose
// composition through diag(theta) imitates the composite channel. The
// target is the composite H only; the per-link outputs are free to settle
// anywhere consistent with it.
struct IenModel {
    Mlp bs_ris_net; // 6 -> 128 -> 64 -> 2MN, tanh/tanh/linear
    Mlp ris_ue_net; // 6 -> 128 -> 64 -> 2KN, tanh/tanh/linear
    std::size_t m = 0, k = 0, n = 0;

    // Input coordinates are min-max normalized to [-1, 1] over this box.
    Vec3 box_lo, box_hi;

    // Each decoded link matrix is multiplied by sqrt(channel_scale), so the
    // composite carries channel_scale; calibrated from the dataset's label
    // power so the nets operate near unit magnitude.
    double channel_scale = 1.0;
};

struct IenSample {
    Vec3 loc_bs, loc_ris, loc_ue;
    RisPhases theta;
    CMatrix label; // K x M composite channel
};

struct IenDatasetConfig {
    std::size_t u_locations = 1000;
    std::size_t f_thetas_per_location = 10;
    double label_noise_std = 0.0;
    // Positioning error of the recorded UE coordinates: labels are measured
    // at the true location, but the sample is tagged with a biased one.
    double location_error_eta = 0.0;
    std::uint64_t rng_seed = 0;
};

struct IenPrediction {
    CMatrix g_hat;   // N x M
    CMatrix h_r_hat; // K x N
    CMatrix h_hat;   // K x M, = h_r_hat diag(theta) g_hat
};

struct IenLocations {
    Vec3 bs, ris, ue;
};

IenModel make_ien_model(std::size_t m, std::size_t k, std::size_t n, const Vec3& box_lo,
                        const Vec3& box_hi, double channel_scale, RngStream rng);

IenPrediction ien_predict(const IenModel& model, const IenLocations& locs,
                          const RisPhases& theta);

// Batch-mean squared Frobenius error.
double ien_mse(const std::vector<CMatrix>& h_hats, const std::vector<CMatrix>& labels);

struct IenGrads {
    MlpGrads bs_ris;
    MlpGrads ris_ue;
};

// Exact gradients of ||h_hat - label||_F^2 w.r.t. both networks' parameters,
// chained through the bilinear composition.
IenGrads ien_backward(const IenModel& model, const IenLocations& locs, const RisPhases& theta,
                      const CMatrix& label);

// U UE locations uniform in the movement disc, F random unit-modulus theta
// vectors per location; labels are true composite channels with optional
// complex Gaussian noise. The channel path phases come from a single stream
// derived from cfg.rng_seed, so the location-to-channel map is a fixed
// deterministic function across the whole dataset.
std::vector<IenSample> generate_ien_dataset(const ScenarioGeometry& geom_base,
                                            const UeArea& ue_area, const ArrayConfig& arrays,
                                            const PathLossConfig& pl,
                                            const IenDatasetConfig& cfg);

struct IenTrainConfig {
    std::size_t epochs = 100;
    std::size_t batch = 16;
    SgdConfig sgd{1e-3};
    std::uint64_t shuffle_seed = 0;
};

struct IenTrainResult {
    std::vector<double> mse_trace; // full-dataset MSE after each epoch
};

// Mini-batch SGD on the composite-channel MSE. Steps are taken on the
// objective normalized by channel_scale^2, which keeps the step size
// meaningful across path-loss scales; the reported trace is the raw MSE.
IenTrainResult train_ien(IenModel& model, const std::vector<IenSample>& dataset,
                         const IenTrainConfig& cfg);

double ien_predicted_rate(const IenModel& model, const IenLocations& locs,
                          const RisPhases& theta, const TransmitCovariance& q, double sigma2);

// RMS entry magnitude over all labels; the natural channel_scale for a dataset.
double dataset_label_scale(const std::vector<IenSample>& dataset);

// Checkpoint: both MLP dumps plus dims, box, and scale; bit-exact round trip.
void save_ien(const IenModel& model, std::ostream& out);
IenModel load_ien(std::istream& in);
void save_ien_file(const IenModel& model, const std::string& path);
IenModel load_ien_file(const std::string& path);

// Dataset CSV: sample id, coordinates, theta re/im pairs, label re/im pairs.
void write_ien_dataset(std::ostream& out, const std::vector<IenSample>& dataset);
std::vector<IenSample> read_ien_dataset(std::istream& in, std::size_t m, std::size_t k,
                                        std::size_t n);

} // namespace rislab
