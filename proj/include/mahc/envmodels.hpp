#pragma once

#include <Eigen/Core>
#include <cstdint>
#include <optional>

#include "mahc/rng.hpp"

namespace mahc {

/// Link model parameters. Powers in Watts, offsets in dBm/dB.
struct CommConfig {
  double bandwidth_hz = 1e4;
  double noise_power_w = 1.1e-12;
  /// Lumped P_t + 20 log10(lambda) - 20 log10(4 pi) + G, in dBm.
  double sd_offset_dbm = 6.0;
  double path_loss_slope_db = 20.0;
  /// Standard deviation of the per-transmission shadowing term omega, dB.
  double noise_std_db = 1.0;
  double bits_per_element = 64.0;
  double min_distance_m = 1.0;

  void validate() const;
};

/// Folds transmit power, wavelength and antenna gains into the S_d offset.
double fold_sd_offset(double tx_power_dbm, double wavelength_m, double antenna_gain_dbi);

/// Shifted-exponential compute model: alpha seconds per row floor, beta rate scale.
struct ComputeProfile {
  double beta = 1e4;
  double alpha = 1e-4;
};

struct KinematicState {
  Eigen::Vector2d position = Eigen::Vector2d::Zero();
  Eigen::Vector2d velocity = Eigen::Vector2d::Zero();
};

struct StragglerPlan {
  bool enabled = false;
  std::optional<std::size_t> victim;
  /// Extra sleep as a multiple of the sampled compute time.
  double slowdown_factor = 10.0;
};

double signal_power(double distance_m, double omega_db, const CommConfig& cfg);
double channel_capacity(double distance_m, double omega_db, const CommConfig& cfg);
/// Transmission time for a rows x cols payload at a fixed shadowing value.
double comm_time_at(std::int64_t rows, std::int64_t cols, double distance_m, double omega_db,
                    const CommConfig& cfg);
/// Draws omega ~ N(0, sigma^2) once and returns the transmission time.
double comm_time(std::int64_t rows, std::int64_t cols, double distance_m, RngStream& rng,
                 const CommConfig& cfg);

/// Inverse-CDF of the shifted exponential at quantile u in [0, 1).
double comp_time_quantile(std::int64_t rows, const ComputeProfile& profile, double u);
double comp_time_sample(std::int64_t rows, const ComputeProfile& profile, RngStream& rng);

KinematicState advance(const KinematicState& k, double dt);

double apply_straggler(double t_comp, std::size_t worker_id, const StragglerPlan& plan);

}  // namespace mahc
