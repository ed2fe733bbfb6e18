#include "mahc/envmodels.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <string>

#include "mahc/errors.hpp"

namespace mahc {

void CommConfig::validate() const {
  if (!(bandwidth_hz > 0)) throw ConfigError("comm.bandwidth_hz: must be positive");
  if (!(noise_power_w > 0)) throw ConfigError("comm.noise_power_w: must be positive");
  if (!(noise_std_db >= 0)) throw ConfigError("comm.noise_std_db: must be non-negative");
  if (!(bits_per_element > 0)) throw ConfigError("comm.bits_per_element: must be positive");
  if (!(min_distance_m > 0)) throw ConfigError("comm.min_distance_m: must be positive");
}

double fold_sd_offset(double tx_power_dbm, double wavelength_m, double antenna_gain_dbi) {
  return tx_power_dbm + 20.0 * std::log10(wavelength_m) - 20.0 * std::log10(4.0 * std::numbers::pi) +
         antenna_gain_dbi;
}

double signal_power(double distance_m, double omega_db, const CommConfig& cfg) {
  const double d = std::max(distance_m, cfg.min_distance_m);
  const double sd = cfg.sd_offset_dbm - cfg.path_loss_slope_db * std::log10(d) + omega_db;
  return std::pow(10.0, (sd - 30.0) / 10.0);
}

double channel_capacity(double distance_m, double omega_db, const CommConfig& cfg) {
  return cfg.bandwidth_hz * std::log2(1.0 + signal_power(distance_m, omega_db, cfg) / cfg.noise_power_w);
}

double comm_time_at(std::int64_t rows, std::int64_t cols, double distance_m, double omega_db,
                    const CommConfig& cfg) {
  if (rows < 1 || cols < 1) throw InvalidInput("comm_time: empty payload");
  const double bits = static_cast<double>(rows) * static_cast<double>(cols) * cfg.bits_per_element;
  return bits / channel_capacity(distance_m, omega_db, cfg);
}

double comm_time(std::int64_t rows, std::int64_t cols, double distance_m, RngStream& rng,
                 const CommConfig& cfg) {
  const double omega = sample_gaussian(0.0, cfg.noise_std_db, rng);
  return comm_time_at(rows, cols, distance_m, omega, cfg);
}

double comp_time_quantile(std::int64_t rows, const ComputeProfile& profile, double u) {
  if (rows < 1) throw InvalidInput("comp_time_sample: rows must be positive");
  const double l = static_cast<double>(rows);
  return profile.alpha * l - (l / profile.beta) * std::log1p(-u);
}

double comp_time_sample(std::int64_t rows, const ComputeProfile& profile, RngStream& rng) {
  return comp_time_quantile(rows, profile, rng.next_double());
}

KinematicState advance(const KinematicState& k, double dt) {
  if (!(dt >= 0)) throw InvalidInput("advance: negative time step " + std::to_string(dt));
  return {k.position + k.velocity * dt, k.velocity};
}

double apply_straggler(double t_comp, std::size_t worker_id, const StragglerPlan& plan) {
  if (plan.enabled && plan.victim && *plan.victim == worker_id) return t_comp * (1.0 + plan.slowdown_factor);
  return t_comp;
}

}  // namespace mahc
