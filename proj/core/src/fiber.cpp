#include "qli/fiber.hpp"

#include <cmath>
#include <numbers>
#include <string>

#include "qli/errors.hpp"

namespace qli {

void FiberSpec::validate() const {
  if (!(attenuation_db_per_km >= 0.0)) {
    throw Error(ErrorCode::Domain, "fiber attenuation must be >= 0 dB/km");
  }
  if (!(length_km > 0.0)) {
    throw Error(ErrorCode::Domain, "fiber length must be > 0 km");
  }
  if (!std::isfinite(dispersion_ps_per_nm_km)) {
    throw Error(ErrorCode::Domain, "fiber dispersion must be finite");
  }
}

double FiberSpec::attenuation_per_km() const {
  return attenuation_db_per_km * std::numbers::ln10 / 10.0;
}

double PathBudget::quantum_transmittance() const {
  return transmittance(fiber.attenuation_db_per_km, fiber.length_km,
                       quantum_insertion_loss_db);
}

double transmittance(double alpha_db_per_km, double length_km, double extra_db) {
  if (!(alpha_db_per_km >= 0.0) || !(length_km >= 0.0) || !(extra_db >= 0.0)) {
    throw Error(ErrorCode::Domain, "transmittance inputs must be non-negative");
  }
  return std::pow(10.0, -(alpha_db_per_km * length_km + extra_db) / 10.0);
}

double walk_off_delay_ps(const FiberSpec& fiber, double lambda_c_nm, double lambda_q_nm) {
  if (!(lambda_c_nm > 0.0) || !(lambda_q_nm > 0.0)) {
    throw Error(ErrorCode::Domain, "wavelengths must be positive");
  }
  return std::abs(fiber.dispersion_ps_per_nm_km) * fiber.length_km *
         std::abs(lambda_c_nm - lambda_q_nm);
}

Power raman_noise_power(Power launch, const FiberSpec& fiber, double beta_per_km_ghz,
                        double filter_bw_ghz) {
  if (!(beta_per_km_ghz >= 0.0) || !(filter_bw_ghz >= 0.0) || !(fiber.length_km >= 0.0)) {
    throw Error(ErrorCode::Domain, "Raman noise inputs must be non-negative");
  }
  const double L = fiber.length_km;
  return Power::from_mw(launch.mw() * std::exp(-fiber.attenuation_per_km() * L) *
                        beta_per_km_ghz * L * filter_bw_ghz);
}

double expected_noise_clicks(Power noise_at_receiver, double lambda_q_nm, double gate_ns,
                             double eta_d, double window_weight) {
  if (!(gate_ns >= 0.0) || !(eta_d >= 0.0 && eta_d <= 1.0) || !(window_weight >= 0.0)) {
    throw Error(ErrorCode::Domain, "noise-per-gate inputs out of domain");
  }
  const double photons_per_s = noise_at_receiver.watts() / photon_energy_j(lambda_q_nm);
  return photons_per_s * gate_ns * 1e-9 * eta_d * window_weight;
}

double noise_prob_per_gate(Power noise_at_receiver, double lambda_q_nm, double gate_ns,
                           double eta_d, double window_weight) {
  const double p =
      expected_noise_clicks(noise_at_receiver, lambda_q_nm, gate_ns, eta_d, window_weight);
  if (p > 1.0) {
    throw Error(ErrorCode::ModelBreakdown,
                "noise probability per gate " + std::to_string(p) +
                    " exceeds 1; single-click gate model no longer applies");
  }
  return p;
}

}  // namespace qli
