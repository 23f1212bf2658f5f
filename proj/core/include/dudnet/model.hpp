#pragma once

#include <optional>

namespace dudnet::model {

enum class AssociationCase { case1, case2, case3, case4 };
enum class Tier { mcell, scell };
enum class LinkDirection { uplink, downlink };

inline int case_number(AssociationCase c) {
  switch (c) {
    case AssociationCase::case1: return 1;
    case AssociationCase::case2: return 2;
    case AssociationCase::case3: return 3;
    default: return 4;
  }
}

double db_to_linear(double x_db);

// Physical parameters of the two-tier network. Powers in dBm, gains in dBi,
// densities in points per square meter, bandwidths in Hz, distances in m.
struct NetworkConfig {
  double p_m_dbm = 46.0;  // Mcell downlink transmit power
  double p_s_dbm = 20.0;  // Scell downlink transmit power
  double q_m_dbm = 20.0;  // UE uplink power toward Mcell
  double q_s_dbm = 20.0;  // UE uplink power toward Scell
  double g_m_dbi = 0.0;   // Mcell antenna gain
  double g_s_dbi = 18.0;  // Scell antenna gain
  double alpha_m = 3.0;   // sub-6GHz pathloss exponent (> 2)
  double alpha_s = 4.0;   // mmW pathloss exponent (>= 2)
  double lambda_m = 1e-6;
  double lambda_s = 1e-5;
  // Uplink interferer density; negative means "default to lambda_m".
  double lambda_iu = -1.0;
  double noise_m_dbm = 0.0;
  double noise_s_dbm = 0.0;
  double w_m = 1.0;
  double w_s = 1.0;
  // Simulation disk radius; non-positive means 10/sqrt(pi*lambda_m).
  double mu = 0.0;
  double shadow_sigma_db = 0.0;
  // UE density of the model statement; carried but used by no expression.
  std::optional<double> lambda_u;

  static NetworkConfig nlos_default();
  static NetworkConfig los_default();

  // Linear-unit composites.
  double p_bar_m() const { return db_to_linear(p_m_dbm) * db_to_linear(g_m_dbi); }
  double p_bar_s() const { return db_to_linear(p_s_dbm) * db_to_linear(g_s_dbi); }
  double q_bar_m() const { return db_to_linear(q_m_dbm) * db_to_linear(g_m_dbi); }
  double q_bar_s() const { return db_to_linear(q_s_dbm) * db_to_linear(g_s_dbi); }
  double noise_m() const { return db_to_linear(noise_m_dbm); }
  double noise_s() const { return db_to_linear(noise_s_dbm); }
  double lambda_iu_effective() const {
    return lambda_iu < 0.0 ? lambda_m : lambda_iu;
  }
  double mu_effective() const;

  // Throws ConfigError when an invariant is violated.
  void validate() const;
};

// The xi / beta / z symbols derived from a NetworkConfig. xi5 depends on t
// through the interference exponent G(t), so it is exposed as a function of
// the already-evaluated G value.
struct DerivedParams {
  double z1 = 0.0, z2 = 0.0;
  double xi1 = 0.0, xi2 = 0.0, xi3 = 0.0, xi4 = 0.0, xi6 = 0.0;
  double beta1 = 0.0, beta2 = 0.0, beta3 = 0.0;
  double beta4 = 0.0, beta5 = 0.0, beta6 = 0.0;
  double lambda_m = 0.0;

  double xi5(double g_value, double lambda_int) const;
};

DerivedParams derive(const NetworkConfig& cfg);

}  // namespace dudnet::model
