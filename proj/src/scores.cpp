#include "tirpforge/scores.hpp"

namespace tirpforge {

BedsideScore qsofa_score(double respiratory_rate, double systolic_bp, double gcs) {
  int score = 0;
  if (respiratory_rate >= 22) ++score;
  if (systolic_bp <= 100) ++score;
  if (gcs < 15) ++score;
  return {score, score >= 2};
}

BedsideScore sirs_score(double temperature, double heart_rate, double respiratory_rate,
                        std::optional<double> paco2, double wbc,
                        std::optional<double> immature_bands_pct) {
  int score = 0;
  if (temperature > 38 || temperature < 36) ++score;
  if (heart_rate > 90) ++score;
  if (respiratory_rate > 20 || (paco2 && *paco2 < 32)) ++score;
  if (wbc > 12 || wbc < 4 || (immature_bands_pct && *immature_bands_pct > 10)) ++score;
  return {score, score >= 2};
}

}  // namespace tirpforge
