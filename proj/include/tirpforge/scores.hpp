#pragma once

#include <optional>

namespace tirpforge {

struct BedsideScore {
  int score = 0;
  bool positive = false;
};

/// qSOFA: respiratory rate >= 22/min, systolic BP <= 100 mmHg, GCS < 15.
/// Positive at two or more points.
BedsideScore qsofa_score(double respiratory_rate, double systolic_bp, double gcs);

/// SIRS criteria, one point each:
///   temperature > 38 or < 36 C; heart rate > 90/min;
///   respiratory rate > 20/min or PaCO2 < 32 mmHg;
///   WBC > 12 or < 4 (x10^9/L, i.e. thousands/mm^3) or immature bands > 10%.
/// Absent PaCO2/bands are not evaluated. Positive at two or more points.
BedsideScore sirs_score(double temperature, double heart_rate, double respiratory_rate,
                        std::optional<double> paco2, double wbc,
                        std::optional<double> immature_bands_pct);

}  // namespace tirpforge
