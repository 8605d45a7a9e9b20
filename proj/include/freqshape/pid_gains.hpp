#pragma once

namespace freqshape {

/// Inverter frequency controller w_vsi = -(kp + ki/s + kd s) p_vsi.
struct PidGains {
  double kp = 0.0;
  double ki = 0.0;
  double kd = 0.0;  ///< may be negative (non-minimum-phase controller)

  friend bool operator==(const PidGains&, const PidGains&) = default;
};

}  // namespace freqshape
