#ifndef KINSHOCK_PRESETS_HPP_
#define KINSHOCK_PRESETS_HPP_

#include "kinshock/model.hpp"

namespace kinshock {

struct PresetInfo {
  std::string name;
  int default_p = 0;  // default characteristic index for scenarios
};

/// Named models used throughout the test and CLI surfaces:
///   demo-m0    r=2, n=8 noncharacteristic
///   demo-m1    r=2, n=10 simple genuinely nonlinear zero characteristic
///   boltz-like r=5, n=24, spectrum from xi/<xi> velocities
///   sing-k     r=2, n=6 scaling family, min |eig A| = 2^-k, k = 1..12
KineticModel make_preset(const std::string& name);

/// Preset registry (sing-k listed for k = 1..12).
std::vector<PresetInfo> preset_models();

/// Default characteristic index of a preset (the one nearest zero speed).
int preset_default_p(const std::string& name);

}  // namespace kinshock

#endif  // KINSHOCK_PRESETS_HPP_
