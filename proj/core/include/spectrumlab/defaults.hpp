#pragma once

namespace spectrumlab::defaults {

// Geometry. Square regions; TBSs on a fixed grid inside the region, UAV at the
// region centre. Values keep inter-node distances realistic at 28 GHz.
inline constexpr double kRegionHalfExtentM = 500.0;
inline constexpr double kUavStepM = 10.0;
inline constexpr double kUserJitterSigmaM = 1.0;

// Transmit power. TBSs carry high-power transmitters, UAVs low-power ones.
inline constexpr double kSatPowerW = 50.0;
inline constexpr double kTbsPowerW = 10.0;
inline constexpr double kUavPowerW = 2.0;

// Link budget.  Serving links at 28 GHz carry a combined Tx/Rx antenna gain;
// free-space loss alone would leave Ka-band links power-starved.
inline constexpr double kAtmosphericLossSatDb = 1.0;
inline constexpr double kServingAntennaGainDb = 20.0;
inline constexpr double kNoiseTemperatureK = 290.0;
inline constexpr double kNoiseFigureDb = 7.0;

// Scoring.
inline constexpr double kSeCapBitsPerHz = 10.0;  // normalisation cap for E
inline constexpr double kRMinBps = 1e7;          // per-user QoS floor
inline constexpr double kClampPenalty = 0.1;     // per clamped action
inline constexpr double kMobilityPenaltyScaleM = 100.0;

// NOMA.
inline constexpr int kMaxClusterSize = 4;

// Observation layout.
inline constexpr int kMaxUsersPerNodeObs = 16;  // per-user slots in local obs

}  // namespace spectrumlab::defaults
