#pragma once

#include <Eigen/Dense>
#include <array>
#include <optional>
#include <vector>

namespace gpslio {

enum class AxisSource { Fusion, Lio };

/// Per-axis variance thresholds for the uncertainty gate.
struct GateThresholds {
    double x = 1.0;   // m^2
    double y = 1.0;
    double z = 1.0;
    double hysteresis_fraction = 0.0;  // >= 0; an axis on LIO returns to fusion
                                       // only once u <= threshold*(1-h)

    double axis(int a) const { return a == 0 ? x : (a == 1 ? y : z); }
};

/// Diagonal of the position block of the published covariance.
struct UncertaintyDiag {
    double var_x = 0.0;
    double var_y = 0.0;
    double var_z = 0.0;

    double axis(int a) const { return a == 0 ? var_x : (a == 1 ? var_y : var_z); }
};

/// Per-axis selection between the fused and the LIO state. Each positional
/// component is bit-for-bit one of the two inputs.
struct GatedPose {
    double timestamp = 0.0;
    Eigen::Vector3d position = Eigen::Vector3d::Zero();
    Eigen::Quaterniond orientation = Eigen::Quaterniond::Identity();  // from LIO
    std::array<AxisSource, 3> source{AxisSource::Fusion, AxisSource::Fusion, AxisSource::Fusion};
    bool uncertainty_was_finite = true;
};

/// Per-axis threshold decision: uncertainty above threshold selects the LIO
/// value, otherwise the fused value (strict '>'). Non-finite uncertainty fails
/// safe to LIO and is flagged. With hysteresis and a previous source, an axis
/// on LIO switches back only below threshold*(1-h).
GatedPose gate(const Eigen::Vector3d& fusion_state, const Eigen::Vector3d& lio_state,
               const UncertaintyDiag& u, const GateThresholds& th,
               const std::optional<std::array<AxisSource, 3>>& prev_sources = std::nullopt);

struct DropoutInterval {
    double start = 0.0;
    double end = 0.0;
    std::array<bool, 3> axes{false, false, false};  // which axes exceeded
};

/// Maximal contiguous intervals of a time-sorted uncertainty series where any
/// axis exceeds its threshold. Interval bounds are the first and last
/// exceeding sample times.
std::vector<DropoutInterval> detect_dropout_intervals(
    const std::vector<std::pair<double, UncertaintyDiag>>& series, const GateThresholds& th);

}  // namespace gpslio
