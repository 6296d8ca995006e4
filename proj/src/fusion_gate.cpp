#include "gpslio/fusion_gate.hpp"

#include <cmath>
#include <stdexcept>

namespace gpslio {

GatedPose gate(const Eigen::Vector3d& fusion_state, const Eigen::Vector3d& lio_state,
               const UncertaintyDiag& u, const GateThresholds& th,
               const std::optional<std::array<AxisSource, 3>>& prev_sources) {
    if (th.x <= 0.0 || th.y <= 0.0 || th.z <= 0.0) {
        throw std::invalid_argument("gate: thresholds must be > 0");
    }
    GatedPose out;
    for (int a = 0; a < 3; ++a) {
        const double ua = u.axis(a);
        bool to_lio;
        if (!std::isfinite(ua)) {
            to_lio = true;  // fail safe
            out.uncertainty_was_finite = false;
        } else if (ua > th.axis(a)) {
            to_lio = true;
        } else if (th.hysteresis_fraction > 0.0 && prev_sources
                   && (*prev_sources)[a] == AxisSource::Lio) {
            // sticky until the uncertainty has dropped clear of the threshold
            to_lio = ua > th.axis(a) * (1.0 - th.hysteresis_fraction);
        } else {
            to_lio = false;
        }
        out.source[a] = to_lio ? AxisSource::Lio : AxisSource::Fusion;
        out.position[a] = to_lio ? lio_state[a] : fusion_state[a];
    }
    return out;
}

std::vector<DropoutInterval> detect_dropout_intervals(
    const std::vector<std::pair<double, UncertaintyDiag>>& series, const GateThresholds& th) {
    std::vector<DropoutInterval> out;
    bool open = false;
    DropoutInterval current;
    for (const auto& [t, u] : series) {
        std::array<bool, 3> exceed{};
        bool any = false;
        for (int a = 0; a < 3; ++a) {
            const double ua = u.axis(a);
            exceed[a] = !std::isfinite(ua) || ua > th.axis(a);
            any = any || exceed[a];
        }
        if (any) {
            if (!open) {
                current = DropoutInterval{t, t, exceed};
                open = true;
            } else {
                current.end = t;
                for (int a = 0; a < 3; ++a) current.axes[a] = current.axes[a] || exceed[a];
            }
        } else if (open) {
            out.push_back(current);
            open = false;
        }
    }
    if (open) out.push_back(current);
    return out;
}

}  // namespace gpslio
