#pragma once

#include <Eigen/Dense>

#include "gpslio/geodesy.hpp"

namespace gpslio {

/// Session anchor: UTM coordinates of the first valid GPS fix plus the
/// vehicle's orientation at that moment. Set once per session.
struct Datum {
    UtmCoord utm0;
    double roll0 = 0.0;   // radians, wrapped to (-pi, pi]
    double pitch0 = 0.0;
    double yaw0 = 0.0;
    int zone = 0;
};

struct RigidTransform {
    Eigen::Matrix3d rotation = Eigen::Matrix3d::Identity();
    Eigen::Vector3d translation = Eigen::Vector3d::Zero();

    Eigen::Vector3d apply(const Eigen::Vector3d& p) const { return rotation * p + translation; }
};

/// Build the session datum from the first fix and initial (roll, pitch, yaw).
/// Angles are wrapped to (-pi, pi].
Datum init_datum(const UtmCoord& first_fix, const Eigen::Vector3d& initial_rpy);

/// Enforces the set-exactly-once session contract around a Datum.
class DatumHolder {
public:
    bool is_set() const { return set_; }
    void set(const Datum& d);
    const Datum& get() const;

private:
    Datum datum_{};
    bool set_ = false;
};

/// Forward transform: odom frame -> UTM. Composes the ZYX rotation of the
/// datum orientation with the datum translation.
RigidTransform build_odom_to_utm(const Datum& datum);

/// Inverse transform: UTM -> odom, computed by inverting the forward rigid
/// transform numerically.
RigidTransform build_utm_to_odom(const Datum& datum);

/// Apply the UTM->odom transform to a projected point. Throws on zone mismatch.
Eigen::Vector3d utm_to_odom(const RigidTransform& t_inv, const UtmCoord& p, int datum_zone);

}  // namespace gpslio
