#include "gpslio/frame_transform.hpp"

#include <stdexcept>

#include "gpslio/euler.hpp"

namespace gpslio {

Datum init_datum(const UtmCoord& first_fix, const Eigen::Vector3d& initial_rpy) {
    Datum d;
    d.utm0 = first_fix;
    d.roll0 = wrap_angle(initial_rpy.x());
    d.pitch0 = wrap_angle(initial_rpy.y());
    d.yaw0 = wrap_angle(initial_rpy.z());
    d.zone = first_fix.zone;
    return d;
}

void DatumHolder::set(const Datum& d) {
    if (set_) {
        throw std::logic_error("DatumHolder: datum already initialized for this session");
    }
    datum_ = d;
    set_ = true;
}

const Datum& DatumHolder::get() const {
    if (!set_) {
        throw std::logic_error("DatumHolder: datum not initialized");
    }
    return datum_;
}

RigidTransform build_odom_to_utm(const Datum& datum) {
    RigidTransform t;
    t.rotation = rotation_zyx(datum.roll0, datum.pitch0, datum.yaw0);
    t.translation = {datum.utm0.easting, datum.utm0.northing, datum.utm0.altitude};
    return t;
}

RigidTransform build_utm_to_odom(const Datum& datum) {
    const RigidTransform fwd = build_odom_to_utm(datum);
    Eigen::Isometry3d iso = Eigen::Isometry3d::Identity();
    iso.linear() = fwd.rotation;
    iso.translation() = fwd.translation;
    const Eigen::Isometry3d inv = iso.inverse();
    RigidTransform t;
    t.rotation = inv.linear();
    t.translation = inv.translation();
    return t;
}

Eigen::Vector3d utm_to_odom(const RigidTransform& t_inv, const UtmCoord& p, int datum_zone) {
    if (p.zone != datum_zone) {
        throw std::invalid_argument("utm_to_odom: point projected in zone "
                                    + std::to_string(p.zone) + " but datum zone is "
                                    + std::to_string(datum_zone));
    }
    return t_inv.apply({p.easting, p.northing, p.altitude});
}

}  // namespace gpslio
