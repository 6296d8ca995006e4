#pragma once

#include <Eigen/Dense>
#include <cmath>

namespace gpslio {

/// Wrap an angle to (-pi, pi].
inline double wrap_angle(double a) {
    a = std::fmod(a, 2.0 * M_PI);
    if (a > M_PI) a -= 2.0 * M_PI;
    if (a <= -M_PI) a += 2.0 * M_PI;
    return a;
}

/// Body-to-world rotation from intrinsic ZYX angles: R = Rz(yaw)*Ry(pitch)*Rx(roll).
/// Convention is ENU with x=east, y=north, z=up; yaw 0 faces east, CCW positive.
inline Eigen::Matrix3d rotation_zyx(double roll, double pitch, double yaw) {
    return (Eigen::AngleAxisd(yaw, Eigen::Vector3d::UnitZ())
            * Eigen::AngleAxisd(pitch, Eigen::Vector3d::UnitY())
            * Eigen::AngleAxisd(roll, Eigen::Vector3d::UnitX())).toRotationMatrix();
}

inline Eigen::Matrix3d rotation_zyx(const Eigen::Vector3d& rpy) {
    return rotation_zyx(rpy.x(), rpy.y(), rpy.z());
}

/// Euler angle rates from body angular velocity: d(rpy)/dt = T(roll,pitch) * omega_body.
/// Singular at pitch = +-pi/2.
inline Eigen::Matrix3d euler_rate_matrix(double roll, double pitch) {
    const double sr = std::sin(roll), cr = std::cos(roll);
    const double tp = std::tan(pitch), cp = std::cos(pitch);
    Eigen::Matrix3d t;
    t << 1.0, sr * tp, cr * tp,
         0.0, cr, -sr,
         0.0, sr / cp, cr / cp;
    return t;
}

/// Inverse of euler_rate_matrix: omega_body = T^{-1} * d(rpy)/dt.
inline Eigen::Matrix3d euler_rate_matrix_inverse(double roll, double pitch) {
    const double sr = std::sin(roll), cr = std::cos(roll);
    const double sp = std::sin(pitch), cp = std::cos(pitch);
    Eigen::Matrix3d t;
    t << 1.0, 0.0, -sp,
         0.0, cr, sr * cp,
         0.0, -sr, cr * cp;
    return t;
}

/// Roll/pitch/yaw (ZYX) from a rotation matrix, pitch in (-pi/2, pi/2) away
/// from the singularity.
inline Eigen::Vector3d rpy_from_rotation(const Eigen::Matrix3d& r) {
    const double pitch = std::asin(std::clamp(-r(2, 0), -1.0, 1.0));
    const double roll = std::atan2(r(2, 1), r(2, 2));
    const double yaw = std::atan2(r(1, 0), r(0, 0));
    return {roll, pitch, yaw};
}

inline Eigen::Quaterniond quaternion_from_rpy(const Eigen::Vector3d& rpy) {
    return Eigen::Quaterniond(rotation_zyx(rpy));
}

}  // namespace gpslio
