#pragma once

#include <Eigen/Dense>
#include <array>
#include <cstdint>

namespace gpslio {

/// Indices into the 15-state vector.
/// Position and orientation are in the odom frame; linear velocity, angular
/// velocity, and linear acceleration are body-frame quantities.
enum StateIndex : int {
    kStateX = 0,
    kStateY,
    kStateZ,
    kStateRoll,
    kStatePitch,
    kStateYaw,
    kStateVx,
    kStateVy,
    kStateVz,
    kStateVroll,
    kStateVpitch,
    kStateVyaw,
    kStateAx,
    kStateAy,
    kStateAz,
    kStateCount  // 15
};

using StateVector15 = Eigen::Matrix<double, 15, 1>;
using Covariance15 = Eigen::Matrix<double, 15, 15>;
using ProcessNoise = Eigen::Matrix<double, 15, 15>;

enum class MeasurementSource { Gps, Imu, Lio };

/// A masked observation of a subset of the 15 states.
struct Measurement {
    double timestamp = 0.0;
    std::array<bool, 15> mask{};     // which states are observed
    Eigen::VectorXd z;               // observed values, length = popcount(mask)
    Eigen::MatrixXd R;               // covariance of z
    MeasurementSource source = MeasurementSource::Gps;

    int dim() const { return static_cast<int>(z.size()); }
};

/// One IMU sample: orientation from the device's attitude solution, body
/// angular rates, and body linear acceleration with gravity already removed.
struct ImuSample {
    double timestamp = 0.0;
    Eigen::Vector3d rpy = Eigen::Vector3d::Zero();            // rad
    Eigen::Vector3d angular_velocity = Eigen::Vector3d::Zero();   // rad/s, body
    Eigen::Vector3d linear_acceleration = Eigen::Vector3d::Zero();  // m/s^2, body, gravity removed
    Eigen::Matrix3d rpy_covariance = Eigen::Matrix3d::Zero();
    Eigen::Matrix3d angular_velocity_covariance = Eigen::Matrix3d::Zero();
    Eigen::Matrix3d linear_acceleration_covariance = Eigen::Matrix3d::Zero();
};

/// Constant-acceleration 3-D kinematic step over dt. Body velocity and
/// acceleration are rotated into the odom frame through the current
/// orientation; orientation integrates the body rates through the Euler rate
/// matrix. Throws std::domain_error near the pitch = +-pi/2 singularity.
StateVector15 motion_model(const StateVector15& x, double dt);

/// Analytic Jacobian of motion_model with respect to the state.
Eigen::Matrix<double, 15, 15> motion_jacobian(const StateVector15& x, double dt);

/// EKF time update. Q is a per-unit-time rate and is scaled by dt.
void predict(StateVector15& x, Covariance15& p, const ProcessNoise& q, double dt);

struct CorrectResult {
    bool applied = false;   // false when the innovation covariance was singular
};

/// EKF measurement update (Joseph form). Angular residuals are wrapped to
/// (-pi, pi]; the covariance is resymmetrized. Returns applied=false and
/// leaves x, p untouched when the innovation covariance condition number
/// exceeds 1e12.
CorrectResult correct(StateVector15& x, Covariance15& p, const Measurement& m);

/// Position-only GPS measurement (mask X, Y, Z). cov3 is the message
/// covariance already rotated into odom axes. Throws std::invalid_argument on
/// non-finite entries or a non-positive covariance diagonal.
Measurement make_gps_measurement(const Eigen::Vector3d& p_odom, const Eigen::Matrix3d& cov3,
                                 double t);

/// IMU measurement: orientation, body rates, and body accelerations
/// (mask roll..yaw, roll'..yaw', X''..Z'').
Measurement make_imu_measurement(const ImuSample& s);

/// Sequential-consumer wrapper owning filter state, time, and drop counters.
class Ekf15 {
public:
    Ekf15() = default;
    Ekf15(const StateVector15& x0, const Covariance15& p0, const ProcessNoise& q, double t0,
          double stale_tolerance = 0.1);

    /// Predict forward to t (no-op when t <= current time).
    void predict_to(double t);

    /// Predict to the measurement time and correct. Measurements older than
    /// the filter time by more than the stale tolerance are dropped;
    /// measurements within the tolerance are applied at the current time.
    CorrectResult process(const Measurement& m);

    const StateVector15& state() const { return x_; }
    const Covariance15& covariance() const { return p_; }
    double time() const { return time_; }
    Eigen::Vector3d position() const { return x_.head<3>(); }
    Eigen::Vector3d position_variance() const { return p_.diagonal().head<3>(); }

    std::uint64_t dropped_stale() const { return dropped_stale_; }
    std::uint64_t skipped_singular() const { return skipped_singular_; }

private:
    StateVector15 x_ = StateVector15::Zero();
    Covariance15 p_ = Covariance15::Identity();
    ProcessNoise q_ = ProcessNoise::Identity();
    double time_ = 0.0;
    double stale_tolerance_ = 0.1;
    std::uint64_t dropped_stale_ = 0;
    std::uint64_t skipped_singular_ = 0;
};

}  // namespace gpslio
