#include "gpslio/state_estimator.hpp"

#include <cmath>
#include <stdexcept>
#include <vector>

#include "gpslio/euler.hpp"

namespace gpslio {

namespace {

constexpr double kGimbalTolerance = 1e-6;
constexpr double kMaxConditionNumber = 1e12;

bool is_angle_state(int i) { return i >= kStateRoll && i <= kStateYaw; }

void check_gimbal(double pitch) {
    if (std::abs(std::abs(pitch) - M_PI / 2.0) < kGimbalTolerance) {
        throw std::domain_error("motion model: pitch at the +-pi/2 gimbal singularity");
    }
}

Eigen::Matrix3d rot_x(double a) {
    Eigen::Matrix3d m;
    m << 1, 0, 0, 0, std::cos(a), -std::sin(a), 0, std::sin(a), std::cos(a);
    return m;
}

Eigen::Matrix3d rot_y(double a) {
    Eigen::Matrix3d m;
    m << std::cos(a), 0, std::sin(a), 0, 1, 0, -std::sin(a), 0, std::cos(a);
    return m;
}

Eigen::Matrix3d rot_z(double a) {
    Eigen::Matrix3d m;
    m << std::cos(a), -std::sin(a), 0, std::sin(a), std::cos(a), 0, 0, 0, 1;
    return m;
}

Eigen::Matrix3d drot_x(double a) {
    Eigen::Matrix3d m;
    m << 0, 0, 0, 0, -std::sin(a), -std::cos(a), 0, std::cos(a), -std::sin(a);
    return m;
}

Eigen::Matrix3d drot_y(double a) {
    Eigen::Matrix3d m;
    m << -std::sin(a), 0, std::cos(a), 0, 0, 0, -std::cos(a), 0, -std::sin(a);
    return m;
}

Eigen::Matrix3d drot_z(double a) {
    Eigen::Matrix3d m;
    m << -std::sin(a), -std::cos(a), 0, std::cos(a), -std::sin(a), 0, 0, 0, 0;
    return m;
}

// d/d(roll) and d/d(pitch) of the Euler rate matrix.
Eigen::Matrix3d deuler_rate_droll(double roll, double pitch) {
    const double sr = std::sin(roll), cr = std::cos(roll);
    const double tp = std::tan(pitch), cp = std::cos(pitch);
    Eigen::Matrix3d m;
    m << 0, cr * tp, -sr * tp,
         0, -sr, -cr,
         0, cr / cp, -sr / cp;
    return m;
}

Eigen::Matrix3d deuler_rate_dpitch(double roll, double pitch) {
    const double sr = std::sin(roll), cr = std::cos(roll);
    const double cp = std::cos(pitch), tp = std::tan(pitch);
    const double sec2 = 1.0 / (cp * cp);
    Eigen::Matrix3d m;
    m << 0, sr * sec2, cr * sec2,
         0, 0, 0,
         0, sr * tp / cp, cr * tp / cp;
    return m;
}

void validate_measurement(const Measurement& m) {
    int popcount = 0;
    for (bool b : m.mask) popcount += b ? 1 : 0;
    if (popcount == 0) throw std::invalid_argument("measurement: empty mask");
    if (m.z.size() != popcount || m.R.rows() != popcount || m.R.cols() != popcount) {
        throw std::invalid_argument("measurement: z/R dimensions do not match mask popcount");
    }
    if (!m.z.allFinite() || !m.R.allFinite()) {
        throw std::invalid_argument("measurement: non-finite entries");
    }
    for (int i = 0; i < popcount; ++i) {
        if (m.R(i, i) <= 0.0) throw std::invalid_argument("measurement: R diagonal must be > 0");
    }
}

}  // namespace

StateVector15 motion_model(const StateVector15& x, double dt) {
    if (dt < 0.0) throw std::invalid_argument("motion_model: dt must be >= 0");
    check_gimbal(x[kStatePitch]);

    const Eigen::Vector3d rpy = x.segment<3>(kStateRoll);
    const Eigen::Vector3d vel = x.segment<3>(kStateVx);
    const Eigen::Vector3d omega = x.segment<3>(kStateVroll);
    const Eigen::Vector3d acc = x.segment<3>(kStateAx);

    const Eigen::Matrix3d r = rotation_zyx(rpy);
    const Eigen::Matrix3d t = euler_rate_matrix(rpy.x(), rpy.y());

    StateVector15 out = x;
    out.segment<3>(kStateX) += r * (vel * dt + 0.5 * acc * dt * dt);
    const Eigen::Vector3d new_rpy = rpy + t * omega * dt;
    for (int i = 0; i < 3; ++i) out[kStateRoll + i] = wrap_angle(new_rpy[i]);
    out.segment<3>(kStateVx) += acc * dt;
    return out;
}

Eigen::Matrix<double, 15, 15> motion_jacobian(const StateVector15& x, double dt) {
    if (dt < 0.0) throw std::invalid_argument("motion_jacobian: dt must be >= 0");
    check_gimbal(x[kStatePitch]);

    const double roll = x[kStateRoll], pitch = x[kStatePitch], yaw = x[kStateYaw];
    const Eigen::Vector3d vel = x.segment<3>(kStateVx);
    const Eigen::Vector3d omega = x.segment<3>(kStateVroll);
    const Eigen::Vector3d acc = x.segment<3>(kStateAx);

    const Eigen::Matrix3d rx = rot_x(roll), ry = rot_y(pitch), rz = rot_z(yaw);
    const Eigen::Matrix3d r = rz * ry * rx;
    const Eigen::Matrix3d dr_droll = rz * ry * drot_x(roll);
    const Eigen::Matrix3d dr_dpitch = rz * drot_y(pitch) * rx;
    const Eigen::Matrix3d dr_dyaw = drot_z(yaw) * ry * rx;

    const Eigen::Matrix3d t = euler_rate_matrix(roll, pitch);
    const Eigen::Matrix3d dt_droll = deuler_rate_droll(roll, pitch);
    const Eigen::Matrix3d dt_dpitch = deuler_rate_dpitch(roll, pitch);

    const Eigen::Vector3d disp = vel * dt + 0.5 * acc * dt * dt;

    Eigen::Matrix<double, 15, 15> f = Eigen::Matrix<double, 15, 15>::Identity();
    // position wrt orientation
    f.block<3, 1>(kStateX, kStateRoll) = dr_droll * disp;
    f.block<3, 1>(kStateX, kStatePitch) = dr_dpitch * disp;
    f.block<3, 1>(kStateX, kStateYaw) = dr_dyaw * disp;
    // position wrt velocity and acceleration
    f.block<3, 3>(kStateX, kStateVx) = r * dt;
    f.block<3, 3>(kStateX, kStateAx) = r * (0.5 * dt * dt);
    // orientation wrt orientation and angular velocity
    f.block<3, 1>(kStateRoll, kStateRoll) += dt_droll * omega * dt;
    f.block<3, 1>(kStateRoll, kStatePitch) += dt_dpitch * omega * dt;
    f.block<3, 3>(kStateRoll, kStateVroll) = t * dt;
    // velocity wrt acceleration
    f.block<3, 3>(kStateVx, kStateAx) = Eigen::Matrix3d::Identity() * dt;
    return f;
}

void predict(StateVector15& x, Covariance15& p, const ProcessNoise& q, double dt) {
    const Eigen::Matrix<double, 15, 15> f = motion_jacobian(x, dt);
    x = motion_model(x, dt);
    p = f * p * f.transpose() + q * dt;
    p = 0.5 * (p + p.transpose()).eval();
}

CorrectResult correct(StateVector15& x, Covariance15& p, const Measurement& m) {
    validate_measurement(m);

    std::vector<int> idx;
    idx.reserve(15);
    for (int i = 0; i < 15; ++i) {
        if (m.mask[i]) idx.push_back(i);
    }
    const int n = static_cast<int>(idx.size());

    Eigen::MatrixXd pht(15, n);   // P * H^T
    Eigen::MatrixXd s(n, n);      // H * P * H^T + R
    for (int j = 0; j < n; ++j) pht.col(j) = p.col(idx[j]);
    for (int i = 0; i < n; ++i) {
        for (int j = 0; j < n; ++j) s(i, j) = p(idx[i], idx[j]);
    }
    s += m.R;

    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> eig(s);
    const double lmin = eig.eigenvalues().minCoeff();
    const double lmax = eig.eigenvalues().maxCoeff();
    if (lmin <= 0.0 || lmax / lmin > kMaxConditionNumber) {
        return {false};
    }

    const Eigen::MatrixXd k = s.ldlt().solve(pht.transpose()).transpose();

    Eigen::VectorXd innovation(n);
    for (int j = 0; j < n; ++j) {
        double r = m.z[j] - x[idx[j]];
        if (is_angle_state(idx[j])) r = wrap_angle(r);
        innovation[j] = r;
    }

    x += k * innovation;
    for (int i = kStateRoll; i <= kStateYaw; ++i) x[i] = wrap_angle(x[i]);

    // Joseph form: (I - KH) P (I - KH)^T + K R K^T, with H a pure selection.
    Eigen::Matrix<double, 15, 15> ikh = Eigen::Matrix<double, 15, 15>::Identity();
    for (int j = 0; j < n; ++j) ikh.col(idx[j]) -= k.col(j);
    p = ikh * p * ikh.transpose() + k * m.R * k.transpose();
    p = 0.5 * (p + p.transpose()).eval();
    return {true};
}

Measurement make_gps_measurement(const Eigen::Vector3d& p_odom, const Eigen::Matrix3d& cov3,
                                 double t) {
    if (!p_odom.allFinite() || !cov3.allFinite() || !std::isfinite(t)) {
        throw std::invalid_argument("gps measurement: non-finite entries");
    }
    for (int i = 0; i < 3; ++i) {
        if (cov3(i, i) <= 0.0) {
            throw std::invalid_argument("gps measurement: covariance diagonal must be > 0");
        }
    }
    Measurement m;
    m.timestamp = t;
    m.source = MeasurementSource::Gps;
    m.mask[kStateX] = m.mask[kStateY] = m.mask[kStateZ] = true;
    m.z = p_odom;
    m.R = cov3;
    return m;
}

Measurement make_imu_measurement(const ImuSample& s) {
    Measurement m;
    m.timestamp = s.timestamp;
    m.source = MeasurementSource::Imu;
    for (int i = kStateRoll; i <= kStateYaw; ++i) m.mask[i] = true;
    for (int i = kStateVroll; i <= kStateVyaw; ++i) m.mask[i] = true;
    for (int i = kStateAx; i <= kStateAz; ++i) m.mask[i] = true;

    m.z.resize(9);
    m.z.segment<3>(0) = s.rpy;
    m.z.segment<3>(3) = s.angular_velocity;
    m.z.segment<3>(6) = s.linear_acceleration;

    m.R = Eigen::MatrixXd::Zero(9, 9);
    m.R.block<3, 3>(0, 0) = s.rpy_covariance;
    m.R.block<3, 3>(3, 3) = s.angular_velocity_covariance;
    m.R.block<3, 3>(6, 6) = s.linear_acceleration_covariance;

    if (!m.z.allFinite() || !m.R.allFinite()) {
        throw std::invalid_argument("imu measurement: non-finite entries");
    }
    return m;
}

Ekf15::Ekf15(const StateVector15& x0, const Covariance15& p0, const ProcessNoise& q, double t0,
             double stale_tolerance)
    : x_(x0), p_(p0), q_(q), time_(t0), stale_tolerance_(stale_tolerance) {}

void Ekf15::predict_to(double t) {
    if (t <= time_) return;
    predict(x_, p_, q_, t - time_);
    time_ = t;
}

CorrectResult Ekf15::process(const Measurement& m) {
    if (m.timestamp < time_ - stale_tolerance_) {
        ++dropped_stale_;
        return {false};
    }
    predict_to(m.timestamp);
    const CorrectResult r = correct(x_, p_, m);
    if (!r.applied) ++skipped_singular_;
    return r;
}

}  // namespace gpslio
