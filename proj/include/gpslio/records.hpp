#pragma once

#include <Eigen/Dense>
#include <cstddef>
#include <iosfwd>
#include <stdexcept>
#include <string>
#include <variant>
#include <vector>

#include "gpslio/geodesy.hpp"
#include "gpslio/state_estimator.hpp"

namespace gpslio {

/// Pose estimate from the LiDAR-inertial odometry front end, consumed as an
/// opaque input stream in its own odom frame.
struct LioOdometry {
    double timestamp = 0.0;
    Eigen::Vector3d position = Eigen::Vector3d::Zero();
    Eigen::Quaterniond orientation = Eigen::Quaterniond::Identity();
    Eigen::Matrix<double, 6, 6> pose_covariance = Eigen::Matrix<double, 6, 6>::Zero();
};

/// Ground-truth sample; present only in simulation logs.
struct TruthSample {
    double timestamp = 0.0;
    Eigen::Vector3d position = Eigen::Vector3d::Zero();   // odom frame
    Eigen::Vector3d rpy = Eigen::Vector3d::Zero();        // rad
    Eigen::Vector3d velocity = Eigen::Vector3d::Zero();   // m/s, odom frame
    Eigen::Vector3d acceleration = Eigen::Vector3d::Zero();  // m/s^2, odom frame
};

/// Timestamped tagged union of the four log entry kinds.
struct SensorRecord {
    double timestamp = 0.0;
    std::variant<GeoFix, ImuSample, LioOdometry, TruthSample> payload;

    bool is_gps() const { return std::holds_alternative<GeoFix>(payload); }
    bool is_imu() const { return std::holds_alternative<ImuSample>(payload); }
    bool is_lio() const { return std::holds_alternative<LioOdometry>(payload); }
    bool is_truth() const { return std::holds_alternative<TruthSample>(payload); }

    /// Tie-break priority at equal timestamps: IMU before GPS before LIO
    /// (differential before absolute); truth records sort last.
    int type_priority() const {
        if (is_imu()) return 0;
        if (is_gps()) return 1;
        if (is_lio()) return 2;
        return 3;
    }
};

/// One LiDAR scan: landmark ids and their body-frame coordinates.
struct Scan {
    double timestamp = 0.0;
    std::vector<int> ids;
    std::vector<Eigen::Vector3d> points;
};

struct ParseError : std::runtime_error {
    ParseError(std::size_t line_number, const std::string& what)
        : std::runtime_error("line " + std::to_string(line_number) + ": " + what),
          line(line_number) {}
    std::size_t line;
};

/// Serialize one record as a single JSON line (no trailing newline).
std::string record_to_jsonl(const SensorRecord& rec);

/// Parse one JSON line into a record. Throws ParseError with the given line
/// number on malformed input.
SensorRecord record_from_jsonl(const std::string& line, std::size_t line_number);

/// Read a whole JSONL log. Validates that timestamps are non-decreasing and
/// throws ParseError at the first violation.
std::vector<SensorRecord> read_jsonl_log(std::istream& in);
std::vector<SensorRecord> read_jsonl_log_file(const std::string& path);

void write_jsonl_log(std::ostream& out, const std::vector<SensorRecord>& records);
void write_jsonl_log_file(const std::string& path, const std::vector<SensorRecord>& records);

std::string scan_to_jsonl(const Scan& scan);
Scan scan_from_jsonl(const std::string& line, std::size_t line_number);
std::vector<Scan> read_scan_file(const std::string& path);
void write_scan_file(const std::string& path, const std::vector<Scan>& scans);

/// Stable merge of per-sensor streams into a single timestamp-ordered log,
/// breaking ties by type priority (IMU, GPS, LIO, truth).
std::vector<SensorRecord> merge_records(std::vector<std::vector<SensorRecord>> streams);

}  // namespace gpslio
