#include "gpslio/records.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <limits>
#include <sstream>

#include <json.hpp>

namespace gpslio {

namespace {

using nlohmann::json;

json mat_to_json(const Eigen::Ref<const Eigen::MatrixXd>& m) {
    json a = json::array();
    for (int r = 0; r < m.rows(); ++r) {
        for (int c = 0; c < m.cols(); ++c) a.push_back(m(r, c));
    }
    return a;
}

json vec3_to_json(const Eigen::Vector3d& v) { return json::array({v.x(), v.y(), v.z()}); }

Eigen::Vector3d vec3_from_json(const json& a) {
    if (!a.is_array() || a.size() != 3) throw std::runtime_error("expected 3-element array");
    return {a[0].get<double>(), a[1].get<double>(), a[2].get<double>()};
}

template <int N>
Eigen::Matrix<double, N, N> mat_from_json(const json& a) {
    if (!a.is_array() || a.size() != static_cast<std::size_t>(N * N)) {
        throw std::runtime_error("expected " + std::to_string(N * N) + "-element row-major array");
    }
    Eigen::Matrix<double, N, N> m;
    for (int r = 0; r < N; ++r) {
        for (int c = 0; c < N; ++c) m(r, c) = a[r * N + c].get<double>();
    }
    return m;
}

}  // namespace

std::string record_to_jsonl(const SensorRecord& rec) {
    json j;
    j["t"] = rec.timestamp;
    if (rec.is_gps()) {
        const auto& g = std::get<GeoFix>(rec.payload);
        j["type"] = "gps";
        j["lat"] = g.latitude;
        j["lon"] = g.longitude;
        j["alt"] = g.altitude;
        j["cov"] = mat_to_json(g.position_covariance);
        j["fix"] = g.fix_valid;
    } else if (rec.is_imu()) {
        const auto& s = std::get<ImuSample>(rec.payload);
        j["type"] = "imu";
        j["rpy"] = vec3_to_json(s.rpy);
        j["ang_vel"] = vec3_to_json(s.angular_velocity);
        j["lin_acc"] = vec3_to_json(s.linear_acceleration);
        j["rpy_cov"] = mat_to_json(s.rpy_covariance);
        j["ang_vel_cov"] = mat_to_json(s.angular_velocity_covariance);
        j["lin_acc_cov"] = mat_to_json(s.linear_acceleration_covariance);
    } else if (rec.is_lio()) {
        const auto& l = std::get<LioOdometry>(rec.payload);
        j["type"] = "lio";
        j["pos"] = vec3_to_json(l.position);
        j["quat"] = json::array({l.orientation.x(), l.orientation.y(), l.orientation.z(),
                                 l.orientation.w()});
        j["cov"] = mat_to_json(l.pose_covariance);
    } else {
        const auto& s = std::get<TruthSample>(rec.payload);
        j["type"] = "truth";
        j["pos"] = vec3_to_json(s.position);
        j["rpy"] = vec3_to_json(s.rpy);
        j["vel"] = vec3_to_json(s.velocity);
        j["acc"] = vec3_to_json(s.acceleration);
    }
    return j.dump();
}

SensorRecord record_from_jsonl(const std::string& line, std::size_t line_number) {
    json j;
    try {
        j = json::parse(line);
    } catch (const json::parse_error& e) {
        throw ParseError(line_number, std::string("invalid JSON: ") + e.what());
    }
    try {
        SensorRecord rec;
        rec.timestamp = j.at("t").get<double>();
        if (!std::isfinite(rec.timestamp)) throw std::runtime_error("non-finite timestamp");
        const std::string type = j.at("type").get<std::string>();
        if (type == "gps") {
            GeoFix g;
            g.timestamp = rec.timestamp;
            g.latitude = j.at("lat").get<double>();
            g.longitude = j.at("lon").get<double>();
            g.altitude = j.at("alt").get<double>();
            g.position_covariance = mat_from_json<3>(j.at("cov"));
            g.fix_valid = j.value("fix", true);
            rec.payload = g;
        } else if (type == "imu") {
            ImuSample s;
            s.timestamp = rec.timestamp;
            s.rpy = vec3_from_json(j.at("rpy"));
            s.angular_velocity = vec3_from_json(j.at("ang_vel"));
            s.linear_acceleration = vec3_from_json(j.at("lin_acc"));
            s.rpy_covariance = mat_from_json<3>(j.at("rpy_cov"));
            s.angular_velocity_covariance = mat_from_json<3>(j.at("ang_vel_cov"));
            s.linear_acceleration_covariance = mat_from_json<3>(j.at("lin_acc_cov"));
            rec.payload = s;
        } else if (type == "lio") {
            LioOdometry l;
            l.timestamp = rec.timestamp;
            l.position = vec3_from_json(j.at("pos"));
            const json& q = j.at("quat");
            if (!q.is_array() || q.size() != 4) throw std::runtime_error("quat must have 4 entries");
            l.orientation = Eigen::Quaterniond(q[3].get<double>(), q[0].get<double>(),
                                               q[1].get<double>(), q[2].get<double>());
            l.orientation.normalize();
            l.pose_covariance = mat_from_json<6>(j.at("cov"));
            rec.payload = l;
        } else if (type == "truth") {
            TruthSample s;
            s.timestamp = rec.timestamp;
            s.position = vec3_from_json(j.at("pos"));
            s.rpy = vec3_from_json(j.at("rpy"));
            s.velocity = vec3_from_json(j.at("vel"));
            s.acceleration = vec3_from_json(j.at("acc"));
            rec.payload = s;
        } else {
            throw std::runtime_error("unknown record type '" + type + "'");
        }
        return rec;
    } catch (const ParseError&) {
        throw;
    } catch (const std::exception& e) {
        throw ParseError(line_number, e.what());
    }
}

std::vector<SensorRecord> read_jsonl_log(std::istream& in) {
    std::vector<SensorRecord> out;
    std::string line;
    std::size_t line_number = 0;
    double last_t = -std::numeric_limits<double>::infinity();
    while (std::getline(in, line)) {
        ++line_number;
        if (line.empty()) continue;
        SensorRecord rec = record_from_jsonl(line, line_number);
        if (rec.timestamp < last_t) {
            throw ParseError(line_number, "timestamps out of order");
        }
        last_t = rec.timestamp;
        out.push_back(std::move(rec));
    }
    return out;
}

std::vector<SensorRecord> read_jsonl_log_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw std::runtime_error("cannot open log file: " + path);
    return read_jsonl_log(in);
}

void write_jsonl_log(std::ostream& out, const std::vector<SensorRecord>& records) {
    for (const auto& rec : records) out << record_to_jsonl(rec) << '\n';
}

void write_jsonl_log_file(const std::string& path, const std::vector<SensorRecord>& records) {
    std::ofstream out(path);
    if (!out) throw std::runtime_error("cannot open log file for writing: " + path);
    write_jsonl_log(out, records);
}

std::string scan_to_jsonl(const Scan& scan) {
    json j;
    j["t"] = scan.timestamp;
    j["ids"] = scan.ids;
    json pts = json::array();
    for (const auto& p : scan.points) pts.push_back(vec3_to_json(p));
    j["points"] = pts;
    return j.dump();
}

Scan scan_from_jsonl(const std::string& line, std::size_t line_number) {
    json j;
    try {
        j = json::parse(line);
    } catch (const json::parse_error& e) {
        throw ParseError(line_number, std::string("invalid JSON: ") + e.what());
    }
    try {
        Scan s;
        s.timestamp = j.at("t").get<double>();
        s.ids = j.at("ids").get<std::vector<int>>();
        for (const auto& p : j.at("points")) s.points.push_back(vec3_from_json(p));
        if (s.ids.size() != s.points.size()) {
            throw std::runtime_error("ids/points length mismatch");
        }
        return s;
    } catch (const ParseError&) {
        throw;
    } catch (const std::exception& e) {
        throw ParseError(line_number, e.what());
    }
}

std::vector<Scan> read_scan_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw std::runtime_error("cannot open scan file: " + path);
    std::vector<Scan> out;
    std::string line;
    std::size_t line_number = 0;
    while (std::getline(in, line)) {
        ++line_number;
        if (line.empty()) continue;
        out.push_back(scan_from_jsonl(line, line_number));
    }
    return out;
}

void write_scan_file(const std::string& path, const std::vector<Scan>& scans) {
    std::ofstream out(path);
    if (!out) throw std::runtime_error("cannot open scan file for writing: " + path);
    for (const auto& s : scans) out << scan_to_jsonl(s) << '\n';
}

std::vector<SensorRecord> merge_records(std::vector<std::vector<SensorRecord>> streams) {
    std::vector<SensorRecord> out;
    std::size_t total = 0;
    for (const auto& s : streams) total += s.size();
    out.reserve(total);
    for (auto& s : streams) {
        out.insert(out.end(), std::make_move_iterator(s.begin()), std::make_move_iterator(s.end()));
    }
    std::stable_sort(out.begin(), out.end(), [](const SensorRecord& a, const SensorRecord& b) {
        if (a.timestamp != b.timestamp) return a.timestamp < b.timestamp;
        return a.type_priority() < b.type_priority();
    });
    return out;
}

}  // namespace gpslio
