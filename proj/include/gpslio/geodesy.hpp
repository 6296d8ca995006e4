#pragma once

#include <Eigen/Dense>
#include <optional>

namespace gpslio {

/// A WGS-84 geodetic fix as reported by the GPS receiver.
/// Covariance is 3x3 in ENU axes (east, north, up), row-major when serialized.
struct GeoFix {
    double timestamp = 0.0;          // seconds, monotonic
    double latitude = 0.0;           // degrees
    double longitude = 0.0;          // degrees
    double altitude = 0.0;           // meters above ellipsoid
    Eigen::Matrix3d position_covariance = Eigen::Matrix3d::Zero();  // m^2, ENU
    bool fix_valid = true;
};

enum class Hemisphere { North, South };

/// Projected UTM coordinates. Easting/northing include the standard false
/// offsets (FE 500 000 m, FN 10 000 000 m in the south).
struct UtmCoord {
    double easting = 0.0;    // meters
    double northing = 0.0;   // meters
    double altitude = 0.0;   // meters, passed through from the fix
    int zone = 0;            // 1..60
    Hemisphere hemisphere = Hemisphere::North;
};

/// UTM zone containing the given longitude (no Norway/Svalbard exceptions).
int utm_zone_for(double longitude_deg);

/// Central meridian of a UTM zone, degrees.
double central_meridian_deg(int zone);

/// Project a geodetic fix to UTM (Krueger series, order 6, WGS-84, k0=0.9996).
/// `forced_zone` projects into that zone regardless of longitude so a session
/// never splits across a zone boundary. Throws std::invalid_argument for
/// out-of-range latitude/longitude or |latitude| >= 84 degrees.
UtmCoord latlon_to_utm(const GeoFix& fix, std::optional<int> forced_zone = std::nullopt);

/// Inverse projection. Altitude and timestamp-free fields are filled; the
/// returned fix has an identity-scaled zero covariance. Throws
/// std::invalid_argument when easting/northing lie outside the projection
/// domain.
GeoFix utm_to_latlon(const UtmCoord& coord);

}  // namespace gpslio
