#include "gpslio/geodesy.hpp"

#include <cmath>
#include <stdexcept>
#include <string>

namespace gpslio {

namespace {

// WGS-84
constexpr double kSemiMajor = 6378137.0;
constexpr double kFlattening = 1.0 / 298.257223563;
constexpr double kScale = 0.9996;
constexpr double kFalseEasting = 500000.0;
constexpr double kFalseNorthingSouth = 10000000.0;

constexpr double kDegToRad = M_PI / 180.0;
constexpr double kRadToDeg = 180.0 / M_PI;

// Krueger series, third flattening n, coefficients to n^6.
struct KruegerConstants {
    double e;        // first eccentricity
    double rect_radius;  // rectifying radius A
    double alpha[6];
    double beta[6];
};

KruegerConstants make_constants() {
    KruegerConstants k{};
    const double f = kFlattening;
    const double n = f / (2.0 - f);
    const double n2 = n * n, n3 = n2 * n, n4 = n3 * n, n5 = n4 * n, n6 = n5 * n;
    k.e = std::sqrt(f * (2.0 - f));
    k.rect_radius = kSemiMajor / (1.0 + n) * (1.0 + n2 / 4.0 + n4 / 64.0 + n6 / 256.0);
    k.alpha[0] = n / 2.0 - 2.0 * n2 / 3.0 + 5.0 * n3 / 16.0 + 41.0 * n4 / 180.0
               - 127.0 * n5 / 288.0 + 7891.0 * n6 / 37800.0;
    k.alpha[1] = 13.0 * n2 / 48.0 - 3.0 * n3 / 5.0 + 557.0 * n4 / 1440.0
               + 281.0 * n5 / 630.0 - 1983433.0 * n6 / 1935360.0;
    k.alpha[2] = 61.0 * n3 / 240.0 - 103.0 * n4 / 140.0 + 15061.0 * n5 / 26880.0
               + 167603.0 * n6 / 181440.0;
    k.alpha[3] = 49561.0 * n4 / 161280.0 - 179.0 * n5 / 168.0 + 6601661.0 * n6 / 7257600.0;
    k.alpha[4] = 34729.0 * n5 / 80640.0 - 3418889.0 * n6 / 1995840.0;
    k.alpha[5] = 212378941.0 * n6 / 319334400.0;
    k.beta[0] = n / 2.0 - 2.0 * n2 / 3.0 + 37.0 * n3 / 96.0 - n4 / 360.0
              - 81.0 * n5 / 512.0 + 96199.0 * n6 / 604800.0;
    k.beta[1] = n2 / 48.0 + n3 / 15.0 - 437.0 * n4 / 1440.0 + 46.0 * n5 / 105.0
              - 1118711.0 * n6 / 3870720.0;
    k.beta[2] = 17.0 * n3 / 480.0 - 37.0 * n4 / 840.0 - 209.0 * n5 / 4480.0
              + 5569.0 * n6 / 90720.0;
    k.beta[3] = 4397.0 * n4 / 161280.0 - 11.0 * n5 / 504.0 - 830251.0 * n6 / 7257600.0;
    k.beta[4] = 4583.0 * n5 / 161280.0 - 108847.0 * n6 / 3991680.0;
    k.beta[5] = 20648693.0 * n6 / 638668800.0;
    return k;
}

const KruegerConstants& constants() {
    static const KruegerConstants k = make_constants();
    return k;
}

// tau' = tan(conformal latitude) from tau = tan(latitude)
double tau_prime(double tau, double e) {
    const double sigma = std::sinh(e * std::atanh(e * tau / std::sqrt(1.0 + tau * tau)));
    return tau * std::sqrt(1.0 + sigma * sigma) - sigma * std::sqrt(1.0 + tau * tau);
}

// Invert tau'(tau) by Newton iteration.
double tau_from_tau_prime(double taup, double e) {
    const double e2m = 1.0 - e * e;
    double tau = taup / e2m;
    for (int i = 0; i < 6; ++i) {
        const double taupa = tau_prime(tau, e);
        const double dtau = (taup - taupa) * (1.0 + e2m * tau * tau)
                          / (e2m * std::hypot(1.0, tau) * std::hypot(1.0, taupa));
        tau += dtau;
        if (std::abs(dtau) < 1e-15 * std::max(1.0, std::abs(tau))) break;
    }
    return tau;
}

}  // namespace

int utm_zone_for(double longitude_deg) {
    double lon = longitude_deg;
    while (lon >= 180.0) lon -= 360.0;
    while (lon < -180.0) lon += 360.0;
    int zone = static_cast<int>(std::floor((lon + 180.0) / 6.0)) + 1;
    if (zone < 1) zone = 1;
    if (zone > 60) zone = 60;
    return zone;
}

double central_meridian_deg(int zone) {
    return zone * 6.0 - 183.0;
}

UtmCoord latlon_to_utm(const GeoFix& fix, std::optional<int> forced_zone) {
    if (!std::isfinite(fix.latitude) || !std::isfinite(fix.longitude)) {
        throw std::invalid_argument("latlon_to_utm: non-finite coordinates");
    }
    if (fix.latitude < -90.0 || fix.latitude > 90.0) {
        throw std::invalid_argument("latlon_to_utm: latitude " + std::to_string(fix.latitude)
                                    + " outside [-90, 90]");
    }
    if (fix.longitude < -180.0 || fix.longitude > 180.0) {
        throw std::invalid_argument("latlon_to_utm: longitude " + std::to_string(fix.longitude)
                                    + " outside [-180, 180]");
    }
    if (std::abs(fix.latitude) >= 84.0) {
        throw std::invalid_argument("latlon_to_utm: |latitude| >= 84 deg is outside the UTM band");
    }
    if (forced_zone && (*forced_zone < 1 || *forced_zone > 60)) {
        throw std::invalid_argument("latlon_to_utm: forced zone must be in 1..60");
    }

    const KruegerConstants& k = constants();
    const int zone = forced_zone ? *forced_zone : utm_zone_for(fix.longitude);
    const double lam = (fix.longitude - central_meridian_deg(zone)) * kDegToRad;
    const double phi = fix.latitude * kDegToRad;

    const double tau = std::tan(phi);
    const double taup = tau_prime(tau, k.e);
    const double cl = std::cos(lam);
    const double xi_p = std::atan2(taup, cl);
    const double eta_p = std::asinh(std::sin(lam) / std::hypot(taup, cl));

    double xi = xi_p;
    double eta = eta_p;
    for (int j = 1; j <= 6; ++j) {
        xi += k.alpha[j - 1] * std::sin(2.0 * j * xi_p) * std::cosh(2.0 * j * eta_p);
        eta += k.alpha[j - 1] * std::cos(2.0 * j * xi_p) * std::sinh(2.0 * j * eta_p);
    }

    UtmCoord out;
    out.zone = zone;
    out.hemisphere = fix.latitude < 0.0 ? Hemisphere::South : Hemisphere::North;
    out.easting = kFalseEasting + kScale * k.rect_radius * eta;
    out.northing = kScale * k.rect_radius * xi
                 + (out.hemisphere == Hemisphere::South ? kFalseNorthingSouth : 0.0);
    out.altitude = fix.altitude;
    return out;
}

GeoFix utm_to_latlon(const UtmCoord& coord) {
    if (coord.zone < 1 || coord.zone > 60) {
        throw std::invalid_argument("utm_to_latlon: zone must be in 1..60");
    }
    if (!std::isfinite(coord.easting) || !std::isfinite(coord.northing)) {
        throw std::invalid_argument("utm_to_latlon: non-finite coordinates");
    }
    if (coord.easting <= 0.0 || coord.easting >= 1000000.0) {
        throw std::invalid_argument("utm_to_latlon: easting outside projection domain");
    }
    if (coord.northing < 0.0 || coord.northing > 10000000.0) {
        throw std::invalid_argument("utm_to_latlon: northing outside projection domain");
    }

    const KruegerConstants& k = constants();
    const double y = coord.northing
                   - (coord.hemisphere == Hemisphere::South ? kFalseNorthingSouth : 0.0);
    const double xi = y / (kScale * k.rect_radius);
    const double eta = (coord.easting - kFalseEasting) / (kScale * k.rect_radius);

    double xi_p = xi;
    double eta_p = eta;
    for (int j = 1; j <= 6; ++j) {
        xi_p -= k.beta[j - 1] * std::sin(2.0 * j * xi) * std::cosh(2.0 * j * eta);
        eta_p -= k.beta[j - 1] * std::cos(2.0 * j * xi) * std::sinh(2.0 * j * eta);
    }

    const double sh = std::sinh(eta_p);
    const double taup = std::sin(xi_p) / std::hypot(sh, std::cos(xi_p));
    const double tau = tau_from_tau_prime(taup, k.e);
    const double lat = std::atan(tau) * kRadToDeg;
    const double lam = std::atan2(sh, std::cos(xi_p)) * kRadToDeg;

    GeoFix fix;
    fix.latitude = lat;
    fix.longitude = lam + central_meridian_deg(coord.zone);
    if (fix.longitude > 180.0) fix.longitude -= 360.0;
    if (fix.longitude < -180.0) fix.longitude += 360.0;
    fix.altitude = coord.altitude;
    return fix;
}

}  // namespace gpslio
