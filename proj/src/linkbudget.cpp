#include "saglink/linkbudget.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

#include "saglink/constants.hpp"

namespace saglink {

const char* band_label_name(BandLabel label) {
    switch (label) {
        case BandLabel::mmWave: return "mmWave";
        case BandLabel::THz: return "THz";
        case BandLabel::FSO: return "FSO";
    }
    return "?";
}

const char* factor_name(AttenuationFactor factor) {
    switch (factor) {
        case AttenuationFactor::FSPL: return "FSPL";
        case AttenuationFactor::MolecularAbsorption: return "MolecularAbsorption";
        case AttenuationFactor::Cloud: return "Cloud";
        case AttenuationFactor::Fog: return "Fog";
        case AttenuationFactor::Rain: return "Rain";
        case AttenuationFactor::Ionosphere: return "Ionosphere";
        case AttenuationFactor::Turbulence: return "Turbulence";
        case AttenuationFactor::MieScattering: return "MieScattering";
    }
    return "?";
}

void LinkGeometry::validate() const {
    if (!(ground_altitude_km >= 0.0) || !(platform_altitude_km > ground_altitude_km)) {
        throw std::invalid_argument("geometry: need platform above ground >= 0");
    }
    if (!(elevation_deg > 0.0) || elevation_deg > 90.0) {
        throw std::invalid_argument("geometry: elevation must be in (0, 90] deg");
    }
}

double LinkGeometry::path_length_km() const {
    return (platform_altitude_km - ground_altitude_km) /
           std::sin(elevation_deg * kPi / 180.0);
}

void BandConfig::validate() const {
    if (!(carrier_frequency_hz > 0.0) || !(bandwidth_hz > 0.0) ||
        !(system_temperature_k > 0.0)) {
        throw std::invalid_argument(
            "band: carrier, bandwidth and system temperature must be > 0");
    }
    if (!std::isfinite(tx_gain_dbi) || !std::isfinite(rx_gain_dbi) ||
        !std::isfinite(tx_power_dbm) || noise_figure_db < 0.0) {
        throw std::invalid_argument("band: gains/power must be finite, NF >= 0");
    }
}

double AttenuationBreakdown::factor(AttenuationFactor f) const {
    const auto it = per_factor_db.find(f);
    return it == per_factor_db.end() ? 0.0 : it->second;
}

void CnSquaredProfile::validate() const {
    if (!(ground_cn2_m_2_3 >= 0.0) || !(wind_speed_m_s >= 0.0) ||
        !(background_cn2_m_2_3 >= 0.0)) {
        throw std::invalid_argument("turbulence: profile parameters must be >= 0");
    }
}

double CnSquaredProfile::cn2(double altitude_km) const {
    const double h = altitude_km * 1000.0;  // m
    const double w = wind_speed_m_s;
    const double bump = 0.00594 * std::pow(w / 27.0, 2.0) * std::pow(h * 1e-5, 10.0) *
                        std::exp(-h / 1000.0);
    const double free_air = background_cn2_m_2_3 * std::exp(-h / 1500.0);
    const double ground = ground_cn2_m_2_3 * std::exp(-h / 100.0);
    return bump + free_air + ground;
}

double fspl_db(double frequency_hz, double distance_m) {
    if (!(frequency_hz > 0.0) || !(distance_m > 0.0)) {
        throw std::domain_error("fspl: frequency and distance must be > 0");
    }
    return 20.0 * std::log10(4.0 * kPi * distance_m * frequency_hz / kSpeedOfLight);
}

namespace {

// Altitude above which the Cn2 profile is negligible for the Rytov integral.
constexpr double kTurbulenceTopKm = 60.0;
constexpr double kRytovToDb = 2.17147240951626;  // 10 log10(e) / 2

double rytov_weight(double frequency_hz) {
    const double k = 2.0 * kPi * frequency_hz / kSpeedOfLight;
    return 2.25 * std::pow(k, 7.0 / 6.0);
}

}  // namespace

std::map<Layer, double> turbulence_loss_by_layer_db(double frequency_hz,
                                                    const LinkGeometry& geometry,
                                                    const CnSquaredProfile& cn2,
                                                    const AtmosphereProfile& profile) {
    geometry.validate();
    if (!(frequency_hz > 0.0)) {
        throw std::domain_error("turbulence_loss: frequency must be > 0");
    }
    const double sin_el = std::sin(geometry.elevation_deg * kPi / 180.0);
    const double h0 = geometry.ground_altitude_km;
    const double h_top = std::min(geometry.platform_altitude_km, kTurbulenceTopKm);
    std::map<Layer, double> by_layer;
    if (h_top <= h0) return by_layer;

    const double weight = rytov_weight(frequency_hz) * kRytovToDb;
    const double step_km = 0.05;
    const int cells = static_cast<int>(std::ceil((h_top - h0) / step_km));
    double prev_h = h0;
    double prev_f = 0.0;  // Cn2(h0) * s^(5/6), s = 0 at the ground station
    for (int i = 1; i <= cells; ++i) {
        const double h = std::min(h0 + i * step_km, h_top);
        const double s_m = (h - h0) * 1000.0 / sin_el;
        const double f = cn2.cn2(h) * std::pow(s_m, 5.0 / 6.0);
        const double ds_m = (h - prev_h) * 1000.0 / sin_el;
        const double cell = 0.5 * (prev_f + f) * ds_m * weight;
        by_layer[profile.layer_of(0.5 * (prev_h + h))] += cell;
        prev_h = h;
        prev_f = f;
    }
    return by_layer;
}

double turbulence_loss_db(double frequency_hz, const LinkGeometry& geometry,
                          const CnSquaredProfile& cn2) {
    AtmosphereProfile profile;  // layer bounds only
    double total = 0.0;
    for (const auto& [layer, db] :
         turbulence_loss_by_layer_db(frequency_hz, geometry, cn2, profile)) {
        total += db;
    }
    return total;
}

double plasma_coefficient_db_km(double frequency_hz, const AtmosphereProfile& profile,
                                double altitude_km) {
    const double n_e = profile.electron_density(altitude_km);
    if (n_e == 0.0) return 0.0;
    const double omega_p2 = n_e * kElectronCharge * kElectronCharge /
                            (kVacuumPermittivity * kElectronMass);
    const double omega = 2.0 * kPi * frequency_hz;
    const double nu = profile.electron_profile.collision_frequency_hz;
    // Collisional (Appleton-Hartree) power absorption, quasi-longitudinal,
    // f well above the plasma frequency.
    const double alpha_np_m = omega_p2 * nu / (kSpeedOfLight * (omega * omega + nu * nu));
    return kNeperPerMeterToDbPerKm * alpha_np_m;
}

double plasma_loss_db(double frequency_hz, const LinkGeometry& geometry,
                      const AtmosphereProfile& profile) {
    geometry.validate();
    const double peak_density = profile.electron_profile.peak_electron_density_m3;
    const double plasma_freq_hz = 8.98 * std::sqrt(std::max(peak_density, 0.0));
    if (frequency_hz <= plasma_freq_hz) {
        throw std::domain_error(
            "plasma_loss: frequency at or below the plasma frequency (reflection)");
    }
    const double lo = std::max(geometry.ground_altitude_km,
                               profile.layer_bounds.ionosphere_bottom_km);
    const double hi = std::min(geometry.platform_altitude_km,
                               profile.layer_bounds.ionosphere_top_km);
    if (hi <= lo) return 0.0;
    const double secant = 1.0 / std::sin(geometry.elevation_deg * kPi / 180.0);
    const double step_km = 1.0;
    const int cells = static_cast<int>(std::ceil((hi - lo) / step_km));
    double total = 0.0;
    double prev_h = lo;
    double prev_k = plasma_coefficient_db_km(frequency_hz, profile, lo);
    for (int i = 1; i <= cells; ++i) {
        const double h = std::min(lo + i * step_km, hi);
        const double k = plasma_coefficient_db_km(frequency_hz, profile, h);
        total += 0.5 * (prev_k + k) * (h - prev_h);
        prev_h = h;
        prev_k = k;
    }
    return total * secant;
}

namespace {

// Slant path length (km) through the part of [seg_lo, seg_hi] that the link
// actually traverses.
double in_layer_path_km(const LinkGeometry& geometry, double seg_lo, double seg_hi) {
    const double lo = std::max(seg_lo, geometry.ground_altitude_km);
    const double hi = std::min(seg_hi, geometry.platform_altitude_km);
    if (hi <= lo) return 0.0;
    return (hi - lo) / std::sin(geometry.elevation_deg * kPi / 180.0);
}

}  // namespace

std::map<AttenuationFactor, double> weather_loss_db(const WeatherCondition& weather,
                                                    const BandConfig& band,
                                                    const LinkGeometry& geometry,
                                                    const PopulationSet& populations) {
    geometry.validate();
    std::map<AttenuationFactor, double> out{
        {AttenuationFactor::Rain, 0.0},
        {AttenuationFactor::Fog, 0.0},
        {AttenuationFactor::Cloud, 0.0},
    };
    const double f = band.carrier_frequency_hz;
    switch (weather.kind) {
        case WeatherKind::Clear:
            break;
        case WeatherKind::Rain: {
            if (!populations.rain) {
                throw std::invalid_argument("weather_loss: rain population missing");
            }
            const double gamma = specific_attenuation_db_km(*populations.rain, f);
            out[AttenuationFactor::Rain] =
                gamma * in_layer_path_km(geometry, 0.0, weather.rain_top_km);
            break;
        }
        case WeatherKind::Fog: {
            if (!populations.fog) {
                throw std::invalid_argument("weather_loss: fog population missing");
            }
            const double gamma = specific_attenuation_db_km(*populations.fog, f);
            out[AttenuationFactor::Fog] =
                gamma * in_layer_path_km(geometry, 0.0, weather.fog_top_km);
            break;
        }
        case WeatherKind::Cloud: {
            if (!populations.cloud) {
                throw std::invalid_argument("weather_loss: cloud population missing");
            }
            const double gamma = specific_attenuation_db_km(*populations.cloud, f);
            out[AttenuationFactor::Cloud] =
                gamma * in_layer_path_km(geometry, weather.cloud_base_km,
                                         weather.cloud_top_km);
            break;
        }
    }
    return out;
}

AttenuationBreakdown link_budget(const LinkInputs& inputs) {
    inputs.geometry.validate();
    inputs.band.validate();
    inputs.atmosphere.validate();
    inputs.weather.validate(inputs.atmosphere.layer_bounds);
    inputs.turbulence.validate();

    const LinkGeometry& geom = inputs.geometry;
    const double f = inputs.band.carrier_frequency_hz;

    AttenuationBreakdown out;
    out.per_layer_db = {{Layer::Troposphere, 0.0},
                        {Layer::Stratosphere, 0.0},
                        {Layer::Ionosphere, 0.0}};

    // Medium dB accrued in the 50-60 km gap is reported with the stratosphere;
    // anything above the ionosphere top (vacuum) with the ionosphere.
    const auto attribute = [&](Layer layer, double db) {
        switch (layer) {
            case Layer::Troposphere: out.per_layer_db[Layer::Troposphere] += db; break;
            case Layer::Stratosphere:
            case Layer::Gap: out.per_layer_db[Layer::Stratosphere] += db; break;
            case Layer::Ionosphere:
            case Layer::Space: out.per_layer_db[Layer::Ionosphere] += db; break;
        }
    };

    out.per_factor_db[AttenuationFactor::FSPL] = fspl_db(f, geom.path_length_km() * 1000.0);

    // Molecular absorption.
    double molecular = 0.0;
    if (inputs.band.molecular.kind == MolecularModel::Kind::LineByLine) {
        const auto by_layer = path_absorption_by_layer_db(
            inputs.catalogs, inputs.atmosphere, f, geom.ground_altitude_km,
            geom.platform_altitude_km, geom.elevation_deg);
        for (const auto& [layer, db] : by_layer) {
            molecular += db;
            attribute(layer, db);
        }
    } else {
        // Fixed surface coefficient scaled along the water vapor profile, so
        // the vertical shape still follows the exponential decay.
        const double scale_km = inputs.atmosphere.water_vapor_scale_height_km;
        const double secant = 1.0 / std::sin(geom.elevation_deg * kPi / 180.0);
        const double integral =
            inputs.band.molecular.fixed_db_per_km * scale_km *
            (std::exp(-geom.ground_altitude_km / scale_km) -
             std::exp(-geom.platform_altitude_km / scale_km));
        molecular = integral * secant;
        attribute(Layer::Troposphere, molecular);
    }
    out.per_factor_db[AttenuationFactor::MolecularAbsorption] = molecular;

    // Hydrometeors (all inside the troposphere by invariant).
    for (const auto& [factor, db] :
         weather_loss_db(inputs.weather, inputs.band, geom, inputs.populations)) {
        out.per_factor_db[factor] = db;
        attribute(Layer::Troposphere, db);
    }

    // Background aerosol (haze) feeds the MieScattering factor.
    double haze = 0.0;
    if (inputs.populations.haze) {
        const double gamma = specific_attenuation_db_km(*inputs.populations.haze, f);
        haze = gamma * in_layer_path_km(geom, inputs.populations.haze_base_km,
                                        inputs.populations.haze_top_km);
        attribute(Layer::Troposphere, haze);
    }
    out.per_factor_db[AttenuationFactor::MieScattering] = haze;

    // Turbulence, attributed where the Rytov integrand accrues.
    double turbulence = 0.0;
    for (const auto& [layer, db] : turbulence_loss_by_layer_db(
             f, geom, inputs.turbulence, inputs.atmosphere)) {
        turbulence += db;
        attribute(layer, db);
    }
    out.per_factor_db[AttenuationFactor::Turbulence] = turbulence;

    const double plasma = plasma_loss_db(f, geom, inputs.atmosphere);
    out.per_factor_db[AttenuationFactor::Ionosphere] = plasma;
    attribute(Layer::Ionosphere, plasma);

    double total = 0.0;
    for (const auto& [factor, db] : out.per_factor_db) total += db;
    out.total_db = total;
    return out;
}

std::map<Layer, double> layer_shares_percent(const AttenuationBreakdown& breakdown) {
    const double medium = breakdown.medium_total_db();
    if (!(medium > 0.0)) {
        throw std::domain_error("layer_shares: medium-induced loss is zero");
    }
    std::map<Layer, double> out;
    for (const auto& [layer, db] : breakdown.per_layer_db) {
        out[layer] = 100.0 * db / medium;
    }
    return out;
}

CapacityResult capacity(const AttenuationBreakdown& breakdown, const BandConfig& band) {
    band.validate();
    const double noise_dbm =
        10.0 * std::log10(kBoltzmann * band.system_temperature_k * band.bandwidth_hz) +
        30.0;
    CapacityResult out;
    out.snr_db = band.tx_power_dbm + band.tx_gain_dbi + band.rx_gain_dbi -
                 breakdown.total_db - noise_dbm - band.noise_figure_db;
    const double snr = std::pow(10.0, out.snr_db / 10.0);
    out.bits_per_s = band.bandwidth_hz * std::log2(1.0 + snr);
    out.spectral_efficiency_bps_hz = out.bits_per_s / band.bandwidth_hz;
    return out;
}

}  // namespace saglink
