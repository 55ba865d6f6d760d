#include "saglink/atmosphere.hpp"

#include <cmath>
#include <string>

#include "saglink/constants.hpp"

namespace saglink {

const char* layer_name(Layer layer) {
    switch (layer) {
        case Layer::Troposphere: return "Troposphere";
        case Layer::Stratosphere: return "Stratosphere";
        case Layer::Gap: return "Gap";
        case Layer::Ionosphere: return "Ionosphere";
        case Layer::Space: return "Space";
    }
    return "?";
}

const char* weather_kind_name(WeatherKind kind) {
    switch (kind) {
        case WeatherKind::Clear: return "Clear";
        case WeatherKind::Rain: return "Rain";
        case WeatherKind::Fog: return "Fog";
        case WeatherKind::Cloud: return "Cloud";
    }
    return "?";
}

void AtmosphereProfile::validate() const {
    if (!(surface_temperature_k > 0.0) || !(surface_pressure_pa > 0.0) ||
        !(surface_water_vapor_density_g_m3 > 0.0) ||
        !(water_vapor_scale_height_km > 0.0)) {
        throw std::invalid_argument(
            "atmosphere: surface temperature/pressure/vapor density and scale "
            "height must be positive");
    }
    const LayerBounds& b = layer_bounds;
    if (!(0.0 < b.troposphere_top_km && b.troposphere_top_km < b.stratosphere_top_km &&
          b.stratosphere_top_km <= b.ionosphere_bottom_km &&
          b.ionosphere_bottom_km < b.ionosphere_top_km)) {
        throw std::invalid_argument("atmosphere: layer bounds must be increasing");
    }
    if (electron_profile.peak_electron_density_m3 < 0.0) {
        throw std::invalid_argument("atmosphere: peak electron density must be >= 0");
    }
    if (electron_profile.peak_altitude_km < b.ionosphere_bottom_km ||
        electron_profile.peak_altitude_km > b.ionosphere_top_km) {
        throw std::invalid_argument(
            "atmosphere: Chapman peak altitude must lie within the ionosphere");
    }
    if (temperature_lapse_km_k.empty() || temperature_lapse_km_k.front().first != 0.0) {
        throw std::invalid_argument("atmosphere: temperature table must start at 0 km");
    }
    for (std::size_t i = 0; i < temperature_lapse_km_k.size(); ++i) {
        if (temperature_lapse_km_k[i].second <= 0.0) {
            throw std::invalid_argument("atmosphere: temperatures must be positive");
        }
        if (i > 0 && temperature_lapse_km_k[i].first <= temperature_lapse_km_k[i - 1].first) {
            throw std::invalid_argument("atmosphere: temperature table must be sorted");
        }
    }
}

namespace {

void require_nonnegative_altitude(double altitude_km) {
    if (!(altitude_km >= 0.0)) {
        throw std::domain_error("atmosphere: altitude must be >= 0 km");
    }
}

}  // namespace

double AtmosphereProfile::water_vapor_density(double altitude_km) const {
    require_nonnegative_altitude(altitude_km);
    return surface_water_vapor_density_g_m3 *
           std::exp(-altitude_km / water_vapor_scale_height_km);
}

double AtmosphereProfile::electron_density(double altitude_km) const {
    require_nonnegative_altitude(altitude_km);
    if (altitude_km < layer_bounds.ionosphere_bottom_km ||
        altitude_km > layer_bounds.ionosphere_top_km) {
        return 0.0;
    }
    const double z = (altitude_km - electron_profile.peak_altitude_km) /
                     electron_profile.scale_height_km;
    return electron_profile.peak_electron_density_m3 *
           std::exp(0.5 * (1.0 - z - std::exp(-z)));
}

Layer AtmosphereProfile::layer_of(double altitude_km) const {
    require_nonnegative_altitude(altitude_km);
    const LayerBounds& b = layer_bounds;
    if (altitude_km <= b.troposphere_top_km) return Layer::Troposphere;
    if (altitude_km <= b.stratosphere_top_km) return Layer::Stratosphere;
    if (altitude_km <= b.ionosphere_bottom_km) return Layer::Gap;
    if (altitude_km <= b.ionosphere_top_km) return Layer::Ionosphere;
    return Layer::Space;
}

double AtmosphereProfile::temperature(double altitude_km) const {
    require_nonnegative_altitude(altitude_km);
    const auto& table = temperature_lapse_km_k;
    if (altitude_km >= table.back().first) return table.back().second;
    std::size_t i = 1;
    while (table[i].first < altitude_km) ++i;
    const auto& [h0, t0] = table[i - 1];
    const auto& [h1, t1] = table[i];
    return t0 + (t1 - t0) * (altitude_km - h0) / (h1 - h0);
}

double AtmosphereProfile::pressure(double altitude_km) const {
    require_nonnegative_altitude(altitude_km);
    // Piecewise-analytic barometric law over the temperature table segments:
    // constant-lapse segments use the power law, isothermal ones exponential.
    const double gm_over_r = kGravity * kDryAirMolarMass / kGasConstant;
    const auto& table = temperature_lapse_km_k;
    double p = surface_pressure_pa;
    double h_prev = 0.0;
    double t_prev = table.front().second;
    for (std::size_t i = 1; i <= table.size(); ++i) {
        const bool last = (i == table.size());
        const double h_next = last ? altitude_km : std::min(table[i].first, altitude_km);
        const double t_next = last ? t_prev : temperature(h_next);
        const double dh_m = (h_next - h_prev) * 1000.0;
        if (dh_m > 0.0) {
            const double lapse = (t_next - t_prev) / dh_m;  // K/m
            if (std::abs(lapse) < 1e-12) {
                p *= std::exp(-gm_over_r * dh_m / t_prev);
            } else {
                p *= std::pow(t_next / t_prev, -gm_over_r / lapse);
            }
        }
        h_prev = h_next;
        t_prev = t_next;
        if (last || h_next >= altitude_km) break;
    }
    return p;
}

void WeatherCondition::validate(const LayerBounds& bounds) const {
    const double tropo = bounds.troposphere_top_km;
    switch (kind) {
        case WeatherKind::Clear:
            break;
        case WeatherKind::Rain:
            if (rain_rate_mm_h < 0.0) {
                throw std::invalid_argument("weather: rain rate must be >= 0");
            }
            if (!(rain_top_km > 0.0 && rain_top_km <= tropo)) {
                throw std::invalid_argument("weather: rain top must lie in the troposphere");
            }
            break;
        case WeatherKind::Fog:
            if (fog_liquid_water_g_m3 < 0.0) {
                throw std::invalid_argument("weather: fog liquid water must be >= 0");
            }
            if (!(fog_top_km > 0.0 && fog_top_km <= tropo)) {
                throw std::invalid_argument("weather: fog top must lie in the troposphere");
            }
            break;
        case WeatherKind::Cloud:
            if (cloud_liquid_water_g_m3 < 0.0) {
                throw std::invalid_argument("weather: cloud liquid water must be >= 0");
            }
            if (!(cloud_base_km >= 0.0 && cloud_base_km < cloud_top_km &&
                  cloud_top_km <= tropo)) {
                throw std::invalid_argument(
                    "weather: cloud extent must be ordered and within the troposphere");
            }
            break;
    }
}

}  // namespace saglink
