#pragma once

#include <stdexcept>
#include <utility>
#include <vector>

namespace saglink {

/// Chapman-layer parameterization of the ionospheric electron content.
struct ChapmanParams {
    double peak_electron_density_m3 = 1.0e12;
    double peak_altitude_km = 300.0;
    double scale_height_km = 75.0;
    double collision_frequency_hz = 1.0e4;  // electron-neutral, for plasma loss
};

enum class Layer { Troposphere, Stratosphere, Gap, Ionosphere, Space };

const char* layer_name(Layer layer);

struct LayerBounds {
    double troposphere_top_km = 12.0;
    double stratosphere_top_km = 50.0;
    double ionosphere_bottom_km = 60.0;
    double ionosphere_top_km = 1000.0;
};

/**
 * Altitude-parameterized atmospheric state: water vapor, temperature,
 * pressure, free electrons, and the layer structure used by the path
 * integrations. All evaluations are pure; a profile is safe to share
 * across threads once constructed.
 */
struct AtmosphereProfile {
    double surface_temperature_k = 288.15;
    double surface_pressure_pa = 101325.0;
    double surface_water_vapor_density_g_m3 = 7.5;
    double water_vapor_scale_height_km = 2.1;

    // Piecewise-linear (altitude km -> temperature K). Must be sorted by
    // altitude and start at 0 km; temperature is held constant above the
    // last knot. Default: 6.5 K/km lapse to 11 km, isothermal above.
    std::vector<std::pair<double, double>> temperature_lapse_km_k = {
        {0.0, 288.15}, {11.0, 216.65}};

    ChapmanParams electron_profile;
    LayerBounds layer_bounds;

    /// Throws std::invalid_argument when a field violates its invariant.
    void validate() const;

    /// Water vapor density in g/m^3; exponential decay with altitude.
    double water_vapor_density(double altitude_km) const;

    /// Chapman-layer electron density in m^-3; zero outside the ionosphere.
    double electron_density(double altitude_km) const;

    /// Layer classification. An altitude exactly on a bound belongs to the
    /// lower layer.
    Layer layer_of(double altitude_km) const;

    double temperature(double altitude_km) const;

    /// Barometric pressure consistent with the temperature profile, Pa.
    double pressure(double altitude_km) const;
};

enum class WeatherKind { Clear, Rain, Fog, Cloud };

const char* weather_kind_name(WeatherKind kind);

struct WeatherCondition {
    WeatherKind kind = WeatherKind::Clear;

    // Rain only.
    double rain_rate_mm_h = 0.0;
    double rain_top_km = 4.0;

    // Fog only.
    double fog_liquid_water_g_m3 = 0.0;
    double fog_top_km = 0.3;

    // Cloud only.
    double cloud_liquid_water_g_m3 = 0.0;
    double cloud_base_km = 1.0;
    double cloud_top_km = 3.0;

    void validate(const LayerBounds& bounds) const;
};

}  // namespace saglink
