#pragma once

#include <map>
#include <span>
#include <string>
#include <vector>

#include "saglink/atmosphere.hpp"

namespace saglink {

/// One rotational absorption line. Intensity is per molecule at the catalog
/// reference temperature; the halfwidth is the pressure-broadened HWHM per
/// pascal of total pressure, scaled by (T_ref/T)^temperature_exponent.
struct SpectralLine {
    double center_frequency_hz = 0.0;
    double line_intensity_hz_m2 = 0.0;
    double air_broadening_halfwidth_hz_pa = 0.0;
    double temperature_exponent = 0.0;
    double lower_state_energy_j = 0.0;
};

enum class AbsorberSpecies { H2O, O2 };

const char* absorber_name(AbsorberSpecies species);

/**
 * Immutable line table for one absorbing species, loaded from a JSON data
 * file. Coefficient evaluation is pure and safe to run in parallel over
 * frequency grids.
 */
struct LineCatalog {
    AbsorberSpecies species = AbsorberSpecies::H2O;
    double reference_temperature_k = 300.0;
    double reference_pressure_pa = 101325.0;
    // Per-molecule intensity scales as (T_ref/T)^exponent times the Boltzmann
    // factor of the lower state energy.
    double intensity_temperature_exponent = 2.5;
    double coverage_min_hz = 0.0;
    double coverage_max_hz = 0.0;
    std::string provenance;
    std::vector<SpectralLine> lines;  // sorted by center frequency

    static LineCatalog load(const std::string& path);
    void validate() const;
};

/// Shipped catalogs under the data directory (SAGLINK_DATA_DIR, overridable
/// via the environment variable of the same name).
std::string default_data_dir();
LineCatalog load_default_h2o_catalog();
LineCatalog load_default_o2_catalog();

/**
 * Line-by-line absorption coefficient in dB/km at one atmospheric state,
 * using the Van Vleck-Weisskopf shape with pressure-broadened halfwidths.
 * rho_wv is the water vapor density in g/m^3 (used for H2O catalogs; O2
 * number density follows from total pressure). Throws std::out_of_range for
 * frequencies outside the catalog coverage.
 */
double absorption_coefficient_db_km(const LineCatalog& catalog, double frequency_hz,
                                    double temperature_k, double pressure_pa,
                                    double water_vapor_density_g_m3);

/// Sum over several catalogs (e.g. H2O + O2).
double absorption_coefficient_db_km(std::span<const LineCatalog> catalogs,
                                    double frequency_hz, double temperature_k,
                                    double pressure_pa, double water_vapor_density_g_m3);

/**
 * Slant-path integral of the absorption coefficient between two altitudes,
 * in dB. Flat-earth secant geometry: ds = dh / sin(elevation). Quadrature
 * uses trapezoid steps of 100 m below 30 km and 1 km above.
 */
double path_absorption_db(std::span<const LineCatalog> catalogs,
                          const AtmosphereProfile& profile, double frequency_hz,
                          double h0_km, double h1_km, double elevation_deg);

/// Same integral, attributed to the atmospheric layer where each dB accrues.
std::map<Layer, double> path_absorption_by_layer_db(
    std::span<const LineCatalog> catalogs, const AtmosphereProfile& profile,
    double frequency_hz, double h0_km, double h1_km, double elevation_deg);

}  // namespace saglink
