#pragma once

#include <map>
#include <optional>
#include <span>
#include <string>

#include "saglink/absorption.hpp"
#include "saglink/atmosphere.hpp"
#include "saglink/scattering.hpp"

namespace saglink {

struct LinkGeometry {
    double ground_altitude_km = 0.0;
    double platform_altitude_km = 2000.0;
    double elevation_deg = 90.0;

    void validate() const;

    /// Slant range through the altitude span (flat-earth secant geometry).
    double path_length_km() const;
};

enum class BandLabel { mmWave, THz, FSO };

const char* band_label_name(BandLabel label);

/// How a band obtains its molecular absorption: the shipped line-by-line
/// catalogs, or a fixed sea-level coefficient scaled along the water vapor
/// profile (for carriers outside catalog coverage, e.g. optical).
struct MolecularModel {
    enum class Kind { LineByLine, FixedCoefficient } kind = Kind::LineByLine;
    double fixed_db_per_km = 0.0;  // at the surface
};

struct BandConfig {
    BandLabel label = BandLabel::THz;
    double carrier_frequency_hz = 0.3e12;
    double bandwidth_hz = 5.0e9;
    double tx_power_dbm = 30.0;
    double tx_gain_dbi = 73.0;
    double rx_gain_dbi = 73.0;
    double noise_figure_db = 7.0;
    double system_temperature_k = 290.0;
    MolecularModel molecular;

    void validate() const;
};

enum class AttenuationFactor {
    FSPL,
    MolecularAbsorption,
    Cloud,
    Fog,
    Rain,
    Ionosphere,
    Turbulence,
    MieScattering,
};

const char* factor_name(AttenuationFactor factor);

/// Factors below this loss are flagged sub-threshold in emitted artifacts.
inline constexpr double kSubThresholdDb = 0.1;

/// Per-factor and per-layer loss decomposition of one link scenario. The
/// per-layer map covers medium-induced losses only; geometric spreading
/// (FSPL) is not attributable to a layer.
struct AttenuationBreakdown {
    std::map<AttenuationFactor, double> per_factor_db;
    std::map<Layer, double> per_layer_db;  // Troposphere / Stratosphere / Ionosphere
    double total_db = 0.0;

    double factor(AttenuationFactor f) const;
    bool sub_threshold(AttenuationFactor f) const { return factor(f) < kSubThresholdDb; }
    double medium_total_db() const { return total_db - factor(AttenuationFactor::FSPL); }
};

/// Hufnagel-Valley refractive-index structure profile. Zeroing all three
/// parameters turns turbulence off entirely.
struct CnSquaredProfile {
    double ground_cn2_m_2_3 = 1.7e-14;
    double wind_speed_m_s = 21.0;
    double background_cn2_m_2_3 = 2.7e-16;  // free-air term coefficient

    void validate() const;
    double cn2(double altitude_km) const;
};

/// Hydrometeor populations available to a scenario, plus an optional
/// background aerosol layer that feeds the MieScattering factor.
struct PopulationSet {
    std::optional<ParticlePopulation> rain;
    std::optional<ParticlePopulation> fog;
    std::optional<ParticlePopulation> cloud;
    std::optional<ParticlePopulation> haze;
    double haze_base_km = 0.0;
    double haze_top_km = 2.0;
};

/// Free-space path loss 20 log10(4 pi d f / c), dB.
double fspl_db(double frequency_hz, double distance_m);

/**
 * Scintillation loss margin from the Rytov variance accumulated along the
 * slant path: sigma_R^2 = 2.25 k^(7/6) integral Cn2(h(s)) s^(5/6) ds, which
 * reduces to the classic 1.23 Cn2 k^(7/6) L^(11/6) for constant Cn2. The
 * mapped margin 2.1715 * sigma_R^2 dB (mean log-normal fade depth) is exactly
 * proportional to f^(7/6) at fixed geometry.
 */
double turbulence_loss_db(double frequency_hz, const LinkGeometry& geometry,
                          const CnSquaredProfile& cn2);

std::map<Layer, double> turbulence_loss_by_layer_db(double frequency_hz,
                                                    const LinkGeometry& geometry,
                                                    const CnSquaredProfile& cn2,
                                                    const AtmosphereProfile& profile);

/// Collisional ionospheric absorption coefficient at one altitude, dB/km.
double plasma_coefficient_db_km(double frequency_hz, const AtmosphereProfile& profile,
                                double altitude_km);

/// Integral of the collisional absorption over the ionospheric slant segment.
/// Throws std::domain_error below the plasma frequency of the peak density.
double plasma_loss_db(double frequency_hz, const LinkGeometry& geometry,
                      const AtmosphereProfile& profile);

/// Specific attenuation x in-layer slant path for each hydrometeor active
/// under the given weather; inactive factors are present with value 0.
std::map<AttenuationFactor, double> weather_loss_db(const WeatherCondition& weather,
                                                    const BandConfig& band,
                                                    const LinkGeometry& geometry,
                                                    const PopulationSet& populations);

struct LinkInputs {
    LinkGeometry geometry;
    BandConfig band;
    WeatherCondition weather;
    AtmosphereProfile atmosphere;
    PopulationSet populations;
    CnSquaredProfile turbulence;
    std::span<const LineCatalog> catalogs;  // used by LineByLine bands
};

AttenuationBreakdown link_budget(const LinkInputs& inputs);

/// Per-layer share of the medium-induced loss, percent (sums to 100).
/// Throws std::domain_error when the medium-induced total is zero.
std::map<Layer, double> layer_shares_percent(const AttenuationBreakdown& breakdown);

struct CapacityResult {
    double snr_db = 0.0;
    double bits_per_s = 0.0;
    double spectral_efficiency_bps_hz = 0.0;
};

/// Shannon capacity from the breakdown total and the band's RF parameters.
CapacityResult capacity(const AttenuationBreakdown& breakdown, const BandConfig& band);

}  // namespace saglink
