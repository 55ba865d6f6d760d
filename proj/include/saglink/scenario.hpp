#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "saglink/linkbudget.hpp"

namespace saglink {

/// Declarative description of one hydrometeor/aerosol population; densities
/// that depend on the weather (rain rate, liquid water content) are bound
/// when the population set is built.
struct PopulationSpec {
    enum class Kind { MarshallPalmer, Monodisperse, ModifiedGamma } kind =
        Kind::Monodisperse;
    double radius_um = 20.0;          // monodisperse
    double n0_m3_mm = 8000.0;         // Marshall-Palmer
    double shape = 0.0;               // modified gamma
    double scale_mm = 0.0;
    double total_density_m3 = 0.0;
    double number_density_m3 = 0.0;   // monodisperse haze only
    double water_temperature_k = 283.0;
};

/**
 * One scenario file: geometry, bands, weather, atmosphere, populations and
 * the output/seed plumbing. The molecular line catalogs referenced by the
 * scenario are loaded alongside it.
 */
struct Scenario {
    std::uint64_t seed = 12345;
    LinkGeometry geometry;
    AtmosphereProfile atmosphere;
    CnSquaredProfile turbulence;
    std::vector<BandConfig> bands;
    WeatherCondition weather;
    std::vector<LineCatalog> catalogs;
    std::string notes;

    std::optional<PopulationSpec> rain_spec;
    std::optional<PopulationSpec> fog_spec;
    std::optional<PopulationSpec> cloud_spec;
    std::optional<PopulationSpec> haze_spec;
    double haze_base_km = 0.0;
    double haze_top_km = 2.0;

    // Optional output block; CLI flags override these defaults.
    std::string output_format = "json";
    std::string output_path;  // empty = stdout

    /// Parse and validate; throws std::invalid_argument naming the offending
    /// field on schema violations.
    static Scenario load(const std::string& path);

    /// Shipped default scenario (data/default_scenario.json).
    static Scenario load_default();

    /// Bind population densities for a given weather condition.
    PopulationSet build_populations(const WeatherCondition& condition) const;

    /// Assemble the per-band link inputs for a given weather condition.
    LinkInputs link_inputs(const BandConfig& band, const WeatherCondition& condition,
                           const PopulationSet& populations) const;

    AttenuationBreakdown budget_for(const BandConfig& band,
                                    const WeatherCondition& condition) const;
};

/// Minimal CSV writer: comma separator, '.' decimals, LF endings.
class CsvWriter {
public:
    explicit CsvWriter(std::string path);
    void header(const std::vector<std::string>& columns);
    void row(const std::vector<std::string>& cells);
    void close();
    static std::string num(double value);

private:
    std::string path_;
    std::string buffer_;
};

}  // namespace saglink
