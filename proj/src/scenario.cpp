#include "saglink/scenario.hpp"

#include <cmath>
#include <cstdio>
#include <fstream>
#include <stdexcept>

#include <json.hpp>

#include "saglink/constants.hpp"

namespace saglink {

namespace {

using nlohmann::json;

PopulationSpec parse_population(const json& j) {
    PopulationSpec spec;
    const std::string type = j.at("type").get<std::string>();
    if (type == "marshall_palmer") {
        spec.kind = PopulationSpec::Kind::MarshallPalmer;
        spec.n0_m3_mm = j.value("n0_m3_mm", 8000.0);
    } else if (type == "monodisperse") {
        spec.kind = PopulationSpec::Kind::Monodisperse;
        spec.radius_um = j.at("radius_um").get<double>();
        spec.number_density_m3 = j.value("number_density_m3", 0.0);
    } else if (type == "modified_gamma") {
        spec.kind = PopulationSpec::Kind::ModifiedGamma;
        spec.shape = j.at("shape").get<double>();
        spec.scale_mm = j.at("scale_mm").get<double>();
        spec.total_density_m3 = j.at("total_density_m3").get<double>();
    } else {
        throw std::invalid_argument("scenario: unknown population type '" + type + "'");
    }
    spec.water_temperature_k = j.value("water_temperature_k", 283.0);
    return spec;
}

ParticlePopulation make_population(HydrometeorSpecies species, SizeDistribution dist,
                                   double water_temperature_k) {
    ParticlePopulation pop;
    pop.species = species;
    pop.distribution = dist;
    pop.refractive_index = [water_temperature_k](double f_hz) {
        return water_refractive_index(f_hz, water_temperature_k);
    };
    pop.validate();
    return pop;
}

/// Droplet count per m^3 giving the requested liquid water content.
double density_from_lwc(double lwc_g_m3, double radius_um) {
    const double r_m = radius_um * 1e-6;
    const double drop_mass_kg = 4.0 / 3.0 * kPi * r_m * r_m * r_m * kWaterDensity;
    return lwc_g_m3 * 1e-3 / drop_mass_kg;
}

}  // namespace

Scenario Scenario::load(const std::string& path) {
    std::ifstream in(path);
    if (!in) {
        throw std::invalid_argument("scenario: cannot open " + path);
    }
    json j;
    try {
        j = json::parse(in);
    } catch (const json::parse_error& e) {
        throw std::invalid_argument("scenario: JSON parse error: " + std::string(e.what()));
    }

    Scenario s;
    try {
        s.seed = j.value("seed", 12345ULL);
        s.notes = j.value("notes", "");

        const json& g = j.at("geometry");
        s.geometry.ground_altitude_km = g.value("ground_altitude_km", 0.0);
        s.geometry.platform_altitude_km = g.at("platform_altitude_km").get<double>();
        s.geometry.elevation_deg = g.value("elevation_deg", 90.0);
        s.geometry.validate();

        const json& a = j.at("atmosphere");
        s.atmosphere.surface_temperature_k = a.value("surface_temperature_k", 288.15);
        s.atmosphere.surface_pressure_pa = a.value("surface_pressure_pa", 101325.0);
        s.atmosphere.surface_water_vapor_density_g_m3 =
            a.value("surface_water_vapor_density_g_m3", 7.5);
        s.atmosphere.water_vapor_scale_height_km =
            a.value("water_vapor_scale_height_km", 2.1);
        if (a.contains("temperature_lapse_km_k")) {
            s.atmosphere.temperature_lapse_km_k.clear();
            for (const auto& knot : a.at("temperature_lapse_km_k")) {
                s.atmosphere.temperature_lapse_km_k.emplace_back(
                    knot.at(0).get<double>(), knot.at(1).get<double>());
            }
        }
        if (a.contains("electron_profile")) {
            const json& e = a.at("electron_profile");
            s.atmosphere.electron_profile.peak_electron_density_m3 =
                e.value("peak_electron_density_m3", 1.0e12);
            s.atmosphere.electron_profile.peak_altitude_km =
                e.value("peak_altitude_km", 300.0);
            s.atmosphere.electron_profile.scale_height_km = e.value("scale_height_km", 75.0);
            s.atmosphere.electron_profile.collision_frequency_hz =
                e.value("collision_frequency_hz", 1.0e4);
        }
        if (a.contains("layer_bounds_km")) {
            const json& b = a.at("layer_bounds_km");
            s.atmosphere.layer_bounds.troposphere_top_km = b.value("troposphere_top", 12.0);
            s.atmosphere.layer_bounds.stratosphere_top_km = b.value("stratosphere_top", 50.0);
            s.atmosphere.layer_bounds.ionosphere_bottom_km =
                b.value("ionosphere_bottom", 60.0);
            s.atmosphere.layer_bounds.ionosphere_top_km = b.value("ionosphere_top", 1000.0);
        }
        s.atmosphere.validate();

        if (j.contains("turbulence")) {
            const json& t = j.at("turbulence");
            s.turbulence.ground_cn2_m_2_3 = t.value("ground_cn2_m_2_3", 1.7e-14);
            s.turbulence.wind_speed_m_s = t.value("wind_speed_m_s", 21.0);
            s.turbulence.background_cn2_m_2_3 = t.value("background_cn2_m_2_3", 2.7e-16);
        }
        s.turbulence.validate();

        for (const std::string& species :
             j.value("molecular_species", std::vector<std::string>{"H2O"})) {
            if (species == "H2O") {
                s.catalogs.push_back(load_default_h2o_catalog());
            } else if (species == "O2") {
                s.catalogs.push_back(load_default_o2_catalog());
            } else {
                throw std::invalid_argument("scenario: unknown molecular species '" +
                                            species + "'");
            }
        }

        if (!j.contains("bands") || j.at("bands").empty()) {
            throw std::invalid_argument("scenario: field 'bands' must list at least one band");
        }
        for (const json& bj : j.at("bands")) {
            BandConfig band;
            const std::string label = bj.at("label").get<std::string>();
            if (label == "mmWave") {
                band.label = BandLabel::mmWave;
            } else if (label == "THz") {
                band.label = BandLabel::THz;
            } else if (label == "FSO") {
                band.label = BandLabel::FSO;
            } else {
                throw std::invalid_argument("scenario: unknown band label '" + label + "'");
            }
            band.carrier_frequency_hz = bj.at("carrier_frequency_hz").get<double>();
            band.bandwidth_hz = bj.at("bandwidth_hz").get<double>();
            band.tx_power_dbm = bj.at("tx_power_dbm").get<double>();
            band.tx_gain_dbi = bj.at("tx_gain_dbi").get<double>();
            band.rx_gain_dbi = bj.at("rx_gain_dbi").get<double>();
            band.noise_figure_db = bj.value("noise_figure_db", 0.0);
            band.system_temperature_k = bj.value("system_temperature_k", 290.0);
            if (bj.contains("molecular_model")) {
                const json& mm = bj.at("molecular_model");
                if (mm.is_string() && mm.get<std::string>() == "line_by_line") {
                    band.molecular.kind = MolecularModel::Kind::LineByLine;
                } else if (mm.is_object() && mm.contains("fixed_db_per_km")) {
                    band.molecular.kind = MolecularModel::Kind::FixedCoefficient;
                    band.molecular.fixed_db_per_km = mm.at("fixed_db_per_km").get<double>();
                } else {
                    throw std::invalid_argument(
                        "scenario: field 'molecular_model' must be \"line_by_line\" or "
                        "{\"fixed_db_per_km\": x}");
                }
            }
            band.validate();
            s.bands.push_back(band);
        }

        const json& w = j.at("weather");
        const std::string kind = w.at("kind").get<std::string>();
        if (kind == "Clear") {
            s.weather.kind = WeatherKind::Clear;
        } else if (kind == "Rain") {
            s.weather.kind = WeatherKind::Rain;
        } else if (kind == "Fog") {
            s.weather.kind = WeatherKind::Fog;
        } else if (kind == "Cloud") {
            s.weather.kind = WeatherKind::Cloud;
        } else {
            throw std::invalid_argument("scenario: unknown weather kind '" + kind + "'");
        }
        s.weather.rain_rate_mm_h = w.value("rain_rate_mm_h", 0.0);
        s.weather.rain_top_km = w.value("rain_top_km", 4.0);
        s.weather.fog_liquid_water_g_m3 = w.value("fog_liquid_water_g_m3", 0.0);
        s.weather.fog_top_km = w.value("fog_top_km", 0.3);
        s.weather.cloud_liquid_water_g_m3 = w.value("cloud_liquid_water_g_m3", 0.0);
        s.weather.cloud_base_km = w.value("cloud_base_km", 1.0);
        s.weather.cloud_top_km = w.value("cloud_top_km", 3.0);
        s.weather.validate(s.atmosphere.layer_bounds);

        if (j.contains("output")) {
            const json& o = j.at("output");
            s.output_format = o.value("format", "json");
            if (s.output_format != "json" && s.output_format != "csv") {
                throw std::invalid_argument(
                    "scenario: field 'output.format' must be json or csv");
            }
            s.output_path = o.value("path", "");
        }

        if (j.contains("populations")) {
            const json& p = j.at("populations");
            if (p.contains("rain")) s.rain_spec = parse_population(p.at("rain"));
            if (p.contains("fog")) s.fog_spec = parse_population(p.at("fog"));
            if (p.contains("cloud")) s.cloud_spec = parse_population(p.at("cloud"));
            if (p.contains("haze")) {
                s.haze_spec = parse_population(p.at("haze"));
                s.haze_base_km = p.at("haze").value("base_km", 0.0);
                s.haze_top_km = p.at("haze").value("top_km", 2.0);
            }
        }
    } catch (const json::exception& e) {
        throw std::invalid_argument("scenario: schema violation: " + std::string(e.what()));
    }

    // The active weather must have a population to draw on.
    const bool missing =
        (s.weather.kind == WeatherKind::Rain && !s.rain_spec) ||
        (s.weather.kind == WeatherKind::Fog && !s.fog_spec) ||
        (s.weather.kind == WeatherKind::Cloud && !s.cloud_spec);
    if (missing) {
        throw std::invalid_argument(
            std::string("scenario: field 'populations' is missing an entry for the "
                        "active weather kind '") +
            weather_kind_name(s.weather.kind) + "'");
    }
    return s;
}

Scenario Scenario::load_default() {
    return load(default_data_dir() + "/default_scenario.json");
}

PopulationSet Scenario::build_populations(const WeatherCondition& condition) const {
    PopulationSet set;
    if (rain_spec && condition.kind == WeatherKind::Rain) {
        SizeDistribution dist =
            rain_spec->kind == PopulationSpec::Kind::MarshallPalmer
                ? SizeDistribution::marshall_palmer(condition.rain_rate_mm_h,
                                                    rain_spec->n0_m3_mm)
                : SizeDistribution::monodisperse(rain_spec->radius_um * 1e-3,
                                                 rain_spec->number_density_m3);
        set.rain = make_population(HydrometeorSpecies::Rain, dist,
                                   rain_spec->water_temperature_k);
    }
    if (fog_spec && condition.kind == WeatherKind::Fog) {
        set.fog = make_population(
            HydrometeorSpecies::Fog,
            SizeDistribution::monodisperse(
                fog_spec->radius_um * 1e-3,
                density_from_lwc(condition.fog_liquid_water_g_m3, fog_spec->radius_um)),
            fog_spec->water_temperature_k);
    }
    if (cloud_spec && condition.kind == WeatherKind::Cloud) {
        set.cloud = make_population(
            HydrometeorSpecies::Cloud,
            SizeDistribution::monodisperse(
                cloud_spec->radius_um * 1e-3,
                density_from_lwc(condition.cloud_liquid_water_g_m3, cloud_spec->radius_um)),
            cloud_spec->water_temperature_k);
    }
    if (haze_spec) {
        set.haze = make_population(
            HydrometeorSpecies::Fog,
            SizeDistribution::monodisperse(haze_spec->radius_um * 1e-3,
                                           haze_spec->number_density_m3),
            haze_spec->water_temperature_k);
        set.haze_base_km = haze_base_km;
        set.haze_top_km = haze_top_km;
    }
    return set;
}

LinkInputs Scenario::link_inputs(const BandConfig& band, const WeatherCondition& condition,
                                 const PopulationSet& populations) const {
    LinkInputs inputs;
    inputs.geometry = geometry;
    inputs.band = band;
    inputs.weather = condition;
    inputs.atmosphere = atmosphere;
    inputs.populations = populations;
    inputs.turbulence = turbulence;
    inputs.catalogs = catalogs;
    return inputs;
}

AttenuationBreakdown Scenario::budget_for(const BandConfig& band,
                                          const WeatherCondition& condition) const {
    const PopulationSet populations = build_populations(condition);
    return link_budget(link_inputs(band, condition, populations));
}

CsvWriter::CsvWriter(std::string path) : path_(std::move(path)) {}

void CsvWriter::header(const std::vector<std::string>& columns) { row(columns); }

void CsvWriter::row(const std::vector<std::string>& cells) {
    for (std::size_t i = 0; i < cells.size(); ++i) {
        if (i) buffer_ += ',';
        buffer_ += cells[i];
    }
    buffer_ += '\n';
}

void CsvWriter::close() {
    std::ofstream out(path_, std::ios::binary);
    if (!out) {
        throw std::runtime_error("csv: cannot write " + path_);
    }
    out << buffer_;
}

std::string CsvWriter::num(double value) {
    char buf[32];
    std::snprintf(buf, sizeof(buf), "%.10g", value);
    return buf;
}

}  // namespace saglink
