#include "saglink/absorption.hpp"

#include <algorithm>
#include <cmath>
#include <cstdlib>
#include <fstream>
#include <stdexcept>

#include <json.hpp>

#include "saglink/constants.hpp"

namespace saglink {

const char* absorber_name(AbsorberSpecies species) {
    return species == AbsorberSpecies::H2O ? "H2O" : "O2";
}

std::string default_data_dir() {
    if (const char* env = std::getenv("SAGLINK_DATA_DIR")) {
        return env;
    }
    return SAGLINK_DATA_DIR;
}

LineCatalog LineCatalog::load(const std::string& path) {
    std::ifstream in(path);
    if (!in) {
        throw std::invalid_argument("line catalog: cannot open " + path);
    }
    nlohmann::json j = nlohmann::json::parse(in);

    LineCatalog cat;
    const std::string species = j.at("species").get<std::string>();
    if (species == "H2O") {
        cat.species = AbsorberSpecies::H2O;
    } else if (species == "O2") {
        cat.species = AbsorberSpecies::O2;
    } else {
        throw std::invalid_argument("line catalog: unknown species " + species);
    }
    cat.reference_temperature_k = j.at("reference_temperature_k").get<double>();
    cat.reference_pressure_pa = j.at("reference_pressure_pa").get<double>();
    cat.intensity_temperature_exponent =
        j.at("intensity_temperature_exponent").get<double>();
    cat.coverage_min_hz = j.at("coverage_min_hz").get<double>();
    cat.coverage_max_hz = j.at("coverage_max_hz").get<double>();
    cat.provenance = j.value("provenance", "");
    for (const auto& line : j.at("lines")) {
        SpectralLine s;
        s.center_frequency_hz = line.at("center_frequency_hz").get<double>();
        s.line_intensity_hz_m2 = line.at("line_intensity_hz_m2").get<double>();
        s.air_broadening_halfwidth_hz_pa =
            line.at("air_broadening_halfwidth_hz_pa").get<double>();
        s.temperature_exponent = line.at("temperature_exponent").get<double>();
        s.lower_state_energy_j = line.at("lower_state_energy_j").get<double>();
        cat.lines.push_back(s);
    }
    cat.validate();
    return cat;
}

void LineCatalog::validate() const {
    if (lines.empty()) {
        throw std::invalid_argument("line catalog: no lines");
    }
    if (!(reference_temperature_k > 0.0) || !(reference_pressure_pa > 0.0)) {
        throw std::invalid_argument("line catalog: reference state must be positive");
    }
    if (!(coverage_min_hz > 0.0) || !(coverage_max_hz > coverage_min_hz)) {
        throw std::invalid_argument("line catalog: bad coverage range");
    }
    for (std::size_t i = 0; i < lines.size(); ++i) {
        const SpectralLine& s = lines[i];
        if (!(s.center_frequency_hz > 0.0) || s.line_intensity_hz_m2 < 0.0 ||
            !(s.air_broadening_halfwidth_hz_pa > 0.0)) {
            throw std::invalid_argument("line catalog: invalid line record");
        }
        if (i > 0 && s.center_frequency_hz <= lines[i - 1].center_frequency_hz) {
            throw std::invalid_argument("line catalog: lines must be sorted by frequency");
        }
    }
}

LineCatalog load_default_h2o_catalog() {
    return LineCatalog::load(default_data_dir() + "/h2o_lines.json");
}

LineCatalog load_default_o2_catalog() {
    return LineCatalog::load(default_data_dir() + "/o2_lines.json");
}

namespace {

double molecule_density_m3(const LineCatalog& catalog, double temperature_k,
                           double pressure_pa, double water_vapor_density_g_m3) {
    switch (catalog.species) {
        case AbsorberSpecies::H2O:
            return water_vapor_density_g_m3 * 1e-3 / kWaterMolarMass * kAvogadro;
        case AbsorberSpecies::O2:
            return 0.20946 * pressure_pa / (kBoltzmann * temperature_k);
    }
    return 0.0;
}

}  // namespace

double absorption_coefficient_db_km(const LineCatalog& catalog, double frequency_hz,
                                    double temperature_k, double pressure_pa,
                                    double water_vapor_density_g_m3) {
    if (!(temperature_k > 0.0) || !(pressure_pa > 0.0) || water_vapor_density_g_m3 < 0.0) {
        throw std::domain_error("absorption_coefficient: invalid atmospheric state");
    }
    if (frequency_hz < catalog.coverage_min_hz || frequency_hz > catalog.coverage_max_hz) {
        throw std::out_of_range("absorption_coefficient: frequency outside catalog coverage");
    }
    const double n = molecule_density_m3(catalog, temperature_k, pressure_pa,
                                         water_vapor_density_g_m3);
    if (n == 0.0) return 0.0;

    const double t_ratio = catalog.reference_temperature_k / temperature_k;
    const double intensity_scale =
        std::pow(t_ratio, catalog.intensity_temperature_exponent);
    const double boltzmann_arg =
        (1.0 / temperature_k - 1.0 / catalog.reference_temperature_k) / kBoltzmann;

    double sum = 0.0;  // integral cross-section density, 1/m
    for (const SpectralLine& line : catalog.lines) {
        const double s = line.line_intensity_hz_m2 * intensity_scale *
                         std::exp(-line.lower_state_energy_j * boltzmann_arg);
        const double gamma = line.air_broadening_halfwidth_hz_pa * pressure_pa *
                             std::pow(t_ratio, line.temperature_exponent);
        const double f0 = line.center_frequency_hz;
        // Van Vleck-Weisskopf shape: (f/f0)^2 Lorentzian pair.
        const double d_minus = frequency_hz - f0;
        const double d_plus = frequency_hz + f0;
        const double shape = (frequency_hz / f0) * (frequency_hz / f0) / kPi *
                             (gamma / (d_minus * d_minus + gamma * gamma) +
                              gamma / (d_plus * d_plus + gamma * gamma));
        sum += n * s * shape;
    }
    return kNeperPerMeterToDbPerKm * sum;
}

double absorption_coefficient_db_km(std::span<const LineCatalog> catalogs,
                                    double frequency_hz, double temperature_k,
                                    double pressure_pa,
                                    double water_vapor_density_g_m3) {
    double total = 0.0;
    for (const LineCatalog& catalog : catalogs) {
        total += absorption_coefficient_db_km(catalog, frequency_hz, temperature_k,
                                              pressure_pa, water_vapor_density_g_m3);
    }
    return total;
}

namespace {

constexpr double kFineStepKm = 0.1;
constexpr double kCoarseStepKm = 1.0;
constexpr double kStepSwitchKm = 30.0;

// Integration breakpoints: a fixed global altitude grid keeps the integral
// additive over concatenated segments.
std::vector<double> altitude_grid(double h0_km, double h1_km) {
    std::vector<double> grid;
    grid.push_back(h0_km);
    const double fine_end = std::min(h1_km, kStepSwitchKm);
    for (double h = std::ceil(h0_km / kFineStepKm) * kFineStepKm; h < fine_end;
         h += kFineStepKm) {
        if (h > grid.back() + 1e-12) grid.push_back(h);
    }
    if (h1_km > kStepSwitchKm) {
        for (double h = std::max(kStepSwitchKm, std::ceil(h0_km)); h < h1_km;
             h += kCoarseStepKm) {
            if (h > grid.back() + 1e-12) grid.push_back(h);
        }
    }
    if (h1_km > grid.back() + 1e-12) grid.push_back(h1_km);
    return grid;
}

}  // namespace

std::map<Layer, double> path_absorption_by_layer_db(
    std::span<const LineCatalog> catalogs, const AtmosphereProfile& profile,
    double frequency_hz, double h0_km, double h1_km, double elevation_deg) {
    if (!(h0_km >= 0.0) || !(h1_km >= h0_km)) {
        throw std::domain_error("path_absorption: need 0 <= h0 <= h1");
    }
    if (!(elevation_deg > 0.0) || elevation_deg > 90.0) {
        throw std::domain_error("path_absorption: elevation must be in (0, 90] deg");
    }
    std::map<Layer, double> by_layer;
    if (h1_km == h0_km) return by_layer;

    const double secant = 1.0 / std::sin(elevation_deg * kPi / 180.0);
    const auto k_of = [&](double h) {
        return absorption_coefficient_db_km(catalogs, frequency_hz,
                                            profile.temperature(h), profile.pressure(h),
                                            profile.water_vapor_density(h));
    };

    const std::vector<double> grid = altitude_grid(h0_km, h1_km);
    double k_prev = k_of(grid.front());
    for (std::size_t i = 1; i < grid.size(); ++i) {
        const double k_next = k_of(grid[i]);
        const double dh = grid[i] - grid[i - 1];
        const double cell_db = 0.5 * (k_prev + k_next) * dh * secant;
        const double mid = 0.5 * (grid[i] + grid[i - 1]);
        by_layer[profile.layer_of(mid)] += cell_db;
        k_prev = k_next;
    }
    return by_layer;
}

double path_absorption_db(std::span<const LineCatalog> catalogs,
                          const AtmosphereProfile& profile, double frequency_hz,
                          double h0_km, double h1_km, double elevation_deg) {
    double total = 0.0;
    for (const auto& [layer, db] :
         path_absorption_by_layer_db(catalogs, profile, frequency_hz, h0_km, h1_km,
                                     elevation_deg)) {
        total += db;
    }
    return total;
}

}  // namespace saglink
