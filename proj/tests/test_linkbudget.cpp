#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <vector>

#include "saglink/constants.hpp"
#include "saglink/linkbudget.hpp"

using namespace saglink;

namespace {

LinkGeometry satellite_geometry() {
    LinkGeometry g;
    g.ground_altitude_km = 0.0;
    g.platform_altitude_km = 2000.0;
    g.elevation_deg = 90.0;
    return g;
}

ParticlePopulation rain_population(double rate_mm_h) {
    ParticlePopulation pop;
    pop.species = HydrometeorSpecies::Rain;
    pop.distribution = SizeDistribution::marshall_palmer(rate_mm_h);
    pop.refractive_index = [](double f) { return water_refractive_index(f, 275.0); };
    return pop;
}

}  // namespace

TEST_CASE("FSPL hits the three band anchors") {
    const double d = 2000e3;
    const auto closed_form = [&](double f) {
        return 20.0 * std::log10(4.0 * kPi * d * f / kSpeedOfLight);
    };
    CHECK(fspl_db(0.02e12, d) == doctest::Approx(closed_form(0.02e12)).epsilon(1e-12));
    CHECK(std::abs(fspl_db(0.02e12, d) - 184.5) < 1.0);
    CHECK(std::abs(fspl_db(0.3e12, d) - 208.0) < 1.0);
    CHECK(std::abs(fspl_db(193.4e12, d) - 264.2) < 1.0);
    // Tighter pin against the rounded anchors.
    CHECK(fspl_db(0.02e12, d) == doctest::Approx(184.49).epsilon(5e-4));
    CHECK(fspl_db(0.3e12, d) == doctest::Approx(208.01).epsilon(5e-4));
    CHECK(fspl_db(193.4e12, d) == doctest::Approx(264.21).epsilon(5e-4));
}

TEST_CASE("FSPL grows with frequency and distance") {
    double prev = fspl_db(1e9, 1e3);
    for (double f = 2e9; f < 1e15; f *= 2.0) {
        const double v = fspl_db(f, 1e3);
        CHECK(v > prev);
        prev = v;
    }
    prev = fspl_db(1e10, 1e3);
    for (double d = 2e3; d < 1e8; d *= 2.0) {
        const double v = fspl_db(1e10, d);
        CHECK(v > prev);
        prev = v;
    }
    CHECK_THROWS_AS(fspl_db(0.0, 1e3), std::domain_error);
}

TEST_CASE("turbulence vanishes without refractive structure") {
    CnSquaredProfile calm;
    calm.ground_cn2_m_2_3 = 0.0;
    calm.wind_speed_m_s = 0.0;
    calm.background_cn2_m_2_3 = 0.0;
    CHECK(turbulence_loss_db(0.3e12, satellite_geometry(), calm) == 0.0);
    CnSquaredProfile hv;
    CHECK(turbulence_loss_db(0.3e12, satellite_geometry(), hv) > 0.0);
}

TEST_CASE("turbulence follows the f^(7/6) law exactly") {
    const LinkGeometry geom = satellite_geometry();
    CnSquaredProfile hv;
    const double l1 = turbulence_loss_db(0.02e12, geom, hv);
    const double l2 = turbulence_loss_db(0.3e12, geom, hv);
    CHECK(l2 / l1 == doctest::Approx(std::pow(15.0, 7.0 / 6.0)).epsilon(1e-6));
    CHECK(l2 / l1 == doctest::Approx(23.54).epsilon(1e-3));
    // Any random pair behaves the same.
    const double la = turbulence_loss_db(7.7e10, geom, hv);
    const double lb = turbulence_loss_db(1.31e12, geom, hv);
    CHECK(lb / la ==
          doctest::Approx(std::pow(1.31e12 / 7.7e10, 7.0 / 6.0)).epsilon(1e-6));
}

TEST_CASE("FSO turbulence exceeds THz by far more than 10x") {
    const LinkGeometry geom = satellite_geometry();
    CnSquaredProfile hv;
    const double thz = turbulence_loss_db(0.3e12, geom, hv);
    const double fso = turbulence_loss_db(193.4e12, geom, hv);
    CHECK(fso >= 10.0 * thz);
    // FSO loss stays a sane link-margin quantity for the default profile.
    CHECK(fso > 0.05);
    CHECK(fso < 20.0);
}

TEST_CASE("plasma loss: zero electrons give zero loss") {
    AtmosphereProfile profile;
    profile.electron_profile.peak_electron_density_m3 = 0.0;
    CHECK(plasma_loss_db(0.02e12, satellite_geometry(), profile) == 0.0);
}

TEST_CASE("plasma per-km coefficient stays under 1e-3 dB/km") {
    AtmosphereProfile profile;
    for (double f : {0.02e12, 0.1e12, 0.3e12, 1.0e12}) {
        for (double h = 60.0; h <= 1000.0; h += 5.0) {
            CHECK(plasma_coefficient_db_km(f, profile, h) < 1e-3);
        }
    }
}

TEST_CASE("plasma loss decreases with frequency") {
    AtmosphereProfile profile;
    const LinkGeometry geom = satellite_geometry();
    const double mmw = plasma_loss_db(0.02e12, geom, profile);
    const double thz = plasma_loss_db(0.3e12, geom, profile);
    CHECK(thz < mmw);
    // 1/f^2 scaling of collisional absorption, far above both the plasma and
    // collision frequencies.
    CHECK(mmw / thz == doctest::Approx(225.0).epsilon(1e-6));
    // Brute-force integral oracle.
    double oracle = 0.0;
    const double step = 0.01;
    for (double h = 60.0; h < 1000.0; h += step) {
        oracle += plasma_coefficient_db_km(0.02e12, profile, h + 0.5 * step) * step;
    }
    CHECK(mmw == doctest::Approx(oracle).epsilon(1e-3));
}

TEST_CASE("plasma loss refuses frequencies below the plasma frequency") {
    AtmosphereProfile profile;  // peak 1e12 m^-3 -> f_p ~ 9 MHz
    CHECK_THROWS_AS(plasma_loss_db(5.0e6, satellite_geometry(), profile),
                    std::domain_error);
}

TEST_CASE("clear weather carries zero hydrometeor loss") {
    WeatherCondition clear;
    BandConfig band;
    PopulationSet pops;
    const auto losses = weather_loss_db(clear, band, satellite_geometry(), pops);
    CHECK(losses.at(AttenuationFactor::Rain) == 0.0);
    CHECK(losses.at(AttenuationFactor::Fog) == 0.0);
    CHECK(losses.at(AttenuationFactor::Cloud) == 0.0);
}

TEST_CASE("missing population for the active weather is a config error") {
    WeatherCondition rain;
    rain.kind = WeatherKind::Rain;
    rain.rain_rate_mm_h = 10.0;
    BandConfig band;
    PopulationSet pops;  // no rain population
    CHECK_THROWS_AS(weather_loss_db(rain, band, satellite_geometry(), pops),
                    std::invalid_argument);
}

TEST_CASE("rain loss magnitudes by band") {
    WeatherCondition rain;
    rain.kind = WeatherKind::Rain;
    rain.rain_rate_mm_h = 25.0;
    rain.rain_top_km = 4.0;
    PopulationSet pops;
    pops.rain = rain_population(rain.rain_rate_mm_h);

    BandConfig thz;
    thz.carrier_frequency_hz = 0.3e12;
    const double thz_loss =
        weather_loss_db(rain, thz, satellite_geometry(), pops).at(AttenuationFactor::Rain);
    CHECK(thz_loss > 10.0);   // tens of dB
    CHECK(thz_loss < 100.0);

    BandConfig mmw;
    mmw.carrier_frequency_hz = 0.02e12;
    const double mmw_loss =
        weather_loss_db(rain, mmw, satellite_geometry(), pops).at(AttenuationFactor::Rain);
    CHECK(mmw_loss < 10.0);   // single-digit dB
    CHECK(mmw_loss > 0.5);
    CHECK(thz_loss > mmw_loss);
}

namespace {

LinkInputs default_inputs(const std::vector<LineCatalog>& cats, WeatherKind kind) {
    LinkInputs in;
    in.geometry = satellite_geometry();
    in.band.carrier_frequency_hz = 0.3e12;
    in.weather.kind = kind;
    in.weather.rain_rate_mm_h = 8.0;
    if (kind == WeatherKind::Rain) {
        in.populations.rain = rain_population(8.0);
    }
    in.catalogs = cats;
    return in;
}

}  // namespace

TEST_CASE("breakdown bookkeeping invariants") {
    const std::vector<LineCatalog> cats{load_default_h2o_catalog()};
    for (const WeatherKind kind : {WeatherKind::Clear, WeatherKind::Rain}) {
        const AttenuationBreakdown b = link_budget(default_inputs(cats, kind));
        double sum = 0.0;
        for (const auto& [factor, db] : b.per_factor_db) {
            CHECK(db >= 0.0);
            sum += db;
        }
        CHECK(b.total_db == doctest::Approx(sum).epsilon(1e-12));
        double layer_sum = 0.0;
        for (const auto& [layer, db] : b.per_layer_db) {
            CHECK(db >= 0.0);
            layer_sum += db;
        }
        CHECK(layer_sum ==
              doctest::Approx(b.total_db - b.factor(AttenuationFactor::FSPL))
                  .epsilon(1e-9));
        // Every factor key is present.
        CHECK(b.per_factor_db.size() == 8);
    }
}

TEST_CASE("THz clear sky: FSPL dominates, absorption a few dB") {
    const std::vector<LineCatalog> cats{load_default_h2o_catalog()};
    const AttenuationBreakdown b = link_budget(default_inputs(cats, WeatherKind::Clear));
    CHECK(b.factor(AttenuationFactor::FSPL) == doctest::Approx(208.0).epsilon(1e-3));
    CHECK(b.factor(AttenuationFactor::MolecularAbsorption) > 2.9);
    CHECK(b.factor(AttenuationFactor::MolecularAbsorption) < 8.9);
    CHECK(b.factor(AttenuationFactor::FSPL) > 0.9 * b.total_db);
    CHECK(b.sub_threshold(AttenuationFactor::Ionosphere));
}

TEST_CASE("layer shares normalize to 100 percent") {
    const std::vector<LineCatalog> cats{load_default_h2o_catalog()};
    const AttenuationBreakdown b = link_budget(default_inputs(cats, WeatherKind::Rain));
    const auto shares = layer_shares_percent(b);
    double sum = 0.0;
    for (const auto& [layer, pct] : shares) sum += pct;
    CHECK(sum == doctest::Approx(100.0).epsilon(1e-9));
    CHECK(shares.at(Layer::Troposphere) > 79.0);
    CHECK(shares.at(Layer::Stratosphere) >= 0.0);
    CHECK(shares.at(Layer::Stratosphere) <= 10.0);
}

TEST_CASE("layer shares are undefined without medium loss") {
    AttenuationBreakdown empty;
    empty.per_factor_db[AttenuationFactor::FSPL] = 200.0;
    empty.total_db = 200.0;
    CHECK_THROWS_AS(layer_shares_percent(empty), std::domain_error);
}

TEST_CASE("capacity basics") {
    BandConfig band;
    band.bandwidth_hz = 5e9;
    AttenuationBreakdown b;
    b.per_factor_db[AttenuationFactor::FSPL] = 208.0;
    b.total_db = 208.0;
    const CapacityResult base = capacity(b, band);
    CHECK(base.spectral_efficiency_bps_hz ==
          doctest::Approx(std::log2(1.0 + std::pow(10.0, base.snr_db / 10.0))));

    // Capacity sinks to zero as the total loss grows without bound.
    AttenuationBreakdown heavy = b;
    heavy.total_db = 500.0;
    CHECK(capacity(heavy, band).bits_per_s < 1e-3);
    heavy.total_db = 1000.0;
    CHECK(capacity(heavy, band).bits_per_s < 1e-12);

    // Monotone non-increasing in attenuation.
    double prev = base.bits_per_s;
    for (double extra = 1.0; extra < 200.0; extra += 1.0) {
        AttenuationBreakdown worse = b;
        worse.total_db += extra;
        const double c = capacity(worse, band).bits_per_s;
        CHECK(c <= prev);
        prev = c;
    }
}

TEST_CASE("3 dB of SNR buys one bit at high SNR") {
    BandConfig band;
    AttenuationBreakdown b;
    b.total_db = 160.0;
    const CapacityResult low = capacity(b, band);
    AttenuationBreakdown better = b;
    better.total_db = 157.0;
    const CapacityResult high = capacity(better, band);
    REQUIRE(low.snr_db > 20.0);
    CHECK(high.spectral_efficiency_bps_hz - low.spectral_efficiency_bps_hz ==
          doctest::Approx(1.0).epsilon(2e-3));
}

TEST_CASE("geometry and band validation") {
    LinkGeometry g;
    g.platform_altitude_km = -5.0;
    CHECK_THROWS_AS(g.validate(), std::invalid_argument);
    g = LinkGeometry{};
    g.elevation_deg = 0.0;
    CHECK_THROWS_AS(g.validate(), std::invalid_argument);
    g = LinkGeometry{};
    g.elevation_deg = 30.0;
    CHECK(g.path_length_km() == doctest::Approx(4000.0));

    BandConfig band;
    band.bandwidth_hz = 0.0;
    CHECK_THROWS_AS(band.validate(), std::invalid_argument);
}
