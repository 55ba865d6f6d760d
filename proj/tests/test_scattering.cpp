#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <complex>
#include <random>

#include "saglink/constants.hpp"
#include "saglink/scattering.hpp"

using namespace saglink;
using cd = std::complex<double>;

namespace {

// Independent high-order Mie oracle: same recurrences, hand-rolled here with
// a much higher start order and no shared code path shortcuts, used to pin
// the production series.
Efficiencies mie_oracle(double x, cd m, int extra_terms) {
    const int n_max = static_cast<int>(std::ceil(x + 4.0 * std::cbrt(x) + 2.0)) + extra_terms;
    const cd mx = m * x;
    const int n_start = n_max + static_cast<int>(std::ceil(std::abs(mx))) + 64;
    std::vector<cd> d(n_start + 1, cd(0, 0));
    for (int n = n_start; n >= 1; --n) {
        const cd rn = cd(n, 0) / mx;
        d[n - 1] = rn - 1.0 / (d[n] + rn);
    }
    double qe = 0.0, qs = 0.0;
    double psi_m1 = std::cos(x), psi0 = std::sin(x);
    double chi_m1 = -std::sin(x), chi0 = std::cos(x);
    cd xi0(psi0, -chi0);
    for (int n = 1; n <= n_max; ++n) {
        const double fn = (2.0 * n - 1.0) / x;
        const double psi = fn * psi0 - psi_m1;
        const double chi = fn * chi0 - chi_m1;
        const cd xi(psi, -chi);
        const cd da = d[n] / m + cd(n, 0) / x;
        const cd db = d[n] * m + cd(n, 0) / x;
        const cd an = (da * psi - psi0) / (da * xi - xi0);
        const cd bn = (db * psi - psi0) / (db * xi - xi0);
        qe += (2.0 * n + 1.0) * (an.real() + bn.real());
        qs += (2.0 * n + 1.0) * (std::norm(an) + std::norm(bn));
        psi_m1 = psi0; psi0 = psi;
        chi_m1 = chi0; chi0 = chi;
        xi0 = xi;
    }
    Efficiencies out;
    out.q_ext = 2.0 / (x * x) * qe;
    out.q_sca = 2.0 / (x * x) * qs;
    out.q_abs = out.q_ext - out.q_sca;
    return out;
}

}  // namespace

TEST_CASE("size parameter matches the Fig.-2 style grid") {
    // rain r = 2 mm at 0.3 THz (lambda ~ 1 mm)
    const double lambda_03 = kSpeedOfLight / 0.3e12;
    CHECK(size_parameter(2e-3, lambda_03) ==
          doctest::Approx(2.0 * kPi * 2e-3 / lambda_03));
    CHECK(size_parameter(2e-3, lambda_03) == doctest::Approx(12.57).epsilon(2e-3));
    // fog r = 20 um at 0.02 THz (lambda ~ 15 mm)
    const double lambda_002 = kSpeedOfLight / 0.02e12;
    CHECK(size_parameter(20e-6, lambda_002) == doctest::Approx(0.00838).epsilon(2e-3));
    // fog r = 20 um at 1550 nm
    CHECK(size_parameter(20e-6, 1550e-9) == doctest::Approx(81.1).epsilon(2e-3));
    CHECK_THROWS_AS(size_parameter(0.0, 1.0), std::domain_error);
    CHECK_THROWS_AS(size_parameter(1.0, -1.0), std::domain_error);
}

TEST_CASE("regime split at alpha = 0.1, boundary to Mie") {
    CHECK(regime(0.00838) == ScatteringRegime::Rayleigh);
    CHECK(regime(0.0999) == ScatteringRegime::Rayleigh);
    CHECK(regime(0.1) == ScatteringRegime::Mie);
    CHECK(regime(12.57) == ScatteringRegime::Mie);
    CHECK_THROWS_AS(regime(0.0), std::domain_error);
}

TEST_CASE("Rayleigh closed form basics") {
    const Efficiencies lossless = rayleigh_efficiencies(0.05, cd(1.33, 0.0));
    CHECK(lossless.q_abs == doctest::Approx(0.0));
    // alpha^4 law: halving alpha scales scattering by 1/16.
    const Efficiencies a = rayleigh_efficiencies(0.08, cd(1.33, 0.0));
    const Efficiencies b = rayleigh_efficiencies(0.04, cd(1.33, 0.0));
    CHECK(a.q_sca / b.q_sca == doctest::Approx(16.0));
    CHECK_THROWS_AS(rayleigh_efficiencies(0.05, std::sqrt(cd(-2.0, 0.0))),
                    std::domain_error);
}

TEST_CASE("Mie reduces to Rayleigh for small spheres") {
    // Water-like indices across the band sweep.
    const cd indices[] = {cd(2.5, 1.3), cd(2.47, 0.92), cd(6.4, 2.9), cd(1.315, 1e-4)};
    for (const cd m : indices) {
        for (double alpha : {0.001, 0.005, 0.008}) {
            const Efficiencies mie = mie_efficiencies(alpha, m);
            const Efficiencies ray = rayleigh_efficiencies(alpha, m);
            CHECK(std::abs(mie.q_ext - ray.q_ext) / mie.q_ext < 0.01);
        }
    }
}

TEST_CASE("Mie-Rayleigh agreement over 100 random small spheres") {
    std::mt19937_64 rng(20250810);
    std::uniform_real_distribution<double> alpha_dist(1e-4, 0.01);
    std::uniform_real_distribution<double> re_dist(1.2, 7.0);
    std::uniform_real_distribution<double> im_dist(1e-4, 3.0);
    for (int i = 0; i < 100; ++i) {
        const double alpha = alpha_dist(rng);
        const cd m(re_dist(rng), im_dist(rng));
        const Efficiencies mie = mie_efficiencies(alpha, m);
        const Efficiencies ray = rayleigh_efficiencies(alpha, m);
        REQUIRE(mie.q_ext > 0.0);
        CHECK(std::abs(mie.q_ext - ray.q_ext) / mie.q_ext < 0.01);
    }
}

TEST_CASE("extinction paradox: Q_ext -> 2 for large absorbing spheres") {
    for (double alpha : {100.0, 200.0, 350.0, 500.0}) {
        const Efficiencies q = mie_efficiencies(alpha, cd(1.33, 0.01));
        CHECK(q.q_ext > 1.8);
        CHECK(q.q_ext < 2.5);
    }
    // Brute-force high-truncation oracle at alpha = 200.
    const Efficiencies q = mie_efficiencies(200.0, cd(1.33, 0.01));
    const Efficiencies oracle = mie_oracle(200.0, cd(1.33, 0.01), 40);
    CHECK(q.q_ext == doctest::Approx(oracle.q_ext).epsilon(1e-8));
}

TEST_CASE("lossless spheres absorb nothing") {
    for (double alpha : {0.5, 3.0, 20.0}) {
        const Efficiencies q = mie_efficiencies(alpha, cd(1.5, 0.0));
        CHECK(std::abs(q.q_abs) < 1e-9 * q.q_ext);
    }
}

TEST_CASE("efficiencies are consistent and non-negative") {
    std::mt19937_64 rng(7);
    std::uniform_real_distribution<double> alpha_dist(0.01, 50.0);
    std::uniform_real_distribution<double> re_dist(1.1, 3.0);
    std::uniform_real_distribution<double> im_dist(0.0, 1.5);
    for (int i = 0; i < 200; ++i) {
        const double alpha = alpha_dist(rng);
        const Efficiencies q = mie_efficiencies(alpha, cd(re_dist(rng), im_dist(rng)));
        CHECK(q.q_ext >= 0.0);
        CHECK(q.q_sca >= 0.0);
        CHECK(q.q_abs >= -1e-9 * q.q_ext);
        CHECK(q.q_ext == doctest::Approx(q.q_sca + q.q_abs).epsilon(1e-9));
    }
}

TEST_CASE("Mie series is stable under a raised truncation cap") {
    const Efficiencies base = mie_efficiencies(35.0, cd(2.5, 1.3));
    const Efficiencies oracle = mie_oracle(35.0, cd(2.5, 1.3), 200);
    CHECK(base.q_ext == doctest::Approx(oracle.q_ext).epsilon(1e-9));
    CHECK(base.q_sca == doctest::Approx(oracle.q_sca).epsilon(1e-9));
}

TEST_CASE("series order above the cap raises a resource error") {
    CHECK_THROWS_AS(mie_efficiencies(25000.0, cd(1.33, 0.01)), resource_error);
    CHECK_NOTHROW(mie_efficiencies(25000.0, cd(1.33, 0.01), 30000));
}

TEST_CASE("water refractive index model") {
    const cd m_thz = water_refractive_index(0.3e12, 288.15);
    CHECK(m_thz.real() == doctest::Approx(2.47).epsilon(0.05));
    CHECK(m_thz.imag() > 0.5);
    CHECK(m_thz.imag() < 1.5);
    const cd m_fso = water_refractive_index(1.934e14, 288.15);
    CHECK(m_fso.real() == doctest::Approx(1.315));
    CHECK(m_fso.imag() == doctest::Approx(1e-4));
    CHECK_THROWS_AS(water_refractive_index(5e12, 288.15), std::out_of_range);
}

TEST_CASE("cross_section fills absolute areas") {
    const double r = 2e-3;
    const double lambda = 1e-3;
    const MieResult res = cross_section(r, lambda, cd(2.5, 1.3));
    CHECK(res.sigma_ext_m2 == doctest::Approx(res.q_ext * kPi * r * r));
    CHECK(res.sigma_ext_m2 ==
          doctest::Approx(res.sigma_sca_m2 + res.sigma_abs_m2).epsilon(1e-9));
}

TEST_CASE("monodisperse specific attenuation collapses to N sigma") {
    ParticlePopulation pop;
    pop.species = HydrometeorSpecies::Fog;
    pop.distribution = SizeDistribution::monodisperse(0.02, 3.0e6);
    pop.refractive_index = [](double f) { return water_refractive_index(f, 283.0); };
    const double f = 0.3e12;
    const double gamma = specific_attenuation_db_km(pop, f);
    const MieResult res = cross_section(20e-6, kSpeedOfLight / f,
                                        water_refractive_index(f, 283.0));
    CHECK(gamma ==
          doctest::Approx(kNeperPerMeterToDbPerKm * 3.0e6 * res.sigma_ext_m2)
              .epsilon(1e-9));

    pop.distribution.number_density_m3 = 0.0;
    CHECK(specific_attenuation_db_km(pop, f) == 0.0);
}

TEST_CASE("specific attenuation is linear in number density") {
    ParticlePopulation pop;
    pop.species = HydrometeorSpecies::Cloud;
    pop.distribution = SizeDistribution::monodisperse(0.01, 1.0e7);
    pop.refractive_index = [](double f) { return water_refractive_index(f, 273.15); };
    const double g1 = specific_attenuation_db_km(pop, 0.3e12);
    pop.distribution.number_density_m3 *= 2.0;
    const double g2 = specific_attenuation_db_km(pop, 0.3e12);
    CHECK(g2 == doctest::Approx(2.0 * g1).epsilon(1e-12));
}

namespace {

ParticlePopulation marshall_palmer_rain(double rate_mm_h) {
    ParticlePopulation pop;
    pop.species = HydrometeorSpecies::Rain;
    pop.distribution = SizeDistribution::marshall_palmer(rate_mm_h);
    pop.refractive_index = [](double f) { return water_refractive_index(f, 275.0); };
    return pop;
}

// Fixed-grid Simpson oracle over r in [0.05, 5] mm.
double rain_quadrature_oracle(double rate_mm_h, double f_hz) {
    const double lambda_mm = 4.1 * std::pow(rate_mm_h, -0.21);
    const double wavelength = kSpeedOfLight / f_hz;
    const cd m = water_refractive_index(f_hz, 275.0);
    const int cells = 2000;
    const double lo = 0.05e-3, hi = 5e-3;
    const double h = (hi - lo) / cells;
    const auto integrand = [&](double r_m) {
        const double d_mm = 2.0 * r_m * 1e3;
        const double n_per_m = 8000.0 * std::exp(-lambda_mm * d_mm) * 2e3;
        return n_per_m * cross_section(r_m, wavelength, m).sigma_ext_m2;
    };
    double acc = integrand(lo) + integrand(hi);
    for (int i = 1; i < cells; ++i) {
        acc += integrand(lo + i * h) * (i % 2 ? 4.0 : 2.0);
    }
    return kNeperPerMeterToDbPerKm * acc * h / 3.0;
}

}  // namespace

TEST_CASE("Marshall-Palmer rain attenuation against the quadrature oracle") {
    const double gamma = specific_attenuation_db_km(marshall_palmer_rain(25.0), 0.3e12);
    const double oracle = rain_quadrature_oracle(25.0, 0.3e12);
    CHECK(gamma > 0.0);
    // Production range is [0.01, 10] x characteristic radius; the oracle uses
    // the fixed [0.05, 5] mm window, so agreement is a few percent.
    CHECK(gamma == doctest::Approx(oracle).epsilon(0.05));
    // Rain scatters far harder at 0.3 THz than at 0.02 THz.
    const double gamma_mmw = specific_attenuation_db_km(marshall_palmer_rain(25.0), 0.02e12);
    CHECK(gamma > gamma_mmw);
}

TEST_CASE("rain at 0.3 THz dominates fog at 0.1 g/m^3") {
    ParticlePopulation fog;
    fog.species = HydrometeorSpecies::Fog;
    // 0.1 g/m^3 of 20 um droplets.
    const double r_m = 20e-6;
    const double mass = 4.0 / 3.0 * kPi * r_m * r_m * r_m * kWaterDensity;
    fog.distribution = SizeDistribution::monodisperse(0.02, 0.1e-3 / mass);
    fog.refractive_index = [](double f) { return water_refractive_index(f, 283.0); };
    const double gamma_fog = specific_attenuation_db_km(fog, 0.3e12);
    const double gamma_rain = specific_attenuation_db_km(marshall_palmer_rain(25.0), 0.3e12);
    CHECK(gamma_rain > gamma_fog);
}

TEST_CASE("distribution validation") {
    SizeDistribution bad = SizeDistribution::monodisperse(-1.0, 10.0);
    CHECK_THROWS_AS(bad.validate(), std::invalid_argument);
    ParticlePopulation pop;
    pop.distribution = SizeDistribution::monodisperse(0.02, 1e6);
    pop.refractive_index = nullptr;
    CHECK_THROWS_AS(pop.validate(), std::invalid_argument);
}
