#pragma once

#include <complex>
#include <functional>
#include <stdexcept>

namespace saglink {

/// Thrown when a computation would exceed a configured resource cap
/// (e.g. the Mie series truncation order).
struct resource_error : std::runtime_error {
    using std::runtime_error::runtime_error;
};

enum class ScatteringRegime { Rayleigh, Mie };

const char* regime_name(ScatteringRegime regime);

/// Size parameter alpha = 2*pi*r / wavelength. Both arguments in meters.
double size_parameter(double radius_m, double wavelength_m);

/// Rayleigh iff alpha < 0.1; the boundary itself classifies as Mie.
ScatteringRegime regime(double alpha);

/// Dimensionless single-sphere efficiencies. q_ext == q_sca + q_abs always
/// holds exactly for Mie results (q_abs is computed as the difference).
struct Efficiencies {
    double q_ext = 0.0;
    double q_sca = 0.0;
    double q_abs = 0.0;
};

/// Efficiencies plus absolute cross-sections (sigma_x = q_x * pi * r^2, m^2).
struct MieResult {
    double q_ext = 0.0, q_sca = 0.0, q_abs = 0.0;
    double sigma_ext_m2 = 0.0, sigma_sca_m2 = 0.0, sigma_abs_m2 = 0.0;
};

inline constexpr int kDefaultMieTermCap = 20000;

/**
 * Full Mie series via the standard Riccati-Bessel recurrences
 * (logarithmic-derivative downward recursion for the internal field).
 * Truncation order n_max = ceil(alpha + 4*alpha^(1/3) + 2).
 *
 * m is the complex refractive index with Im(m) >= 0 for a passive sphere.
 * Throws resource_error when n_max exceeds term_cap.
 */
Efficiencies mie_efficiencies(double alpha, std::complex<double> m,
                              int term_cap = kDefaultMieTermCap);

/// Small-sphere closed form: Q_sca = (8/3) a^4 |K|^2, Q_abs = 4 a Im(K),
/// K = (m^2-1)/(m^2+2). Accuracy contract only for alpha < 0.1.
Efficiencies rayleigh_efficiencies(double alpha, std::complex<double> m);

/// Regime-dispatched cross-sections for a sphere of given radius.
MieResult cross_section(double radius_m, double wavelength_m, std::complex<double> m,
                        int term_cap = kDefaultMieTermCap);

/// Complex refractive index of liquid water from the double-Debye permittivity
/// model (valid 1 GHz .. 1.1 THz) plus a fixed near-infrared value at 1550 nm.
/// Frequencies between those validity ranges throw std::out_of_range.
std::complex<double> water_refractive_index(double frequency_hz, double temperature_k);

enum class HydrometeorSpecies { Rain, Fog, Cloud };

const char* species_name(HydrometeorSpecies species);

struct SizeDistribution {
    enum class Kind { Monodisperse, MarshallPalmer, ModifiedGamma };
    Kind kind = Kind::Monodisperse;

    // Monodisperse.
    double radius_mm = 0.0;
    double number_density_m3 = 0.0;

    // Marshall-Palmer in drop diameter: N(D) = n0 * exp(-lambda * D),
    // with N in m^-3 mm^-1 and D in mm.
    double n0_m3_mm = 8000.0;
    double lambda_mm = 0.0;

    // Modified gamma in drop radius: N(r) ~ r^shape * exp(-r/scale_mm),
    // normalized so the total number density is total_density_m3.
    double shape = 0.0;
    double scale_mm = 0.0;
    double total_density_m3 = 0.0;

    static SizeDistribution monodisperse(double radius_mm, double number_density_m3);
    static SizeDistribution marshall_palmer(double rain_rate_mm_h, double n0 = 8000.0);
    static SizeDistribution modified_gamma(double shape, double scale_mm,
                                           double total_density_m3);

    void validate() const;
};

struct ParticlePopulation {
    HydrometeorSpecies species = HydrometeorSpecies::Rain;
    SizeDistribution distribution;
    // Frequency (Hz) -> complex refractive index. Must satisfy Im(m) >= 0.
    std::function<std::complex<double>(double)> refractive_index;

    void validate() const;
};

/**
 * Specific attenuation gamma = 4.343e3 * integral N(r) sigma_ext(r) dr in
 * dB/km, with sigma_ext dispatched between the Mie series and the Rayleigh
 * closed form by regime(alpha). Distribution integrals use adaptive Simpson
 * quadrature (relative tolerance 1e-7) over [0.01, 10] x the characteristic
 * radius of the distribution.
 */
double specific_attenuation_db_km(const ParticlePopulation& population,
                                  double frequency_hz);

}  // namespace saglink
