#include "saglink/scattering.hpp"

#include <algorithm>
#include <cmath>
#include <string>
#include <vector>

#include "saglink/constants.hpp"

namespace saglink {

const char* regime_name(ScatteringRegime r) {
    return r == ScatteringRegime::Rayleigh ? "Rayleigh" : "Mie";
}

const char* species_name(HydrometeorSpecies species) {
    switch (species) {
        case HydrometeorSpecies::Rain: return "Rain";
        case HydrometeorSpecies::Fog: return "Fog";
        case HydrometeorSpecies::Cloud: return "Cloud";
    }
    return "?";
}

double size_parameter(double radius_m, double wavelength_m) {
    if (!(radius_m > 0.0) || !(wavelength_m > 0.0)) {
        throw std::domain_error("size_parameter: radius and wavelength must be > 0");
    }
    return 2.0 * kPi * radius_m / wavelength_m;
}

ScatteringRegime regime(double alpha) {
    if (!(alpha > 0.0)) {
        throw std::domain_error("regime: alpha must be > 0");
    }
    return alpha < 0.1 ? ScatteringRegime::Rayleigh : ScatteringRegime::Mie;
}

Efficiencies mie_efficiencies(double alpha, std::complex<double> m, int term_cap) {
    if (!(alpha > 0.0)) {
        throw std::domain_error("mie_efficiencies: alpha must be > 0");
    }
    if (!std::isfinite(m.real()) || !std::isfinite(m.imag())) {
        throw std::domain_error("mie_efficiencies: refractive index must be finite");
    }
    const int n_max = static_cast<int>(std::ceil(alpha + 4.0 * std::cbrt(alpha) + 2.0));
    if (n_max > term_cap) {
        throw resource_error("mie_efficiencies: series order " + std::to_string(n_max) +
                             " exceeds cap " + std::to_string(term_cap));
    }

    using cd = std::complex<double>;
    const cd mx = m * alpha;

    // Logarithmic derivative D_n(mx) by downward recurrence, started well
    // above the truncation order for stability.
    const int n_start = std::max(n_max, static_cast<int>(std::ceil(std::abs(mx)))) + 16;
    std::vector<cd> d(static_cast<std::size_t>(n_start) + 1, cd(0.0, 0.0));
    for (int n = n_start; n >= 1; --n) {
        const cd rn = cd(n, 0.0) / mx;
        d[n - 1] = rn - 1.0 / (d[n] + rn);
    }

    // Riccati-Bessel psi_n(x) and chi_n(x) by upward recurrence.
    double psi_nm1 = std::cos(alpha);   // psi_{-1}
    double psi_n = std::sin(alpha);     // psi_0
    double chi_nm1 = -std::sin(alpha);  // chi_{-1}
    double chi_n = std::cos(alpha);     // chi_0
    cd xi_nm1(psi_nm1, -chi_nm1);
    cd xi_n(psi_n, -chi_n);

    double q_ext = 0.0;
    double q_sca = 0.0;
    for (int n = 1; n <= n_max; ++n) {
        const double fn = (2.0 * n - 1.0) / alpha;
        const double psi = fn * psi_n - psi_nm1;
        const double chi = fn * chi_n - chi_nm1;
        const cd xi(psi, -chi);

        const cd da = d[n] / m + cd(n, 0.0) / alpha;
        const cd db = d[n] * m + cd(n, 0.0) / alpha;
        const cd a_n = (da * psi - psi_n) / (da * xi - xi_n);
        const cd b_n = (db * psi - psi_n) / (db * xi - xi_n);

        const double w = 2.0 * n + 1.0;
        q_ext += w * (a_n.real() + b_n.real());
        q_sca += w * (std::norm(a_n) + std::norm(b_n));

        psi_nm1 = psi_n;
        psi_n = psi;
        chi_nm1 = chi_n;
        chi_n = chi;
        xi_nm1 = xi_n;
        xi_n = xi;
    }

    const double scale = 2.0 / (alpha * alpha);
    Efficiencies out;
    out.q_ext = scale * q_ext;
    out.q_sca = scale * q_sca;
    out.q_abs = out.q_ext - out.q_sca;
    return out;
}

Efficiencies rayleigh_efficiencies(double alpha, std::complex<double> m) {
    if (!(alpha > 0.0)) {
        throw std::domain_error("rayleigh_efficiencies: alpha must be > 0");
    }
    const std::complex<double> m2 = m * m;
    const std::complex<double> denom = m2 + 2.0;
    if (std::abs(denom) < 1e-12) {
        throw std::domain_error("rayleigh_efficiencies: m^2 = -2 resonance");
    }
    const std::complex<double> k = (m2 - 1.0) / denom;
    Efficiencies out;
    out.q_sca = (8.0 / 3.0) * std::pow(alpha, 4) * std::norm(k);
    out.q_abs = 4.0 * alpha * k.imag();
    out.q_ext = out.q_sca + out.q_abs;
    return out;
}

MieResult cross_section(double radius_m, double wavelength_m, std::complex<double> m,
                        int term_cap) {
    const double alpha = size_parameter(radius_m, wavelength_m);
    const Efficiencies q = regime(alpha) == ScatteringRegime::Rayleigh
                               ? rayleigh_efficiencies(alpha, m)
                               : mie_efficiencies(alpha, m, term_cap);
    const double geom = kPi * radius_m * radius_m;
    MieResult out;
    out.q_ext = q.q_ext;
    out.q_sca = q.q_sca;
    out.q_abs = q.q_abs;
    out.sigma_ext_m2 = q.q_ext * geom;
    out.sigma_sca_m2 = q.q_sca * geom;
    out.sigma_abs_m2 = q.q_abs * geom;
    return out;
}

std::complex<double> water_refractive_index(double frequency_hz, double temperature_k) {
    if (!(frequency_hz > 0.0) || !(temperature_k > 0.0)) {
        throw std::domain_error("water_refractive_index: inputs must be > 0");
    }
    // Near-infrared window around 1550 nm: fixed tabulated value.
    if (frequency_hz >= 1.0e14) {
        return {1.315, 1.0e-4};
    }
    if (frequency_hz > 1.1e12) {
        throw std::out_of_range(
            "water_refractive_index: no model between 1.1 THz and 100 THz");
    }
    // Double-Debye permittivity of liquid water (radio through sub-THz).
    const double theta = 300.0 / temperature_k;
    const double eps0 = 77.66 + 103.3 * (theta - 1.0);
    const double eps1 = 0.0671 * eps0;
    const double eps2 = 3.52;
    const double f_ghz = frequency_hz * 1e-9;
    const double g1 = 20.20 - 146.0 * (theta - 1.0) + 316.0 * (theta - 1.0) * (theta - 1.0);
    const double g2 = 39.8 * g1;
    const double r1 = f_ghz / g1;
    const double r2 = f_ghz / g2;
    const double eps_re =
        (eps0 - eps1) / (1.0 + r1 * r1) + (eps1 - eps2) / (1.0 + r2 * r2) + eps2;
    const double eps_im =
        r1 * (eps0 - eps1) / (1.0 + r1 * r1) + r2 * (eps1 - eps2) / (1.0 + r2 * r2);
    // Principal square root keeps Im(m) >= 0 for a lossy medium.
    return std::sqrt(std::complex<double>(eps_re, eps_im));
}

SizeDistribution SizeDistribution::monodisperse(double radius_mm, double number_density_m3) {
    SizeDistribution d;
    d.kind = Kind::Monodisperse;
    d.radius_mm = radius_mm;
    d.number_density_m3 = number_density_m3;
    return d;
}

SizeDistribution SizeDistribution::marshall_palmer(double rain_rate_mm_h, double n0) {
    SizeDistribution d;
    d.kind = Kind::MarshallPalmer;
    d.n0_m3_mm = n0;
    d.lambda_mm = 4.1 * std::pow(rain_rate_mm_h, -0.21);
    return d;
}

SizeDistribution SizeDistribution::modified_gamma(double shape, double scale_mm,
                                                  double total_density_m3) {
    SizeDistribution d;
    d.kind = Kind::ModifiedGamma;
    d.shape = shape;
    d.scale_mm = scale_mm;
    d.total_density_m3 = total_density_m3;
    return d;
}

void SizeDistribution::validate() const {
    switch (kind) {
        case Kind::Monodisperse:
            if (!(radius_mm > 0.0) || number_density_m3 < 0.0) {
                throw std::invalid_argument(
                    "size distribution: monodisperse radius must be > 0, density >= 0");
            }
            break;
        case Kind::MarshallPalmer:
            if (!(n0_m3_mm > 0.0) || !(lambda_mm > 0.0)) {
                throw std::invalid_argument(
                    "size distribution: Marshall-Palmer N0 and lambda must be > 0");
            }
            break;
        case Kind::ModifiedGamma:
            if (!(shape > 0.0) || !(scale_mm > 0.0) || !(total_density_m3 > 0.0)) {
                throw std::invalid_argument(
                    "size distribution: modified-gamma parameters must be > 0");
            }
            break;
    }
}

void ParticlePopulation::validate() const {
    distribution.validate();
    if (!refractive_index) {
        throw std::invalid_argument("particle population: refractive index model missing");
    }
}

namespace {

// Adaptive Simpson. The depth cap bounds work on integrands with fine
// interference ripple (large optical size parameters), where the ripple
// contribution is orders of magnitude below the envelope integral.
double adaptive_simpson(const std::function<double(double)>& f, double a, double b,
                        double fa, double fm, double fb, double whole, double tol,
                        int depth) {
    const double m = 0.5 * (a + b);
    const double lm = 0.5 * (a + m);
    const double rm = 0.5 * (m + b);
    const double flm = f(lm);
    const double frm = f(rm);
    const double left = (m - a) / 6.0 * (fa + 4.0 * flm + fm);
    const double right = (b - m) / 6.0 * (fm + 4.0 * frm + fb);
    const double delta = left + right - whole;
    if (depth <= 0 || std::abs(delta) <= 15.0 * tol) {
        return left + right + delta / 15.0;
    }
    return adaptive_simpson(f, a, m, fa, flm, fm, left, 0.5 * tol, depth - 1) +
           adaptive_simpson(f, m, b, fm, frm, fb, right, 0.5 * tol, depth - 1);
}

double integrate(const std::function<double(double)>& f, double a, double b, double rel_tol) {
    // Seed the recursion from a coarse composite pass so the tolerance is
    // scaled by a sound estimate of the full integral.
    const int seed_cells = 16;
    const double h = (b - a) / seed_cells;
    std::vector<double> fx(seed_cells + 1);
    for (int i = 0; i <= seed_cells; ++i) fx[i] = f(a + i * h);
    double coarse = 0.0;
    for (int i = 0; i < seed_cells; i += 2) {
        coarse += h / 3.0 * (fx[i] + 4.0 * fx[i + 1] + fx[i + 2]);
    }
    const double tol = std::max(std::abs(coarse) * rel_tol, 1e-300);
    double value = 0.0;
    for (int i = 0; i < seed_cells; i += 2) {
        const double lo = a + i * h;
        const double hi = lo + 2.0 * h;
        const double piece = h / 3.0 * (fx[i] + 4.0 * fx[i + 1] + fx[i + 2]);
        value += adaptive_simpson(f, lo, hi, fx[i], fx[i + 1], fx[i + 2], piece,
                                  tol / (seed_cells / 2), /*depth=*/9);
    }
    if (!std::isfinite(value)) {
        throw std::invalid_argument("specific_attenuation: distribution integral diverged");
    }
    return value;
}

}  // namespace

double specific_attenuation_db_km(const ParticlePopulation& population,
                                  double frequency_hz) {
    if (!(frequency_hz > 0.0)) {
        throw std::domain_error("specific_attenuation: frequency must be > 0");
    }
    population.validate();
    const double wavelength_m = kSpeedOfLight / frequency_hz;
    const auto m = population.refractive_index(frequency_hz);
    if (m.imag() < 0.0) {
        throw std::invalid_argument("specific_attenuation: Im(m) must be >= 0");
    }
    const SizeDistribution& dist = population.distribution;

    const auto sigma_ext = [&](double radius_m) {
        return cross_section(radius_m, wavelength_m, m).sigma_ext_m2;
    };

    double integral_per_m = 0.0;  // integral of N(r) sigma(r) dr, 1/m
    switch (dist.kind) {
        case SizeDistribution::Kind::Monodisperse: {
            if (dist.number_density_m3 == 0.0) return 0.0;
            integral_per_m = dist.number_density_m3 * sigma_ext(dist.radius_mm * 1e-3);
            break;
        }
        case SizeDistribution::Kind::MarshallPalmer: {
            // Characteristic radius of the exponential-in-diameter family.
            const double r_char_mm = 0.5 / dist.lambda_mm;
            const double lo_m = 0.01 * r_char_mm * 1e-3;
            const double hi_m = 10.0 * r_char_mm * 1e-3;
            const auto f = [&](double r_m) {
                const double d_mm = 2.0 * r_m * 1e3;
                // per meter of radius: x1000 (mm->m) and x2 (diameter->radius)
                const double n_per_m = dist.n0_m3_mm * std::exp(-dist.lambda_mm * d_mm) * 2e3;
                return n_per_m * sigma_ext(r_m);
            };
            integral_per_m = integrate(f, lo_m, hi_m, 1e-7);
            break;
        }
        case SizeDistribution::Kind::ModifiedGamma: {
            const double mode_mm = dist.shape * dist.scale_mm;
            const double lo_m = 0.01 * mode_mm * 1e-3;
            const double hi_m = 10.0 * mode_mm * 1e-3;
            // Normalization for total number density over r in mm.
            const double norm = dist.total_density_m3 /
                                (std::tgamma(dist.shape + 1.0) *
                                 std::pow(dist.scale_mm, dist.shape + 1.0));
            const auto f = [&](double r_m) {
                const double r_mm = r_m * 1e3;
                const double n_per_mm =
                    norm * std::pow(r_mm, dist.shape) * std::exp(-r_mm / dist.scale_mm);
                return n_per_mm * 1e3 * sigma_ext(r_m);
            };
            integral_per_m = integrate(f, lo_m, hi_m, 1e-7);
            break;
        }
    }
    return kNeperPerMeterToDbPerKm * integral_per_m;
}

}  // namespace saglink
