#pragma once

namespace saglink {

// Physical constants (SI).
inline constexpr double kSpeedOfLight = 299792458.0;        // m/s
inline constexpr double kBoltzmann = 1.380649e-23;          // J/K
inline constexpr double kAvogadro = 6.02214076e23;          // 1/mol
inline constexpr double kElectronCharge = 1.602176634e-19;  // C
inline constexpr double kElectronMass = 9.1093837015e-31;   // kg
inline constexpr double kVacuumPermittivity = 8.8541878128e-12;  // F/m
inline constexpr double kGravity = 9.80665;                 // m/s^2
inline constexpr double kDryAirMolarMass = 0.0289644;       // kg/mol
inline constexpr double kWaterMolarMass = 0.01801528;       // kg/mol
inline constexpr double kGasConstant = 8.31446261815324;    // J/(mol K)
inline constexpr double kWaterDensity = 1000.0;             // kg/m^3

// 10*log10(e) * 1000: converts a power attenuation coefficient in 1/m to dB/km.
inline constexpr double kNeperPerMeterToDbPerKm = 4342.944819032518;

inline constexpr double kPi = 3.14159265358979323846;

}  // namespace saglink
