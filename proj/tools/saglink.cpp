// Command-line front end: loads scenario files, runs the propagation /
// capacity / waveform sweeps and emits plot-ready CSV or JSON.

#include <cmath>
#include <cstdio>
#include <fstream>
#include <iostream>
#include <random>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>

#include "saglink/constants.hpp"
#include "saglink/scenario.hpp"
#include "saglink/waveform.hpp"

using nlohmann::json;
using namespace saglink;

namespace {

void write_text(const std::string& path, const std::string& text) {
    if (path.empty() || path == "-") {
        std::cout << text;
        return;
    }
    std::ofstream out(path, std::ios::binary);
    if (!out) {
        throw std::runtime_error("cannot write " + path);
    }
    out << text;
}

std::string csv_line(const std::vector<std::string>& cells) {
    std::string line;
    for (std::size_t i = 0; i < cells.size(); ++i) {
        if (i) line += ',';
        line += cells[i];
    }
    line += '\n';
    return line;
}

std::string num(double v) { return CsvWriter::num(v); }

Scenario load_scenario(const std::string& path) {
    return path.empty() ? Scenario::load_default() : Scenario::load(path);
}

WeatherCondition weather_variant(const Scenario& s, WeatherKind kind) {
    WeatherCondition w = s.weather;
    w.kind = kind;
    return w;
}

// --- xsection ---------------------------------------------------------------

int cmd_xsection(const std::vector<double>& freqs_thz, const std::vector<double>& radii_mm,
                 double water_temperature_k, const std::string& out,
                 const std::string& format) {
    if (freqs_thz.empty() || radii_mm.empty()) {
        throw std::invalid_argument("xsection: frequency and radius lists must be non-empty");
    }
    std::string csv = csv_line({"frequency_hz", "radius_m", "alpha", "regime", "q_ext",
                                "sigma_ext_m2"});
    json rows = json::array();
    for (const double f_thz : freqs_thz) {
        const double f_hz = f_thz * 1e12;
        const auto m = water_refractive_index(f_hz, water_temperature_k);
        for (const double r_mm : radii_mm) {
            const double r_m = r_mm * 1e-3;
            const double wavelength = kSpeedOfLight / f_hz;
            const double alpha = size_parameter(r_m, wavelength);
            const MieResult res = cross_section(r_m, wavelength, m);
            const char* reg = regime_name(regime(alpha));
            csv += csv_line({num(f_hz), num(r_m), num(alpha), reg, num(res.q_ext),
                             num(res.sigma_ext_m2)});
            rows.push_back({{"frequency_hz", f_hz},
                            {"radius_m", r_m},
                            {"alpha", alpha},
                            {"regime", reg},
                            {"q_ext", res.q_ext},
                            {"sigma_ext_m2", res.sigma_ext_m2}});
        }
    }
    write_text(out, format == "csv" ? csv : rows.dump(2) + "\n");
    return 0;
}

// --- budget / layers ----------------------------------------------------------

json breakdown_to_json(const AttenuationBreakdown& b) {
    json factors = json::object();
    for (const auto& [factor, db] : b.per_factor_db) {
        factors[factor_name(factor)] = {{"loss_db", db},
                                        {"sub_threshold", db < kSubThresholdDb}};
    }
    json layers = json::object();
    for (const auto& [layer, db] : b.per_layer_db) {
        layers[layer_name(layer)] = db;
    }
    return {{"per_factor", factors}, {"per_layer_medium_db", layers}, {"total_db", b.total_db}};
}

int cmd_budget(const std::string& scenario_path, const std::string& out,
               const std::string& format) {
    const Scenario s = load_scenario(scenario_path);
    json doc = json::object();
    std::string csv = csv_line({"band", "factor", "loss_db", "sub_threshold"});
    for (const BandConfig& band : s.bands) {
        const AttenuationBreakdown b = s.budget_for(band, s.weather);
        doc[band_label_name(band.label)] = breakdown_to_json(b);
        for (const auto& [factor, db] : b.per_factor_db) {
            csv += csv_line({band_label_name(band.label), factor_name(factor), num(db),
                             db < kSubThresholdDb ? "1" : "0"});
        }
        csv += csv_line({band_label_name(band.label), "Total", num(b.total_db), "0"});
    }
    write_text(out, format == "csv" ? csv : doc.dump(2) + "\n");
    return 0;
}

int cmd_layers(const std::string& scenario_path, const std::string& out,
               const std::string& format) {
    const Scenario s = load_scenario(scenario_path);
    json doc = json::object();
    std::string csv = csv_line({"band", "layer", "share_percent"});
    for (const BandConfig& band : s.bands) {
        const AttenuationBreakdown b = s.budget_for(band, s.weather);
        const auto shares = layer_shares_percent(b);
        json entry = json::object();
        for (const auto& [layer, pct] : shares) {
            entry[layer_name(layer)] = pct;
            csv += csv_line({band_label_name(band.label), layer_name(layer), num(pct)});
        }
        doc[band_label_name(band.label)] = entry;
    }
    write_text(out, format == "csv" ? csv : doc.dump(2) + "\n");
    return 0;
}

// --- capacity -----------------------------------------------------------------

int cmd_capacity(const std::string& scenario_path, bool sweep_weather,
                 const std::string& out, const std::string& format) {
    const Scenario s = load_scenario(scenario_path);
    std::vector<WeatherKind> kinds;
    if (sweep_weather) {
        kinds = {WeatherKind::Clear, WeatherKind::Rain, WeatherKind::Fog};
    } else {
        kinds = {s.weather.kind};
    }
    json doc = json::object();
    std::string csv = csv_line(
        {"band", "weather", "snr_db", "bits_per_s", "spectral_efficiency_bps_hz"});
    for (const BandConfig& band : s.bands) {
        json per_weather = json::object();
        for (const WeatherKind kind : kinds) {
            const WeatherCondition w = weather_variant(s, kind);
            const AttenuationBreakdown b = s.budget_for(band, w);
            const CapacityResult c = capacity(b, band);
            per_weather[weather_kind_name(kind)] = {
                {"snr_db", c.snr_db},
                {"bits_per_s", c.bits_per_s},
                {"spectral_efficiency_bps_hz", c.spectral_efficiency_bps_hz}};
            csv += csv_line({band_label_name(band.label), weather_kind_name(kind),
                             num(c.snr_db), num(c.bits_per_s),
                             num(c.spectral_efficiency_bps_hz)});
        }
        doc[band_label_name(band.label)] = per_weather;
    }
    write_text(out, format == "csv" ? csv : doc.dump(2) + "\n");
    return 0;
}

// --- waveform -------------------------------------------------------------------

WaveformFrame frame_from_spec(const json& spec, std::uint64_t seed) {
    const std::string family = spec.at("family").get<std::string>();
    const double fs = spec.value("sample_rate_hz", 1.0e6);
    if (family == "FMCW") {
        return fmcw_chirp(spec.at("sweep_bandwidth_hz").get<double>(),
                          spec.at("duration_s").get<double>(), fs,
                          spec.value("direction", "up") == "up");
    }
    std::mt19937_64 rng(seed);
    std::uniform_int_distribution<int> bits(0, 3);
    const auto qpsk = [&](int n) {
        cvec v(n);
        const double a = 1.0 / std::sqrt(2.0);
        for (auto& x : v) {
            const int b = bits(rng);
            x = {(b & 1) ? a : -a, (b & 2) ? a : -a};
        }
        return v;
    };
    if (family == "OFDM") {
        const int n = spec.at("subcarriers").get<int>();
        return ofdm_modulate(qpsk(n), n, spec.value("cp_length", 0), fs);
    }
    if (family == "DFTS_OFDM") {
        const int n = spec.at("subcarriers").get<int>();
        return dfts_modulate(qpsk(n), n, spec.value("cp_length", 0), fs);
    }
    if (family == "OTFS") {
        const int m = spec.at("delay_bins").get<int>();
        const int n = spec.at("doppler_bins").get<int>();
        return otfs_modulate(qpsk(m * n), m, n, fs);
    }
    if (family == "AFDM") {
        const int n = spec.at("subcarriers").get<int>();
        const double c1 = spec.contains("c1")
                              ? spec.at("c1").get<double>()
                              : afdm_c1_for_doppler(n, spec.value("max_doppler_bins", 1));
        return afdm_modulate(qpsk(n), c1, spec.value("c2", 0.0), fs);
    }
    throw std::invalid_argument("waveform: unknown family '" + family + "'");
}

int cmd_waveform(const std::string& spec_path, std::uint64_t seed, int jobs,
                 const std::string& out, const std::string& format) {
    std::ifstream in(spec_path);
    if (!in) {
        throw std::invalid_argument("waveform: cannot open spec " + spec_path);
    }
    json spec = json::parse(in);
    const std::string metric = spec.value("metric", "papr");
    const std::string family = spec.at("family").get<std::string>();

    if (metric == "papr") {
        json doc = {{"family", family}, {"metric", "papr"}, {"seed", seed}};
        std::string csv = csv_line({"family", "statistic", "papr_db"});
        const bool monte_carlo = (family == "OFDM" || family == "DFTS_OFDM") &&
                                 spec.value("frames", 1) > 1;
        if (monte_carlo) {
            const int n = spec.at("subcarriers").get<int>();
            const int frames = spec.at("frames").get<int>();
            const WaveformFamily fam = family == "OFDM" ? WaveformFamily::OFDM
                                                        : WaveformFamily::DFTS_OFDM;
            const PaprSweepResult sweep = papr_sweep(fam, n, frames, seed, 4, jobs);
            doc["frames"] = frames;
            json pct = json::object();
            for (const double p : {0.5, 0.9, 0.99, 0.999}) {
                pct[num(p)] = sweep.percentile(p);
                csv += csv_line({family, "p" + num(p), num(sweep.percentile(p))});
            }
            doc["percentiles_db"] = pct;
            if (spec.value("compare_dft_spread", false) && family == "OFDM") {
                const PaprSweepResult other =
                    papr_sweep(WaveformFamily::DFTS_OFDM, n, frames, seed, 4, jobs);
                doc["dfts_ofdm_percentiles_db"] = {{"0.99", other.percentile(0.99)}};
                doc["ordering"] = other.percentile(0.99) < sweep.percentile(0.99)
                                      ? "DFTS_OFDM < OFDM"
                                      : "OFDM <= DFTS_OFDM";
                csv += csv_line({"DFTS_OFDM", "p0.99", num(other.percentile(0.99))});
            }
        } else {
            const WaveformFrame frame = frame_from_spec(spec, seed);
            const double papr = papr_db(frame);
            doc["papr_db"] = papr;
            csv += csv_line({family, "frame", num(papr)});
        }
        write_text(out, format == "csv" ? csv : doc.dump(2) + "\n");
        return 0;
    }

    if (metric == "ambiguity") {
        const WaveformFrame frame = frame_from_spec(spec, seed);
        const json& amb = spec.at("ambiguity");
        std::vector<double> delays, dopplers;
        if (amb.contains("delays_s")) {
            delays = amb.at("delays_s").get<std::vector<double>>();
            dopplers = amb.at("dopplers_hz").get<std::vector<double>>();
        } else {
            const int nd = amb.value("delay_cells", 33);
            const int nv = amb.value("doppler_cells", 33);
            const double max_delay = amb.value(
                "max_delay_s", 0.25 * frame.samples.size() / frame.sample_rate_hz);
            const double max_doppler =
                amb.value("max_doppler_hz",
                          2.0 * frame.sample_rate_hz / frame.samples.size());
            for (int i = 0; i < nd; ++i) {
                delays.push_back(-max_delay + 2.0 * max_delay * i / (nd - 1));
            }
            for (int i = 0; i < nv; ++i) {
                dopplers.push_back(-max_doppler + 2.0 * max_doppler * i / (nv - 1));
            }
        }

        AmbiguitySurface surface;
        if (spec.contains("echo")) {
            const json& echo = spec.at("echo");
            const double tau = echo.at("delay_s").get<double>();
            const double nu = echo.at("doppler_hz").get<double>();
            const double snr_db = echo.value("snr_db", 20.0);
            const long lag = std::lround(tau * frame.sample_rate_hz);
            cvec rx(frame.samples.size(), {0.0, 0.0});
            for (std::size_t t = 0; t < rx.size(); ++t) {
                const long ts = static_cast<long>(t) - lag;
                if (ts < 0 || ts >= static_cast<long>(frame.samples.size())) continue;
                const double phase = 2.0 * kPi * nu * static_cast<double>(t) /
                                     frame.sample_rate_hz;
                rx[t] = frame.samples[ts] * std::polar(1.0, phase);
            }
            const double noise_sigma = std::pow(10.0, -snr_db / 20.0) / std::sqrt(2.0);
            std::mt19937_64 rng(seed ^ 0xecc0ULL);
            std::normal_distribution<double> gauss(0.0, noise_sigma);
            for (auto& v : rx) v += std::complex<double>(gauss(rng), gauss(rng));
            surface = cross_ambiguity(rx, frame.samples, frame.sample_rate_hz, delays,
                                      dopplers);
        } else {
            surface = ambiguity(frame, delays, dopplers);
        }

        if (format == "csv") {
            std::string csv = "delay_s\\doppler_hz";
            for (const double v : surface.doppler_axis_hz) csv += "," + num(v);
            csv += '\n';
            for (std::size_t di = 0; di < surface.delay_axis_s.size(); ++di) {
                csv += num(surface.delay_axis_s[di]);
                for (std::size_t vi = 0; vi < surface.doppler_axis_hz.size(); ++vi) {
                    csv += "," + num(surface.at(di, vi));
                }
                csv += '\n';
            }
            write_text(out, csv);
        } else {
            json doc = {{"family", family},
                        {"metric", "ambiguity"},
                        {"delay_axis_s", surface.delay_axis_s},
                        {"doppler_axis_hz", surface.doppler_axis_hz},
                        {"peak_delay_index", surface.peak_delay_index},
                        {"peak_doppler_index", surface.peak_doppler_index},
                        {"magnitude", surface.magnitude}};
            write_text(out, doc.dump(2) + "\n");
        }
        return 0;
    }
    throw std::invalid_argument("waveform: unknown metric '" + metric + "'");
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Space-air-ground link propagation, capacity and waveform analysis"};
    app.require_subcommand(1);

    std::string scenario_path;
    std::string out_path;
    std::string format = "json";
    std::uint64_t seed = 12345;
    int jobs = 1;
    app.add_option("--scenario", scenario_path, "Scenario JSON (default: shipped scenario)");
    app.add_option("--out", out_path, "Output path ('-' or empty for stdout)");
    app.add_option("--format", format, "Output format: json|csv")
        ->check(CLI::IsMember({"json", "csv"}));
    app.add_option("--seed", seed, "Random seed for all stochastic sweeps");
    app.add_option("--jobs", jobs, "Worker cap for internal sweeps")
        ->check(CLI::PositiveNumber);

    auto* xsection = app.add_subcommand("xsection", "Extinction cross-section sweep");
    std::vector<double> freqs_thz{0.02, 0.3, 193.4};
    std::vector<double> radii_mm{2.0, 0.02};
    double water_temp_k = 283.0;
    xsection->add_option("--frequencies-thz", freqs_thz, "Frequency grid, THz");
    xsection->add_option("--radii-mm", radii_mm, "Particle radius grid, mm");
    xsection->add_option("--water-temperature-k", water_temp_k, "Droplet temperature");

    auto* budget = app.add_subcommand("budget", "Per-factor attenuation breakdown");
    auto* layers = app.add_subcommand("layers", "Per-layer shares of medium loss");
    auto* cap = app.add_subcommand("capacity", "SNR / capacity per band");
    bool sweep_weather = false;
    cap->add_flag("--sweep-weather", sweep_weather, "Clear/Rain/Fog columns in one table");

    auto* waveform = app.add_subcommand("waveform", "Waveform metrics (PAPR, ambiguity)");
    std::string wave_spec;
    waveform->add_option("--spec", wave_spec, "Waveform spec JSON")->required();

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e);
        return code == 0 ? 0 : 2;
    }

    try {
        if (xsection->parsed()) {
            return cmd_xsection(freqs_thz, radii_mm, water_temp_k, out_path, format);
        }
        if (budget->parsed()) {
            return cmd_budget(scenario_path, out_path, format);
        }
        if (layers->parsed()) {
            return cmd_layers(scenario_path, out_path, format);
        }
        if (cap->parsed()) {
            return cmd_capacity(scenario_path, sweep_weather, out_path, format);
        }
        if (waveform->parsed()) {
            return cmd_waveform(wave_spec, seed, jobs, out_path, format);
        }
    } catch (const std::invalid_argument& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 2;
    } catch (const std::domain_error& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 2;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    }
    return 0;
}
