#pragma once

#include <cstddef>
#include <cstdint>
#include <filesystem>
#include <iosfwd>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include <json.hpp>

#include "qnehari/hardy.hpp"
#include "qnehari/operators.hpp"
#include "qnehari/series.hpp"

namespace qnehari {

/// `name` or `name:key=value,key=value`.
struct SymbolSpec {
    std::string name;
    std::map<std::string, std::string> params;
    std::string text;

    /// The spec text with commas replaced by ';' so it fits in one CSV cell.
    std::string label() const;
};

/// Throws ConfigError on malformed text.
SymbolSpec parse_symbol(const std::string& text);

/// Generators: monomial(n, u), geometric(rho, deg), random_poly(deg, seed),
/// kernel_symbol(w0..w3, deg), lacunary(base, deg). Throws ConfigError for an
/// unknown generator, an unknown key or a value out of range.
TruncatedSeries make_symbol(const SymbolSpec& spec);
TruncatedSeries make_symbol(const std::string& text);

/// Twenty symbols: twelve random polynomials, monomials, geometric, kernel and lacunary symbols.
std::vector<std::string> default_suite();
/// Ten polynomial multipliers.
std::vector<std::string> default_multiplier_suite();

struct BilinearConfig {
    std::size_t n = 128;
    std::size_t trials = 6;
    std::size_t power_iters = 60;
};

struct BmoConfig {
    unsigned k_max = 8;
    std::size_t n_theta = 64;
    std::size_t n_slices = 64;
};

struct EmbeddingConfig {
    std::vector<double> kernel_radii{0.5, 0.9, 0.99};
    std::size_t kernel_angles = 4;
    std::size_t kernel_units = 2;
    std::size_t kernel_degree = 256;
    std::size_t random_polys = 50;
    std::size_t poly_degree = 32;
};

struct LabConfig {
    std::string experiment = "theorem1";
    /// Empty: the default suite of the experiment.
    std::vector<std::string> symbols;
    std::uint64_t seed = 1;
    std::vector<std::size_t> ladder = kDefaultLadder;
    QuadratureSpec quadrature;
    std::size_t mc_samples = 200000;
    std::size_t hinf_samples = 100000;
    BilinearConfig bilinear;
    BmoConfig bmo;
    EmbeddingConfig embedding;
    std::string out_dir = "out";
    /// Also write the top Hankel or multiplication matrix of each symbol.
    bool dump_matrices = false;

    /// Throws ConfigError on zero counts, an empty ladder, an unknown
    /// experiment or an unparsable symbol.
    void validate() const;

    /// Missing keys keep their defaults; unknown keys are rejected.
    static LabConfig from_json(const nlohmann::json& j);
    nlohmann::json to_json() const;
};

LabConfig load_config(const std::filesystem::path& path);

inline const std::vector<std::string> kExperiments{"theorem1", "theoremA", "rkt", "selftest"};

struct Quantity {
    std::string name;
    double value = 0.0;
    std::size_t N = 0;
    std::size_t samples = 0;
    std::uint64_t seed = 0;
    /// "ok" or "error".
    std::string status = "ok";
    std::string message;
};

struct PlotTable {
    std::string name;
    std::vector<std::string> columns;
    std::vector<std::vector<double>> rows;
};

struct LabReport {
    std::string experiment;
    std::vector<std::string> symbols;
    std::vector<Quantity> quantities;
    std::vector<PlotTable> plots;
    /// UTC, ISO 8601; JSON only so the CSV stays reproducible.
    std::string started;
    std::string finished;

    bool partial() const;
    const Quantity* find(const std::string& name) const;
    /// Value of an ok quantity.
    std::optional<double> value(const std::string& name) const;
    /// Appends rows and plots, prefixing names with `prefix/`.
    void merge(const LabReport& other, const std::string& prefix);

    nlohmann::json to_json() const;
};

/// Kernels k_w for |w| in the configured radii, angles in [0, pi] and a few units.
std::vector<TruncatedSeries> kernel_test_set(const EmbeddingConfig& cfg, std::uint64_t seed);
/// Kernels, averaged kernels K(w) on the same centres, and random polynomials.
std::vector<TruncatedSeries> full_test_set(const EmbeddingConfig& cfg, std::uint64_t seed);

/// Hankel norm ladder, bilinear sup, BMO norm, square roots of the box and
/// embedding constants of mu_b, H^2 norms both ways, H^infty, and the ratios
/// between the four comparable quantities.
LabReport theorem1_report(const TruncatedSeries& b, const LabConfig& cfg);

/// Multiplication-operator norm ladder against the H^infty estimate.
LabReport theoremA_report(const TruncatedSeries& phi, const LabConfig& cfg);

/// Embedding constant of mu_b tested on kernels only and on the full test set.
LabReport rkt_probe(const TruncatedSeries& b, const LabConfig& cfg);

/// Fast internal consistency checks; failing checks carry status "error".
LabReport selftest(const LabConfig& cfg);

/// The four quantities whose pairwise ratios the theorem1 window covers.
inline const std::vector<std::string> kComparable{"hankel_norm", "bmo_norm", "box_const_sqrt", "embed_const_sqrt"};

/// Runs cfg.experiment over cfg.symbols (or the default suite) and adds suite
/// summaries: per-pair log-ratio windows for theorem1, ratio spread for rkt.
LabReport run_experiment(const LabConfig& cfg);

/// report.csv, report.json and plotdata/*.csv under `dir`.
void write_report(const LabReport& report, const std::filesystem::path& dir);
/// CSV `quantity,value,N,samples,seed,status`.
void write_report_csv(std::ostream& os, const LabReport& report);

}  // namespace qnehari
