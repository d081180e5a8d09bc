#pragma once

#include <cstdint>
#include <map>
#include <optional>
#include <string>
#include <utility>
#include <vector>

namespace spce {

enum class Side { A, B };

inline char side_char(Side s) { return s == Side::A ? 'A' : 'B'; }

enum class LhvModel { deterministic, malus, timedelay };

std::string to_string(LhvModel m);                 // "deterministic-lhv", ...
std::optional<LhvModel> parse_model(const std::string& id);

struct Click {
    std::int64_t t_ns = 0;
    int outcome = 0;  // +1 or -1
};

// One side's raw click record for a single run: step-1 data.
struct TimeTaggedStream {
    Side side = Side::A;
    std::string setting;  // local setting label, e.g. "A1"
    std::vector<Click> clicks;  // strictly ascending t_ns, all in [0, duration_ns)
    std::uint64_t duration_ns = 0;
    LhvModel model = LhvModel::deterministic;
    std::uint64_t seed = 0;
    double pair_rate_hz = 0.0;
    double dark_rate_hz = 0.0;
};

struct ModelConfig {
    LhvModel model = LhvModel::deterministic;
    double pair_rate_hz = 0.0;      // emission rate of the pair process
    std::uint64_t duration_ns = 1;
    double efficiency = 1.0;        // per-side detection probability scale, (0, 1]
    double dark_rate_hz = 0.0;      // per-side independent noise-click rate
    double delay_base_ns = 0.0;
    double delay_spread_ns = 0.0;   // timedelay model: extra setting-dependent delay
    std::map<std::string, double> settings;  // label -> analyzer angle, radians
    std::uint64_t seed = 0;
    std::uint64_t click_cap = 50'000'000;

    void validate() const;  // throws "config-error"
};

// Generates the two raw streams for one setting pair. Deterministic given
// (config, setting_pair) including the seed. Each emitted pair carries a
// hidden angle phi uniform on [0, 2pi); per model:
//   deterministic-lhv: outcome sign(cos 2(phi - a)), detection prob
//       efficiency, constant delay delay_base_ns;
//   malus-lhv: detection prob efficiency * cos^2(phi - a), same outcome rule;
//   timedelay-lhv: detection always, delay
//       delay_base_ns + delay_spread_ns * sin^2(2(phi - a)).
// Dark counts are appended per side as an independent uniform +/-1 Poisson
// stream; a click landing on an occupied timestamp is shifted +1 ns so
// streams are strictly sorted. Side A never consumes a draw that depends on
// side B's setting and vice versa.
std::pair<TimeTaggedStream, TimeTaggedStream> simulate_run(const ModelConfig& config,
                                                           const std::pair<std::string, std::string>& setting_pair);

// Exact pre-pairing product expectation for models whose detection does not
// post-select on the hidden variable: the sign-readout sawtooth
// 1 - (4/pi) * dist(a - b, pi Z). Empty for malus-lhv, where detection
// itself depends on phi.
std::optional<double> analytic_correlation(LhvModel model, double a, double b);

}  // namespace spce
