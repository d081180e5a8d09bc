#include "spce/simulator.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>

#include "spce/errors.hpp"
#include "spce/rng.hpp"

namespace spce {

namespace {

// Substream layout: even ids feed side A, odd ids side B; the pair process
// itself uses the two lowest ids. All draws are indexed by the pair (or dark
// click) counter, so each side's stream is a pure function of the shared
// source sequence and its own local parameters.
constexpr std::uint64_t kStreamPairGap = 0;
constexpr std::uint64_t kStreamPairPhi = 1;
constexpr std::uint64_t kStreamDetectA = 2;
constexpr std::uint64_t kStreamDetectB = 3;
constexpr std::uint64_t kStreamDarkA = 6;
constexpr std::uint64_t kStreamDarkB = 7;

int sign_outcome(double x) { return x >= 0.0 ? 1 : -1; }

// Exponential-gap Poisson arrivals on [0, duration), gaps rounded down to
// integer nanoseconds.
template <typename Emit>
void poisson_process(const CounterRng& rng, std::uint64_t stream, double rate_hz, std::uint64_t duration_ns,
                     std::uint64_t index_stride, Emit&& emit) {
    if (rate_hz <= 0.0) return;
    const double mean_gap_ns = 1e9 / rate_hz;
    std::int64_t t = 0;
    for (std::uint64_t k = 0;; ++k) {
        const double u = rng.uniform01(stream, k * index_stride);
        const auto gap = static_cast<std::int64_t>(std::floor(-std::log(u) * mean_gap_ns));
        t += gap;
        if (t >= static_cast<std::int64_t>(duration_ns)) break;
        emit(k, t);
    }
}

void finalize_stream(std::vector<Click>& clicks, std::uint64_t duration_ns, std::uint64_t cap) {
    std::stable_sort(clicks.begin(), clicks.end(),
                     [](const Click& a, const Click& b) { return a.t_ns < b.t_ns; });
    std::vector<Click> out;
    out.reserve(clicks.size());
    std::int64_t prev = -1;
    for (Click c : clicks) {
        if (c.t_ns <= prev) c.t_ns = prev + 1;
        if (c.t_ns >= static_cast<std::int64_t>(duration_ns)) continue;
        prev = c.t_ns;
        out.push_back(c);
    }
    if (out.size() > cap) throw_data("resource-error", "stream exceeds click cap of " + std::to_string(cap));
    clicks = std::move(out);
}

struct SideParams {
    Side side;
    std::string setting;
    double angle;
    std::uint64_t detect_stream;
    std::uint64_t dark_stream;
};

TimeTaggedStream simulate_side(const ModelConfig& cfg, const CounterRng& rng, const SideParams& sp) {
    TimeTaggedStream st;
    st.side = sp.side;
    st.setting = sp.setting;
    st.duration_ns = cfg.duration_ns;
    st.model = cfg.model;
    st.seed = cfg.seed;
    st.pair_rate_hz = cfg.pair_rate_hz;
    st.dark_rate_hz = cfg.dark_rate_hz;

    const double two_pi = 2.0 * std::numbers::pi;
    poisson_process(rng, kStreamPairGap, cfg.pair_rate_hz, cfg.duration_ns, 1,
                    [&](std::uint64_t k, std::int64_t t_emit) {
                        const double phi = two_pi * rng.uniform01(kStreamPairPhi, k);
                        const double u = phi - sp.angle;
                        const int outcome = sign_outcome(std::cos(2.0 * u));

                        bool detected = true;
                        double delay = cfg.delay_base_ns;
                        switch (cfg.model) {
                            case LhvModel::deterministic:
                                detected = rng.uniform01(sp.detect_stream, k) < cfg.efficiency;
                                break;
                            case LhvModel::malus: {
                                const double c = std::cos(u);
                                detected = rng.uniform01(sp.detect_stream, k) < cfg.efficiency * c * c;
                                break;
                            }
                            case LhvModel::timedelay: {
                                const double s = std::sin(2.0 * u);
                                delay += cfg.delay_spread_ns * s * s;
                                break;
                            }
                        }
                        if (!detected) return;
                        const auto t_click = t_emit + static_cast<std::int64_t>(std::floor(delay));
                        if (t_click < 0 || t_click >= static_cast<std::int64_t>(cfg.duration_ns)) return;
                        st.clicks.push_back(Click{t_click, outcome});
                    });

    // Dark clicks: gap draw at 2j, outcome bit at 2j+1 within the side's
    // dark substream.
    poisson_process(rng, sp.dark_stream, cfg.dark_rate_hz, cfg.duration_ns, 2,
                    [&](std::uint64_t j, std::int64_t t) {
                        const int outcome = (rng.draw(sp.dark_stream, 2 * j + 1) & 1u) ? 1 : -1;
                        st.clicks.push_back(Click{t, outcome});
                    });

    finalize_stream(st.clicks, cfg.duration_ns, cfg.click_cap);
    return st;
}

}  // namespace

std::string to_string(LhvModel m) {
    switch (m) {
        case LhvModel::deterministic: return "deterministic-lhv";
        case LhvModel::malus: return "malus-lhv";
        case LhvModel::timedelay: return "timedelay-lhv";
    }
    return "deterministic-lhv";
}

std::optional<LhvModel> parse_model(const std::string& id) {
    if (id == "deterministic-lhv") return LhvModel::deterministic;
    if (id == "malus-lhv") return LhvModel::malus;
    if (id == "timedelay-lhv") return LhvModel::timedelay;
    return std::nullopt;
}

void ModelConfig::validate() const {
    if (duration_ns < 1) throw_config("config-error", "duration_ns must be >= 1");
    if (!(pair_rate_hz >= 0.0)) throw_config("config-error", "pair_rate_hz must be >= 0");
    if (!(dark_rate_hz >= 0.0)) throw_config("config-error", "dark_rate_hz must be >= 0");
    if (!(efficiency > 0.0 && efficiency <= 1.0)) throw_config("config-error", "efficiency must lie in (0, 1]");
    if (!(delay_base_ns >= 0.0)) throw_config("config-error", "delay_base_ns must be >= 0");
    if (!(delay_spread_ns >= 0.0)) throw_config("config-error", "delay_spread_ns must be >= 0");
    if (click_cap == 0) throw_config("config-error", "click_cap must be positive");
}

std::pair<TimeTaggedStream, TimeTaggedStream> simulate_run(
    const ModelConfig& config, const std::pair<std::string, std::string>& setting_pair) {
    config.validate();
    const auto ita = config.settings.find(setting_pair.first);
    const auto itb = config.settings.find(setting_pair.second);
    if (ita == config.settings.end())
        throw_config("config-error", "unknown setting label '" + setting_pair.first + "'");
    if (itb == config.settings.end())
        throw_config("config-error", "unknown setting label '" + setting_pair.second + "'");

    const CounterRng rng(config.seed);
    TimeTaggedStream a = simulate_side(
        config, rng, SideParams{Side::A, setting_pair.first, ita->second, kStreamDetectA, kStreamDarkA});
    TimeTaggedStream b = simulate_side(
        config, rng, SideParams{Side::B, setting_pair.second, itb->second, kStreamDetectB, kStreamDarkB});
    return {std::move(a), std::move(b)};
}

std::optional<double> analytic_correlation(LhvModel model, double a, double b) {
    if (model == LhvModel::malus) return std::nullopt;
    // Both remaining models read out sign(cos 2(phi - setting)) on every
    // emitted pair, so the pre-pairing correlation is the sawtooth in the
    // setting difference.
    const double pi = std::numbers::pi;
    double d = std::fmod(a - b, pi);
    if (d < 0.0) d += pi;
    const double delta = std::min(d, pi - d);
    return 1.0 - (4.0 / pi) * delta;
}

}  // namespace spce
