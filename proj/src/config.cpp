#include "spce/config.hpp"

#include <set>

#include <nlohmann/json.hpp>

#include "spce/errors.hpp"
#include "spce/io.hpp"

namespace spce {

using nlohmann::json;

namespace {

void reject_unknown_keys(const json& obj, const std::set<std::string>& allowed, const std::string& where) {
    for (const auto& [key, value] : obj.items()) {
        (void)value;
        if (allowed.find(key) == allowed.end())
            throw_config("config-error", "unknown key '" + key + "' in " + where);
    }
}

template <typename T>
T get_field(const json& obj, const std::string& key, const std::string& where) {
    if (!obj.contains(key)) throw_config("config-error", "missing key '" + key + "' in " + where);
    try {
        return obj.at(key).get<T>();
    } catch (const json::exception&) {
        throw_config("config-error", "bad value for '" + key + "' in " + where);
    }
}

}  // namespace

RunConfig parse_run_config(const std::string& text, const std::string& source_name) {
    json doc;
    try {
        doc = json::parse(text);
    } catch (const json::exception& e) {
        throw_config("config-error", source_name + ": " + e.what());
    }
    if (!doc.is_object()) throw_config("config-error", source_name + ": top level must be an object");

    reject_unknown_keys(doc,
                        {"model", "pair_rate_hz", "duration_ns", "efficiency", "dark_rate_hz", "delay_base_ns",
                         "delay_spread_ns", "settings", "seed", "click_cap", "contexts", "windows_ns",
                         "shifts_ns", "alpha", "variant", "out_dir"},
                        source_name);

    RunConfig cfg;
    const auto model_id = get_field<std::string>(doc, "model", source_name);
    const auto model = parse_model(model_id);
    if (!model) throw_config("config-error", "unknown model '" + model_id + "'");
    cfg.model.model = *model;
    cfg.model.pair_rate_hz = get_field<double>(doc, "pair_rate_hz", source_name);
    cfg.model.duration_ns = get_field<std::uint64_t>(doc, "duration_ns", source_name);
    cfg.model.efficiency = get_field<double>(doc, "efficiency", source_name);
    cfg.model.dark_rate_hz = get_field<double>(doc, "dark_rate_hz", source_name);
    cfg.model.delay_base_ns = get_field<double>(doc, "delay_base_ns", source_name);
    cfg.model.delay_spread_ns = get_field<double>(doc, "delay_spread_ns", source_name);
    cfg.model.seed = get_field<std::uint64_t>(doc, "seed", source_name);
    if (doc.contains("click_cap")) cfg.model.click_cap = get_field<std::uint64_t>(doc, "click_cap", source_name);

    const json& settings = doc.contains("settings") ? doc.at("settings") : json::object();
    if (!settings.is_object()) throw_config("config-error", "'settings' must map labels to angles");
    for (const auto& [label, angle] : settings.items()) {
        if (!angle.is_number()) throw_config("config-error", "setting '" + label + "' must be a number");
        cfg.model.settings[label] = angle.get<double>();
    }

    if (!doc.contains("contexts")) throw_config("config-error", "missing key 'contexts' in " + source_name);
    for (const auto& jctx : doc.at("contexts")) {
        if (!jctx.is_object()) throw_config("config-error", "each context must be an object");
        reject_unknown_keys(jctx, {"id", "a", "b"}, "context entry");
        Context ctx;
        ctx.id = get_field<std::string>(jctx, "id", "context entry");
        const auto a = get_field<std::string>(jctx, "a", "context '" + ctx.id + "'");
        const auto b = get_field<std::string>(jctx, "b", "context '" + ctx.id + "'");
        ctx.members = {a, b};
        cfg.system.contexts.push_back(ctx);
        cfg.context_settings.emplace_back(a, b);
    }
    cfg.system.n = static_cast<int>(cfg.system.contexts.size());

    cfg.windows_ns = get_field<std::vector<std::int64_t>>(doc, "windows_ns", source_name);
    cfg.shifts_ns = get_field<std::vector<std::int64_t>>(doc, "shifts_ns", source_name);
    cfg.alpha = get_field<double>(doc, "alpha", source_name);
    cfg.variant = parse_variant(get_field<std::string>(doc, "variant", source_name));
    if (doc.contains("out_dir")) cfg.out_dir = get_field<std::string>(doc, "out_dir", source_name);

    // Validate everything up front.
    cfg.model.validate();
    try {
        cfg.system.validate();
    } catch (const Error& e) {
        throw_config("config-error", std::string("contexts do not form a cycle: ") + e.what());
    }
    for (const auto& [a, b] : cfg.context_settings) {
        if (cfg.model.settings.find(a) == cfg.model.settings.end())
            throw_config("config-error", "setting label '" + a + "' missing from settings");
        if (cfg.model.settings.find(b) == cfg.model.settings.end())
            throw_config("config-error", "setting label '" + b + "' missing from settings");
    }
    if (cfg.windows_ns.empty()) throw_config("config-error", "windows_ns must be nonempty");
    if (cfg.shifts_ns.empty()) throw_config("config-error", "shifts_ns must be nonempty");
    for (const auto W : cfg.windows_ns)
        if (W < 1) throw_config("config-error", "window widths must be >= 1 ns");
    if (!(cfg.alpha > 0.0 && cfg.alpha < 1.0)) throw_config("config-error", "alpha must lie in (0, 1)");
    return cfg;
}

RunConfig load_run_config(const std::string& path) {
    return parse_run_config(read_file(path), path);
}

}  // namespace spce
