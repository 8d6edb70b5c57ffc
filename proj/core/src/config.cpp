#include "sstp/config.hpp"

#include <charconv>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <istream>
#include <limits>
#include <ostream>
#include <sstream>

namespace sstp {

long RunConfig::n_steps() const
{
    if (!(tau > 0.0) || !(t_max > 0.0))
    {
        throw ConfigError("tau and t_max must be > 0");
    }
    double const ratio = t_max / tau;
    auto const steps = std::llround(ratio);
    if (steps < 1 || std::abs(static_cast<double>(steps) - ratio) > 1e-9 * std::max(1.0, ratio))
    {
        throw ConfigError("t_max/tau must be a positive integer number of steps");
    }
    return static_cast<long>(steps);
}

void RunConfig::validate() const
{
    auto require = [](bool ok, char const* what) {
        if (!ok)
        {
            throw ConfigError(what);
        }
    };
    require(model.omega_tunnel > 0.0, "omega must be > 0 (the adiabatic basis is degenerate at omega = 0)");
    require(model.kondo_xi >= 0.0, "xi must be >= 0");
    require(model.beta > 0.0, "beta must be > 0");
    require(n_modes >= 1, "n_modes must be >= 1");
    require(omega_c > 0.0, "omega_c must be > 0");
    require(omega_max > 0.0, "omega_max must be > 0");
    require(scheme.variant != SchemeVariant::energy_conserving || scheme.c_energy > 0.0,
            "c_energy must be > 0 for the energy-conserving scheme");
    require(tau > 0.0, "tau must be > 0");
    long const steps = n_steps();
    require(n_traj >= 1, "n_traj must be >= 1");
    require(record_stride >= 1, "record_stride must be >= 1");
    require(steps % record_stride == 0, "record_stride must divide t_max/tau");
    require(weight_cap > 0.0, "weight_cap must be > 0");
}

namespace {

std::string trim(std::string_view s)
{
    auto const first = s.find_first_not_of(" \t\r");
    if (first == std::string_view::npos)
    {
        return {};
    }
    auto const last = s.find_last_not_of(" \t\r");
    return std::string(s.substr(first, last - first + 1));
}

std::string key_list()
{
    std::string out;
    for (auto const& k : config_keys())
    {
        out += out.empty() ? k : ", " + k;
    }
    return out;
}

double parse_real(std::string const& key, std::string const& raw)
{
    if (raw == "inf" || raw == "+inf" || raw == "infinity")
    {
        return std::numeric_limits<double>::infinity();
    }
    // Accept a plain fraction such as 1/3.
    if (auto const slash = raw.find('/'); slash != std::string::npos)
    {
        double const num = parse_real(key, trim(raw.substr(0, slash)));
        double const den = parse_real(key, trim(raw.substr(slash + 1)));
        return num / den;
    }
    double value = 0.0;
    auto const* end = raw.data() + raw.size();
    auto const [ptr, ec] = std::from_chars(raw.data(), end, value);
    if (ec != std::errc{} || ptr != end)
    {
        throw ConfigError("invalid value for '" + key + "': expected a real number, got '" + raw + "'");
    }
    return value;
}

template <typename Int>
Int parse_integer(std::string const& key, std::string const& raw)
{
    Int value{};
    auto const* end = raw.data() + raw.size();
    auto const [ptr, ec] = std::from_chars(raw.data(), end, value);
    if (ec != std::errc{} || ptr != end)
    {
        throw ConfigError("invalid value for '" + key + "': expected an integer, got '" + raw + "'");
    }
    return value;
}

bool parse_bool(std::string const& key, std::string const& raw)
{
    if (raw == "true" || raw == "1" || raw == "yes" || raw == "on")
    {
        return true;
    }
    if (raw == "false" || raw == "0" || raw == "no" || raw == "off")
    {
        return false;
    }
    throw ConfigError("invalid value for '" + key + "': expected true/false, got '" + raw + "'");
}

std::string format_real(double v)
{
    if (std::isinf(v))
    {
        return v > 0 ? "inf" : "-inf";
    }
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.17g", v);
    return buf;
}

}  // namespace

std::vector<std::string> const& config_keys()
{
    static std::vector<std::string> const keys{
        "omega",   "xi",    "beta",   "n_modes", "omega_c",       "omega_max",       "scheme",
        "c_energy", "jump_rule", "tau", "t_max", "n_traj",        "seed",            "record_stride",
        "enumerate_pairs", "weight_cap", "truncate",
    };
    return keys;
}

std::string to_string(SchemeVariant variant)
{
    return variant == SchemeVariant::primitive ? "primitive" : "energy-conserving";
}

std::string to_string(JumpRule rule)
{
    return rule == JumpRule::exact_rescale ? "exact-rescale" : "first-order-shift";
}

KeyValues parse_key_values(std::istream& in, std::string_view source_name)
{
    KeyValues values;
    std::string line;
    int line_no = 0;
    while (std::getline(in, line))
    {
        ++line_no;
        std::string_view view(line);
        if (auto const hash = view.find('#'); hash != std::string_view::npos)
        {
            view = view.substr(0, hash);
        }
        std::string const content = trim(view);
        if (content.empty())
        {
            continue;
        }
        auto const eq = content.find('=');
        if (eq == std::string::npos)
        {
            throw ConfigError(std::string(source_name) + ":" + std::to_string(line_no) + ": expected 'key = value'");
        }
        std::string key = trim(std::string_view(content).substr(0, eq));
        std::string value = trim(std::string_view(content).substr(eq + 1));
        if (key.empty() || value.empty())
        {
            throw ConfigError(std::string(source_name) + ":" + std::to_string(line_no) + ": empty key or value");
        }
        if (!values.emplace(key, value).second)
        {
            throw ConfigError(std::string(source_name) + ":" + std::to_string(line_no) + ": duplicate key '" + key +
                              "'");
        }
    }
    return values;
}

RunConfig apply_key_values(KeyValues const& values, RunConfig config)
{
    for (auto const& [key, raw] : values)
    {
        if (key == "omega")
            config.model.omega_tunnel = parse_real(key, raw);
        else if (key == "xi")
            config.model.kondo_xi = parse_real(key, raw);
        else if (key == "beta")
            config.model.beta = parse_real(key, raw);
        else if (key == "n_modes")
            config.n_modes = parse_integer<int>(key, raw);
        else if (key == "omega_c")
            config.omega_c = parse_real(key, raw);
        else if (key == "omega_max")
            config.omega_max = parse_real(key, raw);
        else if (key == "scheme")
        {
            if (raw == "primitive")
                config.scheme.variant = SchemeVariant::primitive;
            else if (raw == "energy-conserving")
                config.scheme.variant = SchemeVariant::energy_conserving;
            else
                throw ConfigError("invalid value for 'scheme': expected primitive or energy-conserving, got '" + raw +
                                  "'");
        }
        else if (key == "c_energy")
            config.scheme.c_energy = parse_real(key, raw);
        else if (key == "jump_rule")
        {
            if (raw == "exact-rescale")
                config.scheme.jump_rule = JumpRule::exact_rescale;
            else if (raw == "first-order-shift")
                config.scheme.jump_rule = JumpRule::first_order_shift;
            else
                throw ConfigError("invalid value for 'jump_rule': expected exact-rescale or first-order-shift, got '" +
                                  raw + "'");
        }
        else if (key == "tau")
            config.tau = parse_real(key, raw);
        else if (key == "t_max")
            config.t_max = parse_real(key, raw);
        else if (key == "n_traj")
            config.n_traj = parse_integer<long>(key, raw);
        else if (key == "seed")
            config.master_seed = parse_integer<std::uint64_t>(key, raw);
        else if (key == "record_stride")
            config.record_stride = parse_integer<long>(key, raw);
        else if (key == "enumerate_pairs")
            config.enumerate_pairs = parse_bool(key, raw);
        else if (key == "weight_cap")
            config.weight_cap = parse_real(key, raw);
        else if (key == "truncate")
            config.truncate_capped = parse_bool(key, raw);
        else
            throw ConfigError("unknown config key '" + key + "'; valid keys: " + key_list());
    }
    config.validate();
    return config;
}

KeyValues to_key_values(RunConfig const& c)
{
    return {
        {"omega", format_real(c.model.omega_tunnel)},
        {"xi", format_real(c.model.kondo_xi)},
        {"beta", format_real(c.model.beta)},
        {"n_modes", std::to_string(c.n_modes)},
        {"omega_c", format_real(c.omega_c)},
        {"omega_max", format_real(c.omega_max)},
        {"scheme", to_string(c.scheme.variant)},
        {"c_energy", format_real(c.scheme.c_energy)},
        {"jump_rule", to_string(c.scheme.jump_rule)},
        {"tau", format_real(c.tau)},
        {"t_max", format_real(c.t_max)},
        {"n_traj", std::to_string(c.n_traj)},
        {"seed", std::to_string(c.master_seed)},
        {"record_stride", std::to_string(c.record_stride)},
        {"enumerate_pairs", c.enumerate_pairs ? "true" : "false"},
        {"weight_cap", format_real(c.weight_cap)},
        {"truncate", c.truncate_capped ? "true" : "false"},
    };
}

void write_config(std::ostream& out, RunConfig const& config)
{
    auto const values = to_key_values(config);
    for (auto const& key : config_keys())
    {
        out << key << " = " << values.at(key) << '\n';
    }
}

RunConfig parse_config(std::filesystem::path const& path, KeyValues const& overrides, RunConfig base)
{
    std::ifstream in(path);
    if (!in)
    {
        throw ConfigError("cannot open config file '" + path.string() + "'");
    }
    auto values = parse_key_values(in, path.string());
    for (auto const& [key, value] : overrides)
    {
        values[key] = value;
    }
    return apply_key_values(values, std::move(base));
}

std::vector<std::string> const& preset_names()
{
    static std::vector<std::string> const names{"fig1", "fig2", "uncoupled", "oracle-small"};
    return names;
}

std::optional<RunConfig> preset(std::string_view name)
{
    RunConfig c;
    c.n_modes = 200;
    c.omega_c = 1.0;
    c.omega_max = 3.0;
    c.tau = 0.01;
    c.record_stride = 50;
    c.scheme = {SchemeVariant::energy_conserving, 0.01, JumpRule::first_order_shift};
    if (name == "fig1")
    {
        c.model = {1.0 / 3.0, 0.007, 0.3};
        c.t_max = 30.0;
        c.n_traj = 10000;
    }
    else if (name == "fig2")
    {
        c.model = {0.4, 0.09, 12.5};
        c.t_max = 100.0;
        c.n_traj = 10000;
    }
    else if (name == "uncoupled")
    {
        c.model = {1.0 / 3.0, 0.0, 12.5};
        c.t_max = 30.0;
        c.n_traj = 100;
    }
    else if (name == "oracle-small")
    {
        c.model = {0.4, 0.09, 12.5};
        c.n_modes = 2;
        c.tau = 0.05;
        c.t_max = 0.3;
        c.record_stride = 1;
        c.n_traj = 1000000;
    }
    else
    {
        return std::nullopt;
    }
    c.validate();
    return c;
}

}  // namespace sstp
