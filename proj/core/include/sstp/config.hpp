#pragma once

#include <filesystem>
#include <iosfwd>
#include <map>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "sstp/run_config.hpp"

namespace sstp {

/// Ordered key -> raw value map of a flat config.
using KeyValues = std::map<std::string, std::string>;

/// Every accepted config key, in documentation order.
std::vector<std::string> const& config_keys();

/// Reads "key = value" lines; '#' starts a comment, blank lines are ignored.
/// Throws ConfigError on malformed lines or duplicate keys.
KeyValues parse_key_values(std::istream& in, std::string_view source_name = "<config>");

/// Applies values on top of base and validates the result.
/// Unknown keys raise ConfigError listing the valid keys.
RunConfig apply_key_values(KeyValues const& values, RunConfig base = {});

/// Fully resolved config; numbers are written with 17 significant digits
/// so parsing the output reproduces the RunConfig exactly.
KeyValues to_key_values(RunConfig const& config);

void write_config(std::ostream& out, RunConfig const& config);

/// File values, then overrides; both on top of base.
RunConfig parse_config(std::filesystem::path const& path, KeyValues const& overrides = {}, RunConfig base = {});

std::vector<std::string> const& preset_names();

/// Built-in presets: fig1, fig2, uncoupled, oracle-small.
std::optional<RunConfig> preset(std::string_view name);

std::string to_string(SchemeVariant variant);
std::string to_string(JumpRule rule);

}  // namespace sstp
