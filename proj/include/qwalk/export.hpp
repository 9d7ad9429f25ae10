#pragma once

#include <filesystem>
#include <optional>
#include <span>
#include <string>
#include <string_view>

#include "qwalk/coin.hpp"
#include "qwalk/limit_laws.hpp"
#include "qwalk/stationary.hpp"

namespace qwalk {

enum class Format { Csv, Json };

std::optional<Format> parse_format(std::string_view name) noexcept;

/// Shortest decimal string that parses back to the same double. Locale
/// independent.
std::string format_double(double value);

struct ProfileMetadata {
  Coin coin;
  double xi = 0.0;
  double omega = 0.0;
  Region regime = Region::Bin;
  std::optional<double> theta_star;
};

/// Everything written by export_profile, and everything needed to write it
/// again.
struct ProfileDocument {
  StationaryProfile profile;
  ProfileMetadata meta;
  std::optional<LimitLaw> law;
};

/// CSV: header `n,x,phi_norm_sq,mu,F_M,F_limit,abs_diff`, one row per site,
/// x = n/M; the law columns are left empty without a law.
/// JSON: {"metadata": {...}, "columns": {<same columns as arrays>}}.
std::string render_profile(const ProfileDocument& doc, Format format);

/// Inverse of render_profile(doc, Format::Json). Throws IoError on malformed
/// input.
ProfileDocument parse_profile_json(std::string_view text);

/// CSV: header `M,regime,theta_star_effective,ks`, rows in input order.
/// JSON: array of row objects.
std::string render_sweep(std::span<const SweepRow> rows, Format format);

/// Writes bytes verbatim. Throws IoError.
void write_text_file(const std::filesystem::path& path, std::string_view content);

void export_profile(const ProfileDocument& doc, const std::filesystem::path& path,
                    Format format);
void export_sweep(std::span<const SweepRow> rows, const std::filesystem::path& path,
                  Format format);

}  // namespace qwalk
