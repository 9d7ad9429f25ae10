#include "qwalk/export.hpp"

#include "json.hpp"

#include <charconv>
#include <cmath>
#include <fstream>
#include <system_error>

#include "qwalk/error.hpp"

namespace qwalk {
namespace {

using ojson = nlohmann::ordered_json;

struct ProfileRow {
  std::size_t n;
  double x;
  double phi_norm_sq;
  double mu;
  double F_M;
  std::optional<double> F_limit;
  std::optional<double> abs_diff;
};

std::vector<ProfileRow> profile_rows(const ProfileDocument& doc) {
  const StationaryProfile& p = doc.profile;
  const double m = static_cast<double>(p.M);
  std::vector<ProfileRow> rows;
  rows.reserve(p.M);
  double F = 0.0;
  for (std::size_t n = 0; n < p.M; ++n) {
    // same accumulation as cumulative(): exact 1 on the last site
    F = n + 1 == p.M ? 1.0 : F + p.mu[n];
    ProfileRow row{n, static_cast<double>(n) / m, p.site_norm_sq[n], p.mu[n], F,
                   std::nullopt, std::nullopt};
    if (doc.law) {
      const double at = doc.law->on_site_axis() ? static_cast<double>(n) : row.x;
      row.F_limit = limit_cdf(*doc.law, at);
      row.abs_diff = std::abs(F - *row.F_limit);
    }
    rows.push_back(row);
  }
  return rows;
}

ojson number_or_null(const std::optional<double>& v) {
  return v ? ojson(*v) : ojson(nullptr);
}

ojson complex_json(const cplx& z) { return ojson::array({z.real(), z.imag()}); }

ojson law_json(const std::optional<LimitLaw>& law) {
  if (!law) return nullptr;
  ojson j = ojson::object();
  j["kind"] = law_name(law->kind());
  if (law->kind() == LawKind::SineSquared) j["theta_star"] = law->theta_star();
  if (law->kind() == LawKind::Geometric) j["lambda_plus"] = law->lambda_plus();
  return j;
}

std::string csv_optional(const std::optional<double>& v) {
  return v ? format_double(*v) : std::string();
}

}  // namespace

std::optional<Format> parse_format(std::string_view name) noexcept {
  if (name == "csv") return Format::Csv;
  if (name == "json") return Format::Json;
  return std::nullopt;
}

std::string format_double(double value) {
  char buf[64];
  const auto [end, ec] = std::to_chars(buf, buf + sizeof buf, value);
  if (ec != std::errc()) return "nan";
  return std::string(buf, end);
}

std::string render_profile(const ProfileDocument& doc, Format format) {
  const std::vector<ProfileRow> rows = profile_rows(doc);

  if (format == Format::Csv) {
    std::string out = "n,x,phi_norm_sq,mu,F_M,F_limit,abs_diff\n";
    for (const ProfileRow& r : rows) {
      out += std::to_string(r.n);
      for (const std::string& field :
           {format_double(r.x), format_double(r.phi_norm_sq), format_double(r.mu),
            format_double(r.F_M), csv_optional(r.F_limit), csv_optional(r.abs_diff)}) {
        out += ',';
        out += field;
      }
      out += '\n';
    }
    return out;
  }

  const ProfileMetadata& meta = doc.meta;
  ojson metadata = ojson::object();
  metadata["M"] = doc.profile.M;
  metadata["coin"] = {{"a", complex_json(meta.coin.a())},
                      {"b", complex_json(meta.coin.b())},
                      {"c", complex_json(meta.coin.c())},
                      {"d", complex_json(meta.coin.d())}};
  metadata["xi"] = meta.xi;
  metadata["omega"] = meta.omega;
  metadata["regime"] = region_name(meta.regime);
  metadata["theta_star"] = number_or_null(meta.theta_star);
  metadata["comfortability"] = doc.profile.comfortability;
  metadata["law"] = law_json(doc.law);

  ojson columns = ojson::object();
  for (const char* name : {"n", "x", "phi_norm_sq", "mu", "F_M", "F_limit", "abs_diff"}) {
    columns[name] = ojson::array();
  }
  for (const ProfileRow& r : rows) {
    columns["n"].push_back(r.n);
    columns["x"].push_back(r.x);
    columns["phi_norm_sq"].push_back(r.phi_norm_sq);
    columns["mu"].push_back(r.mu);
    columns["F_M"].push_back(r.F_M);
    columns["F_limit"].push_back(number_or_null(r.F_limit));
    columns["abs_diff"].push_back(number_or_null(r.abs_diff));
  }

  ojson root = ojson::object();
  root["metadata"] = std::move(metadata);
  root["columns"] = std::move(columns);
  return root.dump(2) + "\n";
}

ProfileDocument parse_profile_json(std::string_view text) {
  try {
    const ojson root = ojson::parse(text);
    const ojson& meta = root.at("metadata");
    const ojson& columns = root.at("columns");

    auto entry = [&](const char* name) {
      const ojson& z = meta.at("coin").at(name);
      return cplx{z.at(0).get<double>(), z.at(1).get<double>()};
    };
    const Coin coin = make_coin(entry("a"), entry("b"), entry("c"), entry("d"));

    const auto region = parse_region(meta.at("regime").get<std::string>());
    if (!region) throw IoError("unknown regime in profile metadata");

    std::optional<LimitLaw> law;
    if (const ojson& j = meta.at("law"); !j.is_null()) {
      const auto kind = parse_law_kind(j.at("kind").get<std::string>());
      if (!kind) throw IoError("unknown law kind in profile metadata");
      switch (*kind) {
        case LawKind::PointMass: law = LimitLaw::point_mass(); break;
        case LawKind::Cubic: law = LimitLaw::cubic(); break;
        case LawKind::Uniform: law = LimitLaw::uniform(); break;
        case LawKind::SineSquared:
          law = LimitLaw::sine_squared(j.at("theta_star").get<double>());
          break;
        case LawKind::Geometric:
          law = LimitLaw::geometric(j.at("lambda_plus").get<double>());
          break;
      }
    }

    std::optional<double> theta_star;
    if (!meta.at("theta_star").is_null()) theta_star = meta.at("theta_star").get<double>();

    StationaryProfile profile;
    profile.M = meta.at("M").get<std::size_t>();
    profile.comfortability = meta.at("comfortability").get<double>();
    profile.site_norm_sq = columns.at("phi_norm_sq").get<std::vector<double>>();
    profile.mu = columns.at("mu").get<std::vector<double>>();
    if (profile.site_norm_sq.size() != profile.M || profile.mu.size() != profile.M) {
      throw IoError("profile columns do not match M");
    }

    return ProfileDocument{
        std::move(profile),
        ProfileMetadata{coin, meta.at("xi").get<double>(), meta.at("omega").get<double>(),
                        *region, theta_star},
        law};
  } catch (const nlohmann::json::exception& e) {
    throw IoError(std::string("malformed profile JSON: ") + e.what());
  } catch (const IoError&) {
    throw;
  } catch (const Error& e) {
    throw IoError(std::string("invalid profile JSON: ") + e.what());
  }
}

std::string render_sweep(std::span<const SweepRow> rows, Format format) {
  if (format == Format::Csv) {
    std::string out = "M,regime,theta_star_effective,ks\n";
    for (const SweepRow& r : rows) {
      out += std::to_string(r.M);
      out += ',';
      out += region_name(r.regime);
      out += ',';
      out += csv_optional(r.theta_star_effective);
      out += ',';
      out += format_double(r.ks);
      out += '\n';
    }
    return out;
  }
  ojson arr = ojson::array();
  for (const SweepRow& r : rows) {
    ojson row = ojson::object();
    row["M"] = r.M;
    row["regime"] = region_name(r.regime);
    row["theta_star_effective"] = number_or_null(r.theta_star_effective);
    row["ks"] = r.ks;
    arr.push_back(std::move(row));
  }
  return arr.dump(2) + "\n";
}

void write_text_file(const std::filesystem::path& path, std::string_view content) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw IoError("cannot open " + path.string() + " for writing");
  out.write(content.data(), static_cast<std::streamsize>(content.size()));
  out.flush();
  if (!out) throw IoError("failed writing " + path.string());
}

void export_profile(const ProfileDocument& doc, const std::filesystem::path& path,
                    Format format) {
  write_text_file(path, render_profile(doc, format));
}

void export_sweep(std::span<const SweepRow> rows, const std::filesystem::path& path,
                  Format format) {
  write_text_file(path, render_sweep(rows, format));
}

}  // namespace qwalk
