#include "qwalk/cli.hpp"

#include "CLI11.hpp"
#include "json.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <optional>
#include <sstream>
#include <string_view>
#include <vector>

#include "qwalk/dynamics.hpp"
#include "qwalk/error.hpp"
#include "qwalk/export.hpp"
#include "qwalk/limit_laws.hpp"
#include "qwalk/stationary.hpp"

namespace qwalk {
namespace {

double parse_real(std::string_view text) {
  double value = 0.0;
  const auto [ptr, ec] = std::from_chars(text.data(), text.data() + text.size(), value);
  if (ec != std::errc() || ptr != text.data() + text.size()) {
    throw InvalidArgument("not a number: '" + std::string(text) + "'");
  }
  return value;
}

// Options shared by the subcommands that need a walk (coin, M, frequency).
struct WalkOptions {
  std::string coin = "hadamard";
  std::optional<double> xi;
  std::optional<double> theta_star;
  std::string branch = "plus";
  std::size_t M = 0;
  double eps = kRegimeEps;
  std::string out;
  std::string format = "csv";
};

void add_frequency_options(CLI::App& sub, WalkOptions& o) {
  sub.add_option("--coin", o.coin,
                 "hadamard | rot:<angle> | are,aim,bre,bim,cre,cim,dre,dim")
      ->capture_default_str();
  auto* xi = sub.add_option("--xi", o.xi, "inflow frequency (radians)");
  auto* ts = sub.add_option("--theta-star", o.theta_star,
                            "set theta = theta*/M inside B_in and derive xi from it");
  xi->excludes(ts);
  sub.add_option("--branch", o.branch, "sign of cos(omega) when deriving xi")
      ->check(CLI::IsMember({"plus", "minus"}))
      ->capture_default_str();
  sub.add_option("--eps", o.eps, "regime classification tolerance")
      ->check(CLI::NonNegativeNumber)
      ->capture_default_str();
}

void add_output_options(CLI::App& sub, WalkOptions& o) {
  sub.add_option("--out", o.out, "output file (default: stdout)");
  sub.add_option("--format", o.format, "csv | json")
      ->check(CLI::IsMember({"csv", "json"}))
      ->capture_default_str();
}

void add_length_option(CLI::App& sub, WalkOptions& o, bool required) {
  auto* opt = sub.add_option("--M", o.M, "number of sites on the path")
                  ->check(CLI::Range(std::size_t{1}, std::numeric_limits<std::size_t>::max()));
  if (required) opt->required();
}

Branch branch_of(const WalkOptions& o) {
  return o.branch == "minus" ? Branch::Minus : Branch::Plus;
}

Format format_of(const WalkOptions& o) {
  return o.format == "json" ? Format::Json : Format::Csv;
}

// Resolves xi from --xi, or from --theta-star with the path length M.
struct Frequency {
  double xi;
  Scaling scaling;
  std::optional<double> theta_star;
};

Frequency resolve_frequency(const Coin& coin, const WalkOptions& o, std::size_t M) {
  if (o.xi) return {*o.xi, FixedXi{*o.xi}, std::nullopt};
  if (o.theta_star) {
    if (M == 0) throw InvalidArgument("--theta-star needs --M");
    const double theta = *o.theta_star / static_cast<double>(M);
    const double xi = xi_from_theta(coin, theta, branch_of(o));
    return {xi, ThetaStarOverM{*o.theta_star, branch_of(o)}, o.theta_star};
  }
  throw InvalidArgument("one of --xi or --theta-star is required");
}

void emit(std::ostream& out, const WalkOptions& o, const std::string& text) {
  if (o.out.empty()) {
    out << text;
  } else {
    write_text_file(o.out, text);
  }
}

void kv(std::ostream& out, std::string_view key, double value) {
  out << key << '=' << format_double(value) << '\n';
}

void kv(std::ostream& out, std::string_view key, std::string_view value) {
  out << key << '=' << value << '\n';
}

int cmd_regime(const WalkOptions& o, std::ostream& out) {
  const Coin coin = parse_coin(o.coin);
  const Frequency f = resolve_frequency(coin, o, o.M);
  RegimeParams r = regime_of_xi(coin, f.xi, o.eps);
  r.theta_star = f.theta_star;

  std::ostringstream text;
  if (format_of(o) == Format::Json) {
    nlohmann::ordered_json j;
    j["region"] = region_name(r.region);
    j["xi"] = r.xi;
    j["omega"] = r.omega;
    j["abs_a"] = coin.abs_a();
    j["chebyshev_argument"] = chebyshev_argument(coin, r.omega);
    j["theta"] = r.theta ? nlohmann::ordered_json(*r.theta) : nullptr;
    j["theta_star"] = r.theta_star ? nlohmann::ordered_json(*r.theta_star) : nullptr;
    j["lambda_plus"] = r.lambda_plus ? nlohmann::ordered_json(*r.lambda_plus) : nullptr;
    j["lambda_minus"] = r.lambda_minus ? nlohmann::ordered_json(*r.lambda_minus) : nullptr;
    text << j.dump(2) << '\n';
  } else {
    kv(text, "region", region_name(r.region));
    kv(text, "xi", r.xi);
    kv(text, "omega", r.omega);
    kv(text, "abs_a", coin.abs_a());
    kv(text, "chebyshev_argument", chebyshev_argument(coin, r.omega));
    if (r.theta) kv(text, "theta", *r.theta);
    if (r.theta_star) kv(text, "theta_star", *r.theta_star);
    if (r.lambda_plus) kv(text, "lambda_plus", *r.lambda_plus);
    if (r.lambda_minus) kv(text, "lambda_minus", *r.lambda_minus);
  }
  emit(out, o, text.str());
  return 0;
}

Axis parse_axis(const std::string& s) { return s == "site" ? Axis::Site : Axis::Scaled; }

int cmd_stationary(const WalkOptions& o, const std::string& law_mode,
                   const std::string& axis, std::ostream& out) {
  const Coin coin = parse_coin(o.coin);
  const Frequency f = resolve_frequency(coin, o, o.M);
  const RegimeParams r = regime_of_xi(coin, f.xi, o.eps);

  ProfileDocument doc{stationary_distribution(o.M, coin, r.omega, o.eps),
                      ProfileMetadata{coin, f.xi, r.omega, r.region, f.theta_star},
                      std::nullopt};
  if (law_mode == "auto") doc.law = select_limit_law(r, f.scaling, parse_axis(axis));
  emit(out, o, render_profile(doc, format_of(o)));
  return 0;
}

int cmd_simulate(const WalkOptions& o, double tol, std::uint64_t t_max,
                 std::ostream& out, std::ostream& err) {
  const Coin coin = parse_coin(o.coin);
  const Frequency f = resolve_frequency(coin, o, o.M);
  const RegimeParams r = regime_of_xi(coin, f.xi, o.eps);
  const WalkConfig config = make_walk_config(o.M, coin, f.xi);

  const StationaryRun run = run_until_stationary(config, tol, t_max);
  const StationaryProfile closed = stationary_distribution(o.M, coin, r.omega, o.eps);

  kv(out, "M", static_cast<double>(o.M));
  kv(out, "xi", f.xi);
  kv(out, "omega", r.omega);
  kv(out, "regime", region_name(r.region));
  kv(out, "steps", static_cast<double>(run.t));
  kv(out, "converged", run.converged ? "true" : "false");
  kv(out, "residual", run.residual);
  kv(out, "eigen_residual_iteration", eigen_residual(run.phi_star, config));

  double worst_rel = 0.0;
  for (std::size_t n = 0; n < o.M; ++n) {
    const double sim = run.phi_star[n].norm_sq();
    worst_rel = std::max(worst_rel, std::abs(sim - closed.site_norm_sq[n]) /
                                        closed.site_norm_sq[n]);
  }
  kv(out, "max_rel_diff_closed_form", worst_rel);

  if (o.M <= kMaxDenseSites) {
    const Field solved = solve_fixed_point(config);
    double worst = 0.0;
    for (std::size_t n = 0; n < o.M; ++n) {
      worst = std::max({worst, std::abs(solved[n].l - run.phi_star[n].l),
                        std::abs(solved[n].r - run.phi_star[n].r)});
    }
    kv(out, "eigen_residual_solve", eigen_residual(solved, config));
    kv(out, "max_abs_diff_iteration_solve", worst);
  }

  const StationaryProfile sim = empirical_distribution(run.phi_star);
  kv(out, "comfortability_simulated", sim.comfortability);
  kv(out, "comfortability_closed_form", closed.comfortability);

  if (!o.out.empty()) {
    ProfileDocument doc{sim, ProfileMetadata{coin, f.xi, r.omega, r.region, f.theta_star},
                        std::nullopt};
    if (r.region != Region::Bout) doc.law = select_limit_law(r, f.scaling);
    write_text_file(o.out, render_profile(doc, format_of(o)));
  }

  if (!run.converged) {
    err << "error: no stationary state within " << run.t << " steps\n";
    return 2;
  }
  return 0;
}

int cmd_limit(const WalkOptions& o, const std::string& law_name_arg,
              std::optional<double> lambda_plus, std::size_t points, std::ostream& out) {
  if (points < 2) throw InvalidArgument("--points must be >= 2");
  std::optional<LimitLaw> law;
  std::optional<Coin> coin;
  if (law_name_arg == "cubic") law = LimitLaw::cubic();
  else if (law_name_arg == "uniform") law = LimitLaw::uniform();
  else if (law_name_arg == "pointmass") law = LimitLaw::point_mass();
  else if (law_name_arg == "sine2") {
    if (!o.theta_star) throw InvalidArgument("sine2 needs --theta-star");
    law = LimitLaw::sine_squared(*o.theta_star);
  } else if (law_name_arg == "geometric") {
    if (!lambda_plus) throw InvalidArgument("geometric needs --lambda-plus");
    law = LimitLaw::geometric(*lambda_plus);
  } else {
    coin = parse_coin(o.coin);  // konno
  }

  std::vector<double> xs(points), density(points), cdf(points);
  std::vector<bool> has_density(points, true), has_cdf(points, true);
  const double last = static_cast<double>(points - 1);
  for (std::size_t i = 0; i < points; ++i) {
    const double u = static_cast<double>(i) / last;
    if (coin) {
      xs[i] = -1.0 + 2.0 * u;
      density[i] = konno_density(*coin, xs[i]);
      has_cdf[i] = false;
    } else if (law->kind() == LawKind::Geometric) {
      xs[i] = static_cast<double>(i);
      density[i] = geometric_pmf(law->lambda_plus(), i);
      cdf[i] = limit_cdf(*law, xs[i]);
    } else {
      xs[i] = u;
      if (law->kind() == LawKind::PointMass) {
        has_density[i] = false;
      } else {
        density[i] = limit_density(*law, u);
      }
      cdf[i] = limit_cdf(*law, u);
    }
  }

  std::string text;
  if (format_of(o) == Format::Json) {
    nlohmann::ordered_json j;
    if (coin) {
      j["law"] = {{"kind", "Konno"}, {"abs_a", coin->abs_a()}};
    } else {
      j["law"] = {{"kind", law_name(law->kind())}};
      if (law->kind() == LawKind::SineSquared) j["law"]["theta_star"] = law->theta_star();
      if (law->kind() == LawKind::Geometric) j["law"]["lambda_plus"] = law->lambda_plus();
    }
    auto& cols = j["columns"];
    cols["x"] = xs;
    cols["density"] = nlohmann::ordered_json::array();
    cols["cdf"] = nlohmann::ordered_json::array();
    for (std::size_t i = 0; i < points; ++i) {
      cols["density"].push_back(has_density[i] ? nlohmann::ordered_json(density[i]) : nullptr);
      cols["cdf"].push_back(has_cdf[i] ? nlohmann::ordered_json(cdf[i]) : nullptr);
    }
    text = j.dump(2) + "\n";
  } else {
    text = "x,density,cdf\n";
    for (std::size_t i = 0; i < points; ++i) {
      text += format_double(xs[i]) + ',';
      if (has_density[i]) text += format_double(density[i]);
      text += ',';
      if (has_cdf[i]) text += format_double(cdf[i]);
      text += '\n';
    }
  }
  emit(out, o, text);
  return 0;
}

int cmd_sweep(const WalkOptions& o, const std::vector<std::size_t>& Ms,
              const std::string& axis, std::ostream& out) {
  const Coin coin = parse_coin(o.coin);
  Scaling scaling;
  if (o.xi) {
    scaling = FixedXi{*o.xi};
  } else if (o.theta_star) {
    scaling = ThetaStarOverM{*o.theta_star, branch_of(o)};
  } else {
    throw InvalidArgument("one of --xi or --theta-star is required");
  }
  const std::vector<SweepRow> rows =
      convergence_sweep(coin, scaling, Ms, parse_axis(axis), o.eps);
  emit(out, o, render_sweep(rows, format_of(o)));
  return 0;
}

}  // namespace

Coin parse_coin(const std::string& text) {
  if (text == "hadamard") return hadamard_coin();
  if (text.rfind("rot:", 0) == 0) return rotation_coin(parse_real(text.substr(4)));

  std::vector<double> v;
  std::string_view rest(text);
  while (true) {
    const std::size_t comma = rest.find(',');
    v.push_back(parse_real(rest.substr(0, comma)));
    if (comma == std::string_view::npos) break;
    rest.remove_prefix(comma + 1);
  }
  if (v.size() != 8) {
    throw InvalidArgument("coin needs 'hadamard', 'rot:<angle>' or 8 comma-separated reals");
  }
  return make_coin({v[0], v[1]}, {v[2], v[3]}, {v[4], v[5]}, {v[6], v[7]});
}

int run_cli(std::span<const std::string> args, std::ostream& out, std::ostream& err) {
  CLI::App app{"Source/sink quantum walk on a finite path: stationary comfortability "
               "profiles, dynamics oracle and limit laws",
               "qwalk"};
  app.require_subcommand(1);

  WalkOptions o;

  auto* regime = app.add_subcommand("regime", "classify the inflow frequency");
  add_frequency_options(*regime, o);
  add_length_option(*regime, o, false);
  add_output_options(*regime, o);

  std::string law_mode = "auto";
  std::string axis = "scaled";
  auto* stationary = app.add_subcommand("stationary", "closed-form stationary profile");
  add_frequency_options(*stationary, o);
  add_length_option(*stationary, o, true);
  add_output_options(*stationary, o);
  stationary->add_option("--law", law_mode, "attach the limit law: auto | none")
      ->check(CLI::IsMember({"auto", "none"}))
      ->capture_default_str();
  stationary->add_option("--axis", axis, "scaled (x = n/M) | site (B_out geometric law)")
      ->check(CLI::IsMember({"scaled", "site"}))
      ->capture_default_str();

  double tol = kDefaultStationaryTol;
  std::uint64_t t_max = kDefaultMaxSteps;
  auto* simulate = app.add_subcommand(
      "simulate", "time evolution + fixed-point solve, checked against the closed form");
  add_frequency_options(*simulate, o);
  add_length_option(*simulate, o, true);
  add_output_options(*simulate, o);
  simulate->add_option("--tol", tol, "stationarity tolerance")
      ->check(CLI::PositiveNumber)
      ->capture_default_str();
  simulate->add_option("--t-max", t_max, "maximum number of steps")
      ->check(CLI::PositiveNumber)
      ->capture_default_str();

  std::string law_arg;
  std::optional<double> lambda_plus;
  std::size_t points = 101;
  auto* limit = app.add_subcommand("limit", "tabulate a limit law");
  limit->add_option("--law", law_arg, "cubic | uniform | sine2 | pointmass | geometric | konno")
      ->required()
      ->check(CLI::IsMember({"cubic", "uniform", "sine2", "pointmass", "geometric", "konno"}));
  limit->add_option("--theta-star", o.theta_star, "theta* for sine2");
  limit->add_option("--lambda-plus", lambda_plus, "lambda_+ for geometric");
  limit->add_option("--coin", o.coin, "coin for konno")->capture_default_str();
  limit->add_option("--points", points, "number of grid points")->capture_default_str();
  add_output_options(*limit, o);

  std::vector<std::size_t> Ms;
  auto* sweep = app.add_subcommand("sweep", "KS distance to the limit law across M");
  add_frequency_options(*sweep, o);
  add_output_options(*sweep, o);
  sweep->add_option("--Ms", Ms, "comma-separated, strictly increasing path lengths")
      ->required()
      ->delimiter(',')
      ->check(CLI::PositiveNumber);
  sweep->add_option("--axis", axis, "scaled | site")
      ->check(CLI::IsMember({"scaled", "site"}))
      ->capture_default_str();

  std::vector<const char*> argv;
  argv.reserve(args.size());
  for (const std::string& a : args) argv.push_back(a.c_str());

  try {
    app.parse(static_cast<int>(argv.size()), argv.data());
  } catch (const CLI::CallForHelp&) {
    out << app.help();
    return 0;
  } catch (const CLI::CallForAllHelp&) {
    out << app.help("", CLI::AppFormatMode::All);
    return 0;
  } catch (const CLI::ParseError& e) {
    err << "error: " << e.what() << "\n\n" << app.help();
    return 1;
  }

  try {
    if (regime->parsed()) return cmd_regime(o, out);
    if (stationary->parsed()) return cmd_stationary(o, law_mode, axis, out);
    if (simulate->parsed()) return cmd_simulate(o, tol, t_max, out, err);
    if (limit->parsed()) return cmd_limit(o, law_arg, lambda_plus, points, out);
    if (sweep->parsed()) return cmd_sweep(o, Ms, axis, out);
  } catch (const NoConvergence& e) {
    err << "error: " << e.what() << '\n';
    return 2;
  } catch (const SingularSystem& e) {
    err << "error: " << e.what() << '\n';
    return 2;
  } catch (const Error& e) {
    err << "error: " << e.what() << "\n\n" << app.help();
    return 1;
  }
  return 1;
}

}  // namespace qwalk
