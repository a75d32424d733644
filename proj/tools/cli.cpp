#include "cli.hpp"

#include "lipfree/decomposition.hpp"
#include "lipfree/derivation.hpp"
#include "lipfree/errors.hpp"
#include "lipfree/freespace.hpp"
#include "lipfree/io.hpp"
#include "lipfree/rng.hpp"
#include "lipfree/suite.hpp"

#include <CLI11.hpp>
#include <json.hpp>

#include <algorithm>
#include <ostream>
#include <sstream>

namespace lipfree::cli {

namespace {

using nlohmann::json;

/// A check that ran to completion and failed; maps to exit code 1.
struct CheckFailure : std::runtime_error
{
  using std::runtime_error::runtime_error;
};

struct SpaceOptions
{
  std::string alpha = "1";
  std::size_t branches = 3;
  std::size_t limit_width = 1;
  std::size_t budget_points = kDefaultPointBudget;
  std::string space_file;

  DiamondSpec spec() const
  {
    DiamondSpec s;
    s.alpha = Ordinal::parse(alpha);
    s.branches = branches;
    s.limit_width = limit_width;
    s.budget_points = budget_points;
    s.validate();
    return s;
  }
};

void add_generator_flags(CLI::App &cmd, SpaceOptions &o)
{
  cmd.add_option("--alpha", o.alpha, "Ordinal level, e.g. 3, w, w+2, w^(2)")->capture_default_str();
  cmd.add_option("--branches", o.branches, "Midpoints per successor stage")->capture_default_str();
  cmd.add_option("--limit-width", o.limit_width, "Summands kept at limit stages")->capture_default_str();
  cmd.add_option("--budget-points", o.budget_points, "Refuse to build larger truncations")->capture_default_str();
}

void add_space_flags(CLI::App &cmd, SpaceOptions &o)
{
  add_generator_flags(cmd, o);
  cmd.add_option("--space", o.space_file, "Space file (overrides the generator flags)");
}

struct LoadedInput
{
  std::shared_ptr<const Diamond> diamond;
  std::optional<MetricSpace> file_space;

  const MetricSpace &space() const { return diamond ? diamond->space() : *file_space; }
};

LoadedInput load_space(const SpaceOptions &o)
{
  LoadedInput in;
  if (!o.space_file.empty())
    in.file_space = io::read_space(io::read_file(o.space_file)).space;
  else
    in.diamond = Diamond::build(o.spec());
  return in;
}

void emit(std::ostream &out, const std::string &path, const std::string &text)
{
  if (path.empty())
    out << text;
  else
    io::write_file(path, text);
}

Rational rational_option(const std::string &text, const char *name)
{
  try {
    return parse_rational(text);
  } catch (const ParseError &e) {
    throw ParseError(std::string("--") + name + ": " + e.what());
  }
}

// Labels are matched as given, then as a canonicalized diamond address, so
// "-1.b" finds "b".
PointIndex point_named(const MetricSpace &space, const std::string &label)
{
  if (auto k = space.index_of(label))
    return *k;
  try {
    if (auto k = space.index_of(canonicalize(PointAddress::parse(label)).to_string()))
      return *k;
  } catch (const ParseError &) {
  }
  throw ParseError("unknown point '" + label + "'");
}

// ---------------------------------------------------------------------------

int cmd_gen(const SpaceOptions &o, const std::string &out_path, const std::string &dot_path, std::ostream &out)
{
  const auto spec = o.spec();
  const auto d = Diamond::build(spec);
  const auto &space = d->space();
  emit(out, out_path, io::write_space(space, spec));
  if (!dot_path.empty())
    io::write_file(dot_path, to_dot(space));
  if (!out_path.empty())
    out << "D_" << spec.alpha.to_string() << " with " << spec.branches << " branches: " << space.size()
        << " points, base " << space.label(space.base()) << ", d(t,b) = "
        << format_rational(space.d(d->landmarks().top, d->landmarks().bottom)) << "\n";
  return kPass;
}

int cmd_dist(const SpaceOptions &o, const std::string &from, const std::string &to, std::ostream &out)
{
  const auto in = load_space(o);
  const auto &space = in.space();
  out << format_rational(space.d(point_named(space, from), point_named(space, to))) << "\n";
  return kPass;
}

int cmd_norm(const SpaceOptions &o, const std::string &vector_file, const std::vector<std::string> &molecule_points,
             const std::string &out_path, std::ostream &out)
{
  const auto in = load_space(o);
  const auto &space = in.space();
  FreeVector v;
  if (!vector_file.empty() == !molecule_points.empty())
    throw ParseError("give exactly one of --vector and --molecule");
  if (!vector_file.empty())
    v = io::read_vector(space, io::read_file(vector_file));
  else
    v = molecule(space, point_named(space, molecule_points[0]), point_named(space, molecule_points[1]));
  const auto norm = free_norm(space, v);
  const auto text = io::write_norm(space, norm);
  if (!out_path.empty())
    io::write_file(out_path, text);
  out << text;
  return certificate_is_valid(space, v, norm.certificate) ? kPass : kCheckFailed;
}

int cmd_extend(const SpaceOptions &o, const std::string &function_file, const std::string &lip,
               const std::string &out_path, std::ostream &out)
{
  const auto in = load_space(o);
  const auto &space = in.space();
  const auto f = io::read_function(space, io::read_file(function_file));
  const Rational L = rational_option(lip, "lip");
  if (!is_lipschitz(space, f, L))
    throw CheckFailure("the given values are not " + format_rational(L) + "-Lipschitz on their domain");
  const auto g = mcshane_extend(space, f, L);
  emit(out, out_path, io::write_function(space, g));
  return kPass;
}

struct GameOptions
{
  std::optional<std::size_t> depth;
  std::string adversary = "distance_functions";
  std::size_t count = 3;
  std::size_t moves = 2;
  std::string eta = "1/20";
  std::string epsilon = "1";
  std::uint64_t seed = 1;
  std::string horizon = "1";
  std::size_t summand = 0;
};

json violations_json(const VerificationReport &report)
{
  json list = json::array();
  for (const auto &v : report.violations)
    list.push_back(json{{"node", v.node}, {"kind", to_string(v.kind)}, {"detail", v.detail}});
  return list;
}

/// Verifies, runs the oracle, prints a summary; returns pass/fail.
int check_transcript(const MetricSpace &space, const GameTranscript &t, const std::string &out_path,
                     const std::string &report_path, const std::string &command, std::ostream &out)
{
  NormCache norms(space);
  const auto report = verify_transcript(norms, t);
  std::vector<bool> sound;
  if (report.passed())
    sound = oracle_soundness(norms, t);
  const bool all_sound = std::all_of(sound.begin(), sound.end(), [](bool b) { return b; });
  const bool ok = report.passed() && all_sound;

  if (!out_path.empty())
    io::write_file(out_path, io::write_transcript(space, t, &report));

  out << "verify: " << (report.passed() ? "pass" : "fail") << " (" << report.nodes_checked << " nodes, "
      << report.violations.size() << " violations)\n";
  for (std::size_t k = 0; k < report.violations.size() && k < 10; ++k) {
    const auto &v = report.violations[k];
    out << "  " << v.node << ": " << to_string(v.kind) << ": " << v.detail << "\n";
  }
  if (report.passed()) {
    out << "oracle: root " << (all_sound ? "survives" : "does not survive") << " " << (t.root ? t.root->depth : 0)
        << " rounds for all " << sound.size() << " families\n";
  }

  if (!report_path.empty()) {
    json doc{{"format", "lipfree-game-report"},
             {"version", 1},
             {"command", command},
             {"verdict", ok ? "pass" : "fail"},
             {"nodes", report.nodes_checked},
             {"violations", violations_json(report)},
             {"oracle_survival", sound}};
    if (t.root)
      doc["depth"] = t.root->depth;
    io::write_file(report_path, doc.dump(2) + "\n");
  }
  return ok ? kPass : kCheckFailed;
}

int cmd_game(const SpaceOptions &o, const GameOptions &g, const std::string &out_path, const std::string &report_path,
             std::ostream &out)
{
  const auto spec = o.spec();
  const auto d = Diamond::build(spec);
  DiamondView view = g.summand > 0 ? DiamondView::summand(d, g.summand) : DiamondView::whole(d);
  if (d->is_limit() && g.summand == 0)
    throw ParseError("level " + spec.alpha.to_string() + " is a limit; pick a summand with --summand <m>");

  AdversaryConfig config;
  config.kind = parse_adversary_kind(g.adversary);
  config.count = g.count;
  config.moves = g.moves;
  config.eta = rational_option(g.eta, "eta");
  config.seed = g.seed;
  if (g.horizon == "all")
    config.horizon = std::nullopt;
  else {
    try {
      config.horizon = std::stoul(g.horizon);
    } catch (const std::exception &) {
      throw ParseError("--horizon takes a branch count or 'all'");
    }
  }
  const Rational epsilon = rational_option(g.epsilon, "epsilon");
  const auto level = view.diamond->alpha().finite_value();
  const std::size_t depth = g.depth.value_or(level.value_or(0));

  const auto t = prover_certify(view, depth, config, epsilon);
  out << "game: depth " << depth << " on D_" << view.diamond->alpha().to_string() << " ("
      << d->space().size() << " points), " << to_string(config.kind) << " x" << config.moves << " families of "
      << config.count << ", eta " << format_rational(config.eta) << ", seed " << config.seed << "\n";
  return check_transcript(d->space(), t, out_path, report_path, "game", out);
}

int cmd_verify(const SpaceOptions &o, const std::string &transcript_file, const std::string &out_path,
               const std::string &report_path, std::ostream &out)
{
  const auto text = io::read_file(transcript_file);
  std::shared_ptr<const Diamond> d;
  std::optional<MetricSpace> file_space;
  if (!o.space_file.empty()) {
    file_space = io::read_space(io::read_file(o.space_file)).space;
  } else {
    auto spec = io::transcript_spec(text);
    if (!spec)
      throw ParseError("transcript records no space; pass --space");
    spec->budget_points = std::max(spec->budget_points, o.budget_points);
    d = Diamond::build(*spec);
  }
  const MetricSpace &space = d ? d->space() : *file_space;
  return check_transcript(space, io::read_transcript(space, text), out_path, report_path, "verify", out);
}

int cmd_decomp(const SpaceOptions &o, std::size_t count, std::uint64_t seed, const std::string &partition_path,
               const std::string &report_path, std::ostream &out)
{
  const auto d = Diamond::build(o.spec());
  const auto &space = d->space();
  const auto cover = build_cover(*d);
  const auto a = a_subspace(*d, cover);
  const auto summing = summing_metric(a.space, a.partition);
  const auto constants = equivalence_constants(a.space, summing);

  std::size_t infinite = std::count(cover.D.begin(), cover.D.end(), std::nullopt);
  const auto min_d = cover.min_D();
  const auto &d_bottom = cover.D[d->landmarks().bottom];
  bool ok = cover.covers(space.size()) && min_d && *min_d >= Rational(1, 2) && d_bottom &&
            *d_bottom >= Rational(3, 2) && constants.low >= Rational(1, 3) && constants.high <= 1;

  Rng rng(seed);
  std::size_t additive = 0, projected = 0;
  for (std::size_t k = 0; k < count; ++k) {
    FreeVector v;
    for (const auto &summand : a.partition.summands) {
      std::int64_t num = rng.between(-5, 4);
      if (num >= 0)
        ++num;
      v.add(summand[rng.below(summand.size())], ratio(num, rng.between(1, 3)));
    }
    additive += ell1_additivity_check(summing, a.partition, v).holds;
    projected += projection_identity_check(summing, a.partition, v).holds;
  }
  ok = ok && additive == count && projected == count;

  auto label_pair = [&](const std::pair<PointIndex, PointIndex> &p) {
    return "(" + a.space.label(p.first) + ", " + a.space.label(p.second) + ")";
  };
  out << "cover: |A| = " << cover.A.size() << ", |B| = " << cover.B.size() << " of " << space.size()
      << " points, covers: " << (cover.covers(space.size()) ? "yes" : "no") << "\n";
  out << "D: min " << (min_d ? format_rational(*min_d) : "inf") << ", D(b) = "
      << (d_bottom ? format_rational(*d_bottom) : "inf") << ", infinite values: " << infinite << "\n";
  out << "equivalence on A: c_low = " << format_rational(constants.low) << " at " << label_pair(constants.low_pair)
      << ", c_high = " << format_rational(constants.high) << " at " << label_pair(constants.high_pair) << "\n";
  out << "l1 additivity: " << additive << "/" << count << ", projection identity: " << projected << "/" << count
      << "\n";
  out << "decomp: " << (ok ? "pass" : "fail") << "\n";

  if (!partition_path.empty())
    io::write_file(partition_path, io::write_partition(a.space, a.partition));
  if (!report_path.empty()) {
    json doc{{"format", "lipfree-decomp-report"},
             {"version", 1},
             {"verdict", ok ? "pass" : "fail"},
             {"points", space.size()},
             {"a_size", cover.A.size()},
             {"b_size", cover.B.size()},
             {"covers", cover.covers(space.size())},
             {"min_d", min_d ? format_rational(*min_d) : "inf"},
             {"c_low", format_rational(constants.low)},
             {"c_high", format_rational(constants.high)},
             {"additivity_holds", additive},
             {"projection_holds", projected},
             {"vectors", count}};
    io::write_file(report_path, doc.dump(2) + "\n");
  }
  return ok ? kPass : kCheckFailed;
}

int cmd_suite(const SuiteConfig &config, const std::string &report_path, std::ostream &out)
{
  const auto report = run_suite(config, [&](const SuiteEntry &e) {
    out << "[" << to_string(e.status) << "] " << e.id << " " << e.name << ": " << e.details << std::endl;
  });
  const auto text = write_report(report);
  if (!report_path.empty())
    io::write_file(report_path, text);
  out << "suite: " << (report.passed() ? "pass" : "fail") << "\n";
  return report.passed() ? kPass : kCheckFailed;
}

}  // namespace

int run(int argc, const char *const *argv, std::ostream &out, std::ostream &err)
{
  CLI::App app("Lipschitz-free spaces over diamond graphs: exact norms, derivation games, decompositions", "lipfree");
  app.require_subcommand(1);
  app.set_version_flag("--version", kToolVersion);

  SpaceOptions space_opts;
  std::string out_path, report_path, dot_path;

  auto *gen = app.add_subcommand("gen", "Build a diamond truncation and write its space file");
  add_generator_flags(*gen, space_opts);
  gen->add_option("--out", out_path, "Space file to write (stdout when omitted)");
  gen->add_option("--dot", dot_path, "Also write the finest edges as Graphviz");

  std::string from, to;
  auto *dist = app.add_subcommand("dist", "Print the exact distance between two points");
  add_space_flags(*dist, space_opts);
  dist->add_option("--from", from, "Point label")->required();
  dist->add_option("--to", to, "Point label")->required();

  std::string vector_file;
  std::vector<std::string> molecule_points;
  auto *norm = app.add_subcommand("norm", "Free-space norm of a vector with its transport certificate");
  add_space_flags(*norm, space_opts);
  norm->add_option("--vector", vector_file, "Vector file");
  norm->add_option("--molecule", molecule_points, "Two point labels x y: use m_{x,y}")->expected(2);
  norm->add_option("--out", out_path, "Also write the result here");

  std::string function_file, lip = "1";
  auto *extend = app.add_subcommand("extend", "McShane extension of a partial Lipschitz function");
  add_space_flags(*extend, space_opts);
  extend->add_option("--function", function_file, "Function file (partial values)")->required();
  extend->add_option("--lip", lip, "Lipschitz constant as p/q")->capture_default_str();
  extend->add_option("--out", out_path, "Output function file (stdout when omitted)");

  GameOptions game_opts;
  std::size_t depth_value = 0;
  auto *game = app.add_subcommand("game", "Play the derivation game and verify the transcript");
  add_generator_flags(*game, space_opts);
  auto *depth_flag = game->add_option("--depth", depth_value, "Game depth (default: the level)");
  game->add_option("--adversary", game_opts.adversary, "random_lipschitz | distance_functions | adaptive_dual")
      ->capture_default_str();
  game->add_option("--count", game_opts.count, "Functionals per family")->capture_default_str();
  game->add_option("--moves", game_opts.moves, "Families posed per game")->capture_default_str();
  game->add_option("--eta", game_opts.eta, "Neighborhood tolerance p/q")->capture_default_str();
  game->add_option("--epsilon", game_opts.epsilon, "Required separation p/q")->capture_default_str();
  game->add_option("--seed", game_opts.seed, "Adversary seed")->capture_default_str();
  game->add_option("--horizon", game_opts.horizon, "Branches visible to the adversary, or 'all'")
      ->capture_default_str();
  game->add_option("--summand", game_opts.summand, "At a limit level, play on summand m");
  game->add_option("--out", out_path, "Transcript file with per-node status");
  game->add_option("--report", report_path, "JSON summary");

  std::string transcript_file;
  auto *verify = app.add_subcommand("verify", "Re-check a transcript file independently");
  verify->add_option("--transcript", transcript_file, "Transcript file")->required();
  verify->add_option("--space", space_opts.space_file, "Space file (default: rebuild from the transcript)");
  verify->add_option("--budget-points", space_opts.budget_points, "Point budget for rebuilding");
  verify->add_option("--out", out_path, "Write the transcript back with per-node status");
  verify->add_option("--report", report_path, "JSON summary");

  std::size_t decomp_count = 30;
  std::uint64_t decomp_seed = 1;
  std::string partition_path;
  auto *decomp = app.add_subcommand("decomp", "Cover, summing distance and l1-decomposition checks at a limit level");
  add_generator_flags(*decomp, space_opts);
  decomp->add_option("--count", decomp_count, "Random vectors per identity")->capture_default_str();
  decomp->add_option("--seed", decomp_seed, "Vector seed")->capture_default_str();
  decomp->add_option("--partition-out", partition_path, "Write the summand partition of A");
  decomp->add_option("--report", report_path, "JSON summary");

  SuiteConfig suite_config;
  std::size_t suite_branches = 0;
  auto *suite = app.add_subcommand("suite", "Run every acceptance check");
  suite->add_option("--seed", suite_config.seed, "Master seed")->capture_default_str();
  suite->add_option("--budget-points", suite_config.budget_points, "Point budget")->capture_default_str();
  auto *branches_flag = suite->add_option("--branches", suite_branches, "Override branching of escape/game checks");
  suite->add_option("--only", suite_config.only, "Check ids to run");
  suite->add_flag("--timings", suite_config.include_timings, "Record wall times in the report");
  suite->add_option("--report", report_path, "JSON report");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError &e) {
    std::ostringstream o, er;
    const int code = app.exit(e, o, er);
    out << o.str();
    err << er.str();
    return code == 0 ? kPass : kUsage;
  }

  try {
    if (*gen)
      return cmd_gen(space_opts, out_path, dot_path, out);
    if (*dist)
      return cmd_dist(space_opts, from, to, out);
    if (*norm)
      return cmd_norm(space_opts, vector_file, molecule_points, out_path, out);
    if (*extend)
      return cmd_extend(space_opts, function_file, lip, out_path, out);
    if (*game) {
      if (depth_flag->count() > 0)
        game_opts.depth = depth_value;
      return cmd_game(space_opts, game_opts, out_path, report_path, out);
    }
    if (*verify)
      return cmd_verify(space_opts, transcript_file, out_path, report_path, out);
    if (*decomp) {
      if (decomp->get_option("--alpha")->count() == 0)
        space_opts.alpha = "w";
      if (decomp->get_option("--limit-width")->count() == 0)
        space_opts.limit_width = 3;
      return cmd_decomp(space_opts, decomp_count, decomp_seed, partition_path, report_path, out);
    }
    if (*suite) {
      if (branches_flag->count() > 0)
        suite_config.branches = suite_branches;
      return cmd_suite(suite_config, report_path, out);
    }
  } catch (const BudgetExceeded &e) {
    err << "budget exceeded: " << e.what() << "\n";
    return kBudget;
  } catch (const InsufficientBranching &e) {
    err << "insufficient branching: " << e.what() << "\n";
    return kCheckFailed;
  } catch (const CheckFailure &e) {
    err << "check failed: " << e.what() << "\n";
    return kCheckFailed;
  } catch (const ParseError &e) {
    err << "input error: " << e.what() << "\n";
    return kUsage;
  } catch (const IoError &e) {
    err << "file error: " << e.what() << "\n";
    return kUsage;
  } catch (const std::invalid_argument &e) {
    err << "invalid argument: " << e.what() << "\n";
    return kUsage;
  } catch (const std::out_of_range &e) {
    err << "out of range: " << e.what() << "\n";
    return kUsage;
  } catch (const std::exception &e) {
    err << "error: " << e.what() << "\n";
    return kCheckFailed;
  }
  return kUsage;
}

}  // namespace lipfree::cli
