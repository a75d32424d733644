#include "lipfree/io.hpp"

#include "lipfree/errors.hpp"

#include <json.hpp>

#include <algorithm>
#include <fstream>
#include <map>
#include <sstream>

namespace lipfree::io {

using nlohmann::json;

namespace {

constexpr int kVersion = 1;

std::string dump(const json &doc)
{
  return doc.dump(2) + "\n";
}

json parse_document(std::string_view text, std::string_view format)
{
  json doc;
  try {
    doc = json::parse(text);
  } catch (const json::parse_error &e) {
    throw ParseError(std::string("invalid JSON: ") + e.what());
  }
  if (!doc.is_object() || !doc.contains("format") || doc["format"] != format)
    throw ParseError("expected a '" + std::string(format) + "' document");
  if (!doc.contains("version") || doc["version"] != kVersion)
    throw ParseError("unsupported " + std::string(format) + " version");
  return doc;
}

json header(std::string_view format)
{
  return json{{"format", format}, {"version", kVersion}};
}

const json &field(const json &obj, const char *key)
{
  if (!obj.is_object() || !obj.contains(key))
    throw ParseError(std::string("missing field '") + key + "'");
  return obj.at(key);
}

std::string text_field(const json &obj, const char *key)
{
  const auto &value = field(obj, key);
  if (!value.is_string())
    throw ParseError(std::string("field '") + key + "' must be a string");
  return value.get<std::string>();
}

std::uint64_t count_field(const json &obj, const char *key)
{
  const auto &value = field(obj, key);
  if (!value.is_number_unsigned())
    throw ParseError(std::string("field '") + key + "' must be a non-negative integer");
  return value.get<std::uint64_t>();
}

Rational rational_field(const json &obj, const char *key)
{
  return parse_rational(text_field(obj, key));
}

Rational rational_value(const json &value)
{
  if (!value.is_string())
    throw ParseError("rationals are written as \"p/q\" strings");
  return parse_rational(value.get<std::string>());
}

PointIndex point(const MetricSpace &space, const std::string &label)
{
  auto index = space.index_of(label);
  if (!index)
    throw ParseError("unknown point '" + label + "'");
  return *index;
}

json spec_json(const DiamondSpec &spec)
{
  return json{{"alpha", spec.alpha.to_string()},
              {"branches", spec.branches},
              {"limit_width", spec.limit_width},
              {"budget_points", spec.budget_points}};
}

DiamondSpec spec_from(const json &obj)
{
  DiamondSpec spec;
  spec.alpha = Ordinal::parse(text_field(obj, "alpha"));
  spec.branches = count_field(obj, "branches");
  spec.limit_width = count_field(obj, "limit_width");
  spec.budget_points = count_field(obj, "budget_points");
  try {
    spec.validate();
  } catch (const std::invalid_argument &e) {
    throw ParseError(e.what());
  }
  return spec;
}

json vector_json(const MetricSpace &space, const FreeVector &v)
{
  json out = json::object();
  for (const auto &[x, c] : v.support())
    out[space.label(x)] = format_rational(c);
  return out;
}

FreeVector vector_from(const MetricSpace &space, const json &obj)
{
  if (!obj.is_object())
    throw ParseError("vector must be an object of label: \"p/q\" entries");
  FreeVector v;
  for (const auto &[label, value] : obj.items()) {
    const Rational c = rational_value(value);
    if (sgn(c) == 0)
      throw ParseError("zero coefficient for '" + label + "' (omit the entry instead)");
    v.add(point(space, label), c);
  }
  return v;
}

json function_json(const MetricSpace &space, const LipschitzFunction &f)
{
  json out = json::object();
  for (auto x : f.domain())
    out[space.label(x)] = format_rational(f(x));
  return out;
}

LipschitzFunction function_from(const MetricSpace &space, const json &obj)
{
  if (!obj.is_object())
    throw ParseError("function must be an object of label: \"p/q\" entries");
  LipschitzFunction f(space.size());
  for (const auto &[label, value] : obj.items())
    f.set(point(space, label), rational_value(value));
  return f;
}

json adversary_json(const AdversaryConfig &config)
{
  json out{{"kind", to_string(config.kind)},
           {"count", config.count},
           {"moves", config.moves},
           {"eta", format_rational(config.eta)},
           {"seed", config.seed}};
  out["horizon"] = config.horizon ? json(*config.horizon) : json("all");
  return out;
}

AdversaryConfig adversary_from(const json &obj)
{
  AdversaryConfig config;
  config.kind = parse_adversary_kind(text_field(obj, "kind"));
  config.count = count_field(obj, "count");
  config.moves = count_field(obj, "moves");
  config.eta = rational_field(obj, "eta");
  config.seed = count_field(obj, "seed");
  const auto &horizon = field(obj, "horizon");
  if (horizon == "all")
    config.horizon = std::nullopt;
  else
    config.horizon = count_field(obj, "horizon");
  try {
    config.validate();
  } catch (const std::invalid_argument &e) {
    throw ParseError(e.what());
  }
  return config;
}

class TranscriptWriter
{
public:
  TranscriptWriter(const MetricSpace &space, const GameTranscript &t, const VerificationReport *report)
      : space_(space), t_(t)
  {
    if (report)
      for (const auto &v : report->violations)
        by_node_[v.node].push_back(v);
    has_report_ = report != nullptr;
  }

  json node(const TranscriptNode &n, const std::string &path) const
  {
    json out{{"target", vector_json(space_, n.target)},
             {"depth", n.depth},
             {"epsilon", format_rational(n.epsilon)}};
    json moves = json::array();
    for (std::size_t r = 0; r < n.moves.size(); ++r) {
      const auto &m = n.moves[r];
      const auto where = path + ".m" + std::to_string(r);
      json move{{"family", family_index(m.neighborhood)},
                {"eta", format_rational(m.neighborhood.eta)},
                {"center", vector_json(space_, m.neighborhood.center)},
                {"response", vector_json(space_, m.response)}};
      move["response_subtree"] = m.response_subtree ? node(*m.response_subtree, where + ".r") : json(nullptr);
      move["target_subtree"] = m.target_subtree ? node(*m.target_subtree, where + ".t") : json(nullptr);
      if (has_report_)
        annotate(move, where);
      moves.push_back(std::move(move));
    }
    out["moves"] = std::move(moves);
    if (has_report_)
      annotate(out, path);
    return out;
  }

private:
  std::size_t family_index(const WeakNeighborhood &V) const
  {
    for (std::size_t r = 0; r < t_.families.size(); ++r)
      if (t_.families[r] == V.functionals)
        return r;
    for (std::size_t r = 0; r < t_.families.size(); ++r)
      if (V.functionals && t_.families[r] && *t_.families[r] == *V.functionals)
        return r;
    throw std::invalid_argument("transcript move poses a family missing from the family table");
  }

  void annotate(json &obj, const std::string &path) const
  {
    auto it = by_node_.find(path);
    if (it == by_node_.end()) {
      obj["status"] = "pass";
      return;
    }
    obj["status"] = "fail";
    json list = json::array();
    for (const auto &v : it->second)
      list.push_back(json{{"kind", to_string(v.kind)}, {"detail", v.detail}});
    obj["violations"] = std::move(list);
  }

  const MetricSpace &space_;
  const GameTranscript &t_;
  std::map<std::string, std::vector<Violation>> by_node_;
  bool has_report_ = false;
};

NodePtr node_from(const MetricSpace &space, const GameTranscript &t, const json &obj, std::size_t nesting)
{
  if (obj.is_null())
    return nullptr;
  if (nesting > 64)
    throw ParseError("transcript nesting too deep");
  auto node = std::make_shared<TranscriptNode>();
  node->target = vector_from(space, field(obj, "target"));
  node->depth = count_field(obj, "depth");
  node->epsilon = rational_field(obj, "epsilon");
  const auto &moves = field(obj, "moves");
  if (!moves.is_array())
    throw ParseError("'moves' must be an array");
  for (const auto &m : moves) {
    TranscriptMove move;
    const auto r = count_field(m, "family");
    if (r >= t.families.size())
      throw ParseError("move refers to family " + std::to_string(r) + " beyond the family table");
    move.neighborhood = {t.families[r], vector_from(space, field(m, "center")), rational_field(m, "eta")};
    move.response = vector_from(space, field(m, "response"));
    move.response_subtree = node_from(space, t, field(m, "response_subtree"), nesting + 1);
    move.target_subtree = node_from(space, t, field(m, "target_subtree"), nesting + 1);
    node->moves.push_back(std::move(move));
  }
  return node;
}

}  // namespace

std::string write_space(const MetricSpace &space, const std::optional<DiamondSpec> &spec)
{
  json doc = header("lipfree-space");
  doc["points"] = space.labels();
  doc["base"] = space.label(space.base());
  json rows = json::array();
  for (PointIndex x = 0; x < space.size(); ++x) {
    json row = json::array();
    for (PointIndex y = 0; y < space.size(); ++y)
      row.push_back(format_rational(space.d(x, y)));
    rows.push_back(std::move(row));
  }
  doc["distances"] = std::move(rows);
  if (spec)
    doc["spec"] = spec_json(*spec);
  return dump(doc);
}

LoadedSpace read_space(std::string_view text)
{
  const json doc = parse_document(text, "lipfree-space");
  const auto &points = field(doc, "points");
  if (!points.is_array() || points.empty())
    throw ParseError("'points' must be a nonempty array of labels");
  std::vector<std::string> labels;
  for (const auto &p : points) {
    if (!p.is_string())
      throw ParseError("point labels must be strings");
    labels.push_back(p.get<std::string>());
  }
  const auto n = labels.size();
  const auto &rows = field(doc, "distances");
  if (!rows.is_array() || rows.size() != n)
    throw ParseError("'distances' must have one row per point");
  std::vector<Rational> d;
  d.reserve(n * n);
  for (const auto &row : rows) {
    if (!row.is_array() || row.size() != n)
      throw ParseError("'distances' must be square");
    for (const auto &entry : row)
      d.push_back(rational_value(entry));
  }
  const auto base_label = text_field(doc, "base");
  const auto found = std::find(labels.begin(), labels.end(), base_label);
  if (found == labels.end())
    throw ParseError("base point '" + base_label + "' is not listed");
  const auto base = static_cast<PointIndex>(found - labels.begin());

  std::optional<DiamondSpec> spec;
  if (doc.contains("spec"))
    spec = spec_from(doc["spec"]);
  try {
    MetricSpace space(std::move(labels), std::move(d), base);
    if (auto violation = check_metric_axioms(space))
      throw ParseError("not a metric: " + *violation);
    return {std::move(space), std::move(spec)};
  } catch (const std::invalid_argument &e) {
    throw ParseError(e.what());
  }
}

std::string write_vector(const MetricSpace &space, const FreeVector &v)
{
  json doc = header("lipfree-vector");
  doc["coefficients"] = vector_json(space, v);
  return dump(doc);
}

FreeVector read_vector(const MetricSpace &space, std::string_view text)
{
  return vector_from(space, field(parse_document(text, "lipfree-vector"), "coefficients"));
}

std::string write_function(const MetricSpace &space, const LipschitzFunction &f)
{
  json doc = header("lipfree-function");
  doc["values"] = function_json(space, f);
  return dump(doc);
}

LipschitzFunction read_function(const MetricSpace &space, std::string_view text)
{
  return function_from(space, field(parse_document(text, "lipfree-function"), "values"));
}

std::string write_norm(const MetricSpace &space, const FreeNorm &norm)
{
  json doc = header("lipfree-norm");
  doc["value"] = format_rational(norm.value);
  json plan = json::array();
  for (const auto &entry : norm.certificate.plan)
    plan.push_back(json{{"from", space.label(entry.source)},
                        {"to", space.label(entry.sink)},
                        {"mass", format_rational(entry.mass)}});
  doc["plan"] = std::move(plan);
  doc["potential"] = function_json(space, norm.certificate.potential);
  return dump(doc);
}

std::string write_transcript(const MetricSpace &space, const GameTranscript &transcript,
                             const VerificationReport *report)
{
  json doc = header("lipfree-transcript");
  if (transcript.spec)
    doc["spec"] = spec_json(*transcript.spec);
  if (transcript.adversary)
    doc["adversary"] = adversary_json(*transcript.adversary);
  doc["eta"] = format_rational(transcript.eta);
  json families = json::array();
  for (const auto &family : transcript.families) {
    json list = json::array();
    for (const auto &f : *family)
      list.push_back(function_json(space, f));
    families.push_back(std::move(list));
  }
  doc["families"] = std::move(families);
  TranscriptWriter writer(space, transcript, report);
  doc["root"] = transcript.root ? writer.node(*transcript.root, "root") : json(nullptr);
  if (report) {
    doc["verdict"] = report->passed() ? "pass" : "fail";
    json global = json::array();
    for (const auto &v : report->violations)
      if (v.node.rfind("root", 0) != 0)
        global.push_back(json{{"where", v.node}, {"kind", to_string(v.kind)}, {"detail", v.detail}});
    doc["table_violations"] = std::move(global);
  }
  return dump(doc);
}

std::optional<DiamondSpec> transcript_spec(std::string_view text)
{
  const json doc = parse_document(text, "lipfree-transcript");
  if (!doc.contains("spec"))
    return std::nullopt;
  return spec_from(doc["spec"]);
}

GameTranscript read_transcript(const MetricSpace &space, std::string_view text)
{
  const json doc = parse_document(text, "lipfree-transcript");
  GameTranscript t;
  if (doc.contains("spec"))
    t.spec = spec_from(doc["spec"]);
  if (doc.contains("adversary"))
    t.adversary = adversary_from(doc["adversary"]);
  t.eta = rational_field(doc, "eta");
  const auto &families = field(doc, "families");
  if (!families.is_array())
    throw ParseError("'families' must be an array");
  for (const auto &list : families) {
    if (!list.is_array())
      throw ParseError("each family must be an array of functions");
    auto family = std::make_shared<FunctionalFamily>();
    for (const auto &f : list)
      family->push_back(function_from(space, f));
    t.families.push_back(std::move(family));
  }
  t.root = node_from(space, t, field(doc, "root"), 0);
  return t;
}

std::string write_partition(const MetricSpace &space, const SummandPartition &partition)
{
  json doc = header("lipfree-partition");
  doc["base"] = space.label(partition.base);
  json summands = json::array();
  for (const auto &s : partition.summands) {
    json list = json::array();
    for (auto x : s)
      list.push_back(space.label(x));
    summands.push_back(std::move(list));
  }
  doc["summands"] = std::move(summands);
  return dump(doc);
}

SummandPartition read_partition(const MetricSpace &space, std::string_view text)
{
  const json doc = parse_document(text, "lipfree-partition");
  SummandPartition partition;
  partition.base = point(space, text_field(doc, "base"));
  const auto &summands = field(doc, "summands");
  if (!summands.is_array())
    throw ParseError("'summands' must be an array of label lists");
  for (const auto &list : summands) {
    if (!list.is_array())
      throw ParseError("each summand must be an array of labels");
    std::vector<PointIndex> members;
    for (const auto &label : list) {
      if (!label.is_string())
        throw ParseError("point labels must be strings");
      members.push_back(point(space, label.get<std::string>()));
    }
    partition.summands.push_back(std::move(members));
  }
  try {
    partition.validate(space.size());
  } catch (const std::invalid_argument &e) {
    throw ParseError(e.what());
  }
  return partition;
}

std::string read_file(const std::string &path)
{
  std::ifstream in(path, std::ios::binary);
  if (!in)
    throw IoError("cannot open '" + path + "'");
  std::ostringstream buffer;
  buffer << in.rdbuf();
  return buffer.str();
}

void write_file(const std::string &path, std::string_view content)
{
  std::ofstream out(path, std::ios::binary);
  if (!out)
    throw IoError("cannot write '" + path + "'");
  out.write(content.data(), static_cast<std::streamsize>(content.size()));
  if (!out)
    throw IoError("write to '" + path + "' failed");
}

}  // namespace lipfree::io
