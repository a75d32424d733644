#include "lipfree/diamond.hpp"

#include "lipfree/errors.hpp"

#include <algorithm>
#include <limits>
#include <map>
#include <sstream>
#include <stdexcept>

namespace lipfree {

namespace {

constexpr std::size_t kSaturated = std::numeric_limits<std::size_t>::max();

std::size_t sat_add(std::size_t a, std::size_t b)
{
  return a > kSaturated - b ? kSaturated : a + b;
}

std::size_t sat_mul(std::size_t a, std::size_t b)
{
  if (a != 0 && b > kSaturated / a)
    return kSaturated;
  return a * b;
}

std::size_t count_points(const Ordinal &alpha, std::size_t n, std::size_t width, std::map<Ordinal, std::size_t> &memo)
{
  if (auto it = memo.find(alpha); it != memo.end())
    return it->second;
  std::size_t count = 0;
  const auto cls = classify(alpha);
  if (alpha == Ordinal::natural(1)) {
    count = n + 2;
  } else if (cls.kind == OrdinalKind::successor) {
    const auto inner = count_points(*cls.predecessor, n, width, memo);
    count = inner == kSaturated ? kSaturated : sat_add(2 + n, sat_mul(2 * n, inner - 2));
  } else {
    count = 2;
    for (std::size_t m = 1; m <= width; ++m) {
      const auto inner = count_points(fundamental_sequence(alpha, m), n, width, memo);
      count = inner == kSaturated ? kSaturated : sat_add(count, inner - 2);
    }
  }
  memo.emplace(alpha, count);
  return count;
}

std::string terminal_text(const Terminal &t)
{
  switch (t.kind) {
  case TerminalKind::top:
    return "t";
  case TerminalKind::bottom:
    return "b";
  case TerminalKind::mid:
    return "x" + std::to_string(t.mid);
  }
  return {};
}

std::size_t parse_index(std::string_view text, std::string_view whole)
{
  if (text.empty() || text.size() > 9 || !std::all_of(text.begin(), text.end(), [](char c) { return c >= '0' && c <= '9'; }))
    throw ParseError("bad index in address '" + std::string(whole) + "'");
  const auto value = std::stoul(std::string(text));
  if (value == 0)
    throw ParseError("indices are 1-based in address '" + std::string(whole) + "'");
  return value;
}

// Distance between skeleton points of D_1 (top=0, bottom=1, mids 2..n+1).
Rational skeleton_distance(PointIndex a, PointIndex b)
{
  if (a == b)
    return 0;
  const bool a_mid = a >= 2;
  const bool b_mid = b >= 2;
  if (a_mid != b_mid)
    return 1;
  return 2;
}

}  // namespace

void DiamondSpec::validate() const
{
  if (alpha.is_zero())
    throw std::invalid_argument("alpha must be positive");
  if (branches < 2)
    throw std::invalid_argument("branches must be at least 2");
  if (limit_width < 1)
    throw std::invalid_argument("limit width must be at least 1");
}

std::size_t estimate_points(const DiamondSpec &spec)
{
  spec.validate();
  std::map<Ordinal, std::size_t> memo;
  return count_points(spec.alpha, spec.branches, spec.limit_width, memo);
}

// ---------------------------------------------------------------------------
// Addresses

std::string PointAddress::to_string() const
{
  std::string out;
  for (const auto &segment : path) {
    if (const auto *copy = std::get_if<CopyId>(&segment))
      out += (copy->side == Side::plus ? "+" : "-") + std::to_string(copy->branch);
    else
      out += "s[" + std::get<SummandSegment>(segment).beta.to_string() + "]";
    out += '.';
  }
  return out + terminal_text(terminal);
}

PointAddress PointAddress::parse(std::string_view text)
{
  PointAddress address;
  std::size_t pos = 0;
  for (;;) {
    if (pos >= text.size())
      throw ParseError("truncated address '" + std::string(text) + "'");
    const char c = text[pos];
    if (c == 's') {
      if (pos + 1 >= text.size() || text[pos + 1] != '[')
        throw ParseError("expected '[' after 's' in address '" + std::string(text) + "'");
      const auto close = text.find(']', pos);
      if (close == std::string_view::npos)
        throw ParseError("unterminated summand in address '" + std::string(text) + "'");
      address.path.emplace_back(SummandSegment{Ordinal::parse(text.substr(pos + 2, close - pos - 2))});
      pos = close + 1;
    } else if (c == '+' || c == '-') {
      const auto dot = text.find('.', pos);
      if (dot == std::string_view::npos)
        throw ParseError("copy segment without terminal in address '" + std::string(text) + "'");
      address.path.emplace_back(CopyId{c == '+' ? Side::plus : Side::minus, parse_index(text.substr(pos + 1, dot - pos - 1), text)});
      pos = dot;
    } else {
      const auto rest = text.substr(pos);
      if (rest == "t")
        address.terminal = {TerminalKind::top, 0};
      else if (rest == "b")
        address.terminal = {TerminalKind::bottom, 0};
      else if (rest.size() >= 2 && rest.front() == 'x')
        address.terminal = {TerminalKind::mid, parse_index(rest.substr(1), text)};
      else
        throw ParseError("bad terminal in address '" + std::string(text) + "'");
      return address;
    }
    if (pos >= text.size() || text[pos] != '.')
      throw ParseError("expected '.' in address '" + std::string(text) + "'");
    ++pos;
  }
}

PointAddress canonicalize(PointAddress address)
{
  while (!address.path.empty() && address.terminal.kind != TerminalKind::mid) {
    const bool top = address.terminal.kind == TerminalKind::top;
    const AddressSegment last = address.path.back();
    address.path.pop_back();
    if (const auto *copy = std::get_if<CopyId>(&last)) {
      if (copy->side == Side::plus)
        address.terminal = top ? Terminal{TerminalKind::top, 0} : Terminal{TerminalKind::mid, copy->branch};
      else
        address.terminal = top ? Terminal{TerminalKind::mid, copy->branch} : Terminal{TerminalKind::bottom, 0};
    }
    // Summand poles are the outer poles: terminal unchanged.
  }
  return address;
}

// ---------------------------------------------------------------------------
// Construction

class DiamondBuilder
{
public:
  explicit DiamondBuilder(const DiamondSpec &spec) : spec_(spec) {}

  std::shared_ptr<const Diamond> build(const Ordinal &alpha)
  {
    if (auto it = memo_.find(alpha); it != memo_.end())
      return it->second;
    std::shared_ptr<const Diamond> out;
    if (alpha == Ordinal::natural(1))
      out = build_one();
    else if (classify(alpha).kind == OrdinalKind::successor)
      out = build_successor(alpha);
    else
      out = build_limit(alpha);
    memo_.emplace(alpha, out);
    return out;
  }

private:
  DiamondSpec spec_for(const Ordinal &alpha) const
  {
    DiamondSpec s = spec_;
    s.alpha = alpha;
    return s;
  }

  static std::shared_ptr<Diamond> make(DiamondSpec spec, std::vector<PointAddress> addresses, std::vector<Rational> dist,
                                       PointIndex base)
  {
    std::vector<std::string> labels;
    labels.reserve(addresses.size());
    for (const auto &a : addresses)
      labels.push_back(a.to_string());
    auto diamond = std::shared_ptr<Diamond>(new Diamond(std::move(spec), MetricSpace(std::move(labels), std::move(dist), base)));
    diamond->addresses_ = std::move(addresses);
    return diamond;
  }

  static std::vector<PointAddress> skeleton_addresses(std::size_t n)
  {
    std::vector<PointAddress> out;
    out.push_back({{}, {TerminalKind::top, 0}});
    out.push_back({{}, {TerminalKind::bottom, 0}});
    for (std::size_t i = 1; i <= n; ++i)
      out.push_back({{}, {TerminalKind::mid, i}});
    return out;
  }

  std::shared_ptr<const Diamond> build_one()
  {
    const auto n = spec_.branches;
    const auto size = n + 2;
    std::vector<Rational> dist(size * size);
    for (PointIndex a = 0; a < size; ++a)
      for (PointIndex b = 0; b < size; ++b)
        dist[a * size + b] = skeleton_distance(a, b);
    auto d = make(spec_for(Ordinal::natural(1)), skeleton_addresses(n), std::move(dist), 2);
    fill_skeleton_landmarks(*d, n);
    return d;
  }

  static void fill_skeleton_landmarks(Diamond &d, std::size_t n)
  {
    d.landmarks_.top = 0;
    d.landmarks_.bottom = 1;
    for (std::size_t i = 0; i < n; ++i)
      d.landmarks_.mids.push_back(2 + i);
    d.landmarks_.ell = d.landmarks_.mids.front();
  }

  std::shared_ptr<const Diamond> build_successor(const Ordinal &alpha)
  {
    const auto n = spec_.branches;
    auto pred = build(*classify(alpha).predecessor);
    const auto &P = pred->space();
    const auto &pl = pred->landmarks();
    const auto p = P.size();

    // Per-point bookkeeping: owning copy (or none for the skeleton), local
    // predecessor index, and its two pole indices.
    struct Owner
    {
      std::size_t copy = kSaturated;
      PointIndex local = 0;
    };
    std::vector<PointAddress> addresses = skeleton_addresses(n);
    std::vector<Owner> owner(n + 2);
    std::vector<std::pair<PointIndex, PointIndex>> copy_poles;
    std::vector<std::vector<PointIndex>> injections;

    auto add_copy = [&](CopyId id, PointIndex pole_top, PointIndex pole_bottom) {
      const auto copy_index = copy_poles.size();
      copy_poles.emplace_back(pole_top, pole_bottom);
      std::vector<PointIndex> inj(p);
      for (PointIndex k = 0; k < p; ++k) {
        if (k == pl.top) {
          inj[k] = pole_top;
        } else if (k == pl.bottom) {
          inj[k] = pole_bottom;
        } else {
          inj[k] = addresses.size();
          PointAddress a = pred->addresses()[k];
          a.path.insert(a.path.begin(), AddressSegment{id});
          addresses.push_back(std::move(a));
          owner.push_back({copy_index, k});
        }
      }
      injections.push_back(std::move(inj));
    };
    for (std::size_t j = 1; j <= n; ++j)
      add_copy({Side::plus, j}, 0, 1 + j);
    for (std::size_t i = 1; i <= n; ++i)
      add_copy({Side::minus, i}, 1 + i, 1);

    const auto size = addresses.size();
    if (size > spec_.budget_points)
      throw BudgetExceeded(size, spec_.budget_points);

    // Exits: (skeleton point, distance to it) pairs through which a point
    // leaves its copy.
    const Rational half(1, 2);
    std::vector<std::array<std::pair<PointIndex, Rational>, 2>> exits(size);
    std::vector<int> exit_count(size, 1);
    for (PointIndex u = 0; u < size; ++u) {
      if (owner[u].copy == kSaturated) {
        exits[u][0] = {u, Rational(0)};
        continue;
      }
      const auto [pt, pb] = copy_poles[owner[u].copy];
      exits[u][0] = {pt, P.d(owner[u].local, pl.top) * half};
      exits[u][1] = {pb, P.d(owner[u].local, pl.bottom) * half};
      exit_count[u] = 2;
    }

    std::vector<Rational> dist(size * size);
    Rational candidate;
    for (PointIndex u = 0; u < size; ++u) {
      for (PointIndex v = u + 1; v < size; ++v) {
        Rational best;
        if (owner[u].copy != kSaturated && owner[u].copy == owner[v].copy) {
          best = P.d(owner[u].local, owner[v].local) * half;
        } else {
          bool first = true;
          for (int a = 0; a < exit_count[u]; ++a)
            for (int b = 0; b < exit_count[v]; ++b) {
              candidate = exits[u][a].second + skeleton_distance(exits[u][a].first, exits[v][b].first) + exits[v][b].second;
              if (first || candidate < best) {
                best = candidate;
                first = false;
              }
            }
        }
        dist[u * size + v] = best;
        dist[v * size + u] = best;
      }
    }

    auto d = make(spec_for(alpha), std::move(addresses), std::move(dist), 2);
    fill_skeleton_landmarks(*d, n);
    d->predecessor_ = pred;
    for (std::size_t c = 0; c < n; ++c)
      d->landmarks_.plus_copies.push_back(std::move(injections[c]));
    for (std::size_t c = n; c < 2 * n; ++c)
      d->landmarks_.minus_copies.push_back(std::move(injections[c]));
    return d;
  }

  std::shared_ptr<const Diamond> build_limit(const Ordinal &alpha)
  {
    std::vector<PointAddress> addresses;
    addresses.push_back({{}, {TerminalKind::top, 0}});
    addresses.push_back({{}, {TerminalKind::bottom, 0}});
    std::vector<DiamondSummand> summands;
    std::vector<std::size_t> owner(2, kSaturated);
    std::vector<PointIndex> local(2, 0);

    for (std::size_t m = 1; m <= spec_.limit_width; ++m) {
      const Ordinal beta = fundamental_sequence(alpha, m);
      auto sub = build(beta);
      const auto &sl = sub->landmarks();
      std::vector<PointIndex> inj(sub->space().size());
      for (PointIndex k = 0; k < inj.size(); ++k) {
        if (k == sl.top) {
          inj[k] = 0;
        } else if (k == sl.bottom) {
          inj[k] = 1;
        } else {
          inj[k] = addresses.size();
          PointAddress a = sub->addresses()[k];
          a.path.insert(a.path.begin(), AddressSegment{SummandSegment{beta}});
          addresses.push_back(std::move(a));
          owner.push_back(m - 1);
          local.push_back(k);
        }
      }
      summands.push_back({beta, sub, std::move(inj)});
    }

    const auto size = addresses.size();
    if (size > spec_.budget_points)
      throw BudgetExceeded(size, spec_.budget_points);

    // Distance from every point to the outer poles.
    std::vector<Rational> to_top(size), to_bottom(size);
    to_top[1] = to_bottom[0] = 2;
    for (PointIndex u = 2; u < size; ++u) {
      const auto &s = *summands[owner[u]].diamond;
      to_top[u] = s.space().d(local[u], s.landmarks().top);
      to_bottom[u] = s.space().d(local[u], s.landmarks().bottom);
    }

    std::vector<Rational> dist(size * size);
    for (PointIndex u = 0; u < size; ++u) {
      for (PointIndex v = u + 1; v < size; ++v) {
        Rational value;
        if (u < 2) {
          value = u == 0 ? to_top[v] : to_bottom[v];
        } else if (owner[u] == owner[v]) {
          value = summands[owner[u]].diamond->space().d(local[u], local[v]);
        } else {
          value = std::min<Rational>(to_top[u] + to_top[v], to_bottom[u] + to_bottom[v]);
        }
        dist[u * size + v] = value;
        dist[v * size + u] = value;
      }
    }

    const auto &first = summands.front();
    const PointIndex ell = first.injection[first.diamond->landmarks().ell];
    auto d = make(spec_for(alpha), std::move(addresses), std::move(dist), ell);
    d->landmarks_.top = 0;
    d->landmarks_.bottom = 1;
    d->landmarks_.ell = ell;
    d->summands_ = std::move(summands);
    return d;
  }

  DiamondSpec spec_;
  std::map<Ordinal, std::shared_ptr<const Diamond>> memo_;
};

std::shared_ptr<const Diamond> Diamond::build(const DiamondSpec &spec)
{
  spec.validate();
  const auto estimate = estimate_points(spec);
  if (estimate > spec.budget_points)
    throw BudgetExceeded(estimate, spec.budget_points);
  return DiamondBuilder(spec).build(spec.alpha);
}

bool Diamond::is_successor() const
{
  return classify(spec_.alpha).kind == OrdinalKind::successor;
}

bool Diamond::is_limit() const
{
  return classify(spec_.alpha).kind == OrdinalKind::limit;
}

const std::vector<PointIndex> &subcopy_map(const DiamondLandmarks &landmarks, CopyId which)
{
  const auto &copies = which.side == Side::plus ? landmarks.plus_copies : landmarks.minus_copies;
  if (copies.empty())
    throw std::invalid_argument("this stage has no sub-copies (alpha must be a successor >= 2)");
  if (which.branch < 1 || which.branch > copies.size())
    throw std::out_of_range("sub-copy branch " + std::to_string(which.branch) + " out of range 1.." +
                            std::to_string(copies.size()));
  return copies[which.branch - 1];
}

const std::vector<PointIndex> &Diamond::subcopy_map(CopyId which) const
{
  return lipfree::subcopy_map(landmarks_, which);
}

std::vector<PointIndex> Diamond::subcopy_points(CopyId which) const
{
  std::vector<PointIndex> out = subcopy_map(which);
  std::sort(out.begin(), out.end());
  return out;
}

PointIndex Diamond::index_of(const PointAddress &address) const
{
  const auto text = canonicalize(address).to_string();
  if (auto idx = space_.index_of(text))
    return *idx;
  throw std::out_of_range("address '" + address.to_string() + "' is not a point of this truncation");
}

// ---------------------------------------------------------------------------

PointAddress embed_address(const PointAddress &address, const Ordinal &small, const Ordinal &big, std::size_t limit_width)
{
  if (big < small)
    throw std::invalid_argument("cannot embed D_" + small.to_string() + " into smaller D_" + big.to_string());
  const auto a = canonicalize(address);
  const auto big_class = classify(big);

  if (big_class.kind == OrdinalKind::limit) {
    for (std::size_t m = 1; m <= limit_width; ++m) {
      const Ordinal beta = fundamental_sequence(big, m);
      if (beta < small)
        continue;
      PointAddress inner = embed_address(a, small, beta, limit_width);
      inner.path.insert(inner.path.begin(), AddressSegment{SummandSegment{beta}});
      return canonicalize(std::move(inner));
    }
    throw std::invalid_argument("no kept summand of D_" + big.to_string() + " is at least " + small.to_string());
  }

  const auto small_class = classify(small);
  if (small_class.kind != OrdinalKind::successor)
    throw std::invalid_argument("embedding of a limit stage into a successor stage is not supported");
  if (a.path.empty())
    return a;
  const auto *copy = std::get_if<CopyId>(&a.path.front());
  if (copy == nullptr)
    throw std::invalid_argument("address '" + a.to_string() + "' does not belong to D_" + small.to_string());

  PointAddress rest{{a.path.begin() + 1, a.path.end()}, a.terminal};
  PointAddress inner = embed_address(rest, *small_class.predecessor, *big_class.predecessor, limit_width);
  inner.path.insert(inner.path.begin(), AddressSegment{*copy});
  return canonicalize(std::move(inner));
}

// ---------------------------------------------------------------------------

namespace {

struct LabelGraphBuilder
{
  std::map<std::string, std::size_t> index;
  LabelledGraph graph;

  std::size_t vertex(const PointAddress &address)
  {
    auto text = canonicalize(address).to_string();
    auto [it, inserted] = index.emplace(text, graph.labels.size());
    if (inserted)
      graph.labels.push_back(std::move(text));
    return it->second;
  }
};

// Edges as (address, address, length) at unit scale (d(t, b) = 2).
using AddressEdge = std::tuple<PointAddress, PointAddress, Rational>;

std::vector<AddressEdge> substitution_edges(const Ordinal &alpha, std::size_t n, std::size_t width)
{
  auto prefix = [](PointAddress a, const AddressSegment &segment) {
    a.path.insert(a.path.begin(), segment);
    return a;
  };

  std::vector<AddressEdge> out;
  if (alpha == Ordinal::natural(1)) {
    const PointAddress top{{}, {TerminalKind::top, 0}};
    const PointAddress bottom{{}, {TerminalKind::bottom, 0}};
    for (std::size_t i = 1; i <= n; ++i) {
      const PointAddress mid{{}, {TerminalKind::mid, i}};
      out.emplace_back(top, mid, Rational(1));
      out.emplace_back(mid, bottom, Rational(1));
    }
    return out;
  }

  const auto cls = classify(alpha);
  if (cls.kind == OrdinalKind::successor) {
    const auto inner = substitution_edges(*cls.predecessor, n, width);
    for (Side side : {Side::plus, Side::minus})
      for (std::size_t j = 1; j <= n; ++j) {
        const AddressSegment seg{CopyId{side, j}};
        for (const auto &[a, b, len] : inner)
          out.emplace_back(prefix(a, seg), prefix(b, seg), Rational(len / 2));
      }
    return out;
  }

  for (std::size_t m = 1; m <= width; ++m) {
    const Ordinal beta = fundamental_sequence(alpha, m);
    const AddressSegment seg{SummandSegment{beta}};
    for (const auto &[a, b, len] : substitution_edges(beta, n, width))
      out.emplace_back(prefix(a, seg), prefix(b, seg), len);
  }
  return out;
}

}  // namespace

LabelledGraph substitution_graph(const DiamondSpec &spec)
{
  spec.validate();
  LabelGraphBuilder builder;
  for (const auto &[a, b, len] : substitution_edges(spec.alpha, spec.branches, spec.limit_width)) {
    const auto u = builder.vertex(a);
    const auto v = builder.vertex(b);
    builder.graph.edges.push_back({std::min(u, v), std::max(u, v), len});
  }
  return std::move(builder.graph);
}

std::string to_dot(const MetricSpace &space)
{
  std::ostringstream out;
  out << "graph diamond {\n";
  for (PointIndex i = 0; i < space.size(); ++i)
    out << "  n" << i << " [label=\"" << space.label(i) << "\"" << (i == space.base() ? ", shape=box" : "") << "];\n";
  for (const auto &e : space.finest_edges())
    out << "  n" << e.a << " -- n" << e.b << " [label=\"" << format_rational(e.length) << "\"];\n";
  out << "}\n";
  return out.str();
}

}  // namespace lipfree
