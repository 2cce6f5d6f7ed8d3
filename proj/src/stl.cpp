#include "stlplan/stl.hpp"

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <limits>

#include <fmt/format.h>
#include <nlohmann/json.hpp>

namespace stlplan {

const char* to_string(NodeKind kind) {
  switch (kind) {
    case NodeKind::kPredicate: return "predicate";
    case NodeKind::kNegation: return "not";
    case NodeKind::kConjunction: return "and";
    case NodeKind::kDisjunction: return "or";
    case NodeKind::kImplication: return "implies";
    case NodeKind::kAlways: return "always";
    case NodeKind::kEventually: return "eventually";
    case NodeKind::kAfter: return "after";
  }
  return "?";
}

namespace {

Formula finish(FormulaNode node) { return std::make_shared<const FormulaNode>(std::move(node)); }

void require_children(const std::vector<Formula>& children, const char* what) {
  if (children.empty()) throw std::invalid_argument(fmt::format("{} needs at least one child", what));
  for (const auto& c : children) {
    if (!c) throw std::invalid_argument(fmt::format("{} has a null child", what));
  }
}

void require_interval(StepInterval iv) {
  if (iv.lo > iv.hi) {
    throw std::invalid_argument(fmt::format("temporal interval [{},{}] has lo > hi", iv.lo, iv.hi));
  }
}

std::string describe(const FormulaNode& n) {
  if (!n.label.empty()) return n.label;
  switch (n.kind) {
    case NodeKind::kAlways:
    case NodeKind::kEventually:
      return fmt::format("{}[{},{}]", to_string(n.kind), n.interval.lo, n.interval.hi);
    case NodeKind::kAfter: return fmt::format("after({})", n.offset);
    default: return to_string(n.kind);
  }
}

}  // namespace

Formula make_predicate(Predicate p, std::string label) {
  FormulaNode n;
  n.kind = NodeKind::kPredicate;
  n.predicate = std::move(p);
  n.label = std::move(label);
  return finish(std::move(n));
}

Formula make_not(Formula child) {
  if (!child || child->kind != NodeKind::kPredicate) {
    throw std::invalid_argument("negation is only allowed directly above a predicate");
  }
  FormulaNode n;
  n.kind = NodeKind::kNegation;
  n.children.push_back(std::move(child));
  return finish(std::move(n));
}

Formula make_and(std::vector<Formula> children, std::string label) {
  require_children(children, "conjunction");
  FormulaNode n;
  n.kind = NodeKind::kConjunction;
  n.children = std::move(children);
  n.label = std::move(label);
  return finish(std::move(n));
}

Formula make_or(std::vector<Formula> children, std::string label) {
  require_children(children, "disjunction");
  FormulaNode n;
  n.kind = NodeKind::kDisjunction;
  n.children = std::move(children);
  n.label = std::move(label);
  return finish(std::move(n));
}

Formula make_implies(Formula lhs, Formula rhs, std::string label) {
  std::vector<Formula> kids{std::move(lhs), std::move(rhs)};
  require_children(kids, "implication");
  FormulaNode n;
  n.kind = NodeKind::kImplication;
  n.children = std::move(kids);
  n.label = std::move(label);
  return finish(std::move(n));
}

Formula make_always(StepInterval interval, Formula child, std::string label) {
  require_interval(interval);
  std::vector<Formula> kids{std::move(child)};
  require_children(kids, "always");
  FormulaNode n;
  n.kind = NodeKind::kAlways;
  n.interval = interval;
  n.children = std::move(kids);
  n.label = std::move(label);
  return finish(std::move(n));
}

Formula make_eventually(StepInterval interval, Formula child, std::string label) {
  require_interval(interval);
  std::vector<Formula> kids{std::move(child)};
  require_children(kids, "eventually");
  FormulaNode n;
  n.kind = NodeKind::kEventually;
  n.interval = interval;
  n.children = std::move(kids);
  n.label = std::move(label);
  return finish(std::move(n));
}

Formula make_after(std::size_t offset, Formula child, std::string label) {
  std::vector<Formula> kids{std::move(child)};
  require_children(kids, "after");
  FormulaNode n;
  n.kind = NodeKind::kAfter;
  n.offset = offset;
  n.children = std::move(kids);
  n.label = std::move(label);
  return finish(std::move(n));
}

Formula with_label(const Formula& f, std::string label) {
  FormulaNode n = *f;
  n.label = std::move(label);
  return finish(std::move(n));
}

// ---------------------------------------------------------------------------

std::size_t horizon(const Formula& f) {
  const FormulaNode& n = *f;
  std::size_t child_max = 0;
  for (const auto& c : n.children) child_max = std::max(child_max, horizon(c));
  switch (n.kind) {
    case NodeKind::kAlways:
    case NodeKind::kEventually: return n.interval.hi + child_max;
    case NodeKind::kAfter: return n.offset + child_max;
    default: return child_max;
  }
}

std::size_t node_count(const Formula& f) {
  std::size_t total = 1;
  for (const auto& c : f->children) total += node_count(c);
  return total;
}

namespace {

nlohmann::json channel_json(const ChannelRef& c) { return c.name; }

nlohmann::json predicate_json(const Predicate& p) {
  nlohmann::json j;
  if (const auto* a = std::get_if<AffinePredicate>(&p)) {
    j["type"] = "affine";
    auto& terms = j["terms"] = nlohmann::json::array();
    for (const auto& t : a->terms) terms.push_back({{"channel", channel_json(t.channel)}, {"gain", t.gain}});
    j["offset"] = a->offset;
  } else if (const auto* d = std::get_if<DistancePredicate>(&p)) {
    j["type"] = "distance";
    auto& lhs = j["a"] = nlohmann::json::array();
    for (const auto& c : d->a) lhs.push_back(channel_json(c));
    auto& rhs = j["b"] = nlohmann::json::array();
    for (const auto& c : d->b) rhs.push_back(channel_json(c));
    j["threshold"] = d->threshold;
  } else {
    const auto& ind = std::get<IndicatorPredicate>(p);
    j["type"] = ind.relation == IndicatorPredicate::Relation::kEqual ? "equal" : "greater";
    j["channel"] = channel_json(ind.channel);
    j["value"] = ind.value;
  }
  return j;
}

nlohmann::json formula_json(const Formula& f) {
  const FormulaNode& n = *f;
  nlohmann::json j;
  j["kind"] = to_string(n.kind);
  if (!n.label.empty()) j["label"] = n.label;
  if (n.kind == NodeKind::kAlways || n.kind == NodeKind::kEventually) {
    j["interval"] = {n.interval.lo, n.interval.hi};
  }
  if (n.kind == NodeKind::kAfter) j["offset"] = n.offset;
  if (n.kind == NodeKind::kPredicate) j["predicate"] = predicate_json(n.predicate);
  if (!n.children.empty()) {
    auto& kids = j["children"] = nlohmann::json::array();
    for (const auto& c : n.children) kids.push_back(formula_json(c));
  }
  return j;
}

void check_channel(const ChannelRef& c, const Signal& s) {
  if (c.index >= s.channel_count() || s.channel_name(c.index) != c.name) {
    throw std::invalid_argument(
        fmt::format("predicate references channel '{}' which is not declared at index {} of the signal",
                    c.name, c.index));
  }
}

void check_channels(const Formula& f, const Signal& s) {
  if (f->kind == NodeKind::kPredicate) {
    std::visit(
        [&](const auto& p) {
          using T = std::decay_t<decltype(p)>;
          if constexpr (std::is_same_v<T, AffinePredicate>) {
            for (const auto& t : p.terms) check_channel(t.channel, s);
          } else if constexpr (std::is_same_v<T, DistancePredicate>) {
            if (p.a.size() != p.b.size()) throw std::invalid_argument("distance predicate arity mismatch");
            for (const auto& c : p.a) check_channel(c, s);
            for (const auto& c : p.b) check_channel(c, s);
          } else {
            check_channel(p.channel, s);
          }
        },
        f->predicate);
  }
  for (const auto& c : f->children) check_channels(c, s);
}

// Descend towards the deepest node whose own window pushes evaluation past
// the last sample.
const FormulaNode* find_overflow(const FormulaNode& n, std::size_t start, std::size_t last) {
  for (const auto& c : n.children) {
    std::size_t child_start = start;
    if (n.kind == NodeKind::kAlways || n.kind == NodeKind::kEventually) child_start += n.interval.hi;
    if (n.kind == NodeKind::kAfter) child_start += n.offset;
    if (child_start > last) return &n;
    if (child_start + horizon(c) > last) return find_overflow(*c, child_start, last);
  }
  return &n;
}

}  // namespace

std::string to_json_text(const Formula& f) { return formula_json(f).dump(); }

HorizonError::HorizonError(std::string node, std::size_t required_length, std::size_t actual_length)
    : std::runtime_error(fmt::format("formula node '{}' needs a signal of {} samples but only {} are available",
                                     node, required_length, actual_length)),
      node_(std::move(node)),
      required_(required_length),
      actual_(actual_length) {}

void check_evaluable(const Formula& f, const Signal& signal, std::size_t k) {
  check_channels(f, signal);
  const std::size_t last = signal.length() - 1;
  const std::size_t h = horizon(f);
  if (k + h > last) {
    const FormulaNode* bad = find_overflow(*f, k, last);
    throw HorizonError(describe(*bad), k + h + 1, signal.length());
  }
}

// ---------------------------------------------------------------------------

double softmin(std::span<const double> values, double beta) {
  const double lo = *std::min_element(values.begin(), values.end());
  double sum = 0.0;
  for (double v : values) sum += std::exp(-beta * (v - lo));
  return lo - std::log(sum) / beta;
}

double softmax(std::span<const double> values, double beta) {
  const double hi = *std::max_element(values.begin(), values.end());
  double sum = 0.0;
  for (double v : values) sum += std::exp(beta * (v - hi));
  return hi + std::log(sum) / beta;
}

double predicate_margin(const Predicate& p, const Signal& s, std::size_t k) {
  if (const auto* a = std::get_if<AffinePredicate>(&p)) {
    double m = a->offset;
    for (const auto& t : a->terms) m += t.gain * s.at(t.channel.index, k);
    return m;
  }
  if (const auto* d = std::get_if<DistancePredicate>(&p)) {
    double sq = 0.0;
    for (std::size_t i = 0; i < d->a.size(); ++i) {
      const double diff = s.at(d->a[i].index, k) - s.at(d->b[i].index, k);
      sq += diff * diff;
    }
    return std::sqrt(sq) - d->threshold;
  }
  const auto& ind = std::get<IndicatorPredicate>(p);
  const double v = s.at(ind.channel.index, k);
  const bool holds = ind.relation == IndicatorPredicate::Relation::kEqual ? v == ind.value : v > ind.value;
  return holds ? kIndicatorMargin : -kIndicatorMargin;
}

namespace {

double exact_rec(const FormulaNode& n, const Signal& s, std::size_t k) {
  switch (n.kind) {
    case NodeKind::kPredicate: return predicate_margin(n.predicate, s, k);
    case NodeKind::kNegation: return -exact_rec(*n.children[0], s, k);
    case NodeKind::kConjunction: {
      double r = std::numeric_limits<double>::infinity();
      for (const auto& c : n.children) r = std::min(r, exact_rec(*c, s, k));
      return r;
    }
    case NodeKind::kDisjunction: {
      double r = -std::numeric_limits<double>::infinity();
      for (const auto& c : n.children) r = std::max(r, exact_rec(*c, s, k));
      return r;
    }
    case NodeKind::kImplication:
      return std::max(-exact_rec(*n.children[0], s, k), exact_rec(*n.children[1], s, k));
    case NodeKind::kAlways: {
      double r = std::numeric_limits<double>::infinity();
      for (std::size_t j = n.interval.lo; j <= n.interval.hi; ++j) r = std::min(r, exact_rec(*n.children[0], s, k + j));
      return r;
    }
    case NodeKind::kEventually: {
      double r = -std::numeric_limits<double>::infinity();
      for (std::size_t j = n.interval.lo; j <= n.interval.hi; ++j) r = std::max(r, exact_rec(*n.children[0], s, k + j));
      return r;
    }
    case NodeKind::kAfter: return exact_rec(*n.children[0], s, k + n.offset);
  }
  return 0.0;
}

double smooth_rec(const FormulaNode& n, const Signal& s, std::size_t k, double beta) {
  switch (n.kind) {
    case NodeKind::kPredicate: return predicate_margin(n.predicate, s, k);
    case NodeKind::kNegation: return -smooth_rec(*n.children[0], s, k, beta);
    case NodeKind::kConjunction:
    case NodeKind::kDisjunction: {
      std::vector<double> v;
      v.reserve(n.children.size());
      for (const auto& c : n.children) v.push_back(smooth_rec(*c, s, k, beta));
      return n.kind == NodeKind::kConjunction ? softmin(v, beta) : softmax(v, beta);
    }
    case NodeKind::kImplication: {
      const double v[2] = {-smooth_rec(*n.children[0], s, k, beta), smooth_rec(*n.children[1], s, k, beta)};
      return softmax(v, beta);
    }
    case NodeKind::kAlways:
    case NodeKind::kEventually: {
      std::vector<double> v;
      v.reserve(n.interval.hi - n.interval.lo + 1);
      for (std::size_t j = n.interval.lo; j <= n.interval.hi; ++j) v.push_back(smooth_rec(*n.children[0], s, k + j, beta));
      return n.kind == NodeKind::kAlways ? softmin(v, beta) : softmax(v, beta);
    }
    case NodeKind::kAfter: return smooth_rec(*n.children[0], s, k + n.offset, beta);
  }
  return 0.0;
}

// Flat evaluation tape for reverse-mode accumulation. Entries are appended in
// post-order, so a reverse sweep visits every parent before its children.
class Tape {
 public:
  enum class Op : std::uint8_t { kLeaf, kNegate, kSoftMin, kSoftMax, kImplies };

  Tape(const Signal& s, double beta) : signal_(s), beta_(beta) {}

  std::uint32_t record(const FormulaNode& n, std::size_t k) {
    switch (n.kind) {
      case NodeKind::kPredicate: return push(Op::kLeaf, predicate_margin(n.predicate, signal_, k), {}, &n.predicate, k);
      case NodeKind::kNegation: {
        const std::uint32_t c = record(*n.children[0], k);
        return push(Op::kNegate, -value_[c], {c}, nullptr, k);
      }
      case NodeKind::kConjunction:
      case NodeKind::kDisjunction: {
        std::vector<std::uint32_t> kids;
        kids.reserve(n.children.size());
        for (const auto& c : n.children) kids.push_back(record(*c, k));
        return aggregate(n.kind == NodeKind::kConjunction ? Op::kSoftMin : Op::kSoftMax, kids, k);
      }
      case NodeKind::kImplication: {
        const std::uint32_t lhs = record(*n.children[0], k);
        const std::uint32_t rhs = record(*n.children[1], k);
        const double v[2] = {-value_[lhs], value_[rhs]};
        return push(Op::kImplies, softmax(v, beta_), {lhs, rhs}, nullptr, k);
      }
      case NodeKind::kAlways:
      case NodeKind::kEventually: {
        std::vector<std::uint32_t> kids;
        kids.reserve(n.interval.hi - n.interval.lo + 1);
        for (std::size_t j = n.interval.lo; j <= n.interval.hi; ++j) kids.push_back(record(*n.children[0], k + j));
        return aggregate(n.kind == NodeKind::kAlways ? Op::kSoftMin : Op::kSoftMax, kids, k);
      }
      case NodeKind::kAfter: return record(*n.children[0], k + n.offset);
    }
    return 0;
  }

  double value(std::uint32_t i) const { return value_[i]; }

  void backward(std::uint32_t root, Signal& grad) const {
    std::vector<double> adj(value_.size(), 0.0);
    adj[root] = 1.0;
    for (std::size_t idx = value_.size(); idx-- > 0;) {
      const double a = adj[idx];
      if (a == 0.0) continue;
      const std::uint32_t* kids = child_index_.data() + child_begin_[idx];
      const std::uint32_t nkids = child_count_[idx];
      switch (op_[idx]) {
        case Op::kLeaf: leaf_gradient(*pred_[idx], step_[idx], a, grad); break;
        case Op::kNegate: adj[kids[0]] -= a; break;
        case Op::kSoftMin:
          for (std::uint32_t i = 0; i < nkids; ++i) adj[kids[i]] += a * std::exp(-beta_ * (value_[kids[i]] - value_[idx]));
          break;
        case Op::kSoftMax:
          for (std::uint32_t i = 0; i < nkids; ++i) adj[kids[i]] += a * std::exp(beta_ * (value_[kids[i]] - value_[idx]));
          break;
        case Op::kImplies:
          adj[kids[0]] -= a * std::exp(beta_ * (-value_[kids[0]] - value_[idx]));
          adj[kids[1]] += a * std::exp(beta_ * (value_[kids[1]] - value_[idx]));
          break;
      }
    }
  }

 private:
  std::uint32_t aggregate(Op op, const std::vector<std::uint32_t>& kids, std::size_t k) {
    std::vector<double> v;
    v.reserve(kids.size());
    for (auto c : kids) v.push_back(value_[c]);
    const double r = op == Op::kSoftMin ? softmin(v, beta_) : softmax(v, beta_);
    return push(op, r, kids, nullptr, k);
  }

  std::uint32_t push(Op op, double value, const std::vector<std::uint32_t>& kids, const Predicate* pred,
                     std::size_t k) {
    op_.push_back(op);
    value_.push_back(value);
    child_begin_.push_back(static_cast<std::uint32_t>(child_index_.size()));
    child_count_.push_back(static_cast<std::uint32_t>(kids.size()));
    child_index_.insert(child_index_.end(), kids.begin(), kids.end());
    pred_.push_back(pred);
    step_.push_back(k);
    return static_cast<std::uint32_t>(value_.size() - 1);
  }

  void leaf_gradient(const Predicate& p, std::size_t k, double a, Signal& grad) const {
    if (const auto* aff = std::get_if<AffinePredicate>(&p)) {
      for (const auto& t : aff->terms) grad.at(t.channel.index, k) += a * t.gain;
    } else if (const auto* d = std::get_if<DistancePredicate>(&p)) {
      double sq = 0.0;
      for (std::size_t i = 0; i < d->a.size(); ++i) {
        const double diff = signal_.at(d->a[i].index, k) - signal_.at(d->b[i].index, k);
        sq += diff * diff;
      }
      const double dist = std::sqrt(sq);
      if (dist == 0.0) return;  // subgradient 0 at coincidence
      for (std::size_t i = 0; i < d->a.size(); ++i) {
        const double g = a * (signal_.at(d->a[i].index, k) - signal_.at(d->b[i].index, k)) / dist;
        grad.at(d->a[i].index, k) += g;
        grad.at(d->b[i].index, k) -= g;
      }
    }
  }

  const Signal& signal_;
  double beta_;
  std::vector<Op> op_;
  std::vector<double> value_;
  std::vector<std::uint32_t> child_begin_;
  std::vector<std::uint32_t> child_count_;
  std::vector<std::uint32_t> child_index_;
  std::vector<const Predicate*> pred_;
  std::vector<std::size_t> step_;
};

void require_beta(double beta) {
  if (!(beta > 0.0) || !std::isfinite(beta)) throw std::invalid_argument("smoothing temperature beta must be positive");
}

}  // namespace

double eval_exact(const Formula& f, const Signal& signal, std::size_t k) {
  check_evaluable(f, signal, k);
  return exact_rec(*f, signal, k);
}

double eval_smooth(const Formula& f, const Signal& signal, std::size_t k, double beta) {
  require_beta(beta);
  check_evaluable(f, signal, k);
  return smooth_rec(*f, signal, k, beta);
}

SmoothGradient grad_smooth(const Formula& f, const Signal& signal, std::size_t k, double beta) {
  require_beta(beta);
  check_evaluable(f, signal, k);
  Tape tape(signal, beta);
  const std::uint32_t root = tape.record(*f, k);
  SmoothGradient out{tape.value(root), signal.zeros_like()};
  tape.backward(root, out.gradient);
  return out;
}

// ---------------------------------------------------------------------------

namespace {

struct LabelledPath {
  std::size_t id;
  std::string label;
  std::vector<std::size_t> path;
};

void collect_labels(const FormulaNode& n, std::size_t& next_id, std::vector<std::size_t>& path,
                    std::vector<LabelledPath>& out) {
  const std::size_t id = next_id++;
  if (!n.label.empty()) out.push_back({id, n.label, path});
  for (std::size_t i = 0; i < n.children.size(); ++i) {
    path.push_back(i);
    collect_labels(*n.children[i], next_id, path, out);
    path.pop_back();
  }
}

double projected(const FormulaNode& n, const Signal& s, std::size_t k, std::span<const std::size_t> path) {
  if (path.empty()) return exact_rec(n, s, k);
  const std::size_t ci = path.front();
  const auto rest = path.subspan(1);
  const FormulaNode& c = *n.children[ci];
  switch (n.kind) {
    case NodeKind::kNegation: return -projected(c, s, k, rest);
    case NodeKind::kImplication: return ci == 0 ? -projected(c, s, k, rest) : projected(c, s, k, rest);
    case NodeKind::kAlways: {
      double r = std::numeric_limits<double>::infinity();
      for (std::size_t j = n.interval.lo; j <= n.interval.hi; ++j) r = std::min(r, projected(c, s, k + j, rest));
      return r;
    }
    case NodeKind::kEventually: {
      double r = -std::numeric_limits<double>::infinity();
      for (std::size_t j = n.interval.lo; j <= n.interval.hi; ++j) r = std::max(r, projected(c, s, k + j, rest));
      return r;
    }
    case NodeKind::kAfter: return projected(c, s, k + n.offset, rest);
    default: return projected(c, s, k, rest);
  }
}

}  // namespace

std::vector<ClauseValue> clause_breakdown(const Formula& f, const Signal& signal) {
  check_evaluable(f, signal, 0);
  std::vector<LabelledPath> labelled;
  std::vector<std::size_t> path;
  std::size_t next_id = 0;
  collect_labels(*f, next_id, path, labelled);
  std::vector<ClauseValue> out;
  out.reserve(labelled.size());
  for (const auto& lp : labelled) out.push_back({lp.id, lp.label, projected(*f, signal, 0, lp.path)});
  return out;
}

}  // namespace stlplan
