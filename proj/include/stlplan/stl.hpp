#pragma once

#include <cstddef>
#include <memory>
#include <span>
#include <stdexcept>
#include <string>
#include <variant>
#include <vector>

#include "stlplan/signal.hpp"

namespace stlplan {

/// Closed step range [lo, hi] on the sampling grid.
struct StepInterval {
  std::size_t lo = 0;
  std::size_t hi = 0;
};

/// A channel reference carries both the name (checked against the signal) and
/// the resolved index (used on the hot path).
struct ChannelRef {
  std::string name;
  std::size_t index = 0;
};

struct AffineTerm {
  ChannelRef channel;
  double gain = 0.0;
};

/// sum_i gain_i * s_i(t_k) + offset >= 0; margin is the left-hand side.
struct AffinePredicate {
  std::vector<AffineTerm> terms;
  double offset = 0.0;
};

/// ||a(t_k) - b(t_k)||_2 >= threshold; margin is the distance minus threshold.
struct DistancePredicate {
  std::vector<ChannelRef> a;
  std::vector<ChannelRef> b;
  double threshold = 0.0;
};

/// Indicator on an integer-valued channel. The margin is +1 when the relation
/// holds and -1 otherwise; it carries no gradient.
struct IndicatorPredicate {
  enum class Relation { kEqual, kGreater };
  ChannelRef channel;
  Relation relation = Relation::kEqual;
  double value = 0.0;
};

using Predicate = std::variant<AffinePredicate, DistancePredicate, IndicatorPredicate>;

constexpr double kIndicatorMargin = 1.0;

enum class NodeKind {
  kPredicate,
  kNegation,
  kConjunction,
  kDisjunction,
  kImplication,
  kAlways,
  kEventually,
  kAfter,
};

const char* to_string(NodeKind kind);

struct FormulaNode;
using Formula = std::shared_ptr<const FormulaNode>;

/// Immutable STL expression node. Build through the factory functions below,
/// which enforce the structural invariants.
struct FormulaNode {
  NodeKind kind = NodeKind::kPredicate;
  StepInterval interval;       // kAlways / kEventually
  std::size_t offset = 0;      // kAfter
  std::vector<Formula> children;
  Predicate predicate;         // kPredicate only
  std::string label;           // optional, used for clause breakdowns
};

// Factories ----------------------------------------------------------------

Formula make_predicate(Predicate p, std::string label = {});
/// Negation is only accepted directly above a predicate.
Formula make_not(Formula child);
Formula make_and(std::vector<Formula> children, std::string label = {});
Formula make_or(std::vector<Formula> children, std::string label = {});
Formula make_implies(Formula lhs, Formula rhs, std::string label = {});
Formula make_always(StepInterval interval, Formula child, std::string label = {});
Formula make_eventually(StepInterval interval, Formula child, std::string label = {});
Formula make_after(std::size_t offset, Formula child, std::string label = {});
Formula with_label(const Formula& f, std::string label);

// Structural queries ---------------------------------------------------------

/// Minimal extra samples past k needed to evaluate at k.
std::size_t horizon(const Formula& f);
std::size_t node_count(const Formula& f);

/// Canonical JSON text (kind, interval/offset, predicate, label, children).
std::string to_json_text(const Formula& f);

/// Throws HorizonError / std::invalid_argument when the formula cannot be
/// evaluated on `signal` at step k.
void check_evaluable(const Formula& f, const Signal& signal, std::size_t k);

class HorizonError : public std::runtime_error {
 public:
  HorizonError(std::string node, std::size_t required_length, std::size_t actual_length);
  const std::string& node() const { return node_; }
  std::size_t required_length() const { return required_; }
  std::size_t actual_length() const { return actual_; }

 private:
  std::string node_;
  std::size_t required_;
  std::size_t actual_;
};

// Semantics ------------------------------------------------------------------

/// Shifted log-sum-exp soft minimum, -(1/beta) ln sum exp(-beta v_i).
double softmin(std::span<const double> values, double beta);
/// Shifted log-sum-exp soft maximum, (1/beta) ln sum exp(beta v_i).
double softmax(std::span<const double> values, double beta);

double predicate_margin(const Predicate& p, const Signal& s, std::size_t k);

double eval_exact(const Formula& f, const Signal& signal, std::size_t k = 0);
double eval_smooth(const Formula& f, const Signal& signal, std::size_t k, double beta);

struct SmoothGradient {
  double value = 0.0;
  Signal gradient;  // d(value)/d(sample), same layout as the input signal
};

/// Reverse-mode gradient of eval_smooth with respect to every signal sample.
SmoothGradient grad_smooth(const Formula& f, const Signal& signal, std::size_t k, double beta);

struct ClauseValue {
  std::size_t node_id = 0;  // preorder index within the root formula
  std::string label;
  double value = 0.0;
};

/// Exact robustness of every labelled node, each evaluated in the context of
/// the temporal operators on its path from the root (Boolean siblings dropped).
std::vector<ClauseValue> clause_breakdown(const Formula& f, const Signal& signal);

}  // namespace stlplan
