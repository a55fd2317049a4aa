// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <cmath>
#include <cstdint>
#include <functional>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "gatn/errors.hpp"
#include "gatn/rng.hpp"

namespace gatn::diff {

// One named block of trainable values with matching gradient slots.
// values and grads always have identical length; shapes records the
// (rows, cols) of each constituent layer for serialization.
struct ParamGroup {
  std::string name;
  std::vector<double> values;
  std::vector<double> grads;
  std::vector<std::pair<int, int>> shapes;

  std::size_t size() const { return values.size(); }
  void zero_grads() { std::fill(grads.begin(), grads.end(), 0.0); }
  bool all_finite() const;
};

enum class Act : std::uint8_t { Identity, Tanh, Relu };

// Handle into a Tape. The epoch detects refs that outlive a reset().
struct Ref {
  std::int32_t index = -1;
  std::uint32_t epoch = 0;
  bool valid() const { return index >= 0; }
};

// Scalar reverse-mode tape scoped to one forward pass. Nodes store the
// local partials at creation time, so backward() is a single reverse sweep.
// Leaves created via param() scatter their adjoints into the bound
// ParamGroup's grads; repeated backward() calls accumulate additively.
class Tape {
 public:
  Ref constant(double v) { return push(v, -1, -1, 0.0, 0.0); }

  Ref param(ParamGroup& group, int index) {
    Ref r = push(group.values[static_cast<std::size_t>(index)], -1, -1, 0.0, 0.0);
    leaves_.push_back({r.index, &group, index});
    return r;
  }

  Ref add(Ref a, Ref b) { return push(val(a) + val(b), a.index, b.index, 1.0, 1.0); }
  Ref sub(Ref a, Ref b) { return push(val(a) - val(b), a.index, b.index, 1.0, -1.0); }
  Ref mul(Ref a, Ref b) {
    const double va = val(a), vb = val(b);
    return push(va * vb, a.index, b.index, vb, va);
  }
  Ref div(Ref a, Ref b) {
    const double va = val(a), vb = val(b);
    return push(va / vb, a.index, b.index, 1.0 / vb, -va / (vb * vb));
  }
  Ref scale(Ref a, double c) { return push(val(a) * c, a.index, -1, c, 0.0); }
  Ref add_const(Ref a, double c) { return push(val(a) + c, a.index, -1, 1.0, 0.0); }
  Ref neg(Ref a) { return scale(a, -1.0); }
  Ref square(Ref a) {
    const double va = val(a);
    return push(va * va, a.index, -1, 2.0 * va, 0.0);
  }
  Ref tanh_(Ref a) {
    const double t = std::tanh(val(a));
    return push(t, a.index, -1, 1.0 - t * t, 0.0);
  }
  Ref relu_(Ref a) {
    const double va = val(a);
    return push(va > 0.0 ? va : 0.0, a.index, -1, va > 0.0 ? 1.0 : 0.0, 0.0);
  }
  Ref sigmoid_(Ref a) {
    const double s = 1.0 / (1.0 + std::exp(-val(a)));
    return push(s, a.index, -1, s * (1.0 - s), 0.0);
  }
  Ref exp_(Ref a) {
    const double e = std::exp(val(a));
    return push(e, a.index, -1, e, 0.0);
  }
  Ref log_(Ref a) {
    const double va = val(a);
    return push(std::log(va), a.index, -1, 1.0 / va, 0.0);
  }
  Ref clamp_(Ref a, double lo, double hi) {
    const double va = val(a);
    const double c = va < lo ? lo : (va > hi ? hi : va);
    return push(c, a.index, -1, (va > lo && va < hi) ? 1.0 : 0.0, 0.0);
  }
  Ref sum(std::span<const Ref> xs) {
    if (xs.empty()) return constant(0.0);
    Ref acc = xs[0];
    for (std::size_t i = 1; i < xs.size(); ++i) acc = add(acc, xs[i]);
    return acc;
  }

  double val(Ref r) const {
    check(r);
    return nodes_[static_cast<std::size_t>(r.index)].value;
  }

  // Adjoint of a node from the most recent backward sweep.
  double grad_of(Ref r) const;

  void backward(Ref root);
  void backward(std::span<const Ref> outputs, std::span<const double> output_grads);

  // Invalidates every outstanding Ref; using one afterwards is a UsageError.
  void reset();

  std::size_t size() const { return nodes_.size(); }

 private:
  struct Node {
    double value, da, db;
    std::int32_t a, b;
  };
  struct Leaf {
    std::int32_t node;
    ParamGroup* group;
    int index;
  };

  std::vector<Node> nodes_;
  std::vector<Leaf> leaves_;
  std::vector<double> adjoint_;
  std::uint32_t epoch_ = 0;

  Ref push(double v, std::int32_t a, std::int32_t b, double da, double db) {
    nodes_.push_back({v, da, db, a, b});
    return {static_cast<std::int32_t>(nodes_.size() - 1), epoch_};
  }
  void check(Ref r) const {
    if (!r.valid() || r.epoch != epoch_ ||
        r.index >= static_cast<std::int32_t>(nodes_.size()))
      throw UsageError("tape ref is stale or belongs to a reset tape");
  }
};

struct MlpSpec {
  std::vector<int> widths;       // at least input and output
  std::vector<Act> activations;  // one per layer transition
  std::uint64_t init_seed = 0;

  int input_dim() const { return widths.front(); }
  int output_dim() const { return widths.back(); }
  int layer_count() const { return static_cast<int>(widths.size()) - 1; }
  int param_count() const;
  void validate() const;

  // Hidden layers share one activation; the output layer gets its own
  // (identity for Q-value and logit heads).
  static MlpSpec make(std::vector<int> widths, Act hidden, Act output,
                      std::uint64_t init_seed);
};

// Dense network bound to a contiguous slice of a ParamGroup.
// Layout per layer: row-major weights (out x in) then biases (out).
class Mlp {
 public:
  Mlp() = default;
  explicit Mlp(MlpSpec spec);

  const MlpSpec& spec() const { return spec_; }
  int param_count() const { return spec_.param_count(); }
  int offset() const { return offset_; }

  // Appends freshly initialized parameters to the group and remembers the
  // offset. Weights are uniform in +-sqrt(6/(fan_in+fan_out)), biases zero.
  void append_params(ParamGroup& group);

  std::vector<double> eval(const ParamGroup& group, std::span<const double> x) const;
  std::vector<Ref> forward(Tape& tape, ParamGroup& group, std::span<const double> x) const;
  std::vector<Ref> forward(Tape& tape, ParamGroup& group, std::span<const Ref> x) const;

 private:
  MlpSpec spec_;
  int offset_ = 0;
  bool bound_ = false;

  void check_bound() const;
  void check_input(std::size_t got) const;
};

// values <- values - lr * grads, then grads reset to zero.
// A non-finite gradient aborts the step before touching values.
void sgd_step(ParamGroup& group, double lr);

struct GradCheckReport {
  double max_rel_err = 0.0;
  std::string worst_group;
  int worst_index = -1;
  int probes = 0;
  bool deterministic = true;  // false means the check is invalid
};

// Central-difference verification of reverse-mode gradients.
// loss(true) must rebuild its tape, run backward into the groups' grads and
// return the loss; loss(false) must return the loss without touching grads,
// and must be deterministic (it is evaluated twice to verify this).
// Relative error per probed coordinate:
//   |analytic - numeric| / max(1e-8, |analytic| + |numeric|).
GradCheckReport grad_check(const std::function<double(bool)>& loss,
                           std::span<ParamGroup* const> groups, int probes,
                           double step_h, Rng& rng);

}  // namespace gatn::diff
