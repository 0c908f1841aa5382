#pragma once

#include <functional>
#include <string>
#include <string_view>

namespace bitbandit {

// Inverse link μ of a generalized linear reward model, with its derivative
// and the antiderivative used as the estimator's convex potential (m' = μ).
class LinkFunction {
 public:
  enum class Kind { kIdentity, kLogistic, kScaledLogistic, kCustom };

  static LinkFunction identity();
  static LinkFunction logistic();
  // μ(z) = σ(c·z).
  static LinkFunction scaled_logistic(double c);
  // Arbitrary increasing link; constants fall back to a grid search.
  static LinkFunction custom(std::string name, std::function<double(double)> mu,
                             std::function<double(double)> mu_dot,
                             std::function<double(double)> potential);

  // "identity" | "logistic" | "scaled-logistic:<c>"
  static LinkFunction parse(std::string_view name);

  Kind kind() const { return kind_; }
  const std::string& name() const { return name_; }
  double scale() const { return scale_; }

  double mu(double z) const;
  double mu_dot(double z) const;
  double potential(double z) const;

 private:
  LinkFunction(Kind kind, std::string name, double scale)
      : kind_(kind), name_(std::move(name)), scale_(scale) {}

  Kind kind_;
  std::string name_;
  double scale_ = 1.0;
  std::function<double(double)> mu_fn_, mu_dot_fn_, potential_fn_;
};

struct LinkConstants {
  double k1;  // min(1, inf μ̇) over |z| ≤ L·M
  double k2;  // max(1, sup μ̇) over |z| ≤ L·M
};

// Closed form for the built-in links, otherwise a 10⁴-point grid over
// [-L·M, L·M]. Throws ConfigError when k1 ≤ 0.
LinkConstants link_constants(const LinkFunction& link, double L, double M);

// Grid search regardless of kind; exposed for cross-checking the closed forms.
LinkConstants link_constants_grid(const LinkFunction& link, double L, double M,
                                  int points = 10000);

}  // namespace bitbandit
