#ifndef BIVBETA_FAMILY_HPP
#define BIVBETA_FAMILY_HPP

#include <array>
#include <cmath>
#include <cstdint>
#include <optional>
#include <span>
#include <stdexcept>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "bivbeta/special_functions.hpp"

namespace bivbeta {

/// Shapes alpha_1..alpha_n of independent unit-scale gamma variates, n in {3, 5, 8}.
/// Zero entries are allowed (a zero-shape gamma is the constant 0).
class AlphaVector {
 public:
  AlphaVector() = default;

  AlphaVector(std::initializer_list<double> values) : AlphaVector(std::vector<double>(values)) {}

  explicit AlphaVector(std::vector<double> values) : values_(std::move(values)) {
    const auto n = values_.size();
    if (n != 3 && n != 5 && n != 8) {
      throw std::invalid_argument("AlphaVector: length must be 3, 5 or 8 (got " + std::to_string(n) + ")");
    }
    for (double v : values_) {
      if (!std::isfinite(v) || v < 0.0) {
        throw std::invalid_argument("AlphaVector: entries must be finite and >= 0");
      }
    }
  }

  [[nodiscard]] std::size_t size() const noexcept { return values_.size(); }
  [[nodiscard]] double operator[](std::size_t i) const { return values_.at(i); }
  [[nodiscard]] std::span<const double> values() const noexcept { return values_; }

  friend bool operator==(const AlphaVector&, const AlphaVector&) = default;

 private:
  std::vector<double> values_;
};

enum class FamilyKind {
  OLplus,    ///< (X, Y)
  OLminus,   ///< (X, 1 - Y)
  OLminusX,  ///< (1 - X, Y)
  OLstar,    ///< (1 - X, 1 - Y)
  AN5,
  AN8,
  IndependentBetas,
};

enum class Coordinate { x, y, both };

/// One coordinate as a gamma ratio: sum(numerator) / (sum(numerator) + sum(denominator)).
/// Masks index into the family's shape vector.
struct RatioCoordinate {
  std::uint32_t numerator = 0;
  std::uint32_t denominator = 0;

  [[nodiscard]] RatioCoordinate complemented() const noexcept { return {denominator, numerator}; }
};

/// Flattened gamma-ratio construction of a family.
struct GammaRatioLayout {
  std::vector<double> shapes;
  RatioCoordinate x;
  RatioCoordinate y;
};

namespace detail {

constexpr std::uint32_t mask(std::initializer_list<int> one_based) {
  std::uint32_t m = 0;
  for (int i : one_based) m |= 1u << (i - 1);
  return m;
}

inline double mask_sum(std::span<const double> shapes, std::uint32_t m) {
  double s = 0.0;
  for (std::size_t i = 0; i < shapes.size(); ++i) {
    if (m & (1u << i)) s += shapes[i];
  }
  return s;
}

}  // namespace detail

class FamilySpec {
 public:
  static FamilySpec ol_plus(AlphaVector a) { return FamilySpec(FamilyKind::OLplus, std::move(a)); }
  static FamilySpec ol_minus(AlphaVector a) { return FamilySpec(FamilyKind::OLminus, std::move(a)); }
  static FamilySpec ol_minus_x(AlphaVector a) { return FamilySpec(FamilyKind::OLminusX, std::move(a)); }
  static FamilySpec ol_star(AlphaVector a) { return FamilySpec(FamilyKind::OLstar, std::move(a)); }
  static FamilySpec an5(AlphaVector a) { return FamilySpec(FamilyKind::AN5, std::move(a)); }
  static FamilySpec an8(AlphaVector a) { return FamilySpec(FamilyKind::AN8, std::move(a)); }

  static FamilySpec independent(BetaParams first, BetaParams second) {
    first.validate("FamilySpec::independent");
    second.validate("FamilySpec::independent");
    FamilySpec spec;
    spec.kind_ = FamilyKind::IndependentBetas;
    spec.betas_ = {first, second};
    return spec;
  }

  /// Builds from a kind and shape vector; throws std::invalid_argument when they disagree.
  FamilySpec(FamilyKind kind, AlphaVector alphas) : kind_(kind), alphas_(std::move(alphas)) {
    std::size_t expected = 0;
    switch (kind) {
      case FamilyKind::OLplus:
      case FamilyKind::OLminus:
      case FamilyKind::OLminusX:
      case FamilyKind::OLstar: expected = 3; break;
      case FamilyKind::AN5: expected = 5; break;
      case FamilyKind::AN8: expected = 8; break;
      case FamilyKind::IndependentBetas:
        throw std::invalid_argument("FamilySpec: use FamilySpec::independent for independent betas");
    }
    if (alphas_.size() != expected) {
      throw std::invalid_argument("FamilySpec: " + std::string(name()) + " needs " + std::to_string(expected) +
                                  " shape parameters (got " + std::to_string(alphas_.size()) + ")");
    }
    const auto layout = this->layout();
    for (const auto& c : {layout.x, layout.y}) {
      if (!(detail::mask_sum(layout.shapes, c.numerator) > 0.0) ||
          !(detail::mask_sum(layout.shapes, c.denominator) > 0.0)) {
        throw std::invalid_argument("FamilySpec: " + std::string(name()) +
                                    " shapes imply a degenerate marginal (a beta parameter equals 0)");
      }
    }
  }

  [[nodiscard]] FamilyKind kind() const noexcept { return kind_; }
  [[nodiscard]] const AlphaVector& alphas() const noexcept { return alphas_; }
  /// Marginal laws of an IndependentBetas spec.
  [[nodiscard]] const std::array<BetaParams, 2>& betas() const noexcept { return betas_; }

  [[nodiscard]] bool is_ol() const noexcept {
    return kind_ == FamilyKind::OLplus || kind_ == FamilyKind::OLminus || kind_ == FamilyKind::OLminusX ||
           kind_ == FamilyKind::OLstar;
  }

  /// True when a closed-form joint density is available.
  [[nodiscard]] bool has_closed_form() const noexcept { return is_ol() || kind_ == FamilyKind::IndependentBetas; }

  [[nodiscard]] std::string_view name() const noexcept { return kind_name(kind_); }

  static constexpr std::string_view kind_name(FamilyKind k) noexcept {
    switch (k) {
      case FamilyKind::OLplus: return "ol-plus";
      case FamilyKind::OLminus: return "ol-minus";
      case FamilyKind::OLminusX: return "ol-minus-x";
      case FamilyKind::OLstar: return "ol-star";
      case FamilyKind::AN5: return "an5";
      case FamilyKind::AN8: return "an8";
      case FamilyKind::IndependentBetas: return "indep";
    }
    return "?";
  }

  static std::optional<FamilyKind> parse_kind(std::string_view s) noexcept {
    for (auto k : {FamilyKind::OLplus, FamilyKind::OLminus, FamilyKind::OLminusX, FamilyKind::OLstar,
                   FamilyKind::AN5, FamilyKind::AN8, FamilyKind::IndependentBetas}) {
      if (kind_name(k) == s) return k;
    }
    return std::nullopt;
  }

  /// Parameters as a flat list: the alphas, or (a1, b1, a2, b2) for independent betas.
  [[nodiscard]] std::vector<double> parameters() const {
    if (kind_ == FamilyKind::IndependentBetas) return {betas_[0].a, betas_[0].b, betas_[1].a, betas_[1].b};
    return {alphas_.values().begin(), alphas_.values().end()};
  }

  [[nodiscard]] GammaRatioLayout layout() const {
    using detail::mask;
    GammaRatioLayout l;
    l.shapes = parameters();
    switch (kind_) {
      case FamilyKind::OLplus:
      case FamilyKind::OLminus:
      case FamilyKind::OLminusX:
      case FamilyKind::OLstar: {
        // X = U1 / (U1 + U3), Y = U2 / (U2 + U3); complements swap the roles.
        l.x = {mask({1}), mask({3})};
        l.y = {mask({2}), mask({3})};
        if (kind_ == FamilyKind::OLminusX || kind_ == FamilyKind::OLstar) l.x = l.x.complemented();
        if (kind_ == FamilyKind::OLminus || kind_ == FamilyKind::OLstar) l.y = l.y.complemented();
        break;
      }
      case FamilyKind::AN5:
        l.x = {mask({1, 3}), mask({4, 5})};
        l.y = {mask({2, 4}), mask({3, 5})};
        break;
      case FamilyKind::AN8:
        // X = V / (1 + V), V = (U1 + U5 + U7) / (U3 + U6 + U8)
        // Y = W / (1 + W), W = (U2 + U5 + U8) / (U4 + U6 + U7)
        l.x = {mask({1, 5, 7}), mask({3, 6, 8})};
        l.y = {mask({2, 5, 8}), mask({4, 6, 7})};
        break;
      case FamilyKind::IndependentBetas:
        l.x = {mask({1}), mask({2})};
        l.y = {mask({3}), mask({4})};
        break;
    }
    return l;
  }

  friend bool operator==(const FamilySpec&, const FamilySpec&) = default;

 private:
  FamilySpec() = default;

  FamilyKind kind_ = FamilyKind::IndependentBetas;
  AlphaVector alphas_;
  std::array<BetaParams, 2> betas_{};
};

/// Exact beta marginals (first coordinate, second coordinate).
inline std::pair<BetaParams, BetaParams> marginal_params(const FamilySpec& family) {
  const auto l = family.layout();
  return {BetaParams{detail::mask_sum(l.shapes, l.x.numerator), detail::mask_sum(l.shapes, l.x.denominator)},
          BetaParams{detail::mask_sum(l.shapes, l.y.numerator), detail::mask_sum(l.shapes, l.y.denominator)}};
}

/// Thrown when a family has no member equal in law to a complemented pair.
class NotClosedError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

/// Spec whose law is that of the pair with the chosen coordinate(s) complemented.
///
/// OL variants form a four-element group under complementation and are
/// relabelled. AN8 is permuted: complementing Y inverts W, which exchanges
/// W's numerator {2,5,8} with its denominator {4,6,7}. Sorting each index
/// by (in V-numerator?, in W-numerator?) into the slots
///   only V-num: 1   only V-den: 3   only W-num: 2   only W-den: 4
///   V-num & W-num: 5   V-den & W-den: 6   V-num & W-den: 7   V-den & W-num: 8
/// gives the 1-based maps
///   complement y: (1, 4, 3, 2, 7, 8, 5, 6)
///   complement x: (3, 2, 1, 4, 8, 7, 6, 5)
/// AN5 is not closed under complementation.
inline FamilySpec complement(const FamilySpec& family, Coordinate which) {
  const bool flip_x = which == Coordinate::x || which == Coordinate::both;
  const bool flip_y = which == Coordinate::y || which == Coordinate::both;
  switch (family.kind()) {
    case FamilyKind::OLplus:
    case FamilyKind::OLminus:
    case FamilyKind::OLminusX:
    case FamilyKind::OLstar: {
      const FamilyKind k = family.kind();
      bool cx = (k == FamilyKind::OLminusX || k == FamilyKind::OLstar) != flip_x;
      bool cy = (k == FamilyKind::OLminus || k == FamilyKind::OLstar) != flip_y;
      const FamilyKind out = cx ? (cy ? FamilyKind::OLstar : FamilyKind::OLminusX)
                                : (cy ? FamilyKind::OLminus : FamilyKind::OLplus);
      return FamilySpec(out, family.alphas());
    }
    case FamilyKind::AN8: {
      static constexpr std::array<int, 8> kFlipY = {1, 4, 3, 2, 7, 8, 5, 6};
      static constexpr std::array<int, 8> kFlipX = {3, 2, 1, 4, 8, 7, 6, 5};
      std::vector<double> a(family.alphas().values().begin(), family.alphas().values().end());
      auto apply = [&a](const std::array<int, 8>& perm) {
        std::vector<double> out(8);
        for (std::size_t i = 0; i < 8; ++i) out[i] = a[static_cast<std::size_t>(perm[i] - 1)];
        a = std::move(out);
      };
      if (flip_x) apply(kFlipX);
      if (flip_y) apply(kFlipY);
      return FamilySpec::an8(AlphaVector(std::move(a)));
    }
    case FamilyKind::IndependentBetas: {
      auto b = family.betas();
      if (flip_x) b[0] = b[0].complemented();
      if (flip_y) b[1] = b[1].complemented();
      return FamilySpec::independent(b[0], b[1]);
    }
    case FamilyKind::AN5:
      throw NotClosedError("complement: an5 is not closed under complementation; embed it in an8 instead");
  }
  throw std::logic_error("complement: unknown family");
}

/// The AN8 shapes that reduce to an OL variant (the zero patterns of the
/// generalized bivariate beta).
inline FamilySpec an8_embedding(const FamilySpec& ol) {
  if (!ol.is_ol()) throw std::invalid_argument("an8_embedding: expects an OL variant");
  const double a1 = ol.alphas()[0];
  const double a2 = ol.alphas()[1];
  const double a3 = ol.alphas()[2];
  switch (ol.kind()) {
    case FamilyKind::OLplus: return FamilySpec::an8(AlphaVector{a1, a2, 0, 0, 0, a3, 0, 0});
    case FamilyKind::OLminus: return FamilySpec::an8(AlphaVector{a1, 0, 0, a2, 0, 0, 0, a3});
    case FamilyKind::OLminusX: return FamilySpec::an8(AlphaVector{0, a2, a1, 0, 0, 0, a3, 0});
    case FamilyKind::OLstar: return FamilySpec::an8(AlphaVector{0, 0, a1, a2, a3, 0, 0, 0});
    default: break;
  }
  throw std::logic_error("an8_embedding: unreachable");
}

}  // namespace bivbeta

#endif  // BIVBETA_FAMILY_HPP
