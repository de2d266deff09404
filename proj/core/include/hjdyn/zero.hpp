#pragma once

#include <cstdint>
#include <map>
#include <random>
#include <string>

#include "hjdyn/expr.hpp"

namespace hjdyn {

struct Interval {
  double lo = -1.0;
  double hi = 1.0;
};

using RangeMap = std::map<std::string, Interval, std::less<>>;

inline constexpr std::uint64_t kDefaultSeed = 20240917;

/// How sample points are drawn. Per symbol, in order of preference: an
/// explicit range, [0.5, 2] for declared-positive symbols, [0.1, 2] for
/// symbols under a root, [-1, 1] otherwise.
struct SamplerConfig {
  RangeMap ranges;
  SymbolSet positive;
  std::uint64_t seed = kDefaultSeed;
};

class Sampler {
 public:
  explicit Sampler(SamplerConfig config);

  Interval range_of(std::string_view symbol, const SymbolSet& under_root) const;
  /// One uniform draw for every symbol in `symbols`.
  Bindings draw(const SymbolSet& symbols, const SymbolSet& under_root);
  /// Random quadratic polynomial bodies for the given opaque functions.
  FunctionTable realize(const std::map<std::string, std::size_t, std::less<>>& functions);

  std::mt19937_64& engine() { return rng_; }

 private:
  SamplerConfig config_;
  std::mt19937_64 rng_;
};

enum class ZeroKind { symbolic, numeric, nonzero };

struct ZeroVerdict {
  ZeroKind kind = ZeroKind::symbolic;
  int probes = 0;
  /// Largest |value| over the probes (numeric), or |value| at the witness.
  double residual = 0.0;
  Bindings witness;

  bool zero() const noexcept { return kind != ZeroKind::nonzero; }
  /// "symbolically-zero", "numerically-zero" or "nonzero".
  std::string tag() const;
};

struct ZeroTestOptions {
  int probes = 20;
  double tolerance = 1e-9;
  SamplerConfig sampler;
  /// Attempts per probe before giving up on a domain error.
  int max_retries = 100;
};

/// Decides whether `e` vanishes identically. Opaque functions are replaced by
/// a fresh random quadratic at every probe, so a numeric-zero verdict holds
/// for generic function bodies. Points where `e` cannot be evaluated (outside
/// the real domain) are redrawn.
ZeroVerdict is_zero(const Expr& e, const ZeroTestOptions& options = {});

}  // namespace hjdyn
