#ifndef DGSLAB_ORACLES_HPP_
#define DGSLAB_ORACLES_HPP_

#include <cstdint>
#include <functional>
#include <memory>
#include <optional>
#include <string>
#include <vector>

#include "dgslab/enumeration.hpp"
#include "dgslab/lattice.hpp"
#include "dgslab/norms.hpp"
#include "dgslab/sparsifier.hpp"

namespace dgslab {

// A point y of the oracle's lattice L, as integer coefficients B^{-1} y, with
// the exact key of y - t in the oracle's integer frame.
struct CosetPoint {
  std::vector<std::int64_t> coords;
  Int128 key = 0;
};

// CVP and SVP oracles for the sublattices L' produced by sparsifying a fixed
// lattice L - t. Every query names its sublattice through a SparsifiedPair
// over the basis of L; the pair with z = 0 stands for L itself.
class SublatticeOracle {
 public:
  SublatticeOracle(ShiftedLattice lat, NormBody norm);
  virtual ~SublatticeOracle() = default;

  const ShiftedLattice& lattice() const { return lat_; }
  const NormBody& norm() const { return norm_; }
  const IntegerFrame& frame() const { return *frame_; }
  std::shared_ptr<const IntegerFrame> frame_ptr() const { return frame_; }
  Int128 scaled_key(const Rational& key) const { return frame_->scaled_key(norm_.kind(), key); }
  Rational unscaled_key(Int128 key) const { return frame_->unscaled_key(norm_.kind(), key); }
  RationalVector point_of(const CosetPoint& y) const { return frame_->point(y.coords.data()); }
  RationalVector offset_of(const CosetPoint& y) const { return frame_->point_offset(y.coords.data()); }

  // The point y' of L' closest to t + w, reported as y = y' - w. With a
  // bound, nullopt means the distance key of y' exceeds it.
  virtual std::optional<CosetPoint> closest(const SparsifiedPair& pair, std::optional<Int128> bound) = 0;
  // A shortest nonzero vector of L' for an unshifted pair over an unshifted
  // lattice; nullopt means it is longer than the bound.
  virtual std::optional<CosetPoint> shortest(const SparsifiedPair& pair, std::optional<Int128> bound) = 0;
  virtual std::string backend() const = 0;

  // The pair with z = 0 over this lattice's basis.
  SparsifiedPair whole_lattice() const;

 protected:
  ShiftedLattice lat_;
  NormBody norm_;
  std::shared_ptr<const IntegerFrame> frame_;
};

using OracleFactory = std::function<std::unique_ptr<SublatticeOracle>(const ShiftedLattice&, const NormBody&)>;

// Answers from a sorted enumeration of L - t: the first enumerated point in
// the queried coset. Needs an exact norm.
std::unique_ptr<SublatticeOracle> make_scan_oracle(const ShiftedLattice& lat, const NormBody& norm);
// Builds the basis of L' and solves CVP or SVP on it directly.
std::unique_ptr<SublatticeOracle> make_enumeration_oracle(const ShiftedLattice& lat, const NormBody& norm);
OracleFactory scan_oracle_factory();
OracleFactory enumeration_oracle_factory();

struct OracleAudit {
  std::uint64_t calls = 0;
  std::uint64_t materialized_checks = 0;
  std::uint64_t violations = 0;
  std::vector<std::string> messages;  // first few violations
};

// Checks every query: the pair's basis is the oracle's basis, p is prime, z
// and c are reduced, and the answer lies in the queried coset. The first
// `materialize_first` queries, and then every `materialize_every`-th, also
// build the basis of L' and check each column for membership in L and the
// index p.
OracleFactory audited_factory(OracleFactory inner, std::shared_ptr<OracleAudit> audit,
                              std::uint64_t materialize_first = 64, std::uint64_t materialize_every = 4096);

}  // namespace dgslab

#endif  // DGSLAB_ORACLES_HPP_
