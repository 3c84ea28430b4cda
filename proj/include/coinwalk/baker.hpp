#pragma once

#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <variant>
#include <vector>

#include "coinwalk/hilbert.hpp"

namespace coinwalk {

/// B_{N,n} acting on an N-qubit register, 1 <= n <= N.
struct QubitFamily {
  int num_qubits = 1;
  int n = 1;
  friend bool operator==(const QubitFamily&, const QubitFamily&) = default;
};

/// The Balazs-Voros-Saraceno baker F_D^{-1} (I_2 (x) F_{D/2}) on an even dimension D.
struct GeneralEven {
  std::size_t dim = 2;
  friend bool operator==(const GeneralEven&, const GeneralEven&) = default;
};

struct BakerSpec {
  std::variant<QubitFamily, GeneralEven> variant;
  FloquetAngles angles;

  static BakerSpec qubit(int num_qubits, int n, FloquetAngles angles = {});
  static BakerSpec even(std::size_t dim, FloquetAngles angles = {});

  std::size_t dim() const;
  /// "B7_3" or "D130".
  std::string label() const;
  /// Throws InvalidArgument for n outside [1,N], odd D, or dimensions past the caps.
  void validate() const;

  friend bool operator==(const BakerSpec&, const BakerSpec&) = default;
};

/// Largest general-even dimension; these are applied as dense matrices.
inline constexpr std::size_t kMaxDenseBakerDim = 512;
inline constexpr int kMaxQubits = 24;

/// Immutable, thread-safe applier for one member of the baker family.
///
/// Qubit members are applied as G_{n-1}^{-1} S_n G_n using fast transforms and a
/// precomputed permutation. General-even members hold the dense matrix.
class BakerMap {
 public:
  explicit BakerMap(BakerSpec spec);

  const BakerSpec& spec() const { return spec_; }
  std::size_t dim() const { return dim_; }

  void apply(std::span<cplx> v) const;
  void apply_inverse(std::span<cplx> v) const;

  /// Applies the map (or its inverse) to every row of `rows`, each row one coin vector.
  void apply_rows(SectorMatrix& rows, Direction dir = Direction::Forward) const;

  CoinVector operator()(const CoinVector& v) const;

  /// Dense matrix of the operator, assembled column by column from apply().
  DenseMatrix dense() const;

 private:
  void permute(std::span<cplx> v, bool inverse) const;

  BakerSpec spec_;
  std::size_t dim_;
  std::optional<PartialFourier> g_n_;
  std::optional<PartialFourier> g_n_minus_1_;
  std::vector<std::uint32_t> shift_dest_;
  DenseMatrix matrix_;
};

BakerMap build_baker_applier(const BakerSpec& spec);

// --- Classical baker map and its symbolic dynamics -------------------------

struct PhasePoint {
  double q = 0.0;
  double p = 0.0;
};

/// q' = 2q - [2q], p' = (p + [2q]) / 2. Both coordinates must lie in [0,1).
PhasePoint classical_baker_step(PhasePoint pt);

/// Truncated bi-infinite binary string ...e_{-2} e_{-1} . e_0 e_1 ...
/// past[0] is e_{-1} and future[0] is e_0, i.e. both sides are stored outward from the dot.
struct SymbolicString {
  std::vector<std::uint8_t> past;
  std::vector<std::uint8_t> future;

  friend bool operator==(const SymbolicString&, const SymbolicString&) = default;
};

/// Bernoulli shift: the dot moves one symbol to the right.
SymbolicString symbolic_step(SymbolicString s);

/// Binary expansion q = 0.e0 e1 ..., p = 0.e_{-1} e_{-2} ... truncated to `bits` symbols each side.
SymbolicString encode_phase_point(PhasePoint pt, int bits);
PhasePoint decode_phase_point(const SymbolicString& s);

}  // namespace coinwalk
