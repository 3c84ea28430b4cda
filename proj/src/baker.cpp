#include "coinwalk/baker.hpp"

#include <cmath>

namespace coinwalk {
namespace {

std::vector<cplx>& permute_scratch(std::size_t n) {
  thread_local std::vector<cplx> buf;
  if (buf.size() < n) buf.resize(n);
  return buf;
}

void check_unit_interval(double x, const char* name) {
  if (!(x >= 0.0 && x < 1.0)) {
    throw InvalidArgument(std::string("classical baker: ") + name + " = " + std::to_string(x) +
                          " outside [0,1)");
  }
}

}  // namespace

BakerSpec BakerSpec::qubit(int num_qubits, int n, FloquetAngles angles) {
  return BakerSpec{QubitFamily{num_qubits, n}, angles};
}

BakerSpec BakerSpec::even(std::size_t dim, FloquetAngles angles) {
  return BakerSpec{GeneralEven{dim}, angles};
}

std::size_t BakerSpec::dim() const {
  if (const auto* q = std::get_if<QubitFamily>(&variant)) {
    return std::size_t{1} << q->num_qubits;
  }
  return std::get<GeneralEven>(variant).dim;
}

std::string BakerSpec::label() const {
  if (const auto* q = std::get_if<QubitFamily>(&variant)) {
    return "B" + std::to_string(q->num_qubits) + "_" + std::to_string(q->n);
  }
  return "D" + std::to_string(std::get<GeneralEven>(variant).dim);
}

void BakerSpec::validate() const {
  if (!std::isfinite(angles.eta) || !std::isfinite(angles.kappa)) {
    throw InvalidArgument("Floquet angles must be finite");
  }
  if (const auto* q = std::get_if<QubitFamily>(&variant)) {
    if (q->num_qubits < 1 || q->num_qubits > kMaxQubits) {
      throw InvalidArgument("baker family: N=" + std::to_string(q->num_qubits) +
                            " outside [1, " + std::to_string(kMaxQubits) + "]");
    }
    if (q->n < 1 || q->n > q->num_qubits) {
      throw InvalidArgument("baker family: n=" + std::to_string(q->n) + " outside [1, N=" +
                            std::to_string(q->num_qubits) + "]");
    }
    return;
  }
  const std::size_t d = std::get<GeneralEven>(variant).dim;
  if (d < 2 || d % 2 != 0) {
    throw InvalidArgument("general-even baker: D=" + std::to_string(d) + " must be even and >= 2");
  }
  if (d > kMaxDenseBakerDim) {
    throw InvalidArgument("general-even baker: D=" + std::to_string(d) + " exceeds the dense cap " +
                          std::to_string(kMaxDenseBakerDim));
  }
}

// ---------------------------------------------------------------------------

BakerMap::BakerMap(BakerSpec spec) : spec_(std::move(spec)) {
  spec_.validate();
  dim_ = spec_.dim();
  if (const auto* q = std::get_if<QubitFamily>(&spec_.variant)) {
    const RegisterShape shape{q->num_qubits};
    g_n_.emplace(shape, q->n, spec_.angles);
    g_n_minus_1_.emplace(shape, q->n - 1, spec_.angles);
    shift_dest_ = qubit_shift_destinations(shape, q->n);
    return;
  }
  const auto d = static_cast<Eigen::Index>(dim_);
  const Eigen::Index half = d / 2;
  DenseMatrix halves = DenseMatrix::Zero(d, d);
  const DenseMatrix fh = fourier_matrix(static_cast<std::size_t>(half), spec_.angles);
  halves.topLeftCorner(half, half) = fh;
  halves.bottomRightCorner(half, half) = fh;
  matrix_ = fourier_matrix(dim_, spec_.angles).adjoint() * halves;
}

void BakerMap::permute(std::span<cplx> v, bool inverse) const {
  auto& buf = permute_scratch(v.size());
  std::copy(v.begin(), v.end(), buf.begin());
  if (!inverse) {
    for (std::size_t j = 0; j < v.size(); ++j) v[shift_dest_[j]] = buf[j];
  } else {
    for (std::size_t j = 0; j < v.size(); ++j) v[j] = buf[shift_dest_[j]];
  }
}

void BakerMap::apply(std::span<cplx> v) const {
  if (v.size() != dim_) throw InvalidArgument("baker map: dimension mismatch");
  if (g_n_) {
    g_n_->apply(v, Direction::Forward);
    permute(v, false);
    g_n_minus_1_->apply(v, Direction::Inverse);
    return;
  }
  Eigen::Map<CoinVector> x(v.data(), static_cast<Eigen::Index>(v.size()));
  const CoinVector y = matrix_ * x;
  x = y;
}

void BakerMap::apply_inverse(std::span<cplx> v) const {
  if (v.size() != dim_) throw InvalidArgument("baker map: dimension mismatch");
  if (g_n_) {
    g_n_minus_1_->apply(v, Direction::Forward);
    permute(v, true);
    g_n_->apply(v, Direction::Inverse);
    return;
  }
  Eigen::Map<CoinVector> x(v.data(), static_cast<Eigen::Index>(v.size()));
  const CoinVector y = matrix_.adjoint() * x;
  x = y;
}

void BakerMap::apply_rows(SectorMatrix& rows, Direction dir) const {
  if (static_cast<std::size_t>(rows.cols()) != dim_) {
    throw InvalidArgument("baker map: dimension mismatch");
  }
  if (g_n_) {
    for (Eigen::Index r = 0; r < rows.rows(); ++r) {
      const std::span<cplx> row(rows.row(r).data(), dim_);
      if (dir == Direction::Forward) {
        apply(row);
      } else {
        apply_inverse(row);
      }
    }
    return;
  }
  // Row form of v -> B v is v^T -> v^T B^T; the inverse uses B^dagger.
  if (dir == Direction::Forward) {
    rows = (rows * matrix_.transpose()).eval();
  } else {
    rows = (rows * matrix_.conjugate()).eval();
  }
}

CoinVector BakerMap::operator()(const CoinVector& v) const {
  CoinVector out = v;
  apply(std::span<cplx>(out.data(), static_cast<std::size_t>(out.size())));
  return out;
}

DenseMatrix BakerMap::dense() const {
  if (!g_n_) return matrix_;
  const auto d = static_cast<Eigen::Index>(dim_);
  DenseMatrix out(d, d);
  CoinVector col(d);
  for (Eigen::Index j = 0; j < d; ++j) {
    col.setZero();
    col(j) = 1.0;
    apply(std::span<cplx>(col.data(), dim_));
    out.col(j) = col;
  }
  return out;
}

BakerMap build_baker_applier(const BakerSpec& spec) { return BakerMap(spec); }

// ---------------------------------------------------------------------------

PhasePoint classical_baker_step(PhasePoint pt) {
  check_unit_interval(pt.q, "q");
  check_unit_interval(pt.p, "p");
  const double fold = std::floor(2.0 * pt.q);
  return PhasePoint{2.0 * pt.q - fold, (pt.p + fold) / 2.0};
}

SymbolicString symbolic_step(SymbolicString s) {
  if (s.future.empty()) throw InvalidArgument("symbolic step: future side is empty");
  s.past.insert(s.past.begin(), s.future.front());
  s.future.erase(s.future.begin());
  return s;
}

SymbolicString encode_phase_point(PhasePoint pt, int bits) {
  check_unit_interval(pt.q, "q");
  check_unit_interval(pt.p, "p");
  if (bits < 1 || bits > 52) throw InvalidArgument("encode: bits must be in [1,52]");
  SymbolicString s;
  double q = pt.q;
  double p = pt.p;
  for (int i = 0; i < bits; ++i) {
    q *= 2.0;
    p *= 2.0;
    const auto qb = static_cast<std::uint8_t>(q >= 1.0);
    const auto pb = static_cast<std::uint8_t>(p >= 1.0);
    s.future.push_back(qb);
    s.past.push_back(pb);
    q -= qb;
    p -= pb;
  }
  return s;
}

PhasePoint decode_phase_point(const SymbolicString& s) {
  PhasePoint pt;
  double w = 0.5;
  for (auto b : s.future) {
    pt.q += w * b;
    w /= 2.0;
  }
  w = 0.5;
  for (auto b : s.past) {
    pt.p += w * b;
    w /= 2.0;
  }
  return pt;
}

}  // namespace coinwalk
