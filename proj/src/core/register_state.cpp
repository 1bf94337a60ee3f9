#include "lsiib/register_state.hpp"

#include <algorithm>
#include <cmath>

#include <Eigen/Eigenvalues>

#include "lsiib/errors.hpp"

namespace lsiib::protocol {

namespace {

std::vector<std::size_t> make_strides(const std::vector<Subsystem>& layout) {
  std::vector<std::size_t> strides(layout.size(), 1);
  for (std::size_t i = layout.size(); i-- > 1;) {
    strides[i - 1] = strides[i] * layout[i].levels.size();
  }
  return strides;
}

std::size_t total_dim(const std::vector<Subsystem>& layout) {
  std::size_t d = 1;
  for (const auto& s : layout) d *= s.levels.size();
  return d;
}

}  // namespace

RegisterState::RegisterState(std::vector<Subsystem> layout, Eigen::VectorXcd amplitudes, bool)
    : layout_(std::move(layout)), strides_(make_strides(layout_)), amplitudes_(std::move(amplitudes)) {
  if (layout_.empty()) {
    throw Error(ErrorKind::invalid_parameter, "register needs at least one subsystem");
  }
  for (const auto& s : layout_) {
    if (s.levels.empty()) throw Error(ErrorKind::invalid_parameter, "subsystem " + s.name + " has no levels");
  }
  if (static_cast<std::size_t>(amplitudes_.size()) != total_dim(layout_)) {
    throw Error(ErrorKind::basis_mismatch, "amplitude vector does not match register dimension");
  }
}

RegisterState::RegisterState(std::vector<Subsystem> layout, Eigen::VectorXcd amplitudes)
    : RegisterState(std::move(layout), std::move(amplitudes), true) {
  if (std::abs(amplitudes_.norm() - 1.0) > 1e-10) {
    throw Error(ErrorKind::invalid_parameter,
                "register state is not normalized (norm " + std::to_string(amplitudes_.norm()) + ")");
  }
}

RegisterState RegisterState::unnormalized(std::vector<Subsystem> layout, Eigen::VectorXcd amplitudes) {
  return RegisterState(std::move(layout), std::move(amplitudes), true);
}

RegisterState RegisterState::product(std::vector<Subsystem> layout, const std::vector<Eigen::VectorXcd>& factors) {
  if (factors.size() != layout.size()) {
    throw Error(ErrorKind::basis_mismatch, "one factor per subsystem required");
  }
  Eigen::VectorXcd amps = Eigen::VectorXcd::Ones(1);
  for (std::size_t i = 0; i < factors.size(); ++i) {
    if (static_cast<std::size_t>(factors[i].size()) != layout[i].levels.size()) {
      throw Error(ErrorKind::basis_mismatch, "factor for " + layout[i].name + " has wrong length");
    }
    const double n = factors[i].norm();
    if (std::abs(n - 1.0) > 1e-10) {
      throw Error(ErrorKind::invalid_parameter, "factor for " + layout[i].name + " is not normalized");
    }
    Eigen::VectorXcd next(amps.size() * factors[i].size());
    for (Eigen::Index a = 0; a < amps.size(); ++a) {
      next.segment(a * factors[i].size(), factors[i].size()) = amps(a) * factors[i];
    }
    amps = std::move(next);
  }
  return RegisterState(std::move(layout), std::move(amps));
}

std::size_t RegisterState::subsystem_index(std::string_view name) const {
  for (std::size_t i = 0; i < layout_.size(); ++i) {
    if (layout_[i].name == name) return i;
  }
  throw Error(ErrorKind::basis_mismatch, "no subsystem named '" + std::string(name) + "'");
}

std::size_t RegisterState::level_index(std::size_t subsystem, std::string_view level) const {
  const auto& levels = layout_.at(subsystem).levels;
  const auto it = std::find(levels.begin(), levels.end(), level);
  if (it == levels.end()) {
    throw Error(ErrorKind::basis_mismatch,
                "level '" + std::string(level) + "' not in subsystem " + layout_[subsystem].name);
  }
  return static_cast<std::size_t>(it - levels.begin());
}

std::vector<std::size_t> RegisterState::digits(std::size_t flat) const {
  std::vector<std::size_t> d(layout_.size());
  for (std::size_t i = 0; i < layout_.size(); ++i) {
    d[i] = (flat / strides_[i]) % layout_[i].levels.size();
  }
  return d;
}

std::string RegisterState::label(std::size_t flat_index) const {
  const auto d = digits(flat_index);
  std::string out;
  for (std::size_t i = 0; i < d.size(); ++i) {
    if (i) out += '|';
    out += layout_[i].levels[d[i]];
  }
  return out;
}

Basis RegisterState::basis() const {
  Basis b;
  b.reserve(dim());
  for (std::size_t k = 0; k < dim(); ++k) b.push_back(label(k));
  return b;
}

std::size_t RegisterState::flat_index(const std::vector<std::string>& levels) const {
  if (levels.size() != layout_.size()) {
    throw Error(ErrorKind::basis_mismatch, "one level per subsystem required");
  }
  std::size_t flat = 0;
  for (std::size_t i = 0; i < levels.size(); ++i) flat += strides_[i] * level_index(i, levels[i]);
  return flat;
}

Complex RegisterState::amplitude(const std::vector<std::string>& levels) const {
  return amplitudes_(static_cast<Eigen::Index>(flat_index(levels)));
}

double RegisterState::probability(std::string_view subsystem, std::string_view level) const {
  return joint_probability({{std::string(subsystem), std::string(level)}});
}

double RegisterState::joint_probability(const std::vector<std::pair<std::string, std::string>>& conditions) const {
  std::vector<std::pair<std::size_t, std::size_t>> resolved;
  for (const auto& [sub, lev] : conditions) {
    const auto s = subsystem_index(sub);
    resolved.emplace_back(s, level_index(s, lev));
  }
  double p = 0.0;
  for (std::size_t k = 0; k < dim(); ++k) {
    bool match = true;
    for (const auto& [s, l] : resolved) {
      if ((k / strides_[s]) % layout_[s].levels.size() != l) {
        match = false;
        break;
      }
    }
    if (match) p += std::norm(amplitudes_(static_cast<Eigen::Index>(k)));
  }
  return p;
}

double RegisterState::overlap(const RegisterState& other) const {
  if (other.dim() != dim()) {
    throw Error(ErrorKind::basis_mismatch, "overlap between registers of different dimension");
  }
  return std::norm(amplitudes_.dot(other.amplitudes_));
}

RegisterState RegisterState::apply(const Eigen::MatrixXcd& op, std::span<const std::size_t> subsystems) const {
  std::size_t local_dim = 1;
  for (auto s : subsystems) local_dim *= layout_.at(s).levels.size();
  if (static_cast<std::size_t>(op.rows()) != local_dim || static_cast<std::size_t>(op.cols()) != local_dim) {
    throw Error(ErrorKind::basis_mismatch, "local operator dimension does not match subsystems");
  }

  // local_stride[j] is the flat-index step of local digit j.
  std::vector<std::size_t> local_offsets(local_dim, 0);
  for (std::size_t l = 0; l < local_dim; ++l) {
    std::size_t rem = l;
    std::size_t offset = 0;
    for (std::size_t j = subsystems.size(); j-- > 0;) {
      const auto s = subsystems[j];
      const auto n = layout_[s].levels.size();
      offset += (rem % n) * strides_[s];
      rem /= n;
    }
    local_offsets[l] = offset;
  }

  Eigen::VectorXcd out = Eigen::VectorXcd::Zero(amplitudes_.size());
  Eigen::VectorXcd local_in(static_cast<Eigen::Index>(local_dim));
  for (std::size_t k = 0; k < dim(); ++k) {
    // Visit each "rest" configuration once: the one whose local digits are all zero.
    bool base = true;
    for (auto s : subsystems) {
      if ((k / strides_[s]) % layout_[s].levels.size() != 0) {
        base = false;
        break;
      }
    }
    if (!base) continue;
    for (std::size_t l = 0; l < local_dim; ++l) {
      local_in(static_cast<Eigen::Index>(l)) = amplitudes_(static_cast<Eigen::Index>(k + local_offsets[l]));
    }
    const Eigen::VectorXcd local_out = op * local_in;
    for (std::size_t l = 0; l < local_dim; ++l) {
      out(static_cast<Eigen::Index>(k + local_offsets[l])) = local_out(static_cast<Eigen::Index>(l));
    }
  }
  return RegisterState(layout_, std::move(out), true);
}

RegisterState RegisterState::normalized() const {
  const double n = norm();
  if (n == 0.0) throw Error(ErrorKind::numerical, "cannot normalize a zero register");
  return RegisterState(layout_, amplitudes_ / n, true);
}

Eigen::MatrixXcd RegisterState::reduced_density_matrix(std::span<const std::size_t> keep) const {
  std::size_t keep_dim = 1;
  for (auto s : keep) keep_dim *= layout_.at(s).levels.size();
  Eigen::MatrixXcd rho = Eigen::MatrixXcd::Zero(static_cast<Eigen::Index>(keep_dim), static_cast<Eigen::Index>(keep_dim));

  auto kept_index = [&](const std::vector<std::size_t>& d) {
    std::size_t idx = 0;
    for (auto s : keep) idx = idx * layout_[s].levels.size() + d[s];
    return idx;
  };
  auto rest_key = [&](std::vector<std::size_t> d) {
    for (auto s : keep) d[s] = 0;
    return d;
  };

  for (std::size_t i = 0; i < dim(); ++i) {
    const auto di = digits(i);
    const auto ri = rest_key(di);
    for (std::size_t j = 0; j < dim(); ++j) {
      const auto dj = digits(j);
      if (rest_key(dj) != ri) continue;
      rho(static_cast<Eigen::Index>(kept_index(di)), static_cast<Eigen::Index>(kept_index(dj))) +=
          amplitudes_(static_cast<Eigen::Index>(i)) * std::conj(amplitudes_(static_cast<Eigen::Index>(j)));
    }
  }
  return rho;
}

double entropy_bits(const Eigen::MatrixXcd& rho) {
  const Eigen::MatrixXcd herm = 0.5 * (rho + rho.adjoint());
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> solver(herm, Eigen::EigenvaluesOnly);
  double s = 0.0;
  for (Eigen::Index i = 0; i < solver.eigenvalues().size(); ++i) {
    const double p = solver.eigenvalues()(i);
    if (p > 1e-300) s -= p * std::log2(p);
  }
  return s;
}

}  // namespace lsiib::protocol
