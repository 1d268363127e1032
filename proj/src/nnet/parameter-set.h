// nnet/parameter-set.h

// Copyright 2026  The simulmt Authors

// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//  http://www.apache.org/licenses/LICENSE-2.0
//
// THIS CODE IS PROVIDED *AS IS* BASIS, WITHOUT WARRANTIES OR CONDITIONS OF ANY
// KIND, EITHER EXPRESS OR IMPLIED, INCLUDING WITHOUT LIMITATION ANY IMPLIED
// WARRANTIES OR CONDITIONS OF TITLE, FITNESS FOR A PARTICULAR PURPOSE,
// MERCHANTABLITY OR NON-INFRINGEMENT.
// See the Apache 2 License for the specific language governing permissions and
// limitations under the License.

#ifndef SIMUL_NNET_PARAMETER_SET_H_
#define SIMUL_NNET_PARAMETER_SET_H_

#include <Eigen/Dense>
#include <string>
#include <vector>

namespace simul {

template <typename Real>
using Matrix =
    Eigen::Matrix<Real, Eigen::Dynamic, Eigen::Dynamic, Eigen::RowMajor>;
template <typename Real>
using RowVector = Eigen::Matrix<Real, 1, Eigen::Dynamic>;

/// Ordered, named collection of parameter tensors.  Models, gradients and
/// optimizer moments all share one layout, so they can be combined
/// tensor-by-tensor by index.
template <typename Real>
class ParameterSet {
 public:
  int Add(std::string name, int rows, int cols) {
    names_.push_back(std::move(name));
    tensors_.push_back(Matrix<Real>::Zero(rows, cols));
    return static_cast<int>(tensors_.size()) - 1;
  }

  int size() const { return static_cast<int>(tensors_.size()); }
  Matrix<Real> &operator[](int i) { return tensors_[i]; }
  const Matrix<Real> &operator[](int i) const { return tensors_[i]; }
  const std::string &name(int i) const { return names_[i]; }

  size_t NumScalars() const {
    size_t n = 0;
    for (const auto &t : tensors_) n += static_cast<size_t>(t.size());
    return n;
  }

  ParameterSet ZerosLike() const {
    ParameterSet out = *this;
    out.SetZero();
    return out;
  }
  void SetZero() {
    for (auto &t : tensors_) t.setZero();
  }
  void AddScaled(const ParameterSet &other, Real scale) {
    for (size_t i = 0; i < tensors_.size(); ++i)
      tensors_[i] += scale * other.tensors_[i];
  }
  void Scale(Real scale) {
    for (auto &t : tensors_) t *= scale;
  }
  double SquaredNorm() const {
    double s = 0.0;
    for (const auto &t : tensors_) s += static_cast<double>(t.squaredNorm());
    return s;
  }
  bool AllFinite() const {
    for (const auto &t : tensors_)
      if (!t.allFinite()) return false;
    return true;
  }

  /// Flat scalar access in tensor order, for finite-difference checks.
  Real &Scalar(size_t flat_index) {
    for (auto &t : tensors_) {
      if (flat_index < static_cast<size_t>(t.size())) return t.data()[flat_index];
      flat_index -= static_cast<size_t>(t.size());
    }
    return tensors_.back().data()[0];  // unreachable for valid indices
  }

  template <typename Other>
  ParameterSet<Other> Cast() const {
    ParameterSet<Other> out;
    for (size_t i = 0; i < tensors_.size(); ++i) {
      int k = out.Add(names_[i], static_cast<int>(tensors_[i].rows()),
                      static_cast<int>(tensors_[i].cols()));
      out[k] = tensors_[i].template cast<Other>();
    }
    return out;
  }

 private:
  std::vector<std::string> names_;
  std::vector<Matrix<Real>> tensors_;
};

}  // namespace simul

#endif  // SIMUL_NNET_PARAMETER_SET_H_
