#pragma once

#include <string>
#include <vector>

#include "torushol/errors.hpp"
#include "torushol/matrix2.hpp"
#include "torushol/word.hpp"

namespace torushol {

/// Assignment of unimodular matrices to named free-group generators.
/// Generator order is significant: FreeWord letters index into it.
class Representation {
 public:
  void add(std::string name, const Matrix2& m) {
    names_.push_back(std::move(name));
    mats_.push_back(m);
  }

  std::size_t size() const { return mats_.size(); }
  const std::vector<std::string>& names() const { return names_; }
  const std::vector<Matrix2>& matrices() const { return mats_; }

  int index_of(const std::string& name) const {
    for (std::size_t i = 0; i < names_.size(); ++i) {
      if (names_[i] == name) return static_cast<int>(i);
    }
    return -1;
  }

  const Matrix2& of(const std::string& name) const {
    const int i = index_of(name);
    if (i < 0) throw Error("Representation: no generator named '" + name + "'");
    return mats_[static_cast<std::size_t>(i)];
  }

  const Matrix2& of(int index) const { return mats_.at(static_cast<std::size_t>(index)); }

  /// Word evaluation in word order: h(w1 w2 ... wn) = h(w1) h(w2) ... h(wn).
  /// With the transport convention h(first delta, then gamma) = h(gamma) h(delta),
  /// the rightmost letter is the loop traversed first.
  Matrix2 evaluate(const FreeWord& w) const {
    Matrix2 acc = Matrix2::identity();
    for (const auto& l : w.letters()) {
      if (l.gen < 0 || l.gen >= static_cast<int>(mats_.size())) {
        throw Error("Representation::evaluate: generator index out of range");
      }
      const Matrix2& g = mats_[static_cast<std::size_t>(l.gen)];
      acc = acc * (l.exp == 1 ? g : g.inverse());
    }
    return acc;
  }

  double max_det_drift() const {
    double worst = 0.0;
    for (const auto& m : mats_) worst = std::max(worst, det_drift(m));
    return worst;
  }

 private:
  std::vector<std::string> names_;
  std::vector<Matrix2> mats_;
};

}  // namespace torushol
