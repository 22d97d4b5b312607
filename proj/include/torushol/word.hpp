#pragma once

#include <string>
#include <vector>

#include "torushol/errors.hpp"

namespace torushol {

/// One letter of a free-group word: generator index and exponent +-1.
struct Letter {
  int gen{0};
  int exp{1};
  bool operator==(const Letter&) const = default;
};

/// Freely reduced word over indexed generators. Appends cancel eagerly, so
/// the stored letter sequence is reduced by construction.
class FreeWord {
 public:
  FreeWord() = default;

  static FreeWord generator(int gen, int exp = 1) {
    FreeWord w;
    w.push(gen, exp);
    return w;
  }

  void push(int gen, int exp) {
    if (exp != 1 && exp != -1) {
      // split higher powers into unit letters
      const int step = exp > 0 ? 1 : -1;
      for (int i = 0; i != exp; i += step) push(gen, step);
      return;
    }
    if (!letters_.empty() && letters_.back().gen == gen && letters_.back().exp == -exp) {
      letters_.pop_back();
    } else {
      letters_.push_back({gen, exp});
    }
  }

  FreeWord operator*(const FreeWord& rhs) const {
    FreeWord out = *this;
    for (const auto& l : rhs.letters_) out.push(l.gen, l.exp);
    return out;
  }

  FreeWord inverse() const {
    FreeWord out;
    for (auto it = letters_.rbegin(); it != letters_.rend(); ++it) out.push(it->gen, -it->exp);
    return out;
  }

  FreeWord pow(int n) const {
    FreeWord base = n >= 0 ? *this : inverse();
    FreeWord out;
    for (int i = 0; i < std::abs(n); ++i) out = out * base;
    return out;
  }

  FreeWord conjugated_by(const FreeWord& t) const {  // t * w * t^-1
    return t * (*this) * t.inverse();
  }

  bool empty() const { return letters_.empty(); }
  std::size_t length() const { return letters_.size(); }
  const std::vector<Letter>& letters() const { return letters_; }
  bool operator==(const FreeWord&) const = default;

  /// Image under a homomorphism sending generator g to images[g].
  FreeWord substituted(const std::vector<FreeWord>& images) const {
    FreeWord out;
    for (const auto& l : letters_) {
      if (l.gen < 0 || l.gen >= static_cast<int>(images.size())) {
        throw Error("FreeWord::substituted: generator index out of range");
      }
      const FreeWord piece = l.exp == 1 ? images[l.gen] : images[l.gen].inverse();
      out = out * piece;
    }
    return out;
  }

  /// Additive character value: sum of exponents weighted per generator.
  long character_sum(const std::vector<int>& weights) const {
    long s = 0;
    for (const auto& l : letters_) {
      if (l.gen < 0 || l.gen >= static_cast<int>(weights.size())) {
        throw Error("FreeWord::character_sum: generator index out of range");
      }
      s += static_cast<long>(l.exp) * weights[l.gen];
    }
    return s;
  }

  std::string str(const std::vector<std::string>& names) const {
    if (letters_.empty()) return "1";
    std::string out;
    for (const auto& l : letters_) {
      if (!out.empty()) out += ".";
      out += names.at(static_cast<std::size_t>(l.gen));
      if (l.exp == -1) out += "'";
    }
    return out;
  }

 private:
  std::vector<Letter> letters_;
};

/// Parse "a.b'.a" style words (apostrophe marks an inverse letter).
inline FreeWord parse_word(const std::string& text, const std::vector<std::string>& names) {
  FreeWord w;
  if (text == "1" || text.empty()) return w;
  std::size_t pos = 0;
  while (pos < text.size()) {
    auto dot = text.find('.', pos);
    if (dot == std::string::npos) dot = text.size();
    std::string piece = text.substr(pos, dot - pos);
    int exp = 1;
    if (!piece.empty() && piece.back() == '\'') {
      exp = -1;
      piece.pop_back();
    }
    int gen = -1;
    for (std::size_t g = 0; g < names.size(); ++g) {
      if (names[g] == piece) gen = static_cast<int>(g);
    }
    if (gen < 0) throw Error("parse_word: unknown generator '" + piece + "'");
    w.push(gen, exp);
    pos = dot + 1;
  }
  return w;
}

}  // namespace torushol
