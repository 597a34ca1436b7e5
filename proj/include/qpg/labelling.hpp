#pragma once

#include <map>
#include <memory>
#include <mutex>
#include <optional>
#include <set>
#include <string>
#include <vector>

#include "qpg/interval.hpp"

namespace qpg {

// Letters are serialized chars: 'a','b' positive, 'A','B' their inverses.
// A-type letters live at integer positions, B-type at half-integers.
inline bool isLetter(char c) { return c == 'a' || c == 'A' || c == 'b' || c == 'B'; }
inline bool isAType(char c) { return c == 'a' || c == 'A'; }
inline char inverseLetter(char c) {
  switch (c) {
    case 'a': return 'A';
    case 'A': return 'a';
    case 'b': return 'B';
    case 'B': return 'b';
  }
  throw std::invalid_argument("inverseLetter: bad letter");
}

/// A finite word of the labelling: letters alternate A-type/B-type.
class LWord {
 public:
  LWord() = default;
  explicit LWord(std::string s) : s_(std::move(s)) {
    for (size_t i = 0; i < s_.size(); ++i) {
      if (!isLetter(s_[i])) throw std::invalid_argument("LWord: bad letter in " + s_);
      if (i > 0 && isAType(s_[i]) == isAType(s_[i - 1]))
        throw std::invalid_argument("LWord: letters must alternate in " + s_);
    }
  }

  size_t size() const { return s_.size(); }
  bool empty() const { return s_.empty(); }
  char at(size_t i) const { return s_.at(i); }
  const std::string& str() const { return s_; }
  bool startsAType() const { return !s_.empty() && isAType(s_[0]); }

  LWord sub(size_t pos, size_t len) const { return LWord(s_.substr(pos, len)); }
  /// Central subword of odd length len (size() and len both odd).
  LWord central(size_t len) const {
    if (len > size() || (size() - len) % 2 != 0)
      throw std::invalid_argument("LWord central: bad length");
    return sub((size() - len) / 2, len);
  }

  /// Letters reversed and inverted.
  LWord formalInverse() const {
    std::string t(s_.rbegin(), s_.rend());
    for (char& c : t) c = inverseLetter(c);
    return LWord(std::move(t));
  }

  friend bool operator==(const LWord& a, const LWord& b) { return a.s_ == b.s_; }
  friend bool operator!=(const LWord& a, const LWord& b) { return a.s_ != b.s_; }
  friend bool operator<(const LWord& a, const LWord& b) { return a.s_ < b.s_; }

 private:
  std::string s_;
};

enum class UnitClass { Pos, Neg, Neither };

/// The quasi-periodic labelling rho: (1/2)Z -> {a, a^-1, b, b^-1}, built as
/// the bi-infinite limit of the level words
///   W_{k+1} = W_k W_k X_k W_k W_k,   X_k = "a" + inverse(W_k) + "b",
/// anchored at 0: the right ray is the prefix limit, the left ray the suffix
/// limit (each W_{k+1} has W_k as prefix and suffix). Positions are handled
/// doubled, so p in (1/2)Z is the integer 2p.
class QPLabelling {
 public:
  explicit QPLabelling(std::string seed = "ab", int max_level = 10,
                       std::string cache_dir = "");
  /// Test double: p-periodic labelling repeating the given pattern.
  static QPLabelling periodic(std::string pattern);

  bool isPeriodicDouble() const { return periodic_; }
  const std::string& seedWord() const { return seed_; }
  int maxLevel() const { return max_level_; }

  char letter(long long doubled) const;
  /// Letters at doubled positions lo..hi inclusive.
  std::string window(long long lo, long long hi) const;
  /// W_k, 1-based.
  std::string levelWord(int k) const;
  long long levelLength(int k) const;

  /// Context of unit [n, n+1] at radius k (2k+1 letters centred at n + 1/2).
  LWord contextUnit(long long n, int k) const;
  /// Context of the unit containing x.
  LWord contextPoint(const Dyadic& x, int k) const;
  /// W(J, k) for J with half-integer endpoints and |J| >= 1.
  LWord contextInterval(const Interval& J, int k) const;

  UnitClass unitClass(long long n, const LWord& W) const;

  /// Smallest |m| (positive first on ties) with matching unit context,
  /// skipping excluded units; nullopt when the search radius is exhausted.
  std::optional<long long> findUnitWithContext(const LWord& w,
                                               const std::set<long long>& exclude,
                                               long long search_radius) const;

  struct Factors {
    std::vector<LWord> words;                 // sorted
    std::map<LWord, long long> rep_center;    // doubled position of one occurrence centre
  };
  /// All context words of radius k occurring in rho (B-type centre),
  /// enumerated from a saturation window and double-checked on a window
  /// twice the size. Cached; the reference stays valid.
  const Factors& contextFactors(int radius) const;
  /// Occurring factors of the given odd length with prescribed centre type.
  const Factors& oddFactors(int length, bool b_center) const;

  struct QPReport {
    bool parity_ok = true;
    std::map<int, long long> recurrence_gap;  // length -> letters; a window of
                                              // gap(l) letters contains every
                                              // occurring length-l factor
    bool inverse_closure = true;
    std::optional<long long> min_period;      // smallest period found, if any
    long long window_letters = 0;
  };
  QPReport verifyQuasiPeriodicity(int max_len, int window_level, int max_period) const;

 private:
  QPLabelling(std::string pattern, bool periodic);
  void ensureCovers(long long need_right, long long need_left) const;  // callers hold mu_
  std::string windowLocked(long long lo, long long hi) const;
  const Factors& factorsImpl(int length, bool b_center) const;
  void loadCache();
  void saveCache() const;

  std::string seed_;
  int max_level_;
  bool periodic_ = false;
  std::string cache_dir_;
  mutable std::mutex mu_;
  mutable std::vector<std::string> levels_;
  mutable std::map<std::pair<int, bool>, std::unique_ptr<Factors>> factor_cache_;
};

using LabellingPtr = std::shared_ptr<const QPLabelling>;

}  // namespace qpg
