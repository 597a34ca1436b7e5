#include "qpg/labelling.hpp"

#include <algorithm>
#include <filesystem>
#include <fstream>
#include <limits>

namespace qpg {

namespace {

std::string formalInverseStr(const std::string& w) {
  std::string t(w.rbegin(), w.rend());
  for (char& c : t) c = inverseLetter(c);
  return t;
}

void validateSeed(const std::string& seed) {
  if (seed.size() < 2 || seed.size() % 2 != 0)
    throw std::invalid_argument("labelling seed: need even length >= 2");
  for (size_t i = 0; i < seed.size(); ++i) {
    if (!isLetter(seed[i])) throw std::invalid_argument("labelling seed: bad letter");
    if (isAType(seed[i]) != (i % 2 == 0))
      throw std::invalid_argument("labelling seed: must alternate starting with an a-letter");
  }
}

uint64_t fnv1a(const std::string& s) {
  uint64_t h = 1469598103934665603ull;
  for (unsigned char c : s) {
    h ^= c;
    h *= 1099511628211ull;
  }
  return h;
}

}  // namespace

QPLabelling::QPLabelling(std::string seed, int max_level, std::string cache_dir)
    : seed_(std::move(seed)), max_level_(max_level), cache_dir_(std::move(cache_dir)) {
  validateSeed(seed_);
  levels_.push_back(seed_);
  if (!cache_dir_.empty()) loadCache();
}

QPLabelling::QPLabelling(std::string pattern, bool periodic)
    : seed_(std::move(pattern)), max_level_(10), periodic_(periodic) {
  validateSeed(seed_);
  levels_.push_back(seed_);
}

QPLabelling QPLabelling::periodic(std::string pattern) {
  return QPLabelling(std::move(pattern), true);
}

void QPLabelling::ensureCovers(long long need_right, long long need_left) const {
  if (periodic_) return;
  bool grew = false;
  while ((long long)levels_.back().size() < need_right ||
         (long long)levels_.back().size() < need_left) {
    if ((int)levels_.size() >= max_level_)
      throw std::runtime_error("labelling: position outside the level cap (max_level=" +
                               std::to_string(max_level_) + ")");
    const std::string& w = levels_.back();
    std::string x = "a" + formalInverseStr(w) + "b";
    levels_.push_back(w + w + x + w + w);
    grew = true;
  }
  if (grew && !cache_dir_.empty()) saveCache();
}

char QPLabelling::letter(long long doubled) const {
  std::lock_guard<std::mutex> lock(mu_);
  if (periodic_) {
    long long L = (long long)seed_.size();
    return seed_[((doubled % L) + L) % L];
  }
  if (doubled >= 0) {
    ensureCovers(doubled + 1, 0);
    return levels_.back()[(size_t)doubled];
  }
  ensureCovers(0, -doubled);
  const std::string& w = levels_.back();
  return w[w.size() + doubled];
}

std::string QPLabelling::windowLocked(long long lo, long long hi) const {
  if (lo > hi) throw std::invalid_argument("labelling window: lo > hi");
  std::string out;
  out.reserve(hi - lo + 1);
  if (periodic_) {
    long long L = (long long)seed_.size();
    for (long long d = lo; d <= hi; ++d) out.push_back(seed_[((d % L) + L) % L]);
    return out;
  }
  ensureCovers(std::max(0ll, hi + 1), std::max(0ll, -lo));
  const std::string& w = levels_.back();
  for (long long d = lo; d <= hi; ++d)
    out.push_back(d >= 0 ? w[(size_t)d] : w[w.size() + d]);
  return out;
}

std::string QPLabelling::window(long long lo, long long hi) const {
  std::lock_guard<std::mutex> lock(mu_);
  return windowLocked(lo, hi);
}

std::string QPLabelling::levelWord(int k) const {
  std::lock_guard<std::mutex> lock(mu_);
  if (periodic_) throw std::runtime_error("labelling: periodic double has no level words");
  if (k < 1 || k > max_level_) throw std::invalid_argument("labelling: level out of range");
  while ((int)levels_.size() < k) {
    const std::string& w = levels_.back();
    std::string x = "a" + formalInverseStr(w) + "b";
    levels_.push_back(w + w + x + w + w);
  }
  if (!cache_dir_.empty()) saveCache();
  return levels_[k - 1];
}

long long QPLabelling::levelLength(int k) const {
  if (periodic_) return (long long)seed_.size() << k;  // synthetic growth for the double
  long long n = (long long)seed_.size();
  for (int i = 1; i < k; ++i) n = 5 * n + 2;
  return n;
}

LWord QPLabelling::contextUnit(long long n, int k) const {
  return LWord(window(2 * n + 1 - k, 2 * n + 1 + k));
}

LWord QPLabelling::contextPoint(const Dyadic& x, int k) const {
  BigInt n = x.floorInt();
  if (n > BigInt(std::numeric_limits<long long>::max() / 4) ||
      n < BigInt(std::numeric_limits<long long>::min() / 4))
    throw std::domain_error("labelling: position out of range");
  return contextUnit(n.convert_to<long long>(), k);
}

LWord QPLabelling::contextInterval(const Interval& J, int k) const {
  if (!J.lo.isHalfInteger() || !J.hi.isHalfInteger())
    throw std::invalid_argument("contextInterval: endpoints must be half-integers");
  if (J.length() < Dyadic(1))
    throw std::invalid_argument("contextInterval: |J| >= 1 required");
  long long dlo = J.lo.doubled().convert_to<long long>();
  long long dhi = J.hi.doubled().convert_to<long long>();
  // y1 = inf(J) + 1/2, y2 = sup(J) - 1/2; word from y1 - k/2 to y2 + k/2.
  return LWord(window(dlo + 1 - k, dhi - 1 + k));
}

UnitClass QPLabelling::unitClass(long long n, const LWord& W) const {
  if (W.size() % 2 == 0) throw std::invalid_argument("unitClass: |W| must be odd");
  int l = ((int)W.size() - 1) / 2;
  LWord ctx = contextUnit(n, l);
  if (ctx == W) return UnitClass::Pos;
  if (ctx == W.formalInverse()) return UnitClass::Neg;
  return UnitClass::Neither;
}

std::optional<long long> QPLabelling::findUnitWithContext(
    const LWord& w, const std::set<long long>& exclude, long long search_radius) const {
  if (w.size() % 2 == 0) throw std::invalid_argument("findUnitWithContext: |w| must be odd");
  int k = ((int)w.size() - 1) / 2;
  for (long long a = 0; a <= search_radius; ++a) {
    for (long long m : {a, -a}) {
      if (exclude.count(m)) continue;
      if (contextUnit(m, k) == w) return m;
      if (a == 0) break;
    }
  }
  return std::nullopt;
}

const QPLabelling::Factors& QPLabelling::factorsImpl(int length, bool b_center) const {
  if (periodic_) throw std::runtime_error("labelling: factor enumeration needs the QP mode");
  std::lock_guard<std::mutex> lock(mu_);
  auto key = std::make_pair(length, b_center);
  auto it = factor_cache_.find(key);
  if (it != factor_cache_.end()) return *it->second;

  // Saturation window: two levels above the smallest level word longer than
  // the factor, then doubled once; both enumerations must agree.
  int base = 1;
  while (levelLength(base) <= length) ++base;
  int lvl = std::min(base + 2, max_level_);
  long long n = levelLength(lvl);

  auto enumerate = [&](long long half) {
    std::map<LWord, long long> found;
    std::string s = windowLocked(-half, half);
    for (long long i = 0; i + length <= (long long)s.size(); ++i) {
      long long center = -half + i + length / 2;
      bool is_b = ((center % 2) + 2) % 2 == 1;
      if (is_b != b_center) continue;
      LWord w(s.substr(i, length));
      found.emplace(w, center);
    }
    return found;
  };

  auto first = enumerate(n);
  auto second = enumerate(2 * n);
  for (const auto& [w, c] : second)
    if (!first.count(w))
      throw std::runtime_error("labelling: factor enumeration not saturated at level " +
                               std::to_string(lvl));

  auto f = std::make_unique<Factors>();
  for (const auto& [w, c] : first) {
    f->words.push_back(w);
    f->rep_center.emplace(w, c);
  }
  auto& slot = factor_cache_[key];
  slot = std::move(f);
  return *slot;
}

const QPLabelling::Factors& QPLabelling::contextFactors(int radius) const {
  return factorsImpl(2 * radius + 1, true);
}

const QPLabelling::Factors& QPLabelling::oddFactors(int length, bool b_center) const {
  if (length % 2 == 0) throw std::invalid_argument("oddFactors: odd length required");
  return factorsImpl(length, b_center);
}

QPLabelling::QPReport QPLabelling::verifyQuasiPeriodicity(int max_len, int window_level,
                                                          int max_period) const {
  QPReport rep;
  long long half = levelLength(std::min(window_level, max_level_));
  std::string s = window(-half, half);
  rep.window_letters = (long long)s.size();

  for (long long i = 0; i < (long long)s.size(); ++i) {
    long long pos = -half + i;
    if (isAType(s[i]) != (((pos % 2) + 2) % 2 == 0)) rep.parity_ok = false;
  }

  for (int len = 1; len <= max_len; ++len) {
    std::map<std::string, std::pair<long long, long long>> last_and_maxgap;
    std::map<std::string, long long> first_pos;
    for (long long i = 0; i + len <= (long long)s.size(); ++i) {
      std::string w = s.substr(i, len);
      auto it = last_and_maxgap.find(w);
      if (it == last_and_maxgap.end()) {
        last_and_maxgap[w] = {i, 0};
        first_pos[w] = i;
      } else {
        it->second.second = std::max(it->second.second, i - it->second.first);
        it->second.first = i;
      }
    }
    long long worst = 0;
    for (const auto& [w, lg] : last_and_maxgap) {
      long long tail = (long long)s.size() - len - lg.first;  // start slack at the right edge
      long long head = first_pos[w];                          // and at the left edge
      long long d = std::max({lg.second > 0 ? lg.second - 1 : 0, head, tail});
      worst = std::max(worst, d);
      if (!last_and_maxgap.count(formalInverseStr(w))) rep.inverse_closure = false;
    }
    rep.recurrence_gap[len] = worst + len;
  }

  for (long long p = 1; p <= max_period; ++p) {
    bool periodic = true;
    for (long long i = 0; i + p < (long long)s.size(); ++i)
      if (s[i] != s[i + p]) {
        periodic = false;
        break;
      }
    if (periodic) {
      rep.min_period = p;
      break;
    }
  }
  return rep;
}

void QPLabelling::loadCache() {
  namespace fs = std::filesystem;
  fs::path p = fs::path(cache_dir_) /
               ("levels_" + std::to_string(fnv1a(seed_)) + ".txt");
  std::ifstream in(p);
  if (!in) return;
  std::vector<std::string> loaded;
  std::string line;
  while (std::getline(in, line))
    if (!line.empty()) loaded.push_back(line);
  // Trust but verify: the file must reproduce the recursion from our seed.
  if (loaded.empty() || loaded[0] != seed_) return;
  for (size_t i = 1; i < loaded.size(); ++i) {
    const std::string& w = loaded[i - 1];
    if (loaded[i] != w + w + ("a" + formalInverseStr(w) + "b") + w + w) return;
  }
  if (loaded.size() > levels_.size()) levels_ = std::move(loaded);
}

void QPLabelling::saveCache() const {
  namespace fs = std::filesystem;
  std::error_code ec;
  fs::create_directories(cache_dir_, ec);
  fs::path p = fs::path(cache_dir_) /
               ("levels_" + std::to_string(fnv1a(seed_)) + ".txt");
  fs::path tmp = p;
  tmp += ".tmp";
  {
    std::ofstream out(tmp);
    for (const auto& w : levels_) out << w << "\n";
  }
  fs::rename(tmp, p, ec);
}

}  // namespace qpg
