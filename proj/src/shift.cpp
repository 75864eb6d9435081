#include "rotset/shift.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <sstream>
#include <stdexcept>

namespace rotset {

namespace {

std::uint64_t splitmix64(std::uint64_t x) {
  x += 0x9e3779b97f4a7c15ULL;
  x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
  x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
  return x ^ (x >> 31);
}

long floor_mod(long a, long m) {
  long r = a % m;
  return r < 0 ? r + m : r;
}

bool is_proper_power(const std::vector<Symbol>& w) {
  const std::size_t n = w.size();
  for (std::size_t d = 1; d < n; ++d) {
    if (n % d != 0) continue;
    bool repeats = true;
    for (std::size_t i = d; i < n && repeats; ++i) repeats = w[i] == w[i - d];
    if (repeats) return true;
  }
  return false;
}

}  // namespace

double counter_uniform(std::uint64_t seed, std::uint64_t index) {
  const std::uint64_t bits = splitmix64(splitmix64(seed) ^ index);
  return double(bits >> 11) * 0x1.0p-53;
}

WordStream::WordStream(Kind kind) : kind_(std::move(kind)) {}

WordStream WordStream::periodic(std::vector<Symbol> symbols) {
  if (symbols.empty()) throw std::invalid_argument("periodic word must be nonempty");
  for (Symbol s : symbols)
    if (s < 0) throw std::invalid_argument("symbols must be nonnegative");
  return WordStream(Periodic{PeriodicWord{std::move(symbols)}});
}

WordStream WordStream::random(std::uint64_t seed, std::vector<double> bias) {
  if (bias.empty()) throw std::invalid_argument("bias must be nonempty");
  double total = 0.0;
  for (double b : bias) {
    if (!(b >= 0.0)) throw std::invalid_argument("bias entries must be nonnegative");
    total += b;
  }
  if (std::abs(total - 1.0) > 1e-12)
    throw std::invalid_argument("bias must sum to 1");
  WordStream w(Random{seed, bias});
  std::partial_sum(bias.begin(), bias.end(), std::back_inserter(w.cumulative_));
  return w;
}

WordStream WordStream::block(std::vector<std::pair<Symbol, long>> runs) {
  if (runs.empty()) throw std::invalid_argument("block word needs at least one run");
  long cycle = 0;
  for (const auto& [s, len] : runs) {
    if (s < 0) throw std::invalid_argument("symbols must be nonnegative");
    if (len <= 0) throw std::invalid_argument("block runs must be positive");
    cycle += len;
  }
  WordStream w(Block{std::move(runs)});
  w.block_cycle_ = cycle;
  return w;
}

Symbol WordStream::symbol_at(long i) const {
  const long j = i + offset_;
  if (const auto* p = std::get_if<Periodic>(&kind_))
    return p->word.symbols[floor_mod(j, long(p->word.period()))];
  if (const auto* r = std::get_if<Random>(&kind_)) {
    const double u = counter_uniform(r->seed, std::uint64_t(j));
    const auto it = std::upper_bound(cumulative_.begin(), cumulative_.end(), u);
    // Rounding in the partial sums can leave u above the last entry.
    Symbol s = Symbol(std::min<std::ptrdiff_t>(it - cumulative_.begin(),
                                               std::ptrdiff_t(cumulative_.size()) - 1));
    while (r->bias[s] == 0.0 && s > 0) --s;
    return s;
  }
  const auto& runs = std::get<Block>(kind_).runs;
  long pos = floor_mod(j, block_cycle_);
  for (const auto& [s, len] : runs) {
    if (pos < len) return s;
    pos -= len;
  }
  return runs.back().first;
}

WordStream WordStream::shifted(long k) const {
  WordStream w = *this;
  w.offset_ += k;
  return w;
}

int WordStream::min_alphabet() const {
  if (const auto* p = std::get_if<Periodic>(&kind_))
    return 1 + *std::max_element(p->word.symbols.begin(), p->word.symbols.end());
  if (const auto* r = std::get_if<Random>(&kind_)) {
    int last = 0;
    for (std::size_t s = 0; s < r->bias.size(); ++s)
      if (r->bias[s] > 0) last = int(s);
    return last + 1;
  }
  int top = 0;
  for (const auto& run : std::get<Block>(kind_).runs) top = std::max(top, run.first);
  return top + 1;
}

PeriodicWord WordStream::periodic_word() const {
  const auto* p = std::get_if<Periodic>(&kind_);
  if (!p) throw std::logic_error("stream is not periodic");
  PeriodicWord w;
  for (std::size_t i = 0; i < p->word.period(); ++i) w.symbols.push_back(symbol_at(long(i)));
  return w;
}

std::string WordStream::describe() const {
  std::ostringstream out;
  if (const auto* p = std::get_if<Periodic>(&kind_)) {
    out << "periodic:";
    for (Symbol s : p->word.symbols) out << s;
  } else if (const auto* r = std::get_if<Random>(&kind_)) {
    out << "random:" << r->seed << ":";
    for (std::size_t i = 0; i < r->bias.size(); ++i) out << (i ? "/" : "") << r->bias[i];
  } else {
    out << "block:";
    for (const auto& [s, len] : std::get<Block>(kind_).runs) out << s << "^" << len;
  }
  if (offset_ != 0) out << "+" << offset_;
  return out.str();
}

std::vector<PeriodicWord> periodic_words_upto(int alphabet_size, int max_period) {
  if (alphabet_size < 1 || max_period < 1)
    throw std::invalid_argument("alphabet_size and max_period must be >= 1");
  std::vector<PeriodicWord> out;
  for (int len = 1; len <= max_period; ++len) {
    std::vector<Symbol> w(len, 0);
    while (true) {
      if (!is_proper_power(w)) out.push_back(PeriodicWord{w});
      int pos = len - 1;
      while (pos >= 0 && w[pos] == alphabet_size - 1) w[pos--] = 0;
      if (pos < 0) break;
      ++w[pos];
    }
  }
  return out;
}

long count_symbols(const WordStream& w, long n, Symbol target) {
  long count = 0;
  for (long i = 0; i < n; ++i) count += w.symbol_at(i) == target;
  return count;
}

}  // namespace rotset
