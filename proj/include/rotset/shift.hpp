// One-sided symbol sequences over a finite alphabet.
#ifndef ROTSET_SHIFT_HPP
#define ROTSET_SHIFT_HPP

#include <cstdint>
#include <string>
#include <utility>
#include <variant>
#include <vector>

namespace rotset {

using Symbol = int;

/// Nonempty finite word, read cyclically.
struct PeriodicWord {
  std::vector<Symbol> symbols;

  std::size_t period() const { return symbols.size(); }
  bool operator==(const PeriodicWord&) const = default;
};

/// Deterministic random-access symbol sequence. Only coordinates i >= 0 are
/// modeled; `shifted(k)` yields the stream read from coordinate k on.
class WordStream {
 public:
  struct Periodic {
    PeriodicWord word;
  };
  /// Independent draws with probabilities `bias`, keyed by (seed, index).
  struct Random {
    std::uint64_t seed;
    std::vector<double> bias;
  };
  /// Runs (symbol, length) repeated cyclically.
  struct Block {
    std::vector<std::pair<Symbol, long>> runs;
  };
  using Kind = std::variant<Periodic, Random, Block>;

  static WordStream periodic(std::vector<Symbol> symbols);
  static WordStream random(std::uint64_t seed, std::vector<double> bias);
  static WordStream block(std::vector<std::pair<Symbol, long>> runs);

  Symbol symbol_at(long i) const;
  WordStream shifted(long k) const;

  const Kind& kind() const { return kind_; }
  long offset() const { return offset_; }
  /// Smallest alphabet that contains every symbol the stream can emit.
  int min_alphabet() const;
  /// Periodic streams only: the word read from the current offset.
  bool is_periodic() const { return std::holds_alternative<Periodic>(kind_); }
  PeriodicWord periodic_word() const;

  std::string describe() const;

 private:
  explicit WordStream(Kind kind);

  Kind kind_;
  long offset_ = 0;
  long block_cycle_ = 0;
  std::vector<double> cumulative_;
};

inline Symbol symbol_at(const WordStream& w, long i) { return w.symbol_at(i); }

/// Words of period 1..max_period that are not a repetition of a shorter
/// word, by length then lexicographically. Cyclic rotations are kept.
std::vector<PeriodicWord> periodic_words_upto(int alphabet_size, int max_period);

long count_symbols(const WordStream& w, long n, Symbol target);

/// Counter-based uniform variate in [0, 1) keyed by (seed, index).
double counter_uniform(std::uint64_t seed, std::uint64_t index);

}  // namespace rotset

#endif  // ROTSET_SHIFT_HPP
