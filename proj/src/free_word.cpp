#include "soficperm/free_word.hpp"

#include <regex>
#include <sstream>

#include "soficperm/errors.hpp"

namespace soficperm {

FreeWord::FreeWord(std::vector<Letter> letters) : letters_(std::move(letters)) {
  for (const auto& l : letters_)
    if (l.exponent != 1 && l.exponent != -1) throw InputError("letter exponents must be +1 or -1");
}

FreeWord FreeWord::parse(const std::string& text) {
  static const std::regex token(R"(^x(\d+)(?:\^(-?\d+))?$)");
  std::istringstream in(text);
  std::vector<Letter> out;
  std::string tok;
  while (in >> tok) {
    if (tok == "e") continue;
    std::smatch m;
    if (!std::regex_match(tok, m, token)) throw InputError("bad letter '" + tok + "' in word '" + text + "'");
    const long idx = std::stol(m[1]);
    if (idx < 1) throw InputError("generators are numbered from x1");
    const long power = m[2].matched ? std::stol(m[2]) : 1;
    if (power == 0 || std::labs(power) > 1'000'000) throw InputError("bad exponent in '" + tok + "'");
    for (long k = 0; k < std::labs(power); ++k)
      out.push_back({static_cast<std::size_t>(idx - 1), power > 0 ? 1 : -1});
  }
  return FreeWord(std::move(out));
}

bool FreeWord::is_reduced() const {
  for (std::size_t k = 1; k < letters_.size(); ++k)
    if (letters_[k].generator == letters_[k - 1].generator &&
        letters_[k].exponent == -letters_[k - 1].exponent)
      return false;
  return true;
}

std::size_t FreeWord::generator_span() const {
  std::size_t span = 0;
  for (const auto& l : letters_) span = std::max(span, l.generator + 1);
  return span;
}

FreeWord FreeWord::reduced() const {
  std::vector<Letter> stack;
  for (const auto& l : letters_) {
    if (!stack.empty() && stack.back().generator == l.generator && stack.back().exponent == -l.exponent)
      stack.pop_back();
    else
      stack.push_back(l);
  }
  FreeWord w;
  w.letters_ = std::move(stack);
  return w;
}

FreeWord FreeWord::inverse() const {
  FreeWord w;
  for (auto it = letters_.rbegin(); it != letters_.rend(); ++it) w.letters_.push_back({it->generator, -it->exponent});
  return w;
}

FreeWord FreeWord::operator*(const FreeWord& rhs) const {
  FreeWord w = *this;
  w.letters_.insert(w.letters_.end(), rhs.letters_.begin(), rhs.letters_.end());
  return w;
}

std::string FreeWord::to_string() const {
  if (letters_.empty()) return "e";
  std::string out;
  for (const auto& l : letters_) {
    if (!out.empty()) out += ' ';
    out += 'x' + std::to_string(l.generator + 1);
    if (l.exponent < 0) out += "^-1";
  }
  return out;
}

Permutation evaluate(const FreeWord& w, std::span<const Permutation> generators,
                     std::span<const Permutation> inverses) {
  if (w.generator_span() > generators.size()) throw InputError("word uses more generators than supplied");
  if (generators.empty()) throw InputError("evaluate needs at least one generator for the degree");
  const std::size_t d = generators.front().degree();
  std::vector<std::uint32_t> img(d);
  // Apply letters right to left to each point.
  for (std::size_t k = 0; k < d; ++k) {
    std::uint32_t x = static_cast<std::uint32_t>(k);
    for (auto it = w.letters().rbegin(); it != w.letters().rend(); ++it)
      x = (it->exponent > 0 ? generators[it->generator] : inverses[it->generator])[x];
    img[k] = x;
  }
  return from_trusted_image(std::move(img));
}

Permutation evaluate(const FreeWord& w, std::span<const Permutation> generators) {
  std::vector<Permutation> inv;
  inv.reserve(generators.size());
  for (const auto& g : generators) inv.push_back(g.inverse());
  return evaluate(w, generators, inv);
}

}  // namespace soficperm
