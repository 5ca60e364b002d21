#include "soficperm/group.hpp"

#include <algorithm>
#include <deque>
#include <map>
#include <numeric>
#include <regex>
#include <set>
#include <sstream>

#include "soficperm/errors.hpp"

namespace soficperm {

std::string format_element(const Element& e) {
  std::string s = "[";
  for (std::size_t k = 0; k < e.size(); ++k) {
    if (k) s += ",";
    s += std::to_string(e[k]);
  }
  return s + "]";
}

std::optional<std::size_t> Group::word_length(const Element& a, std::size_t cap) const {
  if (is_identity(a)) return 0;
  std::set<Element> seen{identity()};
  std::vector<Element> frontier{identity()};
  for (std::size_t r = 1; r <= cap && !frontier.empty(); ++r) {
    std::vector<Element> next;
    for (const auto& x : frontier)
      for (std::size_t i = 0; i < generator_count(); ++i)
        for (const auto& s : {generator(i), inverse(generator(i))}) {
          auto y = multiply(x, s);
          if (y == a) return r;
          if (seen.insert(y).second) next.push_back(std::move(y));
        }
    frontier = std::move(next);
  }
  return std::nullopt;
}

std::optional<std::vector<Element>> Group::folner_box(std::size_t) const {
  return elements();
}

Element Group::power(const Element& a, std::int64_t k) const {
  Element base = k < 0 ? inverse(a) : a;
  std::uint64_t e = k < 0 ? static_cast<std::uint64_t>(-k) : static_cast<std::uint64_t>(k);
  Element acc = identity();
  while (e) {
    if (e & 1) acc = multiply(acc, base);
    base = multiply(base, base);
    e >>= 1;
  }
  return acc;
}

std::vector<Element> Group::ball(std::size_t radius) const {
  std::vector<std::pair<std::size_t, Element>> found{{0, identity()}};
  std::set<Element> seen{identity()};
  std::vector<Element> frontier{identity()};
  for (std::size_t r = 1; r <= radius && !frontier.empty(); ++r) {
    std::vector<Element> next;
    for (const auto& x : frontier)
      for (std::size_t i = 0; i < generator_count(); ++i)
        for (const auto& s : {generator(i), inverse(generator(i))}) {
          auto y = multiply(x, s);
          if (seen.insert(y).second) {
            found.emplace_back(r, y);
            next.push_back(std::move(y));
          }
        }
    frontier = std::move(next);
  }
  std::sort(found.begin(), found.end());
  std::vector<Element> out;
  out.reserve(found.size());
  for (auto& [r, e] : found) out.push_back(std::move(e));
  return out;
}

Element Group::parse_word(const std::string& word) const {
  static const std::regex token(R"(^([A-Za-z]+)(\d+)(?:\^(-?\d+))?$)");
  Element acc = identity();
  std::istringstream in(word);
  std::string tok;
  while (in >> tok) {
    if (tok == "e") continue;
    std::smatch m;
    if (!std::regex_match(tok, m, token))
      throw InputError("cannot parse word token '" + tok + "'");
    const auto idx = std::stoul(m[2].str());
    if (idx < 1 || idx > generator_count())
      throw InputError("generator index " + m[2].str() + " out of range for " + name());
    const std::int64_t exp = m[3].matched ? std::stoll(m[3].str()) : 1;
    acc = multiply(acc, power(generator(idx - 1), exp));
  }
  return acc;
}

// ---------------------------------------------------------------- Z^k

IntegerLattice::IntegerLattice(std::size_t rank) : rank_(rank) {
  if (rank == 0) throw InputError("lattice rank must be >= 1");
}

std::string IntegerLattice::name() const {
  return rank_ == 1 ? "Z" : "Z^" + std::to_string(rank_);
}

nlohmann::json IntegerLattice::descriptor() const {
  if (rank_ == 1) return {{"type", "integers"}};
  return {{"type", "lattice"}, {"rank", rank_}};
}

Element IntegerLattice::generator(std::size_t i) const {
  Element e(rank_, 0);
  e.at(i) = 1;
  return e;
}

Element IntegerLattice::multiply(const Element& a, const Element& b) const {
  Element c(rank_);
  for (std::size_t k = 0; k < rank_; ++k) c[k] = a[k] + b[k];
  return c;
}

Element IntegerLattice::inverse(const Element& a) const {
  Element c(rank_);
  for (std::size_t k = 0; k < rank_; ++k) c[k] = -a[k];
  return c;
}

void IntegerLattice::validate(const Element& a) const {
  if (a.size() != rank_) throw InputError(name() + ": element needs " + std::to_string(rank_) + " coordinates");
}

std::optional<std::size_t> IntegerLattice::word_length(const Element& a, std::size_t) const {
  std::size_t n = 0;
  for (auto v : a) n += static_cast<std::size_t>(v < 0 ? -v : v);
  return n;
}

std::optional<std::vector<Element>> IntegerLattice::folner_box(std::size_t L) const {
  std::vector<Element> out;
  Element cur(rank_, -static_cast<std::int64_t>(L));
  const auto hi = static_cast<std::int64_t>(L);
  while (true) {
    out.push_back(cur);
    std::size_t k = rank_;
    while (k-- > 0) {
      if (++cur[k] <= hi) break;
      cur[k] = -hi;
      if (k == 0) return out;
    }
  }
}

// ---------------------------------------------------------------- Z/m

CyclicGroup::CyclicGroup(std::int64_t order) : order_(order) {
  if (order < 1) throw InputError("cyclic group order must be >= 1");
}

std::string CyclicGroup::name() const {
  return order_ == 1 ? "1" : "Z/" + std::to_string(order_);
}

nlohmann::json CyclicGroup::descriptor() const {
  if (order_ == 1) return {{"type", "trivial"}};
  return {{"type", "cyclic"}, {"order", order_}};
}

Element CyclicGroup::generator(std::size_t i) const {
  if (i != 0 || order_ == 1) throw InputError(name() + ": no generator " + std::to_string(i + 1));
  return {1};
}

Element CyclicGroup::multiply(const Element& a, const Element& b) const {
  return {(a[0] + b[0]) % order_};
}

Element CyclicGroup::inverse(const Element& a) const { return {(order_ - a[0]) % order_}; }

void CyclicGroup::validate(const Element& a) const {
  if (a.size() != 1 || a[0] < 0 || a[0] >= order_)
    throw InputError(name() + ": element must be a residue in [0, " + std::to_string(order_) + ")");
}

std::optional<std::vector<Element>> CyclicGroup::elements() const {
  std::vector<Element> out;
  for (std::int64_t k = 0; k < order_; ++k) out.push_back({k});
  return out;
}

std::optional<std::size_t> CyclicGroup::word_length(const Element& a, std::size_t) const {
  return static_cast<std::size_t>(std::min(a[0], order_ - a[0]) % order_);
}

// ---------------------------------------------------------------- S_n

SymmetricGroup::SymmetricGroup(std::size_t degree) : degree_(degree) {
  if (degree == 0 || degree > 8) throw InputError("symmetric group degree must be in 1..8");
}

std::string SymmetricGroup::name() const { return "S" + std::to_string(degree_); }

nlohmann::json SymmetricGroup::descriptor() const {
  return {{"type", "symmetric"}, {"degree", degree_}};
}

std::size_t SymmetricGroup::generator_count() const {
  if (degree_ == 1) return 0;
  return degree_ == 2 ? 1 : 2;
}

Element SymmetricGroup::generator(std::size_t i) const {
  Element e = identity();
  if (i == 0 && degree_ >= 2) {
    std::swap(e[0], e[1]);
  } else if (i == 1 && degree_ >= 3) {
    for (std::size_t k = 0; k < degree_; ++k) e[k] = static_cast<std::int64_t>((k + 1) % degree_);
  } else {
    throw InputError(name() + ": no generator " + std::to_string(i + 1));
  }
  return e;
}

Element SymmetricGroup::identity() const {
  Element e(degree_);
  std::iota(e.begin(), e.end(), 0);
  return e;
}

Element SymmetricGroup::multiply(const Element& a, const Element& b) const {
  Element c(degree_);
  for (std::size_t k = 0; k < degree_; ++k) c[k] = a[b[k]];
  return c;
}

Element SymmetricGroup::inverse(const Element& a) const {
  Element c(degree_);
  for (std::size_t k = 0; k < degree_; ++k) c[a[k]] = static_cast<std::int64_t>(k);
  return c;
}

void SymmetricGroup::validate(const Element& a) const {
  if (a.size() != degree_) throw InputError(name() + ": wrong element length");
  std::vector<bool> seen(degree_, false);
  for (auto v : a) {
    if (v < 0 || v >= static_cast<std::int64_t>(degree_) || seen[v])
      throw InputError(name() + ": element is not a permutation");
    seen[v] = true;
  }
}

std::optional<std::vector<Element>> SymmetricGroup::elements() const {
  std::vector<Element> out;
  Element e = identity();
  do out.push_back(e);
  while (std::next_permutation(e.begin(), e.end()));
  return out;
}

// ---------------------------------------------------------------- F_k

FreeGroup::FreeGroup(std::size_t rank) : rank_(rank) {
  if (rank == 0) throw InputError("free group rank must be >= 1");
}

std::string FreeGroup::name() const { return "F" + std::to_string(rank_); }

nlohmann::json FreeGroup::descriptor() const { return {{"type", "free"}, {"rank", rank_}}; }

Element FreeGroup::generator(std::size_t i) const {
  if (i >= rank_) throw InputError(name() + ": no generator " + std::to_string(i + 1));
  return {static_cast<std::int64_t>(i + 1)};
}

Element FreeGroup::multiply(const Element& a, const Element& b) const {
  Element c = a;
  for (auto x : b) {
    if (!c.empty() && c.back() == -x)
      c.pop_back();
    else
      c.push_back(x);
  }
  return c;
}

Element FreeGroup::inverse(const Element& a) const {
  Element c(a.rbegin(), a.rend());
  for (auto& x : c) x = -x;
  return c;
}

void FreeGroup::validate(const Element& a) const {
  for (std::size_t k = 0; k < a.size(); ++k) {
    const auto x = a[k];
    if (x == 0 || static_cast<std::size_t>(x < 0 ? -x : x) > rank_)
      throw InputError(name() + ": bad letter " + std::to_string(x));
    if (k && a[k - 1] == -x) throw InputError(name() + ": word is not reduced");
  }
}

std::optional<std::size_t> FreeGroup::word_length(const Element& a, std::size_t) const {
  return a.size();
}

// ---------------------------------------------------------------- factory

GroupPtr make_group(const nlohmann::json& d) {
  if (!d.is_object() || !d.contains("type")) throw InputError("group descriptor needs a \"type\"");
  const auto type = d.at("type").get<std::string>();
  try {
    if (type == "integers") return std::make_shared<IntegerLattice>(1);
    if (type == "lattice") return std::make_shared<IntegerLattice>(d.at("rank").get<std::size_t>());
    if (type == "cyclic") return std::make_shared<CyclicGroup>(d.at("order").get<std::int64_t>());
    if (type == "trivial") return std::make_shared<CyclicGroup>(1);
    if (type == "symmetric") return std::make_shared<SymmetricGroup>(d.at("degree").get<std::size_t>());
    if (type == "free") return std::make_shared<FreeGroup>(d.at("rank").get<std::size_t>());
  } catch (const nlohmann::json::exception& e) {
    throw InputError(std::string("bad group descriptor: ") + e.what());
  }
  throw InputError("unknown group type '" + type + "'");
}

Element element_from_json(const Group& g, const nlohmann::json& j) {
  if (j.is_string()) return g.parse_word(j.get<std::string>());
  if (j.is_array()) {
    Element e;
    for (const auto& v : j) {
      if (!v.is_number_integer()) throw InputError("element arrays must hold integers");
      e.push_back(v.get<std::int64_t>());
    }
    g.validate(e);
    return e;
  }
  throw InputError("group element must be a word string or a normal-form array");
}

}  // namespace soficperm
