#pragma once

#include <cstddef>
#include <cstdint>
#include <map>
#include <memory>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "soficperm/group.hpp"
#include "soficperm/moment.hpp"
#include "soficperm/perm.hpp"
#include "soficperm/quasi_action.hpp"
#include "soficperm/rational.hpp"
#include "soficperm/tile.hpp"

namespace soficperm {

/// H -> ambient, given by the images of H's generators. Finite H is
/// tabulated; an infinite H is only supported as the identity embedding.
class SubgroupEmbedding {
 public:
  SubgroupEmbedding(GroupPtr subgroup, GroupPtr ambient, std::vector<Element> generator_images);
  static SubgroupEmbedding trivial(GroupPtr ambient);
  static SubgroupEmbedding identity(GroupPtr group);

  const Group& subgroup() const { return *sub_; }
  const GroupPtr& subgroup_ptr() const { return sub_; }
  const Group& ambient() const { return *amb_; }
  const GroupPtr& ambient_ptr() const { return amb_; }

  Element image(const Element& h) const;
  bool contains(const Element& g) const;
  /// The unique h with image(h) == g, if any.
  std::optional<Element> preimage(const Element& g) const;

 private:
  GroupPtr sub_, amb_;
  bool identity_ = false;
  std::map<Element, Element> forward_, backward_;
};

using EmbeddingPtr = std::shared_ptr<const SubgroupEmbedding>;

struct AlignmentReport {
  Rational source_defect{0};    // eps: worst defect of the input on F
  Rational uncovered{0};        // delta = 1 - |Y| / |X|
  Rational tiling_penalty{0};   // |K T \ T| / |T|
  Rational budget{0};           // eps + 6 delta / (1 - delta) + 6 * tiling_penalty
  DefectReport measured;        // of the aligned action on F
};

/// A quasi-action of a factor on T x Z, point (t, z) at index t * |Z| + z,
/// acting as rho_h x id_Z for h in K.
struct TileAlignedQA {
  QuasiAction action;
  EmbeddingPtr embedding;        // H -> this factor
  std::vector<Element> tile;     // T inside H, in index order
  std::size_t aux_size = 0;      // |Z|
  std::vector<Element> K;        // inside H
  std::vector<Element> measure_set;  // F inside the factor
  AlignmentReport report;

  std::size_t tile_size() const { return tile.size(); }
  /// rho_h completed to a permutation of T (ascending completion).
  Permutation tile_action(const Element& h) const;
};

/// Transports qa onto T x Z by choosing orbit representatives greedily,
/// then overrides every h in K with rho_h x id_Z. F measures defects and
/// must be closed under g1^{-1} g2 inside qa's domain. Throws
/// UnsupportedGroup for an infinite H that is not the identity embedding,
/// AlignmentError when no representative fits.
TileAlignedQA align_to_tile(const QuasiAction& qa, EmbeddingPtr embedding, const Tile& tile,
                            std::span<const Element> K, std::span<const Element> F);

/// Z -> Z x {0..factor-1}.
TileAlignedQA amplify(const TileAlignedQA& aq, std::size_t factor);

/// Blocks B_{g,t,t'} of degree |Z|, block (t, t') at index t * |T| + t'.
struct BlockDecomposition {
  Element element;
  std::size_t tile_size = 0;
  std::size_t aux_size = 0;
  std::vector<SubPermMatrix> blocks;

  const SubPermMatrix& block(std::size_t t, std::size_t t_prime) const { return blocks[t * tile_size + t_prime]; }
  Permutation reassemble() const;
  Rational max_block_trace() const;
};

/// Throws DomainError when g is outside the domain.
BlockDecomposition extract_blocks(const TileAlignedQA& aq, const Element& g);

/// 2 eta |T| with eta the measured worst defect.
Rational block_trace_ceiling(const TileAlignedQA& aq);

/// g_1 .. g_{2n}: odd positions in factor 1, even positions in factor 2.
struct AlternatingWord {
  std::vector<Element> elements;
  std::size_t half_length() const { return elements.size() / 2; }
};

struct VanishingReport {
  McEstimate estimate;
  Rational ceiling{0};         // |T|^{2n-1} (C_n 2 eta |T| + D_n / |Z|)
  Rational block_ceiling{0};   // same with the largest block trace in place of 2 eta |T|
  std::optional<Rational> exact;
  bool ceiling_applies = false;  // |Z| >= 4n
  /// estimate <= ceiling + 4 std errors (true when the ceiling does not apply).
  bool within_ceiling() const;
};

/// Monte Carlo over V = 1 (x) U; sample i draws U from derive_seed(seed, {i}).
/// Checks the alternation and H-membership preconditions (InputError) and
/// that the two actions share T and Z (AlignmentError). `with_exact` adds
/// the block-sum route through exact_moment.
VanishingReport certify_vanishing(const TileAlignedQA& qa1, const TileAlignedQA& qa2, const AlternatingWord& word,
                                  std::size_t samples, std::uint64_t seed, unsigned workers = 1,
                                  bool with_exact = false, const EngineConfig& cfg = {});

/// Trace of the word in the block-diagonal object that runs every U in
/// Sym(Z) side by side. |Z| <= 6.
Rational derandomized_trace(const TileAlignedQA& qa1, const TileAlignedQA& qa2, const AlternatingWord& word);

/// One syllable of a word in the amalgamated product; factor is 1 or 2.
struct Syllable {
  int factor = 1;
  Element element;
  friend bool operator==(const Syllable&, const Syllable&) = default;
};

using AmalgamWord = std::vector<Syllable>;

enum class WordCase { a, b, c, d };

std::string to_string(WordCase c);

/// Gamma_1 *_H Gamma_2 with H embedded in both factors.
class Amalgam {
 public:
  Amalgam(EmbeddingPtr first, EmbeddingPtr second);

  const Group& factor(int i) const;
  const SubgroupEmbedding& embedding(int i) const;

  /// "1:g1 2:g1^-1"; within a syllable, letters are joined by '*'.
  AmalgamWord parse(const std::string& text) const;
  std::string format(const AmalgamWord& w) const;

  /// Drops identities, merges neighbours from the same factor and moves
  /// H-syllables across until the word alternates with no H-syllables
  /// (a lone element of H is kept as a factor-1 syllable).
  AmalgamWord reduce(const AmalgamWord& w) const;
  bool in_subgroup(const Syllable& s) const;

  /// For a reduced nontrivial word. Throws InputError for the empty word.
  WordCase classify(const AmalgamWord& reduced) const;

  /// w = c w' c^{-1} with w' in case (a), (b) or (c).
  struct Conjugation {
    AmalgamWord conjugator;
    AmalgamWord core;
  };
  Conjugation conjugate_to_core(const AmalgamWord& reduced) const;

  AmalgamWord inverse(const AmalgamWord& w) const;

  /// Reduced words with 1..max_syllables syllables, each syllable drawn from
  /// the finite factor minus H. Throws UnsupportedGroup for infinite factors.
  std::vector<AmalgamWord> reduced_words_up_to(std::size_t max_syllables) const;

 private:
  EmbeddingPtr emb_[2];
};

/// psi_1 = phi_1'', psi_2 = V phi_2'' V* for one sampled V = 1 (x) U.
class AmalgamQA {
 public:
  AmalgamQA(std::shared_ptr<const TileAlignedQA> first, std::shared_ptr<const TileAlignedQA> second,
            Permutation V, std::uint64_t seed);

  std::size_t degree() const { return V_.degree(); }
  std::uint64_t seed() const { return seed_; }
  const Permutation& conjugator() const { return V_; }

  Permutation syllable(const Syllable& s) const;
  /// psi(s_1) psi(s_2) ... in order.
  Permutation product(const AmalgamWord& w) const;

 private:
  std::shared_ptr<const TileAlignedQA> qa_[2];
  Permutation V_, V_inv_;
  std::uint64_t seed_ = 0;
};

/// Checks that both sides share T, Z and K and agree on K, then draws U
/// from CounterRng(seed). Throws AlignmentError otherwise.
AmalgamQA build_amalgam(std::shared_ptr<const TileAlignedQA> first, std::shared_ptr<const TileAlignedQA> second,
                        std::uint64_t seed);

struct WordDistance {
  AmalgamWord reduced;
  WordCase word_case = WordCase::a;
  Amalgam::Conjugation route;
  std::vector<std::uint64_t> seeds;
  std::vector<Rational> dist;         // via the conjugation route
  std::vector<Rational> direct_dist;  // psi of the reduced word as a product
  double mean_dist = 0;
};

/// Throws InputError for a word that reduces to the identity.
WordDistance check_word_distance(const Amalgam& amalgam, std::span<const AmalgamQA> per_seed, const AmalgamWord& w);

}  // namespace soficperm
