#include "soficperm/rng.hpp"

#include <numeric>

namespace soficperm {

std::uint64_t derive_seed(std::uint64_t master, std::initializer_list<std::uint64_t> path) {
  std::uint64_t h = mix64(master ^ 0x6A09E667F3BCC909ULL);
  for (auto p : path) h = mix64(h ^ mix64(p + 0x9E3779B97F4A7C15ULL));
  return h;
}

void random_permutation_into(std::vector<std::uint32_t>& image, CounterRng& rng) {
  std::iota(image.begin(), image.end(), 0u);
  for (std::size_t k = image.size(); k > 1; --k) {
    const auto j = rng.below(k);
    std::swap(image[k - 1], image[j]);
  }
}

Permutation random_permutation(std::size_t degree, CounterRng& rng) {
  std::vector<std::uint32_t> img(degree);
  random_permutation_into(img, rng);
  return from_trusted_image(std::move(img));
}

}  // namespace soficperm
