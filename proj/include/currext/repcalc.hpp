#pragma once

#include <cstdint>
#include <list>
#include <map>
#include <memory>
#include <mutex>
#include <string>
#include <unordered_map>
#include <utility>
#include <vector>

#include "currext/rootsys.hpp"

namespace currext {

/// Weight multiplicities of V(lambda). Only dominant weights are stored;
/// everything else follows from Weyl invariance.
class WeightMultiplicityTable {
 public:
  WeightMultiplicityTable(Weight highest, std::map<Weight, std::int64_t> dominant)
      : highest_(std::move(highest)), dominant_(std::move(dominant)) {}

  const Weight& highest() const { return highest_; }
  const std::map<Weight, std::int64_t>& dominant() const { return dominant_; }

  std::int64_t multiplicity(const RootDatum& rd, const Weight& mu) const {
    auto it = dominant_.find(dominant_conjugate(rd, mu));
    return it == dominant_.end() ? 0 : it->second;
  }

  /// Every weight with its multiplicity (orbit expansion of the dominant table).
  std::map<Weight, std::int64_t> expanded(const RootDatum& rd) const {
    std::map<Weight, std::int64_t> out;
    for (const auto& [mu, m] : dominant_)
      for (auto& w : weyl_orbit(rd, mu)) out.emplace(std::move(w), m);
    return out;
  }

  std::int64_t total_dimension(const RootDatum& rd) const {
    std::int64_t total = 0;
    for (const auto& [mu, m] : dominant_) total += m * static_cast<std::int64_t>(weyl_orbit(rd, mu).size());
    return total;
  }

 private:
  Weight highest_;
  std::map<Weight, std::int64_t> dominant_;
};

using TensorDecomposition = std::map<Weight, std::int64_t>;

/// Freudenthal's recursion
///   ((lambda+rho)^2 - (mu+rho)^2) m(mu) = 2 sum_{alpha>0} sum_{k>=1} m(mu+k alpha) (mu+k alpha, alpha)
/// over the dominant weights below lambda, highest first.
inline WeightMultiplicityTable weight_multiplicities(const RootDatum& rd, const Weight& lambda) {
  rd.check_dominant(lambda);
  const auto& roots = rd.positive_roots();
  const auto& root_weights = rd.positive_root_weights();

  // Dominant weights of V(lambda): closure of lambda under subtracting positive
  // roots while staying dominant, tagged with their depth below lambda.
  std::map<Weight, std::int64_t> depth{{lambda, 0}};
  std::vector<Weight> frontier{lambda};
  while (!frontier.empty()) {
    std::vector<Weight> next;
    for (const auto& mu : frontier) {
      for (std::size_t r = 0; r < roots.size(); ++r) {
        Weight nu = mu - root_weights[r];
        if (!nu.is_dominant() || depth.count(nu)) continue;
        std::int64_t h = 0;
        for (auto c : roots[r]) h += c;
        depth.emplace(nu, depth[mu] + h);
        next.push_back(std::move(nu));
      }
    }
    frontier = std::move(next);
  }
  std::vector<std::pair<std::int64_t, Weight>> ordered;
  for (const auto& [w, d] : depth) ordered.emplace_back(d, w);
  std::sort(ordered.begin(), ordered.end());

  const Weight rho = rd.rho();
  const std::int64_t top = rd.scaled_form(lambda + rho, lambda + rho);
  std::map<Weight, std::int64_t> mult;
  mult[lambda] = 1;
  for (std::size_t i = 1; i < ordered.size(); ++i) {
    const Weight& mu = ordered[i].second;
    std::int64_t sum = 0;
    for (std::size_t r = 0; r < roots.size(); ++r) {
      Weight nu = mu;
      for (;;) {
        nu += root_weights[r];
        auto it = mult.find(dominant_conjugate(rd, nu));
        if (it == mult.end()) break;
        sum += it->second * rd.pair_with_root(nu, roots[r]);
      }
    }
    const std::int64_t denom = top - rd.scaled_form(mu + rho, mu + rho);
    const std::int64_t numer = 2 * rd.form_scale() * sum;
    if (denom <= 0 || numer % denom != 0)
      fail(ErrorKind::ComputationError, "Freudenthal recursion produced a non-integer multiplicity");
    mult[mu] = numer / denom;
  }
  return WeightMultiplicityTable(lambda, std::move(mult));
}

/// Weyl's dimension formula, prod_{alpha>0} (lambda+rho, alpha) / (rho, alpha).
inline std::uint64_t irrep_dimension(const RootDatum& rd, const Weight& lambda) {
  rd.check_dominant(lambda);
  const Weight rho = rd.rho();
  Integer num = 1, den = 1;
  for (const auto& beta : rd.positive_roots()) {
    num *= rd.pair_with_root(lambda + rho, beta);
    den *= rd.pair_with_root(rho, beta);
  }
  Integer q = num / den;
  if (q * den != num || !q.fits_ulong_p())
    fail(ErrorKind::ComputationError, "dimension of V" + lambda.str() + " does not fit");
  return q.get_ui();
}

/// Full character of V(lambda) as a flat list of (weight, multiplicity).
struct Character {
  WeightMultiplicityTable table;
  std::vector<std::pair<Weight, std::int64_t>> weights;
};

inline std::shared_ptr<const Character> make_character(const RootDatum& rd, const Weight& lambda) {
  auto table = weight_multiplicities(rd, lambda);
  auto full = table.expanded(rd);
  return std::make_shared<const Character>(
      Character{std::move(table), {full.begin(), full.end()}});
}

/// LRU cache of characters keyed by (type, highest weight). Safe for
/// concurrent use; a miss computes outside the lock, so two threads may race to
/// fill the same key, and both produce the same value.
class MultiplicityCache {
 public:
  explicit MultiplicityCache(std::size_t capacity = 512) : capacity_(capacity) {}

  std::shared_ptr<const Character> get(const RootDatum& rd, const Weight& lambda) {
    if (capacity_ == 0) return make_character(rd, lambda);
    const std::string key = rd.type().name() + lambda.str();
    {
      std::lock_guard<std::mutex> lock(mutex_);
      auto it = index_.find(key);
      if (it != index_.end()) {
        lru_.splice(lru_.begin(), lru_, it->second.second);
        return it->second.first;
      }
    }
    auto value = make_character(rd, lambda);
    std::lock_guard<std::mutex> lock(mutex_);
    if (!index_.count(key)) {
      lru_.push_front(key);
      index_.emplace(key, std::make_pair(value, lru_.begin()));
      while (index_.size() > capacity_) {
        index_.erase(lru_.back());
        lru_.pop_back();
      }
    }
    return value;
  }

  std::size_t capacity() const { return capacity_; }
  std::size_t size() const {
    std::lock_guard<std::mutex> lock(mutex_);
    return index_.size();
  }

 private:
  std::size_t capacity_;
  mutable std::mutex mutex_;
  std::list<std::string> lru_;
  std::unordered_map<std::string, std::pair<std::shared_ptr<const Character>, std::list<std::string>::iterator>>
      index_;
};

inline std::shared_ptr<const Character> character_of(const RootDatum& rd, const Weight& lambda,
                                                     MultiplicityCache* cache) {
  return cache ? cache->get(rd, lambda) : make_character(rd, lambda);
}

/// V(lambda) (x) V(mu) by Klimyk's formula: each weight delta of V(mu)
/// contributes sign(w) m_mu(delta) to V(w(lambda+delta+rho) - rho).
/// The sum runs over the weights of the second factor.
inline TensorDecomposition tensor_decomposition(const RootDatum& rd, const Weight& lambda, const Weight& mu,
                                                MultiplicityCache* cache = nullptr) {
  rd.check_dominant(lambda);
  rd.check_dominant(mu);
  auto ch = character_of(rd, mu, cache);
  const Weight rho = rd.rho();
  TensorDecomposition out;
  for (const auto& [delta, m] : ch->weights) {
    SignedWeight sw = dominant_conjugate_shifted(rd, lambda + delta + rho);
    if (sw.sign == 0) continue;
    out[sw.weight - rho] += sw.sign * m;
  }
  for (auto it = out.begin(); it != out.end();) {
    if (it->second < 0) fail(ErrorKind::ComputationError, "negative tensor multiplicity");
    it = it->second == 0 ? out.erase(it) : std::next(it);
  }
  return out;
}

inline std::int64_t tensor_multiplicity(const RootDatum& rd, const Weight& lambda, const Weight& mu,
                                        const Weight& nu, MultiplicityCache* cache = nullptr) {
  rd.check_dominant(nu);
  rd.check_dominant(lambda);
  rd.check_dominant(mu);
  auto ch = character_of(rd, mu, cache);
  const Weight rho = rd.rho();
  const Weight target = nu + rho;
  std::int64_t total = 0;
  for (const auto& [delta, m] : ch->weights) {
    SignedWeight sw = dominant_conjugate_shifted(rd, lambda + delta + rho);
    if (sw.sign != 0 && sw.weight == target) total += sw.sign * m;
  }
  return total;
}

/// dim Hom_g(g (x) V(lambda), V(mu)): the multiplicity of V(mu) in
/// (sum over simple ideals of the adjoint module) (x) V(lambda).
inline std::int64_t hom_g_adjoint_dimension(const RootDatum& rd, const Weight& lambda, const Weight& mu,
                                            MultiplicityCache* cache = nullptr) {
  rd.check_dominant(lambda);
  rd.check_dominant(mu);
  std::int64_t total = 0;
  for (std::size_t f = 0; f < rd.factor_count(); ++f)
    total += tensor_multiplicity(rd, lambda, rd.highest_root_of_factor(f), mu, cache);
  return total;
}

inline std::int64_t hom_g_adjoint_dimension(const SemisimpleType& t, const Weight& lambda, const Weight& mu,
                                            MultiplicityCache* cache = nullptr) {
  return hom_g_adjoint_dimension(RootDatum(t), lambda, mu, cache);
}

}  // namespace currext
