#include "halftime/analysis.hpp"

#include <algorithm>
#include <cmath>
#include <iomanip>
#include <random>
#include <sstream>

#include "halftime/ehc.hpp"
#include "halftime/errors.hpp"
#include "halftime/seed.hpp"
#include "halftime/tree.hpp"

namespace halftime::analysis {

std::int64_t bareiss_determinant(TransformMatrix m) {
  const Eigen::Index n = m.rows();
  if (n != m.cols()) throw UsageError("determinant of a non-square matrix");
  if (n == 0) return 1;
  int sign = 1;
  __int128 prev = 1;
  Eigen::Matrix<__int128, Eigen::Dynamic, Eigen::Dynamic> a = m.cast<__int128>();
  for (Eigen::Index i = 0; i + 1 < n; ++i) {
    if (a(i, i) == 0) {
      Eigen::Index swap = i + 1;
      while (swap < n && a(swap, i) == 0) ++swap;
      if (swap == n) return 0;
      a.row(i).swap(a.row(swap));
      sign = -sign;
    }
    for (Eigen::Index r = i + 1; r < n; ++r) {
      for (Eigen::Index c = i + 1; c < n; ++c) {
        a(r, c) = (a(r, c) * a(i, i) - a(r, i) * a(i, c)) / prev;  // exact
      }
    }
    prev = a(i, i);
  }
  return static_cast<std::int64_t>(sign * a(n - 1, n - 1));
}

int two_adic_valuation(std::int64_t nonzero) {
  if (nonzero == 0) throw UsageError("2-adic valuation of zero");
  int v = 0;
  auto x = static_cast<std::uint64_t>(nonzero < 0 ? -nonzero : nonzero);
  while ((x & 1u) == 0) x >>= 1, ++v;
  return v;
}

ValuationReport valuation_report(const TransformMatrix& t, std::size_t k) {
  const auto e = static_cast<std::size_t>(t.cols());
  if (static_cast<std::size_t>(t.rows()) != k || k == 0 || k > e) {
    throw UsageError("valuation needs a k x e matrix with 1 <= k <= e");
  }
  ValuationReport report;
  report.p = -1;
  std::vector<bool> chosen(e, false);
  std::fill(chosen.begin(), chosen.begin() + static_cast<std::ptrdiff_t>(k), true);
  std::vector<Eigen::Index> cols(k);
  do {
    for (std::size_t c = 0, n = 0; c < e; ++c) {
      if (chosen[c]) cols[n++] = static_cast<Eigen::Index>(c);
    }
    TransformMatrix sub(static_cast<Eigen::Index>(k), static_cast<Eigen::Index>(k));
    for (std::size_t j = 0; j < k; ++j) sub.col(static_cast<Eigen::Index>(j)) = t.col(cols[j]);
    const std::int64_t det = bareiss_determinant(sub);
    if (det == 0) {
      std::ostringstream msg;
      msg << "singular column subset {";
      for (std::size_t j = 0; j < k; ++j) msg << (j ? "," : "") << cols[j];
      msg << "}";
      throw ValidationError(msg.str());
    }
    const int v = two_adic_valuation(det);
    if (v > report.p) {
      report.p = v;
      report.worst_columns = cols;
    }
    ++report.subsets;
  } while (std::prev_permutation(chosen.begin(), chosen.end()));
  return report;
}

namespace {

std::size_t encoded_weight(const Blocks<std::uint64_t>& enc, Eigen::Index lane, std::size_t w, std::size_t items) {
  std::size_t weight = 0;
  for (std::size_t i = 0; i < items; ++i) {
    for (std::size_t c = 0; c < w; ++c) {
      if (enc(lane, static_cast<Eigen::Index>(i * w + c)) != 0) {
        ++weight;
        break;
      }
    }
  }
  return weight;
}

}  // namespace

DistanceReport verify_min_distance(const ErasureCode& code, unsigned word_bits, std::uint64_t random_trials,
                                   std::uint64_t rng_seed) {
  const std::size_t d = code.arity_in(), e = code.arity_out(), w = code.item_words();
  const std::size_t bits = d * w * word_bits;
  if (word_bits < 1 || word_bits > 8 || bits > 28) {
    throw UsageError("exhaustive distance check needs 1 <= word_bits <= 8 and d*w*word_bits <= 28");
  }
  DistanceReport report;
  report.declared = code.min_distance();
  report.exhaustive = e;
  report.random = e;

  // Reduced width: each lane is one input pattern.
  constexpr Eigen::Index kBatch = 4096;
  const std::uint64_t total = (std::uint64_t{1} << bits) - 1;
  const unsigned word_mask = (1u << word_bits) - 1;
  for (std::uint64_t first = 1; first <= total; first += kBatch) {
    const auto lanes = static_cast<Eigen::Index>(std::min<std::uint64_t>(kBatch, total - first + 1));
    Blocks<std::uint8_t> items(lanes, static_cast<Eigen::Index>(d * w));
    for (Eigen::Index lane = 0; lane < lanes; ++lane) {
      const std::uint64_t pattern = first + static_cast<std::uint64_t>(lane);
      for (std::size_t word = 0; word < d * w; ++word) {
        items(lane, static_cast<Eigen::Index>(word)) =
            static_cast<std::uint8_t>((pattern >> (word * word_bits)) & word_mask);
      }
    }
    const Blocks<std::uint8_t> enc = encode(items, code);
    for (Eigen::Index lane = 0; lane < lanes; ++lane) {
      std::size_t weight = 0;
      for (std::size_t i = 0; i < e; ++i) {
        if ((enc.row(lane).segment(static_cast<Eigen::Index>(i * w), static_cast<Eigen::Index>(w)) != 0).any()) {
          ++weight;
        }
      }
      report.exhaustive = std::min(report.exhaustive, weight);
    }
    report.patterns += static_cast<std::uint64_t>(lanes);
  }

  // Full width: differences touching fewer than k inputs are the only ones
  // that can fall short, so the trials concentrate there.
  std::mt19937_64 rng(rng_seed);
  const std::size_t max_touched = std::max<std::size_t>(1, std::min(d, code.min_distance() - 1));
  std::uniform_int_distribution<std::size_t> touched_dist(1, max_touched);
  std::vector<std::size_t> order(d);
  for (std::uint64_t done = 0; done < random_trials;) {
    const auto lanes = static_cast<Eigen::Index>(std::min<std::uint64_t>(1024, random_trials - done));
    Blocks<std::uint64_t> items = Blocks<std::uint64_t>::Zero(lanes, static_cast<Eigen::Index>(d * w));
    for (Eigen::Index lane = 0; lane < lanes; ++lane) {
      for (std::size_t i = 0; i < d; ++i) order[i] = i;
      std::shuffle(order.begin(), order.end(), rng);
      const std::size_t touched = touched_dist(rng);
      for (std::size_t t = 0; t < touched; ++t) {
        const std::size_t item = order[t];
        do {
          for (std::size_t c = 0; c < w; ++c) {
            // Sparse words half the time so single-bit patterns get exercised.
            std::uint64_t v = rng();
            if (v & 1u) v = std::uint64_t{1} << (v >> 58);
            if ((rng() & 3u) == 0) v = 0;
            items(lane, static_cast<Eigen::Index>(item * w + c)) = v;
          }
        } while ((items.row(lane).segment(static_cast<Eigen::Index>(item * w), static_cast<Eigen::Index>(w)) == 0)
                     .all());
      }
    }
    const Blocks<std::uint64_t> enc = encode(items, code);
    for (Eigen::Index lane = 0; lane < lanes; ++lane) {
      report.random = std::min(report.random, encoded_weight(enc, lane, w, e));
    }
    done += static_cast<std::uint64_t>(lanes);
    report.trials = done;
  }
  return report;
}

void require_min_distance(const ErasureCode& code, unsigned word_bits, std::uint64_t random_trials) {
  const auto report = verify_min_distance(code, word_bits, random_trials);
  if (!report.accepted()) {
    throw ValidationError("erasure code distance " + std::to_string(report.measured()) + " below declared " +
                          std::to_string(report.declared));
  }
}

double epsilon_log2(std::size_t k, int p, std::size_t h) {
  const long double sum = std::ldexp(1.0L, static_cast<int>(k) * p) +
                          std::pow(static_cast<long double>(h), static_cast<long double>(k)) + 1.0L;
  return static_cast<double>(32.0L * static_cast<long double>(k) - std::log2(sum));
}

SeedTerms seed_terms(const HashParams& params, std::size_t h) {
  SeedTerms t;
  t.ehc = params.e * params.w;
  t.tree = (params.f - 1) * h * params.k;
  t.finalize = params.b * params.f * std::max<std::size_t>(h, 1) * params.k;
  t.remainder = params.b * params.d * params.w + params.k - 1;
  return t;
}

namespace {

std::uint64_t instance_count(const HashParams& params, std::uint64_t n_bytes) {
  const std::uint64_t n_words = n_bytes / 8 + (n_bytes % 8 != 0);
  return n_words / params.instance_words();
}

}  // namespace

std::uint64_t seed_words(const HashParams& params, std::uint64_t n_bytes) {
  const std::uint64_t instances = instance_count(params, n_bytes);
  return seed_terms(params, instances ? tree_height(instances, params.f) : 0).total();
}

MultiplicationCount multiplication_count(const HashParams& params, std::uint64_t n_bytes) {
  const std::uint64_t n_words = n_bytes / 8 + (n_bytes % 8 != 0);
  const std::uint64_t instances = n_words / params.instance_words();
  const std::uint64_t tail = n_words - instances * params.instance_words();
  MultiplicationCount m;
  m.ehc = instances * params.e * params.w * params.b;
  std::uint64_t nodes = 0, digit_sum = 0;
  for (std::uint64_t q = instances; q > 0; q /= params.f) {
    nodes += q / params.f;
    digit_sum += q % params.f;
  }
  m.tree = params.k * nodes * (params.f - 1) * params.b;
  m.finalize = params.k * (digit_sum * params.b + 1);
  m.remainder = params.k * tail;
  return m;
}

EntropyReport entropy_report(const HashParams& params, std::uint64_t n_bytes) {
  if (n_bytes == 0) throw UsageError("entropy report needs a positive length");
  EntropyReport r;
  r.output_bytes = params.output_bytes;
  r.n_bytes = n_bytes;
  r.instances = instance_count(params, n_bytes);
  r.h = r.instances ? tree_height(r.instances, params.f) : 0;
  r.h_floor = r.instances ? tree_height_floor(r.instances, params.f) : 0;
  r.epsilon_log2 = epsilon_log2(params.k, params.p, r.h);
  r.epsilon_log2_floor = epsilon_log2(params.k, params.p, r.h_floor);
  r.seed = seed_terms(params, r.h);
  r.seed_words = r.seed.total();
  r.seed_bytes = 8 * r.seed_words;
  r.seed_words_floor = seed_terms(params, r.h_floor).total();
  r.multiplications_leading = (params.e * params.w + params.k) * params.b * r.instances;
  r.multiplications = multiplication_count(params, n_bytes);
  r.multiplications_log_term =
      static_cast<std::int64_t>(r.multiplications.total()) - static_cast<std::int64_t>(r.multiplications_leading);
  r.ehc_share = r.multiplications.total()
                    ? static_cast<double>(r.multiplications.ehc) / static_cast<double>(r.multiplications.total())
                    : 0.0;
  return r;
}

std::string format_table(const EntropyReport& r) {
  std::ostringstream out;
  auto row = [&out](const char* name, const auto& value) {
    out << std::left << std::setw(26) << name << value << '\n';
  };
  out << std::fixed << std::setprecision(2);
  row("variant", "HalftimeHash" + std::to_string(r.output_bytes));
  row("input bytes", r.n_bytes);
  row("EHC instances", r.instances);
  row("tree height h", r.h);
  row("tree height (floor)", r.h_floor);
  row("output entropy bits", r.epsilon_log2);
  row("output entropy (floor h)", r.epsilon_log2_floor);
  row("seed words", r.seed_words);
  row("  ehc", r.seed.ehc);
  row("  tree", r.seed.tree);
  row("  finalize", r.seed.finalize);
  row("  remainder", r.seed.remainder);
  row("seed bytes", r.seed_bytes);
  row("seed words (floor h)", r.seed_words_floor);
  row("multiplications", r.multiplications.total());
  row("  leading term", r.multiplications_leading);
  row("  logarithmic term", r.multiplications_log_term);
  row("  EHC share", r.ehc_share);
  return out.str();
}

std::string csv_header() {
  return "variant,n_bytes,instances,h,h_floor,epsilon_log2,epsilon_log2_floor,seed_words,seed_bytes,"
         "seed_words_floor,multiplications,multiplications_leading,multiplications_log_term,ehc_share";
}

std::string format_csv(const EntropyReport& r) {
  std::ostringstream out;
  out << r.output_bytes << ',' << r.n_bytes << ',' << r.instances << ',' << r.h << ',' << r.h_floor << ','
      << std::fixed << std::setprecision(4) << r.epsilon_log2 << ',' << r.epsilon_log2_floor << ',' << r.seed_words
      << ',' << r.seed_bytes << ',' << r.seed_words_floor << ',' << r.multiplications.total() << ','
      << r.multiplications_leading << ',' << r.multiplications_log_term << ',' << r.ehc_share;
  return out.str();
}

}  // namespace halftime::analysis
