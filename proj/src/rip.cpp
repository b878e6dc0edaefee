#include "bomp/rip.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <string>
#include <thread>
#include <utility>

#include "bomp/combinatorics.hpp"
#include "bomp/pursuit.hpp"
#include "bomp/rng.hpp"

namespace bomp {

namespace {

constexpr double kNegInf = -std::numeric_limits<double>::infinity();

std::uint64_t sat_mul(std::uint64_t a, std::uint64_t b) {
  constexpr auto kMax = std::numeric_limits<std::uint64_t>::max();
  if (b != 0 && a > kMax / b) {
    return kMax;
  }
  return a * b;
}

std::uint64_t sat_add(std::uint64_t a, std::uint64_t b) {
  constexpr auto kMax = std::numeric_limits<std::uint64_t>::max();
  return a > kMax - b ? kMax : a + b;
}

double deviation_from_identity(const EigenExtremes& ex) {
  return std::max(ex.lambda_max - 1.0, 1.0 - ex.lambda_min);
}

/// A = P_perp(D_support) D; every column loses its component in the span of
/// the selected blocks, so the selected blocks of A are (numerically) zero.
Matrix projected_dictionary(const Matrix& d, const BlockLayout& layout,
                            const BlockSupport& support) {
  if (support.size() == 0) {
    return d;
  }
  const Matrix basis = submatrix_for_support(d, support);
  Eigen::JacobiSVD<Matrix> svd(basis, Eigen::ComputeThinU);
  const auto& sv = svd.singularValues();
  const double cutoff = 1e-10 * sv(0);
  Eigen::Index rank = 0;
  while (rank < sv.size() && sv(rank) > cutoff) {
    ++rank;
  }
  if (rank == 0) {
    return d;
  }
  const auto u = svd.matrixU().leftCols(rank);
  return d - u * (u.transpose() * d);
}

void check_matrix_layout(const Matrix& d, const BlockLayout& layout, const char* what) {
  if (d.cols() != layout.n) {
    throw LayoutMismatch(std::string(what) + ": matrix has " + std::to_string(d.cols()) +
                         " columns, layout expects " + std::to_string(layout.n));
  }
  require_finite(d, what);
}

void check_delta_below_one(double delta) {
  if (!(delta >= 0.0) || delta >= 1.0) {
    throw ValidationError("delta", "bound needs delta in [0, 1)");
  }
}

}  // namespace

RipCertificate block_rip_constant_exact(const Matrix& d, const BlockLayout& layout, int order,
                                        std::uint64_t budget, int threads) {
  check_matrix_layout(d, layout, "rip oracle");
  if (order < 1 || order > layout.m) {
    throw ValidationError("order", "must lie in 1.." + std::to_string(layout.m));
  }
  const std::uint64_t total = binomial(layout.m, order);
  if (total > budget) {
    throw BudgetExceeded("enumerating " + std::to_string(total) +
                         " supports exceeds the budget of " + std::to_string(budget));
  }

  struct Best {
    double delta = kNegInf;
    std::uint64_t rank = 0;
    std::vector<int> support;
    EigenExtremes extremes;
  };

  // Lexicographic scan; strictly-greater updates keep the first support
  // attaining the maximum.
  const auto scan = [&](std::uint64_t begin, std::uint64_t end) {
    Best best;
    if (begin >= end) {
      return best;
    }
    std::vector<int> combo = combination_at_rank(layout.m, order, begin);
    for (std::uint64_t r = begin; r < end; ++r) {
      const BlockSupport s{layout, combo};
      const EigenExtremes ex = gram_extreme_eigenvalues(submatrix_for_support(d, s));
      const double dev = deviation_from_identity(ex);
      if (dev > best.delta) {
        best = Best{dev, r, combo, ex};
      }
      if (r + 1 < end) {
        next_combination(combo, layout.m);
      }
    }
    return best;
  };

  Best overall;
  const int nthreads = std::max(1, threads);
  if (nthreads == 1 || total < 2 * static_cast<std::uint64_t>(nthreads)) {
    overall = scan(0, total);
  } else {
    std::vector<Best> partial(static_cast<std::size_t>(nthreads));
    std::vector<std::thread> pool;
    pool.reserve(static_cast<std::size_t>(nthreads));
    const std::uint64_t chunk = total / static_cast<std::uint64_t>(nthreads);
    const std::uint64_t extra = total % static_cast<std::uint64_t>(nthreads);
    std::uint64_t begin = 0;
    for (int t = 0; t < nthreads; ++t) {
      const std::uint64_t len = chunk + (static_cast<std::uint64_t>(t) < extra ? 1 : 0);
      const std::uint64_t end = begin + len;
      pool.emplace_back([&partial, &scan, t, begin, end] {
        partial[static_cast<std::size_t>(t)] = scan(begin, end);
      });
      begin = end;
    }
    for (auto& th : pool) {
      th.join();
    }
    // ranges are rank-ordered, so strict comparison reproduces the serial
    // first-attainer result
    overall = partial[0];
    for (int t = 1; t < nthreads; ++t) {
      if (partial[static_cast<std::size_t>(t)].delta > overall.delta) {
        overall = partial[static_cast<std::size_t>(t)];
      }
    }
  }

  RipCertificate cert;
  cert.order = order;
  cert.block_d = layout.d;
  cert.delta = overall.delta;
  cert.worst_support = BlockSupport{layout, std::move(overall.support)};
  cert.extremes_at_worst = overall.extremes;
  cert.theorem1_threshold = 1.0 / (2.0 * std::sqrt(static_cast<double>(order)));
  cert.satisfied = cert.delta < cert.theorem1_threshold;
  cert.supports_enumerated = total;
  return cert;
}

RipCertificate rip_constant_exact(const Matrix& d, int order, std::uint64_t budget, int threads) {
  return block_rip_constant_exact(d, BlockLayout::scalar(static_cast<int>(d.cols())), order,
                                  budget, threads);
}

EigenExtremes restricted_rip_extremes_of_a(const Matrix& d, const BlockLayout& layout,
                                           const BlockSupport& support, int kp,
                                           std::uint64_t budget) {
  check_matrix_layout(d, layout, "restricted extremes");
  if (support.layout != layout) {
    throw LayoutMismatch("support layout differs from the queried layout");
  }
  if (kp < 1) {
    throw ValidationError("kp", "must be at least 1");
  }
  if (support.size() + kp > layout.m) {
    throw ValidationError("kp", "selected set plus kp exceeds the block count");
  }
  const std::vector<int> rest = support.complement().indices;
  const int rest_count = static_cast<int>(rest.size());
  const std::uint64_t total = binomial(rest_count, kp);
  if (total > budget) {
    throw BudgetExceeded("enumerating " + std::to_string(total) +
                         " disjoint supports exceeds the budget of " + std::to_string(budget));
  }

  const Matrix a = projected_dictionary(d, layout, support);
  EigenExtremes out{std::numeric_limits<double>::infinity(), kNegInf};
  std::vector<int> idx = first_combination(kp);
  for (;;) {
    std::vector<int> blocks;
    blocks.reserve(static_cast<std::size_t>(kp));
    for (int i : idx) {
      blocks.push_back(rest[static_cast<std::size_t>(i - 1)]);
    }
    const BlockSupport s{layout, std::move(blocks)};
    const EigenExtremes ex = gram_extreme_eigenvalues(submatrix_for_support(a, s));
    out.lambda_min = std::min(out.lambda_min, ex.lambda_min);
    out.lambda_max = std::max(out.lambda_max, ex.lambda_max);
    if (!next_combination(idx, rest_count)) {
      break;
    }
  }
  return out;
}

double verify_lemma1(const Matrix& d, const BlockLayout& layout, const BlockSignal& u,
                     const BlockSignal& v, double delta) {
  check_matrix_layout(d, layout, "lemma 1");
  if (u.layout != layout || v.layout != layout) {
    throw LayoutMismatch("signal layout differs from the queried layout");
  }
  const double lhs = std::abs((d * u.values).dot(d * v.values) - u.values.dot(v.values));
  return lhs - delta * u.values.norm() * v.values.norm();
}

double verify_corollary1(const Matrix& d, const BlockLayout& layout, const BlockSignal& x, int j,
                         double delta) {
  check_matrix_layout(d, layout, "corollary 1");
  if (x.layout != layout) {
    throw LayoutMismatch("signal layout differs from the queried layout");
  }
  const BlockSignal h{layout, d.transpose() * (d * x.values)};
  return (block(h, j) - block(x, j)).norm() - delta * x.values.norm();
}

double verify_lemma3(const Matrix& d, const BlockLayout& layout, const BlockSupport& support,
                     const BlockSignal& x_tilde, double delta) {
  check_matrix_layout(d, layout, "lemma 3");
  if (support.layout != layout || x_tilde.layout != layout) {
    throw LayoutMismatch("support or signal layout differs from the queried layout");
  }
  check_delta_below_one(delta);
  for (int l : block_support(x_tilde).indices) {
    if (support.contains(l)) {
      throw SupportOverlap("block " + std::to_string(l) + " lies in the selected set");
    }
  }
  const Matrix a = projected_dictionary(d, layout, support);
  const BlockSignal h{layout, a.transpose() * (a * x_tilde.values)};
  const double bound = delta / (1.0 - delta) * x_tilde.values.norm();
  double worst = kNegInf;
  for (int l = 1; l <= layout.m; ++l) {
    if (support.contains(l)) {
      continue;
    }
    worst = std::max(worst, (block(h, l) - block(x_tilde, l)).norm() - bound);
  }
  return worst == kNegInf ? 0.0 : worst;
}

IdentificationResult check_identification(const BlockSignal& x_tilde, const BlockSignal& h,
                                          const BlockSupport& support, double delta) {
  if (h.layout != x_tilde.layout || support.layout != x_tilde.layout) {
    throw LayoutMismatch("proxy, signal and support layouts must agree");
  }
  check_delta_below_one(delta);
  const double x_norm = x_tilde.values.norm();
  if (!(mixed_l2inf_norm(x_tilde) > 2.0 * delta / (1.0 - delta) * x_norm)) {
    return IdentificationResult{true, true};
  }
  const int chosen = select_block(h, BlockSupport::empty(h.layout));
  return IdentificationResult{block_support(x_tilde).contains(chosen), false};
}

double verify_lemma4(const BlockSignal& x) {
  const double norm = x.values.norm();
  if (norm == 0.0) {
    throw ZeroSignal("needs a nonzero signal");
  }
  const int k = mixed_l20_norm(x);
  if (k == 0) {
    throw ZeroSignal("signal is numerically zero");
  }
  return norm / std::sqrt(static_cast<double>(k)) - mixed_l2inf_norm(x);
}

double theorem1_threshold(int sparsity) {
  if (sparsity < 1) {
    throw ValidationError("sparsity", "must be at least 1");
  }
  return 1.0 / (2.0 * std::sqrt(static_cast<double>(sparsity) + 1.0));
}

double omp_threshold(int sparsity, int block_len) {
  if (sparsity < 1) {
    throw ValidationError("sparsity", "must be at least 1");
  }
  if (block_len < 1) {
    throw ValidationError("block_len", "must be at least 1");
  }
  return 1.0 / (3.0 * std::sqrt(static_cast<double>(sparsity) * block_len));
}

const char* to_string(LemmaId id) {
  switch (id) {
    case LemmaId::L1:
      return "L1";
    case LemmaId::L2:
      return "L2";
    case LemmaId::C1:
      return "C1";
    case LemmaId::L3:
      return "L3";
    case LemmaId::C2:
      return "C2";
    case LemmaId::L4:
      return "L4";
  }
  return "unknown";
}

namespace {

/// Running worst case with first-attainer semantics and a bounded default.
struct Worst {
  double value = kNegInf;
  std::string witness;

  void offer(double v, const std::string& w) {
    if (v > value) {
      value = v;
      witness = w;
    }
  }

  void commit(LemmaReport& rep) const {
    rep.max_violation = value == kNegInf ? 0.0 : value;
    rep.witness = witness;
  }
};

BlockSignal gaussian_on(const BlockLayout& layout, const std::vector<int>& blocks,
                        CounterRng::Stream& st) {
  BlockSignal x = BlockSignal::zero(layout);
  for (int l : blocks) {
    for (int i = 0; i < layout.d; ++i) {
      x.values(static_cast<Eigen::Index>(l - 1) * layout.d + i) = st.gaussian();
    }
  }
  return x;
}

std::string set_string(const BlockLayout& layout, const std::vector<int>& blocks) {
  return BlockSupport{layout, blocks}.to_string();
}

/// All (selected set, disjoint candidate support) pairs whose joint order
/// keeps the lemma hypotheses inside the certified order.
struct PairFamily {
  std::vector<std::pair<std::vector<int>, std::vector<int>>> pairs;
};

PairFamily enumerate_disjoint_pairs(const BlockLayout& layout, int order, std::uint64_t budget) {
  std::uint64_t count = 0;
  for (int s = 0; s + 1 <= order - 1; ++s) {
    for (int t = 1; s + t <= order - 1; ++t) {
      count = sat_add(count, sat_mul(binomial(layout.m, s), binomial(layout.m - s, t)));
    }
  }
  if (count > budget) {
    throw BudgetExceeded("enumerating " + std::to_string(count) +
                         " disjoint pairs exceeds the budget of " + std::to_string(budget));
  }
  PairFamily fam;
  fam.pairs.reserve(static_cast<std::size_t>(count));
  for (int s = 0; s + 1 <= order - 1; ++s) {
    std::vector<int> lam = first_combination(s);
    for (bool more_lam = true; more_lam;
         more_lam = s > 0 && next_combination(lam, layout.m)) {
      std::vector<int> rest;
      rest.reserve(static_cast<std::size_t>(layout.m - s));
      for (int l = 1; l <= layout.m; ++l) {
        if (std::find(lam.begin(), lam.end(), l) == lam.end()) {
          rest.push_back(l);
        }
      }
      for (int t = 1; s + t <= order - 1; ++t) {
        std::vector<int> idx = first_combination(t);
        for (;;) {
          std::vector<int> supp;
          supp.reserve(static_cast<std::size_t>(t));
          for (int i : idx) {
            supp.push_back(rest[static_cast<std::size_t>(i - 1)]);
          }
          fam.pairs.emplace_back(lam, std::move(supp));
          if (!next_combination(idx, static_cast<int>(rest.size()))) {
            break;
          }
        }
      }
      if (s == 0) {
        break;
      }
    }
  }
  return fam;
}

}  // namespace

LemmaSuiteResult run_lemma_suite(const Matrix& d, const BlockLayout& layout, int order,
                                 const LemmaSuiteConfig& config) {
  LemmaSuiteResult result;
  result.certificate = block_rip_constant_exact(d, layout, order, config.budget);
  const double delta = result.certificate.delta;
  const int m = layout.m;
  const bool contractive = delta < 1.0;
  const CounterRng rng(config.seed);

  // L1: random disjoint-support pairs with joint block sparsity <= order
  {
    LemmaReport rep;
    rep.id = LemmaId::L1;
    Worst worst;
    auto st = rng.stream(1);
    for (std::uint64_t t = 0; t < config.lemma1_pairs; ++t) {
      int su = 1;
      int sv = 0;
      if (order >= 2) {
        su = 1 + st.below(order - 1);
        sv = 1 + st.below(order - su);
      }
      su = std::min(su, m);
      sv = std::min(sv, m - su);
      const std::vector<int> both = st.distinct_sorted(m, su + sv);
      std::vector<int> ub;
      std::vector<int> vb;
      if (sv > 0) {
        const std::vector<int> upos = st.distinct_sorted(su + sv, su);
        for (int i = 1; i <= su + sv; ++i) {
          const bool to_u = std::find(upos.begin(), upos.end(), i) != upos.end();
          (to_u ? ub : vb).push_back(both[static_cast<std::size_t>(i - 1)]);
        }
      } else {
        ub = both;
      }
      const BlockSignal u = gaussian_on(layout, ub, st);
      const BlockSignal v = gaussian_on(layout, vb, st);
      const double viol = verify_lemma1(d, layout, u, v, delta);
      ++rep.trials;
      worst.offer(viol, "pair " + std::to_string(t) + " u" + set_string(layout, ub) + " v" +
                            set_string(layout, vb));
    }
    worst.commit(rep);
    result.reports.push_back(std::move(rep));
  }

  // L2: restricted extremes of the projected dictionary for every selected
  // set, against the bound derived from the order-K constant
  {
    LemmaReport rep;
    rep.id = LemmaId::L2;
    Worst worst;
    if (contractive) {
      const double lo = 1.0 - delta / (1.0 - delta);
      const double hi = 1.0 + delta;
      std::uint64_t work = 0;
      for (int s = 1; s < order; ++s) {
        work = sat_add(work, sat_mul(binomial(m, s), binomial(m - s, order - s)));
      }
      if (work > config.budget) {
        throw BudgetExceeded("enumerating " + std::to_string(work) +
                             " restricted supports exceeds the budget of " +
                             std::to_string(config.budget));
      }
      for (int s = 1; s < order; ++s) {
        std::vector<int> combo = first_combination(s);
        for (;;) {
          const BlockSupport lam{layout, combo};
          const EigenExtremes ex =
              restricted_rip_extremes_of_a(d, layout, lam, order - s, config.budget);
          const double viol = std::max(ex.lambda_max - hi, lo - ex.lambda_min);
          ++rep.trials;
          worst.offer(viol, "lambda" + lam.to_string() + " kp=" + std::to_string(order - s));
          if (!next_combination(combo, m)) {
            break;
          }
        }
      }
    } else {
      worst.witness = "not applicable: delta >= 1";
    }
    worst.commit(rep);
    result.reports.push_back(std::move(rep));
  }

  // C1: random signals, every admissible block index
  {
    LemmaReport rep;
    rep.id = LemmaId::C1;
    Worst worst;
    auto st = rng.stream(3);
    for (std::uint64_t t = 0; t < config.corollary1_signals; ++t) {
      const int smax = std::min(std::max(order - 1, 1), m);
      const int s = 1 + st.below(smax);
      const std::vector<int> blocks = st.distinct_sorted(m, s);
      const BlockSignal x = gaussian_on(layout, blocks, st);
      const BlockSupport xs{layout, blocks};
      for (int j = 1; j <= m; ++j) {
        if (s + (xs.contains(j) ? 0 : 1) > order) {
          continue;
        }
        const double viol = verify_corollary1(d, layout, x, j, delta);
        ++rep.trials;
        worst.offer(viol, "signal " + std::to_string(t) + " j=" + std::to_string(j));
      }
    }
    worst.commit(rep);
    result.reports.push_back(std::move(rep));
  }

  // L3: every disjoint (selected set, candidate support) pair, a few
  // coefficient draws each
  {
    LemmaReport rep;
    rep.id = LemmaId::L3;
    Worst worst;
    auto st = rng.stream(4);
    if (contractive && order >= 2) {
      const PairFamily fam = enumerate_disjoint_pairs(layout, order, config.budget);
      for (const auto& [lam, supp] : fam.pairs) {
        const BlockSupport selected{layout, lam};
        for (int dr = 0; dr < config.lemma3_draws; ++dr) {
          const BlockSignal x = gaussian_on(layout, supp, st);
          const double viol = verify_lemma3(d, layout, selected, x, delta);
          ++rep.trials;
          worst.offer(viol, "lambda" + set_string(layout, lam) + " supp" +
                                set_string(layout, supp) + " draw " + std::to_string(dr));
        }
      }
    } else if (!contractive) {
      worst.witness = "not applicable: delta >= 1";
    }
    worst.commit(rep);
    result.reports.push_back(std::move(rep));
  }

  // C2: identification over the same pair family, random coefficients
  {
    LemmaReport rep;
    rep.id = LemmaId::C2;
    Worst worst;
    auto st = rng.stream(5);
    if (contractive && order >= 2) {
      const PairFamily fam = enumerate_disjoint_pairs(layout, order, config.budget);
      for (std::uint64_t dr = 0; dr < config.identification_draws; ++dr) {
        const auto& [lam, supp] = fam.pairs[static_cast<std::size_t>(dr % fam.pairs.size())];
        const BlockSupport selected{layout, lam};
        const BlockSignal x = gaussian_on(layout, supp, st);
        const Matrix a = projected_dictionary(d, layout, selected);
        const BlockSignal h{layout, a.transpose() * (a * x.values)};
        const IdentificationResult res = check_identification(x, h, selected, delta);
        ++rep.trials;
        if (res.skipped) {
          ++rep.skipped;
        } else if (!res.passed) {
          worst.offer(1.0, "draw " + std::to_string(dr) + " lambda" + set_string(layout, lam) +
                               " supp" + set_string(layout, supp));
        }
      }
    } else if (!contractive) {
      worst.witness = "not applicable: delta >= 1";
    }
    worst.commit(rep);
    result.reports.push_back(std::move(rep));
  }

  // L4: dictionary-free norm inequality over mixed coefficient models
  {
    LemmaReport rep;
    rep.id = LemmaId::L4;
    Worst worst;
    auto st = rng.stream(6);
    for (std::uint64_t t = 0; t < config.lemma4_signals; ++t) {
      const int k = 1 + st.below(m);
      const std::vector<int> blocks = st.distinct_sorted(m, k);
      BlockSignal x = BlockSignal::zero(layout);
      const int model = static_cast<int>(t % 3);
      for (int l : blocks) {
        const Eigen::Index base = static_cast<Eigen::Index>(l - 1) * layout.d;
        for (int i = 0; i < layout.d; ++i) {
          x.values(base + i) = model == 1 ? st.rademacher() : st.gaussian();
        }
        if (model == 2) {
          // unit-norm blocks exercise the equality case
          const double nrm = x.values.segment(base, layout.d).norm();
          if (nrm > 0.0) {
            x.values.segment(base, layout.d) /= nrm;
          } else {
            x.values(base) = 1.0;
          }
        }
      }
      const double viol = verify_lemma4(x);
      ++rep.trials;
      worst.offer(viol, "signal " + std::to_string(t) + " blocks=" + std::to_string(k));
    }
    worst.commit(rep);
    result.reports.push_back(std::move(rep));
  }

  return result;
}

}  // namespace bomp
