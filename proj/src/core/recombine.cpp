#include "core/recombine.hpp"

#include <atomic>
#include <cmath>
#include <set>
#include <thread>

#include "core/assignment.hpp"
#include "core/metrics.hpp"
#include "core/stats.hpp"

namespace sc {

namespace {

const PreferenceProfile& need_induced(const StatContext& ctx) {
  if (!ctx.induced)
    throw Error(Errc::validation, "statistic needs a market with embedded preferences");
  return *ctx.induced;
}

double envy_share(const Matching& matching, const PreferenceProfile& prefs,
                  const Market& market) {
  return static_cast<double>(justified_envy(matching, prefs, market).num_enviers) /
         matching.num_students();
}

std::vector<double> donor_scores(const StatContext& ctx) {
  if (!ctx.sessions || !ctx.donor_sessions || !ctx.attribute)
    throw Error(Errc::validation, "sorting statistics need session attributes");
  int n = ctx.matching.num_students();
  std::vector<double> scores(n);
  for (int p = 1; p <= n; ++p) {
    const Session& sess = ctx.sessions->session((*ctx.donor_sessions)[p - 1]);
    auto it = sess.attrs.find(*ctx.attribute);
    if (it == sess.attrs.end())
      throw Error(Errc::validation, "sessions carry no attribute '" + *ctx.attribute + "'");
    scores[p - 1] = it->second[p - 1];
  }
  return scores;
}

}  // namespace

const std::map<std::string, StatisticFn>& statistic_registry() {
  static const std::map<std::string, StatisticFn> registry = {
      {"pareto_efficient",
       [](const StatContext& c) {
         return is_pareto_efficient(c.matching, need_induced(c), c.market) ? 1.0 : 0.0;
       }},
      {"avg_rank",
       [](const StatContext& c) {
         return average_rank(rank_profile(c.matching, need_induced(c))).value();
       }},
      {"max_rank",
       [](const StatContext& c) {
         return static_cast<double>(max_rank(rank_profile(c.matching, need_induced(c))));
       }},
      {"true_envy_share",
       [](const StatContext& c) { return envy_share(c.matching, need_induced(c), c.market); }},
      {"reported_envy_share",
       [](const StatContext& c) { return envy_share(c.matching, c.submitted, c.market); }},
      {"improvable_share",
       [](const StatContext& c) { return improvable_share(c.matching, need_induced(c)); }},
      {"sorting_between",
       [](const StatContext& c) {
         return sorting_metrics(c.matching, donor_scores(c), c.market).between_share;
       }},
      {"sorting_dispersion",
       [](const StatContext& c) {
         return sorting_metrics(c.matching, donor_scores(c), c.market).dispersion;
       }},
  };
  return registry;
}

PreferenceProfile draw_synthetic(const SessionSet& sessions, int session, StudentId position,
                                 Rng& rng, std::vector<int>* donors) {
  int n = sessions.num_positions();
  int k = sessions.num_sessions();
  std::vector<std::vector<SchoolId>> orders(n);
  if (donors) donors->assign(n, 0);
  for (StudentId p = 1; p <= n; ++p) {
    int donor = (p == position) ? session : 1 + rng.next_int(k);
    orders[p - 1] = sessions.session(donor).profile.order(p);
    if (donors) (*donors)[p - 1] = donor;
  }
  return PreferenceProfile(sessions.num_schools(), std::move(orders));
}

PreferenceProfile draw_calibrated(const SessionSet& sessions, const PreferenceProfile& induced,
                                  double mix_x, int session, StudentId position, Rng& rng,
                                  std::vector<int>* donors) {
  int n = sessions.num_positions();
  int k = sessions.num_sessions();
  std::vector<std::vector<SchoolId>> orders(n);
  if (donors) donors->assign(n, 0);
  for (StudentId p = 1; p <= n; ++p) {
    if (p == position) {
      orders[p - 1] = sessions.session(session).profile.order(p);
      if (donors) (*donors)[p - 1] = session;
      continue;
    }
    int donor = 1 + rng.next_int(k);
    if (donors) (*donors)[p - 1] = donor;
    if (rng.next_unit() < mix_x)
      orders[p - 1] = sessions.session(donor).profile.order(p);
    else
      orders[p - 1] = induced.order(p);
  }
  return PreferenceProfile(sessions.num_schools(), std::move(orders));
}

double calib_mix(double p_d, int n, double tau) {
  if (!(p_d >= 0.0 && p_d < 1.0))
    throw Error(Errc::validation, "donor truth rate must lie in [0, 1)");
  if (n < 2) throw Error(Errc::validation, "calibration needs at least two positions");
  double lo = p_d;
  double hi = 1.0 - (1.0 - p_d) / n;
  if (tau < lo - 1e-12 || tau > hi + 1e-12)
    throw Error(Errc::infeasible, "target truth rate " + std::to_string(tau) +
                                      " outside feasible range [" + std::to_string(lo) + ", " +
                                      std::to_string(hi) + "]");
  // snap the endpoints so the boundary identities x(p_d)=1 and x(hi)=0 hold
  // exactly despite rounding in the interior formula
  if (tau <= lo + 1e-12) return 1.0;
  if (tau >= hi - 1e-12) return 0.0;
  double x = (p_d + (n - 1) - n * tau) / ((n - 1) * (1.0 - p_d));
  return std::min(1.0, std::max(0.0, x));
}

RecombinantReport recombinant_estimate(const SessionSet& sessions, const Market& market,
                                       const RecombinantConfig& config) {
  int k = sessions.num_sessions();
  int n = sessions.num_positions();
  long long r_draws = config.draws_per_block;
  if (n != market.num_students())
    throw Error(Errc::validation, "sessions and market disagree on the number of students");
  if (sessions.num_schools() != market.num_schools())
    throw Error(Errc::validation, "sessions and market disagree on the number of schools");
  if (r_draws < 2) throw Error(Errc::validation, "draws_per_block must be at least 2");
  if (config.workers < 1) throw Error(Errc::validation, "workers must be positive");
  auto stat_it = statistic_registry().find(config.statistic);
  if (stat_it == statistic_registry().end()) {
    std::string known;
    for (const auto& [name, _] : statistic_registry()) known += (known.empty() ? "" : ", ") + name;
    throw Error(Errc::validation,
                "unknown statistic '" + config.statistic + "' (known: " + known + ")");
  }
  const StatisticFn& stat = stat_it->second;
  const PreferenceProfile* induced =
      market.true_prefs() ? &market.true_prefs().value() : nullptr;

  double mix_x = 0.0;
  if (config.tau) {
    if (!induced)
      throw Error(Errc::validation, "calibration needs a market with embedded preferences");
    mix_x = calib_mix(sessions.donor_truth_rate(*induced), n, *config.tau);
  }

  int blocks = k * n;
  long long h1 = r_draws / 2;

  struct BlockResult {
    double mean = 0.0, half_a = 0.0, half_b = 0.0, centered_sq = 0.0;
    std::vector<double> draws;
    std::string error;
  };
  std::vector<BlockResult> results(blocks);
  std::atomic<int> next_block{0};

  auto run_block = [&](int b) {
    BlockResult& out = results[b];
    int session = 1 + b / n;
    StudentId position = 1 + b % n;
    std::vector<double> values(static_cast<std::size_t>(r_draws));
    std::vector<int> donors;
    NeumaierSum sum, sum_a, sum_b;
    for (long long d = 0; d < r_draws; ++d) {
      Rng rng(derive_seed(config.seed, static_cast<std::uint64_t>(session),
                          static_cast<std::uint64_t>(position), static_cast<std::uint64_t>(d)));
      PreferenceProfile profile =
          config.tau ? draw_calibrated(sessions, *induced, mix_x, session, position, rng, &donors)
                     : draw_synthetic(sessions, session, position, rng, &donors);
      Matching matching;
      switch (config.mechanism) {
        case Mechanism::da: matching = run_da(market, profile).matching; break;
        case Mechanism::eada: matching = run_eada(market, profile).matching; break;
        case Mechanism::rm:
          matching = run_rm(market, profile, rng.next_u64(), config.rm_cap);
          break;
      }
      StatContext ctx{market, profile, matching, induced,
                      &sessions, &donors, &config.attribute};
      double v = stat(ctx);
      values[static_cast<std::size_t>(d)] = v;
      sum.add(v);
      (d < h1 ? sum_a : sum_b).add(v);
    }
    out.mean = sum.mean(r_draws);
    out.half_a = sum_a.mean(h1);
    out.half_b = sum_b.mean(r_draws - h1);
    NeumaierSum centered;
    for (double v : values) {
      double d0 = v - out.mean;
      centered.add(d0 * d0);
    }
    out.centered_sq = centered.value();
    if (config.keep_draws) out.draws = std::move(values);
  };

  auto worker = [&]() {
    for (;;) {
      int b = next_block.fetch_add(1);
      if (b >= blocks) return;
      try {
        run_block(b);
      } catch (const std::exception& e) {
        results[b].error = e.what();
      }
    }
  };
  if (config.workers == 1) {
    worker();
  } else {
    std::vector<std::thread> pool;
    for (int w = 0; w < config.workers; ++w) pool.emplace_back(worker);
    for (std::thread& t : pool) t.join();
  }
  for (const BlockResult& res : results)
    if (!res.error.empty()) throw Error(Errc::validation, res.error);

  RecombinantReport report;
  report.statistic = config.statistic;
  report.mechanism = to_string(config.mechanism);
  report.num_sessions = k;
  report.num_positions = n;
  report.draws_per_block = r_draws;
  report.seed = config.seed;
  if (induced) report.donor_truth_rate = sessions.donor_truth_rate(*induced);
  if (config.tau) {
    report.tau = *config.tau;
    report.mix_x = mix_x;
  }

  NeumaierSum mean_sum;
  for (const BlockResult& res : results) mean_sum.add(res.mean);
  double mu = mean_sum.mean(blocks);
  report.mean = mu;

  NeumaierSum within, between, phi_sum;
  for (const BlockResult& res : results) {
    within.add(res.centered_sq);
    double d0 = res.mean - mu;
    between.add(static_cast<double>(r_draws) * d0 * d0);
    phi_sum.add((res.half_a - mu) * (res.half_b - mu));
  }
  long long total_draws = static_cast<long long>(blocks) * r_draws;
  report.sigma2 = (within.value() + between.value()) / static_cast<double>(total_draws - 1);
  report.phi = phi_sum.mean(blocks);
  report.variance = report.sigma2 / static_cast<double>(total_draws) +
                    static_cast<double>(n) * std::max(report.phi, 0.0) / static_cast<double>(k);
  report.std_error = std::sqrt(report.variance);

  report.block_means.reserve(blocks);
  for (const BlockResult& res : results) report.block_means.push_back(res.mean);
  if (config.keep_draws) {
    report.draws.reserve(static_cast<std::size_t>(total_draws));
    for (BlockResult& res : results)
      report.draws.insert(report.draws.end(), res.draws.begin(), res.draws.end());
  }
  return report;
}

}  // namespace sc
