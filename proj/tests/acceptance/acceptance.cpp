// Acceptance suite: one PASS/FAIL line per criterion, exit status 1 if any
// criterion fails. Pass criterion numbers as arguments to run a subset.

#include "lsr/attacks.hpp"
#include "lsr/error.hpp"
#include "lsr/experiment.hpp"
#include "lsr/fading_gaussian.hpp"
#include "lsr/numerics.hpp"
#include "lsr/smoothing.hpp"
#include "lsr/training.hpp"
#include "oracle.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <functional>
#include <map>
#include <optional>
#include <random>
#include <set>
#include <string>

using namespace lsr;
namespace g = lsr::gaussian;

namespace {

struct Outcome {
  bool pass;
  std::string detail;
};

std::string fmt(const char* f, double a, double b = 0, double c = 0, double d = 0) {
  char buf[256];
  std::snprintf(buf, sizeof buf, f, a, b, c, d);
  return buf;
}

constexpr SmoothingMethod kMethods[] = {SmoothingMethod::sls, SmoothingMethod::als, SmoothingMethod::bls,
                                        SmoothingMethod::sbls};

// 1
Outcome penalty_identity() {
  std::mt19937_64 rng(101);
  std::uniform_int_distribution<std::size_t> kdist(2, 10);
  std::normal_distribution<double> z3(0.0, 3.0);
  std::uniform_real_distribution<double> u(0.0, 1.0);
  double worst = 0.0;
  for (SmoothingMethod m : kMethods) {
    for (int t = 0; t < 1000; ++t) {
      const std::size_t k = kdist(rng);
      std::vector<double> z(k);
      for (double& v : z) v = z3(rng);
      const std::size_t y = rng() % k;
      const SmoothingConfig cfg{m, u(rng), 0.5};
      const LabelDistribution q = smooth_labels(cfg, y, z);
      const LabelDistribution qp = redistribution(m, cfg.temperature, y, z);
      double pen = z[y];
      for (std::size_t j = 0; j < k; ++j) pen -= qp[j] * z[j];
      worst = std::max(worst, std::abs(smooth_ce(q, z) - (cross_entropy(y, z) + cfg.alpha * pen)));
    }
  }
  return {worst < 1e-9, fmt("max |lhs - rhs| = %.3g over 4000 draws (tol 1e-9)", worst)};
}

// 2. Brute force over the 0.01 grid of the simplex with q_t >= 1 - alpha.
double grid_best(const std::vector<double>& gv, std::size_t t, double alpha) {
  const int steps = 100;
  const int floor_t = static_cast<int>(std::ceil((1.0 - alpha) * steps - 1e-9));
  const std::size_t k = gv.size();
  double best = -INFINITY;
  std::vector<int> q(k, 0);
  std::function<void(std::size_t, int)> rec = [&](std::size_t idx, int left) {
    if (idx == k - 1) {
      q[idx] = left;
      if (q[t] < floor_t) return;
      double obj = 0.0;
      for (std::size_t j = 0; j < k; ++j) obj += q[j] * gv[j];
      best = std::max(best, obj / steps);
      return;
    }
    const int lo = idx == t ? floor_t : 0;
    for (int v = lo; v <= left; ++v) {
      q[idx] = v;
      rec(idx + 1, left - v);
    }
  };
  rec(0, steps);
  return best;
}

Outcome inner_max() {
  std::mt19937_64 rng(102);
  std::uniform_int_distribution<std::size_t> kdist(2, 5);
  std::uniform_real_distribution<double> u(-1.0, 1.0), a(0.0, 1.0);
  double worst_gap = INFINITY, worst_dist = 0.0;
  for (int t = 0; t < 500; ++t) {
    const std::size_t k = kdist(rng);
    std::vector<double> gv(k);
    for (double& v : gv) v = u(rng);
    const std::size_t target = rng() % k;
    const double alpha = a(rng);
    const LabelDistribution q = solve_inner_max(gv, target, alpha);
    double obj = 0.0;
    for (std::size_t j = 0; j < k; ++j) obj += q[j] * gv[j];
    const double grid = grid_best(gv, target, alpha);
    worst_gap = std::min(worst_gap, obj - grid);
    worst_dist = std::max(worst_dist, std::abs(obj - grid));
  }
  return {worst_gap >= -1e-12 && worst_dist <= 0.05,
          fmt("min(closed - grid) = %.3g (tol -1e-12), max |closed - grid| = %.3g (tol 0.05)", worst_gap,
              worst_dist)};
}

std::vector<double> random_unit(std::mt19937_64& rng, std::size_t d) {
  std::normal_distribution<double> n(0.0, 1.0);
  std::vector<double> w(d);
  double s = 0.0;
  for (double& v : w) {
    v = n(rng);
    s += v * v;
  }
  for (double& v : w) v /= std::sqrt(s);
  return w;
}

// 3
Outcome closed_form_vs_mc() {
  std::mt19937_64 rng(103);
  std::uniform_real_distribution<double> u(0.0, 1.0);
  std::normal_distribution<double> n(0.0, 1.0);
  double worst = 0.0;
  for (int t = 0; t < 50; ++t) {
    const std::size_t d = 1 + rng() % 10;
    std::vector<double> mu(d), sigma(d);
    for (std::size_t j = 0; j < d; ++j) {
      mu[j] = 0.5 * n(rng);
      sigma[j] = 0.1 + 0.9 * u(rng);
    }
    const g::Problem p(mu, sigma);
    const g::LinearClassifier w{random_unit(rng, d)};
    const double eps = 0.3 * u(rng);
    const double mc = g::empirical_accuracy(g::sample(p, 1000000, rng()), w, eps);
    worst = std::max(worst, std::abs(mc - g::adversarial_accuracy(p, w, eps)));
  }
  return {worst < 3e-3, fmt("max |analytic - MC| = %.3g over 50 cases (tol 3e-3)", worst)};
}

// 4
Outcome robust_optimality() {
  std::mt19937_64 rng(104);
  double worst_margin = INFINITY, worst_id = 0.0;
  for (std::size_t d : {2u, 10u}) {
    const g::Problem p = g::fading_schedule(d);
    for (double eps : {0.1, 0.2, 0.3}) {
      const auto opt = g::optimal_robust_weights(p, eps);
      const double best = opt.degenerate ? 0.5 : g::adversarial_accuracy(p, opt.classifier, eps);
      double rival = g::adversarial_accuracy(p, g::bayes_weights(p), eps);
      for (int t = 0; t < 1000; ++t) {
        rival = std::max(rival, g::adversarial_accuracy(p, g::LinearClassifier{random_unit(rng, d)}, eps));
      }
      worst_margin = std::min(worst_margin, best - rival);
      worst_id = std::max(worst_id, std::abs(best - g::normal_cdf(std::sqrt(g::robust_signal(p, eps)))));
    }
  }
  return {worst_margin >= -1e-9 && worst_id <= 1e-12,
          fmt("min margin over rivals = %.3g (tol -1e-9), max |acc - Psi(sqrt Delta)| = %.3g (tol 1e-12)",
              worst_margin, worst_id)};
}

// 5
Outcome fading_gaussian_als() {
  const g::Problem p = g::fading_schedule(10);
  g::AlsTraining cfg;
  cfg.alpha = 0.01;
  cfg.n = 20000;
  cfg.seed = 105;
  const g::LinearClassifier w = g::train_als_linear(p, cfg);
  const g::LinearClassifier bayes = g::bayes_weights(p);
  const double adv = g::adversarial_accuracy(p, w, 0.2), adv_b = g::adversarial_accuracy(p, bayes, 0.2);
  const double std_a = g::standard_accuracy(p, w), std_b = g::standard_accuracy(p, bayes);
  return {adv >= adv_b + 0.02 && std::abs(std_a - std_b) <= 0.02,
          fmt("eps=0.2: ALS %.4f vs Bayes %.4f (need +0.02); standard: ALS %.4f vs Bayes %.4f (tol 0.02)",
              adv, adv_b, std_a, std_b)};
}

// 6 and 8 share the two trained MNIST models.
struct MnistRuns {
  std::optional<std::string> error;
  EvalReport natural, als;
};

MnistRuns mnist_runs() {
  MnistRuns out;
  const char* env = std::getenv("LSROBUST_DATA_DIR");
  DatasetSpec spec;
  spec.kind = DatasetKind::mnist;
  spec.path = env && *env ? env : LSR_DEFAULT_DATA_DIR;
  spec.train_n = 10000;
  spec.test_n = 2000;
  try {
    const SplitData data = load_experiment_data(spec, 106);
    std::vector<AttackConfig> attacks{AttackConfig::fgsm(0.2)};
    EvalOptions opts;
    opts.fooling_eps_limit = 500;
    for (bool smoothed : {false, true}) {
      TrainConfig cfg;
      cfg.lr = 0.1;
      cfg.epochs = 5;
      cfg.batch_size = 64;
      cfg.seed = 107;
      if (smoothed) cfg.smoothing = SmoothingConfig{SmoothingMethod::als, 0.1};
      const DenseNetwork net = train_ls(build_model(ModelSpec{{128}}, 784, 10, 108), data.train, cfg);
      (smoothed ? out.als : out.natural) = evaluate(net, data.test, attacks, opts);
    }
  } catch (const Error& e) {
    out.error = std::string(e.kind()) + ": " + e.what();
  }
  return out;
}

Outcome mnist_table_trend(const MnistRuns& r) {
  if (r.error) return {false, "MNIST unavailable (" + *r.error + ")"};
  const double nat = r.natural.accuracy(AttackKind::fgsm, 0.2), als = r.als.accuracy(AttackKind::fgsm, 0.2);
  const bool ok = nat < 0.30 && als >= nat + 0.20 && r.als.standard_accuracy >= r.natural.standard_accuracy - 0.01;
  return {ok, fmt("FGSM eps=0.2: natural %.4f (need < 0.30), ALS %.4f (need >= natural + 0.20); standard: "
                  "natural %.4f, ALS %.4f (need >= natural - 0.01)",
                  nat, als, r.natural.standard_accuracy, r.als.standard_accuracy)};
}

Outcome mnist_gradient_gap(const MnistRuns& r) {
  if (r.error) return {false, "MNIST unavailable (" + *r.error + ")"};
  const double ratio = r.als.mean_min_fooling_eps / r.natural.mean_min_fooling_eps;
  return {ratio > 1.0 && r.als.fooling_eps_count == 500 && r.natural.fooling_eps_count == 500,
          fmt("mean min fooling eps: natural %.5f, ALS %.5f, ratio %.3f (need > 1) over %g points each",
              r.natural.mean_min_fooling_eps, r.als.mean_min_fooling_eps, ratio,
              static_cast<double>(std::min(r.als.fooling_eps_count, r.natural.fooling_eps_count)))};
}

// 7. Unique argmin: the two smallest wrong-class logits differ by >= 1e-4
// and the overall argmin is a wrong class.
Outcome bls_limits() {
  std::mt19937_64 rng(109);
  std::uniform_int_distribution<std::size_t> kdist(2, 10);
  std::uniform_real_distribution<double> u(-1.0, 1.0), a(0.0, 1.0);
  double to_als = 0.0, to_sls = 0.0;
  int unique = 0;
  for (int t = 0; t < 2000; ++t) {
    const std::size_t k = kdist(rng);
    std::vector<double> z(k);
    for (double& v : z) v = u(rng);
    const std::size_t y = rng() % k;
    const double alpha = a(rng);
    auto labels = [&](SmoothingMethod m, double temp) {
      return smooth_labels(SmoothingConfig{m, alpha, temp}, y, z);
    };
    const auto hot = labels(SmoothingMethod::bls, 1e6), sls = labels(SmoothingMethod::sls, 1.0);
    for (std::size_t j = 0; j < k; ++j) to_sls = std::max(to_sls, std::abs(hot[j] - sls[j]));

    std::vector<double> wrong;
    for (std::size_t j = 0; j < k; ++j) {
      if (j != y) wrong.push_back(z[j]);
    }
    std::sort(wrong.begin(), wrong.end());
    if (argmin(z) == y || (wrong.size() > 1 && wrong[1] - wrong[0] < 1e-4)) continue;
    ++unique;
    const auto cold = labels(SmoothingMethod::bls, 1e-6), als = labels(SmoothingMethod::als, 1.0);
    for (std::size_t j = 0; j < k; ++j) to_als = std::max(to_als, std::abs(cold[j] - als[j]));
  }
  return {to_als < 1e-9 && to_sls < 1e-6 && unique > 0,
          fmt("T=1e-6 vs ALS: %.3g (tol 1e-9, %g unique-argmin cases); T=1e6 vs SLS: %.3g (tol 1e-6)", to_als,
              unique, to_sls)};
}

// 9
Outcome attack_invariants() {
  std::mt19937_64 rng(110);
  std::uniform_real_distribution<double> u(0.0, 1.0);
  int ball = 0, box = 0, bim_fgsm = 0;
  for (int t = 0; t < 1000; ++t) {
    const std::size_t d = 2 + rng() % 9, k = 2 + rng() % 4;
    const DenseNetwork net = oracle::random_network(rng, d, k, 2, 12);
    std::vector<double> x(d);
    for (double& v : x) v = u(rng);
    const std::size_t y = rng() % k;
    const double eps = 0.5 * u(rng);
    const auto f = fgsm(net, x, y, AttackConfig::fgsm(eps));
    const auto b = bim(net, x, y, AttackConfig::bim(eps));
    const auto p = pgd(net, x, y, AttackConfig::pgd(eps, 10, eps / 4, 7), static_cast<std::uint64_t>(t));
    for (const auto* adv : {&f, &b, &p}) {
      for (std::size_t i = 0; i < d; ++i) {
        ball += std::abs(adv->x_adv[i] - x[i]) > eps + 1e-12;
        box += adv->x_adv[i] < 0.0 || adv->x_adv[i] > 1.0;
      }
    }
    bim_fgsm += bim(net, x, y, AttackConfig::bim(eps, 1, eps)).x_adv != f.x_adv;
  }

  // Accuracy against an eps grid on one fixed batch.
  const DenseNetwork net = oracle::random_network(rng, 10, 3, 1, 16);
  std::vector<std::vector<double>> xs(300, std::vector<double>(10));
  std::vector<std::size_t> ys;
  for (auto& x : xs) {
    for (double& v : x) v = u(rng);
    ys.push_back(predict(net, x));
  }
  int increases = 0;
  for (AttackKind kind : {AttackKind::fgsm, AttackKind::bim, AttackKind::pgd}) {
    double prev = 2.0;
    for (int e = 0; e <= 10; ++e) {
      const double eps = 0.03 * e;
      AttackConfig cfg = kind == AttackKind::fgsm ? AttackConfig::fgsm(eps)
                         : kind == AttackKind::bim ? AttackConfig::bim(eps)
                                                   : AttackConfig::pgd(eps, 10, eps / 4, 8);
      int correct = 0;
      for (std::size_t i = 0; i < xs.size(); ++i) {
        correct += run_attack(net, xs[i], ys[i], cfg, i).adv_class == ys[i];
      }
      const double acc = correct / 300.0;
      increases += acc > prev;
      prev = acc;
    }
  }
  return {ball == 0 && box == 0 && bim_fgsm == 0 && increases == 0,
          fmt("violations: ball %g, box %g, BIM(1) != FGSM %g, accuracy increases along eps %g (all need 0)", ball,
              box, bim_fgsm, increases)};
}

// 10
Outcome gradient_check() {
  std::mt19937_64 rng(111);
  std::uniform_real_distribution<double> u(-1.0, 1.0);
  int networks = 0, bad = 0, entries = 0;
  double worst = 0.0;
  while (networks < 100) {
    const std::size_t d = 2 + rng() % 6, k = 2 + rng() % 4;
    DenseNetwork net = oracle::random_network(rng, d, k, 3, 8);
    std::vector<double> x(d);
    for (double& v : x) v = u(rng);
    if (oracle::kink_distance(net, x) < 1e-3) continue;
    ++networks;
    const std::size_t y = rng() % k;
    for (SmoothingMethod m : kMethods) {
      const auto z = forward(net, x).logits;
      const LabelDistribution q = smooth_labels(SmoothingConfig{m, 0.3, 0.5}, y, z);
      auto loss = [&] { return smooth_ce(q, oracle::naive_forward(net, x).logits); };
      Tape tape = record_forward(net, x);
      tape.attach_loss(smooth_ce(q, tape.logits()), smooth_ce_gradient(q, tape.logits()));
      const GradientBundle grad = backward(net, tape);
      auto check = [&](double analytic, double& coord) {
        const double fd = oracle::central_difference(loss, coord, 1e-5);
        ++entries;
        if (!oracle::close(analytic, fd)) ++bad;
        const double scale = std::max(std::abs(analytic), std::abs(fd));
        if (scale > 1e-4) worst = std::max(worst, std::abs(analytic - fd) / scale);
      };
      auto& layers = net.mutable_layers();
      for (std::size_t l = 0; l < layers.size(); ++l) {
        for (std::size_t i = 0; i < layers[l].weights.size(); ++i) check(grad.weight_grads[l][i], layers[l].weights[i]);
        for (std::size_t i = 0; i < layers[l].bias.size(); ++i) check(grad.bias_grads[l][i], layers[l].bias[i]);
      }
      for (std::size_t i = 0; i < d; ++i) check((*grad.input_grad)[i], x[i]);
    }
  }
  return {bad == 0, fmt("%g of %g gradient entries off (tol rel 1e-5); worst relative error above 1e-4 magnitude %.3g", bad, entries,
                        worst)};
}

}  // namespace

int main(int argc, char** argv) {
  std::set<int> selected;
  for (int i = 1; i < argc; ++i) selected.insert(std::atoi(argv[i]));
  auto wanted = [&](int n) { return selected.empty() || selected.count(n) > 0; };

  std::optional<MnistRuns> mnist;
  double mnist_seconds = 0.0;
  auto mnist_once = [&]() -> const MnistRuns& {
    if (!mnist) {
      const auto start = std::chrono::steady_clock::now();
      mnist = mnist_runs();
      mnist_seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    }
    return *mnist;
  };

  struct Criterion {
    int id;
    const char* name;
    double limit_seconds;  // 0 = none
    std::function<Outcome()> run;
  };
  const std::vector<Criterion> criteria{
      {1, "smoothed CE equals CE plus logit penalty", 5, penalty_identity},
      {2, "inner maximization closed form vs grid", 30, inner_max},
      {3, "Gaussian closed-form accuracy vs Monte Carlo", 60, closed_form_vs_mc},
      {4, "optimal robust linear classifier", 0, robust_optimality},
      {5, "ALS linear classifier beats Bayes under attack", 120, fading_gaussian_als},
      {6, "MNIST MLP: ALS vs natural under FGSM", 600, [&] { return mnist_table_trend(mnist_once()); }},
      {7, "BLS temperature limits", 0, bls_limits},
      {8, "MNIST MLP: ALS enlarges minimal fooling eps", 0, [&] { return mnist_gradient_gap(mnist_once()); }},
      {9, "attack invariants", 0, attack_invariants},
      {10, "finite-difference gradient check", 0, gradient_check},
  };

  int failures = 0;
  for (const auto& c : criteria) {
    if (!wanted(c.id)) continue;
    const auto start = std::chrono::steady_clock::now();
    const bool reuses = c.id == 8 && mnist.has_value();
    Outcome o;
    try {
      o = c.run();
    } catch (const std::exception& e) {
      o = {false, std::string("exception: ") + e.what()};
    }
    double seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    if (c.id == 6 || (c.id == 8 && !reuses)) seconds = std::max(seconds, mnist_seconds);
    bool pass = o.pass;
    std::string detail = o.detail;
    if (c.limit_seconds > 0 && seconds > c.limit_seconds) {
      pass = false;
      detail += fmt(" [over time limit %.0f s]", c.limit_seconds);
    }
    std::printf("criterion %2d %s: %s; %s (%.1f s)\n", c.id, pass ? "PASS" : "FAIL", c.name, detail.c_str(),
                seconds);
    std::fflush(stdout);
    failures += !pass;
  }
  std::printf("%d criteria failed\n", failures);
  return failures == 0 ? 0 : 1;
}
