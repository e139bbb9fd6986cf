#include "lsr/experiment.hpp"

#include "lsr/error.hpp"
#include "lsr/fading_gaussian.hpp"
#include "lsr/kernels.hpp"
#include "lsr/model_io.hpp"
#include "lsr/numerics.hpp"

#include <algorithm>
#include <cctype>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <initializer_list>
#include <limits>
#include <map>
#include <set>
#include <sstream>
#include <tuple>

namespace lsr {

using nlohmann::json;

namespace {

// Same exception type, message prefixed.
[[noreturn]] void rethrow_with_prefix(const Error& e, const std::string& prefix) {
  const std::string m = prefix + e.what();
  const std::string_view k = e.kind();
  if (k == "shape_error") throw ShapeError(m);
  if (k == "state_error") throw StateError(m);
  if (k == "numeric_error") throw NumericError(m);
  if (k == "domain_error") throw DomainError(m);
  if (k == "convergence_error") throw ConvergenceError(m);
  if (k == "parse_error") throw ParseError(m);
  if (k == "config_error") throw ConfigError(m);
  throw Error(k, m);
}

std::string num(double v, const char* spec = "%.17g") {
  char buf[64];
  std::snprintf(buf, sizeof buf, spec, v);
  return buf;
}

void check_keys(const json& obj, std::initializer_list<const char*> allowed,
                const std::string& where) {
  if (!obj.is_object()) throw ConfigError(where + " must be an object");
  for (const auto& [key, _] : obj.items()) {
    if (std::none_of(allowed.begin(), allowed.end(), [&](const char* a) { return key == a; })) {
      throw ConfigError("unknown key '" + key + "' in " + where);
    }
  }
}

template <typename T>
T get_or(const json& obj, const char* key, T fallback, const std::string& where) {
  if (!obj.contains(key)) return fallback;
  try {
    return obj.at(key).get<T>();
  } catch (const json::exception&) {
    throw ConfigError(where + "." + key + " has the wrong type");
  }
}

std::string upper(std::string_view s) {
  std::string out(s);
  std::transform(out.begin(), out.end(), out.begin(), [](unsigned char c) { return std::toupper(c); });
  return out;
}

std::string_view dataset_name(DatasetKind k) {
  switch (k) {
    case DatasetKind::mnist: return "mnist";
    case DatasetKind::moons: return "moons";
    case DatasetKind::gaussian: return "gaussian";
  }
  return "?";
}

std::string_view defense_name(DefenseKind k) {
  switch (k) {
    case DefenseKind::none: return "none";
    case DefenseKind::ls: return "ls";
    case DefenseKind::pgd: return "pgd";
  }
  return "?";
}

// Attacks see the input box of the dataset: pixels for MNIST, unbounded
// otherwise.
std::pair<double, double> input_box(DatasetKind k) {
  if (k == DatasetKind::mnist) return {0.0, 1.0};
  const double inf = std::numeric_limits<double>::infinity();
  return {-inf, inf};
}

std::vector<AttackConfig> parse_attack_grid(const json& arr, std::uint64_t seed) {
  if (!arr.is_array()) throw ConfigError("attacks must be an array");
  std::vector<AttackConfig> out;
  for (std::size_t i = 0; i < arr.size(); ++i) {
    const json& a = arr[i];
    const std::string where = "attacks[" + std::to_string(i) + "]";
    check_keys(a, {"kind", "eps", "steps", "step_size", "seed", "overshoot", "random_start"}, where);
    AttackKind kind;
    try {
      kind = parse_attack(get_or<std::string>(a, "kind", "", where));
    } catch (const ParseError& e) {
      throw ConfigError(where + ": " + e.what());
    }
    if (kind == AttackKind::deepfool) {
      AttackConfig c = AttackConfig::deepfool();
      c.steps = get_or<int>(a, "steps", c.steps, where);
      c.overshoot = get_or<double>(a, "overshoot", c.overshoot, where);
      out.push_back(c);
      continue;
    }
    std::vector<double> eps;
    if (!a.contains("eps")) throw ConfigError(where + " needs eps");
    if (a.at("eps").is_array()) {
      eps = get_or<std::vector<double>>(a, "eps", {}, where);
    } else {
      eps.push_back(get_or<double>(a, "eps", 0.0, where));
    }
    for (double e : eps) {
      AttackConfig c;
      switch (kind) {
        case AttackKind::fgsm:
          c = AttackConfig::fgsm(e);
          break;
        case AttackKind::bim:
          c = AttackConfig::bim(e, get_or<int>(a, "steps", 10, where));
          if (a.contains("step_size")) c.step_size = get_or<double>(a, "step_size", 0.0, where);
          break;
        case AttackKind::pgd: {
          const int steps = get_or<int>(a, "steps", 10, where);
          const double step = get_or<double>(a, "step_size", e / 4.0, where);
          c = AttackConfig::pgd(e, steps, step,
                                get_or<std::uint64_t>(a, "seed", mix_seed(seed, 0x5EED), where));
          c.random_start = get_or<bool>(a, "random_start", true, where);
          break;
        }
        case AttackKind::deepfool:
          break;
      }
      out.push_back(c);
    }
  }
  return out;
}

json attack_to_json(const AttackConfig& c) {
  json j{{"kind", attack_name(c.kind)}};
  switch (c.kind) {
    case AttackKind::fgsm:
      j["eps"] = c.epsilon;
      break;
    case AttackKind::bim:
      j["eps"] = c.epsilon;
      j["steps"] = c.steps;
      j["step_size"] = c.step_size;
      break;
    case AttackKind::pgd:
      j["eps"] = c.epsilon;
      j["steps"] = c.steps;
      j["step_size"] = c.step_size;
      j["seed"] = c.seed;
      j["random_start"] = c.random_start;
      break;
    case AttackKind::deepfool:
      j["steps"] = c.steps;
      j["overshoot"] = c.overshoot;
      break;
  }
  return j;
}

std::uint64_t fnv1a(std::string_view s) {
  std::uint64_t h = 0xcbf29ce484222325ULL;
  for (unsigned char c : s) {
    h ^= c;
    h *= 0x100000001b3ULL;
  }
  return h;
}

}  // namespace

// Config

ExperimentConfig ExperimentConfig::from_json(const json& doc) {
  check_keys(doc, {"seed", "dataset", "model", "training", "defense", "attacks", "eval", "output_dir"},
             "config");
  ExperimentConfig cfg;
  cfg.seed = get_or<std::uint64_t>(doc, "seed", 0, "config");

  if (doc.contains("dataset")) {
    const json& d = doc.at("dataset");
    check_keys(d, {"kind", "path", "train_n", "test_n", "noise", "d"}, "dataset");
    const std::string kind = get_or<std::string>(d, "kind", "mnist", "dataset");
    if (kind == "mnist") {
      cfg.dataset.kind = DatasetKind::mnist;
    } else if (kind == "moons") {
      cfg.dataset.kind = DatasetKind::moons;
      cfg.dataset.train_n = 1000;
      cfg.dataset.test_n = 1000;
    } else if (kind == "gaussian") {
      cfg.dataset.kind = DatasetKind::gaussian;
      cfg.dataset.train_n = 20000;
      cfg.dataset.test_n = 20000;
    } else {
      throw ConfigError("unknown dataset kind '" + kind + "'");
    }
    cfg.dataset.path = get_or<std::string>(d, "path", "", "dataset");
    cfg.dataset.train_n = get_or<std::size_t>(d, "train_n", cfg.dataset.train_n, "dataset");
    cfg.dataset.test_n = get_or<std::size_t>(d, "test_n", cfg.dataset.test_n, "dataset");
    cfg.dataset.noise = get_or<double>(d, "noise", cfg.dataset.noise, "dataset");
    cfg.dataset.dim = get_or<std::size_t>(d, "d", cfg.dataset.dim, "dataset");
  }

  if (doc.contains("model")) {
    const json& m = doc.at("model");
    check_keys(m, {"kind", "hidden"}, "model");
    const std::string kind = get_or<std::string>(m, "kind", "linear", "model");
    if (kind == "mlp") {
      cfg.model.hidden = get_or<std::vector<std::size_t>>(m, "hidden", {128}, "model");
    } else if (kind != "linear") {
      throw ConfigError("unknown model kind '" + kind + "'");
    } else if (m.contains("hidden")) {
      throw ConfigError("a linear model takes no hidden widths");
    }
  }

  if (doc.contains("training")) {
    const json& t = doc.at("training");
    check_keys(t, {"lr", "epochs", "batch"}, "training");
    if (t.contains("lr")) cfg.lr = get_or<double>(t, "lr", 0.0, "training");
    cfg.epochs = get_or<int>(t, "epochs", cfg.epochs, "training");
    cfg.batch_size = get_or<std::size_t>(t, "batch", cfg.batch_size, "training");
  }

  if (doc.contains("defense")) {
    const json& d = doc.at("defense");
    const std::string kind = get_or<std::string>(d, "kind", "none", "defense");
    if (kind == "none") {
      check_keys(d, {"kind"}, "defense");
    } else if (kind == "ls") {
      check_keys(d, {"kind", "method", "alpha", "temperature"}, "defense");
      cfg.defense.kind = DefenseKind::ls;
      try {
        cfg.defense.smoothing.method = parse_method(get_or<std::string>(d, "method", "als", "defense"));
      } catch (const ParseError& e) {
        throw ConfigError(std::string("defense: ") + e.what());
      }
      cfg.defense.smoothing.alpha = get_or<double>(d, "alpha", 0.1, "defense");
      cfg.defense.smoothing.temperature =
          get_or<double>(d, "temperature", kDefaultTemperature, "defense");
    } else if (kind == "pgd") {
      check_keys(d, {"kind", "eps", "step", "iters"}, "defense");
      cfg.defense.kind = DefenseKind::pgd;
      cfg.defense.pgd.epsilon = get_or<double>(d, "eps", cfg.defense.pgd.epsilon, "defense");
      cfg.defense.pgd.step = get_or<double>(d, "step", cfg.defense.pgd.step, "defense");
      cfg.defense.pgd.iterations = get_or<int>(d, "iters", cfg.defense.pgd.iterations, "defense");
    } else {
      throw ConfigError("unknown defense kind '" + kind + "'");
    }
  }

  if (doc.contains("attacks")) cfg.attacks = parse_attack_grid(doc.at("attacks"), cfg.seed);

  if (doc.contains("eval")) {
    const json& e = doc.at("eval");
    check_keys(e, {"fooling_eps", "fooling_eps_limit"}, "eval");
    cfg.eval.fooling_eps = get_or<bool>(e, "fooling_eps", cfg.eval.fooling_eps, "eval");
    cfg.eval.fooling_eps_limit =
        get_or<std::size_t>(e, "fooling_eps_limit", cfg.eval.fooling_eps_limit, "eval");
  }

  cfg.output_dir = get_or<std::string>(doc, "output_dir", "", "config");
  cfg.validate();
  return cfg;
}

json ExperimentConfig::to_json() const {
  json dataset{{"kind", dataset_name(this->dataset.kind)},
               {"train_n", this->dataset.train_n},
               {"test_n", this->dataset.test_n}};
  switch (this->dataset.kind) {
    case DatasetKind::mnist: dataset["path"] = this->dataset.path.string(); break;
    case DatasetKind::moons: dataset["noise"] = this->dataset.noise; break;
    case DatasetKind::gaussian: dataset["d"] = this->dataset.dim; break;
  }
  json model = model_is_linear() ? json{{"kind", "linear"}}
                                 : json{{"kind", "mlp"}, {"hidden", this->model.hidden}};
  json defense{{"kind", defense_name(this->defense.kind)}};
  if (this->defense.kind == DefenseKind::ls) {
    defense["method"] = method_name(this->defense.smoothing.method);
    defense["alpha"] = this->defense.smoothing.alpha;
    defense["temperature"] = this->defense.smoothing.temperature;
  } else if (this->defense.kind == DefenseKind::pgd) {
    defense["eps"] = this->defense.pgd.epsilon;
    defense["step"] = this->defense.pgd.step;
    defense["iters"] = this->defense.pgd.iterations;
  }
  json attacks = json::array();
  for (const auto& a : this->attacks) attacks.push_back(attack_to_json(a));
  return {{"seed", seed},
          {"dataset", std::move(dataset)},
          {"model", std::move(model)},
          {"training", {{"lr", train_config().lr}, {"epochs", epochs}, {"batch", batch_size}}},
          {"defense", std::move(defense)},
          {"attacks", std::move(attacks)},
          {"eval", {{"fooling_eps", eval.fooling_eps}, {"fooling_eps_limit", eval.fooling_eps_limit}}},
          {"output_dir", output_dir.string()}};
}

bool ExperimentConfig::model_is_linear() const noexcept { return model.hidden.empty(); }

void ExperimentConfig::validate() const {
  if (dataset.kind == DatasetKind::mnist && dataset.path.empty()) {
    throw ConfigError("dataset.path is required for mnist");
  }
  if (dataset.kind != DatasetKind::mnist && (dataset.train_n < 2 || dataset.test_n < 2)) {
    throw DomainError("synthetic datasets need train_n, test_n >= 2");
  }
  if (dataset.kind == DatasetKind::gaussian && dataset.dim < 1) {
    throw DomainError("gaussian dataset needs d >= 1");
  }
  if (!(dataset.noise >= 0.0)) throw DomainError("dataset noise must be >= 0");
  for (std::size_t w : model.hidden) {
    if (w == 0) throw DomainError("hidden widths must be >= 1");
  }
  train_config().validate();
  if (defense.kind == DefenseKind::ls) defense.smoothing.validate();
  for (const auto& a : attacks) a.validate();
}

TrainConfig ExperimentConfig::train_config() const {
  TrainConfig t;
  t.lr = lr.value_or(model_is_linear() ? kDefaultLinearLr : kDefaultMlpLr);
  t.epochs = epochs;
  t.batch_size = batch_size;
  t.seed = mix_seed(seed, 0x7EA1);
  if (defense.kind == DefenseKind::ls) t.smoothing = defense.smoothing;
  if (defense.kind == DefenseKind::pgd) t.adversarial = defense.pgd;
  std::tie(t.clip_min, t.clip_max) = input_box(dataset.kind);
  return t;
}

std::string ExperimentConfig::defense_label() const {
  switch (defense.kind) {
    case DefenseKind::none: return "Normal classifier";
    case DefenseKind::ls: return upper(method_name(defense.smoothing.method));
    case DefenseKind::pgd: return "PGD training";
  }
  return "?";
}

std::string config_hash(const ExperimentConfig& cfg) {
  json j = cfg.to_json();
  j.erase("output_dir");
  char buf[17];
  std::snprintf(buf, sizeof buf, "%016llx", static_cast<unsigned long long>(fnv1a(j.dump())));
  return buf;
}

// Data and model

SplitData load_experiment_data(const DatasetSpec& spec, std::uint64_t seed) {
  switch (spec.kind) {
    case DatasetKind::mnist: {
      const Dataset train = load_mnist_idx(spec.path / "train-images-idx3-ubyte",
                                           spec.path / "train-labels-idx1-ubyte");
      const Dataset test = load_mnist_idx(spec.path / "t10k-images-idx3-ubyte",
                                          spec.path / "t10k-labels-idx1-ubyte");
      auto pick = [](const Dataset& ds, std::size_t n, std::uint64_t s) {
        return n == 0 || n == ds.size() ? ds : subset(ds, n, s).data;
      };
      return {pick(train, spec.train_n, mix_seed(seed, 1)), pick(test, spec.test_n, mix_seed(seed, 2))};
    }
    case DatasetKind::moons:
      return {two_moons(spec.train_n, spec.noise, mix_seed(seed, 1)),
              two_moons(spec.test_n, spec.noise, mix_seed(seed, 2))};
    case DatasetKind::gaussian: {
      const gaussian::Problem p = gaussian::fading_schedule(spec.dim);
      return {to_dataset(gaussian::sample(p, spec.train_n, mix_seed(seed, 1))),
              to_dataset(gaussian::sample(p, spec.test_n, mix_seed(seed, 2)))};
    }
  }
  throw ConfigError("unknown dataset kind");
}

DenseNetwork build_model(const ModelSpec& spec, std::size_t input_dim, std::size_t classes,
                         std::uint64_t seed) {
  std::vector<std::size_t> widths{input_dim};
  widths.insert(widths.end(), spec.hidden.begin(), spec.hidden.end());
  widths.push_back(classes);
  return DenseNetwork::initialized(widths, seed);
}

// Reports

json report_to_json(const LabeledReport& r) {
  json adv = json::array();
  for (const auto& a : r.report.adversarial) {
    adv.push_back({{"attack", attack_name(a.kind)}, {"epsilon", a.epsilon}, {"accuracy", a.accuracy}});
  }
  json j{{"defense", r.defense},
         {"alpha", r.alpha ? json(*r.alpha) : json(nullptr)},
         {"class_count", r.report.class_count},
         {"examples", r.report.examples},
         {"standard_accuracy", r.report.standard_accuracy},
         {"adversarial", std::move(adv)},
         {"fooling_eps_count", r.report.fooling_eps_count}};
  j["mean_min_fooling_eps"] =
      std::isfinite(r.report.mean_min_fooling_eps) ? json(r.report.mean_min_fooling_eps) : json(nullptr);
  return j;
}

LabeledReport report_from_json(const json& doc) {
  try {
    LabeledReport r;
    r.defense = doc.at("defense").get<std::string>();
    if (!doc.at("alpha").is_null()) r.alpha = doc.at("alpha").get<double>();
    r.report.class_count = doc.at("class_count").get<std::size_t>();
    r.report.examples = doc.at("examples").get<std::size_t>();
    r.report.standard_accuracy = doc.at("standard_accuracy").get<double>();
    for (const auto& a : doc.at("adversarial")) {
      r.report.adversarial.push_back({parse_attack(a.at("attack").get<std::string>()),
                                      a.at("epsilon").get<double>(), a.at("accuracy").get<double>()});
    }
    r.report.fooling_eps_count = doc.at("fooling_eps_count").get<std::size_t>();
    const json& m = doc.at("mean_min_fooling_eps");
    r.report.mean_min_fooling_eps = m.is_null() ? std::numeric_limits<double>::quiet_NaN() : m.get<double>();
    return r;
  } catch (const json::exception& e) {
    throw ParseError(std::string("malformed report: ") + e.what());
  } catch (const ParseError& e) {
    throw ParseError(std::string("malformed report: ") + e.what());
  }
}

std::string results_csv(const LabeledReport& r) {
  std::ostringstream out;
  out << "defense,alpha,attack,epsilon,accuracy,below_chance\n";
  const std::string alpha = r.alpha ? num(*r.alpha, "%g") : "";
  auto row = [&](std::string_view attack, double eps, double acc) {
    out << r.defense << ',' << alpha << ',' << attack << ',' << num(eps, "%g") << ','
        << num(acc, "%.6f") << ',' << (r.report.below_chance(acc) ? 1 : 0) << '\n';
  };
  row("clean", 0.0, r.report.standard_accuracy);
  for (const auto& a : r.report.adversarial) row(attack_name(a.kind), a.epsilon, a.accuracy);
  return out.str();
}

ExperimentResult run_experiment(const ExperimentConfig& cfg) {
  const auto start = std::chrono::steady_clock::now();
  ExperimentResult result{{}, DenseNetwork({DenseLayer{1, 1, {0.0}, {0.0}, Activation::identity}}), {}, {}};
  try {
    result.hash = config_hash(cfg);
    cfg.validate();
    const SplitData data = load_experiment_data(cfg.dataset, cfg.seed);
    DenseNetwork net = build_model(cfg.model, data.train.dim(), data.train.class_count(),
                                   mix_seed(cfg.seed, 0x1417));
    const TrainConfig train = cfg.train_config();
    net = cfg.defense.kind == DefenseKind::pgd
              ? train_pgd_adversarial(std::move(net), data.train, train, &result.stats)
              : train_ls(std::move(net), data.train, train, &result.stats);

    std::vector<AttackConfig> attacks = cfg.attacks;
    for (auto& a : attacks) std::tie(a.clip_min, a.clip_max) = input_box(cfg.dataset.kind);
    result.report.defense = cfg.defense_label();
    if (cfg.defense.kind == DefenseKind::ls) result.report.alpha = cfg.defense.smoothing.alpha;
    result.report.report = evaluate(net, data.test, attacks, cfg.eval);
    result.model = std::move(net);
  } catch (const Error& e) {
    rethrow_with_prefix(e, "config " + result.hash + ": ");
  }

  if (!cfg.output_dir.empty()) {
    const auto& dir = cfg.output_dir;
    write_text_file(dir / "results.csv", results_csv(result.report));
    write_text_file(dir / "report.json", report_to_json(result.report).dump(2) + "\n");
    save_network(result.model, dir / "model.json");
    const double wall = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    json manifest{{"config_hash", result.hash},
                  {"seed", cfg.seed},
                  {"version", kVersion},
                  {"kernels", kernels::isa_name(kernels::active_isa())},
                  {"wall_clock_seconds", wall},
                  {"train_seconds", result.stats.seconds},
                  {"config", cfg.to_json()},
                  {"files", {"results.csv", "report.json", "model.json"}}};
    write_text_file(dir / "manifest.json", manifest.dump(2) + "\n");
  }
  return result;
}

// Tables

std::vector<Table> make_tables(const std::vector<LabeledReport>& reports) {
  if (reports.empty()) throw ConfigError("no reports to tabulate");
  const std::size_t classes = reports.front().report.class_count;
  for (const auto& r : reports) {
    if (r.report.class_count != classes) {
      throw ConfigError("reports mix class counts " + std::to_string(classes) + " and " +
                        std::to_string(r.report.class_count));
    }
  }
  const double chance = reports.front().report.chance_level();

  auto render = [&](const std::string& name, const std::vector<std::string>& headers,
                    const std::vector<std::vector<std::optional<double>>>& cells) {
    std::vector<double> best(headers.size(), -std::numeric_limits<double>::infinity());
    for (const auto& row : cells) {
      for (std::size_t c = 0; c < headers.size(); ++c) {
        if (row[c]) best[c] = std::max(best[c], *row[c]);
      }
    }
    std::ostringstream out;
    out << "defense,alpha";
    for (const auto& h : headers) out << ',' << h;
    out << '\n';
    for (std::size_t r = 0; r < reports.size(); ++r) {
      out << reports[r].defense << ',' << (reports[r].alpha ? num(*reports[r].alpha, "%g") : "");
      for (std::size_t c = 0; c < headers.size(); ++c) {
        out << ',';
        if (!cells[r][c]) continue;
        const double v = *cells[r][c];
        out << num(v, "%.3f");
        if (v < chance) {
          out << '!';
        } else if (v == best[c]) {
          out << '*';
        }
      }
      out << '\n';
    }
    return Table{name, out.str()};
  };

  std::vector<Table> tables;
  std::map<AttackKind, std::set<double>> columns;
  for (const auto& r : reports) {
    for (const auto& a : r.report.adversarial) columns[a.kind].insert(a.epsilon);
  }
  for (const auto& [kind, eps_set] : columns) {
    const std::vector<double> eps(eps_set.begin(), eps_set.end());
    std::vector<std::string> headers;
    for (double e : eps) headers.push_back(num(e, "%g"));
    std::vector<std::vector<std::optional<double>>> cells(reports.size(),
                                                          std::vector<std::optional<double>>(eps.size()));
    for (std::size_t r = 0; r < reports.size(); ++r) {
      for (const auto& a : reports[r].report.adversarial) {
        if (a.kind != kind) continue;
        const auto at = std::lower_bound(eps.begin(), eps.end(), a.epsilon) - eps.begin();
        cells[r][static_cast<std::size_t>(at)] = a.accuracy;
      }
    }
    tables.push_back(render(std::string(attack_name(kind)), headers, cells));
  }
  std::vector<std::vector<std::optional<double>>> standard;
  for (const auto& r : reports) standard.push_back({r.report.standard_accuracy});
  tables.push_back(render("standard", {"accuracy"}, standard));
  return tables;
}

// Fading Gaussian study

GaussianStudyResult run_gaussian_study(const GaussianStudyConfig& cfg) {
  if (cfg.dim < 1) throw DomainError("gaussian study needs d >= 1");
  std::vector<double> grid = cfg.eps_grid;
  if (grid.empty()) {
    for (int i = 0; i <= 30; ++i) grid.push_back(0.02 * i);
  }
  for (double e : grid) {
    if (!(e >= 0.0)) throw DomainError("eps grid values must be >= 0");
  }
  const gaussian::Problem p = gaussian::fading_schedule(cfg.dim);
  GaussianStudyResult result;

  auto curve_of = [&](const std::string& name, auto&& acc) {
    Curve c{name, {}};
    for (double e : grid) c.points.emplace_back(e, acc(e));
    result.curves.push_back(std::move(c));
  };

  const gaussian::LinearClassifier bayes = gaussian::bayes_weights(p);
  curve_of("bayes", [&](double e) { return gaussian::adversarial_accuracy(p, bayes, e); });
  curve_of("optimal", [&](double e) { return gaussian::optimal_adv_accuracy(p, e); });
  result.weights.emplace_back("bayes", bayes.w);
  for (double alpha : cfg.alphas) {
    gaussian::AlsTraining t;
    t.alpha = alpha;
    t.n = cfg.n;
    t.epochs = cfg.epochs;
    t.lr = cfg.lr;
    t.seed = cfg.seed;
    const gaussian::LinearClassifier w = gaussian::train_als_linear(p, t);
    const std::string name = "als_alpha_" + num(alpha, "%g");
    curve_of(name, [&](double e) { return gaussian::adversarial_accuracy(p, w, e); });
    result.weights.emplace_back(name, w.w);
  }

  if (!cfg.output_dir.empty()) {
    const auto& dir = cfg.output_dir;
    for (const auto& c : result.curves) {
      std::string text;
      for (const auto& [e, a] : c.points) text += num(e, "%.12g") + ' ' + num(a, "%.12g") + '\n';
      write_text_file(dir / "curves" / (c.name + ".txt"), text);
    }
    std::string weights = "classifier";
    for (std::size_t j = 1; j <= cfg.dim; ++j) weights += ",w" + std::to_string(j);
    weights += '\n';
    for (const auto& [name, w] : result.weights) {
      weights += name;
      for (double v : w) weights += ',' + num(v, "%.12g");
      weights += '\n';
    }
    write_text_file(dir / "weights.csv", weights);

    const gaussian::Sample cloud =
        gaussian::sample(gaussian::fading_schedule(2), cfg.cloud_n, mix_seed(cfg.seed, 2));
    std::string samples;
    for (std::size_t i = 0; i < cloud.size(); ++i) {
      const auto x = cloud.row(i);
      samples += num(x[0], "%.12g") + ' ' + num(x[1], "%.12g") + ' ' + std::to_string(cloud.y[i]) + '\n';
    }
    write_text_file(dir / "samples_d2.txt", samples);
    write_text_file(dir / "boundaries_d2.txt", "1 1\n4 1\n");
  }
  return result;
}

}  // namespace lsr
