// lsrobust: train, attack and evaluate label-smoothed models; emit tables
// and fading-Gaussian curves.

#include "lsr/error.hpp"
#include "lsr/experiment.hpp"
#include "lsr/model_io.hpp"
#include "lsr/numerics.hpp"

#include <CLI11.hpp>
#include <json.hpp>

#include <cstdlib>
#include <iostream>
#include <sstream>

using nlohmann::json;

namespace {

struct CommonFlags {
  std::string config;
  std::uint64_t seed = 0;
  std::string dataset = "mnist";
  std::string data_dir;
  std::size_t train_n = 0;
  std::size_t test_n = 0;
  double noise = 0.1;
  std::size_t dim = 10;
  std::string model = "linear";
  std::vector<std::size_t> hidden;
  std::string defense = "none";
  std::string method = "als";
  double alpha = 0.1;
  double temperature = lsr::kDefaultTemperature;
  double pgd_eps = 0.25;
  double pgd_step = 0.1;
  int pgd_iters = 3;
  double lr = 0.0;
  int epochs = 5;
  std::size_t batch = lsr::kDefaultBatchSize;
  std::vector<std::string> attacks;
  std::size_t fooling_limit = 0;
  bool no_fooling = false;
};

void add_data_flags(CLI::App* cmd, CommonFlags& f) {
  cmd->add_option("--config", f.config, "JSON experiment config; flags given explicitly override it");
  cmd->add_option("--seed", f.seed, "Seed for data subsets, init, shuffling and PGD");
  cmd->add_option("--dataset", f.dataset, "mnist | moons | gaussian")
      ->check(CLI::IsMember({"mnist", "moons", "gaussian"}));
  cmd->add_option("--data-dir", f.data_dir, "MNIST IDX directory (default $LSROBUST_DATA_DIR)");
  cmd->add_option("--train-n", f.train_n, "Training examples (mnist: 0 = all)");
  cmd->add_option("--test-n", f.test_n, "Test examples (mnist: 0 = all)");
  cmd->add_option("--noise", f.noise, "moons noise std");
  cmd->add_option("--dim", f.dim, "gaussian dimension");
}

void add_train_flags(CLI::App* cmd, CommonFlags& f) {
  cmd->add_option("--model", f.model, "linear | mlp")->check(CLI::IsMember({"linear", "mlp"}));
  cmd->add_option("--hidden", f.hidden, "Hidden widths for mlp")->delimiter(',');
  cmd->add_option("--defense", f.defense, "none | ls | pgd")->check(CLI::IsMember({"none", "ls", "pgd"}));
  cmd->add_option("--method", f.method, "sls | als | bls | sbls");
  cmd->add_option("--alpha", f.alpha, "Smoothing mass");
  cmd->add_option("--temperature", f.temperature, "BLS temperature");
  cmd->add_option("--pgd-eps", f.pgd_eps, "PGD training budget");
  cmd->add_option("--pgd-step", f.pgd_step, "PGD training step");
  cmd->add_option("--pgd-iters", f.pgd_iters, "PGD training iterations");
  cmd->add_option("--lr", f.lr, "Learning rate (default 0.1 linear, 0.01 mlp)");
  cmd->add_option("--epochs", f.epochs, "Epochs");
  cmd->add_option("--batch", f.batch, "Mini-batch size");
}

void add_attack_flags(CLI::App* cmd, CommonFlags& f) {
  cmd->add_option("--attack", f.attacks,
                  "Attack spec kind[:eps,eps,...], e.g. fgsm:0.05,0.2 or deepfool (repeatable)");
  cmd->add_option("--fooling-limit", f.fooling_limit, "Examples in the min-fooling-eps mean (0 = all)");
  cmd->add_flag("--no-fooling-eps", f.no_fooling, "Skip the min-fooling-eps statistic");
}

bool given(const CLI::App* cmd, const char* name) { return cmd->count(name) > 0; }

json attack_spec(const std::string& spec) {
  const auto colon = spec.find(':');
  json a{{"kind", spec.substr(0, colon)}};
  if (colon == std::string::npos) return a;
  json eps = json::array();
  std::stringstream ss(spec.substr(colon + 1));
  std::string item;
  while (std::getline(ss, item, ',')) {
    try {
      std::size_t used = 0;
      eps.push_back(std::stod(item, &used));
      if (used != item.size()) throw std::invalid_argument(item);
    } catch (const std::exception&) {
      throw lsr::ConfigError("bad epsilon '" + item + "' in attack spec '" + spec + "'");
    }
  }
  a["eps"] = eps;
  return a;
}

// The config file supplies the base document; explicit flags overwrite its
// fields.
lsr::ExperimentConfig build_config(const CLI::App* cmd, const CommonFlags& f) {
  json doc = json::object();
  if (!f.config.empty()) {
    try {
      doc = json::parse(lsr::read_text_file(f.config));
    } catch (const json::exception& e) {
      throw lsr::ParseError(f.config + ": " + e.what());
    }
  }
  auto set = [&](const char* flag, json& target, const char* key, const json& value) {
    if (given(cmd, flag) || !target.contains(key)) target[key] = value;
  };
  set("--seed", doc, "seed", f.seed);

  json& ds = doc["dataset"];
  if (ds.is_null()) ds = json::object();
  const bool kind_changed = given(cmd, "--dataset") && ds.value("kind", "mnist") != f.dataset;
  if (kind_changed) ds = json::object();
  set("--dataset", ds, "kind", f.dataset);
  const std::string kind = ds["kind"];
  if (kind == "mnist") {
    std::string dir = f.data_dir;
    if (dir.empty()) {
      if (const char* env = std::getenv("LSROBUST_DATA_DIR")) dir = env;
    }
    if (given(cmd, "--data-dir") || (!ds.contains("path") && !dir.empty())) ds["path"] = dir;
  } else {
    if (kind == "moons" && given(cmd, "--noise")) ds["noise"] = f.noise;
    if (kind == "gaussian" && given(cmd, "--dim")) ds["d"] = f.dim;
  }
  if (given(cmd, "--train-n")) ds["train_n"] = f.train_n;
  if (given(cmd, "--test-n")) ds["test_n"] = f.test_n;

  if (cmd->get_option_no_throw("--model") != nullptr) {
    json& m = doc["model"];
    if (m.is_null()) m = json::object();
    if (given(cmd, "--model")) m = json{{"kind", f.model}};
    if (!m.contains("kind")) m["kind"] = f.model;
    if (given(cmd, "--hidden")) m["hidden"] = f.hidden;

    json& t = doc["training"];
    if (t.is_null()) t = json::object();
    if (given(cmd, "--lr")) t["lr"] = f.lr;
    if (given(cmd, "--epochs")) t["epochs"] = f.epochs;
    if (given(cmd, "--batch")) t["batch"] = f.batch;

    json& d = doc["defense"];
    if (d.is_null()) d = json::object();
    if (given(cmd, "--defense")) d = json{{"kind", f.defense}};
    if (!d.contains("kind")) d["kind"] = f.defense;
    if (d["kind"] == "ls") {
      set("--method", d, "method", f.method);
      set("--alpha", d, "alpha", f.alpha);
      set("--temperature", d, "temperature", f.temperature);
    } else if (d["kind"] == "pgd") {
      set("--pgd-eps", d, "eps", f.pgd_eps);
      set("--pgd-step", d, "step", f.pgd_step);
      set("--pgd-iters", d, "iters", f.pgd_iters);
    }
  }

  if (cmd->get_option_no_throw("--attack") != nullptr) {
    if (given(cmd, "--attack")) {
      json attacks = json::array();
      for (const auto& s : f.attacks) attacks.push_back(attack_spec(s));
      doc["attacks"] = attacks;
    }
    json& e = doc["eval"];
    if (e.is_null()) e = json::object();
    if (given(cmd, "--fooling-limit")) e["fooling_eps_limit"] = f.fooling_limit;
    if (f.no_fooling) e["fooling_eps"] = false;
  }
  doc.erase("output_dir");
  return lsr::ExperimentConfig::from_json(doc);
}

json stats_json(const lsr::TrainStats& s) {
  return {{"epoch_loss", s.epoch_loss}, {"train_seconds", s.seconds}};
}

int fail(std::string_view kind, const std::string& message) {
  std::cerr << json{{"error", kind}, {"message", message}}.dump() << std::endl;
  return 1;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Label-smoothing robustness experiments"};
  app.require_subcommand(1);
  CommonFlags f;

  std::string model_path;
  std::string out;

  auto* train = app.add_subcommand("train", "Train a model and save it as JSON");
  add_data_flags(train, f);
  add_train_flags(train, f);
  train->add_option("--out", model_path, "Model file to write")->required();

  auto* eval = app.add_subcommand("eval", "Evaluate a saved model on the test split");
  add_data_flags(eval, f);
  add_attack_flags(eval, f);
  eval->add_option("--model-file", model_path, "Model JSON")->required();
  eval->add_option("--out", out, "Write report.json here");
  std::string label = "model";
  std::optional<double> label_alpha;
  eval->add_option("--label", label, "Row label used in tables");
  eval->add_option("--label-alpha", label_alpha, "Alpha shown next to the row label");

  std::size_t index = 0;
  std::size_t count = 1;
  auto* attack = app.add_subcommand("attack", "Attack test examples of a saved model");
  add_data_flags(attack, f);
  add_attack_flags(attack, f);
  attack->add_option("--model-file", model_path, "Model JSON")->required();
  attack->add_option("--index", index, "First test example");
  attack->add_option("--count", count, "Number of examples");
  attack->add_option("--out", out, "Write adversarial inputs (one row per line) here");

  auto* run = app.add_subcommand("run", "Train, evaluate and write all artifacts of one experiment");
  add_data_flags(run, f);
  add_train_flags(run, f);
  add_attack_flags(run, f);
  run->add_option("--out", out, "Output directory")->required();

  lsr::GaussianStudyConfig g;
  std::string gout;
  auto* gauss = app.add_subcommand("gaussian", "Fading-Gaussian accuracy curves and weights");
  gauss->add_option("--dim", g.dim, "Dimension d");
  gauss->add_option("--alphas", g.alphas, "ALS alphas")->delimiter(',');
  gauss->add_option("--eps", g.eps_grid, "Epsilon grid")->delimiter(',');
  gauss->add_option("--seed", g.seed, "Seed");
  gauss->add_option("--n", g.n, "Training sample size");
  gauss->add_option("--epochs", g.epochs, "Gradient-descent epochs");
  gauss->add_option("--lr", g.lr, "Gradient-descent step");
  gauss->add_option("--out", gout, "Output directory")->required();

  std::vector<std::string> runs;
  auto* report = app.add_subcommand("report", "Tabulate report.json files of several runs");
  report->add_option("runs", runs, "Run directories or report.json files")->required();
  report->add_option("--out", out, "Directory for <attack>.csv tables");

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::CallForAllHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    return fail("usage_error", e.what());
  }

  try {
    if (*train) {
      const lsr::ExperimentConfig cfg = build_config(train, f);
      const lsr::SplitData data = lsr::load_experiment_data(cfg.dataset, cfg.seed);
      lsr::DenseNetwork net = lsr::build_model(cfg.model, data.train.dim(), data.train.class_count(),
                                               lsr::mix_seed(cfg.seed, 0x1417));
      lsr::TrainStats stats;
      const lsr::TrainConfig tc = cfg.train_config();
      net = cfg.defense.kind == lsr::DefenseKind::pgd
                ? lsr::train_pgd_adversarial(std::move(net), data.train, tc, &stats)
                : lsr::train_ls(std::move(net), data.train, tc, &stats);
      lsr::save_network(net, model_path);
      json summary = stats_json(stats);
      summary["model"] = model_path;
      summary["train_accuracy"] = lsr::accuracy(net, data.train);
      summary["test_accuracy"] = lsr::accuracy(net, data.test);
      std::cout << summary.dump() << "\n";
    } else if (*eval) {
      const lsr::ExperimentConfig cfg = build_config(eval, f);
      const lsr::DenseNetwork net = lsr::load_network(model_path);
      const lsr::SplitData data = lsr::load_experiment_data(cfg.dataset, cfg.seed);
      std::vector<lsr::AttackConfig> attacks = cfg.attacks;
      for (auto& a : attacks) {
        a.clip_min = cfg.train_config().clip_min;
        a.clip_max = cfg.train_config().clip_max;
      }
      lsr::LabeledReport r{label, label_alpha, lsr::evaluate(net, data.test, attacks, cfg.eval)};
      const json j = lsr::report_to_json(r);
      if (!out.empty()) lsr::write_text_file(out, j.dump(2) + "\n");
      std::cout << j.dump() << "\n";
    } else if (*attack) {
      const lsr::ExperimentConfig cfg = build_config(attack, f);
      if (cfg.attacks.empty()) throw lsr::ConfigError("attack needs --attack");
      const lsr::DenseNetwork net = lsr::load_network(model_path);
      const lsr::SplitData data = lsr::load_experiment_data(cfg.dataset, cfg.seed);
      if (index + count > data.test.size()) throw lsr::DomainError("example range exceeds the test split");
      std::ostringstream rows;
      json results = json::array();
      for (auto a : cfg.attacks) {
        a.clip_min = cfg.train_config().clip_min;
        a.clip_max = cfg.train_config().clip_max;
        for (std::size_t i = index; i < index + count; ++i) {
          const lsr::AdversarialExample adv = lsr::run_attack(net, data.test.row(i), data.test.label(i), a, i);
          results.push_back({{"attack", lsr::attack_name(a.kind)},
                             {"epsilon", a.epsilon},
                             {"index", i},
                             {"label", data.test.label(i)},
                             {"clean_class", adv.query_class},
                             {"adv_class", adv.adv_class},
                             {"success", adv.success},
                             {"linf", lsr::linf_norm(adv.delta)},
                             {"iterations", adv.iterations}});
          for (std::size_t k = 0; k < adv.x_adv.size(); ++k) {
            rows << (k ? " " : "") << adv.x_adv[k];
          }
          rows << "\n";
        }
      }
      if (!out.empty()) lsr::write_text_file(out, rows.str());
      for (const auto& r : results) std::cout << r.dump() << "\n";
    } else if (*run) {
      lsr::ExperimentConfig cfg = build_config(run, f);
      cfg.output_dir = out;
      const lsr::ExperimentResult r = lsr::run_experiment(cfg);
      json summary = lsr::report_to_json(r.report);
      summary["config_hash"] = r.hash;
      summary["output_dir"] = out;
      std::cout << summary.dump() << "\n";
    } else if (*gauss) {
      g.output_dir = gout;
      const lsr::GaussianStudyResult r = lsr::run_gaussian_study(g);
      json summary{{"output_dir", gout}, {"curves", json::array()}};
      for (const auto& c : r.curves) summary["curves"].push_back(c.name);
      std::cout << summary.dump() << "\n";
    } else if (*report) {
      std::vector<lsr::LabeledReport> reports;
      for (const auto& path : runs) {
        std::filesystem::path p = path;
        if (std::filesystem::is_directory(p)) p /= "report.json";
        try {
          reports.push_back(lsr::report_from_json(json::parse(lsr::read_text_file(p))));
        } catch (const json::exception& e) {
          throw lsr::ParseError(p.string() + ": " + e.what());
        }
      }
      for (const auto& t : lsr::make_tables(reports)) {
        if (!out.empty()) lsr::write_text_file(std::filesystem::path(out) / (t.name + ".csv"), t.csv);
        std::cout << "# " << t.name << "\n" << t.csv;
      }
    }
  } catch (const lsr::Error& e) {
    return fail(e.kind(), e.what());
  } catch (const std::filesystem::filesystem_error& e) {
    return fail("io_error", e.what());
  } catch (const std::exception& e) {
    return fail("internal_error", e.what());
  }
  return 0;
}
