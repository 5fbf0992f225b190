#include "fraudbench/harness.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <sstream>
#include <stdexcept>

#include "json.hpp"

#include "fraudbench/detectors.hpp"
#include "fraudbench/rng.hpp"

namespace fraudbench {

namespace {

std::string fmt_double(double v) {
  char buf[64];
  std::snprintf(buf, sizeof(buf), "%.17g", v);
  return buf;
}

std::string trim(const std::string& s) {
  std::size_t a = s.find_first_not_of(" \t\r\n");
  if (a == std::string::npos) return "";
  std::size_t b = s.find_last_not_of(" \t\r\n");
  return s.substr(a, b - a + 1);
}

std::vector<std::string> split_list(const std::string& s) {
  std::vector<std::string> out;
  std::stringstream ss(s);
  std::string item;
  while (std::getline(ss, item, ',')) {
    item = trim(item);
    if (!item.empty()) out.push_back(item);
  }
  return out;
}

double parse_double(const std::string& key, const std::string& value) {
  try {
    std::size_t pos = 0;
    double v = std::stod(value, &pos);
    if (pos != value.size()) throw std::invalid_argument("");
    return v;
  } catch (...) {
    throw std::runtime_error("config: bad numeric value for " + key + ": " + value);
  }
}

std::int64_t parse_int(const std::string& key, const std::string& value) {
  try {
    std::size_t pos = 0;
    std::int64_t v = std::stoll(value, &pos);
    if (pos != value.size()) throw std::invalid_argument("");
    return v;
  } catch (...) {
    throw std::runtime_error("config: bad integer value for " + key + ": " + value);
  }
}

struct TrialContext {
  std::vector<std::pair<std::string, CompiledDetector>> detectors;
  std::map<std::string, double> true_aucs;
};

TrialContext make_context(const ExperimentConfig& config, const LabeledGraph& graph) {
  TrialContext ctx;
  for (const auto& name : config.detectors) {
    DetectorSpec spec = builtin_detector(name);
    CompiledDetector det = compile(spec);
    ctx.true_aucs[name] = auc(det(graph), graph);
    ctx.detectors.emplace_back(name, std::move(det));
  }
  return ctx;
}

struct TrialTimer {
  std::chrono::steady_clock::time_point t0 = std::chrono::steady_clock::now();
  double ms() const {
    return std::chrono::duration<double, std::milli>(
               std::chrono::steady_clock::now() - t0)
        .count();
  }
};

std::string argmax_name(const std::map<std::string, double>& values) {
  std::string best;
  double best_v = 0.0;
  for (const auto& [name, v] : values) {
    if (best.empty() || v > best_v) {
      best = name;
      best_v = v;
    }
  }
  return best;
}

// Per-detector mean accuracy over one shared partition set, plus the argmax
// release (noisy or exact). Charges epsilon once when noise is on.
std::string top1_pda_winner(const TrialContext& ctx, const LabeledGraph& graph,
                            const ExperimentConfig& config, bool noise,
                            BudgetLedger* ledger, std::uint64_t trial_seed) {
  PdaConfig pda;
  pda.k = config.mechanism.k;
  pda.rho = config.mechanism.rho;
  pda.epsilon = config.epsilon;
  pda.noise_enabled = noise;
  pda.validate(graph);
  std::vector<LabeledGraph> parts =
      partition_duplicate(graph, pda, derive_seed(trial_seed, 0x9a11));

  std::map<std::string, double> means;
  for (const auto& [name, det] : ctx.detectors) {
    double sum = 0.0;
    for (const auto& part : parts) sum += auc(det(part), part);
    means[name] = sum / static_cast<double>(parts.size());
  }
  if (!noise) return argmax_name(means);

  Rng rng(derive_seed(trial_seed, 0xa23));
  double scale = 1.0 / (static_cast<double>(pda.k) * config.epsilon);
  std::string winner = report_noisy_argmax(means, scale, rng);
  if (ledger) ledger->charge("top1_argmax", config.epsilon);
  return winner;
}

std::string top1_synth_winner(const TrialContext& ctx, const LabeledGraph& graph,
                              const ExperimentConfig& config, bool noise,
                              BudgetLedger* ledger, std::uint64_t trial_seed) {
  LabeledGraph synthetic = generate_synthetic(
      graph, config.mechanism.method, config.epsilon, config.delta,
      config.mechanism.d_multiplier, noise, derive_seed(trial_seed, 0x57a7));
  if (noise && ledger) ledger->charge("synth_generate", config.epsilon, config.delta);
  std::map<std::string, double> values;
  for (const auto& [name, det] : ctx.detectors)
    values[name] = auc(det(synthetic), synthetic);
  return argmax_name(values);
}

}  // namespace

std::string MechanismConfig::name() const {
  switch (type) {
    case Type::Exact: return "exact";
    case Type::Pda: return "pda";
    case Type::Synth: return synth_method_name(method);
  }
  return "exact";
}

MechanismConfig MechanismConfig::from_string(const std::string& name) {
  MechanismConfig m;
  if (name == "exact") {
    m.type = Type::Exact;
  } else if (name == "pda") {
    m.type = Type::Pda;
  } else if (name == "synth") {
    m.type = Type::Synth;
  } else {
    m.type = Type::Synth;
    m.method = synth_method_from_string(name);
  }
  return m;
}

void ExperimentConfig::validate() const {
  const bool has_files = !edges_path.empty() && !labels_path.empty();
  if (!has_files && !sbm.has_value())
    throw std::runtime_error("config: need graph.edges/graph.labels or graph.sbm.*");
  if (has_files && sbm.has_value())
    throw std::runtime_error("config: graph files and graph.sbm.* are exclusive");
  if (sbm) sbm->validate();
  if (clique_size < 0) throw std::runtime_error("config: graph.clique.size < 0");
  if (clique_size > 0 && (clique_density <= 0.0 || clique_density > 1.0))
    throw std::runtime_error("config: graph.clique.density must be in (0, 1]");
  if (detectors.empty()) throw std::runtime_error("config: no detectors");
  if (mode == "one_shot") {
    if (detectors.size() != 1)
      throw std::runtime_error("config: one_shot mode takes exactly one detector");
  } else if (mode == "leaderboard" || mode == "top1") {
    if (detectors.size() < 2)
      throw std::runtime_error("config: " + mode + " mode needs >= 2 detectors");
  } else if (mode == "decomposition") {
    if (detectors.size() < 2)
      throw std::runtime_error("config: decomposition mode needs >= 2 detectors");
    if (grid.empty())
      throw std::runtime_error("config: decomposition mode needs mechanism.grid");
  } else {
    throw std::runtime_error("config: unknown mode " + mode);
  }
  if (trials < 1) throw std::runtime_error("config: trials < 1");
  const bool needs_budget =
      mechanism.type != MechanismConfig::Type::Exact || mode == "decomposition";
  if (needs_budget && epsilon <= 0.0)
    throw std::runtime_error("config: epsilon must be positive");
  if (delta <= 0.0 || delta >= 0.5)
    throw std::runtime_error("config: delta must be in (0, 0.5)");
  if (mechanism.k < 2) throw std::runtime_error("config: mechanism.k < 2");
  if (mechanism.rho <= 0.0 || mechanism.rho > 1.0)
    throw std::runtime_error("config: mechanism.rho must be in (0, 1]");
  if (mechanism.d_multiplier <= 0.0)
    throw std::runtime_error("config: mechanism.d_multiplier must be positive");
}

ExperimentConfig parse_config_text(const std::string& text) {
  ExperimentConfig cfg;
  std::map<std::string, std::string> kv;
  std::stringstream ss(text);
  std::string line;
  int line_no = 0;
  while (std::getline(ss, line)) {
    ++line_no;
    std::size_t hash = line.find('#');
    if (hash != std::string::npos) line = line.substr(0, hash);
    line = trim(line);
    if (line.empty()) continue;
    std::size_t eq = line.find('=');
    if (eq == std::string::npos)
      throw std::runtime_error("config line " + std::to_string(line_no) +
                               ": expected key = value");
    std::string key = trim(line.substr(0, eq));
    std::string value = trim(line.substr(eq + 1));
    if (key.empty() || value.empty())
      throw std::runtime_error("config line " + std::to_string(line_no) +
                               ": empty key or value");
    if (!kv.emplace(key, value).second)
      throw std::runtime_error("config line " + std::to_string(line_no) +
                               ": duplicate key " + key);
  }

  std::map<std::string, std::string> remaining = kv;
  auto take = [&](const std::string& key) -> std::optional<std::string> {
    auto it = kv.find(key);
    if (it == kv.end()) return std::nullopt;
    remaining.erase(key);
    return it->second;
  };

  if (auto v = take("graph.edges")) cfg.edges_path = *v;
  if (auto v = take("graph.labels")) cfg.labels_path = *v;
  if (auto v = take("graph.metadata")) cfg.metadata_path = *v;

  bool any_sbm = false;
  SbmParams sbm;
  if (auto v = take("graph.sbm.n_benign")) { sbm.n_benign = parse_int("graph.sbm.n_benign", *v); any_sbm = true; }
  if (auto v = take("graph.sbm.n_fraud")) { sbm.n_fraud = parse_int("graph.sbm.n_fraud", *v); any_sbm = true; }
  if (auto v = take("graph.sbm.p_benign")) { sbm.p_benign = parse_double("graph.sbm.p_benign", *v); any_sbm = true; }
  if (auto v = take("graph.sbm.p_fraud")) { sbm.p_fraud = parse_double("graph.sbm.p_fraud", *v); any_sbm = true; }
  if (auto v = take("graph.sbm.p_cross")) { sbm.p_cross = parse_double("graph.sbm.p_cross", *v); any_sbm = true; }
  if (any_sbm) cfg.sbm = sbm;

  if (auto v = take("graph.clique.size"))
    cfg.clique_size = static_cast<int>(parse_int("graph.clique.size", *v));
  if (auto v = take("graph.clique.density"))
    cfg.clique_density = parse_double("graph.clique.density", *v);

  if (auto v = take("detectors")) {
    if (*v == "builtin") {
      for (const auto& spec : builtin_suite()) cfg.detectors.push_back(spec.name);
    } else {
      cfg.detectors = split_list(*v);
    }
  }

  if (auto v = take("mode")) cfg.mode = *v;
  if (auto v = take("mechanism")) cfg.mechanism = MechanismConfig::from_string(*v);
  if (auto v = take("mechanism.method"))
    cfg.mechanism.method = synth_method_from_string(*v);
  if (auto v = take("mechanism.k"))
    cfg.mechanism.k = static_cast<int>(parse_int("mechanism.k", *v));
  if (auto v = take("mechanism.rho")) cfg.mechanism.rho = parse_double("mechanism.rho", *v);
  if (auto v = take("mechanism.d_multiplier"))
    cfg.mechanism.d_multiplier = parse_double("mechanism.d_multiplier", *v);
  if (auto v = take("mechanism.grid")) {
    for (const auto& name : split_list(*v)) {
      MechanismConfig m = MechanismConfig::from_string(name);
      m.k = cfg.mechanism.k;
      m.rho = cfg.mechanism.rho;
      m.d_multiplier = cfg.mechanism.d_multiplier;
      cfg.grid.push_back(m);
    }
  }

  if (auto v = take("epsilon")) cfg.epsilon = parse_double("epsilon", *v);
  if (auto v = take("delta")) cfg.delta = parse_double("delta", *v);
  if (auto v = take("trials")) cfg.trials = static_cast<int>(parse_int("trials", *v));
  if (auto v = take("seed"))
    cfg.seed = static_cast<std::uint64_t>(parse_int("seed", *v));

  if (!remaining.empty())
    throw std::runtime_error("config: unknown key " + remaining.begin()->first);

  cfg.validate();
  return cfg;
}

ExperimentConfig parse_config_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot open config file: " + path);
  std::stringstream buf;
  buf << in.rdbuf();
  return parse_config_text(buf.str());
}

LabeledGraph build_graph(const ExperimentConfig& config) {
  LabeledGraph g = config.sbm
                       ? sample_sbm(*config.sbm, derive_seed(config.seed, 0x6a1))
                       : load_graph(config.edges_path, config.labels_path,
                                    config.metadata_path);
  if (config.clique_size > 0)
    g = inject_fraud_clique(g, config.clique_size, config.clique_density,
                            derive_seed(config.seed, 0x6a2));
  return g;
}

std::vector<ReleaseRecord> run_one_shot(const ExperimentConfig& config,
                                        const LabeledGraph& graph) {
  TrialContext ctx = make_context(config, graph);
  const auto& [det_name, det] = ctx.detectors.front();
  const double true_auc = ctx.true_aucs.at(det_name);

  std::vector<ReleaseRecord> records;
  for (int t = 0; t < config.trials; ++t) {
    const std::uint64_t trial_seed =
        derive_seed(config.seed, 1000 + static_cast<std::uint64_t>(t));
    TrialTimer timer;
    ReleaseRecord rec;
    rec.trial = t;
    rec.mechanism = config.mechanism.name();
    rec.mode = "one_shot";
    rec.seed = trial_seed;

    switch (config.mechanism.type) {
      case MechanismConfig::Type::Exact:
        rec.rows.push_back({det_name, true_auc, true_auc});
        break;
      case MechanismConfig::Type::Pda: {
        PdaConfig pda;
        pda.k = config.mechanism.k;
        pda.rho = config.mechanism.rho;
        pda.epsilon = config.epsilon;
        BudgetLedger ledger(config.epsilon);
        PdaReleaseRecord r = pda_release(
            det, graph, pda,
            [](const ScoreVector& s, const LabeledGraph& g) { return auc(s, g); },
            ledger, trial_seed);
        rec.rows.push_back({det_name, r.released, r.partition_mean});
        rec.epsilon_charged = ledger.spent_epsilon();
        rec.delta_charged = ledger.spent_delta();
        rec.charges = ledger.entries();
        break;
      }
      case MechanismConfig::Type::Synth: {
        BudgetLedger ledger(config.epsilon);
        ledger.charge("synth_generate", config.epsilon, config.delta);
        LabeledGraph noisy = generate_synthetic(
            graph, config.mechanism.method, config.epsilon, config.delta,
            config.mechanism.d_multiplier, true, derive_seed(trial_seed, 0x57a7));
        LabeledGraph clean = generate_synthetic(
            graph, config.mechanism.method, config.epsilon, config.delta,
            config.mechanism.d_multiplier, false, derive_seed(trial_seed, 0x57a7));
        rec.rows.push_back({det_name, auc(det(noisy), noisy), auc(det(clean), clean)});
        rec.epsilon_charged = ledger.spent_epsilon();
        rec.delta_charged = ledger.spent_delta();
        rec.charges = ledger.entries();
        break;
      }
    }
    rec.wall_time_ms = timer.ms();
    records.push_back(std::move(rec));
  }
  return records;
}

std::vector<ReleaseRecord> run_leaderboard(const ExperimentConfig& config,
                                           const LabeledGraph& graph) {
  TrialContext ctx = make_context(config, graph);
  const int n_det = static_cast<int>(ctx.detectors.size());

  std::vector<ReleaseRecord> records;
  for (int t = 0; t < config.trials; ++t) {
    const std::uint64_t trial_seed =
        derive_seed(config.seed, 1000 + static_cast<std::uint64_t>(t));
    TrialTimer timer;
    ReleaseRecord rec;
    rec.trial = t;
    rec.mechanism = config.mechanism.name();
    rec.mode = "leaderboard";
    rec.seed = trial_seed;

    std::map<std::string, double> released;
    switch (config.mechanism.type) {
      case MechanismConfig::Type::Exact:
        released = ctx.true_aucs;
        break;
      case MechanismConfig::Type::Pda: {
        // even split of the allotment across detectors
        PdaConfig pda;
        pda.k = config.mechanism.k;
        pda.rho = config.mechanism.rho;
        pda.epsilon = config.epsilon / static_cast<double>(n_det);
        BudgetLedger ledger(config.epsilon);
        std::uint64_t i = 0;
        for (const auto& [name, det] : ctx.detectors) {
          PdaReleaseRecord r = pda_release(
              det, graph, pda,
              [](const ScoreVector& s, const LabeledGraph& g) { return auc(s, g); },
              ledger, derive_seed(trial_seed, i++), "pda:" + name);
          released[name] = r.released;
        }
        rec.epsilon_charged = ledger.spent_epsilon();
        rec.delta_charged = ledger.spent_delta();
        rec.charges = ledger.entries();
        break;
      }
      case MechanismConfig::Type::Synth: {
        // one generation serves every detector
        BudgetLedger ledger(config.epsilon);
        ledger.charge("synth_generate", config.epsilon, config.delta);
        LabeledGraph noisy = generate_synthetic(
            graph, config.mechanism.method, config.epsilon, config.delta,
            config.mechanism.d_multiplier, true, derive_seed(trial_seed, 0x57a7));
        for (const auto& [name, det] : ctx.detectors)
          released[name] = auc(det(noisy), noisy);
        rec.epsilon_charged = ledger.spent_epsilon();
        rec.delta_charged = ledger.spent_delta();
        rec.charges = ledger.entries();
        break;
      }
    }

    Leaderboard board = Leaderboard::from_values(
        released, config.mechanism.type != MechanismConfig::Type::Exact);
    for (const auto& [name, value] : board.entries)
      rec.rows.push_back({name, value, ctx.true_aucs.at(name)});
    rec.wall_time_ms = timer.ms();
    records.push_back(std::move(rec));
  }
  return records;
}

std::vector<ReleaseRecord> run_top1(const ExperimentConfig& config,
                                    const LabeledGraph& graph) {
  TrialContext ctx = make_context(config, graph);

  std::vector<ReleaseRecord> records;
  for (int t = 0; t < config.trials; ++t) {
    const std::uint64_t trial_seed =
        derive_seed(config.seed, 1000 + static_cast<std::uint64_t>(t));
    TrialTimer timer;
    ReleaseRecord rec;
    rec.trial = t;
    rec.mechanism = config.mechanism.name();
    rec.mode = "top1";
    rec.seed = trial_seed;

    std::string winner;
    BudgetLedger ledger(config.epsilon > 0.0 ? config.epsilon : 1.0);
    switch (config.mechanism.type) {
      case MechanismConfig::Type::Exact:
        winner = argmax_name(ctx.true_aucs);
        break;
      case MechanismConfig::Type::Pda:
        winner = top1_pda_winner(ctx, graph, config, true, &ledger, trial_seed);
        break;
      case MechanismConfig::Type::Synth:
        winner = top1_synth_winner(ctx, graph, config, true, &ledger, trial_seed);
        break;
    }
    // only the winner's name leaves the mechanism; no scores attached
    rec.rows.push_back({winner, std::nullopt, std::nullopt});
    rec.epsilon_charged = ledger.spent_epsilon();
    rec.delta_charged = ledger.spent_delta();
    rec.charges = ledger.entries();
    rec.wall_time_ms = timer.ms();
    records.push_back(std::move(rec));
  }
  return records;
}

std::vector<DecompositionRow> run_decomposition(const ExperimentConfig& config,
                                                const LabeledGraph& graph) {
  TrialContext ctx = make_context(config, graph);

  std::vector<DecompositionRow> rows;
  std::uint64_t mech_index = 0;
  for (const MechanismConfig& mech : config.grid) {
    ++mech_index;
    ExperimentConfig sub = config;
    sub.mechanism = mech;

    std::vector<double> clean_err, noisy_err;
    for (int t = 0; t < config.trials; ++t) {
      const std::uint64_t trial_seed = derive_seed(
          config.seed, mech_index * 100000 + static_cast<std::uint64_t>(t));
      std::string clean_winner, noisy_winner;
      switch (mech.type) {
        case MechanismConfig::Type::Exact:
          clean_winner = noisy_winner = argmax_name(ctx.true_aucs);
          break;
        case MechanismConfig::Type::Pda:
          clean_winner = top1_pda_winner(ctx, graph, sub, false, nullptr, trial_seed);
          noisy_winner = top1_pda_winner(ctx, graph, sub, true, nullptr, trial_seed);
          break;
        case MechanismConfig::Type::Synth:
          clean_winner = top1_synth_winner(ctx, graph, sub, false, nullptr, trial_seed);
          noisy_winner = top1_synth_winner(ctx, graph, sub, true, nullptr, trial_seed);
          break;
      }
      clean_err.push_back(top1_error(ctx.true_aucs, clean_winner));
      noisy_err.push_back(top1_error(ctx.true_aucs, noisy_winner));
    }

    auto mean_stderr = [](const std::vector<double>& xs) {
      double mean = 0.0;
      for (double x : xs) mean += x;
      mean /= static_cast<double>(xs.size());
      if (xs.size() < 2) return std::make_pair(mean, 0.0);
      double ss = 0.0;
      for (double x : xs) ss += (x - mean) * (x - mean);
      double sd = std::sqrt(ss / static_cast<double>(xs.size() - 1));
      return std::make_pair(mean, sd / std::sqrt(static_cast<double>(xs.size())));
    };

    DecompositionRow row;
    row.mechanism = mech.name();
    row.trials = config.trials;
    std::tie(row.noiseless_error_mean, row.noiseless_error_stderr) =
        mean_stderr(clean_err);
    std::tie(row.noisy_error_mean, row.noisy_error_stderr) = mean_stderr(noisy_err);
    rows.push_back(std::move(row));
  }
  return rows;
}

std::string records_to_csv(const std::vector<ReleaseRecord>& records) {
  std::string out = "trial,mechanism,mode,detector,value,noiseless_value,eps_charged,seed\n";
  for (const auto& rec : records) {
    for (const auto& row : rec.rows) {
      out += std::to_string(rec.trial);
      out += ',';
      out += rec.mechanism;
      out += ',';
      out += rec.mode;
      out += ',';
      out += row.detector;
      out += ',';
      if (row.value) out += fmt_double(*row.value);
      out += ',';
      if (row.noiseless_value) out += fmt_double(*row.noiseless_value);
      out += ',';
      out += fmt_double(rec.epsilon_charged);
      out += ',';
      out += std::to_string(rec.seed);
      out += '\n';
    }
  }
  return out;
}

std::string decomposition_to_csv(const std::vector<DecompositionRow>& rows) {
  std::string out =
      "mechanism,noiseless_error_mean,noiseless_error_stderr,"
      "noisy_error_mean,noisy_error_stderr,trials\n";
  for (const auto& row : rows) {
    out += row.mechanism;
    out += ',';
    out += fmt_double(row.noiseless_error_mean);
    out += ',';
    out += fmt_double(row.noiseless_error_stderr);
    out += ',';
    out += fmt_double(row.noisy_error_mean);
    out += ',';
    out += fmt_double(row.noisy_error_stderr);
    out += ',';
    out += std::to_string(row.trials);
    out += '\n';
  }
  return out;
}

void run_experiment(const ExperimentConfig& config, const std::string& out_path) {
  config.validate();
  LabeledGraph graph = build_graph(config);

  std::string csv;
  nlohmann::json ledger_json;
  ledger_json["allotment_per_trial"] = config.epsilon;
  ledger_json["trials"] = nlohmann::json::array();

  auto append_trials = [&](const std::vector<ReleaseRecord>& records) {
    csv = records_to_csv(records);
    for (const auto& rec : records) {
      nlohmann::json t;
      t["trial"] = rec.trial;
      t["seed"] = rec.seed;
      t["epsilon_spent"] = rec.epsilon_charged;
      t["delta_spent"] = rec.delta_charged;
      t["charges"] = nlohmann::json::array();
      for (const auto& e : rec.charges)
        t["charges"].push_back(
            {{"label", e.label}, {"epsilon", e.epsilon}, {"delta", e.delta}});
      ledger_json["trials"].push_back(std::move(t));
    }
  };

  if (config.mode == "one_shot") {
    append_trials(run_one_shot(config, graph));
  } else if (config.mode == "leaderboard") {
    append_trials(run_leaderboard(config, graph));
  } else if (config.mode == "top1") {
    append_trials(run_top1(config, graph));
  } else {
    csv = decomposition_to_csv(run_decomposition(config, graph));
  }

  {
    std::ofstream out(out_path, std::ios::binary);
    if (!out) throw std::runtime_error("cannot write output file: " + out_path);
    out << csv;
  }
  {
    std::ofstream out(out_path + ".ledger.json", std::ios::binary);
    if (!out) throw std::runtime_error("cannot write ledger file: " + out_path);
    out << ledger_json.dump(2) << '\n';
  }
}

}  // namespace fraudbench
