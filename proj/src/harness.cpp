#include "zog/harness.hpp"

#include <charconv>
#include <chrono>
#include <cmath>
#include <fstream>
#include <functional>
#include <sstream>
#include <system_error>

#include "json.hpp"
#include "zog/errors.hpp"
#include "zog/rng.hpp"

namespace zog {

namespace {

std::string trim(const std::string& s) {
  const auto begin = s.find_first_not_of(" \t\r");
  if (begin == std::string::npos) return "";
  const auto end = s.find_last_not_of(" \t\r");
  return s.substr(begin, end - begin + 1);
}

template <typename T>
T parse_number(const std::string& key, const std::string& value) {
  T out{};
  const char* first = value.data();
  const char* last = value.data() + value.size();
  const auto [ptr, ec] = std::from_chars(first, last, out);
  if (ec != std::errc() || ptr != last) {
    throw ConfigError("invalid value '" + value + "' for '" + key + "'");
  }
  return out;
}

double parse_positive_real(const std::string& key, const std::string& value) {
  const double v = parse_number<double>(key, value);
  if (!(v > 0.0) || !std::isfinite(v)) throw ConfigError("'" + key + "' must be positive");
  return v;
}

std::uint64_t parse_count(const std::string& key, const std::string& value, bool allow_zero) {
  if (!value.empty() && value[0] == '-') throw ConfigError("'" + key + "' must be non-negative");
  const auto v = parse_number<std::uint64_t>(key, value);
  if (!allow_zero && v == 0) throw ConfigError("'" + key + "' must be positive");
  return v;
}

bool parse_bool(const std::string& key, const std::string& value) {
  if (value == "1" || value == "true" || value == "yes" || value == "on") return true;
  if (value == "0" || value == "false" || value == "no" || value == "off") return false;
  throw ConfigError("invalid boolean '" + value + "' for '" + key + "'");
}

}  // namespace

void ExperimentConfig::validate() const {
  static const std::vector<std::string> games = {"unit_demand", "knapsack", "sequential",
                                                 "goofspiel",   "quadratic", "first_price"};
  if (std::find(games.begin(), games.end(), game) == games.end()) {
    throw ConfigError("unknown game '" + game + "'");
  }
  if (players < 1 || items < 1 || hidden < 1) {
    throw ConfigError("players, items and hidden must be positive");
  }
  if (!(lr > 0.0) || !(sigma > 0.0)) throw ConfigError("lr and sigma must be positive");
  if (batch < 1 || iters < 1 || trials < 1 || eval_every < 1 || eval_samples < 1) {
    throw ConfigError("batch, iters, trials, eval-every and eval-samples must be positive");
  }
}

void apply_setting(ExperimentConfig& cfg, const std::string& key, const std::string& raw) {
  const std::string value = trim(raw);
  if (key == "game") {
    cfg.game = value;
  } else if (key == "players") {
    cfg.players = parse_count(key, value, false);
  } else if (key == "items") {
    cfg.items = parse_count(key, value, false);
  } else if (key == "rounds") {
    cfg.rounds = parse_count(key, value, true);
  } else if (key == "hidden") {
    cfg.hidden = parse_count(key, value, false);
  } else if (key == "estimator") {
    if (value == "spg") cfg.estimator = EstimatorKind::kSPG;
    else if (value == "jpspg") cfg.estimator = EstimatorKind::kJPSPG;
    else throw ConfigError("estimator must be spg or jpspg");
  } else if (key == "scheme") {
    if (value == "sp") cfg.scheme = Scheme::kSP;
    else if (value == "fd") cfg.scheme = Scheme::kFD;
    else if (value == "cd") cfg.scheme = Scheme::kCD;
    else throw ConfigError("scheme must be sp, fd or cd");
  } else if (key == "dynamics") {
    if (value == "sga") cfg.dynamics = Method::kSGA;
    else if (value == "oga") cfg.dynamics = Method::kOGA;
    else if (value == "eg") cfg.dynamics = Method::kEG;
    else throw ConfigError("dynamics must be sga, oga or eg");
  } else if (key == "optimizer") {
    if (value == "adabelief") cfg.optimizer = OptimizerKind::kAdaBelief;
    else if (value == "sgd") cfg.optimizer = OptimizerKind::kSgd;
    else throw ConfigError("optimizer must be adabelief or sgd");
  } else if (key == "lr") {
    cfg.lr = parse_positive_real(key, value);
  } else if (key == "beta") {
    cfg.beta = parse_number<double>(key, value);
  } else if (key == "sigma") {
    cfg.sigma = parse_positive_real(key, value);
  } else if (key == "batch") {
    cfg.batch = parse_count(key, value, false);
  } else if (key == "iters") {
    cfg.iters = parse_count(key, value, false);
  } else if (key == "trials") {
    cfg.trials = parse_count(key, value, false);
  } else if (key == "eval-every") {
    cfg.eval_every = parse_count(key, value, false);
  } else if (key == "br-lr") {
    cfg.br_lr = parse_positive_real(key, value);
  } else if (key == "br-iters") {
    cfg.br_iters = parse_count(key, value, true);
  } else if (key == "eval-samples") {
    cfg.eval_samples = parse_count(key, value, false);
  } else if (key == "seed") {
    cfg.seed = parse_count(key, value, true);
  } else if (key == "eval-initial") {
    cfg.eval_initial = parse_bool(key, value);
  } else if (key == "out") {
    cfg.out = value;
  } else {
    throw ConfigError("unknown setting '" + key + "'");
  }
}

std::map<std::string, std::string> parse_key_values(const std::string& text) {
  std::map<std::string, std::string> out;
  std::istringstream in(text);
  std::string line;
  std::size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    const auto hash = line.find('#');
    if (hash != std::string::npos) line.erase(hash);
    line = trim(line);
    if (line.empty()) continue;
    auto sep = line.find('=');
    if (sep == std::string::npos) sep = line.find_first_of(" \t");
    if (sep == std::string::npos) {
      throw ConfigError("config line " + std::to_string(line_no) + ": expected 'key = value'");
    }
    out[trim(line.substr(0, sep))] = trim(line.substr(sep + 1));
  }
  return out;
}

std::map<std::string, std::string> read_config_file(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot open config file " + path.string());
  std::ostringstream text;
  text << in.rdbuf();
  return parse_key_values(text.str());
}

std::string to_string(EstimatorKind kind) {
  return kind == EstimatorKind::kSPG ? "spg" : "jpspg";
}

std::string to_string(Scheme scheme) {
  switch (scheme) {
    case Scheme::kSP: return "sp";
    case Scheme::kFD: return "fd";
    case Scheme::kCD: return "cd";
  }
  return "";
}

std::string to_string(Method method) {
  switch (method) {
    case Method::kSGA: return "sga";
    case Method::kOGA: return "oga";
    case Method::kEG: return "eg";
  }
  return "";
}

std::string to_string(OptimizerKind kind) {
  return kind == OptimizerKind::kSgd ? "sgd" : "adabelief";
}

std::string to_key_values(const ExperimentConfig& cfg) {
  std::ostringstream out;
  out << "game = " << cfg.game << "\n"
      << "players = " << cfg.players << "\n"
      << "items = " << cfg.items << "\n"
      << "rounds = " << cfg.rounds << "\n"
      << "hidden = " << cfg.hidden << "\n"
      << "estimator = " << to_string(cfg.estimator) << "\n"
      << "scheme = " << to_string(cfg.scheme) << "\n"
      << "dynamics = " << to_string(cfg.dynamics) << "\n"
      << "optimizer = " << to_string(cfg.optimizer) << "\n"
      << "lr = " << format_real(cfg.lr) << "\n";
  if (cfg.beta) out << "beta = " << format_real(*cfg.beta) << "\n";
  out << "sigma = " << format_real(cfg.sigma) << "\n"
      << "batch = " << cfg.batch << "\n"
      << "iters = " << cfg.iters << "\n"
      << "trials = " << cfg.trials << "\n"
      << "eval-every = " << cfg.eval_every << "\n"
      << "br-iters = " << cfg.br_iters << "\n"
      << "br-lr = " << format_real(cfg.br_lr) << "\n"
      << "eval-samples = " << cfg.eval_samples << "\n"
      << "seed = " << cfg.seed << "\n"
      << "eval-initial = " << (cfg.eval_initial ? "true" : "false") << "\n"
      << "out = " << cfg.out << "\n";
  return out.str();
}

DynamicsConfig dynamics_config(const ExperimentConfig& cfg) {
  DynamicsConfig d;
  d.method = cfg.dynamics;
  d.alpha = cfg.lr;
  d.beta = cfg.beta;
  d.iterations = cfg.iters;
  d.optimizer = cfg.optimizer;
  return d;
}

SmoothingConfig smoothing_config(const ExperimentConfig& cfg) {
  return SmoothingConfig{cfg.sigma, cfg.scheme, cfg.batch};
}

EsConfig es_config(const ExperimentConfig& cfg) {
  EsConfig es;
  es.iterations = cfg.br_iters;
  es.smoothing = SmoothingConfig{cfg.sigma, Scheme::kCD, cfg.batch};
  es.optimizer = cfg.optimizer;
  es.hyper.lr = cfg.br_lr;
  return es;
}

GamePtr make_game(const ExperimentConfig& cfg) {
  cfg.validate();
  const std::string& g = cfg.game;
  if (g == "unit_demand") {
    return std::make_shared<UnitDemandAuction>(cfg.players, cfg.items, cfg.hidden);
  }
  if (g == "knapsack") return std::make_shared<KnapsackAuction>(cfg.players, cfg.hidden);
  if (g == "sequential") {
    const std::size_t rounds = cfg.rounds == 0 ? std::max<std::size_t>(1, cfg.players / 2)
                                               : cfg.rounds;
    return std::make_shared<SequentialAuction>(cfg.players, rounds, cfg.hidden);
  }
  if (g == "goofspiel") {
    return std::make_shared<Goofspiel>(cfg.players, cfg.rounds == 0 ? 13 : cfg.rounds,
                                       cfg.hidden);
  }
  if (g == "first_price") return std::make_shared<FirstPriceAuction>(cfg.players, cfg.hidden);
  if (cfg.players < 2) throw ConfigError("quadratic: need players >= 2");
  return std::make_shared<QuadraticGame>(
      QuadraticGame::random(cfg.players, 1, 0.5, derive_seed(cfg.seed, Stream::kGame)));
}

// ---------------------------------------------------------------------------

std::string format_real(double v) {
  char buf[512];
  const auto [ptr, ec] = std::to_chars(buf, buf + sizeof(buf), v, std::chars_format::fixed);
  if (ec != std::errc()) {
    const auto [p2, ec2] = std::to_chars(buf, buf + sizeof(buf), v);
    return std::string(buf, p2);
  }
  return std::string(buf, ptr);
}

std::string csv_text(const std::vector<MetricsRow>& rows) {
  std::string out = std::string(kCsvHeader) + "\n";
  for (const auto& r : rows) {
    out += std::to_string(r.trial) + "," + std::to_string(r.iteration) + "," +
           format_real(r.wall_time_s) + "," + std::to_string(r.utility_evals) + "," +
           format_real(r.exploitability_raw) + "," + format_real(r.exploitability_clamped) +
           "\n";
  }
  return out;
}

void write_csv(const std::vector<MetricsRow>& rows, const std::filesystem::path& path) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw std::runtime_error("cannot open " + path.string() + " for writing");
  out << csv_text(rows);
  if (!out) throw std::runtime_error("failed writing " + path.string());
}

std::vector<MetricsRow> parse_csv(const std::string& text, const std::string& source) {
  std::istringstream in(text);
  std::string line;
  std::size_t line_no = 0;
  std::vector<MetricsRow> rows;
  auto fail = [&](const std::string& why) {
    throw std::runtime_error(source + ":" + std::to_string(line_no) + ": " + why);
  };
  if (!std::getline(in, line)) {
    line_no = 1;
    fail("missing header");
  }
  ++line_no;
  if (trim(line) != kCsvHeader) fail("unexpected header '" + line + "'");
  while (std::getline(in, line)) {
    ++line_no;
    if (trim(line).empty()) continue;
    std::vector<std::string> fields;
    std::stringstream ss(trim(line));
    std::string field;
    while (std::getline(ss, field, ',')) fields.push_back(field);
    if (fields.size() != 6) fail("expected 6 fields, got " + std::to_string(fields.size()));
    try {
      MetricsRow r;
      r.trial = parse_number<std::size_t>("trial", fields[0]);
      r.iteration = parse_number<std::uint64_t>("iteration", fields[1]);
      r.wall_time_s = parse_number<double>("wall_time_s", fields[2]);
      r.utility_evals = parse_number<std::uint64_t>("utility_evals", fields[3]);
      r.exploitability_raw = parse_number<double>("exploitability_raw", fields[4]);
      r.exploitability_clamped = parse_number<double>("exploitability_clamped", fields[5]);
      rows.push_back(r);
    } catch (const ConfigError& e) {
      fail(e.what());
    }
  }
  return rows;
}

std::vector<MetricsRow> read_csv(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw std::runtime_error("cannot open " + path.string());
  std::ostringstream text;
  text << in.rdbuf();
  return parse_csv(text.str(), path.string());
}

// ---------------------------------------------------------------------------

std::uint64_t trial_seed(const ExperimentConfig& cfg, std::size_t trial) {
  return derive_seed(cfg.seed, Stream::kTrial, trial);
}

namespace {

void write_text(const std::filesystem::path& path, const std::string& text) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw std::runtime_error("cannot open " + path.string() + " for writing");
  out << text;
}

void write_snapshot(const std::filesystem::path& path, const Game& game, std::size_t trial,
                    std::uint64_t iteration, const JointParams& x) {
  nlohmann::json doc;
  doc["game"] = game.name();
  doc["trial"] = trial;
  doc["iteration"] = iteration;
  doc["blocks"] = nlohmann::json::array();
  for (std::size_t i = 0; i < x.num_blocks(); ++i) {
    const auto b = x.block(i);
    doc["blocks"].push_back(std::vector<double>(b.begin(), b.end()));
  }
  write_text(path, doc.dump() + "\n");
}

std::string eval_costs_text(const std::vector<EvalCost>& costs) {
  std::string out = "trial,iteration,eval_utility_evals,eval_wall_time_s\n";
  for (const auto& c : costs) {
    out += std::to_string(c.trial) + "," + std::to_string(c.iteration) + "," +
           std::to_string(c.utility_evals) + "," + format_real(c.wall_time_s) + "\n";
  }
  return out;
}

}  // namespace

ExperimentResult run_experiment(const ExperimentConfig& cfg) {
  cfg.validate();
  const GamePtr game = make_game(cfg);
  const DynamicsConfig dyn = dynamics_config(cfg);
  const SmoothingConfig smoothing = smoothing_config(cfg);
  const EsConfig es = es_config(cfg);
  const GradientSource source = estimator_source(*game, cfg.estimator, smoothing);

  ExperimentResult result;
  using Clock = std::chrono::steady_clock;

  for (std::size_t trial = 0; trial < cfg.trials; ++trial) {
    const std::uint64_t seed = trial_seed(cfg, trial);
    JointParams x0 = game->initial_params(seed);
    result.initial_params.push_back(x0);

    auto evaluate = [&](const JointParams& x, std::uint64_t iteration, double wall,
                        std::uint64_t evals) {
      const auto start = Clock::now();
      const ExploitabilityReport report = estimate_exploitability(
          *game, x, es, cfg.eval_samples, derive_seed(seed, Stream::kEval, iteration));
      const double spent = std::chrono::duration<double>(Clock::now() - start).count();
      result.rows.push_back(
          MetricsRow{trial, iteration, wall, evals, report.phi_raw, report.phi_clamped});
      result.eval_costs.push_back(EvalCost{trial, iteration, report.utility_evals, spent});
    };

    if (cfg.eval_initial) evaluate(x0, 0, 0.0, 0);
    const TrainResult trained =
        train(source, std::move(x0), dyn, seed, [&](const TrainState& state, const IterationRecord& rec) {
          if (rec.iteration % cfg.eval_every == 0) {
            evaluate(state.x, rec.iteration, rec.wall_time_s, rec.utility_evals);
          }
        });
    result.final_params.push_back(trained.state.x);
  }

  if (!cfg.out.empty()) {
    const std::filesystem::path dir(cfg.out);
    std::filesystem::create_directories(dir);
    write_csv(result.rows, dir / "metrics.csv");
    write_text(dir / "eval_costs.csv", eval_costs_text(result.eval_costs));
    write_text(dir / "config.txt", to_key_values(cfg));
    for (std::size_t trial = 0; trial < cfg.trials; ++trial) {
      write_snapshot(dir / ("trial_" + std::to_string(trial) + ".json"), *game, trial, cfg.iters,
                     result.final_params[trial]);
    }
  }
  return result;
}

}  // namespace zog
