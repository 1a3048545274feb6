// Copyright 2026 The semcom Authors.
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

// Command implementations behind the `semcom` executable. Each returns the
// process exit code: 0 success, 1 a domain outcome such as a failed service
// validation, 2 a usage or configuration error. Diagnostics go to `err`.

#pragma once

#include <filesystem>
#include <fstream>
#include <functional>
#include <ostream>
#include <set>
#include <sstream>
#include <string>
#include <vector>

#include "semcom/allocator.hpp"
#include "semcom/channel.hpp"
#include "semcom/codec.hpp"
#include "semcom/config.hpp"
#include "semcom/errors.hpp"
#include "semcom/extractors.hpp"
#include "semcom/generation.hpp"
#include "semcom/pairing.hpp"
#include "semcom/synthetic.hpp"

namespace semcom {

inline constexpr int kExitOk = 0;
inline constexpr int kExitValidation = 1;
inline constexpr int kExitUsage = 2;

namespace detail {

// Runs `body`, mapping library errors to exit code 2.
inline int guarded(std::ostream& err, const std::function<int()>& body) {
  try {
    return body();
  } catch (const Error& e) {
    err << "error: " << e.what() << '\n';
    return kExitUsage;
  } catch (const std::filesystem::filesystem_error& e) {
    err << "error: " << e.what() << '\n';
    return kExitUsage;
  }
}

class OutputDir {
 public:
  explicit OutputDir(std::filesystem::path dir) : dir_(std::move(dir)) {
    std::error_code ec;
    std::filesystem::create_directories(dir_, ec);
    if (ec) throw IoError("cannot create output directory " + dir_.string() + ": " + ec.message());
  }

  const std::filesystem::path& path() const { return dir_; }
  const std::vector<std::string>& files() const { return files_; }

  void write_text(const std::string& name, const std::string& text) {
    std::ofstream out(dir_ / name, std::ios::binary | std::ios::trunc);
    if (!out) throw IoError("cannot write " + (dir_ / name).string());
    out << text;
    if (!out) throw IoError("write failed: " + (dir_ / name).string());
    files_.push_back(name);
  }

  void write_binary(const std::string& name, const std::vector<std::uint8_t>& bytes) {
    write_bytes(dir_ / name, bytes);
    files_.push_back(name);
  }

 private:
  std::filesystem::path dir_;
  std::vector<std::string> files_;
};

inline void finish_manifest(const ExperimentConfig& cfg, const std::string& command,
                            const std::string& started, const OutputDir& out) {
  RunManifest m;
  m.command = command;
  m.config_hash = fnv1a64(cfg.text);
  m.seed = cfg.channel.seed;
  m.started = started;
  m.finished = utc_timestamp();
  m.files = out.files();
  m.write(out.path());
}

}  // namespace detail

// extract --in image.pgm --kind <extractor> --out map.pgm [--id name]
inline int cmd_extract(const std::filesystem::path& in, const std::string& kind,
                       const std::filesystem::path& out, std::ostream& err,
                       const std::string& image_id = {}) {
  return detail::guarded(err, [&] {
    ExtractorKind extractor;
    try {
      extractor = parse_extractor(kind);
    } catch (const ConfigError& e) {
      err << "error: " << e.what() << '\n';
      return kExitUsage;
    }
    const SemanticMap image = read_pgm(in);
    const std::string id = image_id.empty() ? in.stem().string() : image_id;
    write_pgm(extract(extractor, image, id), out);
    return kExitOk;
  });
}

// Sweeps q(d) for every candidate pair over the service images and writes
// curves.csv (pair,d,q), pairing.csv (pair,r_squared,slope,spearman) and
// selection.csv (the winning row).
inline int cmd_sweep(const std::filesystem::path& config_path, std::ostream& out_stream,
                     std::ostream& err) {
  return detail::guarded(err, [&] {
    const std::string started = utc_timestamp();
    const ExperimentConfig cfg = load_config(config_path);
    if (cfg.factors.size() < 3) throw ConfigError("sweep needs at least 3 factors");

    std::vector<SourceImage> corpus;
    std::set<std::string> seen_ids;
    std::vector<ExtractorMetricPair> pairs;
    std::set<std::string> seen_pairs;
    PairCandidates candidates;
    std::set<std::string> seen_e, seen_m;
    for (const auto& s : cfg.services) {
      if (seen_ids.insert(s.source.id).second) corpus.push_back(s.source);
      ExtractorMetricPair p{s.spec.extractor, s.spec.metric};
      if (seen_pairs.insert(p.name()).second) pairs.push_back(p);
      if (seen_e.insert(to_string(p.extractor)).second) candidates.extractors.push_back(p.extractor);
      if (seen_m.insert(to_string(p.metric)).second) candidates.metrics.push_back(p.metric);
    }
    if (cfg.sweep_mode == "free") pairs = admissible_pairs(FreeSearch{}, candidates);

    Rng rng = Rng::stream(cfg.channel.seed, "gen");
    const PairSelection sel = select_from_pairs(pairs, [&](const ExtractorMetricPair& pair) {
      return sweep_curve(pair, corpus, cfg.factors, cfg.backend, rng);
    });

    detail::OutputDir out(cfg.output_dir);
    std::ostringstream curves, report, winner;
    write_curves_csv(curves, sel.evaluated);
    write_pairing_csv(report, sel.evaluated);
    write_pairing_csv(winner, std::span<const PairEvaluation>(&sel.winner, 1));
    out.write_text("curves.csv", curves.str());
    out.write_text("pairing.csv", report.str());
    out.write_text("selection.csv", winner.str());
    detail::finish_manifest(cfg, "sweep", started, out);
    out_stream << "selected " << sel.winner.report.pair
               << " r_squared=" << format_number(sel.winner.report.r_squared) << '\n';
    return kExitOk;
  });
}

enum class Solver { kDqn, kGreedy, kExhaustive, kRandom };

inline Solver parse_solver(const std::string& name) {
  if (name == "dqn") return Solver::kDqn;
  if (name == "greedy") return Solver::kGreedy;
  if (name == "exhaustive") return Solver::kExhaustive;
  if (name == "random") return Solver::kRandom;
  throw ConfigError("unknown solver '" + name + "' (valid: dqn, greedy, exhaustive, random)");
}

inline std::string to_string(Solver s) {
  switch (s) {
    case Solver::kDqn: return "dqn";
    case Solver::kGreedy: return "greedy";
    case Solver::kExhaustive: return "exhaustive";
    case Solver::kRandom: return "random";
  }
  return "?";
}

// allocation.csv: solver,factors,reward,feasible,total_bytes,budget_bytes,loss
// The dqn solver also writes training.csv and the checkpoint dqn.bin.
inline int cmd_allocate(const std::filesystem::path& config_path, Solver solver,
                        std::ostream& out_stream, std::ostream& err) {
  return detail::guarded(err, [&]() -> int {
    const std::string started = utc_timestamp();
    const ExperimentConfig cfg = load_config(config_path);
    const AllocationInstance inst = cfg.instance();
    if (solver == Solver::kDqn || solver == Solver::kExhaustive) inst.require_enumerable();

    detail::OutputDir out(cfg.output_dir);
    AllocationResult result;
    Rng gen_rng = Rng::stream(cfg.channel.seed, "gen");
    switch (solver) {
      case Solver::kExhaustive:
        result = exhaustive_oracle(inst, cfg.backend, gen_rng);
        break;
      case Solver::kGreedy:
        result = greedy_allocate(inst, cfg.backend, gen_rng);
        break;
      case Solver::kRandom: {
        InstanceEvaluator eval(inst, cfg.backend);
        Rng pick = Rng::stream(cfg.channel.seed, "random");
        AllocationAction a;
        for (std::size_t s = 0; s < inst.services.size(); ++s) {
          a.factors.push_back(inst.factors[pick.index(inst.factors.size())]);
        }
        ActionOutcome o = eval.evaluate(a, gen_rng);
        result = {std::move(a), o.reward, std::move(o)};
        break;
      }
      case Solver::kDqn: {
        const std::vector<AllocationInstance> pool{inst};
        TrainingResult trained = dqn_train(pool, cfg.episodes, cfg.dqn, cfg.backend);
        std::ostringstream trace;
        write_training_csv(trace, trained.trace);
        out.write_text("training.csv", trace.str());
        out.write_binary("dqn.bin", serialize_network(trained.agent.network()));
        InstanceEvaluator eval(inst, cfg.backend);
        AllocationAction a = dqn_act(trained.agent, state_vector(eval));
        ActionOutcome o = eval.evaluate(a, gen_rng);
        result = {std::move(a), o.reward, std::move(o)};
        break;
      }
    }
    std::ostringstream row;
    row << "solver,factors,reward,feasible,total_bytes,budget_bytes,loss\n"
        << to_string(solver) << ',' << to_string(result.action) << ','
        << format_number(result.reward) << ',' << (result.outcome.feasible ? 1 : 0) << ','
        << result.outcome.total_bytes << ',' << inst.channel.budget_bytes << ','
        << format_number(result.outcome.loss) << '\n';
    out.write_text("allocation.csv", row.str());
    detail::finish_manifest(cfg, "allocate --solver " + to_string(solver), started, out);
    out_stream << to_string(solver) << ": factors " << to_string(result.action) << " reward "
               << format_number(result.reward) << '\n';
    return kExitOk;
  });
}

// Per service: extract, validate (stepping the factor down until the
// threshold holds), encode, transmit, decode, score. Writes <id>.smap (the
// delivered payload), pipeline.csv and summary.csv. A service that cannot
// meet its threshold gets an error row; the rest still run, and the exit code
// is 1.
//
// pipeline.csv: service,status,requested_d,accepted_d,bytes,q_validated,q_delivered,flipped_bits
// summary.csv:  total_bytes,budget_bytes,feasible
inline int cmd_pipeline(const std::filesystem::path& config_path, std::ostream& out_stream,
                        std::ostream& err) {
  return detail::guarded(err, [&]() -> int {
    const std::string started = utc_timestamp();
    const ExperimentConfig cfg = load_config(config_path);
    detail::OutputDir out(cfg.output_dir);
    Rng gen_rng = Rng::stream(cfg.channel.seed, "gen");
    Rng channel_rng = Rng::stream(cfg.channel.seed, "channel");

    std::ostringstream table;
    table << "service,status,requested_d,accepted_d,bytes,q_validated,q_delivered,flipped_bits\n";
    std::vector<std::size_t> costs;
    bool any_failed = false;
    for (const auto& sc : cfg.services) {
      const ServiceProbe probe(sc.spec, sc.source, cfg.backend);
      const int requested = sc.factor.value_or(cfg.factors.back());
      Validation v;
      try {
        v = validate_and_adjust(probe, requested, cfg.factors, gen_rng);
      } catch (const ValidationFailedError& e) {
        any_failed = true;
        err << "service " << sc.spec.id << ": " << e.what() << '\n';
        table << csv_field(sc.spec.id) << ",validation_failed," << requested << ",,,"
              << format_number(e.best_quality()) << ",,\n";
        continue;
      }
      const SemanticMap& semantic = probe.semantic();
      const EncodedPayload payload = encode(semantic, v.accepted_factor);
      const TransmitResult tx = transmit(payload, cfg.channel, channel_rng);
      out.write_binary(sc.spec.id + ".smap", serialize(tx.delivered));
      SemanticMap received = decode(tx.delivered);
      if (sc.spec.generation_noise > 0.0) {
        received = add_generation_noise(received, sc.spec.generation_noise, gen_rng);
      }
      const double delivered_q = score(sc.spec.metric, probe.reference(), received).value();
      costs.push_back(tx.bytes_used);
      table << csv_field(sc.spec.id) << ",ok," << requested << ',' << v.accepted_factor << ','
            << tx.bytes_used << ',' << format_number(v.quality.value()) << ','
            << format_number(delivered_q) << ',' << tx.flipped_bits << '\n';
    }
    const BudgetCheck check = budget_check(costs, cfg.channel);
    std::ostringstream summary;
    summary << "total_bytes,budget_bytes,feasible\n"
            << check.total << ',' << cfg.channel.budget_bytes << ',' << (check.feasible ? 1 : 0) << '\n';
    out.write_text("pipeline.csv", table.str());
    out.write_text("summary.csv", summary.str());
    detail::finish_manifest(cfg, "pipeline", started, out);
    out_stream << "pipeline: " << cfg.services.size() << " services, " << check.total << " bytes"
               << (check.feasible ? " (within budget)" : " (over budget)") << '\n';
    return any_failed ? kExitValidation : kExitOk;
  });
}

// Writes the ten-image synthetic corpus as PGM files.
inline int cmd_synth(const std::filesystem::path& dir, int size, std::ostream& err) {
  return detail::guarded(err, [&] {
    if (size < 8 || size > 4096) throw DomainError("synthetic image size must be in [8, 4096]");
    detail::OutputDir out(dir);
    for (const auto& img : synthetic::degradation_corpus(size)) {
      out.write_binary(img.id + ".pgm", format_pgm(img.pixels));
    }
    return kExitOk;
  });
}

}  // namespace semcom
