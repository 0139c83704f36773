// ohc: command-line front end for the orienthc library.

#include <fstream>
#include <iostream>
#include <sstream>

#include "CLI11.hpp"
#include "orienthc/decomposition.hpp"
#include "orienthc/embedding.hpp"
#include "orienthc/errors.hpp"
#include "orienthc/generators.hpp"
#include "orienthc/workbench.hpp"

using namespace ohc;

namespace {

void emit(const std::string& path, const std::string& text) {
  if (path.empty() || path == "-") {
    std::cout << text;
    return;
  }
  std::ofstream out(path);
  if (!out) throw InputError("cannot write " + path);
  out << text;
}

json read_json(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw InputError("cannot read " + path);
  try {
    return json::parse(in);
  } catch (const json::parse_error& e) {
    throw InputError(path + ": " + e.what());
  }
}

std::vector<int> parse_sizes(const std::string& text) {
  std::vector<int> out;
  std::stringstream ss(text);
  std::string item;
  while (std::getline(ss, item, ',')) {
    try {
      out.push_back(std::stoi(item));
    } catch (const std::exception&) {
      throw InputError("bad size list '" + text + "'");
    }
  }
  return out;
}

AlphaSchedule parse_schedule(const std::string& s) {
  if (s == "literal") return AlphaSchedule::Literal;
  if (s == "flat") return AlphaSchedule::Flat;
  throw ConfigError("schedule must be literal or flat");
}

struct PartitionOpts {
  int k = 2;
  double zeta = 0.2;
  double alpha = 0.0;
  int exact_cap = 20;
  std::string schedule = "literal";
  bool no_degree = false;
  std::uint64_t seed = 1;

  void add(CLI::App* app) {
    app->add_option("--k", k, "class budget");
    app->add_option("--zeta", zeta, "degree slack");
    app->add_option("--alpha", alpha, "sparsity level (0 = default)");
    app->add_option("--exact-cap", exact_cap, "largest class checked exactly");
    app->add_option("--schedule", schedule, "literal or flat");
    app->add_flag("--no-degree-check", no_degree, "skip the minimum degree precondition");
    app->add_option("--seed", seed, "seed");
  }
  DecompositionParams params(int workers) const {
    DecompositionParams p;
    p.k = k;
    p.zeta = zeta;
    p.alpha = alpha;
    p.exact_threshold = exact_cap;
    p.schedule = parse_schedule(schedule);
    p.enforce_degree = !no_degree;
    p.seed = seed;
    p.workers = workers;
    return p;
  }
};

int exit_code(const std::exception& e) {
  if (dynamic_cast<const InputError*>(&e)) return 2;
  if (dynamic_cast<const PreconditionError*>(&e)) return 3;
  if (dynamic_cast<const CapabilityError*>(&e)) return 4;
  if (dynamic_cast<const ResourceError*>(&e)) return 5;
  if (dynamic_cast<const ConfigError*>(&e)) return 6;
  return 1;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Oriented Hamilton cycle workbench"};
  app.require_subcommand(1);

  // generate
  GenSpec gen;
  std::string gen_sizes, gen_out;
  auto* generate_cmd = app.add_subcommand("generate", "write a digraph from a generator family");
  generate_cmd->add_option("--family", gen.family, "complete|bipartite|split|g1|random|tournament|transitive")
      ->required();
  generate_cmd->add_option("--n", gen.n, "order");
  generate_cmd->add_option("--sizes", gen_sizes, "comma separated part sizes (g1)");
  generate_cmd->add_option("--intra", gen.intra, "double edge density inside parts (g1)");
  generate_cmd->add_option("--noise", gen.noise, "forward noise across parts (g1)");
  generate_cmd->add_option("--delta", gen.delta, "minimum degree target (random)");
  generate_cmd->add_option("--seed", gen.seed, "seed");
  generate_cmd->add_option("--out", gen_out, "output edge list (default stdout)");

  // partition
  std::string part_in, part_out;
  PartitionOpts popts;
  auto* partition_cmd = app.add_subcommand("partition", "decompose a digraph into ordered expander classes");
  partition_cmd->add_option("--input", part_in, "edge list")->required();
  popts.add(partition_cmd);
  partition_cmd->add_option("--out", part_out, "partition JSON (default stdout)");

  // embed
  std::string emb_in, emb_pattern, emb_partition, emb_mode = "pipeline", emb_out;
  bool emb_path = false;
  double emb_seconds = 10.0;
  PartitionOpts eopts;
  auto* embed_cmd = app.add_subcommand("embed", "embed an oriented Hamilton cycle");
  embed_cmd->add_option("--input", emb_in, "edge list")->required();
  embed_cmd->add_option("--pattern", emb_pattern, "+/- string, 'directed' or 'antidirected'")->required();
  embed_cmd->add_option("--partition", emb_partition, "partition JSON from the partition subcommand");
  embed_cmd->add_option("--mode", emb_mode, "pipeline or oracle");
  embed_cmd->add_flag("--path", emb_path, "treat the pattern as a path (oracle mode)");
  embed_cmd->add_option("--seconds", emb_seconds, "time budget");
  eopts.add(embed_cmd);
  embed_cmd->add_option("--out", emb_out, "embedding JSON (default stdout)");

  // verify
  std::string ver_in, ver_partition, ver_embedding, ver_pattern, ver_out;
  double ver_eta = 0.3, ver_tau = 0.25;
  PartitionOpts vopts;
  auto* verify_cmd = app.add_subcommand("verify", "check a partition, an embedding or the sparse-cut dichotomy");
  verify_cmd->add_option("--input", ver_in, "edge list")->required();
  verify_cmd->add_option("--partition", ver_partition, "partition JSON to verify");
  verify_cmd->add_option("--embedding", ver_embedding, "embedding JSON to check");
  verify_cmd->add_option("--pattern", ver_pattern, "pattern of the embedding (default: the one recorded)");
  verify_cmd->add_option("--eta", ver_eta, "dichotomy: degree slack");
  verify_cmd->add_option("--tau", ver_tau, "dichotomy: size window");
  vopts.add(verify_cmd);
  verify_cmd->add_option("--out", ver_out, "report JSON (default stdout)");

  // experiment
  std::string exp_config, exp_out = "results";
  auto* experiment_cmd = app.add_subcommand("experiment", "run verification suites from a JSON config");
  experiment_cmd->add_option("--config", exp_config, "suite config JSON")->required();
  experiment_cmd->add_option("--out", exp_out, "results directory");

  CLI11_PARSE(app, argc, argv);

  try {
    const int workers = workers_from_env(1);

    if (*generate_cmd) {
      if (!gen_sizes.empty()) gen.sizes = parse_sizes(gen_sizes);
      const Digraph g = generate(gen);
      std::ostringstream out;
      write_edge_list(out, g, describe(gen));
      emit(gen_out, out.str());
      return 0;
    }

    if (*partition_cmd) {
      const Digraph g = read_edge_list_file(part_in);
      const auto p = popts.params(workers);
      const auto sp = decompose(g, p);
      json doc = to_json(sp);
      doc["report"] = to_json(verify_partition(g, sp, p));
      emit(part_out, doc.dump(2) + "\n");
      return 0;
    }

    if (*embed_cmd) {
      const Digraph g = read_edge_list_file(emb_in);
      if (emb_mode == "oracle") {
        OracleOptions o;
        o.seconds = emb_seconds;
        o.workers = workers;
        json doc;
        if (emb_path) {
          const PathPattern pp = emb_pattern == "directed"       ? PathPattern::directed(g.order())
                                 : emb_pattern == "antidirected" ? PathPattern::antidirected(g.order())
                                                                 : PathPattern::parse(emb_pattern);
          const auto r = exact_embed(g, pp, {}, o);
          doc = {{"pattern", pp.to_string()}, {"status", to_string(r.status)}, {"nodes", r.nodes}};
          if (r.found()) {
            const auto chk = check_path_embedding(g, pp, r.embedding.map);
            doc["map"] = r.embedding.map;
            doc["checker"] = {{"valid", chk.ok}, {"reason", chk.reason}};
          }
        } else {
          const CyclePattern c = CyclePattern::parse(emb_pattern, g.order());
          const auto r = exact_embed(g, c, {}, o);
          doc = {{"pattern", c.to_string()}, {"status", to_string(r.status)}, {"nodes", r.nodes}};
          if (r.found()) {
            const auto chk = check_cycle_embedding(g, c, r.embedding.map, c.size() == g.order());
            json map = json::array();
            for (std::size_t i = 0; i < r.embedding.map.size(); ++i) map.push_back({static_cast<int>(i), r.embedding.map[i]});
            doc["map"] = map;
            doc["checker"] = {{"valid", chk.ok}, {"reason", chk.reason}};
          }
        }
        emit(emb_out, doc.dump(2) + "\n");
        return doc["status"] == "found" ? 0 : 1;
      }
      if (emb_mode != "pipeline") throw ConfigError("mode must be pipeline or oracle");
      const CyclePattern c = CyclePattern::parse(emb_pattern, g.order());
      EmbedParams ep;
      ep.seconds = emb_seconds;
      ep.seed = eopts.seed;
      PipelineResult r;
      if (!emb_partition.empty()) {
        const json doc = read_json(emb_partition);
        auto classes = classes_from_json(doc, g.order());
        if (!doc.value("reversed", false)) std::reverse(classes.begin(), classes.end());
        r = embed_hamilton_orientation(g, classes, c, ep);
      } else {
        auto p = eopts.params(workers);
        p.enforce_degree = false;
        r = embed_hamilton_orientation(g, decompose(g, p), c, ep);
      }
      emit(emb_out, embedding_json(c, r).dump(2) + "\n");
      return r.ok ? 0 : 1;
    }

    if (*verify_cmd) {
      const Digraph g = read_edge_list_file(ver_in);
      json doc;
      if (!ver_partition.empty()) {
        const auto classes = classes_from_json(read_json(ver_partition), g.order());
        const auto report = verify_partition(g, classes, vopts.params(workers));
        doc = to_json(report);
      } else if (!ver_embedding.empty()) {
        const json e = read_json(ver_embedding);
        const std::string pat = ver_pattern.empty() ? e.value("pattern", std::string()) : ver_pattern;
        const CyclePattern c = CyclePattern::parse(pat, g.order());
        std::vector<Vertex> map(c.size(), -1);
        for (const auto& pr : e.at("map")) map.at(pr.at(0).get<int>()) = pr.at(1).get<int>();
        const auto chk = check_cycle_embedding(g, c, map, c.size() == g.order());
        doc = {{"valid", chk.ok}, {"reason", chk.reason}};
      } else {
        const double ver_alpha = vopts.alpha > 0 ? vopts.alpha : 0.3;
        const auto d = sparse_or_expander(g, ver_eta, ver_alpha, ver_tau);
        const double nu = ver_alpha * ver_tau * ver_eta / 4;
        if (d.kind == Dichotomy::Kind::SparseCut && d.cut.best) {
          doc = to_json(*d.cut.best);
        } else if (d.verdict) {
          doc = to_json(*d.verdict, nu, ver_tau);
        } else {
          doc = {{"outcome", "neither"}};
        }
        doc["params"] = {{"nu", nu}, {"tau", ver_tau}, {"alpha", ver_alpha}};
        doc["mode"] = d.exact ? "exact" : "sampled";
      }
      emit(ver_out, doc.dump(2) + "\n");
      return 0;
    }

    if (*experiment_cmd) {
      auto config = ExperimentConfig::from_json(read_json(exp_config));
      config.workers = workers_from_env(config.workers);
      const auto summary = run(config, exp_out);
      std::cout << summary.to_json().dump(2) << "\n";
      return summary.any_failure() ? 1 : 0;
    }
  } catch (const std::exception& e) {
    std::cerr << "ohc: " << e.what() << "\n";
    return exit_code(e);
  }
  return 0;
}
