// mlgc: multilayer graph clustering from the command line.
//
//   mlgc synth     --out DIR [...]        generate a synthetic benchmark
//   mlgc pipeline  --data DIR --out DIR   aggregate + train + cluster
//   mlgc predict   --model F --centers F --features F --out F
//   mlgc evaluate  --pred F --truth F [--out F]
//
// Exit codes: 0 success, 1 numerical/training/runtime failure, 2 bad usage
// or malformed input.  Errors are reported as one JSON object on stderr.

#include <cstdint>
#include <exception>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>

#include "mlgc/cluster.hpp"
#include "mlgc/data_io.hpp"
#include "mlgc/errors.hpp"
#include "mlgc/metrics.hpp"
#include "mlgc/pipeline.hpp"

namespace {

namespace fs = std::filesystem;
using nlohmann::json;

// Accepts a JSON object as a CLI11 config file.  Top-level keys set options
// of the main app; an object value whose key names a subcommand sets that
// subcommand's options, e.g. {"pipeline": {"method": "arithmetic"}}.
class JsonConfig : public CLI::Config {
 public:
  std::string to_config(const CLI::App*, bool, bool, std::string) const override {
    return "{}";
  }

  std::vector<CLI::ConfigItem> from_config(std::istream& input) const override {
    json j;
    try {
      input >> j;
    } catch (const json::exception& e) {
      throw CLI::FileError(std::string("config file is not valid JSON: ") + e.what());
    }
    if (!j.is_object()) {
      throw CLI::FileError("config file must contain a JSON object");
    }
    std::vector<CLI::ConfigItem> items;
    flatten(j, {}, items);
    return items;
  }

 private:
  static void flatten(const json& j, std::vector<std::string> parents,
                      std::vector<CLI::ConfigItem>& items) {
    for (const auto& [key, value] : j.items()) {
      if (value.is_object()) {
        auto nested = parents;
        nested.push_back(key);
        flatten(value, std::move(nested), items);
        continue;
      }
      CLI::ConfigItem item;
      item.parents = parents;
      item.name = key;
      if (value.is_array()) {
        for (const auto& element : value) {
          item.inputs.push_back(scalar_to_string(element));
        }
      } else {
        item.inputs.push_back(scalar_to_string(value));
      }
      items.push_back(std::move(item));
    }
  }

  static std::string scalar_to_string(const json& value) {
    if (value.is_string()) return value.get<std::string>();
    if (value.is_boolean()) return value.get<bool>() ? "true" : "false";
    return value.dump();
  }
};

void print_error(const std::string& kind, const std::string& message) {
  json j;
  j["error"] = kind;
  j["message"] = message;
  std::cerr << j.dump() << std::endl;
}

struct SynthOptions {
  std::string out;
  mlgc::SyntheticSpec spec;
};

struct PipelineOptions {
  std::string data;
  std::string out;
  int num_clusters = 0;
  std::string method = "geometric";
  mlgc::AggregationConfig aggregation;
  bool unnormalized = false;
  mlgc::TrainConfig training;
  int restarts = 10;
  std::vector<int> hidden = {400, 200, 100};
  std::uint64_t seed = 0;
};

struct PredictOptions {
  std::string model;
  std::string centers;
  std::string features;
  std::string out;
};

struct EvaluateOptions {
  std::string pred;
  std::string truth;
  std::string out;
};

int run_synth(const SynthOptions& opt, bool quiet) {
  const mlgc::DatasetBundle bundle = mlgc::generate_synthetic(opt.spec);
  mlgc::save_bundle(bundle, opt.out);
  if (!quiet) {
    std::cerr << "wrote " << bundle.graph.num_vertices() << " nodes, "
              << bundle.graph.num_layers() << " layers ("
              << bundle.graph.num_edges() << " edges), feature dim "
              << bundle.features.dim() << " to " << opt.out << "\n";
  }
  return 0;
}

int run_pipeline_cmd(const PipelineOptions& opt, bool quiet) {
  mlgc::PipelineConfig config;
  config.num_clusters = opt.num_clusters;
  if (opt.method == "geometric") {
    config.method = mlgc::AggregationMethod::geometric;
  } else if (opt.method == "arithmetic") {
    config.method = mlgc::AggregationMethod::arithmetic;
  } else {
    throw mlgc::ArgumentError("--method must be 'geometric' or 'arithmetic', got '" +
                              opt.method + "'");
  }
  config.aggregation = opt.aggregation;
  config.aggregation.normalize_step = !opt.unnormalized;
  config.training = opt.training;
  config.training.seed = opt.seed;
  config.kmeans_restarts = opt.restarts;
  config.hidden_sizes = opt.hidden;
  config.seed = opt.seed;

  const mlgc::DatasetBundle bundle = mlgc::load_bundle(opt.data);
  if (!quiet) {
    std::cerr << "loaded " << bundle.graph.num_vertices() << " nodes, "
              << bundle.graph.num_layers() << " layers from " << opt.data << "\n";
  }

  std::function<void(int, double)> progress;
  if (!quiet) {
    progress = [](int step, double loss) {
      if (step % 100 == 0) {
        std::cerr << "step " << step << "  loss " << loss << "\n";
      }
    };
  }

  const mlgc::PipelineResult result = mlgc::run_pipeline(bundle, config, progress);
  if (!quiet) {
    std::cerr << "training stopped after " << result.embedding.steps_run
              << " steps, final loss " << result.embedding.final_loss << "\n";
  }

  std::error_code ec;
  fs::create_directories(opt.out, ec);
  if (ec) {
    throw mlgc::IoError("cannot create directory '" + opt.out + "': " + ec.message());
  }
  mlgc::save_model(result.model, result.embedding.cholesky_factor,
                   (fs::path(opt.out) / "model.json").string());
  mlgc::save_partition_csv(result.partition.assignments,
                           (fs::path(opt.out) / "partition.csv").string());
  mlgc::save_matrix_csv(result.partition.centers,
                        (fs::path(opt.out) / "centers.csv").string());
  if (result.metrics) {
    std::ofstream out((fs::path(opt.out) / "metrics.json").string());
    out << mlgc::to_json(*result.metrics) << '\n';
    if (!out) {
      throw mlgc::IoError("write to '" + opt.out + "/metrics.json' failed");
    }
    if (!quiet) {
      std::cerr << "purity " << result.metrics->purity << "  nmi "
                << result.metrics->nmi << "  ari " << result.metrics->ari << "\n";
    }
  }
  return 0;
}

// True when the file exists but holds no data (only blank lines, if any).
bool csv_is_empty(const std::string& path) {
  std::ifstream in(path);
  if (!in) {
    throw mlgc::IoError("cannot open '" + path + "' for reading");
  }
  std::string line;
  while (std::getline(in, line)) {
    if (line.find_first_not_of(" \t\r") != std::string::npos) {
      return false;
    }
  }
  return true;
}

int run_predict(const PredictOptions& opt, bool quiet) {
  const mlgc::LoadedModel loaded = mlgc::load_model(opt.model);
  const Eigen::MatrixXd centers = mlgc::load_matrix_csv(opt.centers);
  if (csv_is_empty(opt.features)) {
    // Nothing to classify: emit an empty assignment table.
    mlgc::save_partition_csv({}, opt.out);
    if (!quiet) {
      std::cerr << "no feature rows in " << opt.features << " -> " << opt.out
                << "\n";
    }
    return 0;
  }
  const Eigen::MatrixXd features = mlgc::load_matrix_csv(opt.features);
  if (centers.cols() != loaded.model.output_dim()) {
    throw mlgc::ArgumentError("centers have dim " + std::to_string(centers.cols()) +
                              " but the model embeds into dim " +
                              std::to_string(loaded.model.output_dim()));
  }
  const std::vector<int> assignments = mlgc::classify_all(
      loaded.model, loaded.cholesky_factor, centers, features);
  mlgc::save_partition_csv(assignments, opt.out);
  if (!quiet) {
    std::cerr << "classified " << assignments.size() << " points into "
              << centers.rows() << " clusters -> " << opt.out << "\n";
  }
  return 0;
}

int run_evaluate(const EvaluateOptions& opt) {
  const std::vector<int> pred = mlgc::load_assignments(opt.pred);
  const std::vector<int> truth = mlgc::load_assignments(opt.truth);
  const mlgc::MetricsReport report = mlgc::evaluate_clustering(pred, truth);
  const std::string text = mlgc::to_json(report);
  std::cout << text << std::endl;
  if (!opt.out.empty()) {
    std::ofstream out(opt.out);
    out << text << '\n';
    if (!out) {
      throw mlgc::IoError("write to '" + opt.out + "' failed");
    }
  }
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"multilayer graph clustering: SPD Laplacian aggregation, "
               "spectral embedding network, k-means"};
  app.require_subcommand(1);
  app.config_formatter(std::make_shared<JsonConfig>());
  app.set_config("--config", "", "JSON file with default option values");

  bool quiet = false;
  app.add_flag("-q,--quiet", quiet, "suppress progress output on stderr");

  SynthOptions synth;
  CLI::App* synth_cmd = app.add_subcommand("synth", "generate a synthetic multilayer benchmark");
  synth_cmd->add_option("--out", synth.out, "output dataset directory")->required();
  synth_cmd->add_option("--n", synth.spec.num_points, "number of points");
  synth_cmd->add_option("--k", synth.spec.num_clusters, "number of clusters");
  synth_cmd->add_option("--layers", synth.spec.num_layers, "number of layers");
  synth_cmd->add_option("--dim", synth.spec.layer_dim, "coordinates per layer");
  synth_cmd->add_option("--knn", synth.spec.knn_k, "neighbours per point");
  synth_cmd->add_option("--separation", synth.spec.separation,
                        "adjacent cluster mean distance, in noise standard deviations");
  synth_cmd->add_option("--sigma", synth.spec.noise_sigma, "noise standard deviation");
  synth_cmd->add_option("--seed", synth.spec.seed, "master seed");

  PipelineOptions pipe;
  CLI::App* pipe_cmd = app.add_subcommand("pipeline", "aggregate, embed and cluster a dataset");
  pipe_cmd->add_option("--data", pipe.data, "dataset directory (see synth)")->required();
  pipe_cmd->add_option("--out", pipe.out, "output directory")->required();
  pipe_cmd->add_option("--k", pipe.num_clusters,
                       "number of clusters (default: inferred from labels)");
  pipe_cmd->add_option("--method", pipe.method, "aggregation: geometric | arithmetic");
  pipe_cmd->add_option("--epsilon", pipe.aggregation.epsilon,
                       "Laplacian shift (<= 0 selects the scale-aware default)");
  pipe_cmd->add_option("--step-size", pipe.aggregation.step_size, "Karcher flow step size");
  pipe_cmd->add_option("--iterations", pipe.aggregation.max_iterations,
                       "Karcher flow iteration cap");
  pipe_cmd->add_option("--flow-tol", pipe.aggregation.tolerance,
                       "Karcher flow relative convergence tolerance");
  pipe_cmd->add_flag("--unnormalized", pipe.unnormalized,
                     "apply the raw sum of tangent logs instead of their mean");
  pipe_cmd->add_option("--lr", pipe.training.learning_rate, "AmsGrad learning rate");
  pipe_cmd->add_option("--beta1", pipe.training.beta1, "AmsGrad first-moment decay");
  pipe_cmd->add_option("--beta2", pipe.training.beta2, "AmsGrad second-moment decay");
  pipe_cmd->add_option("--max-steps", pipe.training.max_steps, "training step cap");
  pipe_cmd->add_option("--plateau-tol", pipe.training.plateau_tol,
                       "relative loss change that counts as a plateau");
  pipe_cmd->add_option("--plateau-window", pipe.training.plateau_window,
                       "steps between the two losses compared for the plateau stop");
  pipe_cmd->add_option("--jitter", pipe.training.cholesky_jitter,
                       "relative Gram Cholesky jitter");
  pipe_cmd->add_option("--restarts", pipe.restarts, "k-means restarts");
  pipe_cmd->add_option("--hidden", pipe.hidden, "hidden layer sizes")->delimiter(',');
  pipe_cmd->add_option("--seed", pipe.seed, "master seed");

  PredictOptions pred;
  CLI::App* pred_cmd = app.add_subcommand("predict", "classify unseen feature rows");
  pred_cmd->add_option("--model", pred.model, "model JSON from pipeline")->required();
  pred_cmd->add_option("--centers", pred.centers, "centers CSV from pipeline")->required();
  pred_cmd->add_option("--features", pred.features, "feature CSV to classify")->required();
  pred_cmd->add_option("--out", pred.out, "output assignment CSV")->required();

  EvaluateOptions eval;
  CLI::App* eval_cmd = app.add_subcommand("evaluate", "score a clustering against ground truth");
  eval_cmd->add_option("--pred", eval.pred, "predicted assignments")->required();
  eval_cmd->add_option("--truth", eval.truth, "reference labels")->required();
  eval_cmd->add_option("--out", eval.out, "also write the metrics JSON here");

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::CallForAllHelp& e) {
    return app.exit(e);
  } catch (const CLI::CallForVersion& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    print_error("usage", e.what());
    return 2;
  }

  try {
    if (app.got_subcommand(synth_cmd)) return run_synth(synth, quiet);
    if (app.got_subcommand(pipe_cmd)) return run_pipeline_cmd(pipe, quiet);
    if (app.got_subcommand(pred_cmd)) return run_predict(pred, quiet);
    if (app.got_subcommand(eval_cmd)) return run_evaluate(eval);
    print_error("usage", "no subcommand given");
    return 2;
  } catch (const mlgc::ArgumentError& e) {
    print_error("argument", e.what());
    return 2;
  } catch (const mlgc::IoError& e) {
    print_error("io", e.what());
    return 2;
  } catch (const mlgc::TrainingError& e) {
    print_error("training", e.what());
    return 1;
  } catch (const mlgc::NumericalError& e) {
    print_error("numerical", e.what());
    return 1;
  } catch (const std::exception& e) {
    print_error("internal", e.what());
    return 1;
  }
}
