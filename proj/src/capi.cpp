#include "fraudbench.h"

#include <cstring>
#include <fstream>
#include <new>
#include <stdexcept>
#include <string>

#include "fraudbench/attack.hpp"
#include "fraudbench/detectors.hpp"
#include "fraudbench/graph.hpp"
#include "fraudbench/harness.hpp"
#include "fraudbench/metrics.hpp"
#include "fraudbench/pda.hpp"
#include "fraudbench/synth.hpp"

struct fb_graph {
  fraudbench::LabeledGraph g;
};

namespace {

thread_local std::string g_last_error;

fb_status fail(fb_status code, const std::string& message) {
  g_last_error = message;
  return code;
}

// Maps exceptions to status codes; invalid_argument and runtime_error carry
// caller-facing messages, everything else is internal.
template <typename Fn>
fb_status wrap(Fn&& fn) {
  try {
    fn();
    g_last_error.clear();
    return FB_OK;
  } catch (const std::invalid_argument& e) {
    return fail(FB_ERR_INVALID_ARGUMENT, e.what());
  } catch (const std::runtime_error& e) {
    const std::string msg = e.what();
    if (msg.find("budget") != std::string::npos ||
        msg.find("charge") != std::string::npos)
      return fail(FB_ERR_BUDGET, msg);
    if (msg.find("open") != std::string::npos ||
        msg.find("write") != std::string::npos ||
        msg.find("file") != std::string::npos ||
        msg.find("line") != std::string::npos)
      return fail(FB_ERR_IO, msg);
    return fail(FB_ERR_INVALID_ARGUMENT, msg);
  } catch (const std::bad_alloc&) {
    return fail(FB_ERR_INTERNAL, "out of memory");
  } catch (const std::exception& e) {
    return fail(FB_ERR_INTERNAL, e.what());
  } catch (...) {
    return fail(FB_ERR_INTERNAL, "unknown error");
  }
}

fb_status require(bool ok, const char* message) {
  return ok ? FB_OK : fail(FB_ERR_INVALID_ARGUMENT, message);
}

}  // namespace

extern "C" {

const char* fb_last_error(void) { return g_last_error.c_str(); }

const char* fb_version(void) { return "0.1.0"; }

fb_status fb_graph_load(const char* edges_path, const char* labels_path,
                        const char* metadata_path, fb_graph** out) {
  if (fb_status s = require(edges_path && labels_path && out,
                            "fb_graph_load: null argument"))
    return s;
  return wrap([&] {
    auto g = fraudbench::load_graph(edges_path, labels_path,
                                    metadata_path ? metadata_path : "");
    *out = new fb_graph{std::move(g)};
  });
}

fb_status fb_graph_save(const fb_graph* g, const char* edges_path,
                        const char* labels_path) {
  if (fb_status s = require(g && edges_path && labels_path,
                            "fb_graph_save: null argument"))
    return s;
  return wrap([&] { fraudbench::save_graph(g->g, edges_path, labels_path); });
}

fb_status fb_graph_sample_sbm(int64_t n_benign, int64_t n_fraud, double p_benign,
                              double p_fraud, double p_cross, uint64_t seed,
                              fb_graph** out) {
  if (fb_status s = require(out != nullptr, "fb_graph_sample_sbm: null output"))
    return s;
  return wrap([&] {
    fraudbench::SbmParams params{n_fraud, n_benign, p_fraud, p_benign, p_cross};
    *out = new fb_graph{fraudbench::sample_sbm(params, seed)};
  });
}

fb_status fb_graph_inject_clique(const fb_graph* g, int size, double density,
                                 uint64_t seed, fb_graph** out) {
  if (fb_status s = require(g && out, "fb_graph_inject_clique: null argument"))
    return s;
  return wrap([&] {
    *out = new fb_graph{fraudbench::inject_fraud_clique(g->g, size, density, seed)};
  });
}

fb_status fb_graph_counts(const fb_graph* g, int* n_vertices, int* n_fraud,
                          int64_t* n_edges) {
  if (fb_status s = require(g != nullptr, "fb_graph_counts: null graph")) return s;
  if (n_vertices) *n_vertices = g->g.n();
  if (n_fraud) *n_fraud = g->g.n_fraud();
  if (n_edges) *n_edges = g->g.edge_count();
  g_last_error.clear();
  return FB_OK;
}

void fb_graph_free(fb_graph* g) { delete g; }

fb_status fb_evaluate(const fb_graph* g, const char* detector, const char* metric,
                      double* out_value) {
  if (fb_status s = require(g && detector && metric && out_value,
                            "fb_evaluate: null argument"))
    return s;
  return wrap([&] {
    fraudbench::ScoreVector scores =
        fraudbench::score(fraudbench::builtin_detector(detector), g->g);
    const std::string m = metric;
    if (m == "auc")
      *out_value = fraudbench::auc(scores, g->g);
    else if (m == "f1")
      *out_value = fraudbench::f1_best_threshold(scores, g->g);
    else
      throw std::invalid_argument("fb_evaluate: unknown metric " + m);
  });
}

fb_status fb_pda_release(const fb_graph* g, const char* detector, int k, double rho,
                         double epsilon, int noise_enabled, uint64_t seed,
                         double* out_released, double* out_partition_mean) {
  if (fb_status s = require(g && detector && out_released,
                            "fb_pda_release: null argument"))
    return s;
  return wrap([&] {
    fraudbench::PdaConfig config;
    config.k = k;
    config.rho = rho;
    config.epsilon = epsilon;
    config.noise_enabled = noise_enabled != 0;
    fraudbench::BudgetLedger ledger(epsilon > 0.0 ? epsilon : 1.0);
    fraudbench::CompiledDetector det =
        fraudbench::compile(fraudbench::builtin_detector(detector));
    fraudbench::PdaReleaseRecord rec = fraudbench::pda_release(
        det, g->g, config,
        [](const fraudbench::ScoreVector& s, const fraudbench::LabeledGraph& gg) {
          return fraudbench::auc(s, gg);
        },
        ledger, seed);
    *out_released = rec.released;
    if (out_partition_mean) *out_partition_mean = rec.partition_mean;
  });
}

fb_status fb_synth_generate(const fb_graph* g, const char* method, double epsilon,
                            double delta, double d_multiplier, int noise_enabled,
                            uint64_t seed, fb_graph** out) {
  if (fb_status s = require(g && method && out, "fb_synth_generate: null argument"))
    return s;
  return wrap([&] {
    *out = new fb_graph{fraudbench::generate_synthetic(
        g->g, fraudbench::synth_method_from_string(method), epsilon, delta,
        d_multiplier, noise_enabled != 0, seed)};
  });
}

fb_status fb_attack_run(const char* mode, int64_t n_benign, int64_t n_fraud,
                        double p_benign, double p_fraud, double p_cross, int k,
                        double rho, double epsilon, double delta,
                        double d_multiplier, int n_positive, int n_negative,
                        uint64_t seed, const char* roc_out_path, double* out_auc,
                        double* out_tpr_at_fpr0) {
  if (fb_status s = require(mode && out_auc, "fb_attack_run: null argument")) return s;
  return wrap([&] {
    fraudbench::AttackServer server;
    const std::string m = mode;
    if (m == "exact") {
      server.mode = fraudbench::AttackServer::Mode::Exact;
    } else if (m == "pda") {
      server.mode = fraudbench::AttackServer::Mode::Pda;
      server.pda.k = k;
      server.pda.rho = rho;
      server.pda.epsilon = epsilon;
    } else {
      server.mode = fraudbench::AttackServer::Mode::Synth;
      server.method = fraudbench::synth_method_from_string(m);
      server.epsilon = epsilon;
      server.delta = delta;
      server.d_multiplier = d_multiplier;
    }
    fraudbench::SbmParams family{n_fraud, n_benign, p_fraud, p_benign, p_cross};
    auto trials =
        fraudbench::run_attack_trials(server, family, n_positive, n_negative, seed);
    fraudbench::RocCurve roc = fraudbench::roc_curve(trials);
    *out_auc = roc.auc;
    if (out_tpr_at_fpr0) {
      double best = 0.0;
      for (const auto& p : roc.points)
        if (p.fpr == 0.0 && p.tpr > best) best = p.tpr;
      *out_tpr_at_fpr0 = best;
    }
    if (roc_out_path) {
      std::ofstream out(roc_out_path, std::ios::binary);
      if (!out)
        throw std::runtime_error(std::string("cannot write output file: ") +
                                 roc_out_path);
      out << "fpr,tpr,threshold\n";
      char buf[128];
      for (const auto& p : roc.points) {
        std::snprintf(buf, sizeof(buf), "%.17g,%.17g,%.17g\n", p.fpr, p.tpr,
                      p.threshold);
        out << buf;
      }
    }
  });
}

fb_status fb_run_experiment(const char* config_path, const char* out_path) {
  if (fb_status s = require(config_path && out_path,
                            "fb_run_experiment: null argument"))
    return s;
  return wrap([&] {
    fraudbench::run_experiment(fraudbench::parse_config_file(config_path), out_path);
  });
}

fb_status fb_run_experiment_text(const char* config_text, const char* out_path) {
  if (fb_status s = require(config_text && out_path,
                            "fb_run_experiment_text: null argument"))
    return s;
  return wrap([&] {
    fraudbench::run_experiment(fraudbench::parse_config_text(config_text), out_path);
  });
}

}  // extern "C"
