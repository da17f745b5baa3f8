#pragma once

#include <cstdint>
#include <vector>

#include "gauss.hpp"
#include "model.hpp"
#include "sgld.hpp"

namespace xfbci {

enum class CovMode { SampleCovPlusAlphaJitter, ScaledIdentityAlpha };

struct EpConfig {
  int rounds = 20;
  double damping = 0.0;  // 0 selects the default 1/K
  double alpha = 1.0;
  CovMode cov_mode = CovMode::SampleCovPlusAlphaJitter;
  double prior_precision = 1e-6;  // tau0: the flat prior as a proper factor
  SgldConfig sgld;                // per-chain seed is derived internally
  double psd_floor = 1e-6;
  // Rounds after the first start each chain at the client's previous tilted
  // mean, which removes the burn-in transient from the recorded moments.
  bool warm_start = true;
  std::uint64_t seed = 0;

  void validate() const;
};

struct ServerState {
  GaussNP q_global;
  int round = 0;
};

struct ClientState {
  int id = 0;
  GaussNP q_k;                       // site factor, starts as the zero factor
  const ClientDataset* data = nullptr;  // never serialized into messages
};

// The only thing a client may send: one natural-parameter increment. No field
// can carry per-sample payloads, which is the privacy contract in type form.
struct DeltaMessage {
  int client_id = 0;
  Vec d_eta;
  Mat d_lam;
};

struct TelemetryRow {
  int round = 0;
  int client = 0;
  double d_eta_norm = 0.0;
  double d_lam_fro = 0.0;
  Vec tilted_mean;
};

// Message accounting for the transcript-size audit: payload_doubles counts the
// numbers that crossed the wire, which must not depend on any N_k.
struct TranscriptAudit {
  std::size_t broadcasts = 0;
  std::size_t deltas = 0;
  std::size_t payload_doubles = 0;
};

struct EpResult {
  std::vector<Vec> theta_hat;  // personalized point estimates, one per client
  GaussNP q_global;
  std::vector<GaussNP> sites;
  std::vector<TelemetryRow> telemetry;
  TranscriptAudit transcript;
};

GaussNP cavity(const ServerState& server, const ClientState& client);

// Stream id for one tilted fit. Keyed by (engine seed, round, dataset bytes)
// rather than client index, so clients holding identical data run identical
// chains and the protocol stays exactly symmetric.
std::uint64_t chain_seed(std::uint64_t engine_seed, const ClientDataset& data, int round);

// SGLD against likelihood x cavity, then a Gaussian approximation with the
// configured covariance rule. theta0 is the chain start (zero by default).
GaussNP fit_tilted(const ClientDataset& data, const GaussNP& cav, const EpConfig& cfg,
                   std::uint64_t chain_seed, const Vec& theta0);

class EpEngine {
 public:
  EpEngine(const std::vector<ClientDataset>& datasets, EpConfig cfg);

  // One synchronous round: fan-out (cavity, tilted fit, delta), then the
  // damped, ascending-id reduction on the server.
  std::vector<DeltaMessage> run_round();

  EpResult run();  // cfg.rounds rounds, then per-client extraction

  const ServerState& server() const { return server_; }
  const std::vector<ClientState>& clients() const { return clients_; }
  Vec personalized_mean(int k) const;

 private:
  EpConfig cfg_;
  std::vector<ClientDataset> data_;
  ServerState server_;
  std::vector<ClientState> clients_;
  std::vector<GaussNP> last_tilted_;  // empty natural pair until first fit
  std::vector<Vec> warm_mean_;
  TranscriptAudit audit_;
  std::vector<TelemetryRow> telemetry_;
  double delta_;
  int d_;
};

// Convenience wrapper: run the full protocol on a set of client datasets.
EpResult ep_run(const std::vector<ClientDataset>& datasets, const EpConfig& cfg);

}  // namespace xfbci
