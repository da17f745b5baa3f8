/* xfbci: federated Bayesian causal inference engine, C interface.
 *
 * The library is driven entirely through flat key=value settings, the same
 * vocabulary the config file and the command line use. A run is created from
 * an ordered list of pairs, executed once, and then queried for its summary,
 * output path and numeric results.
 *
 * All functions returning int use the process exit-code convention:
 *   0  success
 *   1  runtime failure (I/O, numerics, bad data)
 *   2  invalid configuration or usage
 */
#ifndef XFBCI_H
#define XFBCI_H

#ifdef __cplusplus
extern "C" {
#endif

#define XFBCI_OK 0
#define XFBCI_ERR_RUNTIME 1
#define XFBCI_ERR_CONFIG 2

typedef struct xfbci_run xfbci_run;

const char* xfbci_version(void);

/* Creates a run from ordered key=value settings ("command=simulate",
 * "case=c3", "method=xfbci", ...). Earlier pairs are overridden by later
 * ones. The special pair "config=PATH" splices in the assignments from a
 * flat key=value file at that position. On success writes the new handle to
 * *out and returns XFBCI_OK; on failure *out is NULL and xfbci_last_error()
 * describes the problem. */
int xfbci_run_create(const char* const* pairs, int n_pairs, xfbci_run** out);

/* Runs the configured command and writes its CSV outputs. A handle can be
 * executed once; re-execution is a usage error. */
int xfbci_run_execute(xfbci_run* run);

/* Message from the most recent failing xfbci_* call on this thread. Never
 * NULL; empty string when nothing has failed. */
const char* xfbci_last_error(void);

/* Human-readable summary of an executed run (the text the CLI prints).
 * Owned by the handle; NULL before execution. */
const char* xfbci_run_summary(const xfbci_run* run);

/* Path of the primary CSV written by an executed run, or "" for commands
 * that write several files (dump reports its directory instead). */
const char* xfbci_run_output_path(const xfbci_run* run);

/* Numeric result of an executed simulate run. Known names:
 *   a_rmse_theta_mean, a_rmse_theta_stderr,
 *   a_ate_mean, a_ate_stderr,
 *   a_rmse_ate_mean, a_rmse_ate_stderr,
 *   ate_error, replications, clients_skipped, runtime_seconds
 * Returns XFBCI_OK and writes *value, or XFBCI_ERR_CONFIG for an unknown
 * name, a non-simulate command, or a handle that has not executed. */
int xfbci_run_metric(const xfbci_run* run, const char* name, double* value);

void xfbci_run_destroy(xfbci_run* run);

#ifdef __cplusplus
}
#endif

#endif /* XFBCI_H */
