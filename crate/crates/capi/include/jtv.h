#ifndef JTV_H
#define JTV_H

#include <stdarg.h>
#include <stdbool.h>
#include <stddef.h>
#include <stdint.h>
#include <stdlib.h>

/**
 * Status code returned by every fallible entry point.
 */
typedef enum JtvStatus {
  JtvStatus_Ok = 0,
  JtvStatus_NullPointer = 1,
  JtvStatus_InvalidArgument = 2,
  JtvStatus_ParseError = 3,
  JtvStatus_NumericalError = 4,
  JtvStatus_Panic = 5,
} JtvStatus;

/**
 * Opaque bivariate polynomial filter handle.
 */
typedef struct JtvFilter JtvFilter;

/**
 * Opaque weighted graph handle.
 */
typedef struct JtvGraph JtvGraph;

/**
 * Opaque N x T temporal signal handle (complex-valued internally).
 */
typedef struct JtvSignal JtvSignal;

#ifdef __cplusplus
extern "C" {
#endif // __cplusplus

/**
 * Message describing the most recent failure on this thread. The pointer
 * stays valid until the next failing call on the same thread.
 */
const char *jtv_last_error(void);

/**
 * Format-version marker, currently "v1".
 */
const char *jtv_version(void);

/**
 * Build a graph from parallel edge arrays of 0-based endpoints.
 * `weights` may be null, in which case every edge has weight 1.
 */
enum JtvStatus jtv_graph_create(size_t n_nodes,
                                const size_t *edges_from,
                                const size_t *edges_to,
                                const double *weights,
                                size_t n_edges,
                                int32_t directed,
                                struct JtvGraph **out);

/**
 * Parse the 1-based `i j [w]` edge-list format.
 */
enum JtvStatus jtv_graph_parse(const char *text, struct JtvGraph **out);

size_t jtv_graph_node_count(const struct JtvGraph *graph);

size_t jtv_graph_edge_count(const struct JtvGraph *graph);

void jtv_graph_destroy(struct JtvGraph *graph);

/**
 * Build a real signal from a row-major `n_nodes x period` buffer.
 */
enum JtvStatus jtv_signal_create_real(const double *values,
                                      size_t n_nodes,
                                      size_t period,
                                      struct JtvSignal **out);

size_t jtv_signal_node_count(const struct JtvSignal *signal);

size_t jtv_signal_period(const struct JtvSignal *signal);

/**
 * Read one complex entry.
 */
enum JtvStatus jtv_signal_get(const struct JtvSignal *signal,
                              size_t node,
                              size_t instant,
                              double *re,
                              double *im);

void jtv_signal_destroy(struct JtvSignal *signal);

/**
 * Joint Fourier transform; `representation` selects the graph matrix
 * (0 Laplacian, 1 normalized, 2 adjacency).
 */
enum JtvStatus jtv_jft(const struct JtvGraph *graph,
                       int32_t representation,
                       const struct JtvSignal *signal,
                       struct JtvSignal **out);

/**
 * Inverse joint Fourier transform.
 */
enum JtvStatus jtv_ijft(const struct JtvGraph *graph,
                        int32_t representation,
                        const struct JtvSignal *signal,
                        struct JtvSignal **out);

/**
 * Global smoothness S_p of a real signal.
 */
enum JtvStatus jtv_dirichlet_form(const struct JtvGraph *graph,
                                  const struct JtvSignal *signal,
                                  double p,
                                  double *out);

/**
 * Build a polynomial filter from a row-major `(K+1) x (L+1)` coefficient
 * buffer.
 */
enum JtvStatus jtv_filter_create(const double *coeffs,
                                 size_t k_order,
                                 size_t l_order,
                                 int32_t representation,
                                 struct JtvFilter **out);

void jtv_filter_destroy(struct JtvFilter *filter);

/**
 * Matrix-free application of a polynomial filter.
 */
enum JtvStatus jtv_filter_apply(const struct JtvFilter *filter,
                                const struct JtvGraph *graph,
                                const struct JtvSignal *signal,
                                struct JtvSignal **out);

/**
 * Run the distributed message-passing simulation of a polynomial filter;
 * `out_total` receives the charged communication total (nullable).
 */
enum JtvStatus jtv_filter_simulate(const struct JtvFilter *filter,
                                   const struct JtvGraph *graph,
                                   const struct JtvSignal *signal,
                                   struct JtvSignal **out,
                                   uint64_t *out_total);

/**
 * Closed-form communication cost `2MTK + (K+1)NTL`.
 */
uint64_t jtv_comm_cost(uint64_t n, uint64_t m, uint64_t t, uint64_t k, uint64_t l);

#ifdef __cplusplus
}  // extern "C"
#endif  // __cplusplus

#endif  /* JTV_H */
