/* schoolchoice — C API for the school-choice mechanism engine.
 *
 * All functions return an int status code (sc_status) unless noted.
 * Output strings are heap-allocated and owned by the caller; release
 * them with sc_string_free.  Handles are opaque; release with the
 * matching *_free function.  On failure, sc_last_error returns a
 * thread-local message describing the most recent error.
 */
#ifndef SCHOOLCHOICE_H
#define SCHOOLCHOICE_H

#include <stddef.h>
#include <stdint.h>

#if defined(_WIN32)
#define SC_API __declspec(dllexport)
#else
#define SC_API __attribute__((visibility("default")))
#endif

#ifdef __cplusplus
extern "C" {
#endif

typedef enum sc_status {
  SC_OK = 0,
  SC_ERROR_VALIDATION = 2,
  SC_ERROR_INFEASIBLE = 3,
  SC_ERROR_BUDGET = 4,
  SC_ERROR_INTERNAL = 5
} sc_status;

typedef struct sc_market sc_market;
typedef struct sc_sessions sc_sessions;

/* Version string, e.g. "1.0.0".  Static storage; do not free. */
SC_API const char* sc_version(void);

/* Thread-local message for the most recent failure in this thread.
 * Static storage; do not free.  Empty string if no error recorded. */
SC_API const char* sc_last_error(void);

/* Release a string returned through an out-parameter. */
SC_API void sc_string_free(char* s);

/* ---- markets ---- */

/* Parse a market description (schools, capacities, priorities, and
 * optionally the students' true preference lists) from JSON text. */
SC_API sc_status sc_market_from_json(const char* json_text, sc_market** out);

SC_API sc_status sc_market_to_json(const sc_market* m, char** out_json);

SC_API void sc_market_free(sc_market* m);

SC_API int sc_market_num_students(const sc_market* m);
SC_API int sc_market_num_schools(const sc_market* m);

/* Copy a market, replacing its embedded true preferences with the
 * rankings in a session CSV (one row per student). */
SC_API sc_status sc_market_with_induced(const sc_market* m,
                                        const char* induced_csv,
                                        sc_market** out);

/* Generate the 18-student designed market.  utilities_csv may be NULL
 * if the utility breakdown is not wanted. */
SC_API sc_status sc_market_generate(int num_students, uint64_t seed,
                                    double taste_max, char** out_market_json,
                                    char** out_utilities_csv);

/* ---- sessions (submitted preference profiles) ---- */

/* Parse one session per CSV text.  Each CSV holds one row per seat
 * position: "position,rank1,...,rankM[,extra numeric columns]". */
SC_API sc_status sc_sessions_from_csv(const char* const* csv_texts,
                                      size_t num_sessions, const sc_market* m,
                                      sc_sessions** out);

/* Sessions in which every position reports the market's embedded true
 * preferences (requires the market to carry them). */
SC_API sc_status sc_sessions_truthful(const sc_market* m, size_t num_sessions,
                                      sc_sessions** out);

SC_API void sc_sessions_free(sc_sessions* s);

/* ---- mechanisms ---- */

/* Run one mechanism on one session's reports.
 *   mechanism: "da", "eada", or "rm"
 *   seed/rm_cap: used by "rm" only (rm_cap <= 0 means the default cap)
 *   with_trace: nonzero to include the full round/iteration trace
 * Result JSON carries the matching plus requested trace. */
SC_API sc_status sc_match(const sc_market* m, const sc_sessions* s,
                          size_t session_index, const char* mechanism,
                          uint64_t seed, int rm_cap, int with_trace,
                          char** out_json);

/* Matching quality report (rank profile, envy, efficiency, sorting)
 * for one session under one mechanism. */
SC_API sc_status sc_evaluate(const sc_market* m, const sc_sessions* s,
                             size_t session_index, const char* mechanism,
                             uint64_t seed, int rm_cap, char** out_json);

/* ---- behavioral analysis ---- */

/* Classify every report in every session.  options_json (optional,
 * may be NULL or "{}") keys:
 *   "mechanism": "da" | "eada" | "rm"   (default "da")
 *   "seed": integer                      (rm draws)
 *   "rm_cap": integer
 *   "high_demand": [school, school]      (skip-down detector)
 * Outputs one CSV row per (session, position) and a summary JSON. */
SC_API sc_status sc_analyze(const sc_market* m, const sc_sessions* s,
                            const char* options_json, char** out_records_csv,
                            char** out_summary_json);

/* Exhaustive or sampled search for profitable misreports by one
 * student, holding the rest of the session fixed. */
SC_API sc_status sc_scan(const sc_market* m, const sc_sessions* s,
                         size_t session_index, int student,
                         const char* options_json, char** out_json);

/* ---- recombinant estimation ---- */

/* config_json keys:
 *   "statistic": registry name (required)
 *   "mechanism": "da" | "eada" | "rm"   (default "da")
 *   "draws_per_block" (R, required), "seed", "rm_cap", "workers",
 *   "tau": target truth rate (optional; enables calibrated draws)
 *   "attribute": session attribute name (donor-score statistics)
 *   "keep_draws": bool — include per-draw values in the report
 * Returns the estimate report as JSON. */
SC_API sc_status sc_recombine(const sc_market* m, const sc_sessions* s,
                              const char* config_json, char** out_json);

/* Mixing weight for the calibrated-draw scheme.  Writes the weight to
 * *out_x; fails with SC_ERROR_INFEASIBLE when tau is out of range. */
SC_API sc_status sc_calibrate(double donor_truth_rate, int num_students,
                              double tau, double* out_x);

/* ---- exact tests ---- */

SC_API sc_status sc_fisher_exact(int64_t a, int64_t b, int64_t c, int64_t d,
                                 double* out_p);

SC_API sc_status sc_binomial_test(int64_t successes, int64_t trials, double p0,
                                  double* out_p);

#ifdef __cplusplus
} /* extern "C" */
#endif

#endif /* SCHOOLCHOICE_H */
