#ifndef REALBLOCH_H
#define REALBLOCH_H

/* C interface to the realbloch library. Every function returns an rb_status;
   on failure rb_last_error() describes the problem (per thread). Objects are
   opaque and released with the matching _destroy function. */

#ifdef __cplusplus
extern "C" {
#endif

#if defined(_WIN32)
#define RB_API __declspec(dllexport)
#else
#define RB_API __attribute__((visibility("default")))
#endif

typedef enum {
  RB_OK = 0,
  RB_ERR_INTERNAL = 1,
  RB_ERR_CONFIG = 2,
  RB_ERR_GAP_CLOSURE = 3,
  RB_ERR_SYMMETRY = 4,
  RB_ERR_REFINEMENT = 5,
  RB_ERR_UNSUPPORTED = 6,
  RB_ERR_STRICT_WARNING = 7
} rb_status;

typedef struct rb_lattice rb_lattice;
typedef struct rb_model rb_model;
typedef struct rb_result rb_result;

RB_API const char* rb_version(void);
RB_API const char* rb_last_error(void);

/* topology: "circle", "torus2", "sphere2"; involution: "trivial",
   "reflection", "antipodal", "eta", "eta1", "xi", "kappa". */
RB_API int rb_lattice_create(const char* topology, const int* sizes, int n_sizes,
                             const char* involution, rb_lattice** out);
RB_API int rb_lattice_counts(const rb_lattice* lat, int* sites, int* links, int* plaquettes);
RB_API void rb_lattice_destroy(rb_lattice* lat);

/* params_json may be NULL for defaults. */
RB_API int rb_model_create(const char* name, const char* params_json, const rb_lattice* lat,
                           rb_model** out);
RB_API void rb_model_destroy(rb_model* model);

/* bands may be NULL (model default). */
RB_API int rb_classify(const rb_model* model, const rb_lattice* lat, const int* bands, int n_bands,
                       rb_result** out);
/* Chern number fields; RB_ERR_UNSUPPORTED if the base has no free part. */
RB_API int rb_result_chern(const rb_result* r, long* integer, double* value);
/* Writes up to capacity signs and the total count. */
RB_API int rb_result_torsion(const rb_result* r, int* signs, int capacity, int* count);
/* JSON text owned by the result. */
RB_API int rb_result_json(const rb_result* r, const char** json);
RB_API void rb_result_destroy(rb_result* r);

/* Full pipeline: parses the config, runs its tasks and writes report.json.
   out_dir may be NULL (config value). Returns the run's exit status; *out
   (optional) receives the report. */
RB_API int rb_run(const char* config_json, const char* out_dir, int threads, int strict,
                  double resolution_scale, rb_result** out);

#ifdef __cplusplus
}
#endif

#endif
