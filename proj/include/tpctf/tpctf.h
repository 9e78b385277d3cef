#ifndef TPCTF_TPCTF_H
#define TPCTF_TPCTF_H

/* C interface of the tpctf inpainting library. Every function returns a
 * status code; on failure tpctf_last_error() describes the problem for the
 * calling thread. Handles and strings created by the library are released
 * with the matching *_free function. */

#include <stdint.h>

#if defined(_WIN32)
#  if defined(TPCTF_BUILDING_LIBRARY)
#    define TPCTF_API __declspec(dllexport)
#  else
#    define TPCTF_API __declspec(dllimport)
#  endif
#else
#  define TPCTF_API __attribute__((visibility("default")))
#endif

#ifdef __cplusplus
extern "C" {
#endif

typedef enum tpctf_status {
  TPCTF_OK = 0,
  TPCTF_ERR_ARGUMENT = 1,  /* null pointer or out-of-range argument */
  TPCTF_ERR_CONFIG = 2,    /* invalid parameters */
  TPCTF_ERR_STRUCTURE = 3, /* shape mismatch */
  TPCTF_ERR_DATA = 4,      /* degenerate data, e.g. nothing observed */
  TPCTF_ERR_IO = 5,
  TPCTF_ERR_PARSE = 6,
  TPCTF_ERR_INTERNAL = 7
} tpctf_status;

typedef struct tpctf_image tpctf_image;
typedef struct tpctf_mask tpctf_mask;

TPCTF_API const char* tpctf_version(void);
TPCTF_API const char* tpctf_status_string(tpctf_status status);
/* Message of the last failed call on this thread; empty if none. */
TPCTF_API const char* tpctf_last_error(void);
TPCTF_API void tpctf_string_free(char* s);

/* Images: row-major doubles in greyscale units. */
TPCTF_API tpctf_status tpctf_image_create(int width, int height, const double* pixels, tpctf_image** out);
TPCTF_API tpctf_status tpctf_image_load(const char* path, tpctf_image** out);
TPCTF_API tpctf_status tpctf_image_save(const tpctf_image* image, const char* path);
TPCTF_API tpctf_status tpctf_fixture(const char* name, int width, int height, tpctf_image** out);
TPCTF_API void tpctf_image_free(tpctf_image* image);
TPCTF_API int tpctf_image_width(const tpctf_image* image);
TPCTF_API int tpctf_image_height(const tpctf_image* image);
TPCTF_API const double* tpctf_image_data(const tpctf_image* image);

/* Masks: nonzero = observed. PGM masks treat values >= 128 as observed. */
TPCTF_API tpctf_status tpctf_mask_load(const char* path, tpctf_mask** out);
TPCTF_API tpctf_status tpctf_mask_save(const tpctf_mask* mask, const char* path);
TPCTF_API tpctf_status tpctf_mask_random(int width, int height, double rate, uint64_t seed, tpctf_mask** out);
TPCTF_API void tpctf_mask_free(tpctf_mask* mask);
TPCTF_API double tpctf_mask_missing_ratio(const tpctf_mask* mask);

TPCTF_API tpctf_status tpctf_add_noise(const tpctf_image* image, double sigma, uint64_t seed, tpctf_image** out);
/* Writes +infinity for identical images. */
TPCTF_API tpctf_status tpctf_psnr(const tpctf_image* reference, const tpctf_image* test, double* out);

typedef struct tpctf_inpaint_options {
  double sigma;
  int levels;          /* 0: chosen from the image size */
  int max_iterations;
  int paste_observed;
} tpctf_inpaint_options;

typedef struct tpctf_inpaint_info {
  int iterations;
  int thresholds_completed;
  int hit_iteration_cap;
  int levels;
  double final_error;
  double missing_ratio;
} tpctf_inpaint_info;

TPCTF_API void tpctf_inpaint_options_init(tpctf_inpaint_options* options);
/* info may be null. */
TPCTF_API tpctf_status tpctf_inpaint(const tpctf_image* observed, const tpctf_mask* mask,
                                     const tpctf_inpaint_options* options, tpctf_image** out,
                                     tpctf_inpaint_info* info);

typedef struct tpctf_experiment_spec {
  const char* image_path;      /* ignored when image is set */
  const tpctf_image* image;
  const char* image_name;      /* report label, may be null */
  const char* mask_path;       /* null: random mask */
  double mask_rate;
  uint64_t mask_seed;
  double sigma;
  uint64_t seed;
  const char* algorithm;       /* "tpctf6", "spline" or "dct" */
  int levels;
  int paste_observed;
  int max_iterations;
  const char* output_path;     /* optional */
  const char* observed_path;   /* optional */
} tpctf_experiment_spec;

typedef struct tpctf_experiment_result {
  double psnr;
  int iterations;
  int hit_iteration_cap;
  double seconds;
} tpctf_experiment_result;

TPCTF_API void tpctf_experiment_spec_init(tpctf_experiment_spec* spec);
/* report_line receives the tab-separated report; may be null. */
TPCTF_API tpctf_status tpctf_run_experiment(const tpctf_experiment_spec* spec, tpctf_experiment_result* result,
                                            char** report_line);

/* what: "bank", "transform" or "grouping". passed receives 1 or 0. */
TPCTF_API tpctf_status tpctf_verify(const char* what, uint64_t seed, int count, int* passed, char** report);
/* family: "tpctf6", "spline" or "dct". */
TPCTF_API tpctf_status tpctf_describe_bank(const char* family, char** text);

#ifdef __cplusplus
}
#endif

#endif
