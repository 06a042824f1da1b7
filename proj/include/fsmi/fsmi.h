/* C interface to the fsmi library. All objects are opaque handles owned by
 * the caller and released with the matching _destroy function. Functions
 * return FSMI_OK or an error code; fsmi_last_error() describes the most
 * recent failure on the calling thread. */
#ifndef FSMI_FSMI_H
#define FSMI_FSMI_H

#include <stddef.h>
#include <stdint.h>

#if defined(FSMI_BUILDING_LIBRARY)
#define FSMI_API __attribute__((visibility("default")))
#else
#define FSMI_API
#endif

#ifdef __cplusplus
extern "C" {
#endif

typedef enum fsmi_status {
  FSMI_OK = 0,
  FSMI_ERR_INVALID_ARGUMENT = 1,
  FSMI_ERR_OUT_OF_RANGE = 2,
  FSMI_ERR_NUMERICAL_RANGE = 3,
  FSMI_ERR_IO = 4,
  FSMI_ERR_PARSE = 5,
  FSMI_ERR_NO_CANDIDATES = 6,
  FSMI_ERR_INTERNAL = 7
} fsmi_status;

typedef enum fsmi_algorithm {
  FSMI_ALGO_SMI_REFERENCE = 0,
  FSMI_ALGO_FSMI = 1,
  FSMI_ALGO_APPROX_FSMI = 2,
  FSMI_ALGO_UNIFORM_FSMI = 3,
  FSMI_ALGO_CSQMI_EXACT = 4,
  FSMI_ALGO_CSQMI_APPROX = 5
} fsmi_algorithm;

typedef enum fsmi_rle_algorithm {
  FSMI_RLE_EXACT = 0,
  FSMI_RLE_APPROX = 1,
  FSMI_RLE_UNIFORM = 2
} fsmi_rle_algorithm;

typedef enum fsmi_planner { FSMI_PLANNER_FRONTIER = 0, FSMI_PLANNER_INFORMATION = 1 } fsmi_planner;

typedef struct fsmi_context fsmi_context;
typedef struct fsmi_beam fsmi_beam;
typedef struct fsmi_rle fsmi_rle;
typedef struct fsmi_rle_tables fsmi_rle_tables;
typedef struct fsmi_grid fsmi_grid;
typedef struct fsmi_world fsmi_world;
typedef struct fsmi_exploration fsmi_exploration;

typedef struct fsmi_sensor_params {
  double sigma;      /* meters */
  double delta_occ;  /* delta_emp = 1 / delta_occ */
  double max_range;  /* meters */
  double clamp_eps;
} fsmi_sensor_params;

typedef struct fsmi_eval_options {
  int delta;            /* truncation for the approximate variants */
  int uniform_h;        /* half-width in cells for the uniform variants */
  double step;          /* integration step for the SMI reference, meters */
  int smi_shared_prior; /* 0: per-cell evaluation, 1: shared prior */
  int pdf_kernel;       /* fsmi / approx_fsmi with the density kernel */
  int count;            /* fill fsmi_result.multiplications */
  int timed;            /* fill fsmi_result.elapsed_ns */
} fsmi_eval_options;

typedef struct fsmi_result {
  double mi; /* nats */
  uint64_t multiplications;
  uint64_t elapsed_ns;
} fsmi_result;

typedef struct fsmi_world_params {
  uint64_t seed;
  double size; /* meters */
  double resolution;
  double obstacle_density;
  int room_count;
} fsmi_world_params;

typedef struct fsmi_explore_params {
  fsmi_sensor_params sensor;
  int scan_beams;
  fsmi_planner planner;
  fsmi_algorithm algorithm; /* FSMI, APPROX_FSMI, UNIFORM_FSMI or CSQMI_APPROX */
  int delta;
  double entropy_threshold; /* nats per step */
  int max_steps;
  uint64_t noise_seed;
  int planning_beams;
  int max_candidates;
  double path_interval;
  double traversable;
  double unknown_band;
  int min_cluster;
  const char* snapshot_dir; /* NULL: no per-step PGM snapshots */
} fsmi_explore_params;

typedef struct fsmi_step_record {
  int step;
  double x, y, goal_x, goal_y;
  double path_len;
  double entropy;
} fsmi_step_record;

FSMI_API const char* fsmi_last_error(void);
FSMI_API const char* fsmi_build_id(void);
FSMI_API const char* fsmi_status_name(fsmi_status s);

FSMI_API void fsmi_sensor_defaults(fsmi_sensor_params* out);
FSMI_API void fsmi_eval_defaults(fsmi_eval_options* out);
FSMI_API void fsmi_world_defaults(fsmi_world_params* out);
FSMI_API void fsmi_explore_defaults(fsmi_explore_params* out);

/* Sensor model plus the CDF and f lookup tables. */
FSMI_API fsmi_status fsmi_context_create(const fsmi_sensor_params* params, fsmi_context** out);
FSMI_API void fsmi_context_destroy(fsmi_context* ctx);

/* boundaries holds n + 1 increasing distances starting at 0. */
FSMI_API fsmi_status fsmi_beam_create(const double* occupancies, const double* boundaries, size_t n,
                                      double clamp_eps, fsmi_beam** out);
FSMI_API fsmi_status fsmi_beam_create_uniform(const double* occupancies, size_t n, double width,
                                              double clamp_eps, fsmi_beam** out);
FSMI_API void fsmi_beam_destroy(fsmi_beam* beam);
FSMI_API size_t fsmi_beam_size(const fsmi_beam* beam);

FSMI_API fsmi_status fsmi_beam_mi(const fsmi_context* ctx, const fsmi_beam* beam, fsmi_algorithm algorithm,
                                  const fsmi_eval_options* options, fsmi_result* out);
/* algorithm: APPROX_FSMI or CSQMI_APPROX. */
FSMI_API fsmi_status fsmi_count_multiplications(const fsmi_context* ctx, const fsmi_beam* beam,
                                                fsmi_algorithm algorithm, int delta, uint64_t* out);

FSMI_API fsmi_status fsmi_rle_compress(const double* occupancies, size_t n, double w0, int levels,
                                       fsmi_rle** out);
FSMI_API fsmi_status fsmi_rle_read(const char* path, fsmi_rle** out);
FSMI_API fsmi_status fsmi_rle_write(const fsmi_rle* rle, const char* path);
FSMI_API void fsmi_rle_destroy(fsmi_rle* rle);
FSMI_API size_t fsmi_rle_groups(const fsmi_rle* rle);
FSMI_API size_t fsmi_rle_cells(const fsmi_rle* rle);
FSMI_API double fsmi_rle_w0(const fsmi_rle* rle);
/* Writes min(capacity, cells) occupancies. */
FSMI_API fsmi_status fsmi_rle_decompress(const fsmi_rle* rle, double* out, size_t capacity);

/* l_bound: side of the alpha/beta tables; l_max: theta/gamma length. */
FSMI_API fsmi_status fsmi_rle_tables_create(double sigma_prime, int levels, int l_bound, int l_max,
                                            int uniform, fsmi_rle_tables** out);
FSMI_API void fsmi_rle_tables_destroy(fsmi_rle_tables* tables);
FSMI_API fsmi_status fsmi_rle_mi(const fsmi_context* ctx, const fsmi_rle_tables* tables, const fsmi_rle* rle,
                                 fsmi_rle_algorithm algorithm, const fsmi_eval_options* options,
                                 fsmi_result* out);

FSMI_API fsmi_status fsmi_grid_create(int width, int height, double resolution, double prior, double clamp_eps,
                                      fsmi_grid** out);
FSMI_API fsmi_status fsmi_grid_read_pgm(const char* path, double resolution, double clamp_eps, fsmi_grid** out);
FSMI_API fsmi_status fsmi_grid_write_pgm(const fsmi_grid* grid, const char* path);
FSMI_API void fsmi_grid_destroy(fsmi_grid* grid);
FSMI_API int fsmi_grid_width(const fsmi_grid* grid);
FSMI_API int fsmi_grid_height(const fsmi_grid* grid);
FSMI_API double fsmi_grid_resolution(const fsmi_grid* grid);
FSMI_API double fsmi_grid_get(const fsmi_grid* grid, int cx, int cy);
FSMI_API fsmi_status fsmi_grid_set(fsmi_grid* grid, int cx, int cy, double occupancy);
FSMI_API double fsmi_grid_entropy(const fsmi_grid* grid);
/* MI of a full scan taken at every cell centre; out holds width*height values,
 * row-major. */
FSMI_API fsmi_status fsmi_grid_mi_surface(const fsmi_context* ctx, const fsmi_grid* grid, fsmi_algorithm algorithm,
                                          int n_beams, int delta, double* out);

FSMI_API fsmi_status fsmi_world_generate(const fsmi_world_params* params, fsmi_world** out);
FSMI_API void fsmi_world_destroy(fsmi_world* world);
FSMI_API uint64_t fsmi_world_seed(const fsmi_world* world);
/* Ground truth as a grid (occupied cells near 1). */
FSMI_API fsmi_status fsmi_world_truth(const fsmi_world* world, fsmi_grid** out);

FSMI_API fsmi_status fsmi_exploration_run(const fsmi_world* world, const fsmi_explore_params* params,
                                          fsmi_exploration** out);
FSMI_API void fsmi_exploration_destroy(fsmi_exploration* ex);
FSMI_API size_t fsmi_exploration_steps(const fsmi_exploration* ex);
FSMI_API fsmi_status fsmi_exploration_step(const fsmi_exploration* ex, size_t i, fsmi_step_record* out);
FSMI_API const char* fsmi_exploration_stop_reason(const fsmi_exploration* ex);
FSMI_API double fsmi_exploration_path_length(const fsmi_exploration* ex);
FSMI_API double fsmi_exploration_final_entropy(const fsmi_exploration* ex);
/* Mean MI evaluation time per planning beam; 0 for the frontier planner. */
FSMI_API double fsmi_exploration_us_per_beam(const fsmi_exploration* ex);
FSMI_API fsmi_status fsmi_exploration_write_csv(const fsmi_exploration* ex, const char* path);
FSMI_API fsmi_status fsmi_exploration_map(const fsmi_exploration* ex, fsmi_grid** out);

#ifdef __cplusplus
}
#endif

#endif
