#ifndef COPSURV_COPSURV_H
#define COPSURV_COPSURV_H

#include <stddef.h>
#include <stdint.h>

#if defined(_WIN32)
#define COPSURV_API __declspec(dllexport)
#else
#define COPSURV_API __attribute__((visibility("default")))
#endif

#ifdef __cplusplus
extern "C" {
#endif

typedef enum copsurv_status {
  COPSURV_OK = 0,
  COPSURV_ERR_INVALID_ARGUMENT = 1,
  COPSURV_ERR_IO = 2,
  COPSURV_ERR_DOMAIN = 3,
  COPSURV_ERR_NUMERIC = 4,
  COPSURV_ERR_INTERNAL = 5
} copsurv_status;

/* Message for the most recent failure on the calling thread ("" if none). */
COPSURV_API const char* copsurv_last_error(void);
COPSURV_API const char* copsurv_status_name(copsurv_status status);
COPSURV_API const char* copsurv_version(void);

typedef struct copsurv_dataset copsurv_dataset;
typedef struct copsurv_model copsurv_model;

/* ---- simulation ---- */

typedef struct copsurv_sim_config {
  size_t n;
  double shape;
  double scale;
  double rho;
  double noise_sd;
  double censor_rate;
  double binary_threshold;
  double cut_low;
  double cut_high;
  uint64_t seed;
} copsurv_sim_config;

typedef struct copsurv_sim_summary {
  size_t n;
  double censored_fraction[3];
  double y2_rate;
  double y3_freq[3];
  double corr_t1_t2;
} copsurv_sim_summary;

COPSURV_API void copsurv_sim_config_default(copsurv_sim_config* cfg);
COPSURV_API copsurv_status copsurv_simulate(const copsurv_sim_config* cfg, copsurv_dataset** out);
COPSURV_API copsurv_status copsurv_dataset_read_csv(const char* path, copsurv_dataset** out);
COPSURV_API copsurv_status copsurv_dataset_write_csv(const copsurv_dataset* data, const char* path);
COPSURV_API copsurv_status copsurv_dataset_summary(const copsurv_dataset* data,
                                                   copsurv_sim_summary* out);
COPSURV_API size_t copsurv_dataset_size(const copsurv_dataset* data);
COPSURV_API void copsurv_dataset_free(copsurv_dataset* data);

/* ---- training ---- */

typedef struct copsurv_train_config {
  const char* architecture; /* "lstm" | "cnn-lstm" */
  const char* activation;   /* clayton | gumbel | clayton-gumbel | relu | clayton-relu | sigmoid */
  size_t timesteps;
  size_t epochs;
  size_t batch_size;
  double learning_rate;
  const char* optimizer; /* "adam" | "sgd" */
  const char* loss_mode; /* "plain-mse" | "censor-hinge" */
  double clip_norm;      /* 0 disables */
  int scale_continuous;
  double split;
  uint64_t seed;
} copsurv_train_config;

typedef void (*copsurv_epoch_callback)(size_t epoch, double loss, void* user);

COPSURV_API void copsurv_train_config_default(copsurv_train_config* cfg);

/* Trains on the first `split` fraction of windows and predicts the rest. */
COPSURV_API copsurv_status copsurv_train(const copsurv_dataset* data,
                                         const copsurv_train_config* cfg,
                                         copsurv_epoch_callback on_epoch, void* user,
                                         copsurv_model** out);
COPSURV_API copsurv_status copsurv_model_save(const copsurv_model* model, const char* path);
COPSURV_API copsurv_status copsurv_model_load(const char* path, copsurv_model** out);
COPSURV_API void copsurv_model_free(copsurv_model* model);

COPSURV_API size_t copsurv_model_parameter_count(const copsurv_model* model);
/* Number of recorded epochs; losses copied up to `cap` entries. */
COPSURV_API size_t copsurv_model_epoch_losses(const copsurv_model* model, double* losses,
                                              size_t cap);
/* Writes `index,response,actual,predicted,delta` for the held-out windows.
   Only available on models produced by copsurv_train. */
COPSURV_API copsurv_status copsurv_model_write_predictions(const copsurv_model* model,
                                                           const char* path);
/* Per-head theta values; count receives the number of heads carrying one. */
COPSURV_API copsurv_status copsurv_model_theta(const copsurv_model* model, int gumbel,
                                               double* theta, size_t cap, size_t* count);

/* ---- comparison ---- */

typedef struct copsurv_compare_config {
  copsurv_sim_config sim;
  copsurv_train_config train; /* architecture/activation ignored */
  size_t replicates;
  const char* variants; /* "arch:activation,..." or NULL / "all" */
  double sigma;
  size_t threads;
} copsurv_compare_config;

typedef void (*copsurv_progress_callback)(size_t done, size_t total, void* user);

COPSURV_API void copsurv_compare_config_default(copsurv_compare_config* cfg);
/* Writes the comparison CSV; rows receives the number of data rows. */
COPSURV_API copsurv_status copsurv_compare(const copsurv_compare_config* cfg, const char* out_path,
                                           copsurv_progress_callback progress, void* user,
                                           size_t* rows);

/* ---- control charts ---- */

typedef struct copsurv_chart_stats {
  size_t n;
  double center;
  double sigma;
  double lcl;
  double ucl;
  size_t signals;
  int arl_defined;
  double arl;
} copsurv_chart_stats;

COPSURV_API copsurv_status copsurv_chart_residuals(const double* residuals, size_t n, double sigma,
                                                   copsurv_chart_stats* out);
/* One `<out_dir>/<label>_<response>.csv` (and .svg when svg != 0) per
   response in the predictions file. */
COPSURV_API copsurv_status copsurv_chart_predictions(const char* preds_path, double sigma,
                                                     const char* out_dir, const char* label,
                                                     int svg, size_t* charts);

/* ---- clinical ingestion ---- */

typedef struct copsurv_ingest_result {
  size_t rows_read;
  size_t n;
  size_t timesteps;
  size_t features;
} copsurv_ingest_result;

/* Writes processed.csv and summary.txt under out_dir. */
COPSURV_API copsurv_status copsurv_ingest(const char* input_path, size_t timesteps,
                                          const char* out_dir, copsurv_ingest_result* out);

#ifdef __cplusplus
}
#endif

#endif
