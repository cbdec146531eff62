/* mtlab -- sharp Moser-Trudinger machinery for the Laplacian on the unit
 * ball, C interface.
 *
 * The library evaluates the canonical-solution kernel K(x,z) and its
 * relatives (Newtonian, Dirichlet Green, extended Poisson, harmonic
 * Bergman), applies the canonical Poisson solver T, estimates kernel
 * level-set measures and their sharp asymptotic prefactors, machine-checks
 * the numeric lemmas behind the sharp exponential constant, and runs the
 * extremal-family growth experiment.
 *
 * All entry points are thread-safe.  Rich results are returned as
 * heap-allocated JSON strings owned by the caller (free with
 * mtlab_string_free).  Every Monte Carlo result is reproducible from the
 * (seed, samples) pair stored in the context.
 */
#ifndef MTLAB_H
#define MTLAB_H

#include <stddef.h>
#include <stdint.h>

#if defined(_WIN32)
#define MTLAB_API __declspec(dllexport)
#else
#define MTLAB_API __attribute__((visibility("default")))
#endif

#ifdef __cplusplus
extern "C" {
#endif

typedef enum mtlab_status {
  MTLAB_OK = 0,
  MTLAB_ERR_ARGUMENT = 1,       /* malformed or out-of-range parameter */
  MTLAB_ERR_DIMENSION = 2,      /* unsupported dimension (n < 3 for most ops) */
  MTLAB_ERR_SINGULAR = 3,       /* kernel evaluated at a singular pair */
  MTLAB_ERR_NO_SIGN_CHANGE = 4, /* root bracket does not bracket a sign change */
  MTLAB_ERR_DOMAIN = 5,         /* argument outside a function's domain */
  MTLAB_ERR_CHECK_FAILED = 6,   /* a requested certificate or check failed */
  MTLAB_ERR_INTERNAL = 7
} mtlab_status;

MTLAB_API const char *mtlab_status_message(mtlab_status s);
MTLAB_API const char *mtlab_version(void);

/* Opaque evaluation context: seed, sample budget, worker cap, and the
 * per-dimension empirical kernel-bound cache. */
typedef struct mtlab_ctx mtlab_ctx;

MTLAB_API mtlab_ctx *mtlab_ctx_new(void);
MTLAB_API void mtlab_ctx_free(mtlab_ctx *ctx);
MTLAB_API mtlab_status mtlab_ctx_set_seed(mtlab_ctx *ctx, uint64_t seed);
MTLAB_API mtlab_status mtlab_ctx_set_samples(mtlab_ctx *ctx, uint64_t samples);
MTLAB_API mtlab_status mtlab_ctx_set_threads(mtlab_ctx *ctx, int threads);
/* Human-readable detail for the last failing call on this context. */
MTLAB_API const char *mtlab_ctx_last_error(const mtlab_ctx *ctx);

/* Dimension-indexed constants bundle. */
typedef struct mtlab_constants {
  int n;
  double omega;   /* surface measure of S^{n-1} */
  double c_n;     /* Newtonian kernel constant 1/((n-2) omega) */
  double vol_ball;
  double vol_g;   /* volume of the convex region G_n */
  double alpha;   /* sharp exponential constant alpha_n */
  double theta0;
  double theta1;
  double theta00;
} mtlab_constants;

MTLAB_API mtlab_status mtlab_get_constants(int n, mtlab_constants *out);

typedef enum mtlab_kernel {
  MTLAB_KERNEL_NEWTON = 0,  /* N(x); z ignored */
  MTLAB_KERNEL_GREEN = 1,   /* Dirichlet Green function G(x,z) */
  MTLAB_KERNEL_POISSON = 2, /* extended Poisson kernel P(x,z) */
  MTLAB_KERNEL_BERGMAN = 3, /* harmonic Bergman kernel R(x,z) */
  MTLAB_KERNEL_K = 4,       /* canonical-solution kernel K(x,z) */
  MTLAB_KERNEL_K0 = 5,      /* normalized kernel K0 = -K/c_n */
  MTLAB_KERNEL_GPROFILE = 6 /* boundary asymptotic profile g(x,z) */
} mtlab_kernel;

/* x and z are length-n coordinate arrays. */
MTLAB_API mtlab_status mtlab_kernel_eval(int n, mtlab_kernel kind,
                                         const double *x, const double *z,
                                         double *out);

/* Region membership.  tag is one of
 *   "Gn" | "B" | "G" | "D" | "D0" | "E" | "Et" | "Bstar";
 * theta applies to every tag but "Gn"; t applies only to "Et". */
MTLAB_API mtlab_status mtlab_region_contains(int n, const char *tag,
                                             double theta, double t,
                                             const double *y, int *out);

/* Canonical-solver verification for a named test field
 * ("zero" | "one" | "z1" | "z1sq" | "normsq").  JSON report with the
 * max Poisson residual and max orthogonality defect. */
MTLAB_API mtlab_status mtlab_solve_verify(mtlab_ctx *ctx, int n,
                                          const char *field, char **json);

/* Level-set estimate lambda_1(s, x) plus the scaled prefactor.  x is a
 * length-n point in the closed ball. */
MTLAB_API mtlab_status mtlab_levelset_lambda1(mtlab_ctx *ctx, int n, double s,
                                              const double *x, char **json);

/* Monte Carlo volumes of E(theta), D(theta), and their union, with the
 * dimensional bound they are certified against. */
MTLAB_API mtlab_status mtlab_region_volumes(mtlab_ctx *ctx, int n,
                                            double theta, char **json);

/* Run certificates.  claims is "all" or a comma-separated subset of
 *   Prop10,Kershaw,Psi,Lemma17,Inclusions,Lemma20,Claim,Hormander.
 * Emits a JSON array sorted by (claim_id, n); *all_pass reports whether
 * every emitted certificate passed. */
MTLAB_API mtlab_status mtlab_certify(mtlab_ctx *ctx, const char *claims,
                                     int n_max, char **json, int *all_pass);

/* Extremal-family growth table.  x0_mode is "center" or "boundary". */
MTLAB_API mtlab_status mtlab_sharpness(mtlab_ctx *ctx, int n,
                                       const char *x0_mode,
                                       const double *factors, size_t nfactors,
                                       const double *m_grid, size_t nm,
                                       char **json);

/* Full acceptance run: one record per criterion; *all_pass as above. */
MTLAB_API mtlab_status mtlab_report_all(mtlab_ctx *ctx, char **json,
                                        int *all_pass);

MTLAB_API void mtlab_string_free(char *s);

#ifdef __cplusplus
}
#endif

#endif /* MTLAB_H */
