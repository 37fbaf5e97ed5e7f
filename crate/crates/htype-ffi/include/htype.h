/* C interface to the H-type group Schrödinger laboratory.
 *
 * Conventions:
 *   - Constructors write an opaque handle through an out-pointer and return
 *     a status code; every handle type has a matching _free function.
 *   - Status codes: 0 success, 1 null pointer, 2 analysis/validation
 *     failure, 3 invalid configuration, 4 I/O failure.
 *   - On failure, ht_last_error copies a thread-local message.
 */

#ifndef HTYPE_H
#define HTYPE_H

#include <stddef.h>
#include <stdint.h>

#ifdef __cplusplus
extern "C" {
#endif

#define HT_OK 0
#define HT_NULL 1
#define HT_FAIL 2
#define HT_CONFIG 3
#define HT_IO 4

typedef struct HtGroup HtGroup;
typedef struct HtGrid HtGrid;
typedef struct HtSpectrum HtSpectrum;

/* Copy the last error message (NUL-terminated, truncated to len bytes).
 * Returns the number of bytes written excluding the terminator. */
size_t ht_last_error(char *buf, size_t len);

/* H-type group on R^{2d} x R^p. */
int ht_group_new(size_t d, size_t p, HtGroup **out);
void ht_group_free(HtGroup *g);
/* Homogeneous dimension N = 2d + 2p (0 on null input). */
size_t ht_group_hom_dim(const HtGroup *g);

/* Discretization: Laguerre cutoff m_max, periodic box side box_len,
 * n_s samples per center axis (even). */
int ht_grid_new(const HtGroup *g, size_t m_max, double box_len, size_t n_s,
                HtGrid **out);
void ht_grid_free(HtGrid *g);

/* Seeded band-limited random spectrum (reproducible). */
int ht_spectrum_random(const HtGrid *grid, size_t m_band, uint32_t k_band,
                       uint64_t seed, HtSpectrum **out);
void ht_spectrum_free(HtSpectrum *s);

/* L2 (Plancherel) norm. */
int ht_spectrum_l2(const HtSpectrum *s, double *out);

/* Free Schrödinger evolution: new handle for e^{itL} u. */
int ht_spectrum_propagate(const HtSpectrum *s, double t, HtSpectrum **out);

/* Exact dyadic relabeling u -> u(delta_{2^j} .). */
int ht_spectrum_rescale(const HtSpectrum *s, int j, HtSpectrum **out);

/* Relative L2 distance |a - b| / |b|. */
int ht_spectrum_rel_distance(const HtSpectrum *a, const HtSpectrum *b,
                             double *out);

/* Relative error of the synthesis -> analysis round trip. */
int ht_spectrum_roundtrip_error(const HtSpectrum *s, double *out);

/* Relative sup residual of the propagator's dyadic scaling identity on the
 * widened band-j kernel. */
int ht_kernel_scaling_residual(const HtGrid *grid, int j, double t,
                               double *out);

/* Exponent-pair classification; q and r are rationals like "4", "8/3",
 * or "inf". Writes 1/0 flags. */
int ht_classify_pair(const char *q, const char *r, size_t p, int *admissible,
                     int *endpoint);

/* Minimal contraction regularity s_* for (d, p, alpha); alpha is a rational
 * string. */
int ht_s_star(size_t d, size_t p, const char *alpha, double *out);

#ifdef __cplusplus
}
#endif

#endif /* HTYPE_H */
