#ifndef RESIST_H
#define RESIST_H

#include <stdarg.h>
#include <stdbool.h>
#include <stddef.h>
#include <stdint.h>
#include <stdlib.h>

typedef enum RsStatus {
  RS_STATUS_OK = 0,
  RS_STATUS_NULL_POINTER = 1,
  RS_STATUS_INVALID_UTF8 = 2,
  RS_STATUS_PARSE_ERROR = 3,
  RS_STATUS_INVALID_ARGUMENT = 4,
  RS_STATUS_DISCONNECTED = 5,
  RS_STATUS_TOO_LARGE = 6,
  RS_STATUS_INTERNAL = 7,
} RsStatus;

/*
 Opaque graph handle.
 */
typedef struct RsGraph RsGraph;

#ifdef __cplusplus
extern "C" {
#endif // __cplusplus

/*
 Parses one graph6 string into a new handle stored in `*out`.

 # Safety
 `graph6` must be null or a NUL-terminated string; `out` must be null or
 writable.
 */
enum RsStatus rs_graph_from_graph6(const char *graph6, struct RsGraph **out);

/*
 New handle for `K_{m,n}` stored in `*out`.

 # Safety
 `out` must be null or writable.
 */
enum RsStatus rs_graph_complete_bipartite(size_t m, size_t n, struct RsGraph **out);

/*
 Releases a handle. Null is ignored.

 # Safety
 `g` must be null or a handle from this library not yet freed.
 */
void rs_graph_free(struct RsGraph *g);

/*
 Vertex count, or 0 for a null handle.

 # Safety
 `g` must be null or a live handle.
 */
size_t rs_graph_order(const struct RsGraph *g);

/*
 # Safety
 `g` must be null or a live handle; `out` null or writable.
 */
enum RsStatus rs_graph_to_graph6(const struct RsGraph *g, char **out);

/*
 Effective resistance between `u` and `v` as `"num/den"` (or `"num"`).

 # Safety
 `g` must be null or a live handle; `out` null or writable.
 */
enum RsStatus rs_resistance(const struct RsGraph *g, size_t u, size_t v, char **out);

/*
 Resistance spectrum as `[["num/den", multiplicity], ...]`, ascending.

 # Safety
 `g` must be null or a live handle; `out` null or writable.
 */
enum RsStatus rs_spectrum_json(const struct RsGraph *g, char **out);

/*
 Exhaustive spectrum-determinability verdict as JSON, comparing against
 every connected graph with the same vertex count (at most 9).

 # Safety
 `g` must be null or a live handle; `out` null or writable.
 */
enum RsStatus rs_verify_drs_json(const struct RsGraph *g, char **out);

/*
 Copy of the calling thread's last error message, or null if the last
 call succeeded.
 */
char *rs_last_error_message(void);

/*
 Releases a string returned by this library. Null is ignored.

 # Safety
 `s` must be null or a string from this library not yet freed.
 */
void rs_string_free(char *s);

#ifdef __cplusplus
}  // extern "C"
#endif  // __cplusplus

#endif  /* RESIST_H */
