#ifndef SHAPES_H
#define SHAPES_H

/* Generated by cbindgen from src/lib.rs; do not edit. */

#include <stdarg.h>
#include <stdbool.h>
#include <stddef.h>
#include <stdint.h>
#include <stdlib.h>

typedef enum ShapesStatus {
  SHAPES_STATUS_OK = 0,
  SHAPES_STATUS_NULL_ARGUMENT = 1,
  SHAPES_STATUS_INVALID_UTF8 = 2,
  SHAPES_STATUS_PARSE_ERROR = 3,
  SHAPES_STATUS_SCHEMA_ERROR = 4,
  SHAPES_STATUS_SHAPE_MAP_ERROR = 5,
  SHAPES_STATUS_GENERATE_ERROR = 6,
  SHAPES_STATUS_INDEX_OUT_OF_RANGE = 7,
  SHAPES_STATUS_PANIC = 8,
} ShapesStatus;

/**
 * A parsed RDF graph.
 */
typedef struct ShapesGraph ShapesGraph;

/**
 * Per-pair verdicts of one validation run.
 */
typedef struct ShapesReport ShapesReport;

/**
 * A loaded SHACL shapes graph.
 */
typedef struct ShapesShaclSchema ShapesShaclSchema;

/**
 * A checked ShEx schema.
 */
typedef struct ShapesShexSchema ShapesShexSchema;

/**
 * Node counts, invalid counts and options for [`shapes_generate`].
 * Counts are indexed Country, DataSet, Slice, Observation, Computation,
 * Indicator, Organization.
 */
typedef struct ShapesGenConfig {
  size_t counts[7];
  size_t invalid[7];
  bool typed;
  uint64_t seed;
} ShapesGenConfig;

/**
 * The message of the last failed call on this thread, or null. The
 * pointer stays valid until the next call on the same thread.
 */
const char *shapes_last_error(void);

/**
 * Releases a string returned by this library. Null is ignored.
 *
 * # Safety
 * `s` must come from this library and not be freed twice.
 */
void shapes_string_free(char *s);

/**
 * Parses Turtle text into a graph.
 *
 * # Safety
 * `turtle` must be a nul-terminated string; `out` must be writable.
 */
enum ShapesStatus shapes_graph_parse_turtle(const char *turtle, struct ShapesGraph **out);

/**
 * Number of distinct triples, 0 for null.
 *
 * # Safety
 * `g` must be null or a live graph handle.
 */
size_t shapes_graph_len(const struct ShapesGraph *g);

/**
 * Serializes the graph as Turtle into `*out`.
 *
 * # Safety
 * `g` must be a live graph handle; `out` must be writable.
 */
enum ShapesStatus shapes_graph_to_turtle(const struct ShapesGraph *g, char **out);

/**
 * # Safety
 * `g` must be null or a handle not yet freed.
 */
void shapes_graph_free(struct ShapesGraph *g);

/**
 * Parses and checks a ShExC schema.
 *
 * # Safety
 * `shexc` must be a nul-terminated string; `out` must be writable.
 */
enum ShapesStatus shapes_shex_parse(const char *shexc, struct ShapesShexSchema **out);

/**
 * # Safety
 * `s` must be null or a handle not yet freed.
 */
void shapes_shex_free(struct ShapesShexSchema *s);

/**
 * Loads a SHACL shapes graph written in Turtle.
 *
 * # Safety
 * `turtle` must be a nul-terminated string; `out` must be writable.
 */
enum ShapesStatus shapes_shacl_load(const char *turtle, struct ShapesShaclSchema **out);

/**
 * # Safety
 * `s` must be null or a handle not yet freed.
 */
void shapes_shacl_free(struct ShapesShaclSchema *s);

/**
 * Validates the `node@shape;...` pairs of `shape_map` against a ShEx
 * schema using up to `threads` workers.
 *
 * # Safety
 * Handles must be live; `shape_map` nul-terminated; `out` writable.
 */
enum ShapesStatus shapes_validate_shex(const struct ShapesShexSchema *schema,
                                       const struct ShapesGraph *graph,
                                       const char *shape_map,
                                       size_t threads,
                                       struct ShapesReport **out);

/**
 * Validates against a SHACL schema. A null `shape_map` selects the focus
 * nodes through the schema's scopes.
 *
 * # Safety
 * Handles must be live; `shape_map` null or nul-terminated; `out` writable.
 */
enum ShapesStatus shapes_validate_shacl(const struct ShapesShaclSchema *schema,
                                        const struct ShapesGraph *graph,
                                        const char *shape_map,
                                        size_t threads,
                                        struct ShapesReport **out);

/**
 * Number of (node, shape) results.
 *
 * # Safety
 * `r` must be null or a live report handle.
 */
size_t shapes_report_len(const struct ShapesReport *r);

/**
 * True when every result is conformant; false for null.
 *
 * # Safety
 * `r` must be null or a live report handle.
 */
bool shapes_report_is_conformant(const struct ShapesReport *r);

/**
 * Number of nonconformant results.
 *
 * # Safety
 * `r` must be null or a live report handle.
 */
size_t shapes_report_nonconformant(const struct ShapesReport *r);

/**
 * Writes whether result `index` is conformant into `*conformant`.
 *
 * # Safety
 * `r` must be a live report handle; `conformant` writable.
 */
enum ShapesStatus shapes_report_status(const struct ShapesReport *r,
                                       size_t index,
                                       bool *conformant);

/**
 * The results as JSON lines with compacted IRIs.
 *
 * # Safety
 * `r` must be a live report handle; `out` writable.
 */
enum ShapesStatus shapes_report_jsonl(const struct ShapesReport *r, char **out);

/**
 * # Safety
 * `r` must be null or a handle not yet freed.
 */
void shapes_report_free(struct ShapesReport *r);

/**
 * Generates WebIndex data. `*graph` receives the graph and, when
 * `manifest` is not null, `*manifest` the tab-separated manifest.
 *
 * # Safety
 * `cfg` must point at a config; output pointers writable.
 */
enum ShapesStatus shapes_generate(const struct ShapesGenConfig *cfg,
                                  struct ShapesGraph **graph,
                                  char **manifest);

#endif  /* SHAPES_H */
